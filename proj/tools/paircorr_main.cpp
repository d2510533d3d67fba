#include <string>
#include <vector>

#include "ppc/cli.hpp"

int main(int argc, char** argv) {
    return ppc::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
