#pragma once

// Shared helpers for the unit tests: ad-hoc windows with explicit values and
// a scratch directory for file-based tests.

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "ppc/sequences.hpp"

inline ppc::SequenceWindow window_of(std::vector<double> values) {
    ppc::SequenceWindow w;
    w.N = static_cast<std::int64_t>(values.size());
    w.sortedAscending =
        !values.empty() &&
        std::adjacent_find(values.begin(), values.end(),
                           [](double a, double b) { return !(a < b); }) == values.end();
    w.values = std::move(values);
    return w;
}

inline std::string test_path(const std::string& name) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "paircorr-unit";
    fs::create_directories(dir);
    return (dir / name).string();
}
