#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "ppc/common.hpp"
#include "test_util.hpp"

using namespace ppc;

TEST_CASE("pairwise_sum sums exactly representable ranges") {
    std::vector<double> xs(1000);
    std::iota(xs.begin(), xs.end(), 1.0);
    CHECK(pairwise_sum(xs) == 500500.0);
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
    CHECK(pairwise_sum(std::vector<double>{3.25}) == 3.25);
}

TEST_CASE("rng is reproducible and derive ignores parent draws") {
    Rng a(42), b(42);
    for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng p1(7), p2(7);
    (void)p1.next_u64();
    (void)p1.next_u64();
    CHECK(p1.derive(3).next_u64() == p2.derive(3).next_u64());
    CHECK(p1.derive(3).next_u64() != p1.derive(4).next_u64());
}

TEST_CASE("rng ranges") {
    Rng r(1);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.u01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const std::int64_t v = r.uniform_int(-3, 5);
        CHECK(v >= -3);
        CHECK(v <= 5);
        const double x = r.uniform(2.0, 4.0);
        CHECK(x >= 2.0);
        CHECK(x < 4.0);
    }
}

TEST_CASE("format_real round-trips doubles exactly") {
    for (const double x : {0.1, 1.0 / 3.0, 1.4142135623730951, 1e300, -7.25e-12, 0.0, -42.0}) {
        CHECK(std::stod(format_real(x)) == x);
    }
    CHECK(format_int(-1234567890123456) == "-1234567890123456");
    CHECK(format_int(0) == "0");
}

TEST_CASE("parallel_for touches every index exactly once") {
    const std::size_t n = 1003;
    for (const int threads : {1, 2, 7}) {
        std::vector<int> hits(n, 0);
        parallel_for(n, threads, [&](std::size_t i) { hits[i]++; });
        CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }
    parallel_for(0, 4, [&](std::size_t) { CHECK(false); });
}

TEST_CASE("resolve_threads prefers the env override") {
    setenv("PAIRCORR_THREADS", "3", 1);
    CHECK(resolve_threads(8) == 3);
    setenv("PAIRCORR_THREADS", "junk", 1);
    CHECK(resolve_threads(8) == 8);
    unsetenv("PAIRCORR_THREADS");
    CHECK(resolve_threads(8) == 8);
    CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("fit_line recovers an exact line") {
    const std::vector<double> x = {1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double xi : x) y.push_back(2.0 * xi + 1.0);
    const LineFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.rmsResidual == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(fit_line(std::vector<double>{1.0}, std::vector<double>{2.0}),
                    ValidationError);
    CHECK_THROWS_AS(fit_line(std::vector<double>{1, 1}, std::vector<double>{2, 3}),
                    ValidationError);
}

TEST_CASE("csv writer emits header plus rows") {
    const std::string path = test_path("writer.csv");
    {
        CsvWriter w(path, {"a", "b"});
        w.row({"1", "2.5"});
        w.row({"-3", "x"});
        w.close();
    }
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "a,b\n1,2.5\n-3,x\n");
}
