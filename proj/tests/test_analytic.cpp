#include "ppc/analytic.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "doctest.h"
#include "ppc/common.hpp"
#include "ppc/energy.hpp"
#include "test_util.hpp"

using namespace ppc;

namespace {

std::vector<RealPoint> points_of(std::vector<RealPoint> pts) { return pts; }

}  // namespace

// -------------------------------------------------------------------------
// Dirichlet polynomials and mean values
// -------------------------------------------------------------------------

TEST_CASE("dirichlet polynomial values") {
    const auto pts = points_of({{2.718281828459045, 2.0}});
    CHECK(dirichlet_poly(pts, 0.0) == std::complex<double>(2.0, 0.0));
    // x = e: x^{-it} = e^{-it}, so t = pi lands at -1
    const std::complex<double> at_pi = dirichlet_poly(pts, 3.141592653589793);
    CHECK(at_pi.real() == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(at_pi.imag() == doctest::Approx(0.0).epsilon(1e-12));
    // conjugate symmetry
    const auto mixed = points_of({{1.0, 1.0}, {3.0, 2.0}});
    const std::complex<double> plus = dirichlet_poly(mixed, 1.7);
    const std::complex<double> minus = dirichlet_poly(mixed, -1.7);
    CHECK(plus.real() == doctest::Approx(minus.real()).epsilon(1e-14));
    CHECK(plus.imag() == doctest::Approx(-minus.imag()).epsilon(1e-14));
    CHECK_THROWS_AS(dirichlet_poly({}, 0.0), ValidationError);
}

TEST_CASE("mean value of a single point is 2 w^2") {
    const auto pts = points_of({{7.0, 3.0}});
    CHECK(mean_value_closed_form(pts, 5.0) == doctest::Approx(18.0).epsilon(1e-14));
    const MomentResult r = mean_value_integral(pts, 5.0);
    CHECK(r.value == doctest::Approx(18.0).epsilon(1e-9));
}

TEST_CASE("off-diagonal terms vanish when T log-ratios hit multiples of 2 pi") {
    // T (ln x2 - ln x1) = 2 pi exactly kills the cross sinc term
    const auto pts = points_of({{1.0, 1.0}, {std::exp(2.0), 1.0}});
    CHECK(mean_value_closed_form(pts, 3.141592653589793) == doctest::Approx(4.0).epsilon(1e-12));
    const MomentResult r = mean_value_integral(pts, 3.141592653589793);
    CHECK(r.value == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("quadrature tracks the closed form on random point sets") {
    Rng rng(20240810);
    for (int iter = 0; iter < 12; ++iter) {
        std::vector<RealPoint> pts;
        const int sz = static_cast<int>(rng.uniform_int(3, 8));
        double x = 1.0;
        for (int i = 0; i < sz; ++i) {
            x += rng.uniform(0.3, 8.0);
            pts.push_back({x, static_cast<double>(rng.uniform_int(1, 3))});
        }
        const double T = 20.0;
        const double closed = mean_value_closed_form(pts, T);
        const MomentResult r = mean_value_integral(pts, T);
        REQUIRE(closed > 0.0);
        CHECK(r.value == doctest::Approx(closed).epsilon(1e-4));
        CHECK(r.errorEstimate >= 0.0);
        CHECK(r.gridSize >= 2);
    }
}

TEST_CASE("attaching a dyadic range multiplies in the range polynomial") {
    // alpha = {1}, attached n in (2, 4]: same as the plain point set {3, 4}
    const auto alpha = points_of({{1.0, 1.0}});
    MeanValueOptions opts;
    opts.attachRangeN = 2;
    const MomentResult attached = mean_value_integral(alpha, 6.0, opts);
    const double direct = mean_value_closed_form(points_of({{3.0, 1.0}, {4.0, 1.0}}), 6.0);
    CHECK(attached.value == doctest::Approx(direct).epsilon(1e-5));
}

TEST_CASE("pair count flips when the threshold crosses ln sqrt2") {
    const auto pts = points_of({{1.0, 1.0}, {std::sqrt(2.0), 1.0}});
    // pi/10 < ln sqrt2 < pi/9
    CHECK(mean_value_pair_count(pts, 10.0) == 2.0);
    CHECK(mean_value_pair_count(pts, 9.0) == 4.0);
    CHECK_THROWS_AS(mean_value_pair_count(pts, 0.0), ValidationError);
}

// -------------------------------------------------------------------------
// sum-integral sandwich
// -------------------------------------------------------------------------

TEST_CASE("sandwich on a hand-counted block") {
    // K = 2^0 * 8 / 50 = 0.16; diagonals give 32 + 8, and 1.5 * 10 = 15
    // matches n1 = 15 in both orders for 4 more
    const DifferenceWeights d = make_weights({{1.0, 2}, {1.5, 1}});
    const SandwichResult s = sum_integral_sandwich(d.entries, 0, 8, 50.0);
    CHECK(s.stilde == 44);
    CHECK(s.ratio == doctest::Approx(s.integral.value / 44.0).epsilon(1e-12));
    CHECK(s.ratio > 0.0);
}

TEST_CASE("sandwich ratio is stable under doubling T") {
    const DifferenceWeights d = make_weights({{4.5, 1}, {5.0, 2}, {6.7, 1}});
    const SandwichResult a = sum_integral_sandwich(d.entries, 2, 8, 16.0);
    const SandwichResult b = sum_integral_sandwich(d.entries, 2, 8, 32.0);
    REQUIRE(a.ratio > 0.0);
    REQUIRE(b.ratio > 0.0);
    CHECK(b.ratio / a.ratio < 4.0);
    CHECK(a.ratio / b.ratio < 4.0);
    CHECK_THROWS_AS(sum_integral_sandwich({}, 0, 4, 8.0), ValidationError);
}

// -------------------------------------------------------------------------
// Dirichlet characters
// -------------------------------------------------------------------------

TEST_CASE("characters mod 3") {
    const CharacterTable t = dirichlet_characters(3);
    CHECK(t.q() == 3);
    CHECK(t.order() == 2);
    CHECK(t.chi(0, 1) == std::complex<double>(1.0, 0.0));
    CHECK(t.chi(0, 2).real() == doctest::Approx(1.0));
    CHECK(t.chi(1, 2).real() == doctest::Approx(-1.0));  // the Legendre symbol
    CHECK(t.chi(1, 3) == std::complex<double>(0.0, 0.0));
    // periodicity
    CHECK(t.chi(1, 5).real() == doctest::Approx(t.chi(1, 2).real()));
}

TEST_CASE("characters mod 5") {
    const CharacterTable t = dirichlet_characters(5);
    CHECK(t.primitive_root() == 2);
    // chi_1(2) = e^{2 pi i / 4} = i
    CHECK(t.chi(1, 2).real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(t.chi(1, 2).imag() == doctest::Approx(1.0).epsilon(1e-12));
    // column orthogonality: sum over characters at n != 1 vanishes
    std::complex<double> col = 0.0;
    for (std::int64_t a = 0; a < t.order(); ++a) col += t.chi(a, 2);
    CHECK(std::abs(col) == doctest::Approx(0.0).epsilon(1e-12));
    // row orthogonality: non-principal characters sum to 0 over a period
    for (std::int64_t a = 1; a < t.order(); ++a) {
        std::complex<double> row = 0.0;
        for (std::int64_t n = 1; n <= 5; ++n) row += t.chi(a, n);
        CHECK(std::abs(row) == doctest::Approx(0.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(t.chi(4, 1), ValidationError);   // labels stop at q-2
    CHECK_THROWS_AS(t.chi(-1, 1), ValidationError);
}

TEST_CASE("character table rejects bad moduli") {
    CHECK_THROWS_AS(dirichlet_characters(4), ValidationError);
    CHECK_THROWS_AS(dirichlet_characters(9), ValidationError);
    CHECK_THROWS_AS(dirichlet_characters(1), ValidationError);
    CHECK_THROWS_AS(dirichlet_characters(10007), ValidationError);  // above the cap
}

TEST_CASE("window energy equals phi(q) J for q > 2J and follows residues otherwise") {
    CHECK(character_window_energy(dirichlet_characters(7), 3) == doctest::Approx(18.0));
    // q = 5, J = 10: residues 1..4 each appear twice in (10, 20], zeros drop
    CHECK(character_window_energy(dirichlet_characters(5), 10) == doctest::Approx(64.0));
    CHECK_THROWS_AS(character_window_energy(dirichlet_characters(7), 0), ValidationError);
}

TEST_CASE("smallest prime in a range") {
    CHECK(smallest_prime_in(4, 10) == 5);
    CHECK(smallest_prime_in(2, 2) == 2);
    CHECK(smallest_prime_in(90, 100) == 97);
    CHECK_THROWS_AS(smallest_prime_in(24, 28), ValidationError);
}

TEST_CASE("amplification report is internally consistent") {
    const DifferenceWeights d = make_weights({{1.0, 1}, {std::sqrt(2.0), 1}});
    const AmplificationResult r = amplification_check(d.entries, 4, 2, 32.0);
    CHECK(r.q == 11);  // smallest prime in [8, 16]
    CHECK((r.theta == 1 || r.theta == 2));
    REQUIRE(r.rhsTheta1 > 0.0);
    REQUIRE(r.rhsTheta2 > 0.0);
    const double viaTheta1 = r.lhs * 2.0 / r.rhsTheta1;
    const double viaTheta2 = r.lhs * 2.0 / r.rhsTheta2;
    CHECK(r.ratio == doctest::Approx(std::min(viaTheta1, viaTheta2)).epsilon(1e-12));
    CHECK(r.ratio == doctest::Approx(r.theta == 1 ? viaTheta1 : viaTheta2).epsilon(1e-12));
    CHECK_THROWS_AS(amplification_check(d.entries, 0, 2, 32.0), ValidationError);
}

// -------------------------------------------------------------------------
// Weyl sums and moments
// -------------------------------------------------------------------------

TEST_CASE("weyl sum special values") {
    const std::vector<double> linear{1.0, 0.0};  // p(n) = n
    CHECK(weyl_sum(linear, 5, 0.0) == std::complex<double>(5.0, 0.0));
    // e(1/2) + e(1) = -1 + 1
    const std::complex<double> z = weyl_sum(linear, 2, 0.5);
    CHECK(z.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(z.imag() == doctest::Approx(0.0).epsilon(1e-12));
    // |W| <= N always
    Rng rng(20240811);
    const std::vector<double> cubic{2.0, 0.0, 1.0, 0.0};
    for (int iter = 0; iter < 20; ++iter) {
        const double x = rng.u01();
        CHECK(std::abs(weyl_sum(cubic, 8, x)) <= 8.0 + 1e-12);
    }
    // integer polynomials make the sum 1-periodic in x
    const std::complex<double> a = weyl_sum(cubic, 6, 0.3);
    const std::complex<double> b = weyl_sum(cubic, 6, 1.3);
    CHECK(a.real() == doctest::Approx(b.real()).epsilon(1e-9));
    CHECK(a.imag() == doctest::Approx(b.imag()).epsilon(1e-9));
    CHECK_THROWS_AS(weyl_sum({}, 3, 0.5), ValidationError);
}

TEST_CASE("hua moment exact values") {
    const std::vector<double> cubic{1.0, 0.0, 0.0, 0.0};  // n^3
    // N = 2, 2s = 12: multiset of six values from {1, 8} must match, so the
    // count is binom(12, 6)
    const MomentResult twelve = hua_moment(cubic, 2, 12);
    CHECK(twelve.value == doctest::Approx(924.0).epsilon(1e-12));
    CHECK(twelve.errorEstimate == 0.0);
    CHECK(twelve.method == MomentMethod::NyquistExact);
    CHECK(twelve.gridSize == 97);  // 12 * max|p| + 1 = 12 * 8 + 1

    // N = 4, 2s = 4: cube sums are distinct, so 4 diagonal + 12 paired
    CHECK(hua_moment(cubic, 4, 4).value == doctest::Approx(28.0).epsilon(1e-12));

    // N = 1: single unimodular term
    CHECK(hua_moment(cubic, 1, 4).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hua moment against an in-test equal-sum oracle") {
    const std::vector<double> square{1.0, 0.0, 0.0};  // n^2
    for (const std::int64_t N : {3, 5, 6}) {
        std::map<std::int64_t, std::int64_t> sums;
        for (std::int64_t n1 = 1; n1 <= N; ++n1)
            for (std::int64_t n2 = 1; n2 <= N; ++n2) ++sums[n1 * n1 + n2 * n2];
        std::int64_t quadruples = 0;
        for (const auto& [s, c] : sums) quadruples += c * c;
        CHECK(hua_moment(square, N, 4).value ==
              doctest::Approx(static_cast<double>(quadruples)).epsilon(1e-10));
    }
}

TEST_CASE("refined quadrature agrees with the exact grid") {
    const std::vector<double> linear{1.0, 0.0};
    const MomentResult exact = hua_moment(linear, 3, 2);  // = N
    CHECK(exact.value == doctest::Approx(3.0).epsilon(1e-12));
    const MomentResult refined = hua_moment(linear, 3, 2, MomentMethod::Refined);
    CHECK(refined.method == MomentMethod::Refined);
    CHECK(refined.value == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("hua moment validation") {
    const std::vector<double> frac{1.5, 0.0};
    CHECK_NOTHROW(hua_moment(frac, 3, 2));  // falls back to Refined
    CHECK_THROWS_AS(hua_moment(frac, 3, 2, MomentMethod::NyquistExact), ValidationError);
    const std::vector<double> linear{1.0, 0.0};
    CHECK_THROWS_AS(hua_moment(linear, 3, 3), ValidationError);   // odd power
    CHECK_THROWS_AS(hua_moment(linear, 3, 0), ValidationError);
    CHECK_THROWS_AS(hua_moment(linear, 0, 2), ValidationError);
}

// -------------------------------------------------------------------------
// equal power sums
// -------------------------------------------------------------------------

TEST_CASE("vinogradov counts on small systems") {
    // k = 1, s = 2, N = 2: sums 2,3,4 with counts 1,2,1
    CHECK(vinogradov_count(1, 2, 2) == 6);
    // s = 1: only the diagonal n = m
    CHECK(vinogradov_count(2, 1, 7) == 7);
    // k = 2, s = 2: equal multisets, so N + 2 N (N-1)
    CHECK(vinogradov_count(2, 2, 3) == 15);
    // diagonal lower bound
    CHECK(vinogradov_count(3, 2, 4) >= 16);
    CHECK_THROWS_AS(vinogradov_count(0, 2, 3), ValidationError);
}

TEST_CASE("vinogradov count matches the k=1 moment") {
    const std::vector<double> linear{1.0, 0.0};
    for (const std::int64_t N : {2, 3, 5}) {
        const double moment = hua_moment(linear, N, 4).value;
        CHECK(moment == doctest::Approx(static_cast<double>(vinogradov_count(1, 2, N)))
                            .epsilon(1e-10));
    }
}

TEST_CASE("quadruple count equals the fourth moment for integer polynomials") {
    const std::vector<double> square{1.0, 0.0, 0.0};
    const QuadrupleMomentCheck one = quadruple_moment_check(square, 1);
    CHECK(one.estar == 1);
    CHECK(one.ratio == doctest::Approx(1.0).epsilon(1e-12));

    const QuadrupleMomentCheck six = quadruple_moment_check(square, 6);
    CHECK(six.ratio == doctest::Approx(1.0).epsilon(1e-9));
    // the quadruple side is the strict-gamma energy count at gamma = 1
    const SequenceWindow w = generate(parse_sequence_spec("poly:1,0,0"), 6);
    CHECK(six.estar == approx_energy(w, 6, 1.0, EnergyMethod::Brute).value);
}
