#pragma once

// Dirichlet polynomials D(t) = sum alpha(x) x^{-it}, their mean values over
// [-T, T], Dirichlet character tables, Weyl sums and their moments, and the
// Vinogradov-style equal-power-sum counts.
//
// Quadrature policy: mean values use composite Simpson with automatic grid
// sizing from the phase bandwidth plus Richardson error control (method
// Refined); moments of integer-coefficient Weyl sums use a uniform grid fine
// enough that the trapezoid rule is exact for the underlying trigonometric
// polynomial (method NyquistExact, errorEstimate 0).

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ppc/lattice.hpp"

namespace ppc {

struct RealPoint {
    double x = 0.0;  // > 0
    double w = 0.0;
};

std::vector<RealPoint> to_points(std::span<const WeightedPoint> entries);

// sum of w * x^{-it} with Kahan-compensated real/imaginary accumulation.
std::complex<double> dirichlet_poly(std::span<const RealPoint> points, double t);

enum class MomentMethod { NyquistExact, Refined };

struct MomentResult {
    double value = 0.0;
    std::int64_t gridSize = 0;
    double errorEstimate = 0.0;
    MomentMethod method = MomentMethod::Refined;
};

struct MeanValueOptions {
    // When set, D(t) picks up the factor sum over n in (N, 2N] of n^{-it}.
    std::optional<std::int64_t> attachRangeN;
    double pointsPerOsc = 8.0;  // initial samples per shortest oscillation
    double relTol = 1e-6;
    int maxDoublings = 12;
};

// (1/T) * integral over [-T, T] of |D(t)|^2 dt.
MomentResult mean_value_integral(std::span<const RealPoint> points, double T,
                                 const MeanValueOptions& opts = {});

// Closed form of the same integral (sum of 2 w1 w2 sinc(T (ln x1 - ln x2))),
// used as an independent oracle for the quadrature.
double mean_value_closed_form(std::span<const RealPoint> points, double T);

// Counting side of the mean value theorem for D(t): sum of |w1 w2| over
// ordered pairs with |ln x1 - ln x2| <= pi / T (diagonal included).
double mean_value_pair_count(std::span<const RealPoint> points, double T);

struct SandwichResult {
    std::int64_t stilde = 0;   // S~(X_k, alpha, N, 2^k N / T)
    MomentResult integral;     // (1/T) int |A(t) sum_{n~N} n^{-it}|^2
    double ratio = 0.0;        // integral / stilde
};

// Two-sided comparison of the dyadic counting sum against the mean value of
// the attached Dirichlet polynomial; k is the dyadic level of the block.
SandwichResult sum_integral_sandwich(std::span<const WeightedPoint> entries, std::int64_t k,
                                     std::int64_t N, double T);

// Full character group mod a prime q (<= 10^4), built from discrete logs to
// the smallest primitive root.  Row orthogonality is verified at
// construction time.
class CharacterTable {
  public:
    explicit CharacterTable(std::int64_t q);

    std::int64_t q() const { return q_; }
    std::int64_t primitive_root() const { return root_; }
    std::int64_t order() const { return q_ - 1; }  // number of characters

    // character with label a in [0, q-2] evaluated at n (0 when q | n)
    std::complex<double> chi(std::int64_t a, std::int64_t n) const;

  private:
    std::int64_t q_ = 0;
    std::int64_t root_ = 0;
    std::vector<std::int32_t> index_;  // discrete log of residues 1..q-1
};

CharacterTable dirichlet_characters(std::int64_t q);

// sum over all characters of |sum_{J < j <= 2J} chi(j)|^2; equals phi(q) * J
// whenever q > 2J.
double character_window_energy(const CharacterTable& table, std::int64_t J);

std::int64_t smallest_prime_in(std::int64_t lo, std::int64_t hi);

struct AmplificationResult {
    double lhs = 0.0;        // (1/T) int |A * sum_{n~N}|^2
    double rhsTheta1 = 0.0;  // same with the range dilated to (JN, 2JN]
    double rhsTheta2 = 0.0;  // and to (2JN, 4JN]
    std::int64_t theta = 1;  // minimizer
    double ratio = 0.0;      // min over theta of lhs * J / rhs
    std::int64_t q = 0;      // prime in [4J, 8J] backing the construction
};

// Numerical form of the range-dilation inequality: the short-range mean
// value is dominated by 1/J times the long-range one, up to small powers.
AmplificationResult amplification_check(std::span<const WeightedPoint> entries, std::int64_t N,
                                        std::int64_t J, double T);

// sum_{n <= N} e(p(n) x) with e(t) = exp(2 pi i t); coeffs high -> low.
std::complex<double> weyl_sum(std::span<const double> coeffs, std::int64_t N, double x);

// integral over [0,1] of |sum_{n <= N} e(p(n) x)|^{2s}; twoS must be even.
// method defaults to NyquistExact for integer coefficients (exact grid, zero
// error estimate) and Refined otherwise; forcing NyquistExact on non-integer
// coefficients is an error.
MomentResult hua_moment(std::span<const double> coeffs, std::int64_t N, std::int64_t twoS,
                        std::optional<MomentMethod> method = std::nullopt);

// Number of 2s-tuples with sum n_i^j = sum m_i^j for every j = 1..k,
// variables in [1, N].  Meet-in-the-middle over the N^s half-tuples.
std::int64_t vinogradov_count(int k, int s, std::int64_t N);

struct QuadrupleMomentCheck {
    std::int64_t estar = 0;  // quadruples |p(n1)-p(n2)+p(n3)-p(n4)| < 1
    double moment = 0.0;     // fourth moment of the Weyl sum
    double ratio = 0.0;
};

// The approximate energy of an integer polynomial sequence against the
// fourth moment of its Weyl sum; the two agree exactly in exact arithmetic.
QuadrupleMomentCheck quadruple_moment_check(std::span<const double> coeffs, std::int64_t N);

}  // namespace ppc
