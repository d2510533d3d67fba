#pragma once

// Geometry-of-numbers checks for the convex symmetric body
//   B(x1, x2, N, K) = { y in [-2N, 2N]^2 : |x1 y1 - x2 y2| <= K }
// with gauge F(v) = max(|v1|/(2N), |v2|/(2N), |x1 v1 - x2 v2|/K).
//
// Successive minima are computed exactly: a Lagrange-Gauss reduction of the
// quadratic form (v1/2N)^2 + (v2/2N)^2 + ((x1 v1 - x2 v2)/K)^2 gives an upper
// bound on lambda2, which in turn bounds the integer enumeration region.

#include <array>
#include <cstdint>

namespace ppc {

struct LatticeBody {
    double x1 = 1.0;
    double x2 = 1.0;
    double N = 1.0;
    double K = 1.0;
};

using Vec2 = std::array<std::int64_t, 2>;

// F(v) as above; errors on the zero vector or nonpositive body parameters.
double gauge(const LatticeBody& b, const Vec2& v);

struct GaussBasis {
    Vec2 b1{1, 0};
    Vec2 b2{0, 1};
    double q1 = 0.0;  // form value of b1 (the form's first minimum)
    double q2 = 0.0;  // form value of b2 (second minimum)
};

// Reduces the standard basis under the positive definite form with Gram
// entries (g11, g12; g12, g22).  Output satisfies q(b1) <= q(b2) <= q(b2 +- b1).
GaussBasis gauss_reduce(double g11, double g12, double g22);

struct MinimaResult {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    Vec2 v1{0, 0};
    Vec2 v2{0, 0};
    std::int64_t searchBound = 0;  // enumeration box half-width actually used
};

// Exact minima with deterministic tie-breaking: attainers are sign-normalized
// (v1 > 0, or v1 == 0 and v2 > 0) and compared by (gauge, |v1|, |v2|, v1, v2).
MinimaResult successive_minima(const LatticeBody& b);

struct BodyArea {
    double area = 0.0;
    double stripBound = 0.0;  // 4 * (2N) * K / x1, the enclosing parallelogram
};

BodyArea body_area(const LatticeBody& b);

// |B intersect Z^2|; requires 2N <= 10^4.
std::int64_t lattice_point_count(const LatticeBody& b);

struct MinkowskiCheck {
    double area = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double product = 0.0;  // area * lambda1 * lambda2, must land in [2, 4]
    bool inWindow = false;
};

MinkowskiCheck minkowski_check(const LatticeBody& b);

struct CountVsMinima {
    std::int64_t count = 0;
    double bound = 0.0;  // max(1, 1/lambda1) * max(1, 1/lambda2)
    double ratio = 0.0;  // count / bound
};

CountVsMinima count_vs_minima_check(const LatticeBody& b);

}  // namespace ppc
