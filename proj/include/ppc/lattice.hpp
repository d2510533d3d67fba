#pragma once

// Weighted difference sets and the bilinear counting sums built on them.
//
//   S(X, alpha, M, K)          = sum of alpha(x1) alpha(x2) over
//                                1 <= m1, m2 <= M, |m1 x1 - m2 x2| <= K
//   S~(X_k, alpha, N, K)       = same with m_i replaced by n_i in (N, 2N],
//                                optionally carrying complex coefficients
//                                beta(n1) beta(n2)
//
// The boundary is non-strict (<= K) throughout.  All three S methods locate
// boundaries with the same floating-point comparison |p1 - p2| <= K, so
// Brute, IntervalPerRow and ProductSort return identical integers.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ppc/sequences.hpp"

namespace ppc {

struct WeightedPoint {
    double x = 0.0;
    std::int64_t w = 0;
};

// Positive pairwise differences of an ascending window, sorted, with exact
// duplicates (or near-duplicates within coalesceEps) merged into weights.
struct DifferenceWeights {
    std::vector<WeightedPoint> entries;  // ascending x, positive weights
    std::int64_t sourceN = 0;
};

DifferenceWeights differences(const SequenceWindow& w, std::int64_t N, double coalesceEps = 0.0);

// Builds weights directly from (x, w) pairs; sorts and validates.
DifferenceWeights make_weights(std::vector<WeightedPoint> entries);

std::int64_t l1_norm(std::span<const WeightedPoint> entries);

// ||alpha||^2_{2,N}: sum of w(x1) w(x2) over ordered pairs with
// |x1 - x2| <= 1/N, diagonal included.  Exact integer.
std::int64_t l2_norm_sq(std::span<const WeightedPoint> entries, double N);

struct DyadicBlock {
    std::int64_t k = 0;     // covers x in [2^k, 2^(k+1))
    std::size_t begin = 0;  // index range into the source entries
    std::size_t end = 0;
};

struct DyadicDecomposition {
    std::vector<DyadicBlock> blocks;
    std::size_t belowOne = 0;  // entries [0, belowOne) have x < 1
};

DyadicDecomposition dyadic_blocks(const DifferenceWeights& w);

inline std::span<const WeightedPoint> block_entries(const DifferenceWeights& w,
                                                    const DyadicBlock& b) {
    return std::span<const WeightedPoint>(w.entries).subspan(b.begin, b.end - b.begin);
}

enum class SMethod { Auto, Brute, IntervalPerRow, ProductSort };

// S(X, alpha, M, K) over 1 <= m1, m2 <= M.
std::int64_t count_S(const DifferenceWeights& w, std::int64_t M, double K,
                     SMethod method = SMethod::Auto);

// S~ over n1, n2 in (N, 2N] for one dyadic block (or any entry span).
std::int64_t count_S_dyadic(std::span<const WeightedPoint> entries, std::int64_t N, double K,
                            SMethod method = SMethod::Auto);

// S~ with coefficients: adds beta(n1) * beta(n2) (no conjugation; the result
// is real whenever beta is real).  beta[i] belongs to n = N + 1 + i.
std::complex<double> count_S_dyadic_beta(std::span<const WeightedPoint> entries, std::int64_t N,
                                         double K, std::span<const std::complex<double>> beta);

}  // namespace ppc
