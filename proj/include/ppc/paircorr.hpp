#pragma once

// Pair correlation statistics on the unit circle.  Values are scaled,
// reduced mod 1, and pairs within s/N are counted under one of two
// conventions:
//   NearestIntegerDistance  min(d, 1-d)     (symmetric, the default)
//   LiteralFractionalPart   (u1 - u2) mod 1 (one-sided)
// The O(N log N) counters and the O(N^2) brute-force oracle evaluate the
// same floating-point expressions, so their counts agree exactly, not just
// approximately.

#include <cstdint>
#include <vector>

#include "ppc/sequences.hpp"

namespace ppc {

enum class PpcConvention { NearestIntegerDistance, LiteralFractionalPart };

struct PairCorrConfig {
    std::vector<double> sGrid;  // ascending, positive
    PpcConvention convention = PpcConvention::NearestIntegerDistance;
    double scaleAlpha = 1.0;
};

struct PairCorrStat {
    double s = 0.0;
    std::int64_t count = 0;  // ordered pairs n1 != n2
    double R = 0.0;          // count / N
};

struct PairCorrCurve {
    std::int64_t N = 0;
    PairCorrConfig config;
    std::vector<PairCorrStat> rows;
};

// frac(scale * x) per value, clamped to 0 when within 1e-15 of 1.0.
std::vector<double> reduce_mod1(const std::vector<double>& values, double scale);

PairCorrStat pair_correlation(const SequenceWindow& w, double s, const PairCorrConfig& cfg);
PairCorrStat pair_correlation_brute(const SequenceWindow& w, double s, const PairCorrConfig& cfg);

// One reduction and sort shared across the whole s grid.
PairCorrCurve pair_correlation_curve(const SequenceWindow& w, const PairCorrConfig& cfg);

// max over rows of |R/(2s) - 1|; the Poissonian limit drives this to 0.
double ppc_deviation(const PairCorrCurve& curve);

}  // namespace ppc
