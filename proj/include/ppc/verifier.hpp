#pragma once

// Ratio reports for the recursive counting-sum inequalities, the
// pair-correlation criterion sums, and the experiment batteries behind the
// CLI `verify` subcommand.
//
// Each inequality of the form  LHS <= C * RHS(witness)  with an existential
// witness (a dyadic N or L, or theta in {1,2}) is checked by evaluating RHS
// at every admissible witness and reporting the smallest LHS/RHS ratio
// together with the witness that attains it.  The absolute constants are
// never pinned; batteries judge the *stability* of the ratios across a
// doubling ladder instead.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppc/lattice.hpp"

namespace ppc {

struct RatioReport {
    std::string name;
    std::map<std::string, double> params;
    double lhs = 0.0;
    double rhs = 0.0;  // evaluated at the recorded witness
    double ratio = 0.0;
    std::optional<double> witness;
    std::string witnessName;  // "N", "L" or "theta"; empty when not existential
};

// Reports across a doubling parameter ladder.  Each rung may carry several
// reports (a J or theta sweep); driftFactor is the largest growth of the
// per-rung max ratio between adjacent rungs.
struct SweepResult {
    std::string name;
    std::vector<RatioReport> reports;
    std::vector<std::int64_t> scales;     // one per rung, ascending
    std::vector<double> rungMaxRatios;    // max ratio per rung
    double maxRatio = 0.0;
    double driftFactor = 0.0;
};

SweepResult make_sweep(std::string name, const std::vector<std::int64_t>& scales,
                       const std::vector<std::vector<RatioReport>>& rungs);

// S(X,alpha,M,K) against min over dyadic N <= M of sum_k S~(X_k,alpha,N,4K).
RatioReport verify_dyadic_partition(const DifferenceWeights& w, std::int64_t M, double K);

// S~(X_k,alpha,N,JK) against J * S~(X_k,alpha,N,K); ratio <= 8 always.
RatioReport verify_linear(std::span<const WeightedPoint> block, std::int64_t N, double K,
                          std::int64_t J);

// S~(X_k,alpha,N,K) against
//   NK/2^k ||a_k||_1^2 + N/N0 ||a_k||_1^2 + N^(1+eps)/N0 S~(X_k,alpha,L,N0K/N)
// minimized over dyadic L <= 4 N0.
RatioReport verify_decreasing(std::span<const WeightedPoint> block, std::int64_t k,
                              std::int64_t N, double K, std::int64_t N0, double eps = 0.1);

// S~(X_k,alpha,N,K) against (JN)^eps / J * S~(X_k,alpha,theta J N,JK),
// theta in {1,2}.
RatioReport verify_increasing(std::span<const WeightedPoint> block, std::int64_t N, double K,
                              std::int64_t J, double eps = 0.1);

// S~(X_k,alpha,N,K) against N^eps ||a_k||_{2,N/K} S~(X_k,alpha,theta N^2,NK)^(1/2),
// theta in {1,2}.  The N^2-range product array is quadratic, hence the cap
// N <= 64.
RatioReport verify_multiplicative(std::span<const WeightedPoint> block, std::int64_t N, double K,
                                  double eps = 0.1);

// ||a_k||^2_{2,N} against (M/N) ||a_k||^2_{2,M} for N <= M.
RatioReport verify_l2_monotonicity(std::span<const WeightedPoint> block, double N, double M);

// S(X,alpha,M,K) against the three-term bound
//   M^(3/2+eps) K^(1+eps) ||a||_{2,M} sum a(x)/sqrt(x)
//   + (MK)^(1/2+eps) ||a||_1 ||a||_{2,M} + (MK)^(1+eps) ||a||^2_{2,M}.
RatioReport verify_main_bound(const DifferenceWeights& w, std::int64_t M, double K,
                              double eps = 0.1);

struct RtSums {
    std::int64_t sum1 = 0;  // (m, n1 != n2) with m |x_{n1} - x_{n2}| < N^eps
    std::int64_t sum2 = 0;  // signed m1, m2 quadruple count, strict threshold
    std::int64_t M = 0;     // m range actually used, floor(N^(1+eps))
    double threshold = 0.0; // N^eps
};

// The two pair-correlation criterion sums for the first N values of an
// ascending window.  sum2 materializes M * #differences products; N <= 128.
RtSums rt_sums(const SequenceWindow& w, std::int64_t N, double eps);

// Flat key=value config file; '#' comments and blank lines are skipped.
std::map<std::string, std::string> load_config(const std::string& path);

struct BatteryOptions {
    std::string battery;  // ppc-convergence | energy-slopes | prop-harness |
                          // rt-slopes | geometry-sweep
    std::uint64_t seed = 1;
    int threads = 1;
    std::string outDir;
    std::map<std::string, std::string> config;
};

struct BatteryOutcome {
    bool pass = false;
    std::string summaryPath;  // <outDir>/summary.json
    std::string csvPath;      // <outDir>/<battery>.csv
};

// Runs one battery: writes a CSV of raw rows plus summary.json with pass/fail
// per acceptance threshold.  Partial CSV rows are flushed if a run throws.
BatteryOutcome run_battery(const BatteryOptions& opts);

// Convenience wrapper: loads configPath (empty string for defaults) and runs.
BatteryOutcome run_experiment(const std::string& battery, const std::string& configPath,
                              const std::string& outDir, std::uint64_t seed, int threads);

}  // namespace ppc
