#pragma once

// Additive energy counters and the convexity pipeline.
//
// The approximate energy counts quadruples n1,n2,n3,n4 <= N with
//   |x_{n1} - x_{n2} + x_{n3} - x_{n4}| < gamma   (strict),
// evaluated as a near-pair count over the N^2 pairwise sums: the quadruple
// condition is |(x_{n1}+x_{n3}) - (x_{n2}+x_{n4})| < gamma, and both the
// brute-force and two-pointer paths compare exactly that expression, so the
// two methods return identical counts.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ppc/sequences.hpp"

namespace ppc {

enum class EnergyMethod { Brute, TwoPointer, SumMap };

struct EnergyResult {
    std::int64_t N = 0;
    std::optional<double> gamma;  // nullopt: exact equality count
    std::int64_t value = 0;
    EnergyMethod method = EnergyMethod::TwoPointer;
};

// Sum over s of r(s)^2 where r(s) = #{(a1,a2) in A x A : a1 + a2 = s}.
std::int64_t additive_energy_int(const std::vector<std::int64_t>& A);

// Exact quadruple count x_{n1} + x_{n3} = x_{n2} + x_{n4} for integer-valued
// windows (checked; values must be exactly representable integers).
EnergyResult truncated_energy(const SequenceWindow& w, std::int64_t N);

// |{(n1,n2,n3,n4) : |x_{n1}-x_{n2}+x_{n3}-x_{n4}| < gamma}| over the first N
// values.  TwoPointer sorts the N^2 pairwise sums (hard cap N <= 4096);
// Brute is the O(N^4) oracle.
EnergyResult approx_energy(const SequenceWindow& w, std::int64_t N, double gamma,
                           EnergyMethod method = EnergyMethod::TwoPointer);

struct GammaRule {
    enum class Kind { Constant, OneOverN } kind = Kind::Constant;
    double value = 1.0;  // gamma = value, or value / N
    double gamma_for(std::int64_t N) const {
        return kind == Kind::Constant ? value : value / static_cast<double>(N);
    }
};

struct ExponentFit {
    std::vector<std::int64_t> Ns;
    std::vector<double> logValues;  // log2 of the counts
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS residual of the log-log fit
};

// Generates the family at each N, computes the approximate energy, and fits
// log2(value) against log2(N) by least squares.
ExponentFit energy_exponent(const SequenceSpec& spec, const std::vector<std::int64_t>& Ns,
                            const GammaRule& rule);

// Fit helper shared with other slope reports; values must be positive.
ExponentFit fit_loglog(const std::vector<std::int64_t>& Ns, const std::vector<double>& values);

struct UnionEnergyCheck {
    double lhs = 0.0;  // E(union)^{1/4}
    double rhs = 0.0;  // sum of E(A_j)^{1/4}
    bool holds = false;
};

// Subadditivity of E^{1/4} over a disjoint union (error if sets overlap).
UnionEnergyCheck union_energy_check(const std::vector<std::vector<std::int64_t>>& sets);

// gaps x_{n+1} - x_n strictly increasing; needs at least 3 values.
bool is_convex(const std::vector<double>& values);

struct Discretized {
    std::int64_t K = 0;
    std::vector<std::int64_t> X;  // floor(K * x_n)
};

// K = floor(N^Kexp); errors if K < 1 or two floors collide.
Discretized discretize_convex(const SequenceWindow& w, double Kexp);

// Class k (0-based) holds X_j with 1-based index j == k (mod K).
std::vector<std::vector<std::int64_t>> residue_partition(const std::vector<std::int64_t>& X,
                                                         std::int64_t K);

// Sum of (x_{n2} - x_{n1})^{-1/2} over pairs n1 < n2 <= N with difference
// >= 1, accumulated with pairwise reduction.
double growth_sum(const SequenceWindow& w, std::int64_t N);

// r(k) = number of pairs with k <= x_{n2} - x_{n1} < k+1, for k >= 1.
std::map<std::int64_t, std::int64_t> binned_r(const SequenceWindow& w, std::int64_t N);

}  // namespace ppc
