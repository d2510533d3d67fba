#pragma once

// Sequence generators and window handling.  A window is the first N terms of
// a sequence in natural index order; several downstream operations require
// ascending values and check the sortedAscending flag instead of silently
// sorting (divisor sums, for example, are not monotone in n).

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace ppc {

struct PowerSpec {
    double alpha = 1.0;  // scale, > 0
    double theta = 2.0;  // exponent, > 0
};

// Real coefficients, highest degree first.  Degree >= 2 with nonzero leading
// coefficient; evaluated by Horner at n = 1..N.
struct PolynomialSpec {
    std::vector<double> coeffs;
};

// Gap recursion g_1 = c, g_n = g_{n-1} + c * n^gapExponent; the window holds
// the cumulative sums.  Gaps grow strictly, so the values are convex.
struct ConvexSyntheticSpec {
    double c = 1.0;
    double gapExponent = -0.25;
};

// x_n = alpha * sigma_beta(n) where sigma_beta(n) = sum of d^beta over d | n.
// Values come in natural order of n and are generally NOT ascending.
struct SigmaBetaSpec {
    double alpha = 1.0;
    double beta = 1.0;
};

struct ExternalSpec {
    std::string path;
};

using SequenceSpec =
    std::variant<PowerSpec, PolynomialSpec, ConvexSyntheticSpec, SigmaBetaSpec, ExternalSpec>;

struct SequenceWindow {
    std::int64_t N = 0;
    std::vector<double> values;  // natural index order, values[i] = x_{i+1}
    SequenceSpec spec;
    bool sortedAscending = false;  // strictly increasing
};

SequenceWindow generate(const SequenceSpec& spec, std::int64_t N);

// Parses the CLI mini-language:
//   power:alpha=1.414,theta=2
//   poly:1,0,0           (coefficients high -> low)
//   sigma:alpha=1,beta=1
//   convex:c=1,e=-0.25
SequenceSpec parse_sequence_spec(const std::string& text);
std::string spec_to_string(const SequenceSpec& spec);

// True iff x_{n+1} - x_n >= c * n^(eta-1) for all 1 <= n < N.
// Requires an ascending window.
bool check_spacing(const SequenceWindow& w, double c, double eta);

// Number of n <= N with x_n in [X, X+H].  Works on any window.
std::int64_t short_interval_count(const SequenceWindow& w, double X, double H);

// One real per line; blank lines and lines starting with '#' are skipped.
// Errors carry the 1-based line number.
SequenceWindow load_sequence(const std::string& path);
void write_sequence_file(const SequenceWindow& w, const std::string& path);

// Number of values that coincide with an earlier one (0 means all distinct).
std::int64_t duplicate_count(const SequenceWindow& w);

// Same values sorted ascending; keeps the spec, sets sortedAscending when the
// sorted values are strictly increasing (i.e. no duplicates).
SequenceWindow sorted_copy(const SequenceWindow& w);

}  // namespace ppc
