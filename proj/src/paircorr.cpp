#include "ppc/paircorr.hpp"

#include <algorithm>
#include <cmath>

#include "ppc/common.hpp"

namespace ppc {

namespace {

// Ordered pairs (i != j) with min(d, 1-d) <= h on sorted u, h <= 1/2.
// Decomposition: forward pairs (u_j - u_i <= h), wraparound pairs
// (1 - (u_j - u_i) <= h), minus pairs satisfying both (possible only when
// h == 1/2 up to rounding).  All three boundaries are located with the same
// expressions the brute-force oracle evaluates.
std::int64_t count_nearest(const std::vector<double>& u, double h) {
    const std::size_t n = u.size();
    std::int64_t unordered = 0;
    std::size_t F = 0;  // last j with u_j - u_i <= h
    std::size_t J = 0;  // first j with 1 - (u_j - u_i) <= h
    for (std::size_t i = 0; i < n; ++i) {
        if (F < i) F = i;
        while (F + 1 < n && u[F + 1] - u[i] <= h) ++F;
        std::size_t Jlo = std::max(J, i + 1);
        while (Jlo < n && !(1.0 - (u[Jlo] - u[i]) <= h)) ++Jlo;
        J = Jlo;
        const std::int64_t fwd = static_cast<std::int64_t>(F - i);
        const std::int64_t wrap = static_cast<std::int64_t>(n - Jlo);
        const std::int64_t both =
            F >= Jlo ? static_cast<std::int64_t>(F - Jlo + 1) : 0;
        unordered += fwd + wrap - both;
    }
    return 2 * unordered;
}

// Ordered pairs (i != j) with (u_i - u_j) mod 1 <= h on sorted u.  For each
// j the matching i split by value: u_i >= u_j uses u_i - u_j directly,
// u_i < u_j wraps with + 1.0.  Both predicates are monotone along the sorted
// array, so partition_point finds the exact boundary.
std::int64_t count_literal(const std::vector<double>& u, double h) {
    const std::size_t n = u.size();
    std::int64_t total = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double uj = u[j];
        const auto pos = std::lower_bound(u.begin(), u.end(), uj) - u.begin();
        // i with u_i >= u_j: predicate u_i - u_j <= h holds on a prefix
        const auto hiEnd = std::partition_point(
            u.begin() + pos, u.end(), [&](double ui) { return ui - uj <= h; });
        std::int64_t c = static_cast<std::int64_t>(hiEnd - (u.begin() + pos));
        // i with u_i < u_j: predicate (u_i - u_j) + 1 <= h holds on a prefix
        const auto loEnd = std::partition_point(
            u.begin(), u.begin() + pos, [&](double ui) { return (ui - uj) + 1.0 <= h; });
        c += static_cast<std::int64_t>(loEnd - u.begin());
        total += c - 1;  // remove the self pair i == j
    }
    return total;
}

double threshold_for(double s, std::int64_t N, PpcConvention conv) {
    if (!(s > 0)) throw ValidationError("pair correlation: s must be > 0");
    const double h = s / static_cast<double>(N);
    if (conv == PpcConvention::NearestIntegerDistance && h > 0.5)
        throw ValidationError("pair correlation: s/N must be <= 1/2 under the nearest-integer convention");
    return h;
}

}  // namespace

std::vector<double> reduce_mod1(const std::vector<double>& values, double scale) {
    std::vector<double> u;
    u.reserve(values.size());
    for (double x : values) {
        const double y = scale * x;
        double f = y - std::floor(y);
        // rounding can leave f a hair below 1; treat that as 0
        if (1.0 - f <= 1e-15) f = 0.0;
        u.push_back(f);
    }
    return u;
}

PairCorrStat pair_correlation(const SequenceWindow& w, double s, const PairCorrConfig& cfg) {
    const double h = threshold_for(s, w.N, cfg.convention);
    std::vector<double> u = reduce_mod1(w.values, cfg.scaleAlpha);
    std::sort(u.begin(), u.end());
    PairCorrStat st;
    st.s = s;
    st.count = cfg.convention == PpcConvention::NearestIntegerDistance ? count_nearest(u, h)
                                                                       : count_literal(u, h);
    st.R = static_cast<double>(st.count) / static_cast<double>(w.N);
    return st;
}

PairCorrStat pair_correlation_brute(const SequenceWindow& w, double s, const PairCorrConfig& cfg) {
    const double h = threshold_for(s, w.N, cfg.convention);
    const std::vector<double> u = reduce_mod1(w.values, cfg.scaleAlpha);
    const std::size_t n = u.size();
    std::int64_t count = 0;
    if (cfg.convention == PpcConvention::NearestIntegerDistance) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double d = std::fabs(u[i] - u[j]);
                if (d <= h || 1.0 - d <= h) count += 2;
            }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                double d = u[i] - u[j];
                if (d < 0) d = d + 1.0;
                if (d <= h) ++count;
            }
    }
    PairCorrStat st;
    st.s = s;
    st.count = count;
    st.R = static_cast<double>(count) / static_cast<double>(w.N);
    return st;
}

PairCorrCurve pair_correlation_curve(const SequenceWindow& w, const PairCorrConfig& cfg) {
    if (cfg.sGrid.empty()) throw ValidationError("pair correlation: empty s grid");
    for (std::size_t i = 0; i < cfg.sGrid.size(); ++i) {
        if (!(cfg.sGrid[i] > 0)) throw ValidationError("pair correlation: s grid must be positive");
        if (i && !(cfg.sGrid[i] > cfg.sGrid[i - 1]))
            throw ValidationError("pair correlation: s grid must be strictly ascending");
    }
    std::vector<double> u = reduce_mod1(w.values, cfg.scaleAlpha);
    std::sort(u.begin(), u.end());
    PairCorrCurve curve;
    curve.N = w.N;
    curve.config = cfg;
    for (double s : cfg.sGrid) {
        const double h = threshold_for(s, w.N, cfg.convention);
        PairCorrStat st;
        st.s = s;
        st.count = cfg.convention == PpcConvention::NearestIntegerDistance
                       ? count_nearest(u, h)
                       : count_literal(u, h);
        st.R = static_cast<double>(st.count) / static_cast<double>(w.N);
        curve.rows.push_back(st);
    }
    return curve;
}

double ppc_deviation(const PairCorrCurve& curve) {
    double worst = 0.0;
    for (const auto& row : curve.rows)
        worst = std::max(worst, std::fabs(row.R / (2.0 * row.s) - 1.0));
    return worst;
}

}  // namespace ppc
