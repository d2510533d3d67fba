#include "ppc/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "ppc/common.hpp"

namespace ppc {

namespace {

constexpr std::size_t kProductCap = 50'000'000;  // materialized products

void validate_params(std::int64_t M, double K) {
    if (M < 1) throw ValidationError("counting sum: range bound must be >= 1");
    if (!(K >= 0)) throw ValidationError("counting sum: K must be >= 0");
}

// Merges sorted raw differences into weighted entries.  eps == 0 merges only
// exact duplicates; eps > 0 greedily merges runs measured from the first
// element of the run.
std::vector<WeightedPoint> coalesce(std::vector<double>& xs, double eps) {
    std::sort(xs.begin(), xs.end());
    std::vector<WeightedPoint> out;
    std::size_t i = 0;
    while (i < xs.size()) {
        std::size_t j = i + 1;
        while (j < xs.size() && xs[j] - xs[i] <= eps) ++j;
        out.push_back({xs[i], static_cast<std::int64_t>(j - i)});
        i = j;
    }
    return out;
}

// Shared near-pair accumulator: sum of w_i * w_j over ordered index pairs of
// the sorted product array with |v_i - v_j| <= K (diagonal included).
std::int64_t weighted_near_pairs(const std::vector<double>& v, const std::vector<std::int64_t>& w,
                                 double K) {
    const std::size_t m = v.size();
    std::vector<std::int64_t> pref(m + 1, 0);
    for (std::size_t i = 0; i < m; ++i) pref[i + 1] = pref[i] + w[i];
    std::int64_t total = 0;
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < m; ++i) {
        while (v[i] - v[lo] > K) ++lo;
        if (hi < i) hi = i;
        while (hi + 1 < m && v[hi + 1] - v[i] <= K) ++hi;
        total += w[i] * (pref[hi + 1] - pref[lo]);
    }
    return total;
}

struct ProductArray {
    std::vector<double> v;
    std::vector<std::int64_t> w;
};

// Products m*x for m in [mLo, mHi], one per (m, entry), sorted by value.
ProductArray build_products(std::span<const WeightedPoint> entries, std::int64_t mLo,
                            std::int64_t mHi) {
    const std::size_t count = entries.size() * static_cast<std::size_t>(mHi - mLo + 1);
    if (count > kProductCap)
        throw FeasibilityError("counting sum: would materialize " + format_int(
                                   static_cast<std::int64_t>(count)) +
                               " products (cap " + format_int(static_cast<std::int64_t>(kProductCap)) + ")");
    std::vector<std::pair<double, std::int64_t>> prod;
    prod.reserve(count);
    for (const auto& e : entries)
        for (std::int64_t m = mLo; m <= mHi; ++m)
            prod.emplace_back(static_cast<double>(m) * e.x, e.w);
    std::sort(prod.begin(), prod.end());
    ProductArray pa;
    pa.v.reserve(count);
    pa.w.reserve(count);
    for (const auto& [val, wt] : prod) {
        pa.v.push_back(val);
        pa.w.push_back(wt);
    }
    return pa;
}

// Integer range of m in [mLo, mHi] with |p - m*x| <= K.  Division gives a
// candidate window, widened by 2 and then trimmed with the exact predicate
// so the accepted set matches the brute-force comparisons.
std::pair<std::int64_t, std::int64_t> m_range(double p, double x, double K, std::int64_t mLo,
                                              std::int64_t mHi) {
    std::int64_t lo = static_cast<std::int64_t>(std::ceil((p - K) / x)) - 2;
    std::int64_t hi = static_cast<std::int64_t>(std::floor((p + K) / x)) + 2;
    lo = std::max(lo, mLo);
    hi = std::min(hi, mHi);
    while (lo <= hi && !(std::fabs(p - static_cast<double>(lo) * x) <= K)) ++lo;
    while (hi >= lo && !(std::fabs(p - static_cast<double>(hi) * x) <= K)) --hi;
    return {lo, hi};
}

std::int64_t count_generic(std::span<const WeightedPoint> entries, std::int64_t mLo,
                           std::int64_t mHi, double K, SMethod method) {
    if (entries.empty()) throw ValidationError("counting sum: empty weight set");
    for (const auto& e : entries)
        if (!(e.x > 0) || e.w < 1)
            throw ValidationError("counting sum: entries need x > 0 and weight >= 1");

    switch (method) {
        case SMethod::Brute: {
            std::int64_t total = 0;
            for (const auto& e1 : entries)
                for (std::int64_t m1 = mLo; m1 <= mHi; ++m1) {
                    const double p = static_cast<double>(m1) * e1.x;
                    for (const auto& e2 : entries)
                        for (std::int64_t m2 = mLo; m2 <= mHi; ++m2)
                            if (std::fabs(p - static_cast<double>(m2) * e2.x) <= K)
                                total += e1.w * e2.w;
                }
            return total;
        }
        case SMethod::IntervalPerRow: {
            std::int64_t total = 0;
            for (const auto& e1 : entries)
                for (std::int64_t m1 = mLo; m1 <= mHi; ++m1) {
                    const double p = static_cast<double>(m1) * e1.x;
                    for (const auto& e2 : entries) {
                        const auto [lo, hi] = m_range(p, e2.x, K, mLo, mHi);
                        if (lo <= hi) total += e1.w * e2.w * (hi - lo + 1);
                    }
                }
            return total;
        }
        case SMethod::Auto:
        case SMethod::ProductSort: {
            const ProductArray pa = build_products(entries, mLo, mHi);
            return weighted_near_pairs(pa.v, pa.w, K);
        }
    }
    throw ValidationError("counting sum: unknown method");
}

}  // namespace

DifferenceWeights differences(const SequenceWindow& w, std::int64_t N, double coalesceEps) {
    if (N < 2) throw ValidationError("differences: need N >= 2");
    if (N > w.N)
        throw ValidationError("differences: window holds only " + format_int(w.N) + " values");
    if (!w.sortedAscending) throw ValidationError("differences requires an ascending window");
    if (coalesceEps < 0) throw ValidationError("differences: coalesceEps must be >= 0");
    std::vector<double> diffs;
    diffs.reserve(static_cast<std::size_t>(N) * (static_cast<std::size_t>(N) - 1) / 2);
    for (std::int64_t n1 = 0; n1 < N; ++n1)
        for (std::int64_t n2 = n1 + 1; n2 < N; ++n2) {
            const double d = w.values[static_cast<std::size_t>(n2)] -
                             w.values[static_cast<std::size_t>(n1)];
            if (!(d > 0))
                throw ValidationError("differences: nonpositive difference (duplicate values?)");
            diffs.push_back(d);
        }
    DifferenceWeights dw;
    dw.entries = coalesce(diffs, coalesceEps);
    dw.sourceN = N;
    return dw;
}

DifferenceWeights make_weights(std::vector<WeightedPoint> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const WeightedPoint& a, const WeightedPoint& b) { return a.x < b.x; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!(entries[i].x > 0) || entries[i].w < 1)
            throw ValidationError("weights: entries need x > 0 and weight >= 1");
        if (i && entries[i].x == entries[i - 1].x)
            throw ValidationError("weights: duplicate x value");
    }
    DifferenceWeights dw;
    dw.entries = std::move(entries);
    return dw;
}

std::int64_t l1_norm(std::span<const WeightedPoint> entries) {
    std::int64_t s = 0;
    for (const auto& e : entries) s += e.w;
    return s;
}

std::int64_t l2_norm_sq(std::span<const WeightedPoint> entries, double N) {
    if (!(N > 0)) throw ValidationError("l2_norm_sq: N must be > 0");
    const double thr = 1.0 / N;
    const std::size_t m = entries.size();
    std::vector<std::int64_t> pref(m + 1, 0);
    for (std::size_t i = 0; i < m; ++i) pref[i + 1] = pref[i] + entries[i].w;
    std::int64_t total = 0;
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < m; ++i) {
        while (entries[i].x - entries[lo].x > thr) ++lo;
        if (hi < i) hi = i;
        while (hi + 1 < m && entries[hi + 1].x - entries[i].x <= thr) ++hi;
        total += entries[i].w * (pref[hi + 1] - pref[lo]);
    }
    return total;
}

DyadicDecomposition dyadic_blocks(const DifferenceWeights& w) {
    DyadicDecomposition d;
    std::size_t i = 0;
    while (i < w.entries.size() && w.entries[i].x < 1.0) ++i;
    d.belowOne = i;
    while (i < w.entries.size()) {
        const std::int64_t k =
            static_cast<std::int64_t>(std::floor(std::log2(w.entries[i].x)));
        const double top = std::ldexp(1.0, static_cast<int>(k) + 1);  // 2^(k+1)
        std::size_t j = i;
        while (j < w.entries.size() && w.entries[j].x < top) ++j;
        d.blocks.push_back({k, i, j});
        i = j;
    }
    return d;
}

std::int64_t count_S(const DifferenceWeights& w, std::int64_t M, double K, SMethod method) {
    validate_params(M, K);
    return count_generic(w.entries, 1, M, K, method);
}

std::int64_t count_S_dyadic(std::span<const WeightedPoint> entries, std::int64_t N, double K,
                            SMethod method) {
    validate_params(N, K);
    return count_generic(entries, N + 1, 2 * N, K, method);
}

std::complex<double> count_S_dyadic_beta(std::span<const WeightedPoint> entries, std::int64_t N,
                                         double K,
                                         std::span<const std::complex<double>> beta) {
    validate_params(N, K);
    if (entries.empty()) throw ValidationError("counting sum: empty weight set");
    if (beta.size() != static_cast<std::size_t>(N))
        throw ValidationError("count_S_dyadic_beta: beta must have exactly N entries");
    // products (n*x, alpha(x)*beta(n)) sorted by value; same boundary
    // predicate as the integer path, complex prefix sums for the window.
    struct P {
        double v;
        std::complex<double> g;
    };
    const std::size_t count = entries.size() * static_cast<std::size_t>(N);
    if (count > kProductCap)
        throw FeasibilityError("counting sum: product array exceeds cap");
    std::vector<P> prod;
    prod.reserve(count);
    for (const auto& e : entries)
        for (std::int64_t n = N + 1; n <= 2 * N; ++n)
            prod.push_back({static_cast<double>(n) * e.x,
                            static_cast<double>(e.w) * beta[static_cast<std::size_t>(n - N - 1)]});
    std::sort(prod.begin(), prod.end(), [](const P& a, const P& b) { return a.v < b.v; });
    const std::size_t m = prod.size();
    std::vector<std::complex<double>> pref(m + 1, {0.0, 0.0});
    for (std::size_t i = 0; i < m; ++i) pref[i + 1] = pref[i] + prod[i].g;
    std::complex<double> total{0.0, 0.0};
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < m; ++i) {
        while (prod[i].v - prod[lo].v > K) ++lo;
        if (hi < i) hi = i;
        while (hi + 1 < m && prod[hi + 1].v - prod[i].v <= K) ++hi;
        total += prod[i].g * (pref[hi + 1] - pref[lo]);
    }
    return total;
}

}  // namespace ppc
