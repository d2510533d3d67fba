#include "ppc/energy.hpp"

#include <algorithm>
#include <cmath>

#include "ppc/common.hpp"

namespace ppc {

namespace {

constexpr std::int64_t kTwoPointerCapN = 4096;

void require_prefix(const SequenceWindow& w, std::int64_t N) {
    if (N < 1) throw ValidationError("N must be >= 1");
    if (N > w.N)
        throw ValidationError("window holds only " + format_int(w.N) + " values, requested N=" +
                              format_int(N));
}

// Ordered pairs (i,j), i == j allowed, with |s_i - s_j| < gamma on a sorted
// array.  Both window edges are located with single-subtraction comparisons,
// matching the brute-force expression |t1 - t2| < gamma bit for bit.
std::int64_t near_pair_count_strict(const std::vector<double>& sums, double gamma) {
    const std::size_t m = sums.size();
    std::int64_t total = 0;
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < m; ++i) {
        while (sums[i] - sums[lo] >= gamma) ++lo;
        if (hi < i) hi = i;
        while (hi + 1 < m && sums[hi + 1] - sums[i] < gamma) ++hi;
        total += static_cast<std::int64_t>(hi - lo + 1);
    }
    return total;
}

}  // namespace

std::int64_t additive_energy_int(const std::vector<std::int64_t>& A) {
    const std::size_t n = A.size();
    if (n == 0) return 0;
    if (n > static_cast<std::size_t>(kTwoPointerCapN))
        throw FeasibilityError("additive_energy_int: set size capped at " +
                               format_int(kTwoPointerCapN));
    std::vector<std::int64_t> sums;
    sums.reserve(n * n);
    for (std::int64_t a : A)
        for (std::int64_t b : A) sums.push_back(a + b);
    std::sort(sums.begin(), sums.end());
    std::int64_t energy = 0;
    std::size_t i = 0;
    while (i < sums.size()) {
        std::size_t j = i;
        while (j < sums.size() && sums[j] == sums[i]) ++j;
        const std::int64_t run = static_cast<std::int64_t>(j - i);
        energy += run * run;
        i = j;
    }
    return energy;
}

EnergyResult truncated_energy(const SequenceWindow& w, std::int64_t N) {
    require_prefix(w, N);
    std::vector<std::int64_t> ints;
    ints.reserve(static_cast<std::size_t>(N));
    for (std::int64_t n = 0; n < N; ++n) {
        const double v = w.values[static_cast<std::size_t>(n)];
        if (std::floor(v) != v || std::fabs(v) > 0x1p52)
            throw ValidationError("truncated_energy: value at n=" + format_int(n + 1) +
                                  " is not an exactly representable integer");
        ints.push_back(static_cast<std::int64_t>(v));
    }
    EnergyResult r;
    r.N = N;
    r.gamma = std::nullopt;
    r.method = EnergyMethod::SumMap;
    r.value = additive_energy_int(ints);
    return r;
}

EnergyResult approx_energy(const SequenceWindow& w, std::int64_t N, double gamma,
                           EnergyMethod method) {
    require_prefix(w, N);
    if (!(gamma > 0)) throw ValidationError("approx_energy: gamma must be > 0");
    EnergyResult r;
    r.N = N;
    r.gamma = gamma;
    r.method = method;
    const auto* x = w.values.data();
    const std::size_t n = static_cast<std::size_t>(N);

    if (method == EnergyMethod::Brute) {
        std::int64_t count = 0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c) {
                    const double t1 = x[a] + x[c];
                    for (std::size_t d = 0; d < n; ++d) {
                        const double t2 = x[b] + x[d];
                        if (std::fabs(t1 - t2) < gamma) ++count;
                    }
                }
        r.value = count;
        return r;
    }
    if (method != EnergyMethod::TwoPointer)
        throw ValidationError("approx_energy: method must be Brute or TwoPointer");
    if (N > kTwoPointerCapN)
        throw FeasibilityError("approx_energy: TwoPointer capped at N=" +
                               format_int(kTwoPointerCapN) + " (N^2 sums ~ " +
                               format_int(N * N * 8 / (1 << 20)) + " MiB requested)");
    std::vector<double> sums;
    sums.reserve(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < n; ++c) sums.push_back(x[a] + x[c]);
    std::sort(sums.begin(), sums.end());
    r.value = near_pair_count_strict(sums, gamma);
    return r;
}

ExponentFit fit_loglog(const std::vector<std::int64_t>& Ns, const std::vector<double>& values) {
    if (Ns.size() != values.size() || Ns.size() < 2)
        throw ValidationError("fit_loglog: need at least two (N, value) points");
    ExponentFit fit;
    fit.Ns = Ns;
    std::vector<double> lx;
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        if (Ns[i] < 1 || !(values[i] > 0))
            throw ValidationError("fit_loglog: N and values must be positive");
        lx.push_back(std::log2(static_cast<double>(Ns[i])));
        fit.logValues.push_back(std::log2(values[i]));
    }
    const LineFit lf = fit_line(lx, fit.logValues);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.residual = lf.rmsResidual;
    return fit;
}

ExponentFit energy_exponent(const SequenceSpec& spec, const std::vector<std::int64_t>& Ns,
                            const GammaRule& rule) {
    if (Ns.size() < 2) throw ValidationError("energy_exponent: need at least two N values");
    std::vector<double> values;
    for (std::int64_t N : Ns) {
        const SequenceWindow w = generate(spec, N);
        const EnergyResult e = approx_energy(w, N, rule.gamma_for(N));
        values.push_back(static_cast<double>(e.value));
    }
    return fit_loglog(Ns, values);
}

UnionEnergyCheck union_energy_check(const std::vector<std::vector<std::int64_t>>& sets) {
    if (sets.empty()) throw ValidationError("union_energy_check: no sets given");
    std::vector<std::int64_t> all;
    for (const auto& s : sets) {
        std::vector<std::int64_t> sorted = s;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 1; i < sorted.size(); ++i)
            if (sorted[i] == sorted[i - 1])
                throw ValidationError("union_energy_check: duplicate element within a set");
        all.insert(all.end(), sorted.begin(), sorted.end());
    }
    std::sort(all.begin(), all.end());
    for (std::size_t i = 1; i < all.size(); ++i)
        if (all[i] == all[i - 1])
            throw ValidationError("union_energy_check: sets are not disjoint");
    UnionEnergyCheck c;
    c.lhs = std::pow(static_cast<double>(additive_energy_int(all)), 0.25);
    double rhs = 0.0;
    for (const auto& s : sets) rhs += std::pow(static_cast<double>(additive_energy_int(s)), 0.25);
    c.rhs = rhs;
    c.holds = c.lhs <= c.rhs;
    return c;
}

bool is_convex(const std::vector<double>& values) {
    if (values.size() < 3) throw ValidationError("is_convex: need at least 3 values");
    double prevGap = values[1] - values[0];
    for (std::size_t i = 2; i < values.size(); ++i) {
        const double gap = values[i] - values[i - 1];
        if (!(gap > prevGap)) return false;
        prevGap = gap;
    }
    return true;
}

Discretized discretize_convex(const SequenceWindow& w, double Kexp) {
    if (!is_convex(w.values)) throw ValidationError("discretize_convex: window is not convex");
    Discretized d;
    const double Kreal = std::pow(static_cast<double>(w.N), Kexp);
    d.K = static_cast<std::int64_t>(std::floor(Kreal));
    if (d.K < 1) throw ValidationError("discretize_convex: floor(N^Kexp) < 1");
    d.X.reserve(w.values.size());
    for (std::size_t i = 0; i < w.values.size(); ++i) {
        const double scaled = static_cast<double>(d.K) * w.values[i];
        if (std::fabs(scaled) > 0x1p62)
            throw FeasibilityError("discretize_convex: scaled value overflows");
        const std::int64_t Xi = static_cast<std::int64_t>(std::floor(scaled));
        if (!d.X.empty() && Xi == d.X.back())
            throw ValidationError("discretize_convex: floor collision at n=" +
                                  format_int(static_cast<std::int64_t>(i) + 1));
        d.X.push_back(Xi);
    }
    return d;
}

std::vector<std::vector<std::int64_t>> residue_partition(const std::vector<std::int64_t>& X,
                                                         std::int64_t K) {
    if (K < 1) throw ValidationError("residue_partition: K must be >= 1");
    std::vector<std::vector<std::int64_t>> classes(static_cast<std::size_t>(K));
    for (std::size_t j = 0; j < X.size(); ++j) {
        const std::size_t k = (j + 1) % static_cast<std::size_t>(K);  // 1-based index mod K
        classes[k].push_back(X[j]);
    }
    return classes;
}

double growth_sum(const SequenceWindow& w, std::int64_t N) {
    require_prefix(w, N);
    if (!w.sortedAscending) throw ValidationError("growth_sum requires an ascending window");
    std::vector<double> terms;
    for (std::int64_t n1 = 0; n1 < N; ++n1)
        for (std::int64_t n2 = n1 + 1; n2 < N; ++n2) {
            const double diff = w.values[static_cast<std::size_t>(n2)] -
                                w.values[static_cast<std::size_t>(n1)];
            if (diff >= 1.0) terms.push_back(1.0 / std::sqrt(diff));
        }
    return pairwise_sum(terms);
}

std::map<std::int64_t, std::int64_t> binned_r(const SequenceWindow& w, std::int64_t N) {
    require_prefix(w, N);
    if (!w.sortedAscending) throw ValidationError("binned_r requires an ascending window");
    std::map<std::int64_t, std::int64_t> r;
    for (std::int64_t n1 = 0; n1 < N; ++n1)
        for (std::int64_t n2 = n1 + 1; n2 < N; ++n2) {
            const double diff = w.values[static_cast<std::size_t>(n2)] -
                                w.values[static_cast<std::size_t>(n1)];
            if (diff >= 1.0) ++r[static_cast<std::int64_t>(std::floor(diff))];
        }
    return r;
}

}  // namespace ppc
