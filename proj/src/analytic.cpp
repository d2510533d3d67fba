#include "ppc/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ppc/common.hpp"
#include "ppc/energy.hpp"
#include "ppc/sequences.hpp"

namespace ppc {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kEvalBudget = 2e8;  // integrand-term evaluations per integral

struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

double pow_int(double base, std::int64_t e) {
    double acc = 1.0, b = base;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

bool is_prime(std::int64_t q) {
    if (q < 2) return false;
    for (std::int64_t d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t m) {
    std::int64_t acc = 1 % m;
    b %= m;
    while (e > 0) {
        if (e & 1) acc = acc * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return acc;
}

// |A(t) * B(t)|^2 evaluator for D(t) = sum w x^{-it} [* sum_{n~N} n^{-it}]
struct MeanValueEvaluator {
    std::vector<double> lx, wx;  // point logs / weights
    std::vector<double> ln;      // attached-range logs, weight 1

    double operator()(double t) const {
        Kahan re, im;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            const double ph = t * lx[i];
            re.add(wx[i] * std::cos(ph));
            im.add(-wx[i] * std::sin(ph));
        }
        double v = re.s * re.s + im.s * im.s;
        if (!ln.empty()) {
            Kahan re2, im2;
            for (const double l : ln) {
                const double ph = t * l;
                re2.add(std::cos(ph));
                im2.add(-std::sin(ph));
            }
            v *= re2.s * re2.s + im2.s * im2.s;
        }
        return v;
    }
};

double simpson(const MeanValueEvaluator& f, double a, double b, std::int64_t n) {
    const double h = (b - a) / static_cast<double>(n);
    Kahan acc;
    acc.add(f(a));
    acc.add(f(b));
    for (std::int64_t j = 1; j < n; ++j)
        acc.add((j & 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(j)));
    return acc.s * h / 3.0;
}

}  // namespace

std::vector<RealPoint> to_points(std::span<const WeightedPoint> entries) {
    std::vector<RealPoint> pts;
    pts.reserve(entries.size());
    for (const auto& e : entries) pts.push_back({e.x, static_cast<double>(e.w)});
    return pts;
}

std::complex<double> dirichlet_poly(std::span<const RealPoint> points, double t) {
    if (points.empty()) throw ValidationError("dirichlet_poly: empty point set");
    Kahan re, im;
    for (const auto& p : points) {
        if (!(p.x > 0)) throw ValidationError("dirichlet_poly: points must have x > 0");
        const double ph = t * std::log(p.x);
        re.add(p.w * std::cos(ph));
        im.add(-p.w * std::sin(ph));
    }
    return {re.s, im.s};
}

MomentResult mean_value_integral(std::span<const RealPoint> points, double T,
                                 const MeanValueOptions& opts) {
    if (points.empty()) throw ValidationError("mean_value_integral: empty point set");
    if (!(T > 0)) throw ValidationError("mean_value_integral: T must be > 0");
    MeanValueEvaluator f;
    for (const auto& p : points) {
        if (!(p.x > 0)) throw ValidationError("mean_value_integral: points must have x > 0");
        f.lx.push_back(std::log(p.x));
        f.wx.push_back(p.w);
    }
    if (opts.attachRangeN) {
        const std::int64_t N = *opts.attachRangeN;
        if (N < 1) throw ValidationError("mean_value_integral: attached range must be >= 1");
        for (std::int64_t n = N + 1; n <= 2 * N; ++n)
            f.ln.push_back(std::log(static_cast<double>(n)));
    }

    const auto [lxMin, lxMax] = std::minmax_element(f.lx.begin(), f.lx.end());
    double bandwidth = *lxMax - *lxMin;
    if (!f.ln.empty()) bandwidth += f.ln.back() - f.ln.front();
    std::int64_t n = std::max<std::int64_t>(
        16, static_cast<std::int64_t>(std::ceil(2.0 * T * bandwidth * opts.pointsPerOsc / kTwoPi)));
    if (n % 2) ++n;

    const double costPerEval = static_cast<double>(f.lx.size() + f.ln.size());
    if (static_cast<double>(n) * costPerEval > kEvalBudget)
        throw FeasibilityError("mean_value_integral: grid of " + format_int(n) +
                               " intervals exceeds the evaluation budget");

    double coarse = simpson(f, -T, T, n);
    double fine = simpson(f, -T, T, 2 * n);
    double err = std::fabs(fine - coarse) / 15.0;
    int doublings = opts.maxDoublings;
    while (err > opts.relTol * std::max(std::fabs(fine), 1e-300) && doublings-- > 0) {
        n *= 2;
        if (static_cast<double>(2 * n) * costPerEval > kEvalBudget) break;
        coarse = fine;
        fine = simpson(f, -T, T, 2 * n);
        err = std::fabs(fine - coarse) / 15.0;
    }

    MomentResult r;
    r.value = fine / T;
    r.gridSize = 2 * n;
    r.errorEstimate = err / T;
    r.method = MomentMethod::Refined;
    return r;
}

double mean_value_closed_form(std::span<const RealPoint> points, double T) {
    if (points.empty()) throw ValidationError("mean_value_closed_form: empty point set");
    if (!(T > 0)) throw ValidationError("mean_value_closed_form: T must be > 0");
    std::vector<double> logs;
    logs.reserve(points.size());
    for (const auto& p : points) logs.push_back(std::log(p.x));
    Kahan acc;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j) {
            const double z = T * (logs[i] - logs[j]);
            const double sinc = z == 0.0 ? 1.0 : std::sin(z) / z;
            acc.add(2.0 * points[i].w * points[j].w * sinc);
        }
    return acc.s;
}

double mean_value_pair_count(std::span<const RealPoint> points, double T) {
    if (points.empty()) throw ValidationError("mean_value_pair_count: empty point set");
    if (!(T > 0)) throw ValidationError("mean_value_pair_count: T must be > 0");
    std::vector<std::pair<double, double>> pts;  // (log x, |w|)
    pts.reserve(points.size());
    for (const auto& p : points) pts.emplace_back(std::log(p.x), std::fabs(p.w));
    std::sort(pts.begin(), pts.end());
    const double thr = 3.14159265358979323846 / T;
    const std::size_t m = pts.size();
    std::vector<double> pref(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) pref[i + 1] = pref[i] + pts[i].second;
    double total = 0.0;
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < m; ++i) {
        while (pts[i].first - pts[lo].first > thr) ++lo;
        if (hi < i) hi = i;
        while (hi + 1 < m && pts[hi + 1].first - pts[i].first <= thr) ++hi;
        total += pts[i].second * (pref[hi + 1] - pref[lo]);
    }
    return total;
}

SandwichResult sum_integral_sandwich(std::span<const WeightedPoint> entries, std::int64_t k,
                                     std::int64_t N, double T) {
    if (entries.empty()) throw ValidationError("sum_integral_sandwich: empty block");
    const double K = std::ldexp(static_cast<double>(N) / T, static_cast<int>(k));  // 2^k N / T
    SandwichResult r;
    r.stilde = count_S_dyadic(entries, N, K);
    MeanValueOptions opts;
    opts.attachRangeN = N;
    r.integral = mean_value_integral(to_points(entries), T, opts);
    r.ratio = r.stilde > 0 ? r.integral.value / static_cast<double>(r.stilde) : 0.0;
    return r;
}

CharacterTable::CharacterTable(std::int64_t q) : q_(q) {
    if (q < 2 || q > 10'000 || !is_prime(q))
        throw ValidationError("character table: q must be a prime <= 10^4");
    index_.assign(static_cast<std::size_t>(q), 0);
    if (q == 2) {
        root_ = 1;
        return;
    }
    // smallest primitive root: g is primitive iff g^((q-1)/p) != 1 for every
    // prime p | q-1
    std::vector<std::int64_t> primeFactors;
    std::int64_t m = q - 1;
    for (std::int64_t d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            primeFactors.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) primeFactors.push_back(m);
    for (std::int64_t g = 2; g < q; ++g) {
        bool primitive = true;
        for (std::int64_t p : primeFactors)
            if (pow_mod(g, (q - 1) / p, q) == 1) {
                primitive = false;
                break;
            }
        if (primitive) {
            root_ = g;
            break;
        }
    }
    std::int64_t pw = 1;
    for (std::int64_t e = 0; e < q - 1; ++e) {
        index_[static_cast<std::size_t>(pw)] = static_cast<std::int32_t>(e);
        pw = pw * root_ % q;
    }

    // orthogonality: sum_n chi_a(n) conj(chi_b(n)) == (q-1) [a == b].
    // Exhaustive for small q, sampled labels otherwise.
    std::vector<std::int64_t> labels;
    if (q <= 64) {
        for (std::int64_t a = 0; a < q - 1; ++a) labels.push_back(a);
    } else {
        labels = {0, 1, 2, 3, (q - 1) / 2, q - 3, q - 2};
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    }
    for (std::int64_t a : labels)
        for (std::int64_t b : labels) {
            std::complex<double> sum{0.0, 0.0};
            for (std::int64_t n = 1; n < q; ++n) sum += chi(a, n) * std::conj(chi(b, n));
            const double expect = a == b ? static_cast<double>(q - 1) : 0.0;
            if (std::abs(sum - expect) > 1e-7 * static_cast<double>(q))
                throw std::logic_error("character table failed orthogonality check");
        }
}

std::complex<double> CharacterTable::chi(std::int64_t a, std::int64_t n) const {
    if (a < 0 || a >= q_ - 1) throw ValidationError("character label out of range");
    std::int64_t r = n % q_;
    if (r < 0) r += q_;
    if (r == 0) return {0.0, 0.0};
    const double angle = kTwoPi * static_cast<double>(a) *
                         static_cast<double>(index_[static_cast<std::size_t>(r)]) /
                         static_cast<double>(q_ - 1);
    return {std::cos(angle), std::sin(angle)};
}

CharacterTable dirichlet_characters(std::int64_t q) { return CharacterTable(q); }

double character_window_energy(const CharacterTable& table, std::int64_t J) {
    if (J < 1) throw ValidationError("character_window_energy: J must be >= 1");
    double total = 0.0;
    for (std::int64_t a = 0; a < table.order(); ++a) {
        std::complex<double> s{0.0, 0.0};
        for (std::int64_t j = J + 1; j <= 2 * J; ++j) s += table.chi(a, j);
        total += std::norm(s);
    }
    return total;
}

std::int64_t smallest_prime_in(std::int64_t lo, std::int64_t hi) {
    for (std::int64_t q = std::max<std::int64_t>(2, lo); q <= hi; ++q)
        if (is_prime(q)) return q;
    throw ValidationError("no prime in [" + format_int(lo) + ", " + format_int(hi) + "]");
}

AmplificationResult amplification_check(std::span<const WeightedPoint> entries, std::int64_t N,
                                        std::int64_t J, double T) {
    if (N < 1 || J < 1) throw ValidationError("amplification_check: N and J must be >= 1");
    AmplificationResult r;
    r.q = smallest_prime_in(4 * J, 8 * J);
    const std::vector<RealPoint> pts = to_points(entries);
    MeanValueOptions opts;
    opts.attachRangeN = N;
    r.lhs = mean_value_integral(pts, T, opts).value;
    opts.attachRangeN = J * N;
    r.rhsTheta1 = mean_value_integral(pts, T, opts).value;
    opts.attachRangeN = 2 * J * N;
    r.rhsTheta2 = mean_value_integral(pts, T, opts).value;
    const double ratio1 = r.lhs * static_cast<double>(J) / r.rhsTheta1;
    const double ratio2 = r.lhs * static_cast<double>(J) / r.rhsTheta2;
    r.theta = ratio1 <= ratio2 ? 1 : 2;
    r.ratio = std::min(ratio1, ratio2);
    return r;
}

std::complex<double> weyl_sum(std::span<const double> coeffs, std::int64_t N, double x) {
    if (coeffs.empty()) throw ValidationError("weyl_sum: empty coefficient list");
    if (N < 1) throw ValidationError("weyl_sum: N must be >= 1");
    Kahan re, im;
    for (std::int64_t n = 1; n <= N; ++n) {
        double p = 0.0;
        for (const double c : coeffs) p = p * static_cast<double>(n) + c;
        double ph = p * x;
        ph -= std::floor(ph);  // e() is 1-periodic; reduce before the libm call
        const double angle = kTwoPi * ph;
        re.add(std::cos(angle));
        im.add(std::sin(angle));
    }
    return {re.s, im.s};
}

MomentResult hua_moment(std::span<const double> coeffs, std::int64_t N, std::int64_t twoS,
                        std::optional<MomentMethod> method) {
    if (coeffs.empty()) throw ValidationError("hua_moment: empty coefficient list");
    if (N < 1) throw ValidationError("hua_moment: N must be >= 1");
    if (twoS < 2 || twoS % 2 != 0) throw ValidationError("hua_moment: 2s must be even and >= 2");
    const std::int64_t s = twoS / 2;

    std::vector<double> pvals;
    pvals.reserve(static_cast<std::size_t>(N));
    for (std::int64_t n = 1; n <= N; ++n) {
        double p = 0.0;
        for (const double c : coeffs) p = p * static_cast<double>(n) + c;
        pvals.push_back(p);
    }
    bool integral = true;
    for (const double c : coeffs)
        if (std::floor(c) != c) integral = false;
    if (method == MomentMethod::NyquistExact && !integral)
        throw ValidationError("hua_moment: exact grid requires integer coefficients");
    if (method == MomentMethod::Refined) integral = false;

    const auto momentOnGrid = [&](std::int64_t G) {
        Kahan acc;
        for (std::int64_t g = 0; g < G; ++g) {
            const double x = static_cast<double>(g) / static_cast<double>(G);
            Kahan re, im;
            for (const double p : pvals) {
                double ph = p * x;
                ph -= std::floor(ph);
                const double angle = kTwoPi * ph;
                re.add(std::cos(angle));
                im.add(std::sin(angle));
            }
            acc.add(pow_int(re.s * re.s + im.s * im.s, s));
        }
        return acc.s / static_cast<double>(G);
    };

    MomentResult r;
    if (integral) {
        double maxAbs = 0.0;
        for (const double p : pvals) maxAbs = std::max(maxAbs, std::fabs(p));
        if (maxAbs > 0x1p52)
            throw FeasibilityError("hua_moment: polynomial values exceed exact integer range");
        // |W|^{2s} is a trigonometric polynomial with integer frequencies of
        // magnitude at most 2 s max|p(n)|; a uniform grid one step finer
        // integrates it exactly.
        const std::int64_t G = 2 * s * static_cast<std::int64_t>(maxAbs) + 1;
        if (static_cast<double>(G) * static_cast<double>(N) > kEvalBudget)
            throw FeasibilityError("hua_moment: exact grid of " + format_int(G) +
                                   " points exceeds the evaluation budget");
        r.value = momentOnGrid(G);
        r.gridSize = G;
        r.errorEstimate = 0.0;
        r.method = MomentMethod::NyquistExact;
        return r;
    }

    double maxAbs = 0.0;
    for (const double p : pvals) maxAbs = std::max(maxAbs, std::fabs(p));
    std::int64_t G = std::max<std::int64_t>(
        64, 2 * s * static_cast<std::int64_t>(std::ceil(maxAbs)) + 1);
    double coarse = momentOnGrid(G);
    double fine = momentOnGrid(2 * G);
    int doublings = 14;
    while (std::fabs(fine - coarse) > 1e-9 * std::max(std::fabs(fine), 1e-300) &&
           doublings-- > 0) {
        G *= 2;
        if (static_cast<double>(2 * G) * static_cast<double>(N) > kEvalBudget) break;
        coarse = fine;
        fine = momentOnGrid(2 * G);
    }
    r.value = fine;
    r.gridSize = 2 * G;
    r.errorEstimate = std::fabs(fine - coarse);
    r.method = MomentMethod::Refined;
    return r;
}

std::int64_t vinogradov_count(int k, int s, std::int64_t N) {
    if (k < 1 || s < 1 || N < 1) throw ValidationError("vinogradov_count: k, s, N must be >= 1");
    const double tuples = std::pow(static_cast<double>(N), s);
    if (tuples > 1e7)
        throw FeasibilityError("vinogradov_count: N^s exceeds the 10^7 tuple cap");

    // powers n^j, checked against the exact-integer range
    std::vector<std::vector<std::int64_t>> pw(static_cast<std::size_t>(N) + 1,
                                              std::vector<std::int64_t>(static_cast<std::size_t>(k) + 1, 1));
    for (std::int64_t n = 1; n <= N; ++n)
        for (int j = 1; j <= k; ++j) {
            pw[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] =
                pw[static_cast<std::size_t>(n)][static_cast<std::size_t>(j - 1)] * n;
            if (pw[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] > (std::int64_t{1} << 52))
                throw FeasibilityError("vinogradov_count: N^k exceeds exact integer range");
        }

    // mixed-radix packing of the power-sum vector into one 64-bit key
    std::vector<std::int64_t> radix(static_cast<std::size_t>(k) + 1, 0);
    unsigned __int128 capacity = 1;
    for (int j = 1; j <= k; ++j) {
        radix[static_cast<std::size_t>(j)] =
            s * (pw[static_cast<std::size_t>(N)][static_cast<std::size_t>(j)] - 1) + 1;
        capacity *= static_cast<unsigned __int128>(radix[static_cast<std::size_t>(j)]);
        if (capacity > static_cast<unsigned __int128>(INT64_MAX))
            throw FeasibilityError("vinogradov_count: power-sum state space too large to key");
    }

    std::unordered_map<std::uint64_t, std::int64_t> counts;
    counts.reserve(static_cast<std::size_t>(std::min(tuples, 4e6)));
    std::vector<std::int64_t> sums(static_cast<std::size_t>(k) + 1, 0);
    // depth-first over ordered s-tuples, maintaining partial power sums
    const auto visit = [&](auto&& self, int depth) -> void {
        if (depth == s) {
            std::uint64_t key = 0;
            for (int j = 1; j <= k; ++j)
                key = key * static_cast<std::uint64_t>(radix[static_cast<std::size_t>(j)]) +
                      static_cast<std::uint64_t>(sums[static_cast<std::size_t>(j)] - s);
            ++counts[key];
            return;
        }
        for (std::int64_t n = 1; n <= N; ++n) {
            for (int j = 1; j <= k; ++j)
                sums[static_cast<std::size_t>(j)] +=
                    pw[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)];
            self(self, depth + 1);
            for (int j = 1; j <= k; ++j)
                sums[static_cast<std::size_t>(j)] -=
                    pw[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)];
        }
    };
    visit(visit, 0);

    std::int64_t J = 0;
    for (const auto& [key, c] : counts) J += c * c;
    return J;
}

QuadrupleMomentCheck quadruple_moment_check(std::span<const double> coeffs, std::int64_t N) {
    PolynomialSpec spec;
    spec.coeffs.assign(coeffs.begin(), coeffs.end());
    const SequenceWindow w = generate(spec, N);
    QuadrupleMomentCheck c;
    c.estar = approx_energy(w, N, 1.0).value;
    c.moment = hua_moment(coeffs, N, 4).value;
    c.ratio = static_cast<double>(c.estar) / c.moment;
    return c;
}

}  // namespace ppc
