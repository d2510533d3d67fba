#include "ppc/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"
#include "ppc/common.hpp"
#include "ppc/energy.hpp"
#include "ppc/geometry.hpp"
#include "ppc/paircorr.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace ppc {

namespace {

constexpr std::size_t kProductCap = 50'000'000;

// 1, 2, 4, ... <= limit
std::vector<std::int64_t> dyadic_values(std::int64_t limit) {
    std::vector<std::int64_t> v;
    for (std::int64_t d = 1; d <= limit; d *= 2) {
        v.push_back(d);
        if (d > limit / 2) break;  // avoid overflow on the doubling
    }
    return v;
}

RatioReport best_of(std::string name, std::map<std::string, double> params, double lhs,
                    const std::vector<std::pair<double, double>>& rhsByWitness,
                    const std::string& witnessName) {
    RatioReport r;
    r.name = std::move(name);
    r.params = std::move(params);
    r.lhs = lhs;
    r.witnessName = witnessName;
    bool first = true;
    for (const auto& [wit, rhs] : rhsByWitness) {
        const double ratio = lhs / rhs;
        if (first || ratio < r.ratio) {
            r.rhs = rhs;
            r.ratio = ratio;
            r.witness = wit;
            first = false;
        }
    }
    return r;
}

}  // namespace

SweepResult make_sweep(std::string name, const std::vector<std::int64_t>& scales,
                       const std::vector<std::vector<RatioReport>>& rungs) {
    if (scales.size() != rungs.size() || rungs.empty())
        throw ValidationError("sweep: need one report list per ladder scale");
    SweepResult s;
    s.name = std::move(name);
    s.scales = scales;
    for (const auto& rung : rungs) {
        if (rung.empty()) throw ValidationError("sweep: empty ladder rung");
        double rmax = 0.0;
        for (const auto& rep : rung) rmax = std::max(rmax, rep.ratio);
        s.rungMaxRatios.push_back(rmax);
        s.reports.insert(s.reports.end(), rung.begin(), rung.end());
    }
    s.maxRatio = *std::max_element(s.rungMaxRatios.begin(), s.rungMaxRatios.end());
    s.driftFactor = 1.0;
    for (std::size_t i = 1; i < s.rungMaxRatios.size(); ++i) {
        const double prev = s.rungMaxRatios[i - 1], cur = s.rungMaxRatios[i];
        const double growth = prev > 0 ? cur / prev : (cur > 0 ? HUGE_VAL : 1.0);
        s.driftFactor = std::max(s.driftFactor, growth);
    }
    return s;
}

RatioReport verify_dyadic_partition(const DifferenceWeights& w, std::int64_t M, double K) {
    const DyadicDecomposition dec = dyadic_blocks(w);
    if (dec.belowOne > 0)
        throw ValidationError("dyadic partition: all weights must have x >= 1");
    const double lhs = static_cast<double>(count_S(w, M, K));
    std::vector<std::pair<double, double>> rhsByN;
    for (const std::int64_t N : dyadic_values(M)) {
        std::int64_t total = 0;
        for (const auto& b : dec.blocks)
            total += count_S_dyadic(block_entries(w, b), N, 4.0 * K);
        rhsByN.emplace_back(static_cast<double>(N), static_cast<double>(total));
    }
    return best_of("dyadic-partition", {{"M", static_cast<double>(M)}, {"K", K}}, lhs, rhsByN,
                   "N");
}

RatioReport verify_linear(std::span<const WeightedPoint> block, std::int64_t N, double K,
                          std::int64_t J) {
    if (J < 1) throw ValidationError("linear property: J must be >= 1");
    RatioReport r;
    r.name = "linear";
    r.params = {{"N", static_cast<double>(N)}, {"K", K}, {"J", static_cast<double>(J)}};
    r.lhs = static_cast<double>(count_S_dyadic(block, N, static_cast<double>(J) * K));
    r.rhs = static_cast<double>(J) * static_cast<double>(count_S_dyadic(block, N, K));
    r.ratio = r.lhs / r.rhs;
    return r;
}

RatioReport verify_decreasing(std::span<const WeightedPoint> block, std::int64_t k,
                              std::int64_t N, double K, std::int64_t N0, double eps) {
    if (k < 0) throw ValidationError("decreasing property: block level k must be >= 0");
    if (N0 < 1 || N0 > N) throw ValidationError("decreasing property: need 1 <= N0 <= N");
    const double lhs = static_cast<double>(count_S_dyadic(block, N, K));
    const double l1 = static_cast<double>(l1_norm(block));
    const double base = static_cast<double>(N) * K * std::ldexp(1.0, -static_cast<int>(k)) * l1 * l1 +
                        static_cast<double>(N) / static_cast<double>(N0) * l1 * l1;
    const double inflate =
        std::pow(static_cast<double>(N), 1.0 + eps) / static_cast<double>(N0);
    std::vector<std::pair<double, double>> rhsByL;
    for (const std::int64_t L : dyadic_values(4 * N0)) {
        const double tail = inflate * static_cast<double>(count_S_dyadic(
                                          block, L, static_cast<double>(N0) * K /
                                                        static_cast<double>(N)));
        rhsByL.emplace_back(static_cast<double>(L), base + tail);
    }
    return best_of("decreasing",
                   {{"k", static_cast<double>(k)},
                    {"N", static_cast<double>(N)},
                    {"K", K},
                    {"N0", static_cast<double>(N0)},
                    {"eps", eps}},
                   lhs, rhsByL, "L");
}

RatioReport verify_increasing(std::span<const WeightedPoint> block, std::int64_t N, double K,
                              std::int64_t J, double eps) {
    if (J < 1) throw ValidationError("increasing property: J must be >= 1");
    const double lhs = static_cast<double>(count_S_dyadic(block, N, K));
    const double factor = std::pow(static_cast<double>(J) * static_cast<double>(N), eps) /
                          static_cast<double>(J);
    std::vector<std::pair<double, double>> rhsByTheta;
    for (std::int64_t theta = 1; theta <= 2; ++theta) {
        const std::int64_t bigN = theta * J * N;
        const double rhs = factor * static_cast<double>(count_S_dyadic(
                                        block, bigN, static_cast<double>(J) * K));
        rhsByTheta.emplace_back(static_cast<double>(theta), rhs);
    }
    return best_of("increasing",
                   {{"N", static_cast<double>(N)},
                    {"K", K},
                    {"J", static_cast<double>(J)},
                    {"eps", eps}},
                   lhs, rhsByTheta, "theta");
}

RatioReport verify_multiplicative(std::span<const WeightedPoint> block, std::int64_t N, double K,
                                  double eps) {
    if (N > 64)
        throw FeasibilityError("multiplicative property: the theta N^2 range caps N at 64");
    if (!(K > 0)) throw ValidationError("multiplicative property: K must be > 0");
    const double lhs = static_cast<double>(count_S_dyadic(block, N, K));
    const double norm =
        std::sqrt(static_cast<double>(l2_norm_sq(block, static_cast<double>(N) / K)));
    const double factor = std::pow(static_cast<double>(N), eps) * norm;
    std::vector<std::pair<double, double>> rhsByTheta;
    for (std::int64_t theta = 1; theta <= 2; ++theta) {
        const std::int64_t bigN = theta * N * N;
        const double stilde =
            static_cast<double>(count_S_dyadic(block, bigN, static_cast<double>(N) * K));
        rhsByTheta.emplace_back(static_cast<double>(theta), factor * std::sqrt(stilde));
    }
    return best_of("multiplicative",
                   {{"N", static_cast<double>(N)}, {"K", K}, {"eps", eps}}, lhs, rhsByTheta,
                   "theta");
}

RatioReport verify_l2_monotonicity(std::span<const WeightedPoint> block, double N, double M) {
    if (!(N > 0) || !(M >= N)) throw ValidationError("l2 monotonicity: need 0 < N <= M");
    RatioReport r;
    r.name = "l2-monotonicity";
    r.params = {{"N", N}, {"M", M}};
    r.lhs = static_cast<double>(l2_norm_sq(block, N));
    r.rhs = M / N * static_cast<double>(l2_norm_sq(block, M));
    r.ratio = r.lhs / r.rhs;
    return r;
}

RatioReport verify_main_bound(const DifferenceWeights& w, std::int64_t M, double K, double eps) {
    const double lhs = static_cast<double>(count_S(w, M, K));
    const double l2m = static_cast<double>(l2_norm_sq(w.entries, static_cast<double>(M)));
    const double l2 = std::sqrt(l2m);
    const double l1 = static_cast<double>(l1_norm(w.entries));
    std::vector<double> terms;
    terms.reserve(w.entries.size());
    for (const auto& e : w.entries)
        terms.push_back(static_cast<double>(e.w) / std::sqrt(e.x));
    const double invSqrtSum = pairwise_sum(terms);
    const double Md = static_cast<double>(M);
    const double t1 = std::pow(Md, 1.5 + eps) * std::pow(K, 1.0 + eps) * l2 * invSqrtSum;
    const double t2 = std::pow(Md * K, 0.5 + eps) * l1 * l2;
    const double t3 = std::pow(Md * K, 1.0 + eps) * l2m;
    RatioReport r;
    r.name = "main-bound";
    r.params = {{"M", Md}, {"K", K}, {"eps", eps}, {"term1", t1}, {"term2", t2}, {"term3", t3}};
    r.lhs = lhs;
    r.rhs = t1 + t2 + t3;
    r.ratio = r.lhs / r.rhs;
    return r;
}

RtSums rt_sums(const SequenceWindow& w, std::int64_t N, double eps) {
    if (!(eps > 0)) throw ValidationError("criterion sums: eps must be > 0");
    if (N > 128)
        throw FeasibilityError("criterion sums: the product multiset caps N at 128");
    const DifferenceWeights diffs = differences(w, N);
    RtSums out;
    out.threshold = std::pow(static_cast<double>(N), eps);
    {
        const double q = std::floor(std::pow(static_cast<double>(N), 1.0 + eps));
        out.M = static_cast<std::int64_t>(q);
    }
    if (out.M < 1) throw ValidationError("criterion sums: m range is empty");

    // sum1: per unordered difference d, the number of m <= M with m d < thr,
    // doubled for the two orderings of (n1, n2).
    for (const auto& e : diffs.entries) {
        const double q = std::floor(out.threshold / e.x);
        std::int64_t cnt =
            q >= static_cast<double>(out.M) ? out.M : static_cast<std::int64_t>(q);
        if (cnt < 0) cnt = 0;
        while (cnt >= 1 && !(static_cast<double>(cnt) * e.x < out.threshold)) --cnt;
        while (cnt < out.M && static_cast<double>(cnt + 1) * e.x < out.threshold) ++cnt;
        out.sum1 += 2 * e.w * cnt;
    }

    // sum2: with signed m1, m2 and both n-pair orderings, every combination
    // of positive products (p1, p2) contributes 8 [|p1 - p2| < thr] +
    // 8 [p1 + p2 < thr] (each sign pattern of m1 d1 - m2 d2 arises four
    // times).  Count both branches over the sorted weighted product array.
    const std::size_t total = diffs.entries.size() * static_cast<std::size_t>(out.M);
    if (total > kProductCap)
        throw FeasibilityError("criterion sums: product multiset exceeds cap");
    std::vector<std::pair<double, std::int64_t>> prod;
    prod.reserve(total);
    for (const auto& e : diffs.entries)
        for (std::int64_t m = 1; m <= out.M; ++m)
            prod.emplace_back(static_cast<double>(m) * e.x, e.w);
    std::sort(prod.begin(), prod.end());
    const std::size_t m = prod.size();
    std::vector<double> v(m);
    std::vector<std::int64_t> pref(m + 1, 0);
    for (std::size_t i = 0; i < m; ++i) {
        v[i] = prod[i].first;
        pref[i + 1] = pref[i] + prod[i].second;
    }
    std::int64_t nearPairs = 0, sumPairs = 0;
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < m; ++i) {
        while (v[i] - v[lo] >= out.threshold) ++lo;
        if (hi < i) hi = i;
        while (hi + 1 < m && v[hi + 1] - v[i] < out.threshold) ++hi;
        nearPairs += prod[i].second * (pref[hi + 1] - pref[lo]);
        const auto it = std::partition_point(
            v.begin(), v.end(), [&](double pj) { return v[i] + pj < out.threshold; });
        sumPairs += prod[i].second * pref[static_cast<std::size_t>(it - v.begin())];
    }
    out.sum2 = 8 * (nearPairs + sumPairs);
    return out;
}

std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineNo = 0;
    const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ValidationError(path + ":" + format_int(static_cast<std::int64_t>(lineNo)) +
                                  ": expected key=value");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ValidationError(path + ":" + format_int(static_cast<std::int64_t>(lineNo)) +
                                  ": empty key or value");
        if (!kv.emplace(key, val).second)
            throw ValidationError(path + ":" + format_int(static_cast<std::int64_t>(lineNo)) +
                                  ": duplicate key '" + key + "'");
    }
    return kv;
}

namespace {

// Typed access to the key=value map with defaults; rejects unknown keys so
// config typos fail loudly.
class Params {
  public:
    explicit Params(const std::map<std::string, std::string>& kv) : kv_(kv) {}

    std::string str(const std::string& key, const std::string& def) {
        used_.insert(key);
        const auto it = kv_.find(key);
        return it == kv_.end() ? def : it->second;
    }

    double real(const std::string& key, double def) {
        const std::string s = str(key, "");
        if (s.empty()) return def;
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ValidationError("config key '" + key + "': bad number '" + s + "'");
        }
    }

    std::int64_t integer(const std::string& key, std::int64_t def) {
        const std::string s = str(key, "");
        if (s.empty()) return def;
        try {
            std::size_t pos = 0;
            const std::int64_t v = std::stoll(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ValidationError("config key '" + key + "': bad integer '" + s + "'");
        }
    }

    std::vector<std::int64_t> int_list(const std::string& key, const std::string& def) {
        std::vector<std::int64_t> out;
        for (const std::string& piece : split(str(key, def))) {
            try {
                out.push_back(std::stoll(piece));
            } catch (const std::exception&) {
                throw ValidationError("config key '" + key + "': bad integer '" + piece + "'");
            }
        }
        if (out.empty()) throw ValidationError("config key '" + key + "': empty list");
        return out;
    }

    std::vector<double> real_list(const std::string& key, const std::string& def) {
        std::vector<double> out;
        for (const std::string& piece : split(str(key, def))) {
            try {
                out.push_back(std::stod(piece));
            } catch (const std::exception&) {
                throw ValidationError("config key '" + key + "': bad number '" + piece + "'");
            }
        }
        if (out.empty()) throw ValidationError("config key '" + key + "': empty list");
        return out;
    }

    void reject_unknown() const {
        for (const auto& [key, val] : kv_)
            if (!used_.count(key))
                throw ValidationError("unknown config key: " + key);
    }

  private:
    static std::vector<std::string> split(const std::string& s) {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (start <= s.size()) {
            const auto comma = s.find(',', start);
            const auto end = comma == std::string::npos ? s.size() : comma;
            if (end > start) out.push_back(s.substr(start, end - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return out;
    }

    const std::map<std::string, std::string>& kv_;
    std::set<std::string> used_;
};

PpcConvention convention_from(const std::string& s) {
    if (s == "nearest") return PpcConvention::NearestIntegerDistance;
    if (s == "frac") return PpcConvention::LiteralFractionalPart;
    throw ValidationError("convention must be 'nearest' or 'frac', got '" + s + "'");
}

std::string csv_safe(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    return s;
}

std::string fmt_bool(bool b) { return b ? "1" : "0"; }

// --- battery: ppc-convergence -------------------------------------------

bool battery_ppc(Params& p, const std::string& csvPath, json& out) {
    const SequenceSpec spec =
        parse_sequence_spec(p.str("spec", "power:alpha=1.4142135623730951,theta=2"));
    const std::vector<std::int64_t> ns = p.int_list("ns", "4096,8192,16384,32768");
    PairCorrConfig cfg;
    cfg.sGrid = p.real_list("sgrid", "0.5,1,1.5,2,2.5,3");
    cfg.convention = convention_from(p.str("convention", "nearest"));
    cfg.scaleAlpha = p.real("scale", 1.0);
    const std::int64_t bruteN = p.integer("brute-n", 4096);
    const double devMax = p.real("dev-max", 0.15);
    p.reject_unknown();

    CsvWriter csv(csvPath, {"n", "s", "count", "R", "two_s", "ratio"});
    json devTable = json::array();
    double finalDev = 0.0;
    for (const std::int64_t N : ns) {
        const SequenceWindow w = generate(spec, N);
        const PairCorrCurve curve = pair_correlation_curve(w, cfg);
        for (const auto& row : curve.rows)
            csv.row({format_int(N), format_real(row.s), format_int(row.count),
                     format_real(row.R), format_real(2.0 * row.s),
                     format_real(row.R / (2.0 * row.s))});
        const double dev = ppc_deviation(curve);
        devTable.push_back({{"n", N}, {"dev", dev}});
        finalDev = dev;
    }

    bool bruteMatch = true;
    if (bruteN > 0) {
        const SequenceWindow w = generate(spec, bruteN);
        for (const double s : cfg.sGrid) {
            const PairCorrStat fast = pair_correlation(w, s, cfg);
            const PairCorrStat slow = pair_correlation_brute(w, s, cfg);
            if (fast.count != slow.count) bruteMatch = false;
        }
    }
    csv.close();

    out["devByN"] = devTable;
    out["finalDev"] = finalDev;
    out["devMax"] = devMax;
    out["bruteN"] = bruteN;
    out["bruteMatch"] = bruteMatch;
    return finalDev <= devMax && bruteMatch;
}

// --- battery: energy-slopes ----------------------------------------------

bool battery_energy(Params& p, const std::string& csvPath, json& out) {
    struct Family {
        std::string spec;
        std::vector<std::int64_t> ns;
        double slopeMax;
        double residMax;  // < 0: no residual requirement
    };
    const Family fams[2] = {
        {p.str("spec1", "poly:1,0,0"), p.int_list("ns1", "64,128,256,512,1024,2048"),
         p.real("slope1-max", 2.5), p.real("resid1-max", 0.1)},
        {p.str("spec2", "poly:1,0,1,0"), p.int_list("ns2", "64,128,256,512,1024"),
         p.real("slope2-max", 2.6), -1.0},
    };
    GammaRule rule;
    rule.value = p.real("gamma", 1.0);
    p.reject_unknown();

    CsvWriter csv(csvPath, {"family", "n", "gamma", "value"});
    json famOut = json::array();
    bool pass = true;
    for (const Family& f : fams) {
        const ExponentFit fit = energy_exponent(parse_sequence_spec(f.spec), f.ns, rule);
        for (std::size_t i = 0; i < fit.Ns.size(); ++i)
            csv.row({csv_safe(f.spec), format_int(fit.Ns[i]),
                     format_real(rule.gamma_for(fit.Ns[i])),
                     format_real(std::exp2(fit.logValues[i]))});
        const bool ok =
            fit.slope <= f.slopeMax && (f.residMax < 0 || fit.residual < f.residMax);
        famOut.push_back({{"spec", f.spec},
                          {"slope", fit.slope},
                          {"slopeMax", f.slopeMax},
                          {"residual", fit.residual},
                          {"pass", ok}});
        pass = pass && ok;
    }
    csv.close();
    out["families"] = famOut;
    return pass;
}

// --- battery: prop-harness -----------------------------------------------

bool battery_props(Params& p, const std::string& csvPath, json& out) {
    const SequenceSpec spec = parse_sequence_spec(p.str("spec", "power:alpha=1,theta=1.5"));
    const std::vector<std::int64_t> scales = p.int_list("scales", "64,128,256");
    const double K = p.real("k", 1.0);
    const double eps = p.real("eps", 0.1);
    const double driftMax = p.real("drift-max", 2.0);
    const std::vector<std::int64_t> js = p.int_list("j-list", "2,4,8");
    const std::vector<std::int64_t> l2ratios = p.int_list("l2-ratios", "2,4,8");
    const std::int64_t n0div = p.integer("n0-div", 4);
    const std::int64_t multdiv = p.integer("mult-div", 8);
    p.reject_unknown();
    if (n0div < 1 || multdiv < 1)
        throw ValidationError("prop harness: divisors must be >= 1");

    const char* propNames[7] = {"dyadic-partition", "linear",           "decreasing",
                                "increasing",       "multiplicative",   "l2-monotonicity",
                                "main-bound"};
    std::vector<std::vector<std::vector<RatioReport>>> rungs(7);

    for (const std::int64_t R : scales) {
        const SequenceWindow w = generate(spec, R);
        const DifferenceWeights diffs = differences(w, R);
        const DyadicDecomposition dec = dyadic_blocks(diffs);
        if (dec.blocks.empty())
            throw ValidationError("prop harness: no dyadic blocks at scale " + format_int(R));
        // largest block; deterministic tie-break on the first maximum
        const DyadicBlock* sel = &dec.blocks[0];
        for (const auto& b : dec.blocks)
            if (b.end - b.begin > sel->end - sel->begin) sel = &b;
        const auto block = block_entries(diffs, *sel);

        rungs[0].push_back({verify_dyadic_partition(diffs, R, K)});
        std::vector<RatioReport> lin, inc;
        for (const std::int64_t J : js) {
            lin.push_back(verify_linear(block, R, K, J));
            inc.push_back(verify_increasing(block, R, K, J, eps));
        }
        rungs[1].push_back(std::move(lin));
        rungs[2].push_back(
            {verify_decreasing(block, sel->k, R, K, std::max<std::int64_t>(1, R / n0div), eps)});
        rungs[3].push_back(std::move(inc));
        rungs[4].push_back(
            {verify_multiplicative(block, std::max<std::int64_t>(1, R / multdiv), K, eps)});
        std::vector<RatioReport> l2;
        for (const std::int64_t r : l2ratios)
            l2.push_back(verify_l2_monotonicity(block, static_cast<double>(R),
                                                static_cast<double>(R * r)));
        rungs[5].push_back(std::move(l2));
        rungs[6].push_back({verify_main_bound(diffs, R, K, eps)});
    }

    CsvWriter csv(csvPath,
                  {"prop", "scale", "detail", "lhs", "rhs", "ratio", "witness_name", "witness"});
    json props = json::object();
    bool pass = true;
    for (int i = 0; i < 7; ++i) {
        const SweepResult sweep = make_sweep(propNames[i], scales, rungs[static_cast<std::size_t>(i)]);
        std::size_t flat = 0;
        for (std::size_t r = 0; r < scales.size(); ++r)
            for (std::size_t j = 0; j < rungs[static_cast<std::size_t>(i)][r].size(); ++j, ++flat) {
                const RatioReport& rep = sweep.reports[flat];
                std::string detail;
                for (const auto& [key, val] : rep.params) {
                    if (!detail.empty()) detail += ';';
                    detail += key + "=" + format_real(val);
                }
                csv.row({rep.name, format_int(scales[r]), detail, format_real(rep.lhs),
                         format_real(rep.rhs), format_real(rep.ratio), rep.witnessName,
                         rep.witness ? format_real(*rep.witness) : ""});
            }
        const bool ok = sweep.driftFactor < driftMax;
        json rung = json::array();
        for (std::size_t r = 0; r < scales.size(); ++r)
            rung.push_back({{"scale", scales[r]}, {"maxRatio", sweep.rungMaxRatios[r]}});
        props[propNames[i]] = {{"rungs", rung},
                               {"maxRatio", sweep.maxRatio},
                               {"driftFactor", sweep.driftFactor},
                               {"pass", ok}};
        pass = pass && ok;
    }
    csv.close();
    out["driftMax"] = driftMax;
    out["props"] = props;
    return pass;
}

// --- battery: rt-slopes ----------------------------------------------------

bool battery_rt(Params& p, const std::string& csvPath, json& out) {
    const SequenceSpec spec =
        parse_sequence_spec(p.str("spec", "power:alpha=1.4142135623730951,theta=2"));
    const std::vector<std::int64_t> ns = p.int_list("ns", "32,64,128");
    const std::vector<double> epss = p.real_list("eps", "0.05,0.1");
    const double slope1Max = p.real("slope1-max", 1.9);
    const double slope2Max = p.real("slope2-max", 3.95);
    p.reject_unknown();

    const std::int64_t maxN = *std::max_element(ns.begin(), ns.end());
    const SequenceWindow w = generate(spec, maxN);

    // log-log slope over the rungs with positive counts; 0 when fewer than
    // two rungs are positive (the all-zero sum is trivially subpolynomial)
    const auto slope_of = [&](const std::vector<std::int64_t>& counts) {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < counts.size(); ++i)
            if (counts[i] > 0) {
                lx.push_back(std::log2(static_cast<double>(ns[i])));
                ly.push_back(std::log2(static_cast<double>(counts[i])));
            }
        if (lx.size() < 2) return 0.0;
        return fit_line(lx, ly).slope;
    };

    CsvWriter csv(csvPath, {"eps", "n", "m", "threshold", "sum1", "sum2"});
    json runs = json::array();
    bool pass = true;
    bool first = true;
    for (const double eps : epss) {
        std::vector<std::int64_t> s1, s2;
        for (const std::int64_t N : ns) {
            const RtSums rt = rt_sums(w, N, eps);
            csv.row({format_real(eps), format_int(N), format_int(rt.M),
                     format_real(rt.threshold), format_int(rt.sum1), format_int(rt.sum2)});
            s1.push_back(rt.sum1);
            s2.push_back(rt.sum2);
        }
        const double slope1 = slope_of(s1), slope2 = slope_of(s2);
        runs.push_back({{"eps", eps}, {"slope1", slope1}, {"slope2", slope2}});
        if (first) {  // pass is judged at the first (smallest) eps
            pass = slope1 <= slope1Max && slope2 <= slope2Max;
            first = false;
        }
    }
    csv.close();
    out["runs"] = runs;
    out["slope1Max"] = slope1Max;
    out["slope2Max"] = slope2Max;
    return pass;
}

// --- battery: geometry-sweep ------------------------------------------------

bool battery_geometry(Params& p, std::uint64_t seed, int threads, const std::string& csvPath,
                      json& out) {
    const std::int64_t instances = p.integer("instances", 200);
    const double xLo = p.real("x-lo", 0.5), xHi = p.real("x-hi", 8.0);
    const double nLo = p.real("n-lo", 2.0), nHi = p.real("n-hi", 64.0);
    const double kLo = p.real("k-lo", 0.25), kHi = p.real("k-hi", 4.0);
    const double windowMax = p.real("window-max", 64.0);
    p.reject_unknown();
    if (instances < 1) throw ValidationError("geometry sweep: instances must be >= 1");
    if (!(xLo > 0 && xHi >= xLo && nLo > 0 && nHi >= nLo && kLo > 0 && kHi >= kLo))
        throw ValidationError("geometry sweep: bad parameter ranges");

    struct Row {
        LatticeBody body;
        MinkowskiCheck mink;
        CountVsMinima cvm;
        CountVsMinima cvm2;  // at doubled N
    };
    std::vector<Row> rows(static_cast<std::size_t>(instances));
    const Rng parent(seed);
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        Rng rng = parent.derive(i);
        Row& r = rows[i];
        r.body.x1 = std::exp(rng.uniform(std::log(xLo), std::log(xHi)));
        r.body.x2 = std::exp(rng.uniform(std::log(xLo), std::log(xHi)));
        r.body.N = std::exp(rng.uniform(std::log(nLo), std::log(nHi)));
        r.body.K = std::exp(rng.uniform(std::log(kLo), std::log(kHi)));
        r.mink = minkowski_check(r.body);
        r.cvm = count_vs_minima_check(r.body);
        LatticeBody doubled = r.body;
        doubled.N *= 2.0;
        r.cvm2 = count_vs_minima_check(doubled);
    });

    CsvWriter csv(csvPath, {"i", "x1", "x2", "n", "k", "area", "lambda1", "lambda2", "product",
                            "in_window", "count", "bound", "ratio", "count_2n", "bound_2n",
                            "ratio_2n"});
    double prodMin = HUGE_VAL, prodMax = 0.0;
    bool allInWindow = true;
    double cLo = HUGE_VAL, cHi = 0.0, dLo = HUGE_VAL, dHi = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        csv.row({format_int(static_cast<std::int64_t>(i)), format_real(r.body.x1),
                 format_real(r.body.x2), format_real(r.body.N), format_real(r.body.K),
                 format_real(r.mink.area), format_real(r.mink.lambda1),
                 format_real(r.mink.lambda2), format_real(r.mink.product),
                 fmt_bool(r.mink.inWindow), format_int(r.cvm.count), format_real(r.cvm.bound),
                 format_real(r.cvm.ratio), format_int(r.cvm2.count), format_real(r.cvm2.bound),
                 format_real(r.cvm2.ratio)});
        prodMin = std::min(prodMin, r.mink.product);
        prodMax = std::max(prodMax, r.mink.product);
        allInWindow = allInWindow && r.mink.inWindow;
        cLo = std::min(cLo, r.cvm.ratio);
        cHi = std::max(cHi, r.cvm.ratio);
        dLo = std::min(dLo, r.cvm2.ratio);
        dHi = std::max(dHi, r.cvm2.ratio);
    }
    csv.close();

    const double window = cHi / cLo;
    const bool stable = std::max(dHi / cHi, cHi / dHi) < 2.0 &&
                        std::max(dLo / cLo, cLo / dLo) < 2.0;
    out["instances"] = instances;
    out["productMin"] = prodMin;
    out["productMax"] = prodMax;
    out["allInWindow"] = allInWindow;
    out["ratioLo"] = cLo;
    out["ratioHi"] = cHi;
    out["window"] = window;
    out["windowMax"] = windowMax;
    out["ratioLo2N"] = dLo;
    out["ratioHi2N"] = dHi;
    out["stable"] = stable;
    return allInWindow && window <= windowMax && stable;
}

}  // namespace

BatteryOutcome run_battery(const BatteryOptions& opts) {
    static const std::set<std::string> known = {"ppc-convergence", "energy-slopes",
                                                "prop-harness", "rt-slopes", "geometry-sweep"};
    if (!known.count(opts.battery))
        throw ValidationError("unknown battery: " + opts.battery);

    const fs::path dir = opts.outDir.empty() ? fs::path(".") : fs::path(opts.outDir);
    fs::create_directories(dir);
    BatteryOutcome outcome;
    outcome.csvPath = (dir / (opts.battery + ".csv")).string();
    outcome.summaryPath = (dir / "summary.json").string();

    json summary;
    summary["battery"] = opts.battery;
    summary["version"] = kVersion;
    summary["seed"] = opts.seed;
    // Config echo keeps reruns reproducible.  The thread count and output
    // directory are omitted on purpose: neither affects the numbers, and
    // summaries from reruns (same seed, any thread count, any directory)
    // must be byte-identical.
    summary["config"] = json::object();
    for (const auto& [key, val] : opts.config) summary["config"][key] = val;

    Params p(opts.config);
    bool pass = false;
    if (opts.battery == "ppc-convergence")
        pass = battery_ppc(p, outcome.csvPath, summary);
    else if (opts.battery == "energy-slopes")
        pass = battery_energy(p, outcome.csvPath, summary);
    else if (opts.battery == "prop-harness")
        pass = battery_props(p, outcome.csvPath, summary);
    else if (opts.battery == "rt-slopes")
        pass = battery_rt(p, outcome.csvPath, summary);
    else
        pass = battery_geometry(p, opts.seed, opts.threads, outcome.csvPath, summary);

    summary["pass"] = pass;
    outcome.pass = pass;
    std::ofstream out(outcome.summaryPath, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + outcome.summaryPath);
    out << summary.dump(2) << '\n';
    return outcome;
}

BatteryOutcome run_experiment(const std::string& battery, const std::string& configPath,
                              const std::string& outDir, std::uint64_t seed, int threads) {
    BatteryOptions opts;
    opts.battery = battery;
    opts.seed = seed;
    opts.threads = threads;
    opts.outDir = outDir;
    if (!configPath.empty()) opts.config = load_config(configPath);
    return run_battery(opts);
}

}  // namespace ppc
