#include "ppc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ppc/analytic.hpp"
#include "ppc/common.hpp"
#include "ppc/energy.hpp"
#include "ppc/geometry.hpp"
#include "ppc/lattice.hpp"
#include "ppc/paircorr.hpp"
#include "ppc/sequences.hpp"
#include "ppc/verifier.hpp"

using json = nlohmann::ordered_json;

namespace ppc {

namespace {

std::vector<std::string> split_commas(const std::string& s) {
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

std::vector<double> parse_real_list(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    for (const std::string& piece : split_commas(s)) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(piece, &pos));
            if (pos != piece.size()) throw std::invalid_argument(piece);
        } catch (const std::exception&) {
            throw ValidationError(flag + ": bad number '" + piece + "'");
        }
    }
    if (out.empty()) throw ValidationError(flag + ": empty list");
    return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& s, const std::string& flag) {
    std::vector<std::int64_t> out;
    for (const std::string& piece : split_commas(s)) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stoll(piece, &pos));
            if (pos != piece.size()) throw std::invalid_argument(piece);
        } catch (const std::exception&) {
            throw ValidationError(flag + ": bad integer '" + piece + "'");
        }
    }
    if (out.empty()) throw ValidationError(flag + ": empty list");
    return out;
}

PpcConvention convention_from(const std::string& s) {
    if (s == "nearest") return PpcConvention::NearestIntegerDistance;
    if (s == "frac") return PpcConvention::LiteralFractionalPart;
    throw ValidationError("--convention must be 'nearest' or 'frac', got '" + s + "'");
}

// "<real>" or "<real>/N", e.g. "0.5" or "1/N"
GammaRule parse_gamma(const std::string& s) {
    GammaRule r;
    std::string num = s;
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        if (s.substr(slash + 1) != "N")
            throw ValidationError("--gamma: expected <real> or <real>/N, got '" + s + "'");
        r.kind = GammaRule::Kind::OneOverN;
        num = s.substr(0, slash);
    }
    try {
        std::size_t pos = 0;
        r.value = std::stod(num, &pos);
        if (pos != num.size()) throw std::invalid_argument(num);
    } catch (const std::exception&) {
        throw ValidationError("--gamma: bad number '" + num + "'");
    }
    if (!(r.value > 0)) throw ValidationError("--gamma must be positive");
    return r;
}

// One "x" or "x w" per line; '#' comments and blank lines skipped; repeated
// x values merge by summing weights.
DifferenceWeights load_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open weights file: " + path);
    std::vector<WeightedPoint> entries;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream iss(line);
        WeightedPoint p;
        p.w = 1;
        if (!(iss >> p.x))
            throw ValidationError(path + ":" + format_int(static_cast<std::int64_t>(lineNo)) +
                                  ": expected a number");
        iss >> p.w;  // optional weight column
        iss.clear();
        std::string extra;
        if (iss >> extra)
            throw ValidationError(path + ":" + format_int(static_cast<std::int64_t>(lineNo)) +
                                  ": trailing junk '" + extra + "'");
        entries.push_back(p);
    }
    if (entries.empty()) throw ValidationError(path + ": no entries");
    std::sort(entries.begin(), entries.end(),
              [](const WeightedPoint& a, const WeightedPoint& b) { return a.x < b.x; });
    std::vector<WeightedPoint> merged;
    for (const auto& e : entries) {
        if (!merged.empty() && merged.back().x == e.x)
            merged.back().w += e.w;
        else
            merged.push_back(e);
    }
    return make_weights(std::move(merged));
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

const char* method_name(MomentMethod m) {
    return m == MomentMethod::NyquistExact ? "nyquist-exact" : "refined";
}

const char* method_name(EnergyMethod m) {
    switch (m) {
        case EnergyMethod::Brute: return "brute";
        case EnergyMethod::TwoPointer: return "twopointer";
        case EnergyMethod::SumMap: return "summap";
    }
    return "?";
}

}  // namespace

int run_cli(std::vector<std::string> args) {
    CLI::App app{"pair correlation, additive energy, and lattice counting toolkit"};
    app.name("paircorr");
    app.require_subcommand(1);
    int exitCode = 0;

    // --- gen ---------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a sequence window file");
    struct {
        std::string spec, out;
        std::int64_t n = 0;
    } g;
    gen->add_option("--spec", g.spec,
                    "power:alpha=A,theta=T | poly:c_k,...,c_0 | sigma:alpha=A,beta=B | "
                    "convex:c=C,e=E")
        ->required();
    gen->add_option("--n", g.n, "window length")->required();
    gen->add_option("--out", g.out, "output path")->required();
    gen->callback([&] {
        const SequenceSpec spec = parse_sequence_spec(g.spec);
        const SequenceWindow w = generate(spec, g.n);
        write_sequence_file(w, g.out);
        emit({{"spec", spec_to_string(spec)}, {"n", g.n}, {"out", g.out}});
    });

    // --- ppc ---------------------------------------------------------------
    auto* ppcCmd = app.add_subcommand("ppc", "pair correlation statistics of a window");
    struct {
        std::string in, s, convention = "nearest", csv;
        double alpha = 1.0;
    } pc;
    ppcCmd->add_option("--in", pc.in, "sequence window file")->required();
    ppcCmd->add_option("--alpha", pc.alpha, "scale applied before reduction mod 1");
    ppcCmd->add_option("--s", pc.s, "comma-separated s grid")->required();
    ppcCmd->add_option("--convention", pc.convention, "nearest | frac");
    ppcCmd->add_option("--csv", pc.csv, "CSV output path (default: stdout)");
    ppcCmd->callback([&] {
        const SequenceWindow w = load_sequence(pc.in);
        PairCorrConfig cfg;
        cfg.sGrid = parse_real_list(pc.s, "--s");
        cfg.convention = convention_from(pc.convention);
        cfg.scaleAlpha = pc.alpha;
        const PairCorrCurve curve = pair_correlation_curve(w, cfg);
        const std::vector<std::string> header = {"s", "count", "R", "two_s", "ratio"};
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : curve.rows)
            rows.push_back({format_real(r.s), format_int(r.count), format_real(r.R),
                            format_real(2.0 * r.s), format_real(r.R / (2.0 * r.s))});
        if (pc.csv.empty()) {
            const auto join = [](const std::vector<std::string>& cells) {
                std::string line;
                for (std::size_t i = 0; i < cells.size(); ++i) {
                    if (i) line += ',';
                    line += cells[i];
                }
                return line;
            };
            std::cout << join(header) << '\n';
            for (const auto& r : rows) std::cout << join(r) << '\n';
        } else {
            CsvWriter csv(pc.csv, header);
            for (const auto& r : rows) csv.row(r);
            csv.close();
            emit({{"n", curve.N},
                  {"alpha", pc.alpha},
                  {"convention", pc.convention},
                  {"deviation", ppc_deviation(curve)},
                  {"csv", pc.csv}});
        }
    });

    // --- energy ------------------------------------------------------------
    auto* en = app.add_subcommand("energy", "approximate additive energy of a window");
    struct {
        std::string in, gamma, method = "auto", csv;
        std::int64_t n = 0;
    } e;
    en->add_option("--in", e.in, "sequence window file")->required();
    en->add_option("--n", e.n, "prefix length (default: whole window)");
    en->add_option("--gamma", e.gamma, "threshold, <real> or <real>/N")->required();
    en->add_option("--method", e.method, "auto | brute | twopointer");
    en->add_option("--csv", e.csv, "optional CSV output path");
    en->callback([&] {
        const SequenceWindow w = load_sequence(e.in);
        const std::int64_t N = e.n == 0 ? w.N : e.n;
        const double gamma = parse_gamma(e.gamma).gamma_for(N);
        EnergyMethod m = EnergyMethod::TwoPointer;
        if (e.method == "brute")
            m = EnergyMethod::Brute;
        else if (e.method != "auto" && e.method != "twopointer")
            throw ValidationError("--method must be auto, brute or twopointer");
        const EnergyResult r = approx_energy(w, N, gamma, m);
        json j = {{"n", r.N},
                  {"gamma", gamma},
                  {"method", method_name(r.method)},
                  {"value", r.value}};
        if (!e.csv.empty()) {
            CsvWriter csv(e.csv, {"n", "gamma", "method", "value"});
            csv.row({format_int(r.N), format_real(gamma), method_name(r.method),
                     format_int(r.value)});
            csv.close();
            j["csv"] = e.csv;
        }
        emit(j);
    });

    // --- energy-slope --------------------------------------------------------
    auto* es = app.add_subcommand("energy-slope", "log-log energy growth of a family");
    struct {
        std::string spec, ns, gamma = "1", csv;
    } sl;
    es->add_option("--spec", sl.spec, "sequence spec")->required();
    es->add_option("--ns", sl.ns, "comma-separated window lengths")->required();
    es->add_option("--gamma", sl.gamma, "threshold rule, <real> or <real>/N");
    es->add_option("--csv", sl.csv, "optional CSV output path");
    es->callback([&] {
        const SequenceSpec spec = parse_sequence_spec(sl.spec);
        const std::vector<std::int64_t> Ns = parse_int_list(sl.ns, "--ns");
        const GammaRule rule = parse_gamma(sl.gamma);
        const ExponentFit fit = energy_exponent(spec, Ns, rule);
        json pts = json::array();
        for (std::size_t i = 0; i < fit.Ns.size(); ++i)
            pts.push_back({{"n", fit.Ns[i]},
                           {"gamma", rule.gamma_for(fit.Ns[i])},
                           {"value", std::exp2(fit.logValues[i])}});
        json j = {{"spec", spec_to_string(spec)},
                  {"slope", fit.slope},
                  {"intercept", fit.intercept},
                  {"residual", fit.residual},
                  {"points", pts}};
        if (!sl.csv.empty()) {
            CsvWriter csv(sl.csv, {"n", "gamma", "value"});
            for (std::size_t i = 0; i < fit.Ns.size(); ++i)
                csv.row({format_int(fit.Ns[i]), format_real(rule.gamma_for(fit.Ns[i])),
                         format_real(std::exp2(fit.logValues[i]))});
            csv.close();
            j["csv"] = sl.csv;
        }
        emit(j);
    });

    // --- scount -----------------------------------------------------------
    auto* sc = app.add_subcommand("scount", "weighted near-match counting sum");
    struct {
        std::string in, method = "auto";
        std::int64_t m = 0, bign = 0;
        double k = 0.0;
    } s;
    sc->add_option("--in", s.in, "weights file: 'x' or 'x w' per line")->required();
    sc->add_option("--m", s.m, "multiplier range 1..M");
    sc->add_option("--bign", s.bign, "dyadic multiplier range (N, 2N]");
    sc->add_option("--k", s.k, "closeness threshold (non-strict)")->required();
    sc->add_option("--method", s.method, "auto | brute | interval | productsort");
    sc->callback([&] {
        if ((s.m > 0) == (s.bign > 0))
            throw ValidationError("scount: give exactly one of --m or --bign");
        SMethod method = SMethod::Auto;
        if (s.method == "brute")
            method = SMethod::Brute;
        else if (s.method == "interval")
            method = SMethod::IntervalPerRow;
        else if (s.method == "productsort")
            method = SMethod::ProductSort;
        else if (s.method != "auto")
            throw ValidationError("--method must be auto, brute, interval or productsort");
        const DifferenceWeights w = load_weights(s.in);
        const std::int64_t value = s.m > 0
                                       ? count_S(w, s.m, s.k, method)
                                       : count_S_dyadic(w.entries, s.bign, s.k, method);
        json j = {{"entries", static_cast<std::int64_t>(w.entries.size())}};
        if (s.m > 0)
            j["m"] = s.m;
        else
            j["bign"] = s.bign;
        j["k"] = s.k;
        j["method"] = s.method;
        j["value"] = value;
        emit(j);
    });

    // --- minima ------------------------------------------------------------
    auto* mn = app.add_subcommand("minima", "successive minima of the slab body");
    struct {
        double x1 = 0, x2 = 0, n = 0, k = 0;
    } b;
    mn->add_option("--x1", b.x1, "first coefficient")->required();
    mn->add_option("--x2", b.x2, "second coefficient")->required();
    mn->add_option("--n", b.n, "box half-width parameter")->required();
    mn->add_option("--k", b.k, "slab half-width")->required();
    mn->callback([&] {
        const LatticeBody body{b.x1, b.x2, b.n, b.k};
        const MinimaResult mr = successive_minima(body);
        const BodyArea ar = body_area(body);
        emit({{"lambda1", mr.lambda1},
              {"lambda2", mr.lambda2},
              {"v1", {mr.v1[0], mr.v1[1]}},
              {"v2", {mr.v2[0], mr.v2[1]}},
              {"area", ar.area},
              {"minkowski", ar.area * mr.lambda1 * mr.lambda2}});
    });

    // --- moment -----------------------------------------------------------
    auto* mo = app.add_subcommand("moment", "even moment of a polynomial exponential sum");
    struct {
        std::string poly, method = "auto";
        std::int64_t n = 0, pow = 0;
    } mm;
    mo->add_option("--poly", mm.poly, "coefficients high -> low, e.g. 1,0,0,0")->required();
    mo->add_option("--n", mm.n, "range length")->required();
    mo->add_option("--pow", mm.pow, "moment order 2s (even)")->required();
    mo->add_option("--method", mm.method, "auto | exact | refined");
    mo->callback([&] {
        const std::vector<double> coeffs = parse_real_list(mm.poly, "--poly");
        std::optional<MomentMethod> method;
        if (mm.method == "exact")
            method = MomentMethod::NyquistExact;
        else if (mm.method == "refined")
            method = MomentMethod::Refined;
        else if (mm.method != "auto")
            throw ValidationError("--method must be auto, exact or refined");
        const MomentResult r = hua_moment(coeffs, mm.n, mm.pow, method);
        emit({{"poly", mm.poly},
              {"n", mm.n},
              {"pow", mm.pow},
              {"value", r.value},
              {"errorEstimate", r.errorEstimate},
              {"gridSize", r.gridSize},
              {"method", method_name(r.method)}});
    });

    // --- mv ----------------------------------------------------------------
    auto* mv = app.add_subcommand("mv", "mean value of a weighted Dirichlet polynomial");
    struct {
        std::string in;
        double t = 0.0;
        std::int64_t bign = 0;
    } m;
    mv->add_option("--in", m.in, "weights file: 'x' or 'x w' per line")->required();
    mv->add_option("--t", m.t, "half-length of the t range")->required();
    mv->add_option("--bign", m.bign,
                   "attach the range (N, 2N] and compare against the dyadic counting sum");
    mv->callback([&] {
        const DifferenceWeights w = load_weights(m.in);
        if (m.bign > 0) {
            const double lo = w.entries.front().x;
            if (lo < 1.0)
                throw ValidationError("mv --bign: weights must satisfy x >= 1");
            const int k = std::ilogb(lo);
            if (!(w.entries.back().x < std::ldexp(1.0, k + 1)))
                throw ValidationError(
                    "mv --bign: weights must lie in a single dyadic octave [2^k, 2^(k+1))");
            const SandwichResult sr = sum_integral_sandwich(w.entries, k, m.bign, m.t);
            emit({{"k", k},
                  {"bign", m.bign},
                  {"t", m.t},
                  {"stilde", sr.stilde},
                  {"value", sr.integral.value},
                  {"errorEstimate", sr.integral.errorEstimate},
                  {"gridSize", sr.integral.gridSize},
                  {"ratio", sr.ratio}});
        } else {
            const std::vector<RealPoint> pts = to_points(w.entries);
            const MomentResult r = mean_value_integral(pts, m.t);
            emit({{"t", m.t},
                  {"value", r.value},
                  {"errorEstimate", r.errorEstimate},
                  {"gridSize", r.gridSize},
                  {"closedForm", mean_value_closed_form(pts, m.t)},
                  {"pairCount", mean_value_pair_count(pts, m.t)}});
        }
    });

    // --- verify -------------------------------------------------------------
    auto* vf = app.add_subcommand("verify", "run a named verification battery");
    struct {
        std::string battery, config, out = ".";
        std::uint64_t seed = 1;
        int threads = 0;
    } v;
    vf->add_option("--battery", v.battery,
                   "ppc-convergence | energy-slopes | prop-harness | rt-slopes | geometry-sweep")
        ->required();
    vf->add_option("--config", v.config, "key=value config file");
    vf->add_option("--out", v.out, "output directory");
    vf->add_option("--seed", v.seed, "PRNG seed (default 1)");
    vf->add_option("--threads", v.threads, "worker threads (0 = auto; PAIRCORR_THREADS wins)");
    vf->callback([&] {
        const BatteryOutcome o =
            run_experiment(v.battery, v.config, v.out, v.seed, resolve_threads(v.threads));
        emit({{"battery", v.battery},
              {"pass", o.pass},
              {"summary", o.summaryPath},
              {"csv", o.csvPath}});
        if (!o.pass) exitCode = 1;
    });

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& err) {
        const int rc = app.exit(err);
        return rc == 0 ? 0 : 1;
    } catch (const ValidationError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    } catch (const FeasibilityError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "internal error: " << err.what() << '\n';
        return 2;
    }
    return exitCode;
}

}  // namespace ppc
