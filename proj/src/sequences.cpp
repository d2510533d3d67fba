#include "ppc/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ppc/common.hpp"

namespace ppc {

namespace {

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

double parse_double(const std::string& s, const std::string& what) {
    const char* c = s.c_str();
    char* end = nullptr;
    double v = std::strtod(c, &end);
    if (end == c || *end != '\0' || !std::isfinite(v))
        throw ValidationError("bad number for " + what + ": '" + s + "'");
    return v;
}

// key=value[,key=value...] parser for the spec mini-language
std::vector<std::pair<std::string, std::string>> parse_kv(const std::string& body) {
    std::vector<std::pair<std::string, std::string>> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ValidationError("expected key=value in sequence spec, got '" + item + "'");
        out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    return out;
}

double horner(const std::vector<double>& coeffs, double n) {
    double acc = 0.0;
    for (double c : coeffs) acc = acc * n + c;
    return acc;
}

}  // namespace

SequenceWindow generate(const SequenceSpec& spec, std::int64_t N) {
    if (N < 1) throw ValidationError("generate: N must be >= 1");
    SequenceWindow w;
    w.N = N;
    w.spec = spec;
    w.values.reserve(static_cast<std::size_t>(N));

    if (const auto* p = std::get_if<PowerSpec>(&spec)) {
        if (!(p->alpha > 0) || !(p->theta > 0))
            throw ValidationError("power spec requires alpha > 0 and theta > 0");
        for (std::int64_t n = 1; n <= N; ++n)
            w.values.push_back(p->alpha * std::pow(static_cast<double>(n), p->theta));
    } else if (const auto* p = std::get_if<PolynomialSpec>(&spec)) {
        if (p->coeffs.size() < 3)
            throw ValidationError("polynomial spec requires degree >= 2");
        if (p->coeffs.front() == 0.0)
            throw ValidationError("polynomial spec requires a nonzero leading coefficient");
        for (std::int64_t n = 1; n <= N; ++n)
            w.values.push_back(horner(p->coeffs, static_cast<double>(n)));
    } else if (const auto* p = std::get_if<ConvexSyntheticSpec>(&spec)) {
        if (!(p->c > 0)) throw ValidationError("convex spec requires c > 0");
        double gap = p->c;  // g_1
        double x = gap;     // x_1
        w.values.push_back(x);
        for (std::int64_t n = 2; n <= N; ++n) {
            gap += p->c * std::pow(static_cast<double>(n), p->gapExponent);
            x += gap;
            w.values.push_back(x);
        }
    } else if (const auto* p = std::get_if<SigmaBetaSpec>(&spec)) {
        if (!(p->alpha > 0)) throw ValidationError("sigma spec requires alpha > 0");
        // divisor sieve: add d^beta to every multiple of d
        std::vector<double> sigma(static_cast<std::size_t>(N) + 1, 0.0);
        for (std::int64_t d = 1; d <= N; ++d) {
            const double dpow = std::pow(static_cast<double>(d), p->beta);
            for (std::int64_t m = d; m <= N; m += d) sigma[static_cast<std::size_t>(m)] += dpow;
        }
        for (std::int64_t n = 1; n <= N; ++n)
            w.values.push_back(p->alpha * sigma[static_cast<std::size_t>(n)]);
    } else if (const auto* p = std::get_if<ExternalSpec>(&spec)) {
        SequenceWindow loaded = load_sequence(p->path);
        if (loaded.N < N)
            throw ValidationError("external sequence has only " + format_int(loaded.N) +
                                  " values, requested " + format_int(N));
        loaded.values.resize(static_cast<std::size_t>(N));
        loaded.N = N;
        loaded.sortedAscending = strictly_increasing(loaded.values);
        return loaded;
    }

    w.sortedAscending = strictly_increasing(w.values);
    return w;
}

SequenceSpec parse_sequence_spec(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ValidationError("sequence spec needs the form kind:params, got '" + text + "'");
    const std::string kind = text.substr(0, colon);
    const std::string body = text.substr(colon + 1);

    if (kind == "power") {
        PowerSpec p;
        for (const auto& [k, v] : parse_kv(body)) {
            if (k == "alpha") p.alpha = parse_double(v, "alpha");
            else if (k == "theta") p.theta = parse_double(v, "theta");
            else throw ValidationError("unknown power parameter '" + k + "'");
        }
        return p;
    }
    if (kind == "poly") {
        PolynomialSpec p;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ','))
            p.coeffs.push_back(parse_double(item, "poly coefficient"));
        if (p.coeffs.size() < 3)
            throw ValidationError("poly spec needs at least 3 coefficients (degree >= 2)");
        return p;
    }
    if (kind == "sigma") {
        SigmaBetaSpec p;
        for (const auto& [k, v] : parse_kv(body)) {
            if (k == "alpha") p.alpha = parse_double(v, "alpha");
            else if (k == "beta") p.beta = parse_double(v, "beta");
            else throw ValidationError("unknown sigma parameter '" + k + "'");
        }
        return p;
    }
    if (kind == "convex") {
        ConvexSyntheticSpec p;
        for (const auto& [k, v] : parse_kv(body)) {
            if (k == "c") p.c = parse_double(v, "c");
            else if (k == "e") p.gapExponent = parse_double(v, "e");
            else throw ValidationError("unknown convex parameter '" + k + "'");
        }
        return p;
    }
    if (kind == "file") {
        return ExternalSpec{body};
    }
    throw ValidationError("unknown sequence kind '" + kind + "'");
}

std::string spec_to_string(const SequenceSpec& spec) {
    if (const auto* p = std::get_if<PowerSpec>(&spec))
        return "power:alpha=" + format_real(p->alpha) + ",theta=" + format_real(p->theta);
    if (const auto* p = std::get_if<PolynomialSpec>(&spec)) {
        std::string s = "poly:";
        for (std::size_t i = 0; i < p->coeffs.size(); ++i) {
            if (i) s += ',';
            s += format_real(p->coeffs[i]);
        }
        return s;
    }
    if (const auto* p = std::get_if<ConvexSyntheticSpec>(&spec))
        return "convex:c=" + format_real(p->c) + ",e=" + format_real(p->gapExponent);
    if (const auto* p = std::get_if<SigmaBetaSpec>(&spec))
        return "sigma:alpha=" + format_real(p->alpha) + ",beta=" + format_real(p->beta);
    if (const auto* p = std::get_if<ExternalSpec>(&spec)) return "file:" + p->path;
    return "?";
}

bool check_spacing(const SequenceWindow& w, double c, double eta) {
    if (!w.sortedAscending)
        throw ValidationError("check_spacing requires an ascending window");
    for (std::int64_t n = 1; n < w.N; ++n) {
        const double gap = w.values[static_cast<std::size_t>(n)] - w.values[static_cast<std::size_t>(n - 1)];
        if (gap < c * std::pow(static_cast<double>(n), eta - 1.0)) return false;
    }
    return true;
}

std::int64_t short_interval_count(const SequenceWindow& w, double X, double H) {
    if (H < 0) throw ValidationError("short_interval_count: H must be >= 0");
    std::vector<double> sorted = w.values;
    std::sort(sorted.begin(), sorted.end());
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), X);
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), X + H);
    return static_cast<std::int64_t>(hi - lo);
}

SequenceWindow load_sequence(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open sequence file: " + path);
    SequenceWindow w;
    w.spec = ExternalSpec{path};
    std::string line;
    std::int64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // trim
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        std::string tok = line.substr(b, e - b + 1);
        if (tok[0] == '#') continue;
        const char* c = tok.c_str();
        char* end = nullptr;
        double v = std::strtod(c, &end);
        if (end == c || *end != '\0' || !std::isfinite(v))
            throw ValidationError(path + ": line " + format_int(lineno) +
                                  ": expected one real number, got '" + tok + "'");
        w.values.push_back(v);
    }
    if (w.values.empty()) throw ValidationError(path + ": no values found");
    w.N = static_cast<std::int64_t>(w.values.size());
    w.sortedAscending = strictly_increasing(w.values);
    return w;
}

void write_sequence_file(const SequenceWindow& w, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << "# " << spec_to_string(w.spec) << " N=" << w.N << "\n";
    for (double v : w.values) out << format_real(v) << "\n";
}

std::int64_t duplicate_count(const SequenceWindow& w) {
    std::vector<double> sorted = w.values;
    std::sort(sorted.begin(), sorted.end());
    std::int64_t dups = 0;
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] == sorted[i - 1]) ++dups;
    return dups;
}

SequenceWindow sorted_copy(const SequenceWindow& w) {
    SequenceWindow s = w;
    std::sort(s.values.begin(), s.values.end());
    s.sortedAscending = strictly_increasing(s.values);
    return s;
}

}  // namespace ppc
