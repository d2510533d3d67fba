#include "ppc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "ppc/common.hpp"

namespace ppc {

namespace {

constexpr std::int64_t kEnumCap = 1'000'000;        // ||v||_inf hard cap
constexpr std::int64_t kCandidateCap = 200'000'000;  // total gauge evaluations

void validate_body(const LatticeBody& b) {
    if (!(b.x1 > 0) || !(b.x2 > 0) || !(b.N > 0) || !(b.K > 0))
        throw ValidationError("lattice body requires x1, x2, N, K > 0");
}

// gauge with precomputed reciprocals; v must be nonzero
inline double gauge_fast(const LatticeBody& b, double inv2N, double invK, std::int64_t v1,
                         std::int64_t v2) {
    const double a = std::fabs(static_cast<double>(v1)) * inv2N;
    const double c = std::fabs(static_cast<double>(v2)) * inv2N;
    const double s = std::fabs(b.x1 * static_cast<double>(v1) - b.x2 * static_cast<double>(v2)) * invK;
    return std::max(std::max(a, c), s);
}

struct Candidate {
    double f = 0.0;
    Vec2 v{0, 0};
    bool valid = false;
};

// (gauge, |v1|, |v2|, v1, v2) lexicographic order on sign-normalized vectors
bool better(double f, const Vec2& v, const Candidate& cur) {
    if (!cur.valid) return true;
    if (f != cur.f) return f < cur.f;
    const std::int64_t a1 = std::llabs(v[0]), a2 = std::llabs(v[1]);
    const std::int64_t c1 = std::llabs(cur.v[0]), c2 = std::llabs(cur.v[1]);
    if (a1 != c1) return a1 < c1;
    if (a2 != c2) return a2 < c2;
    if (v[0] != cur.v[0]) return v[0] < cur.v[0];
    return v[1] < cur.v[1];
}

// Enumerates candidate vectors with F(v) possibly <= cap and feeds them to
// visit(v1, v2, f).  The strip |x1 v1 - x2 v2| <= K*cap restricts v2 to a
// short interval per v1, so thin bodies stay cheap.
template <typename Visit>
void enumerate_region(const LatticeBody& b, double cap, std::int64_t B, Visit&& visit) {
    const double inv2N = 1.0 / (2.0 * b.N);
    const double invK = 1.0 / b.K;
    const double kcap = b.K * cap;
    for (std::int64_t v1 = -B; v1 <= B; ++v1) {
        const double p = b.x1 * static_cast<double>(v1);
        std::int64_t lo = static_cast<std::int64_t>(std::ceil((p - kcap) / b.x2)) - 2;
        std::int64_t hi = static_cast<std::int64_t>(std::floor((p + kcap) / b.x2)) + 2;
        lo = std::max(lo, -B);
        hi = std::min(hi, B);
        for (std::int64_t v2 = lo; v2 <= hi; ++v2) {
            if (v1 == 0 && v2 == 0) continue;
            visit(v1, v2, gauge_fast(b, inv2N, invK, v1, v2));
        }
    }
}

}  // namespace

double gauge(const LatticeBody& b, const Vec2& v) {
    validate_body(b);
    if (v[0] == 0 && v[1] == 0) throw ValidationError("gauge: zero vector");
    return gauge_fast(b, 1.0 / (2.0 * b.N), 1.0 / b.K, v[0], v[1]);
}

GaussBasis gauss_reduce(double g11, double g12, double g22) {
    if (!(g11 > 0) || !(g22 > 0) || !(g11 * g22 - g12 * g12 > 0))
        throw ValidationError("gauss_reduce: form must be positive definite");
    const auto q = [&](const Vec2& v) {
        const double a = static_cast<double>(v[0]), c = static_cast<double>(v[1]);
        return g11 * a * a + 2.0 * g12 * a * c + g22 * c * c;
    };
    const auto inner = [&](const Vec2& u, const Vec2& v) {
        const double u1 = static_cast<double>(u[0]), u2 = static_cast<double>(u[1]);
        const double v1 = static_cast<double>(v[0]), v2 = static_cast<double>(v[1]);
        return g11 * u1 * v1 + g12 * (u1 * v2 + u2 * v1) + g22 * u2 * v2;
    };
    GaussBasis gb;
    for (int iter = 0; iter < 64; ++iter) {
        if (q(gb.b2) < q(gb.b1)) std::swap(gb.b1, gb.b2);
        const double mu = std::nearbyint(inner(gb.b1, gb.b2) / q(gb.b1));
        if (mu == 0.0) break;
        const std::int64_t m = static_cast<std::int64_t>(mu);
        gb.b2[0] -= m * gb.b1[0];
        gb.b2[1] -= m * gb.b1[1];
    }
    if (q(gb.b2) < q(gb.b1)) std::swap(gb.b1, gb.b2);
    gb.q1 = q(gb.b1);
    gb.q2 = q(gb.b2);
    return gb;
}

MinimaResult successive_minima(const LatticeBody& b) {
    validate_body(b);
    // Quadratic surrogate Q dominates F^2 and is at most 3 F^2, so the second
    // minimum of Q caps lambda2 and bounds the search box.
    const double inv2N = 1.0 / (2.0 * b.N);
    const double invK = 1.0 / b.K;
    const double g11 = inv2N * inv2N + (b.x1 * invK) * (b.x1 * invK);
    const double g22 = inv2N * inv2N + (b.x2 * invK) * (b.x2 * invK);
    const double g12 = -b.x1 * b.x2 * invK * invK;
    const GaussBasis gb = gauss_reduce(g11, g12, g22);
    const double cap = std::sqrt(gb.q2) * (1.0 + 1e-12);

    const double boxReal = 2.0 * b.N * cap;
    if (boxReal > static_cast<double>(kEnumCap))
        throw FeasibilityError("successive_minima: search box " + format_real(boxReal) +
                               " exceeds the ||v||_inf cap of " + format_int(kEnumCap));
    const std::int64_t B = static_cast<std::int64_t>(std::floor(boxReal)) + 1;
    const double stripWidth = 2.0 * b.K * cap / b.x2 + 5.0;
    const double est = (2.0 * static_cast<double>(B) + 1.0) *
                       std::min(2.0 * static_cast<double>(B) + 1.0, stripWidth);
    if (est > static_cast<double>(kCandidateCap))
        throw FeasibilityError("successive_minima: enumeration would visit ~" +
                               format_real(est) + " candidates");

    Candidate best1;
    enumerate_region(b, cap, B, [&](std::int64_t v1, std::int64_t v2, double f) {
        if (f > cap) return;
        Vec2 v{v1, v2};
        if (v[0] < 0 || (v[0] == 0 && v[1] < 0)) {
            v[0] = -v[0];
            v[1] = -v[1];
        }
        if (better(f, v, best1)) best1 = {f, v, true};
    });
    // gb.b2 guarantees at least one independent vector within the cap, and b1
    // itself witnesses some vector, so both candidates must exist.
    if (!best1.valid) throw std::logic_error("successive_minima: empty enumeration");

    Candidate best2;
    enumerate_region(b, cap, B, [&](std::int64_t v1, std::int64_t v2, double f) {
        if (f > cap) return;
        if (v1 * best1.v[1] - v2 * best1.v[0] == 0) return;  // dependent
        Vec2 v{v1, v2};
        if (v[0] < 0 || (v[0] == 0 && v[1] < 0)) {
            v[0] = -v[0];
            v[1] = -v[1];
        }
        if (better(f, v, best2)) best2 = {f, v, true};
    });
    if (!best2.valid) throw std::logic_error("successive_minima: no independent vector found");

    MinimaResult r;
    r.lambda1 = best1.f;
    r.lambda2 = best2.f;
    r.v1 = best1.v;
    r.v2 = best2.v;
    r.searchBound = B;
    return r;
}

BodyArea body_area(const LatticeBody& b) {
    validate_body(b);
    // Clip the square against both halfplanes of the strip, then shoelace.
    struct Pt {
        double x, y;
    };
    const double s = 2.0 * b.N;
    std::vector<Pt> poly = {{-s, -s}, {s, -s}, {s, s}, {-s, s}};
    // halfplane a*x + c*y <= k
    const auto clip = [](const std::vector<Pt>& in, double a, double c, double k) {
        std::vector<Pt> out;
        const std::size_t n = in.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Pt& P = in[i];
            const Pt& Q = in[(i + 1) % n];
            const double dp = a * P.x + c * P.y - k;
            const double dq = a * Q.x + c * Q.y - k;
            if (dp <= 0) out.push_back(P);
            if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0)) {
                const double t = dp / (dp - dq);
                out.push_back({P.x + t * (Q.x - P.x), P.y + t * (Q.y - P.y)});
            }
        }
        return out;
    };
    poly = clip(poly, b.x1, -b.x2, b.K);
    poly = clip(poly, -b.x1, b.x2, b.K);
    double twiceArea = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Pt& P = poly[i];
        const Pt& Q = poly[(i + 1) % poly.size()];
        twiceArea += P.x * Q.y - Q.x * P.y;
    }
    BodyArea a;
    a.area = std::fabs(twiceArea) / 2.0;
    a.stripBound = 4.0 * (2.0 * b.N) * b.K / b.x1;
    return a;
}

std::int64_t lattice_point_count(const LatticeBody& b) {
    validate_body(b);
    const double s = 2.0 * b.N;
    if (s > 1e4) throw FeasibilityError("lattice_point_count: requires 2N <= 10^4");
    const std::int64_t B = static_cast<std::int64_t>(std::floor(s));
    std::int64_t count = 0;
    for (std::int64_t y1 = -B; y1 <= B; ++y1) {
        const double p = b.x1 * static_cast<double>(y1);
        std::int64_t lo = static_cast<std::int64_t>(std::ceil((p - b.K) / b.x2)) - 2;
        std::int64_t hi = static_cast<std::int64_t>(std::floor((p + b.K) / b.x2)) + 2;
        lo = std::max(lo, -B);
        hi = std::min(hi, B);
        while (lo <= hi && !(std::fabs(p - b.x2 * static_cast<double>(lo)) <= b.K)) ++lo;
        while (hi >= lo && !(std::fabs(p - b.x2 * static_cast<double>(hi)) <= b.K)) --hi;
        if (lo <= hi) count += hi - lo + 1;
    }
    return count;
}

MinkowskiCheck minkowski_check(const LatticeBody& b) {
    const BodyArea a = body_area(b);
    const MinimaResult m = successive_minima(b);
    MinkowskiCheck c;
    c.area = a.area;
    c.lambda1 = m.lambda1;
    c.lambda2 = m.lambda2;
    c.product = a.area * m.lambda1 * m.lambda2;
    c.inWindow = c.product >= 2.0 - 1e-6 && c.product <= 4.0 + 1e-6;
    return c;
}

CountVsMinima count_vs_minima_check(const LatticeBody& b) {
    const MinimaResult m = successive_minima(b);
    CountVsMinima c;
    c.count = lattice_point_count(b);
    c.bound = std::max(1.0, 1.0 / m.lambda1) * std::max(1.0, 1.0 / m.lambda2);
    c.ratio = static_cast<double>(c.count) / c.bound;
    return c;
}

}  // namespace ppc
