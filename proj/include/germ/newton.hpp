#pragma once
// Newton diagrams and C-polytopes for n <= 3, with the induced valuation.
// A C-polytope is stored as the list of its facet functionals: primitive
// integer inner normals with rational levels. The rational weight vectors
// are normal/level entrywise; N_P clears their denominators, and the scaled
// integer weights W_i = N_P * normal_i / level_i drive every valuation:
// v_P(x^a) = min_i W_i . a.

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "germ/errors.hpp"
#include "germ/field.hpp"
#include "germ/ring.hpp"
#include "germ/series.hpp"

namespace germ {

using RatPoint = std::array<BigRat, 3>;

struct Facet {
    std::array<long long, 3> normal{};  // primitive, strictly positive entries
    BigRat level;
};

struct CPolytope {
    unsigned n = 0;
    std::vector<Facet> facets;
    std::vector<std::array<long long, 3>> weights;  // N_P-scaled, sorted
    long long scale = 1;                            // N_P
    std::string source;
};

namespace newton_detail {

inline BigRat dot(const std::array<long long, 3>& n, const RatPoint& p, unsigned dim) {
    BigRat s = 0;
    for (unsigned i = 0; i < dim; ++i) s += BigRat(n[i]) * p[i];
    return s;
}

inline bool dominates(const RatPoint& a, const RatPoint& b, unsigned dim) {
    // b >= a componentwise
    for (unsigned i = 0; i < dim; ++i)
        if (b[i] < a[i]) return false;
    return true;
}

// Scale a rational direction to a primitive integer vector (entries already
// known non-negative where required by the caller).
inline std::array<long long, 3> primitive(const std::array<BigRat, 3>& v, unsigned dim) {
    BigInt l = 1;
    for (unsigned i = 0; i < dim; ++i) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(v[i]));
    std::array<BigInt, 3> w{};
    BigInt g = 0;
    for (unsigned i = 0; i < dim; ++i) {
        w[i] = boost::multiprecision::numerator(v[i]) * (l / boost::multiprecision::denominator(v[i]));
        g = boost::multiprecision::gcd(g, w[i]);
    }
    std::array<long long, 3> out{};
    for (unsigned i = 0; i < dim; ++i) out[i] = (w[i] / g).convert_to<long long>();
    return out;
}

inline void add_facet(std::vector<Facet>& facets, std::array<long long, 3> n, const BigRat& c) {
    for (const auto& f : facets)
        if (f.normal == n && f.level == c) return;
    facets.push_back({n, c});
}

inline CPolytope finish(unsigned dim, std::vector<Facet> facets, std::string source) {
    if (facets.empty())
        fail("PreconditionViolated", "point configuration has no compact facets");
    CPolytope P;
    P.n = dim;
    P.facets = std::move(facets);
    P.source = std::move(source);
    // N_P = lcm of the denominators of normal/level, entrywise.
    BigInt N = 1;
    for (const auto& f : P.facets) {
        if (f.level <= 0)
            fail("PreconditionViolated", "facet level must be positive (unit series?)");
        for (unsigned i = 0; i < dim; ++i) {
            BigRat w = BigRat(f.normal[i]) / f.level;
            N = boost::multiprecision::lcm(N, boost::multiprecision::denominator(w));
        }
    }
    P.scale = N.convert_to<long long>();
    for (const auto& f : P.facets) {
        std::array<long long, 3> W{};
        for (unsigned i = 0; i < dim; ++i) {
            BigRat w = BigRat(f.normal[i]) * P.scale / f.level;
            if (boost::multiprecision::denominator(w) != 1)
                fail("InternalError", "weight scaling failed to clear denominators");
            W[i] = boost::multiprecision::numerator(w).convert_to<long long>();
        }
        P.weights.push_back(W);
    }
    std::sort(P.weights.begin(), P.weights.end());
    return P;
}

inline std::vector<RatPoint> dominance_filter(std::vector<RatPoint> pts, unsigned dim) {
    std::vector<RatPoint> out;
    for (size_t i = 0; i < pts.size(); ++i) {
        bool keep = true;
        for (size_t j = 0; j < pts.size() && keep; ++j) {
            if (i == j) continue;
            if (dominates(pts[j], pts[i], dim) && !(pts[i] == pts[j])) keep = false;
            if (pts[i] == pts[j] && j < i) keep = false;
        }
        if (keep) out.push_back(pts[i]);
    }
    return out;
}

inline void check_convenient(const std::vector<RatPoint>& pts, unsigned dim,
                             const Ring& R, const char* errcode) {
    std::string missing;
    for (unsigned ax = 0; ax < dim; ++ax) {
        bool found = false;
        for (const auto& p : pts) {
            bool on_axis = true;
            for (unsigned i = 0; i < dim; ++i)
                if (i != ax && p[i] != 0) { on_axis = false; break; }
            if (on_axis && p[ax] > 0) { found = true; break; }
        }
        if (!found) {
            if (!missing.empty()) missing += ", ";
            missing += R.names[ax];
        }
    }
    if (!missing.empty())
        fail(errcode, "support misses the coordinate axes: " + missing);
}

inline CPolytope hull(std::vector<RatPoint> pts, unsigned dim, const Ring& R,
                      std::string source, const char* conv_err) {
    for (const auto& p : pts)
        for (unsigned i = 0; i < dim; ++i)
            if (p[i] < 0) fail("PreconditionViolated", "points must have non-negative coordinates");
    pts = dominance_filter(std::move(pts), dim);
    if (pts.empty()) fail("PreconditionViolated", "empty point configuration");
    for (const auto& p : pts) {
        bool origin = true;
        for (unsigned i = 0; i < dim; ++i)
            if (p[i] != 0) origin = false;
        if (origin) fail("PreconditionViolated", "origin in the support (unit series)");
    }
    check_convenient(pts, dim, R, conv_err);

    std::vector<Facet> facets;
    if (dim == 1) {
        // after domination a single point x^a survives
        facets.push_back({{1, 0, 0}, pts[0][0]});
        return finish(dim, std::move(facets), std::move(source));
    }
    if (dim == 2) {
        std::sort(pts.begin(), pts.end(), [](const RatPoint& a, const RatPoint& b) {
            if (a[0] != b[0]) return a[0] < b[0];
            return a[1] < b[1];
        });
        // lower-left convex chain from the y-axis point to the x-axis point
        std::vector<RatPoint> chain;
        for (const auto& p : pts) {
            while (chain.size() >= 2) {
                const auto& a = chain[chain.size() - 2];
                const auto& b = chain[chain.size() - 1];
                BigRat cross = (b[0] - a[0]) * (p[1] - b[1]) - (b[1] - a[1]) * (p[0] - b[0]);
                if (cross <= 0) chain.pop_back();
                else break;
            }
            chain.push_back(p);
        }
        for (size_t i = 0; i + 1 < chain.size(); ++i) {
            const auto& a = chain[i];
            const auto& b = chain[i + 1];
            auto n = primitive({a[1] - b[1], b[0] - a[0], BigRat(0)}, 2);
            add_facet(facets, n, BigRat(n[0]) * a[0] + BigRat(n[1]) * a[1]);
        }
        return finish(dim, std::move(facets), std::move(source));
    }

    // dim == 3: supporting-plane test over all non-collinear triples
    size_t m = pts.size();
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i + 1; j < m; ++j) {
            for (size_t k = j + 1; k < m; ++k) {
                std::array<BigRat, 3> u{pts[j][0] - pts[i][0], pts[j][1] - pts[i][1],
                                        pts[j][2] - pts[i][2]};
                std::array<BigRat, 3> v{pts[k][0] - pts[i][0], pts[k][1] - pts[i][1],
                                        pts[k][2] - pts[i][2]};
                std::array<BigRat, 3> cr{u[1] * v[2] - u[2] * v[1],
                                         u[2] * v[0] - u[0] * v[2],
                                         u[0] * v[1] - u[1] * v[0]};
                if (cr[0] == 0 && cr[1] == 0 && cr[2] == 0) continue;  // collinear
                // orient toward positive entries
                bool all_pos = cr[0] > 0 && cr[1] > 0 && cr[2] > 0;
                bool all_neg = cr[0] < 0 && cr[1] < 0 && cr[2] < 0;
                if (!all_pos && !all_neg) continue;
                if (all_neg)
                    for (auto& e : cr) e = -e;
                auto n = primitive(cr, 3);
                BigRat c = dot(n, pts[i], 3);
                bool supports = true;
                for (size_t t = 0; t < m && supports; ++t)
                    if (dot(n, pts[t], 3) < c) supports = false;
                if (supports) add_facet(facets, n, c);
            }
        }
    }
    return finish(dim, std::move(facets), std::move(source));
}

} // namespace newton_detail

template <class K>
std::vector<RatPoint> support_points(const Series<K>& f) {
    std::vector<RatPoint> pts;
    for (const auto& [m, c] : f.terms()) {
        (void)c;
        pts.push_back({BigRat(m[0]), BigRat(m[1]), BigRat(m[2])});
    }
    return pts;
}

template <class K>
CPolytope newton_diagram(const Series<K>& f) {
    if (f.R.n > 3) fail("PreconditionViolated", "Newton diagrams are limited to n <= 3");
    if (f.is_zero()) fail("PreconditionViolated", "zero series has no Newton diagram");
    return newton_detail::hull(support_points(f), f.R.n, f.R, "NewtonDiagram", "NotConvenient");
}

template <class K>
CPolytope expand_diagram(const Series<K>& f, const std::vector<RatPoint>& extra) {
    if (f.R.n > 3) fail("PreconditionViolated", "Newton diagrams are limited to n <= 3");
    auto pts = support_points(f);
    pts.insert(pts.end(), extra.begin(), extra.end());
    if (pts.empty()) fail("PreconditionViolated", "nothing to build a polytope from");
    return newton_detail::hull(std::move(pts), f.R.n, f.R, "ExpandedDiagram", "StillNotConvenient");
}

// C-polytope directly from rational weight vectors (each lambda_i = 1 on its
// facet), the converse construction.
inline CPolytope polytope_from_weights(unsigned dim, const std::vector<std::array<BigRat, 3>>& ws) {
    if (ws.empty()) fail("PreconditionViolated", "need at least one weight vector");
    std::vector<Facet> facets;
    for (const auto& w : ws) {
        for (unsigned i = 0; i < dim; ++i)
            if (w[i] <= 0) fail("PreconditionViolated", "weight entries must be positive");
        auto n = newton_detail::primitive(w, dim);
        // lambda = w . r, facet at lambda = 1: level c with n/c = w
        BigRat c = BigRat(n[0]) / w[0];
        facets.push_back({n, c});
    }
    return newton_detail::finish(dim, std::move(facets), "UserWeights");
}

inline long long vp_mono(const CPolytope& P, const Mono& m) {
    long long best = 0;
    bool first = true;
    for (const auto& W : P.weights) {
        long long v = 0;
        for (unsigned i = 0; i < P.n; ++i) v += W[i] * static_cast<long long>(m[i]);
        if (first || v < best) { best = v; first = false; }
    }
    return best;
}

// Valuation of the derivation x^u d/dx_i; the shifted exponent may leave the
// positive orthant, the linear functionals extend as they are.
inline long long vp_derivation(const CPolytope& P, const Mono& u, unsigned i) {
    long long best = 0;
    bool first = true;
    for (const auto& W : P.weights) {
        long long v = -W[i];
        for (unsigned j = 0; j < P.n; ++j) v += W[j] * static_cast<long long>(u[j]);
        if (first || v < best) { best = v; first = false; }
    }
    return best;
}

template <class K>
std::optional<long long> vp_series(const CPolytope& P, const Series<K>& f) {
    std::optional<long long> best;
    for (const auto& [m, c] : f.terms()) {
        (void)c;
        long long v = vp_mono(P, m);
        if (!best || v < *best) best = v;
    }
    return best;
}

// Per-facet valuation v_i (min of W_i over the support).
template <class K>
std::optional<long long> vp_facet(const CPolytope& P, unsigned facet, const Series<K>& f) {
    std::optional<long long> best;
    const auto& W = P.weights[facet];
    for (const auto& [m, c] : f.terms()) {
        (void)c;
        long long v = 0;
        for (unsigned i = 0; i < P.n; ++i) v += W[i] * static_cast<long long>(m[i]);
        if (!best || v < *best) best = v;
    }
    return best;
}

template <class K>
Series<K> initial_part(const Series<K>& f, const CPolytope& P) {
    if (f.is_zero()) fail("PreconditionViolated", "zero series has no initial part");
    auto v = *vp_series(P, f);
    Series<K> r(f.F, f.R);
    for (const auto& [m, c] : f.terms())
        if (vp_mono(P, m) == v) r.set(m, c);
    return r;
}

struct ProductCheck {
    bool equality = false;
    int facet = -1;  // a common facet index when equality holds
    long long v_f = 0, v_g = 0, v_fg = 0;
};

// Decide v_P(fg) = v_P(f) + v_P(g) by direct expansion, and report the
// witnessing facet: equality holds exactly when some facet computes both
// valuations.
template <class K>
ProductCheck vp_product_check(const Series<K>& f, const Series<K>& g, const CPolytope& P) {
    if (f.is_zero() || g.is_zero())
        fail("PreconditionViolated", "product check needs nonzero series");
    ProductCheck out;
    out.v_f = *vp_series(P, f);
    out.v_g = *vp_series(P, g);
    unsigned cap = f.max_degree() + g.max_degree() + 1;
    auto fg = f.mul_trunc(g, cap);
    out.v_fg = *vp_series(P, fg);
    out.equality = (out.v_fg == out.v_f + out.v_g);
    if (out.equality) {
        for (unsigned i = 0; i < P.weights.size(); ++i) {
            if (*vp_facet(P, i, f) == out.v_f && *vp_facet(P, i, g) == out.v_g) {
                out.facet = static_cast<int>(i);
                break;
            }
        }
    }
    return out;
}

} // namespace germ
