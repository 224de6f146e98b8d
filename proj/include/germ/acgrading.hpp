#pragma once
// The valuation-graded Tjurina algebra attached to a C-polytope. The ideal
// layer at level d is spanned by products g*f and derivation images xi(f)
// whose coefficient valuations already account for d, i.e.
//   min{ v(g) + v(f), v(xi) + v(f) } >= d,
// not merely v(h) >= d. Levels are the scaled integer valuations from the
// polytope, and each piece is the quotient of the valuation-d monomial space
// by the valuation-d components of those generators.
//
// Derivations may carry negative valuation (d/dy alone has v = -v_P(y)), so
// the ideal reaches below v_P(f); only levels below v_P(f) minus the largest
// weight entry see the full monomial space survive.
//
// Finiteness is certified by a window of zero pieces of width
// max_i v_P(x_i) + 1: any monomial above the window splits off a variable
// whose cofactor was already reduced at a level inside or above the window,
// and membership is stable under multiplying by that variable.

#include <string>
#include <utility>
#include <vector>

#include "germ/localalg.hpp"
#include "germ/newton.hpp"

namespace germ {

struct GradedPiece {
    long long degree = 0;  // scaled valuation level
    unsigned dimension = 0;
    std::vector<Mono> standard;  // valuation-d monomials surviving the quotient
};

struct RegularBasis {
    std::vector<std::pair<Mono, long long>> monomials;  // with their valuations
    bool finite = false;
    long long window_lo = 0, window_hi = 0;  // zero stretch certifying finiteness
};

namespace ac_detail {

inline long long min_weight_entry(const CPolytope& P) {
    long long m = 0;
    bool first = true;
    for (const auto& W : P.weights)
        for (unsigned i = 0; i < P.n; ++i)
            if (first || W[i] < m) { m = W[i]; first = false; }
    return m;
}

inline long long max_weight_entry(const CPolytope& P) {
    long long m = 0;
    for (const auto& W : P.weights)
        for (unsigned i = 0; i < P.n; ++i) m = std::max(m, W[i]);
    return m;
}

// max_i v_P(x_i), the width parameter of the certification window.
inline long long max_var_valuation(const CPolytope& P) {
    long long m = 0;
    for (unsigned i = 0; i < P.n; ++i) {
        Mono e = mono_one();
        e[i] = 1;
        m = std::max(m, vp_mono(P, e));
    }
    return m;
}

}  // namespace ac_detail

// One graded piece F_d / (ideal layer + F_{d+1}), computed on f as given.
// Callers wanting the initial-part normalization apply it beforehand.
template <class K>
GradedPiece ac_piece(const K& F, const Series<K>& f, const CPolytope& P, long long d) {
    if (f.is_zero()) fail("PreconditionViolated", "graded pieces need a nonzero series");
    if (d < 0) fail("PreconditionViolated", "valuation levels are nonnegative");
    long long vf = *vp_series(P, f);
    long long minent = ac_detail::min_weight_entry(P);
    long long maxent = ac_detail::max_weight_entry(P);

    GradedPiece piece;
    piece.degree = d;

    // Valuation-d monomials; every weight entry is >= minent, so their total
    // degree is bounded by d / minent.
    std::vector<Mono> cols;
    for (const auto& m : f.R.monos_below(static_cast<unsigned>(d / minent) + 1))
        if (vp_mono(P, m) == d) cols.push_back(m);
    if (cols.empty()) return piece;

    std::unordered_map<Mono, unsigned, MonoHash> colidx;
    for (unsigned i = 0; i < cols.size(); ++i) colidx[cols[i]] = i;

    EchelonSpan<K> span(F, static_cast<unsigned>(cols.size()));
    auto insert_component = [&](const Series<K>& prod) {
        std::vector<typename K::Elem> v(cols.size(), F.zero());
        bool any = false;
        for (const auto& [m, c] : prod.terms()) {
            if (vp_mono(P, m) != d) continue;  // higher-valuation part is F_{d+1}
            unsigned j = colidx.at(m);
            v[j] = F.add(v[j], c);
            any = true;
        }
        if (any) span.insert(std::move(v));
    };

    // Products u*f with v(u) + v(f) = d; higher-valuation u cannot reach level d.
    if (d >= vf) {
        unsigned ub = static_cast<unsigned>((d - vf) / minent) + 1;
        for (const auto& u : f.R.monos_below(ub))
            if (vp_mono(P, u) == d - vf) insert_component(f.mul_mono(u, F.one()));
    }

    // Derivation images u * df/dx_i with v(u d/dx_i) + v(f) = d. The operator
    // valuation can be as low as -maxent, which is what lets the ideal act
    // below v(f).
    if (d - vf + maxent >= 0) {
        std::vector<Series<K>> derivs;
        for (unsigned i = 0; i < f.R.n; ++i) derivs.push_back(f.diff(i));
        unsigned ub = static_cast<unsigned>((d - vf + maxent) / minent) + 1;
        for (const auto& u : f.R.monos_below(ub))
            for (unsigned i = 0; i < f.R.n; ++i)
                if (vp_derivation(P, u, i) == d - vf)
                    insert_component(derivs[i].mul_mono(u, F.one()));
    }

    piece.dimension = static_cast<unsigned>(cols.size()) - span.pivot_count();
    for (unsigned i = 0; i < cols.size(); ++i)
        if (!span.has_pivot(i)) piece.standard.push_back(cols[i]);
    return piece;
}

// Union of the piece bases for increasing level, stopping at the first zero
// window of width max_i v_P(x_i) + 1. Computed on the initial part of f by
// default (the graded algebra only depends on it); on_initial = false runs on
// the raw series for cross-checking.
template <class K>
RegularBasis regular_basis(const K& F, const Series<K>& f, const CPolytope& P,
                           long long val_cap = 0, bool on_initial = true) {
    if (f.is_zero()) fail("PreconditionViolated", "regular basis needs a nonzero series");
    Series<K> g = on_initial ? initial_part(f, P) : f;
    long long vf = *vp_series(P, g);
    long long width = ac_detail::max_var_valuation(P) + 1;
    if (val_cap <= 0) val_cap = 3 * std::max<long long>(vf, 1) + 4 * width;

    RegularBasis out;
    long long run = 0;
    for (long long d = 0; d <= val_cap; ++d) {
        auto piece = ac_piece(F, g, P, d);
        if (piece.dimension == 0) {
            if (++run == width) {
                out.finite = true;
                out.window_lo = d - width + 1;
                out.window_hi = d;
                return out;
            }
            continue;
        }
        run = 0;
        for (const auto& m : piece.standard) out.monomials.emplace_back(m, d);
    }
    fail("NotFinite", "no zero window of width " + std::to_string(width) +
                          " below valuation cap " + std::to_string(val_cap));
}

// Number of monomials in the standard basis of the extended Tjurina algebra
// with valuation in [v_P(f), l]; the orbit-dimension defect of the graded
// group action, whose growth across a characteristic witnesses extra moduli.
template <class K>
unsigned high_valuation_count(const K& F, const Series<K>& f, const CPolytope& P,
                              long long l, unsigned max_cap = 0) {
    if (max_cap == 0) max_cap = default_cap(f.R.n);
    auto eng = solve_local(F, f.R, tk_gens(f, 1), max_cap);
    if (!eng.certified())
        fail("Uncertified", "extended Tjurina algebra not certified finite below cap " +
                                std::to_string(max_cap));
    long long d = *vp_series(P, f);
    unsigned count = 0;
    for (const auto& m : eng.standard_monomials()) {
        long long v = vp_mono(P, m);
        if (v >= d && v <= l) ++count;
    }
    return count;
}

}  // namespace germ
