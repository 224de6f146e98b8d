#pragma once
// Finite-determinacy bounds and complete transversals. Two bound flavors:
// the tangent-image form certifies m^(k0+2) inside m<f> + m^2 j(f) and turns
// that into k = 2 k0 - ord(f) + 2; the polytope form reads a level d off the
// regular basis of the initial part and picks the first jet degree whose
// monomials all sit strictly above d.
//
// Transversals work in the jet window P_{k,l} = m^(k+1)/m^(l+1): rows of the
// first-order tangent space are eliminated with the degree <= k monomials
// leading, so every surviving pivot in the upper block belongs to a row
// supported purely above degree k, and the complement C drops out as the
// unpivoted upper-block monomials.

#include <cstdint>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include "germ/acgrading.hpp"
#include "germ/localalg.hpp"
#include "germ/newton.hpp"

namespace germ {

enum class BoundMethod { TangentImage, Polytope };

struct DeterminacyBound {
    unsigned k = 0;  // f is k-determined
    BoundMethod method = BoundMethod::TangentImage;
    // tangent-image certificate
    unsigned k0 = 0;
    unsigned cert_degree = 0;
    // polytope certificate
    long long d = 0;          // max of v(in(f)) and the basis valuations
    long long witness_v = 0;  // min valuation among degree-(k+1) monomials
};

// m<f> + m^2 j(f), the ideal whose certificate drives the tangent bound.
template <class K>
std::vector<Series<K>> mtangent_gens(const Series<K>& f) {
    std::vector<Series<K>> g;
    for (const auto& u : f.R.monos_of_degree(1)) g.push_back(f.mul_mono(u, f.F.one()));
    for (unsigned i = 0; i < f.R.n; ++i) {
        auto di = f.diff(i);
        for (const auto& u : f.R.monos_of_degree(2)) g.push_back(di.mul_mono(u, f.F.one()));
    }
    return g;
}

template <class K>
DeterminacyBound determinacy_tangent(const Series<K>& f, unsigned max_cap = 0) {
    if (max_cap == 0) max_cap = default_cap(f.R.n);
    auto ord = f.order();
    if (!ord) fail("PreconditionViolated", "the zero series has no determinacy bound");
    auto eng = solve_local(f.F, f.R, mtangent_gens(f), max_cap);
    if (!eng.certified())
        fail("NoBoundBelowCap", "m<f> + m^2 j(f) not certified of finite codimension below cap " +
                                    std::to_string(eng.cap()));
    // The certificate gives m^L inside the ideal at L = cert; walk down while
    // the next lower monomial layer is still contained.
    unsigned L = eng.certificate_degree();
    while (L > 2) {
        bool all = true;
        for (const auto& m : f.R.monos_of_degree(L - 1)) {
            Series<K> s(f.F, f.R);
            s.set(m, f.F.one());
            if (!eng.contains(s)) {
                all = false;
                break;
            }
        }
        if (!all) break;
        --L;
    }
    DeterminacyBound b;
    b.method = BoundMethod::TangentImage;
    b.k0 = L - 2;
    b.cert_degree = eng.certificate_degree();
    long long k = 2LL * b.k0 - static_cast<long long>(*ord) + 2;
    b.k = k < 1 ? 1u : static_cast<unsigned>(k);
    return b;
}

template <class K>
DeterminacyBound determinacy_polytope(const Series<K>& f, const CPolytope& P,
                                      long long val_cap = 0) {
    RegularBasis B;
    try {
        B = regular_basis(f.F, f, P, val_cap);
    } catch (const CalcError& e) {
        if (std::string(e.code()) == "NotFinite")
            fail("RegularBasisInfinite",
                 "the graded Tjurina algebra of the initial part is not finite");
        throw;
    }
    DeterminacyBound b;
    b.method = BoundMethod::Polytope;
    b.d = *vp_series(P, f);  // = v_P(in_P(f))
    for (const auto& [m, v] : B.monomials) b.d = std::max(b.d, v);
    // min valuation per degree grows by at least the least weight entry per
    // step, so the first k whose layer clears d is the smallest one.
    for (unsigned k = 0;; ++k) {
        long long mn = -1;
        for (const auto& m : f.R.monos_of_degree(k + 1)) {
            long long v = vp_mono(P, m);
            if (mn < 0 || v < mn) mn = v;
        }
        if (mn > b.d) {
            b.k = k;
            b.witness_v = mn;
            return b;
        }
    }
}

struct Transversal {
    unsigned from = 0, to = 0;  // jet window (k, l]
    std::vector<Mono> basis;    // complement C
    unsigned codim = 0;         // |C|
    unsigned tangent_dim = 0;   // dim of the tangent space's part inside P_{k,l}
    unsigned space_dim = 0;     // dim P_{k,l}
};

template <class K>
Transversal complete_transversal(const Series<K>& f, unsigned k, unsigned l) {
    if (k > l) fail("PreconditionViolated", "jet window needs k <= l");
    const Ring& R = f.R;
    const K& F = f.F;

    // lower block: degree <= k, upper block: degrees k+1..l
    std::vector<Mono> cols = R.monos_below(k + 1);
    unsigned lower = static_cast<unsigned>(cols.size());
    for (unsigned d = k + 1; d <= l; ++d)
        for (const auto& m : R.monos_of_degree(d)) cols.push_back(m);
    std::unordered_map<Mono, unsigned, MonoHash> colidx;
    for (unsigned i = 0; i < cols.size(); ++i) colidx[cols[i]] = i;

    EchelonSpan<K> span(F, static_cast<unsigned>(cols.size()));
    std::vector<bool> upper_pivot(cols.size() - lower, false);
    auto insert_row = [&](const Series<K>& g) {
        std::vector<typename K::Elem> v(cols.size(), F.zero());
        bool any = false;
        for (const auto& [m, c] : g.terms()) {
            if (mono_deg(m) > l) continue;  // working mod m^(l+1)
            unsigned j = colidx.at(m);
            v[j] = F.add(v[j], c);
            any = true;
        }
        if (!any) return;
        int piv = span.insert(std::move(v));
        if (piv >= 0 && static_cast<unsigned>(piv) >= lower)
            upper_pivot[static_cast<unsigned>(piv) - lower] = true;
    };

    for (unsigned d = 0; d <= l; ++d)
        for (const auto& u : R.monos_of_degree(d)) insert_row(f.mul_mono(u, F.one()));
    for (unsigned i = 0; i < R.n; ++i) {
        auto di = f.diff(i);
        for (unsigned d = 1; d <= l; ++d)
            for (const auto& u : R.monos_of_degree(d)) insert_row(di.mul_mono(u, F.one()));
    }

    Transversal t;
    t.from = k;
    t.to = l;
    t.space_dim = static_cast<unsigned>(cols.size()) - lower;
    for (unsigned i = lower; i < cols.size(); ++i) {
        if (upper_pivot[i - lower])
            ++t.tangent_dim;
        else
            t.basis.push_back(cols[i]);
    }
    t.codim = static_cast<unsigned>(t.basis.size());
    return t;
}

// Codimension of the tangent space at the perturbed jet f + a.
template <class K>
unsigned transversal_cod(const Series<K>& f, const Series<K>& a, unsigned k, unsigned l) {
    return complete_transversal(f.add(a), k, l).codim;
}

struct Cod0Estimate {
    unsigned cod0 = 0;
    bool exhaustive = false;  // sampled minima are upper bounds, label them
    unsigned tried = 0;
};

// Minimum of cod(f + a) over the transversal C: exhaustive over a prime field
// when the grid is small, otherwise a seeded sample.
template <class K>
Cod0Estimate cod0_estimate(const Series<K>& f, unsigned k, unsigned l, unsigned samples = 256,
                           std::uint64_t seed = 0) {
    auto T = complete_transversal(f, k, l);
    Cod0Estimate est;
    est.cod0 = T.codim;  // a = 0
    est.tried = 1;
    if (T.basis.empty()) {
        est.exhaustive = true;
        return est;
    }

    auto eval = [&](const std::vector<typename K::Elem>& coeffs) {
        Series<K> a(f.F, f.R);
        for (size_t i = 0; i < T.basis.size(); ++i) a.add_term(T.basis[i], coeffs[i]);
        unsigned c = transversal_cod(f, a, k, l);
        if (c < est.cod0) est.cod0 = c;
        ++est.tried;
    };

    if constexpr (std::is_same_v<K, PrimeField>) {
        double grid = 1;
        for (size_t i = 0; i < T.basis.size() && grid <= 4096; ++i)
            grid *= static_cast<double>(f.F.p);
        if (grid <= 4096) {
            std::vector<typename K::Elem> coeffs(T.basis.size(), f.F.zero());
            for (;;) {
                size_t j = 0;
                while (j < coeffs.size()) {
                    coeffs[j] = f.F.add(coeffs[j], f.F.one());
                    if (!f.F.is_zero(coeffs[j])) break;
                    ++j;
                }
                if (j == coeffs.size()) break;  // odometer wrapped around
                eval(coeffs);
            }
            est.exhaustive = true;
            return est;
        }
    }

    std::mt19937_64 rng(seed ? seed : 0x5eedULL);
    for (unsigned s = 0; s < samples; ++s) {
        std::vector<typename K::Elem> coeffs;
        coeffs.reserve(T.basis.size());
        for (size_t i = 0; i < T.basis.size(); ++i)
            coeffs.push_back(f.F.from_int(static_cast<long long>(rng() % 19) - 9));
        eval(coeffs);
    }
    return est;
}

// Standard monomials of R / (<f> + m j(f)) without the class of 1: the
// monomials whose deformations span the semiuniversal family.
template <class K>
std::vector<Mono> semiuniversal_basis(const Series<K>& f, unsigned max_cap = 0) {
    if (max_cap == 0) max_cap = default_cap(f.R.n);
    auto eng = solve_local(f.F, f.R, tk_gens(f, 1), max_cap);
    if (!eng.certified())
        fail("Uncertified", "extended Tjurina algebra not certified finite below cap " +
                                std::to_string(eng.cap()));
    std::vector<Mono> out;
    for (const auto& m : eng.standard_monomials())
        if (mono_deg(m) > 0) out.push_back(m);
    return out;
}

}  // namespace germ
