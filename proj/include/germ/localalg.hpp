#pragma once
// Finite-dimensional quotients of the local ring k[[x_1..x_n]] by ideals
// generated from a germ: the Tjurina algebra and its relatives. The engine
// row-reduces monomial multiples of the generators degree by degree, with
// columns indexed by monomials below a truncation cap in canonical order.
//
// Soundness rests on two facts. Multiples inserted at stage d have order
// exactly d, so reduction can only move a row's leading monomial later in
// the order; pivots at degree <= d are final once stage d is done. And if
// some degree d* has every monomial pivoted, then m^d* lies in I + m^(d*+1),
// which bootstraps to m^d* inside I itself, so the quotient is read off the
// non-pivot columns below d* and the truncation cap drops out of the answer.

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <vector>

#include "germ/errors.hpp"
#include "germ/ring.hpp"
#include "germ/series.hpp"

namespace germ {

// Row-echelon accumulator over a fixed ordered column set. Rows are stored
// from their leading column onward, normalized to a unit lead.
template <class K>
class EchelonSpan {
public:
    using Elem = typename K::Elem;

    EchelonSpan(const K& F, unsigned ncols)
        : F_(F), ncols_(ncols), pivot_at_(ncols, -1) {}

    unsigned ncols() const { return ncols_; }
    unsigned pivot_count() const { return static_cast<unsigned>(rows_.size()); }
    bool has_pivot(unsigned col) const { return pivot_at_[col] >= 0; }

    // Reduce v against the current rows and adopt it if anything is left.
    // Returns the new pivot column, or -1 if the row reduced to zero.
    int insert(std::vector<Elem> v) {
        unsigned i = reduce(v);
        if (i == ncols_) return -1;
        auto inv = F_.inv(v[i]);
        Row r;
        r.lead = i;
        r.tail.assign(v.begin() + i, v.end());
        for (auto& e : r.tail) e = F_.mul(e, inv);
        pivot_at_[i] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(r));
        return static_cast<int>(i);
    }

    // Forward reduction in place; returns the leading nonzero column of the
    // residual (ncols if it vanished). The residual has no pivot columns.
    unsigned reduce(std::vector<Elem>& v) const {
        unsigned lead = ncols_;
        for (unsigned i = 0; i < ncols_; ++i) {
            if (F_.is_zero(v[i])) continue;
            int r = pivot_at_[i];
            if (r < 0) {
                if (lead == ncols_) lead = i;
                continue;
            }
            const Row& row = rows_[static_cast<size_t>(r)];
            Elem c = v[i];
            for (size_t j = 0; j < row.tail.size(); ++j)
                v[i + j] = F_.sub(v[i + j], F_.mul(c, row.tail[j]));
        }
        return lead;
    }

private:
    struct Row {
        unsigned lead = 0;
        std::vector<Elem> tail;
    };

    K F_;
    unsigned ncols_;
    std::vector<int> pivot_at_;
    std::vector<Row> rows_;
};

struct QuotientReport {
    bool finite = false;
    unsigned certificate_degree = 0;
    std::uint64_t dimension = 0;
    std::vector<Mono> standard_monomials;
    unsigned cap_used = 0;
};

template <class K>
class LocalQuotient {
public:
    using Elem = typename K::Elem;

    LocalQuotient(const K& F, const Ring& R, std::vector<Series<K>> gens, unsigned cap)
        : F_(F), R_(R), gens_(std::move(gens)), cap_(cap),
          cols_(R_.monos_below(cap)),
          span_(F, static_cast<unsigned>(cols_.size())) {
        for (unsigned i = 0; i < cols_.size(); ++i) colidx_[cols_[i]] = i;
        layer_first_.assign(cap_ + 1, 0);
        for (unsigned d = 0; d <= cap_; ++d)
            layer_first_[d] = static_cast<unsigned>(R_.count_below(d));
        run();
    }

    const K& field() const { return F_; }
    const Ring& ring() const { return R_; }
    unsigned cap() const { return cap_; }

    bool certified() const { return cert_.has_value(); }
    unsigned certificate_degree() const {
        require_certified();
        return *cert_;
    }

    std::uint64_t dimension() const {
        require_certified();
        std::uint64_t dim = 0;
        for (unsigned i = 0; i < layer_first_[*cert_]; ++i)
            if (!span_.has_pivot(i)) ++dim;
        return dim;
    }

    std::vector<Mono> standard_monomials() const {
        require_certified();
        std::vector<Mono> out;
        for (unsigned i = 0; i < layer_first_[*cert_]; ++i)
            if (!span_.has_pivot(i)) out.push_back(cols_[i]);
        return out;
    }

    // Ideal membership, decided exactly: with a certificate at d*, the whole
    // of m^d* lies in the ideal, so h is in I iff its reduced form vanishes
    // below degree d*.
    bool contains(const Series<K>& h) const {
        auto v = residual(h);
        for (unsigned i = 0; i < layer_first_[*cert_]; ++i)
            if (!F_.is_zero(v[i])) return false;
        return true;
    }

    // Coordinates of h modulo the ideal, on the standard monomial basis.
    std::vector<Elem> coords(const Series<K>& h) const {
        auto v = residual(h);
        std::vector<Elem> out;
        for (unsigned i = 0; i < layer_first_[*cert_]; ++i)
            if (!span_.has_pivot(i)) out.push_back(v[i]);
        return out;
    }

    QuotientReport report() const {
        QuotientReport r;
        r.cap_used = cap_;
        r.finite = certified();
        if (r.finite) {
            r.certificate_degree = *cert_;
            r.dimension = dimension();
            r.standard_monomials = standard_monomials();
        }
        return r;
    }

private:
    K F_;
    Ring R_;
    std::vector<Series<K>> gens_;
    unsigned cap_;
    std::vector<Mono> cols_;
    std::unordered_map<Mono, unsigned, MonoHash> colidx_;
    std::vector<unsigned> layer_first_;
    EchelonSpan<K> span_;
    std::optional<unsigned> cert_;

    void require_certified() const {
        if (!cert_)
            fail("NotCertified", "quotient not certified finite below the cap (cap " +
                                     std::to_string(cap_) + ")");
    }

    std::vector<Elem> to_row(const Series<K>& g, const Mono& u) const {
        std::vector<Elem> v(cols_.size(), F_.zero());
        for (const auto& [m, c] : g.terms()) {
            Mono mm = mono_mul(u, m);
            if (mono_deg(mm) >= cap_) continue;
            v[colidx_.at(mm)] = F_.add(v[colidx_.at(mm)], c);
        }
        return v;
    }

    std::vector<Elem> residual(const Series<K>& h) const {
        require_certified();
        if (!(h.R == R_) || !h.F.same_field(F_))
            fail("FieldMismatch", "query series lives in a different ring or field");
        auto v = to_row(h, mono_one());
        span_.reduce(v);
        return v;
    }

    bool layer_full(unsigned d) const {
        for (unsigned i = layer_first_[d]; i < layer_first_[d + 1]; ++i)
            if (!span_.has_pivot(i)) return false;
        return true;
    }

    void run() {
        unsigned min_ord = cap_;
        std::vector<unsigned> ords;
        for (const auto& g : gens_) {
            auto o = g.order();
            unsigned ov = o ? *o : cap_;
            ords.push_back(ov);
            min_ord = std::min(min_ord, ov);
        }
        for (unsigned d = min_ord; d < cap_; ++d) {
            for (size_t gi = 0; gi < gens_.size(); ++gi) {
                if (ords[gi] > d) continue;
                for (const auto& u : R_.monos_of_degree(d - ords[gi]))
                    span_.insert(to_row(gens_[gi], u));
            }
            if (layer_full(d)) {
                cert_ = d;
                return;
            }
        }
    }
};

// Run the engine with iterative deepening: start near the generator degrees
// and double the cap until a certificate appears or max_cap is exhausted.
template <class K>
LocalQuotient<K> solve_local(const K& F, const Ring& R, const std::vector<Series<K>>& gens,
                             unsigned max_cap) {
    if (max_cap < 2) max_cap = 2;
    unsigned maxdeg = 2;
    bool all_zero = true;
    for (const auto& g : gens) {
        if (!g.is_zero()) all_zero = false;
        maxdeg = std::max(maxdeg, g.max_degree());
    }
    unsigned cap = std::min<unsigned>(max_cap, std::max(8u, maxdeg + 2));
    if (all_zero) cap = 2;  // nothing will certify; do not burn memory on it
    for (;;) {
        LocalQuotient<K> eng(F, R, gens, cap);
        if (eng.certified() || cap >= max_cap || all_zero) return eng;
        cap = std::min(max_cap, cap * 2);
    }
}

inline unsigned default_cap(unsigned nvars) {
    if (nvars <= 2) return 60;
    if (nvars == 3) return 40;
    return 20;
}

// Generator families for the standard quotients.

template <class K>
std::vector<Series<K>> tjurina_gens(const Series<K>& f) {
    std::vector<Series<K>> g{f};
    for (unsigned i = 0; i < f.R.n; ++i) g.push_back(f.diff(i));
    return g;
}

// <f> + m^k j(f); k = 0 recovers the Tjurina ideal, k = 1 the extended one.
template <class K>
std::vector<Series<K>> tk_gens(const Series<K>& f, unsigned k) {
    std::vector<Series<K>> g{f};
    auto mults = f.R.monos_of_degree(k);
    for (unsigned i = 0; i < f.R.n; ++i) {
        auto di = f.diff(i);
        for (const auto& u : mults) g.push_back(di.mul_mono(u, f.F.one()));
    }
    return g;
}

template <class K>
QuotientReport tau(const Series<K>& f, unsigned max_cap = 0) {
    if (max_cap == 0) max_cap = default_cap(f.R.n);
    return solve_local(f.F, f.R, tjurina_gens(f), max_cap).report();
}

template <class K>
QuotientReport tau_ext(const Series<K>& f, unsigned max_cap = 0) {
    if (max_cap == 0) max_cap = default_cap(f.R.n);
    return solve_local(f.F, f.R, tk_gens(f, 1), max_cap).report();
}

template <class K>
QuotientReport tk_dim(const Series<K>& f, unsigned k, unsigned max_cap = 0) {
    if (max_cap == 0) max_cap = default_cap(f.R.n);
    return solve_local(f.F, f.R, tk_gens(f, k), max_cap).report();
}

// Check whether the given residues form a k-basis of the quotient: right
// count and full rank after reduction to standard-monomial coordinates.
template <class K>
bool is_basis(const K& F, const Ring& R, const std::vector<Series<K>>& gens,
              const std::vector<Series<K>>& cands, unsigned max_cap = 0) {
    if (max_cap == 0) max_cap = default_cap(R.n);
    auto eng = solve_local(F, R, gens, max_cap);
    if (!eng.certified())
        fail("NotCertified", "quotient not certified finite; basis check impossible");
    auto dim = eng.dimension();
    if (cands.size() != dim) return false;
    EchelonSpan<K> mat(F, static_cast<unsigned>(dim));
    unsigned rank = 0;
    for (const auto& c : cands) {
        if (mat.insert(eng.coords(c)) >= 0) ++rank;
    }
    return rank == dim;
}

} // namespace germ
