#pragma once
// Truncated multivariate power series (equivalently, polynomials with a
// degree cap) over any of the coefficient fields. Every series carries its
// field and ring so operations can check compatibility. Terms are kept in
// canonical order, which makes printing and leading-term access direct.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "germ/errors.hpp"
#include "germ/ring.hpp"

namespace germ {

struct MonoBefore {
    bool operator()(const Mono& a, const Mono& b) const { return mono_before(a, b); }
};

template <class K>
class Series {
public:
    using Elem = typename K::Elem;
    using TermMap = std::map<Mono, Elem, MonoBefore>;

    K F;
    Ring R;

    Series() = default;
    Series(K field, Ring ring) : F(std::move(field)), R(std::move(ring)) {}

    static Series zero(const K& F, const Ring& R) { return Series(F, R); }
    static Series constant(const K& F, const Ring& R, const Elem& c) {
        Series s(F, R);
        s.set(mono_one(), c);
        return s;
    }
    static Series variable(const K& F, const Ring& R, unsigned i) {
        Series s(F, R);
        s.set(R.var(i), F.one());
        return s;
    }
    static Series monomial(const K& F, const Ring& R, const Mono& m, const Elem& c) {
        Series s(F, R);
        s.set(m, c);
        return s;
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    Elem coeff(const Mono& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? F.zero() : it->second;
    }

    void set(const Mono& m, const Elem& c) {
        if (F.is_zero(c)) terms_.erase(m);
        else terms_[m] = c;
    }

    void add_term(const Mono& m, const Elem& c) {
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!F.is_zero(c)) terms_.emplace(m, c);
        } else {
            it->second = F.add(it->second, c);
            if (F.is_zero(it->second)) terms_.erase(it);
        }
    }

    // Order of vanishing: the least total degree present. Zero series has no
    // order.
    std::optional<unsigned> order() const {
        if (terms_.empty()) return std::nullopt;
        return mono_deg(terms_.begin()->first);
    }

    unsigned max_degree() const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, mono_deg(m));
        return d;
    }

    Series add(const Series& o) const {
        check_same(o);
        Series r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }
    Series sub(const Series& o) const {
        check_same(o);
        Series r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, F.neg(c));
        return r;
    }
    Series neg() const {
        Series r = *this;
        for (auto& [m, c] : r.terms_) c = F.neg(c);
        return r;
    }
    Series scale(const Elem& s) const {
        Series r(F, R);
        if (F.is_zero(s)) return r;
        for (const auto& [m, c] : terms_) r.set(m, F.mul(c, s));
        return r;
    }

    // Product with all terms of total degree >= cap dropped.
    Series mul_trunc(const Series& o, unsigned cap) const {
        check_same(o);
        Series r(F, R);
        for (const auto& [ma, ca] : terms_) {
            unsigned da = mono_deg(ma);
            if (da >= cap) continue;
            for (const auto& [mb, cb] : o.terms_) {
                if (da + mono_deg(mb) >= cap) continue;
                r.add_term(mono_mul(ma, mb), F.mul(ca, cb));
            }
        }
        return r;
    }

    Series mul_mono(const Mono& m, const Elem& c) const {
        Series r(F, R);
        if (F.is_zero(c)) return r;
        for (const auto& [ma, ca] : terms_) r.set(mono_mul(ma, m), F.mul(ca, c));
        return r;
    }

    // Keep only terms of total degree <= k.
    Series jet(unsigned k) const {
        Series r(F, R);
        for (const auto& [m, c] : terms_) {
            if (mono_deg(m) > k) break;
            r.set(m, c);
        }
        return r;
    }

    // Truncation mod m^cap: keep degrees < cap.
    Series trunc(unsigned cap) const { return cap == 0 ? Series(F, R) : jet(cap - 1); }

    // The degree-d homogeneous component.
    Series component(unsigned d) const {
        Series r(F, R);
        for (const auto& [m, c] : terms_)
            if (mono_deg(m) == d) r.set(m, c);
        return r;
    }

    Series diff(unsigned i) const {
        if (i >= R.n) fail("PreconditionViolated", "derivative index out of range");
        Series r(F, R);
        for (const auto& [m, c] : terms_) {
            if (m[i] == 0) continue;
            auto nc = F.mul(c, F.from_int(m[i]));
            if (F.is_zero(nc)) continue;
            Mono nm = m;
            nm[i] = static_cast<std::uint16_t>(nm[i] - 1);
            r.set(nm, nc);
        }
        return r;
    }

    // Substitute x_i -> images[i], truncating at m^cap. Every image must
    // vanish at the origin (a local map); otherwise the result would need
    // infinitely many terms.
    Series subst_trunc(const std::vector<Series>& images, unsigned cap) const {
        if (images.size() != R.n)
            fail("PreconditionViolated", "substitution needs one image per variable");
        for (const auto& im : images) {
            if (!F.is_zero(im.coeff(mono_one())))
                fail("NotLocalMap", "substitution image has a nonzero constant term");
        }
        const Ring& TR = images.empty() ? R : images[0].R;
        // Memoized powers images[i]^e, all truncated at cap.
        std::vector<std::vector<Series>> pw(R.n);
        auto power = [&](unsigned i, unsigned e) -> const Series& {
            auto& v = pw[i];
            if (v.empty()) v.push_back(constant(F, TR, F.one()));
            while (v.size() <= e) v.push_back(v.back().mul_trunc(images[i], cap));
            return v[e];
        };
        Series r(F, TR);
        for (const auto& [m, c] : terms_) {
            if (mono_deg(m) >= cap) continue;
            Series t = constant(F, TR, c);
            for (unsigned i = 0; i < R.n; ++i)
                if (m[i] > 0) t = t.mul_trunc(power(i, m[i]), cap);
            r = r.add(t);
        }
        return r;
    }

    // Inverse of a series with unit constant term, mod m^cap.
    Series invert_unit(unsigned cap) const {
        auto c0 = coeff(mono_one());
        if (F.is_zero(c0)) fail("NotAUnit", "series has zero constant term");
        auto c0i = F.inv(c0);
        // f = c0 (1 - h), ord h >= 1; 1/f = c0^{-1} (1 + h + h^2 + ...).
        Series h = constant(F, R, F.one()).sub(scale(c0i)).trunc(cap);
        Series acc = constant(F, R, F.one());
        Series pow = constant(F, R, F.one());
        for (unsigned k = 1; k < cap; ++k) {
            pow = pow.mul_trunc(h, cap);
            if (pow.is_zero()) break;
            acc = acc.add(pow);
        }
        return acc.scale(c0i).trunc(cap);
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            std::string cs = F.to_string(c);
            std::string ms = R.mono_string(m);
            std::string term;
            if (ms == "1") term = cs;
            else if (cs == "1") term = ms;
            else if (cs == "-1") term = "-" + ms;
            else if (cs.find(' ') != std::string::npos)
                term = "(" + cs + ")*" + ms;
            else term = cs + "*" + ms;
            if (out.empty()) out = term;
            else if (!term.empty() && term[0] == '-') out += " - " + term.substr(1);
            else out += " + " + term;
        }
        return out;
    }

    bool eq(const Series& o) const {
        check_same(o);
        if (terms_.size() != o.terms_.size()) return false;
        auto a = terms_.begin();
        auto b = o.terms_.begin();
        for (; a != terms_.end(); ++a, ++b) {
            if (a->first != b->first || !F.eq(a->second, b->second)) return false;
        }
        return true;
    }

private:
    TermMap terms_;

    void check_same(const Series& o) const {
        if (!(R == o.R) || !F.same_field(o.F))
            fail("FieldMismatch", "operands live in different rings or fields");
    }
};

// Solve f = 0 for variable j as a series g in the remaining variables with
// g(0) = 0, to precision N (result exact mod m^{N+1}). Requires f(0) = 0 and
// d f / d x_j a unit at the origin; this is the implicit function theorem
// made effective by Newton iteration with doubling precision.
template <class K>
Series<K> hensel_solve(const Series<K>& f, unsigned j, unsigned N) {
    const K& F = f.F;
    const Ring& R = f.R;
    if (j >= R.n) fail("PreconditionViolated", "solve variable index out of range");
    if (!F.is_zero(f.coeff(mono_one())))
        fail("PreconditionViolated", "hensel solve needs f(0) = 0");
    auto fj = f.diff(j);
    if (F.is_zero(fj.coeff(mono_one())))
        fail("NotHenselian", "partial derivative in the solve variable is not a unit");

    Series<K> g(F, R);
    unsigned prec = 1;
    for (;;) {
        unsigned cap = prec + 1;
        std::vector<Series<K>> images;
        for (unsigned i = 0; i < R.n; ++i)
            images.push_back(i == j ? g : Series<K>::variable(F, R, i));
        auto val = f.subst_trunc(images, cap);
        auto der = fj.subst_trunc(images, cap);
        g = g.sub(val.mul_trunc(der.invert_unit(cap), cap)).trunc(cap);
        if (prec >= N) break;
        prec = std::min(2 * prec, N);
    }
    // The solution lives in the variables other than j.
    for (const auto& [m, c] : g.terms())
        if (m[j] != 0) fail("InternalError", "hensel solution not independent of solve variable");
    return g;
}

// Corank of the Hessian of f at the origin. Characteristic 2 is refused:
// the quadratic form cannot be read off the symmetric matrix there.
template <class K>
unsigned hessian_corank(const Series<K>& f) {
    const K& F = f.F;
    const Ring& R = f.R;
    if (F.characteristic() == 2) fail("CharTwoUnsupported", "Hessian corank undefined in characteristic 2");
    unsigned n = R.n;
    std::vector<std::vector<typename K::Elem>> H(n, std::vector<typename K::Elem>(n, F.zero()));
    auto two = F.from_int(2);
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned k = i; k < n; ++k) {
            Mono m{};
            m[i] = static_cast<std::uint16_t>(m[i] + 1);
            m[k] = static_cast<std::uint16_t>(m[k] + 1);
            auto c = f.coeff(m);
            if (i == k) c = F.mul(c, two);
            H[i][k] = c;
            H[k][i] = c;
        }
    }
    // Gaussian elimination rank.
    unsigned rank = 0;
    for (unsigned col = 0; col < n && rank < n; ++col) {
        unsigned piv = n;
        for (unsigned r = rank; r < n; ++r)
            if (!F.is_zero(H[r][col])) { piv = r; break; }
        if (piv == n) continue;
        std::swap(H[rank], H[piv]);
        auto inv = F.inv(H[rank][col]);
        for (unsigned r = rank + 1; r < n; ++r) {
            if (F.is_zero(H[r][col])) continue;
            auto fac = F.mul(H[r][col], inv);
            for (unsigned cc = col; cc < n; ++cc)
                H[r][cc] = F.sub(H[r][cc], F.mul(fac, H[rank][cc]));
        }
        ++rank;
    }
    return n - rank;
}

} // namespace germ
