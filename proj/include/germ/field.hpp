#pragma once
// Exact coefficient fields: the rationals, prime fields F_p, and towers of
// finite extensions F_p(t1)(t2)... built by adjoining roots of irreducible
// polynomials. All three expose the same small interface (zero/one/add/sub/
// mul/inv/...) so the series and elimination layers can be written once.
//
// Also here: univariate factorization over finite fields (squarefree split,
// distinct-degree, seeded Cantor-Zassenhaus) and n-th roots with on-demand
// field extension, which the jet-normalization stages consume.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "germ/errors.hpp"

namespace germ {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------- rationals

struct Rationals {
    using Elem = BigRat;

    unsigned long long characteristic() const { return 0; }
    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }
    Elem from_int(long long v) const { return Elem(v); }

    std::optional<Elem> from_fraction(const BigInt& num, const BigInt& den) const {
        if (den == 0) return std::nullopt;
        return Elem(BigRat(num, den));
    }

    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }

    Elem inv(const Elem& a) const {
        if (a == 0) fail("DivisionByZero", "inverse of 0 in Q");
        return 1 / a;
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    bool is_one(const Elem& a) const { return a == 1; }

    bool same_field(const Rationals&) const { return true; }

    std::string to_string(const Elem& a) const { return a.str(); }
};

// -------------------------------------------------------------- prime field

// F_p with residues stored as uint64 in [0, p). p is expected to fit well
// below 2^31 so products fit in unsigned __int128 without care.
struct PrimeField {
    using Elem = std::uint64_t;

    std::uint64_t p = 0;

    PrimeField() = default;
    explicit PrimeField(std::uint64_t prime) : p(prime) {
        if (p < 2) fail("PreconditionViolated", "characteristic must be a prime >= 2");
    }

    unsigned long long characteristic() const { return p; }
    Elem zero() const { return 0; }
    Elem one() const { return 1 % p; }

    Elem from_int(long long v) const {
        long long r = v % static_cast<long long>(p);
        if (r < 0) r += static_cast<long long>(p);
        return static_cast<Elem>(r);
    }

    Elem from_bigint(const BigInt& v) const {
        BigInt r = v % static_cast<long long>(p);
        if (r < 0) r += static_cast<long long>(p);
        return r.convert_to<Elem>();
    }

    std::optional<Elem> from_fraction(const BigInt& num, const BigInt& den) const {
        Elem d = from_bigint(den);
        if (d == 0) return std::nullopt;
        return mul(from_bigint(num), inv(d));
    }

    Elem add(Elem a, Elem b) const { Elem s = a + b; return s >= p ? s - p : s; }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p - b; }
    Elem mul(Elem a, Elem b) const {
        return static_cast<Elem>((static_cast<unsigned __int128>(a) * b) % p);
    }
    Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }

    Elem pow(Elem a, std::uint64_t e) const {
        Elem r = one(), base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    Elem inv(Elem a) const {
        if (a == 0) fail("DivisionByZero", "inverse of 0 in F_" + std::to_string(p));
        return pow(a, p - 2);
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }
    bool is_one(Elem a) const { return a == one(); }

    bool same_field(const PrimeField& o) const { return p == o.p; }

    std::string to_string(Elem a) const { return std::to_string(a); }
};

// -------------------------------------------------------- extension towers

// An element of a tower F_p(t1)(t2)...: at the prime level just a residue,
// at level k a coefficient vector (of the exact extension degree) over the
// level below. Fixed-size vectors keep equality representational.
struct TowerElem {
    std::uint64_t val = 0;
    std::vector<TowerElem> coeffs;

    bool operator==(const TowerElem& o) const = default;
};

class TowerField {
public:
    using Elem = TowerElem;

    struct Level {
        // x^deg = red(x) rewrites powers of this level's generator; red has
        // exactly deg entries, each an element of the level below.
        std::vector<TowerElem> red;
        unsigned deg = 0;
        std::string gen;
    };

    TowerField() = default;
    explicit TowerField(std::uint64_t prime)
        : p_(prime), levels_(std::make_shared<std::vector<Level>>()) {
        if (prime < 2) fail("PreconditionViolated", "characteristic must be a prime >= 2");
    }

    unsigned long long characteristic() const { return p_; }
    std::uint64_t prime() const { return p_; }
    unsigned height() const { return levels_ ? static_cast<unsigned>(levels_->size()) : 0; }
    const Level& level(unsigned i) const { return (*levels_)[i]; }

    // Absolute degree over F_p.
    std::uint64_t abs_degree() const {
        std::uint64_t d = 1;
        for (unsigned i = 0; i < height(); ++i) d *= level(i).deg;
        return d;
    }
    std::uint64_t order() const {
        std::uint64_t q = 1;
        for (std::uint64_t i = 0; i < abs_degree(); ++i) q *= p_;
        return q;
    }

    Elem zero() const { return zero_at(height()); }
    Elem one() const { return from_int(1); }

    Elem from_int(long long v) const {
        long long r = v % static_cast<long long>(p_);
        if (r < 0) r += static_cast<long long>(p_);
        Elem e;
        e.val = static_cast<std::uint64_t>(r);
        return lift(e, 0, height());
    }

    Elem from_bigint(const BigInt& v) const {
        BigInt r = v % static_cast<long long>(p_);
        if (r < 0) r += static_cast<long long>(p_);
        Elem e;
        e.val = r.convert_to<std::uint64_t>();
        return lift(e, 0, height());
    }

    std::optional<Elem> from_fraction(const BigInt& num, const BigInt& den) const {
        Elem d = from_bigint(den);
        if (is_zero(d)) return std::nullopt;
        return mul(from_bigint(num), inv(d));
    }

    // The generator of the given level, as a top-level element.
    Elem generator(unsigned lev) const {
        Elem g = zero_at(lev + 1);
        g.coeffs[1] = one_at(lev);
        return lift(g, lev + 1, height());
    }

    Elem add(const Elem& a, const Elem& b) const { return add_at(height(), a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return sub_at(height(), a, b); }
    Elem mul(const Elem& a, const Elem& b) const { return mul_at(height(), a, b); }
    Elem neg(const Elem& a) const { return neg_at(height(), a); }

    Elem inv(const Elem& a) const {
        if (is_zero(a)) fail("DivisionByZero", "inverse of 0 in extension field");
        return inv_at(height(), a);
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

    Elem pow(Elem base, BigInt e) const {
        Elem r = one();
        while (e > 0) {
            if ((e & 1) != 0) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    bool is_zero(const Elem& a) const { return is_zero_at(height(), a); }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    bool is_one(const Elem& a) const { return eq(a, one()); }

    bool same_field(const TowerField& o) const {
        return p_ == o.p_ && levels_ == o.levels_;
    }

    // True when this tower extends (or equals) the other: same prime and the
    // other's levels form a prefix. Elements of the smaller field embed by
    // repeated lifting.
    bool extends(const TowerField& sub) const {
        if (p_ != sub.p_ || height() < sub.height()) return false;
        for (unsigned i = 0; i < sub.height(); ++i)
            if (level(i).gen != sub.level(i).gen || level(i).deg != sub.level(i).deg)
                return false;
        return true;
    }
    Elem embed(const TowerField& sub, const Elem& a) const {
        return lift(a, sub.height(), height());
    }

    // Extend by a monic irreducible polynomial (coefficient vector over this
    // field, constant first, including the leading 1). Returns the new field;
    // the adjoined root is generator(height of this field).
    TowerField extend(const std::vector<Elem>& monic_modulus, const std::string& gen_name) const {
        unsigned d = static_cast<unsigned>(monic_modulus.size()) - 1;
        if (d < 1) fail("PreconditionViolated", "extension modulus must have degree >= 1");
        Level lv;
        lv.deg = d;
        lv.gen = gen_name;
        lv.red.reserve(d);
        for (unsigned i = 0; i < d; ++i) lv.red.push_back(neg(monic_modulus[i]));
        auto nl = std::make_shared<std::vector<Level>>(*levels_);
        nl->push_back(std::move(lv));
        TowerField out;
        out.p_ = p_;
        out.levels_ = std::move(nl);
        return out;
    }

    std::string to_string(const Elem& a) const { return str_at(height(), a); }

private:
    std::uint64_t p_ = 0;
    std::shared_ptr<const std::vector<Level>> levels_;

    Elem zero_at(unsigned lev) const {
        Elem e;
        if (lev == 0) return e;
        e.coeffs.assign(level(lev - 1).deg, zero_at(lev - 1));
        return e;
    }
    Elem one_at(unsigned lev) const {
        Elem e = zero_at(lev);
        if (lev == 0) e.val = 1 % p_;
        else e.coeffs[0] = one_at(lev - 1);
        return e;
    }
    Elem lift(Elem a, unsigned from, unsigned to) const {
        for (unsigned l = from; l < to; ++l) {
            Elem up = zero_at(l + 1);
            up.coeffs[0] = std::move(a);
            a = std::move(up);
        }
        return a;
    }

    bool is_zero_at(unsigned lev, const Elem& a) const {
        if (lev == 0) return a.val == 0;
        for (const auto& c : a.coeffs)
            if (!is_zero_at(lev - 1, c)) return false;
        return true;
    }

    Elem add_at(unsigned lev, const Elem& a, const Elem& b) const {
        if (lev == 0) {
            Elem e;
            std::uint64_t s = a.val + b.val;
            e.val = s >= p_ ? s - p_ : s;
            return e;
        }
        Elem e = a;
        for (size_t i = 0; i < e.coeffs.size(); ++i)
            e.coeffs[i] = add_at(lev - 1, e.coeffs[i], b.coeffs[i]);
        return e;
    }
    Elem sub_at(unsigned lev, const Elem& a, const Elem& b) const {
        return add_at(lev, a, neg_at(lev, b));
    }
    Elem neg_at(unsigned lev, const Elem& a) const {
        if (lev == 0) {
            Elem e;
            e.val = a.val == 0 ? 0 : p_ - a.val;
            return e;
        }
        Elem e = a;
        for (auto& c : e.coeffs) c = neg_at(lev - 1, c);
        return e;
    }
    Elem scale_at(unsigned lev, const Elem& a, const Elem& s) const {
        // s lives one level below a.
        Elem e = a;
        for (auto& c : e.coeffs) c = mul_at(lev - 1, c, s);
        return e;
    }

    Elem mul_at(unsigned lev, const Elem& a, const Elem& b) const {
        if (lev == 0) {
            Elem e;
            e.val = static_cast<std::uint64_t>(
                (static_cast<unsigned __int128>(a.val) * b.val) % p_);
            return e;
        }
        unsigned d = level(lev - 1).deg;
        std::vector<Elem> prod(2 * d - 1, zero_at(lev - 1));
        for (unsigned i = 0; i < d; ++i) {
            if (is_zero_at(lev - 1, a.coeffs[i])) continue;
            for (unsigned j = 0; j < d; ++j)
                prod[i + j] = add_at(lev - 1, prod[i + j],
                                     mul_at(lev - 1, a.coeffs[i], b.coeffs[j]));
        }
        // Fold x^(d+k) = x^k * red(x) from the top down.
        const auto& red = level(lev - 1).red;
        for (int k = static_cast<int>(prod.size()) - 1; k >= static_cast<int>(d); --k) {
            Elem c = prod[k];
            if (is_zero_at(lev - 1, c)) continue;
            for (unsigned j = 0; j < d; ++j)
                prod[k - d + j] = add_at(lev - 1, prod[k - d + j], mul_at(lev - 1, red[j], c));
        }
        Elem e;
        e.coeffs.assign(prod.begin(), prod.begin() + d);
        return e;
    }

    // Inverse at an extension level via extended Euclid on polynomials over
    // the level below; prime level by Fermat.
    Elem inv_at(unsigned lev, const Elem& a) const {
        if (lev == 0) {
            Elem e;
            std::uint64_t r = 1, base = a.val, ex = p_ - 2;
            while (ex) {
                if (ex & 1) r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(r) * base) % p_);
                base = static_cast<std::uint64_t>((static_cast<unsigned __int128>(base) * base) % p_);
                ex >>= 1;
            }
            e.val = r;
            return e;
        }
        unsigned bl = lev - 1;
        unsigned d = level(bl).deg;
        // Modulus as a monic polynomial vector: x^d - red.
        std::vector<Elem> m(d + 1, zero_at(bl));
        for (unsigned i = 0; i < d; ++i) m[i] = neg_at(bl, level(bl).red[i]);
        m[d] = one_at(bl);
        std::vector<Elem> r0 = m, r1(a.coeffs.begin(), a.coeffs.end());
        std::vector<Elem> t0{zero_at(bl)}, t1{one_at(bl)};
        auto deg_of = [&](const std::vector<Elem>& v) {
            for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i)
                if (!is_zero_at(bl, v[i])) return i;
            return -1;
        };
        while (deg_of(r1) > 0) {
            // r0 = q*r1 + r, by repeated leading-term elimination.
            int d1 = deg_of(r1);
            Elem lead_inv = inv_at(bl, r1[static_cast<size_t>(d1)]);
            std::vector<Elem> q(static_cast<size_t>(deg_of(r0) - d1 + 1), zero_at(bl));
            std::vector<Elem> r = r0;
            for (int k = deg_of(r); k >= d1; k = deg_of(r)) {
                Elem c = mul_at(bl, r[static_cast<size_t>(k)], lead_inv);
                q[static_cast<size_t>(k - d1)] = c;
                for (int j = 0; j <= d1; ++j)
                    r[static_cast<size_t>(k - d1 + j)] =
                        sub_at(bl, r[static_cast<size_t>(k - d1 + j)],
                               mul_at(bl, c, r1[static_cast<size_t>(j)]));
                if (deg_of(r) == k) r[static_cast<size_t>(k)] = zero_at(bl);
            }
            // t = t0 - q*t1
            std::vector<Elem> t(std::max(t0.size(), q.size() + t1.size()), zero_at(bl));
            for (size_t i = 0; i < t0.size(); ++i) t[i] = t0[i];
            for (size_t i = 0; i < q.size(); ++i)
                for (size_t j = 0; j < t1.size(); ++j)
                    t[i + j] = sub_at(bl, t[i + j], mul_at(bl, q[i], t1[j]));
            r0 = std::move(r1); r1 = std::move(r);
            t0 = std::move(t1); t1 = std::move(t);
        }
        int dr = deg_of(r1);
        if (dr < 0) fail("DivisionByZero", "element not invertible (modulus not irreducible?)");
        Elem c = inv_at(bl, r1[static_cast<size_t>(dr)]);
        Elem e = zero_at(lev);
        for (size_t i = 0; i < t1.size() && i < d; ++i)
            e.coeffs[i] = mul_at(bl, t1[i], c);
        return e;
    }

    std::string str_at(unsigned lev, const Elem& a) const {
        if (lev == 0) return std::to_string(a.val);
        const auto& gen = level(lev - 1).gen;
        std::string out;
        for (size_t i = 0; i < a.coeffs.size(); ++i) {
            if (is_zero_at(lev - 1, a.coeffs[i])) continue;
            std::string c = str_at(lev - 1, a.coeffs[i]);
            std::string term;
            if (i == 0) term = c;
            else {
                term = (c == "1") ? gen : "(" + c + ")*" + gen;
                if (i > 1) term += "^" + std::to_string(i);
            }
            if (!out.empty()) out += " + ";
            out += term;
        }
        return out.empty() ? "0" : out;
    }
};

// -------------------------------------------- univariate polynomial helpers

// Coefficient vectors, constant term first, no trailing zeros.
template <class K>
using UPoly = std::vector<typename K::Elem>;

template <class K>
void up_norm(const K& F, UPoly<K>& f) {
    while (!f.empty() && F.is_zero(f.back())) f.pop_back();
}

template <class K>
int up_deg(const UPoly<K>& f) { return static_cast<int>(f.size()) - 1; }

template <class K>
UPoly<K> up_add(const K& F, const UPoly<K>& a, const UPoly<K>& b) {
    UPoly<K> r(std::max(a.size(), b.size()), F.zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
    up_norm(F, r);
    return r;
}

template <class K>
UPoly<K> up_sub(const K& F, const UPoly<K>& a, const UPoly<K>& b) {
    UPoly<K> r(std::max(a.size(), b.size()), F.zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
    up_norm(F, r);
    return r;
}

template <class K>
UPoly<K> up_mul(const K& F, const UPoly<K>& a, const UPoly<K>& b) {
    if (a.empty() || b.empty()) return {};
    UPoly<K> r(a.size() + b.size() - 1, F.zero());
    for (size_t i = 0; i < a.size(); ++i) {
        if (F.is_zero(a[i])) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    up_norm(F, r);
    return r;
}

template <class K>
UPoly<K> up_scale(const K& F, const UPoly<K>& a, const typename K::Elem& c) {
    UPoly<K> r = a;
    for (auto& x : r) x = F.mul(x, c);
    up_norm(F, r);
    return r;
}

template <class K>
std::pair<UPoly<K>, UPoly<K>> up_divmod(const K& F, UPoly<K> a, const UPoly<K>& b) {
    if (b.empty()) fail("DivisionByZero", "polynomial division by zero");
    UPoly<K> q(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0, F.zero());
    auto lead_inv = F.inv(b.back());
    while (up_deg<K>(a) >= up_deg<K>(b)) {
        size_t shift = a.size() - b.size();
        auto c = F.mul(a.back(), lead_inv);
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i)
            a[shift + i] = F.sub(a[shift + i], F.mul(c, b[i]));
        up_norm(F, a);
    }
    up_norm(F, q);
    return {std::move(q), std::move(a)};
}

template <class K>
UPoly<K> up_mod(const K& F, const UPoly<K>& a, const UPoly<K>& b) {
    return up_divmod(F, a, b).second;
}

template <class K>
UPoly<K> up_monic(const K& F, UPoly<K> f) {
    if (f.empty()) return f;
    auto c = F.inv(f.back());
    for (auto& x : f) x = F.mul(x, c);
    return f;
}

template <class K>
UPoly<K> up_gcd(const K& F, UPoly<K> a, UPoly<K> b) {
    while (!b.empty()) {
        auto r = up_mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return up_monic(F, std::move(a));
}

template <class K>
UPoly<K> up_diff(const K& F, const UPoly<K>& f) {
    UPoly<K> r;
    for (size_t i = 1; i < f.size(); ++i)
        r.push_back(F.mul(f[i], F.from_int(static_cast<long long>(i))));
    up_norm(F, r);
    return r;
}

template <class K>
UPoly<K> up_powmod(const K& F, UPoly<K> base, BigInt e, const UPoly<K>& m) {
    UPoly<K> r{F.one()};
    base = up_mod(F, base, m);
    while (e > 0) {
        if ((e & 1) != 0) r = up_mod(F, up_mul(F, r, base), m);
        base = up_mod(F, up_mul(F, base, base), m);
        e >>= 1;
    }
    return r;
}

template <class K>
typename K::Elem up_eval(const K& F, const UPoly<K>& f, const typename K::Elem& x) {
    auto r = F.zero();
    for (size_t i = f.size(); i-- > 0;) r = F.add(F.mul(r, x), f[i]);
    return r;
}

// ------------------------------------------------- finite-field operations

namespace detail {

// q/p-th power, the inverse of Frobenius in F_q.
template <class K>
typename K::Elem pth_root_elem(const K& F, const typename K::Elem& a, const BigInt& q) {
    BigInt e = q / static_cast<long long>(F.characteristic());
    // pow by squaring over K
    auto r = F.one();
    auto base = a;
    BigInt ex = e;
    while (ex > 0) {
        if ((ex & 1) != 0) r = F.mul(r, base);
        base = F.mul(base, base);
        ex >>= 1;
    }
    return r;
}

template <class K>
BigInt field_order(const K& F);

template <>
inline BigInt field_order<PrimeField>(const PrimeField& F) { return BigInt(F.p); }

template <>
inline BigInt field_order<TowerField>(const TowerField& F) {
    BigInt q = 1;
    for (std::uint64_t i = 0; i < F.abs_degree(); ++i) q *= static_cast<long long>(F.prime());
    return q;
}

// Squarefree decomposition in characteristic p (Musser with the p-th power
// descent for vanishing derivative).
template <class K>
void squarefree_decompose(const K& F, UPoly<K> f, unsigned mult,
                          std::vector<std::pair<UPoly<K>, unsigned>>& out) {
    if (up_deg<K>(f) < 1) return;
    const BigInt q = field_order(F);
    const auto p = static_cast<long long>(F.characteristic());
    auto d = up_diff(F, f);
    if (d.empty()) {
        // f = h(x^p); take p-th roots of coefficients.
        UPoly<K> h;
        for (size_t i = 0; i < f.size(); i += static_cast<size_t>(p))
            h.push_back(pth_root_elem(F, f[i], q));
        up_norm(F, h);
        squarefree_decompose(F, std::move(h), mult * static_cast<unsigned>(p), out);
        return;
    }
    auto g = up_gcd(F, f, d);
    auto w = up_divmod(F, f, g).first;
    unsigned i = 1;
    while (up_deg<K>(w) > 0) {
        auto y = up_gcd(F, w, g);
        auto z = up_divmod(F, w, y).first;
        if (up_deg<K>(z) > 0) out.emplace_back(up_monic(F, z), mult * i);
        ++i;
        w = std::move(y);
        g = up_divmod(F, g, w).first;
    }
    // Leftover g collects the factors with multiplicity divisible by p; its
    // derivative vanishes, so the recursion lands in the x^p descent above
    // (which is where the extra factor p on the multiplicity comes from).
    if (up_deg<K>(g) > 0) squarefree_decompose(F, std::move(g), mult, out);
}

template <class K>
UPoly<K> random_poly(const K& F, int deg, std::mt19937_64& rng) {
    UPoly<K> r;
    std::uniform_int_distribution<long long> dist(0, static_cast<long long>(F.characteristic()) - 1);
    for (int i = 0; i <= deg; ++i) r.push_back(F.from_int(dist(rng)));
    up_norm(F, r);
    return r;
}

// For extension fields a random element should range over the whole field,
// not just the prime subfield; build it from generator combinations.
inline TowerField::Elem random_elem(const TowerField& F, std::mt19937_64& rng) {
    std::uniform_int_distribution<long long> dist(0, static_cast<long long>(F.prime()) - 1);
    auto r = F.from_int(dist(rng));
    for (unsigned l = 0; l < F.height(); ++l) {
        auto g = F.generator(l);
        auto gp = F.one();
        for (unsigned e = 1; e < F.level(l).deg; ++e) {
            gp = F.mul(gp, g);
            r = F.add(r, F.mul(F.from_int(dist(rng)), gp));
        }
    }
    return r;
}

inline UPoly<TowerField> random_poly(const TowerField& F, int deg, std::mt19937_64& rng) {
    UPoly<TowerField> r;
    for (int i = 0; i <= deg; ++i) r.push_back(random_elem(F, rng));
    up_norm(F, r);
    return r;
}

// Cantor-Zassenhaus equal-degree splitting: f squarefree, all irreducible
// factors of degree d, q odd.
template <class K>
void equal_degree_split(const K& F, UPoly<K> f, int d, std::mt19937_64& rng,
                        std::vector<UPoly<K>>& out) {
    if (up_deg<K>(f) == d) {
        out.push_back(up_monic(F, std::move(f)));
        return;
    }
    const BigInt q = field_order(F);
    const bool even = F.characteristic() == 2;
    BigInt e = 1;
    unsigned m2 = 0;
    if (even) {
        BigInt t = q;
        while (t > 1) { t >>= 1; ++m2; }
    } else {
        for (int i = 0; i < d; ++i) e *= q;
        e = (e - 1) / 2;
    }
    for (;;) {
        auto r = random_poly(F, up_deg<K>(f) - 1, rng);
        if (up_deg<K>(r) < 1) continue;
        UPoly<K> s;
        if (even) {
            // Trace splitter: s = r + r^2 + r^4 + ... over F_{2^m}.
            s = up_mod(F, r, f);
            auto cur = s;
            for (unsigned i = 1; i < m2 * static_cast<unsigned>(d); ++i) {
                cur = up_mod(F, up_mul(F, cur, cur), f);
                s = up_add(F, s, cur);
            }
        } else {
            s = up_powmod(F, r, e, f);
            s = up_sub(F, s, UPoly<K>{F.one()});
        }
        auto g = up_gcd(F, s, f);
        if (up_deg<K>(g) > 0 && up_deg<K>(g) < up_deg<K>(f)) {
            auto h = up_divmod(F, f, g).first;
            equal_degree_split(F, std::move(g), d, rng, out);
            equal_degree_split(F, std::move(h), d, rng, out);
            return;
        }
    }
}

} // namespace detail

// Full factorization over a finite field. Returns monic irreducible factors
// with multiplicities; the leading unit is returned separately.
template <class K>
struct FactorResult {
    typename K::Elem unit;
    std::vector<std::pair<UPoly<K>, unsigned>> factors;
};

inline FactorResult<Rationals> univ_factor(const Rationals&, const UPoly<Rationals>&,
                                           std::uint64_t = 0) {
    fail("NotFiniteField", "univariate factorization is only implemented over finite fields");
}

template <class K>
FactorResult<K> univ_factor(const K& F, UPoly<K> f, std::uint64_t seed = 0x5eed) {
    up_norm(F, f);
    if (f.empty()) fail("PreconditionViolated", "cannot factor the zero polynomial");
    FactorResult<K> res;
    res.unit = f.back();
    f = up_monic(F, std::move(f));
    if (up_deg<K>(f) == 0) return res;

    std::vector<std::pair<UPoly<K>, unsigned>> sq;
    detail::squarefree_decompose(F, f, 1, sq);

    std::mt19937_64 rng(seed);
    for (auto& [part, mult] : sq) {
        // Distinct-degree on each squarefree part.
        UPoly<K> u = part;
        const BigInt q = detail::field_order(F);
        UPoly<K> x{F.zero(), F.one()};
        UPoly<K> h = x;
        for (int d = 1; up_deg<K>(u) >= 2 * d; ++d) {
            h = up_powmod(F, h, q, u);
            auto g = up_gcd(F, up_sub(F, h, x), u);
            if (up_deg<K>(g) > 0) {
                std::vector<UPoly<K>> irr;
                detail::equal_degree_split(F, g, d, rng, irr);
                for (auto& fac : irr) res.factors.emplace_back(std::move(fac), mult);
                u = up_divmod(F, u, g).first;
                h = up_mod(F, h, u);
            }
        }
        if (up_deg<K>(u) > 0) res.factors.emplace_back(std::move(u), mult);
    }
    return res;
}

// ------------------------------------------------------------- n-th roots

// Root of X^n = a. Over Q only perfect powers succeed. Over finite fields a
// root always exists after a finite extension; the returned field is either
// the input field or the constructed extension, and `note` names what was
// adjoined.
struct RationalRoot {
    BigRat root;
};

inline RationalRoot nth_root(const Rationals&, const BigRat& a, unsigned n) {
    if (n == 0) fail("PreconditionViolated", "0-th root");
    auto int_root = [](const BigInt& v, unsigned k) -> std::optional<BigInt> {
        if (v == 0) return BigInt(0);
        bool negv = v < 0;
        if (negv && k % 2 == 0) return std::nullopt;
        BigInt av = negv ? BigInt(-v) : v;
        BigInt lo = 0, hi = av + 1;
        while (lo < hi) {
            BigInt mid = (lo + hi) / 2;
            BigInt pw = 1;
            bool over = false;
            for (unsigned i = 0; i < k; ++i) {
                pw *= mid;
                if (pw > av) { over = true; break; }
            }
            if (!over && pw == av) return negv ? BigInt(-mid) : mid;
            if (over || pw > av) hi = mid;
            else lo = mid + 1;
        }
        return std::nullopt;
    };
    BigInt num = boost::multiprecision::numerator(a);
    BigInt den = boost::multiprecision::denominator(a);
    auto rn = int_root(num, n);
    auto rd = int_root(den, n);
    if (!rn || !rd) fail("NoRationalRoot", "not a perfect " + std::to_string(n) + "-th power");
    return {BigRat(*rn, *rd)};
}

struct TowerRoot {
    TowerField field;
    TowerElem root;
    bool extended = false;
    std::string note;
};

inline TowerRoot nth_root(const TowerField& F, const TowerElem& a, unsigned n,
                          std::uint64_t seed = 0x5eed) {
    if (n == 0) fail("PreconditionViolated", "0-th root");
    if (F.is_zero(a)) return {F, F.zero(), false, ""};
    // X^n - a
    UPoly<TowerField> f(n + 1, F.zero());
    f[0] = F.neg(a);
    f[n] = F.one();
    auto fact = univ_factor(F, f, seed);
    const UPoly<TowerField>* best = nullptr;
    for (auto& [g, mult] : fact.factors) {
        (void)mult;
        if (up_deg<TowerField>(g) == 1) {
            // x + c = 0 -> root -c
            return {F, F.neg(g[0]), false, ""};
        }
        if (!best || up_deg<TowerField>(g) < up_deg<TowerField>(*best)) best = &g;
    }
    std::string gen = "t" + std::to_string(F.height() + 1);
    TowerField ext = F.extend(*best, gen);
    TowerRoot out;
    out.field = ext;
    out.root = ext.generator(F.height());
    out.extended = true;
    out.note = "adjoined " + gen + " with minimal polynomial of degree " +
               std::to_string(up_deg<TowerField>(*best));
    return out;
}

// Convenience for prime fields: promote to a height-0 tower first.
inline TowerRoot nth_root(const PrimeField& F, PrimeField::Elem a, unsigned n,
                          std::uint64_t seed = 0x5eed) {
    TowerField T(F.p);
    return nth_root(T, T.from_int(static_cast<long long>(a)), n, seed);
}

} // namespace germ
