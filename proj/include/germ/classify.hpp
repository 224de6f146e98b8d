#pragma once

// Contact-unimodality classification in characteristic 0 or p > 3.
//
// The pipeline: split off squares, type the low-order jet of the residual,
// reduce the tail onto regular-basis monomials, normalize coefficients by
// diagonal substitutions, then evaluate the per-family side conditions.
// Every Unimodal verdict is guarded by an independent Tjurina comparison
// between the input and the claimed normal form.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "ring.hpp"
#include "field.hpp"
#include "series.hpp"
#include "localalg.hpp"
#include "newton.hpp"
#include "acgrading.hpp"
#include "determinacy.hpp"

namespace germ {

// ------------------------------------------------------------ arithmetic

// Divisibility convention with p = 0 meaning characteristic zero: only 0
// is divisible by 0, so every "p | expr" clause degenerates to expr = 0.
inline bool divides_in_char(long long p, long long x) {
    if (p == 0) return x == 0;
    long long r = x % p;
    return r == 0;
}

// Is a rational zero in characteristic p (reduced mod p when p > 0)?
inline bool zero_in_char(long long p, const BigRat& q) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (p == 0) return q == 0;
    if (denominator(q) % p == 0)
        fail("PreconditionViolated", "parameter denominator divisible by the characteristic");
    return numerator(q) % p == 0;
}

// --------------------------------------------------- the two jet conditions

// A scan hit: the clause that fired and where. cond is "x3" for the
// condition attached to cubic jets x^3, "x3y" for the x^3 y variant.
struct CondWitness {
    long long u = 0, v = 0;
    char clause = '?';
    std::string cond;
};

// Clause-by-clause evaluation of the condition attached to x^3-jets.
inline bool cond_x3_clause(long long p, long long u, long long v, char clause) {
    switch (clause) {
        case 'A':
            return (2 * v) / 3 + 1 <= u && u + p <= v - 3 && divides_in_char(p, 3 * u - 2 * v);
        case 'B':
            return divides_in_char(p, u) && divides_in_char(p, v) && 3 * u < 2 * v &&
                   2 * v < 4 * u && u < u + p && u + p <= 3 * u - v - 2;
        case 'C':
            return p != 31 && u % 2 == 0 && 3 * u / 2 + 1 <= v && v <= 2 * u - 3 &&
                   divides_in_char(p, v - 3 * u / 2);
        case 'D':
            return p == 31 && u % 2 == 0 && 3 * u / 2 + 1 <= v &&
                   divides_in_char(p, v - 3 * u / 2);
    }
    return false;
}

// Same for the x^3 y condition; all clauses additionally need u >= 4, v >= 5.
inline bool cond_x3y_clause(long long p, long long u, long long v, char clause) {
    if (u < 4 || v < 5) return false;
    switch (clause) {
        case 'A':
            return (2 * v + 1) / 3 + 1 <= u && u + p <= v - 3 &&
                   divides_in_char(p, 3 * u - 2 * v - 1);
        case 'B':
            return divides_in_char(p, 3 * u - 2 * v - 1) && u < u + p && u + p <= 3 * u - v;
        case 'C':
            return p != 31 && u % 2 == 1 && (3 * u + 1) / 2 <= v && v <= 2 * u - 3 &&
                   divides_in_char(p, v - (3 * u - 3) / 2);
        case 'D':
            return p == 31 && u % 2 == 1 && (3 * u + 1) / 2 <= v &&
                   divides_in_char(p, v - (3 * u - 3) / 2);
    }
    return false;
}

inline std::optional<char> cond_x3_at(long long p, long long u, long long v) {
    for (char c : {'A', 'B', 'C', 'D'})
        if (cond_x3_clause(p, u, v, c)) return c;
    return std::nullopt;
}

inline std::optional<char> cond_x3y_at(long long p, long long u, long long v) {
    for (char c : {'A', 'B', 'C', 'D'})
        if (cond_x3y_clause(p, u, v, c)) return c;
    return std::nullopt;
}

namespace classify_detail {

// Scan a rectangle clause-major: all (u,v) under clause A before clause B,
// and v-ascending inside a clause. Pinned examples depend on this order.
inline std::optional<CondWitness> scan_cond(long long p, long long ulo, long long uhi,
                                            long long vlo, long long vhi, bool need_u_lt_v,
                                            bool use_x3, bool use_x3y) {
    for (int which = 0; which < 2; ++which) {
        if (which == 0 && !use_x3) continue;
        if (which == 1 && !use_x3y) continue;
        for (char clause : {'A', 'B', 'C', 'D'}) {
            for (long long v = vlo; v <= vhi; ++v) {
                long long utop = need_u_lt_v ? std::min(uhi, v - 1) : uhi;
                for (long long u = ulo; u <= utop; ++u) {
                    bool hit = which == 0 ? cond_x3_clause(p, u, v, clause)
                                          : cond_x3y_clause(p, u, v, clause);
                    if (hit) return CondWitness{u, v, clause, which == 0 ? "x3" : "x3y"};
                }
            }
        }
    }
    return std::nullopt;
}

} // namespace classify_detail

// ---------------------------------------------------------- table checking

struct TableCheck {
    bool unimodal = false;
    std::string reason;  // empty on success
    std::optional<CondWitness> witness;
};

// Canonical family keys put the superscript before the subscript and brace
// multi-token parts: E^{0'}_{r,s}, W^#_{1,0}, S^1_{1,0}, W_12', U_*.
inline std::string normalize_symbol(const std::string& raw) {
    size_t i = 0;
    std::string base, sub, sup;
    int last = 0;  // 1 = sub, 2 = sup
    auto token = [&](void) -> std::string {
        if (i < raw.size() && raw[i] == '{') {
            size_t j = raw.find('}', i);
            if (j == std::string::npos) fail("UnknownSymbol", "unbalanced brace in symbol: " + raw);
            std::string t = raw.substr(i + 1, j - i - 1);
            i = j + 1;
            return t;
        }
        size_t j = i;
        while (j < raw.size() && raw[j] != '_' && raw[j] != '^') ++j;
        std::string t = raw.substr(i, j - i);
        i = j;
        return t;
    };
    while (i < raw.size() && (std::isalpha(static_cast<unsigned char>(raw[i])) != 0)) base += raw[i++];
    if (base.empty()) fail("UnknownSymbol", "symbol has no family letter: " + raw);
    std::string trailing;
    while (i < raw.size()) {
        char c = raw[i];
        if (c == '_') {
            ++i;
            sub += token();
            last = 1;
        } else if (c == '^') {
            ++i;
            sup += token();
            last = 2;
        } else if (c == '\'') {
            ++i;
            if (last == 2) sup += '\'';
            else trailing += '\'';
        } else {
            fail("UnknownSymbol", "unexpected character in symbol: " + raw);
        }
    }
    // primes on the subscript sit outside any brace (W_{1,0}', U_*'), so
    // peel them off the token text before deciding whether to brace it
    while (!sub.empty() && sub.back() == '\'') {
        trailing += '\'';
        sub.pop_back();
    }
    auto wrap_sub = [](const std::string& t) {
        bool simple = t.size() <= 1 ||
                      std::all_of(t.begin(), t.end(), [](char c) {
                          return std::isdigit(static_cast<unsigned char>(c)) != 0;
                      });
        return simple ? t : "{" + t + "}";
    };
    std::string out = base;
    if (!sup.empty()) out += "^" + (sup.size() <= 1 ? sup : "{" + sup + "}");
    if (!sub.empty() || !trailing.empty()) out += "_" + wrap_sub(sub) + trailing;
    return out;
}

namespace classify_detail {

using Params = std::map<std::string, long long>;

inline long long need(const Params& P, const std::string& k, const std::string& sym) {
    auto it = P.find(k);
    if (it == P.end()) fail("IncompleteParams", "symbol " + sym + " needs parameter " + k);
    return it->second;
}

inline const BigRat& need_lambda(const std::optional<BigRat>& lam, const std::string& sym) {
    if (!lam) fail("IncompleteParams", "symbol " + sym + " needs parameter lambda");
    return *lam;
}

inline TableCheck accept() { return TableCheck{true, "", std::nullopt}; }

inline TableCheck reject(std::string why, std::optional<CondWitness> w = std::nullopt) {
    return TableCheck{false, std::move(why), std::move(w)};
}

inline TableCheck scan_reject_or_accept(std::optional<CondWitness> w) {
    if (!w) return accept();
    std::ostringstream os;
    os << "jet condition (" << w->cond << ", clause " << w->clause << ") fired at (u,v) = ("
       << w->u << "," << w->v << ")";
    return reject(os.str(), w);
}

} // namespace classify_detail

// Exact evaluation of one table row: admissibility of the parameters, the
// characteristic exclusions, the lambda side conditions, and the (u,v)
// scan where the row has one. Witnesses carry the clause that fired.
inline TableCheck check_table_conditions(const std::string& symbol,
                                         const std::map<std::string, long long>& params,
                                         long long p,
                                         const std::optional<BigRat>& lambda = std::nullopt) {
    using namespace classify_detail;
    if (p < 0 || p == 1 || p == 2 || p == 3)
        fail("SmallCharUnsupported", "table conditions are stated for characteristic 0 or p > 3");
    const std::string fam = normalize_symbol(symbol);
    auto lam_nonzero = [&](void) {
        if (zero_in_char(p, need_lambda(lambda, fam)))
            fail("PreconditionViolated", "lambda must be nonzero for " + fam);
    };
    auto scanE = [&](long long ulo, long long uhi, long long vlo, long long vhi, bool ordered) {
        return scan_reject_or_accept(
            scan_cond(p, ulo, uhi, vlo, vhi, ordered, true, false));
    };
    auto scanZ = [&](long long ulo, long long uhi, long long vlo, long long vhi) {
        return scan_reject_or_accept(
            scan_cond(p, ulo, uhi, vlo, vhi, false, true, true));
    };

    // --- E over x^3 and Q over x^3 + yz^2 (same conditions, shifted floors)
    bool isQ = fam.size() >= 1 && fam[0] == 'Q';
    if (fam == "E_{0,s}" || fam == "Q_{0,s}") {
        long long s = need(params, "s", fam);
        if (s < (isQ ? 4 : 6)) return reject("s below the family range");
        return scanE(3, s, 3, divides_in_char(p, s) ? s : s - 1, true);
    }
    if (fam == "E_{r,0}" || fam == "Q_{r,0}") {
        long long r = need(params, "r", fam);
        if (r < (isQ ? 3 : 4)) return reject("r below the family range");
        return scanE(3, r - 1, 4, divides_in_char(p, r) ? 2 * r - 1 : 2 * r - 2, false);
    }
    if (fam == "E^0_{r,s}" || fam == "Q^0_{r,s}") {
        long long r = need(params, "r", fam), s = need(params, "s", fam);
        long long rtop = divides_in_char(p, s) ? s - 1 : s - 2;
        if (s < 4 || 3 * r <= 2 * s || r > rtop) return reject("(r,s) outside the family range");
        if (divides_in_char(p, 3 * r - 2 * s)) return reject("3r-2s divisible by p: primed family applies");
        return scanE(3, r - 1, 4, s - 1, false);
    }
    if (fam == "E^{0'}_{r,s}" || fam == "Q^{0'}_{r,s}") {
        long long r = need(params, "r", fam), s = need(params, "s", fam);
        long long rtop = divides_in_char(p, s) ? s - 1 : s - 2;
        if (s < 4 || 3 * r <= 2 * s || r > rtop) return reject("(r,s) outside the family range");
        if (!divides_in_char(p, 3 * r - 2 * s)) return reject("3r-2s not divisible by p: unprimed family applies");
        if (r == 4 && s == 5 && p == 5) return reject("the (4,5) member is simple in characteristic 5");
        return scanE(3, s - 2, 4, s - 1, false);
    }
    if (fam == "E^1_{r,s}" || fam == "Q^1_{r,s}") {
        long long r = need(params, "r", fam), s = need(params, "s", fam);
        if (r < 3 || 3 * r >= 2 * s || 2 * s >= 4 * r) return reject("(r,s) outside the family range");
        if (divides_in_char(p, 3 * r - 2 * s)) return reject("3r-2s divisible by p: primed family applies");
        return scanE(3, r - 1, 4, s - 1, false);
    }
    if (fam == "E^{1'}_{r,s}" || fam == "Q^{1'}_{r,s}") {
        long long r = need(params, "r", fam), s = need(params, "s", fam);
        if (r < 3 || 3 * r >= 2 * s || 2 * s >= 4 * r) return reject("(r,s) outside the family range");
        if (!divides_in_char(p, 3 * r - 2 * s)) return reject("3r-2s not divisible by p: unprimed family applies");
        long long uhi = (divides_in_char(p, r) && divides_in_char(p, s)) ? 3 * r - s - 1 : r - 1;
        return scanE(3, uhi, 4, s, false);
    }
    if (fam == "E^0_{k,s,l}" || fam == "Q^0_{k,s,l}") {
        long long k = need(params, "k", fam), s = need(params, "s", fam), l = need(params, "l", fam);
        lam_nonzero();
        long long ltop = divides_in_char(p, s) ? s - 1 : s - 2;
        if (s < 4 || 3 * k <= 2 * s || !(k < l) || l > ltop) return reject("(k,s,l) outside the family range");
        if (!divides_in_char(p, 3 * k - 2 * s)) return reject("3k-2s not divisible by p");
        if (divides_in_char(p, 3 * l - 2 * s)) return reject("3l-2s divisible by p");
        return scanE(3, l - 1, 4, s - 1, false);
    }
    if (fam == "E^1_{k,s,l}" || fam == "Q^1_{k,s,l}") {
        long long k = need(params, "k", fam), s = need(params, "s", fam), l = need(params, "l", fam);
        lam_nonzero();
        if (s < 4 || 2 * k <= s || !(k < l) || 3 * l >= 2 * s) return reject("(k,s,l) outside the family range");
        if (!divides_in_char(p, k) || !divides_in_char(p, s)) return reject("k and s must both be divisible by p");
        if (divides_in_char(p, l)) return reject("l divisible by p");
        return scanE(3, l - 1, 4, s - 1, false);
    }
    if (fam == "E_{2t,3t,0}" || fam == "Q_{2t,3t,0}") {
        long long t = need(params, "t", fam);
        lam_nonzero();
        if (p == 31) return reject("p = 31 excluded for this family");
        if (t < 2) return reject("t below the family range");
        return scanE(3, 2 * t - 1, 4, divides_in_char(p, t) ? 4 * t - 1 : 4 * t - 2, false);
    }
    if (fam == "E_{2t,3t,l}" || fam == "Q_{2t,3t,l}") {
        long long t = need(params, "t", fam), l = need(params, "l", fam);
        lam_nonzero();
        if (t < 2 || l <= 3 * t) return reject("(t,l) outside the family range");
        if (divides_in_char(p, l - 3 * t)) return reject("l-3t divisible by p");
        return scanE(3, 2 * t - 1, 4, l - 1, false);
    }

    // --- W over x^4
    if (fam[0] == 'W') {
        if (p == 5) return reject("p = 5 excluded for the whole family");
        if (fam == "W_12" || fam == "W_12'" || fam == "W_13" || fam == "W_13'" ||
            fam == "W^#_{1,0}" || fam == "W^{#'}_{1,0}" || fam == "W_17" || fam == "W_17'" ||
            fam == "W_17''")
            return accept();
        if (fam == "W_18" || fam == "W_18'" || fam == "W_18''")
            return p == 7 ? reject("p = 7 excluded for this family") : accept();
        if (fam == "W_{1,0}" || fam == "W_{1,0}'") {
            const BigRat& lam = need_lambda(lambda, fam);
            if (zero_in_char(p, lam)) return reject("lambda = 0 degenerates the form");
            if (zero_in_char(p, lam - BigRat(1, 4))) return reject("lambda = 1/4 degenerates the form");
            return accept();
        }
        if (fam == "W_{1,t}") {
            long long t = need(params, "t", fam);
            return t >= 7 ? accept() : reject("t below the family range");
        }
        fail("UnknownSymbol", "no table row named " + fam);
    }

    // --- Z over x^3 y (both jet conditions scanned)
    if (fam == "Z_{0,s}") {
        long long s = need(params, "s", fam);
        if (s < 5) return reject("s below the family range");
        return scanZ(3, s - 1, 3, s - 1);
    }
    if (fam == "Z_{r,0}") {
        long long r = need(params, "r", fam);
        if (r < 4) return reject("r below the family range");
        return scanZ(3, r - 1, 3, 2 * r - 2);
    }
    if (fam == "Z^0_{r,s}") {
        long long r = need(params, "r", fam), s = need(params, "s", fam);
        long long rtop = divides_in_char(p, s) ? s - 1 : s - 2;
        if (s < 5 || 3 * r <= 2 * s + 1 || r > rtop) return reject("(r,s) outside the family range");
        long long uhi = divides_in_char(p, 3 * r - 2 * s - 1) ? s - 1 : r - 1;
        return scanZ(3, uhi, 3, s - 1);
    }
    if (fam == "Z^1_{r,s}") {
        long long r = need(params, "r", fam), s = need(params, "s", fam);
        if (r < 4 || 3 * r - 1 >= 2 * s || 2 * s >= 4 * r) return reject("(r,s) outside the family range");
        if (divides_in_char(p, 3 * r - 2 * s - 1)) return reject("3r-2s-1 divisible by p");
        long long uhi = divides_in_char(p, 3 * r - 2 * s - 1) ? 3 * r - s + 1 : r - 1;
        return scanZ(3, uhi, 3, s - 1);
    }
    if (fam == "Z^0_{k,s,l}") {
        long long k = need(params, "k", fam), s = need(params, "s", fam), l = need(params, "l", fam);
        lam_nonzero();
        long long ltop = divides_in_char(p, s) ? s - 1 : s - 2;
        if (s < 5 || 3 * k <= 2 * s + 1 || !(k < l) || l > ltop) return reject("(k,s,l) outside the family range");
        if (!divides_in_char(p, 3 * k - 2 * s - 1)) return reject("3k-2s-1 not divisible by p");
        if (divides_in_char(p, 3 * l - 2 * s - 1)) return reject("3l-2s-1 divisible by p");
        return scanZ(3, l - 1, 3, s - 1);
    }
    if (fam == "Z^1_{k,s,l}") {
        long long k = need(params, "k", fam), s = need(params, "s", fam), l = need(params, "l", fam);
        lam_nonzero();
        if (s < 5 || 2 * k <= s || !(k < l) || 3 * l >= 2 * s + 1) return reject("(k,s,l) outside the family range");
        if (!divides_in_char(p, 3 * k - 2 * s - 1)) return reject("3k-2s-1 not divisible by p");
        if (divides_in_char(p, 3 * l - 2 * s - 1)) return reject("3l-2s-1 divisible by p");
        return scanZ(3, l - 1, 3, s - 1);
    }
    if (fam == "Z_{2t,3t,0}") {
        long long t = need(params, "t", fam);
        lam_nonzero();
        if (p == 31) return reject("p = 31 excluded for this family");
        if (t < 2) return reject("t below the family range");
        return scanZ(3, 2 * t, 3, 4 * t);
    }
    if (fam == "Z_{2t,3t,l}") {
        long long t = need(params, "t", fam), l = need(params, "l", fam);
        lam_nonzero();
        if (t < 2 || l <= 3 * t + 1) return reject("(t,l) outside the family range");
        if (divides_in_char(p, l - 3 * t - 1)) return reject("l-3t-1 divisible by p");
        return scanZ(3, 2 * t, 3, l - 1);
    }

    // --- T
    if (fam == "T_{4,s,2}") {
        long long s = need(params, "s", fam);
        return s >= 5 ? accept() : reject("s below the family range");
    }
    if (fam == "T_{r,s,2}") {
        long long r = need(params, "r", fam), s = need(params, "s", fam);
        return (r >= 5 && s >= 5) ? accept() : reject("(r,s) below the family range");
    }
    if (fam == "T_{4,4,2}") {
        const BigRat& lam = need_lambda(lambda, fam);
        if (zero_in_char(p, lam * lam - 4)) return reject("lambda^2 = 4 degenerates the form");
        return accept();
    }
    if (fam == "T_{3,3,3}") {
        const BigRat& lam = need_lambda(lambda, fam);
        if (zero_in_char(p, lam * lam * lam + 27)) return reject("lambda^3 = -27 degenerates the form");
        return accept();
    }
    if (fam == "T_{r,s,t}") {
        long long r = need(params, "r", fam), s = need(params, "s", fam), t = need(params, "t", fam);
        if (r < 3 || s < 3 || t < 3) return reject("exponents below 3");
        return std::max({r, s, t}) >= 4 ? accept() : reject("all exponents equal 3: lambda family applies");
    }

    // --- S over x^2 z + y z^2
    if (fam[0] == 'S') {
        if (fam == "S_11" || fam == "S_12" || fam == "S^2_{1,0}") return accept();
        if (fam == "S_11'") { need_lambda(lambda, fam); return accept(); }
        if (fam == "S_{1,0}" || fam == "S^1_{1,0}") { lam_nonzero(); return accept(); }
        if (fam == "S^3_{1,0}" || fam == "S^4_{1,0}" || fam == "S_16" || fam == "S_16'" ||
            fam == "S_16''" || fam == "S_17" || fam == "S_17'" || fam == "S_17''")
            return p == 5 ? reject("p = 5 excluded for this family") : accept();
        if (fam == "S_{1,0,t}") {
            long long t = need(params, "t", fam), s = need(params, "s", fam);
            return (6 <= t && t < s + 2) ? accept() : reject("t outside [6, s+2)");
        }
        if (fam == "S_{1,s,0}") {
            long long s = need(params, "s", fam), t = need(params, "t", fam);
            if (s < 5) return reject("s below the family range");
            return t >= 2 * s - 2 ? accept() : reject("t below 2s-2");
        }
        if (fam == "S_{1,s,t}") {
            long long s = need(params, "s", fam), t = need(params, "t", fam);
            lam_nonzero();
            return (s >= 5 && s + 2 <= t && t <= 2 * s - 3) ? accept()
                                                            : reject("(s,t) outside the family range");
        }
        fail("UnknownSymbol", "no table row named " + fam);
    }

    // --- U over x^3 + x z^2
    if (fam[0] == 'U') {
        if (fam == "U_12" || fam == "U_12'" || fam == "U_*" || fam == "U_*'") return accept();
        if (fam == "U_{1,0}" || fam == "U_{1,0}'") {
            const BigRat& lam = need_lambda(lambda, fam);
            if (zero_in_char(p, lam)) return reject("lambda = 0 degenerates the form");
            if (zero_in_char(p, lam * lam + 1)) return reject("lambda^2 = -1 degenerates the form");
            return accept();
        }
        if (fam == "U_{1,t}") {
            long long t = need(params, "t", fam);
            if (p == 5) return reject("p = 5 excluded for this family");
            return t >= 4 ? accept() : reject("t below the family range");
        }
        if (fam == "U_16" || fam == "U_16'")
            return p == 5 ? reject("p = 5 excluded for this family") : accept();
        fail("UnknownSymbol", "no table row named " + fam);
    }

    fail("UnknownSymbol", "no table row named " + fam);
}

// -------------------------------------------------------------- field roots

namespace classify_detail {

// Least k-th root in the field, if one exists. Prime fields are searched
// directly (classification runs at small p); rationals take exact integer
// roots of numerator and denominator.
inline std::optional<std::uint64_t> kth_root_elem(const PrimeField& F, std::uint64_t a, long long k) {
    if (k <= 0) fail("PreconditionViolated", "root exponent must be positive");
    if (a == 0) return 0;
    if (F.p > 2000000) return std::nullopt;
    for (std::uint64_t t = 1; t < F.p; ++t)
        if (F.pow(t, static_cast<std::uint64_t>(k)) == a) return t;
    return std::nullopt;
}

inline std::optional<BigInt> int_kth_root(const BigInt& a, long long k) {
    if (a < 0) {
        if (k % 2 == 0) return std::nullopt;
        auto r = int_kth_root(-a, k);
        if (!r) return std::nullopt;
        return -*r;
    }
    BigInt lo = 0, hi = a + 1;
    while (lo < hi) {
        BigInt mid = (lo + hi) / 2;
        BigInt pw = 1;
        bool over = false;
        for (long long i = 0; i < k; ++i) {
            pw *= mid;
            if (pw > a) { over = true; break; }
        }
        if (over) hi = mid;
        else lo = mid + 1;
    }
    BigInt cand = lo - 1;
    BigInt pw = 1;
    for (long long i = 0; i < k; ++i) pw *= cand;
    if (pw == a) return cand;
    return std::nullopt;
}

inline std::optional<BigRat> kth_root_elem(const Rationals&, const BigRat& a, long long k) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    auto n = int_kth_root(BigInt(numerator(a)), k);
    auto d = int_kth_root(BigInt(denominator(a)), k);
    if (!n || !d) return std::nullopt;
    return BigRat(*n, *d);
}

template <class K>
std::optional<typename K::Elem> kth_root_in_field(const K& F, const typename K::Elem& a, long long k) {
    return kth_root_elem(F, a, k);
}

// Roots of a quadratic a T^2 + b T + c with a != 0, when the discriminant
// is a square in the field.
template <class K>
std::optional<std::pair<typename K::Elem, typename K::Elem>>
quadratic_roots(const K& F, const typename K::Elem& a, const typename K::Elem& b,
                const typename K::Elem& c) {
    auto disc = F.sub(F.mul(b, b), F.mul(F.from_int(4), F.mul(a, c)));
    auto sq = kth_root_in_field(F, disc, 2);
    if (!sq) return std::nullopt;
    auto twoa = F.inv(F.mul(F.from_int(2), a));
    auto r1 = F.mul(F.sub(F.neg(b), *sq), twoa);
    auto r2 = F.mul(F.add(F.neg(b), *sq), twoa);
    return std::make_pair(r1, r2);
}

// All roots of a univariate over a prime field, or nullopt over the
// rationals (factorization there is out of scope; callers fall back).
template <class K>
std::optional<std::vector<typename K::Elem>> all_linear_roots(const K& F, const UPoly<K>& u) {
    if constexpr (std::is_same_v<K, Rationals>) {
        (void)F; (void)u;
        return std::nullopt;
    } else {
        auto fact = univ_factor(F, u);
        std::vector<typename K::Elem> roots;
        for (const auto& [g, mult] : fact.factors) {
            if (up_deg<K>(g) != 1) return std::nullopt;
            auto r = F.neg(F.div(g[0], g[1]));
            for (unsigned i = 0; i < mult; ++i) roots.push_back(r);
        }
        return roots;
    }
}

} // namespace classify_detail

// ------------------------------------------------------------------ split

template <class K>
struct SplitResult {
    Ring res_ring;           // ring of the residual, one slot per corank direction
    Series<K> residual;      // ord >= 3, zero quadratic part
    unsigned squares = 0;    // number of split-off square directions
    std::vector<std::string> log;
    SplitResult(const K& F, const Ring& R) : res_ring(R), residual(F, R) {}
};

// Iterated completion of squares. Each round moves one variable onto its
// critical locus (hensel solve on the partial derivative), peels off the
// exact square factor, and continues on the x_i-free remainder. The square
// coefficients stay as found; the residual is the contact payload.
template <class K>
SplitResult<K> split(const Series<K>& f, unsigned N) {
    const K& F = f.F;
    const Ring& R = f.R;
    if (F.characteristic() == 2) fail("CharTwoUnsupported", "splitting needs an invertible 2");
    if (f.is_zero()) fail("PreconditionViolated", "cannot split the zero series");
    auto ord = f.order();
    if (!ord || *ord == 0 || *ord == 1)
        fail("PreconditionViolated", "split expects a series in the square of the maximal ideal");

    Series<K> g = f.trunc(N + 1);
    std::vector<bool> gone(R.n, false);
    SplitResult<K> out(F, R);

    auto quad_coeff = [&](const Series<K>& h, unsigned i, unsigned j) {
        Mono m{};
        m[i] = static_cast<std::uint16_t>(m[i] + 1);
        m[j] = static_cast<std::uint16_t>(m[j] + 1);
        return h.coeff(m);
    };

    for (;;) {
        // locate a usable square direction in the current quadratic part
        int sq = -1;
        for (unsigned i = 0; i < R.n && sq < 0; ++i)
            if (!gone[i] && !F.is_zero(quad_coeff(g, i, i))) sq = static_cast<int>(i);
        if (sq < 0) {
            // try to create one from an off-diagonal entry via x_i -> x_i + x_j
            int oi = -1, oj = -1;
            for (unsigned i = 0; i < R.n && oi < 0; ++i)
                for (unsigned j = i + 1; j < R.n && oi < 0; ++j)
                    if (!gone[i] && !gone[j] && !F.is_zero(quad_coeff(g, i, j))) {
                        oi = static_cast<int>(i);
                        oj = static_cast<int>(j);
                    }
            if (oi < 0) break;  // quadratic part exhausted
            std::vector<Series<K>> images;
            for (unsigned v = 0; v < R.n; ++v) images.push_back(Series<K>::variable(F, R, v));
            images[static_cast<unsigned>(oi)] =
                images[static_cast<unsigned>(oi)].add(Series<K>::variable(F, R, static_cast<unsigned>(oj)));
            g = g.subst_trunc(images, N + 1);
            out.log.push_back("x" + std::to_string(oi) + " := x" + std::to_string(oi) + " + x" +
                              std::to_string(oj));
            continue;
        }

        unsigned i = static_cast<unsigned>(sq);
        // shift onto the critical locus of x_i, then peel the square
        auto di = g.diff(i);
        auto phi = hensel_solve(di, i, N);
        std::vector<Series<K>> images;
        for (unsigned v = 0; v < R.n; ++v) images.push_back(Series<K>::variable(F, R, v));
        images[i] = images[i].add(phi);
        g = g.subst_trunc(images, N + 1);

        // now g = A(other vars) + x_i^2 * H with H a unit; drop the square
        Series<K> A(F, R);
        for (const auto& [m, c] : g.terms())
            if (m[i] == 0) A.add_term(m, c);
        g = A;
        gone[i] = true;
        ++out.squares;
        out.log.push_back("split off a square in x" + std::to_string(i));
        if (g.is_zero()) break;
    }

    // repack the residual into a ring with one slot per surviving variable
    unsigned c = R.n - out.squares;
    out.res_ring = Ring::standard(std::max(1u, c));
    std::vector<int> slot(R.n, -1);
    {
        int next = 0;
        for (unsigned v = 0; v < R.n; ++v)
            if (!gone[v]) slot[v] = next++;
    }
    Series<K> res(F, out.res_ring);
    for (const auto& [m, c2] : g.terms()) {
        Mono mm{};
        for (unsigned v = 0; v < R.n; ++v)
            if (m[v] != 0) mm[static_cast<unsigned>(slot[v])] = m[v];
        res.add_term(mm, c2);
    }
    out.residual = res;
    return out;
}

// --------------------------------------------------------- binary jet type

template <class K>
struct JetType2 {
    enum class Tag {
        Cubic3,        // x^3
        Cubic21,       // x^2 y
        Cubic111,      // x^2 y + x y^2
        Quartic4,      // x^4
        Quartic31,     // x^3 y
        Quartic22,     // x^2 y^2
        Quartic211,    // x^2 y (x + y)
        Quartic1111    // x y (x + y)(x + a y)
    };
    Tag tag{};
    bool have_subst = false;                              // M (and unit) bring the jet to canonical form
    std::array<std::array<typename K::Elem, 2>, 2> M{};   // substitution x_i -> sum_j M[i][j] x_j
    typename K::Elem unit{};                              // multiply the substituted jet by this
    typename K::Elem a{}, b{};                            // Quartic1111: b = 2 - 4a
    bool ab_in_field = false;
    std::string note;
};

namespace classify_detail {

// Squarefree multiplicity profile of a univariate of degree <= 4 (p > 4
// keeps derivatives honest). Returns multiplicities in descending order.
template <class K>
std::vector<unsigned> up_mult_profile(const K& F, UPoly<K> u) {
    up_norm(F, u);
    std::vector<unsigned> out;
    unsigned mult = 1;
    while (up_deg<K>(u) > 0) {
        UPoly<K> du(u.size() > 1 ? u.size() - 1 : 0, F.zero());
        for (size_t i = 1; i < u.size(); ++i) du[i - 1] = F.mul(u[i], F.from_int(static_cast<long long>(i)));
        up_norm(F, du);
        auto g = up_gcd(F, u, du);
        auto [q, rem] = up_divmod(F, u, g);
        (void)rem;
        // q carries each distinct root once, g keeps them with one
        // multiplicity less; roots of q absent from g sit at exactly "mult"
        auto gq = up_gcd(F, q, g);
        int exact = up_deg<K>(q) - up_deg<K>(gq);
        for (int i = 0; i < exact; ++i) out.push_back(mult);
        u = g;
        ++mult;
    }
    std::sort(out.begin(), out.end(), std::greater<unsigned>());
    return out;
}

} // namespace classify_detail

// Type a nonzero binary form of degree 3 or 4 by the multiplicities of its
// linear factors and produce the normalizing substitution when the needed
// roots lie in the base field.
template <class K>
JetType2<K> jet_type_2(const Series<K>& f, unsigned degree) {
    using namespace classify_detail;
    const K& F = f.F;
    const Ring& R = f.R;
    if (R.n != 2) fail("PreconditionViolated", "binary jet typing needs exactly 2 variables");
    if (degree != 3 && degree != 4) fail("WrongDegree", "jet degree must be 3 or 4");
    if (f.is_zero()) fail("DegenerateForm", "zero form has no type");
    for (const auto& [m, c] : f.terms()) {
        (void)c;
        if (mono_deg(m) != degree) fail("WrongDegree", "form is not homogeneous of the stated degree");
    }

    // univariate u(T) = f(T, 1); the factor y corresponds to a root at infinity
    UPoly<K> u(degree + 1, F.zero());
    for (const auto& [m, c] : f.terms()) u[m[0]] = c;
    up_norm(F, u);
    int udeg = up_deg<K>(u);
    // a zero u means f is a pure power of y: one factor, at infinity
    unsigned inf_mult = udeg < 0 ? degree : degree - static_cast<unsigned>(udeg);

    auto profile = udeg < 0 ? std::vector<unsigned>{} : up_mult_profile(F, u);
    if (inf_mult > 0) profile.push_back(inf_mult);
    std::sort(profile.begin(), profile.end(), std::greater<unsigned>());

    JetType2<K> out;
    out.unit = F.one();
    out.M = {{{F.one(), F.zero()}, {F.zero(), F.one()}}};

    // root of the unique multiplicity-m factor, nullopt when it is infinity
    auto closed_root = [&](unsigned m) -> std::optional<typename K::Elem> {
        if (inf_mult == m) return std::nullopt;  // line y
        // gcd chain pins the repeated factor rationally
        UPoly<K> w = u;
        UPoly<K> acc = w;
        for (unsigned step = 1; step < m; ++step) {
            UPoly<K> dw(acc.size() > 1 ? acc.size() - 1 : 0, F.zero());
            for (size_t i = 1; i < acc.size(); ++i)
                dw[i - 1] = F.mul(acc[i], F.from_int(static_cast<long long>(i)));
            up_norm(F, dw);
            acc = up_gcd(F, acc, dw);
        }
        if (up_deg<K>(acc) != 1) return std::nullopt;
        return F.neg(F.div(acc[0], acc[1]));
    };

    // linear change sending the line of root r to the pure-x line and, when
    // given, the line of root r2 to the pure-y line
    auto build_M = [&](std::optional<typename K::Elem> r, std::optional<typename K::Elem> r2) {
        // root r means the factor (x - r y); infinity means the factor y
        typename K::Elem m00 = F.one(), m01 = F.zero(), m10 = F.zero(), m11 = F.one();
        if (!r) {
            if (r2) {
                // y o M = x and (x - r2 y) o M = y force the first row
                m00 = *r2; m01 = F.one(); m10 = F.one(); m11 = F.zero();
            } else {
                // plain swap: the y-factor becomes the x-factor
                m00 = F.zero(); m01 = F.one(); m10 = F.one(); m11 = F.zero();
            }
        } else if (!r2) {
            // (x - r y) o M = x with y fixed
            m00 = F.one(); m01 = *r; m10 = F.zero(); m11 = F.one();
        } else {
            // columns solve (x - r y) o M = x and (x - r2 y) o M = y
            auto di = F.inv(F.sub(*r2, *r));
            m00 = F.mul(*r2, di); m10 = di;
            m01 = F.mul(*r, F.neg(di)); m11 = F.neg(di);
        }
        out.M = {{{m00, m01}, {m10, m11}}};
    };

    auto apply_M = [&](void) {
        std::vector<Series<K>> images;
        images.push_back(Series<K>::variable(F, R, 0).scale(out.M[0][0])
                             .add(Series<K>::variable(F, R, 1).scale(out.M[0][1])));
        images.push_back(Series<K>::variable(F, R, 0).scale(out.M[1][0])
                             .add(Series<K>::variable(F, R, 1).scale(out.M[1][1])));
        return f.subst_trunc(images, degree + 1);
    };

    auto pattern = [&](std::initializer_list<unsigned> want) {
        return profile == std::vector<unsigned>(want);
    };

    if (degree == 3) {
        if (pattern({3})) {
            out.tag = JetType2<K>::Tag::Cubic3;
            build_M(closed_root(3), std::nullopt);
            auto g = apply_M();
            Mono mx{}; mx[0] = 3;
            out.unit = F.inv(g.coeff(mx));
            out.have_subst = true;
            return out;
        }
        if (pattern({2, 1})) {
            out.tag = JetType2<K>::Tag::Cubic21;
            auto rd = closed_root(2);
            // the single root: divide out the double factor
            std::optional<typename K::Elem> rs;
            {
                // roots of u with the double one removed; handle infinity cases
                if (inf_mult == 1) rs = std::nullopt;
                else if (!rd && inf_mult == 2) {
                    // double factor is y; single root is the root of u (deg 1)
                    rs = F.neg(F.div(u[0], u[1]));
                } else if (rd) {
                    // u / (T - rd)^2, degree <= 1
                    UPoly<K> lin{F.neg(*rd), F.one()};
                    auto q1 = up_divmod(F, u, lin).first;
                    auto q2 = up_divmod(F, q1, lin).first;
                    if (up_deg<K>(q2) == 1) rs = F.neg(F.div(q2[0], q2[1]));
                    else rs = std::nullopt;  // single factor is y
                }
            }
            build_M(rd, rs);
            auto g = apply_M();
            Mono m{}; m[0] = 2; m[1] = 1;
            auto c = g.coeff(m);
            // absorb c through y alone: x^2 y is linear in y
            out.M[1][0] = F.div(out.M[1][0], c);
            out.M[1][1] = F.div(out.M[1][1], c);
            out.unit = F.one();
            out.have_subst = true;
            return out;
        }
        if (pattern({1, 1, 1})) {
            out.tag = JetType2<K>::Tag::Cubic111;
            out.note = "three distinct lines";
            // the normal form x^2 y + x y^2 is only needed up to type here
            auto roots = all_linear_roots(F, u);
            out.have_subst = false;
            if (roots && roots->size() + inf_mult == 3) out.note += " (split over the base field)";
            return out;
        }
        fail("DegenerateForm", "cubic form with unrecognized multiplicity profile");
    }

    // degree 4
    if (pattern({4})) {
        out.tag = JetType2<K>::Tag::Quartic4;
        build_M(closed_root(4), std::nullopt);
        auto g = apply_M();
        Mono mx{}; mx[0] = 4;
        out.unit = F.inv(g.coeff(mx));
        out.have_subst = true;
        return out;
    }
    if (pattern({3, 1})) {
        out.tag = JetType2<K>::Tag::Quartic31;
        auto rt = closed_root(3);
        std::optional<typename K::Elem> rs;
        if (inf_mult == 1) rs = std::nullopt;
        else if (!rt && inf_mult == 3) rs = F.neg(F.div(u[0], u[1]));
        else if (rt) {
            UPoly<K> lin{F.neg(*rt), F.one()};
            auto q = u;
            for (int i = 0; i < 3; ++i) q = up_divmod(F, q, lin).first;
            if (up_deg<K>(q) == 1) rs = F.neg(F.div(q[0], q[1]));
            else rs = std::nullopt;
        }
        build_M(rt, rs);
        auto g = apply_M();
        Mono m{}; m[0] = 3; m[1] = 1;
        auto c = g.coeff(m);
        out.M[1][0] = F.div(out.M[1][0], c);
        out.M[1][1] = F.div(out.M[1][1], c);
        out.unit = F.one();
        out.have_subst = true;
        return out;
    }
    if (pattern({2, 2})) {
        out.tag = JetType2<K>::Tag::Quartic22;
        // the two double lines are the roots of gcd(u, u')
        UPoly<K> du(u.size() - 1, F.zero());
        for (size_t i = 1; i < u.size(); ++i) du[i - 1] = F.mul(u[i], F.from_int(static_cast<long long>(i)));
        up_norm(F, du);
        auto g1 = up_gcd(F, u, du);
        std::optional<typename K::Elem> r1, r2;
        bool ok = true;
        if (inf_mult == 2) {
            r1 = std::nullopt;
            if (up_deg<K>(g1) == 1) r2 = F.neg(F.div(g1[0], g1[1]));
            else ok = false;
        } else if (up_deg<K>(g1) == 2) {
            auto rr = quadratic_roots(F, g1[2], g1[1], g1[0]);
            if (rr) { r1 = rr->first; r2 = rr->second; }
            else ok = false;
        } else ok = false;
        if (!ok) {
            out.have_subst = false;
            out.note = "double lines conjugate over the base field";
            return out;
        }
        build_M(r1, r2);
        auto g = apply_M();
        Mono m{}; m[0] = 2; m[1] = 2;
        out.unit = F.inv(g.coeff(m));
        out.have_subst = true;
        return out;
    }
    if (pattern({2, 1, 1})) {
        out.tag = JetType2<K>::Tag::Quartic211;
        auto rd = closed_root(2);
        // remaining quadratic after removing the double factor
        UPoly<K> q = u;
        if (rd) {
            UPoly<K> lin{F.neg(*rd), F.one()};
            q = up_divmod(F, q, lin).first;
            q = up_divmod(F, q, lin).first;
        }
        std::vector<std::optional<typename K::Elem>> singles;
        if (inf_mult == 1) singles.push_back(std::nullopt);
        if (up_deg<K>(q) == 2) {
            auto rr = quadratic_roots(F, q[2], q[1], q[0]);
            if (!rr) {
                out.have_subst = false;
                out.note = "simple lines conjugate over the base field";
                return out;
            }
            singles.push_back(rr->first);
            singles.push_back(rr->second);
        } else if (up_deg<K>(q) == 1) {
            singles.push_back(F.neg(F.div(q[0], q[1])));
        }
        if (singles.size() != 2) {
            out.have_subst = false;
            out.note = "could not separate the simple lines";
            return out;
        }
        // send the double line to x and the first single to y; the second
        // single is then aligned onto x + y by rescaling y
        build_M(rd, singles[0]);
        auto g = apply_M();
        Mono m31{}; m31[0] = 3; m31[1] = 1;
        Mono m22{}; m22[0] = 2; m22[1] = 2;
        auto c31 = g.coeff(m31), c22 = g.coeff(m22);
        if (F.is_zero(c31) || F.is_zero(c22)) {
            out.have_subst = false;
            out.note = "unexpected cancellation while aligning the third line";
            return out;
        }
        // g = c31 x^3 y + c22 x^2 y^2; rescale y by c31/c22 to equalize
        auto t = F.div(c31, c22);
        out.M[1][0] = F.mul(out.M[1][0], t);
        out.M[1][1] = F.mul(out.M[1][1], t);
        g = apply_M();
        out.unit = F.inv(g.coeff(m31));
        out.have_subst = true;
        return out;
    }
    if (pattern({1, 1, 1, 1})) {
        out.tag = JetType2<K>::Tag::Quartic1111;
        // shape read-off: c x y (x + y)(x + a y) has support {x^3y, x^2y^2, x y^3}
        Mono m31{}; m31[0] = 3; m31[1] = 1;
        Mono m22{}; m22[0] = 2; m22[1] = 2;
        Mono m13{}; m13[0] = 1; m13[1] = 3;
        bool shape = true;
        for (const auto& [m, c] : f.terms()) {
            (void)c;
            if (!(m == m31 || m == m22 || m == m13)) { shape = false; break; }
        }
        if (shape && !F.is_zero(f.coeff(m31)) && !F.is_zero(f.coeff(m13))) {
            auto c = f.coeff(m31);
            auto av = F.div(f.coeff(m13), c);
            if (F.eq(f.coeff(m22), F.mul(c, F.add(F.one(), av)))) {
                out.a = av;
                out.b = F.sub(F.from_int(2), F.mul(F.from_int(4), av));
                out.ab_in_field = true;
                out.have_subst = true;
                if (F.is_zero(av) || F.eq(av, F.one()))
                    fail("DegenerateForm", "cross ratio parameter a must avoid 0 and 1");
                return out;
            }
        }
        // general position: extract all four roots and take the canonical
        // minimum of b = 2 - 4a over the reorderings
        auto roots4 = all_linear_roots(F, u);
        if (!roots4 || roots4->size() + inf_mult != 4) {
            out.ab_in_field = false;
            out.note = "quartic roots outside the base field";
            return out;
        }
        std::vector<std::optional<typename K::Elem>> rs;
        for (auto& r : *roots4) rs.push_back(r);
        for (unsigned i = 0; i < inf_mult; ++i) rs.push_back(std::nullopt);
        // cross ratio sending (r0, r1, r2) to (0, inf, -1); a = -image(r3)
        auto mob = [&](const std::array<int, 4>& idx) -> std::optional<typename K::Elem> {
            auto val = [&](int i) { return rs[static_cast<size_t>(i)]; };
            // phi(T) = -(T - p0)(p2 - p1) / ((T - p1)(p2 - p0)) with infinity handled
            auto sub2 = [&](std::optional<typename K::Elem> xx, std::optional<typename K::Elem> yy,
                            bool& is_inf) -> typename K::Elem {
                // difference x - y treating infinity symbolically: callers
                // arrange that infinities cancel pairwise
                is_inf = false;
                if (!xx || !yy) { is_inf = true; return F.one(); }
                return F.sub(*xx, *yy);
            };
            bool i1, i2, i3, i4;
            auto n1 = sub2(val(idx[3]), val(idx[0]), i1);
            auto n2 = sub2(val(idx[2]), val(idx[1]), i2);
            auto d1 = sub2(val(idx[3]), val(idx[1]), i3);
            auto d2 = sub2(val(idx[2]), val(idx[0]), i4);
            // infinities cancel between numerator and denominator factors
            int ninf = (i1 ? 1 : 0) + (i2 ? 1 : 0);
            int dinf = (i3 ? 1 : 0) + (i4 ? 1 : 0);
            if (ninf != dinf) {
                if (ninf > dinf) return std::nullopt;  // image is infinity
                return F.zero();
            }
            auto num = F.mul(n1, n2);
            auto den = F.mul(d1, d2);
            if (F.is_zero(den)) return std::nullopt;
            return F.neg(F.div(num, den));
        };
        std::optional<typename K::Elem> best;
        typename K::Elem best_a{};
        // deterministic pick: shortest printed form, then lexicographic
        auto better = [&](const typename K::Elem& x, const typename K::Elem& y) {
            auto sx = F.to_string(x), sy = F.to_string(y);
            if (sx.size() != sy.size()) return sx.size() < sy.size();
            return sx < sy;
        };
        std::array<int, 4> idx{0, 1, 2, 3};
        do {
            auto av = mob(idx);
            if (!av) continue;
            if (F.is_zero(*av) || F.eq(*av, F.one())) continue;
            auto bv = F.sub(F.from_int(2), F.mul(F.from_int(4), *av));
            if (!best || better(bv, *best)) { best = bv; best_a = *av; }
        } while (std::next_permutation(idx.begin(), idx.end()));
        if (!best) {
            out.ab_in_field = false;
            out.note = "all cross ratio images degenerate";
            return out;
        }
        out.a = best_a;
        out.b = *best;
        out.ab_in_field = true;
        out.note = "cross ratio parameter chosen canonically from its orbit";
        return out;
    }
    fail("DegenerateForm", "quartic form with unrecognized multiplicity profile");
}

// ------------------------------------------------------- ternary jet match

enum class Jet3Tag {
    DiagonalCubic,   // x^3 + y^3 + z^3 + lambda xyz
    TwoCubesCross,   // x^3 + y^3 + xyz
    OneCubeCross,    // x^3 + xyz
    Cross,           // xyz
    CubeWhitney,     // x^3 + y z^2
    Pinch,           // x^2 z + y z^2
    CubeHandle,      // x^3 + x z^2
    SquareLine,      // x^2 y
    TripleLine,      // x^3
    NoMatch
};

template <class K>
struct JetMatch3 {
    Jet3Tag tag = Jet3Tag::NoMatch;
    std::array<unsigned, 3> perm{0, 1, 2};  // result variables drawn from input slots
    typename K::Elem lambda{};              // DiagonalCubic only, after scaling
    bool lambda_ok = false;                 // lambda^3 + 27 != 0
};

// Match a ternary cubic against the canonical shapes, up to permutation of
// the variables and per-variable scaling (no general linear changes).
template <class K>
JetMatch3<K> jet_match_3(const Series<K>& f3) {
    const K& F = f3.F;
    const Ring& R = f3.R;
    if (R.n != 3) fail("PreconditionViolated", "ternary jet matching needs exactly 3 variables");
    if (f3.is_zero()) fail("DegenerateForm", "zero cubic");
    for (const auto& [m, c] : f3.terms()) {
        (void)c;
        if (mono_deg(m) != 3) fail("WrongDegree", "form is not homogeneous of degree 3");
    }

    struct Shape {
        Jet3Tag tag;
        std::vector<Mono> must;      // required support
        std::vector<Mono> optional;  // allowed extras
    };
    auto mk = [](int a, int b, int c) {
        Mono m{};
        m[0] = static_cast<std::uint16_t>(a);
        m[1] = static_cast<std::uint16_t>(b);
        m[2] = static_cast<std::uint16_t>(c);
        return m;
    };
    const Mono mxyz = mk(1, 1, 1);
    std::vector<Shape> shapes = {
        {Jet3Tag::DiagonalCubic, {mk(3, 0, 0), mk(0, 3, 0), mk(0, 0, 3)}, {mxyz}},
        {Jet3Tag::TwoCubesCross, {mk(3, 0, 0), mk(0, 3, 0), mxyz}, {}},
        {Jet3Tag::OneCubeCross, {mk(3, 0, 0), mxyz}, {}},
        {Jet3Tag::Cross, {mxyz}, {}},
        {Jet3Tag::CubeWhitney, {mk(3, 0, 0), mk(0, 1, 2)}, {}},
        {Jet3Tag::Pinch, {mk(2, 0, 1), mk(0, 1, 2)}, {}},
        {Jet3Tag::CubeHandle, {mk(3, 0, 0), mk(1, 0, 2)}, {}},
        {Jet3Tag::SquareLine, {mk(2, 1, 0)}, {}},
        {Jet3Tag::TripleLine, {mk(3, 0, 0)}, {}},
    };

    std::array<unsigned, 3> perm{0, 1, 2};
    std::sort(perm.begin(), perm.end());
    JetMatch3<K> out;
    do {
        // support of f3 with variables relabeled through perm
        std::map<Mono, typename K::Elem, MonoBefore> sup;
        for (const auto& [m, c] : f3.terms()) {
            Mono mm{};
            for (unsigned i = 0; i < 3; ++i) mm[i] = m[perm[i]];
            sup[mm] = c;
        }
        for (const auto& sh : shapes) {
            bool ok = true;
            for (const auto& m : sh.must)
                if (sup.find(m) == sup.end()) { ok = false; break; }
            if (!ok) continue;
            for (const auto& [m, c] : sup) {
                (void)c;
                bool allowed = false;
                for (const auto& mm : sh.must)
                    if (mm == m) allowed = true;
                for (const auto& mm : sh.optional)
                    if (mm == m) allowed = true;
                if (!allowed) { ok = false; break; }
            }
            if (!ok) continue;
            out.tag = sh.tag;
            out.perm = perm;
            if (sh.tag == Jet3Tag::DiagonalCubic) {
                // scale the cubes to 1; lambda^3 is scaling-invariant, so any
                // consistent choice of cube roots reports a valid lambda
                auto cx = sup[mk(3, 0, 0)], cy = sup[mk(0, 3, 0)], cz = sup[mk(0, 0, 3)];
                auto it = sup.find(mxyz);
                if (it == sup.end()) {
                    out.lambda = F.zero();
                    out.lambda_ok = true;  // 0 + 27 != 0 whenever p != 3
                    return out;
                }
                auto c111 = it->second;
                // lambda^3 = c111^3 / (cx cy cz)
                auto lam3 = F.div(F.mul(F.mul(c111, c111), c111), F.mul(F.mul(cx, cy), cz));
                out.lambda_ok = !F.is_zero(F.add(lam3, F.from_int(27)));
                auto root = classify_detail::kth_root_in_field(F, lam3, 3);
                if (root) out.lambda = *root;
                else {
                    // report the unscaled coefficient; lambda_ok already
                    // carries the invariant discriminant test
                    out.lambda = c111;
                }
                return out;
            }
            return out;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.tag = Jet3Tag::NoMatch;
    return out;
}

// -------------------------------------------------------- graded reduction

template <class K>
struct ReduceOutcome {
    Series<K> result;
    bool complete = true;
    unsigned substitutions = 0;
    std::vector<std::string> log;
    ReduceOutcome(const K& F, const Ring& R) : result(F, R) {}
};

namespace classify_detail {

// Level-by-level elimination of non-kept monomials. level(m) defines the
// grading (total degree or polytope valuation); keep(m) marks monomials
// that must survive. At each level the offending component is expressed in
// the span of the tangent generators u f, u d_i f whose leading level is
// at least that level, and the corresponding exact contact transformation
// is applied: f -> ((1 - g) f)(x - xi).
template <class K, class Level, class Keep>
ReduceOutcome<K> reduce_graded(const Series<K>& f, Level&& level, Keep&& keep,
                               unsigned deg_cap, unsigned budget) {
    const K& F = f.F;
    const Ring& R = f.R;
    ReduceOutcome<K> out(F, R);
    Series<K> g = f.jet(deg_cap);
    unsigned subs = 0;

    for (;;) {
        // lowest level carrying a non-kept monomial
        std::optional<long long> target;
        for (const auto& [m, c] : g.terms()) {
            (void)c;
            if (keep(m)) continue;
            long long lv = level(m);
            if (!target || lv < *target) target = lv;
        }
        if (!target) break;
        if (subs >= budget) {
            out.result = g;
            out.complete = false;
            out.log.push_back("budget exhausted with non-regular terms remaining");
            return out;
        }

        long long d = *target;
        // columns: the non-kept monomials at this level within the cap;
        // kept coefficients may shift freely, so they carry no constraint
        std::vector<Mono> cols;
        std::map<Mono, unsigned, MonoBefore> colof;
        for (unsigned deg = 0; deg <= deg_cap; ++deg)
            for (const auto& m : R.monos_of_degree(deg))
                if (level(m) == d && !keep(m)) {
                    colof[m] = static_cast<unsigned>(cols.size());
                    cols.push_back(m);
                }

        // rows: level-d components of u f and u d_i f with no lower terms
        struct Row {
            std::vector<typename K::Elem> vec;
            int var;  // -1 for the unit direction
            Mono u;
        };
        std::vector<Series<K>> gens;
        std::vector<int> gvar;
        gens.push_back(g);
        gvar.push_back(-1);
        for (unsigned i = 0; i < R.n; ++i) {
            gens.push_back(g.diff(i));
            gvar.push_back(static_cast<int>(i));
        }

        // the level of a product splits, so only multipliers that land the
        // generator's lowest term exactly on level d can contribute a row
        // that is free of lower terms
        std::vector<long long> minlv(gens.size(), 0);
        std::vector<bool> gen_ok(gens.size(), false);
        for (size_t gi = 0; gi < gens.size(); ++gi) {
            std::optional<long long> lo;
            for (const auto& [m, c] : gens[gi].terms()) {
                (void)c;
                long long lv = level(m);
                if (!lo || lv < *lo) lo = lv;
            }
            if (lo) { minlv[gi] = *lo; gen_ok[gi] = true; }
        }

        EchelonSpan<K> span(F, static_cast<unsigned>(cols.size()));
        std::vector<Row> rows;
        for (unsigned du = 0; du <= deg_cap; ++du) {
            for (const auto& um : R.monos_of_degree(du)) {
                long long lvu = level(um);
                for (size_t gi = 0; gi < gens.size(); ++gi) {
                    if (!gen_ok[gi]) continue;
                    if (gvar[gi] == -1 && du == 0) continue;  // unit times f changes nothing
                    if (lvu + minlv[gi] != d) continue;
                    auto prod = gens[gi].mul_mono(um, F.one()).jet(deg_cap);
                    if (prod.is_zero()) continue;
                    bool lower = false;
                    std::vector<typename K::Elem> vec(cols.size(), F.zero());
                    bool any = false;
                    for (const auto& [m, c] : prod.terms()) {
                        long long lv = level(m);
                        if (lv < d) { lower = true; break; }
                        if (lv == d) {
                            auto it = colof.find(m);
                            if (it != colof.end()) { vec[it->second] = c; any = true; }
                        }
                    }
                    if (lower || !any) continue;
                    auto probe = vec;
                    if (span.insert(std::move(probe)) >= 0)
                        rows.push_back(Row{vec, gvar[gi], um});
                }
            }
        }

        // express the offending level-d component over the accepted rows
        std::vector<typename K::Elem> tgt(cols.size(), F.zero());
        for (const auto& [m, c] : g.terms())
            if (!keep(m) && level(m) == d) tgt[colof.at(m)] = c;

        // gaussian solve against the collected rows
        std::vector<std::vector<typename K::Elem>> A;
        for (auto& r : rows) A.push_back(r.vec);
        std::vector<typename K::Elem> coefsol(rows.size(), F.zero());
        {
            // row-reduce [A^T | tgt] over the column space
            unsigned nr = static_cast<unsigned>(rows.size());
            unsigned nc = static_cast<unsigned>(cols.size());
            std::vector<std::vector<typename K::Elem>> M(nc, std::vector<typename K::Elem>(nr + 1, F.zero()));
            for (unsigned r = 0; r < nr; ++r)
                for (unsigned c = 0; c < nc; ++c) M[c][r] = A[r][c];
            for (unsigned c = 0; c < nc; ++c) M[c][nr] = tgt[c];
            std::vector<int> pivot_of_row(nr, -1);
            unsigned rank = 0;
            for (unsigned col = 0; col < nr && rank < nc; ++col) {
                unsigned piv = nc;
                for (unsigned r = rank; r < nc; ++r)
                    if (!F.is_zero(M[r][col])) { piv = r; break; }
                if (piv == nc) continue;
                std::swap(M[rank], M[piv]);
                auto inv = F.inv(M[rank][col]);
                for (unsigned cc = 0; cc <= nr; ++cc) M[rank][cc] = F.mul(M[rank][cc], inv);
                for (unsigned r = 0; r < nc; ++r) {
                    if (r == rank || F.is_zero(M[r][col])) continue;
                    auto fac = M[r][col];
                    for (unsigned cc = 0; cc <= nr; ++cc)
                        M[r][cc] = F.sub(M[r][cc], F.mul(fac, M[rank][cc]));
                }
                pivot_of_row[col] = static_cast<int>(rank);
                ++rank;
            }
            // consistency: rows of M beyond the pivots must have zero rhs
            bool consistent = true;
            for (unsigned r = rank; r < nc; ++r)
                if (!F.is_zero(M[r][nr])) { consistent = false; break; }
            if (!consistent) {
                out.result = g;
                out.complete = false;
                out.log.push_back("level " + std::to_string(d) +
                                  " component not in the tangent image");
                return out;
            }
            for (unsigned col = 0; col < nr; ++col)
                if (pivot_of_row[col] >= 0)
                    coefsol[col] = M[static_cast<unsigned>(pivot_of_row[col])][nr];
        }

        // assemble the transformation data
        Series<K> gpart(F, R);
        std::vector<Series<K>> xi;
        for (unsigned i = 0; i < R.n; ++i) xi.emplace_back(F, R);
        for (size_t r = 0; r < rows.size(); ++r) {
            if (F.is_zero(coefsol[r])) continue;
            if (rows[r].var < 0) gpart.add_term(rows[r].u, coefsol[r]);
            else xi[static_cast<unsigned>(rows[r].var)].add_term(rows[r].u, coefsol[r]);
        }

        // f -> ((1 - gpart) f)(x_i - xi_i): removes the level-d component
        std::vector<Series<K>> images;
        for (unsigned i = 0; i < R.n; ++i)
            images.push_back(Series<K>::variable(F, R, i).sub(xi[i]));
        auto unit = Series<K>::constant(F, R, F.one()).sub(gpart);
        g = unit.mul_trunc(g, deg_cap + 1).subst_trunc(images, deg_cap + 1).jet(deg_cap);
        ++subs;
        out.log.push_back("cleared level " + std::to_string(d));

        // the level-d offenders are gone; higher junk is handled later
    }

    out.result = g;
    out.substitutions = subs;
    return out;
}

} // namespace classify_detail

// Reduce the tail of f onto in_P(f) plus the regular-basis monomials above
// the polytope level, through exact contact transformations.
template <class K>
ReduceOutcome<K> reduce_tail(const Series<K>& f, const CPolytope& P, unsigned budget = 64) {
    const K& F = f.F;
    if (f.is_zero()) fail("PreconditionViolated", "cannot reduce the zero series");
    auto bound = determinacy_polytope(f, P);
    auto rb = regular_basis(F, f, P);
    if (!rb.finite) fail("RegularBasisInfinite", "tail reduction needs a finite regular basis");

    auto inp = initial_part(f, P);
    std::set<Mono, MonoBefore> keepset;
    for (const auto& [m, c] : inp.terms()) {
        (void)c;
        keepset.insert(m);
    }
    long long vf = *vp_series(P, f);
    for (const auto& [m, v] : rb.monomials)
        if (v > vf) keepset.insert(m);

    unsigned cap = bound.k + 1;
    auto out = classify_detail::reduce_graded(
        f, [&](const Mono& m) { return vp_mono(P, m); },
        [&](const Mono& m) { return keepset.count(m) > 0; }, cap, budget);
    if (!out.complete)
        out.log.insert(out.log.begin(), "reduction stopped early");
    return out;
}

// ----------------------------------------------------------- alpha-beta

template <class K>
struct NormalizeOutcome {
    Series<K> result;
    bool complete = true;
    std::vector<std::string> log;
    NormalizeOutcome(const K& F, const Ring& R) : result(F, R) {}
};

// Diagonal scaling x_i -> alpha_i x_i together with a unit factor, chosen
// so the designated coefficients hit their targets. The multiplicative
// system is solved by integer elimination on the exponents along the given
// column order; each back substitution takes a root in the field when one
// exists. A degenerate exponent lattice with an unreached target is a hard
// obstruction.
template <class K>
NormalizeOutcome<K> alpha_beta_attempt(const Series<K>& f,
                                       const std::vector<std::pair<Mono, typename K::Elem>>& targets,
                                       const std::vector<unsigned>& order) {
    const K& F = f.F;
    const Ring& R = f.R;
    unsigned n = R.n;
    NormalizeOutcome<K> out(F, R);

    // equations: value_j = prod_i alpha_i^{E[j][i]} * u, with value_j the
    // needed correction target_j / coeff_j
    struct Eq {
        std::vector<long long> e;  // exponents of (u, alpha_0..alpha_{n-1})
        typename K::Elem val;
    };
    std::vector<Eq> eqs;
    for (const auto& [m, tgt] : targets) {
        auto c = f.coeff(m);
        if (F.is_zero(c)) fail("PreconditionViolated", "target monomial has zero coefficient");
        Eq eq;
        eq.e.assign(n + 1, 0);
        eq.e[0] = 1;
        for (unsigned i = 0; i < n; ++i) eq.e[i + 1] = m[i];
        eq.val = F.div(tgt, c);
        eqs.push_back(std::move(eq));
    }

    // fraction-free elimination; combining rows multiplies their values
    std::vector<typename K::Elem> sol(n + 1, F.one());
    std::vector<bool> solved(n + 1, false);
    unsigned row = 0;
    std::vector<unsigned> pivcol;
    for (unsigned oi = 0; oi < order.size() && row < eqs.size(); ++oi) {
        unsigned col = order[oi];
        unsigned piv = static_cast<unsigned>(eqs.size());
        for (unsigned r = row; r < eqs.size(); ++r)
            if (eqs[r].e[col] != 0) { piv = r; break; }
        if (piv == eqs.size()) continue;
        std::swap(eqs[row], eqs[piv]);
        for (unsigned r = row + 1; r < eqs.size(); ++r) {
            if (eqs[r].e[col] == 0) continue;
            long long a = eqs[row].e[col], b = eqs[r].e[col];
            long long g = std::gcd(std::abs(a), std::abs(b));
            long long ma = b / g, mb = a / g;
            // new row r := a/g * row_r - b/g * row_row (exponentwise)
            Eq nr;
            nr.e.assign(n + 1, 0);
            for (unsigned c2 = 0; c2 <= n; ++c2) nr.e[c2] = mb * eqs[r].e[c2] - ma * eqs[row].e[c2];
            auto pw = [&](const typename K::Elem& x, long long e) {
                auto acc = F.one();
                auto base = e >= 0 ? x : F.inv(x);
                long long k = std::abs(e);
                while (k > 0) {
                    if (k & 1) acc = F.mul(acc, base);
                    base = F.mul(base, base);
                    k >>= 1;
                }
                return acc;
            };
            nr.val = F.mul(pw(eqs[r].val, mb), pw(eqs[row].val, -ma));
            eqs[r] = std::move(nr);
        }
        pivcol.push_back(col);
        ++row;
    }
    // zero rows must carry value 1, else the lattice blocks the target
    for (unsigned r = row; r < eqs.size(); ++r) {
        bool allz = std::all_of(eqs[r].e.begin(), eqs[r].e.end(), [](long long e) { return e == 0; });
        if (allz && !F.is_one(eqs[r].val))
            fail("ObstructedScaling", "exponent lattice forces an unreachable coefficient target");
    }
    // dials without a pivot are free; pin them to the identity so the
    // substitution chain can close
    {
        std::vector<bool> haspiv(n + 1, false);
        for (unsigned c : pivcol) haspiv[c] = true;
        for (unsigned c2 = 0; c2 <= n; ++c2)
            if (!haspiv[c2]) {
                solved[c2] = true;
                sol[c2] = F.one();
            }
    }
    // back substitution, taking roots where needed
    bool complete = true;
    for (int r = static_cast<int>(row) - 1; r >= 0; --r) {
        unsigned col = pivcol[static_cast<size_t>(r)];
        auto rhs = eqs[static_cast<size_t>(r)].val;
        bool known = true;
        for (unsigned c2 = 0; c2 <= n; ++c2) {
            if (c2 == col || eqs[static_cast<size_t>(r)].e[c2] == 0) continue;
            if (!solved[c2]) { known = false; continue; }
            auto pwv = sol[c2];
            long long e = eqs[static_cast<size_t>(r)].e[c2];
            auto acc = F.one();
            auto base = e >= 0 ? pwv : F.inv(pwv);
            long long k2 = std::abs(e);
            while (k2 > 0) {
                if (k2 & 1) acc = F.mul(acc, base);
                base = F.mul(base, base);
                k2 >>= 1;
            }
            rhs = F.div(rhs, acc);
        }
        long long e = eqs[static_cast<size_t>(r)].e[col];
        if (!known) { complete = false; continue; }
        bool invert = e < 0;
        auto root = classify_detail::kth_root_in_field(F, invert ? F.inv(rhs) : rhs, std::abs(e));
        if (!root) {
            complete = false;
            out.log.push_back("no in-field root for one scaling equation; coefficient kept");
            continue;
        }
        sol[col] = *root;
        solved[col] = true;
    }
    // apply what was solved: unit u = sol[0], alpha_i = sol[i+1]
    std::vector<Series<K>> images;
    for (unsigned i = 0; i < n; ++i)
        images.push_back(Series<K>::variable(F, R, i).scale(solved[i + 1] ? sol[i + 1] : F.one()));
    unsigned cap = 1;
    for (const auto& [m, c] : f.terms()) {
        (void)c;
        cap = std::max(cap, mono_deg(m) + 1);
    }
    out.result = f.subst_trunc(images, cap).scale(solved[0] ? sol[0] : F.one());
    out.complete = complete;
    if (!complete) out.log.push_back("normalization partial; remaining coefficients are scaling-orbit data");
    // confirm the reached targets
    for (const auto& [m, tgt] : targets) {
        if (!complete) break;
        if (!F.eq(out.result.coeff(m), tgt))
            fail("InternalError", "scaling verification failed");
    }
    return out;
}

// Root extraction can fail along one substitution chain yet succeed along
// another factorization of the same lattice (which dial absorbs the root
// depends on the pivot order), so the variable columns are tried in every
// order and the first attempt that closes wins.
template <class K>
NormalizeOutcome<K> alpha_beta_normalize(const Series<K>& f,
                                         const std::vector<std::pair<Mono, typename K::Elem>>& targets) {
    unsigned n = f.R.n;
    std::vector<unsigned> perm;
    for (unsigned i = 1; i <= n; ++i) perm.push_back(i);
    std::optional<NormalizeOutcome<K>> first;
    do {
        std::vector<unsigned> order;
        order.push_back(0);
        order.insert(order.end(), perm.begin(), perm.end());
        auto att = alpha_beta_attempt(f, targets, order);
        if (att.complete) return att;
        if (!first) first = std::move(att);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return *first;
}

// ------------------------------------------------------------- the verdict

struct Verdict {
    enum class Kind { NotIsolated, Simple, Unimodal, ModalityAtLeast2, Undetermined };
    Kind kind = Kind::Undetermined;
    std::string symbol;   // instantiated, e.g. E^0_{13,19}
    std::string family;   // table row key, e.g. E^0_{r,s}
    std::vector<std::pair<std::string, long long>> params;
    std::string lambda;        // printed modulus, empty if none
    std::string lambda_class;  // scaling-invariant representative for comparisons
    std::optional<CondWitness> witness;
    std::string reason;
    std::vector<std::string> transform_log;

    std::string str() const {
        std::ostringstream os;
        switch (kind) {
            case Kind::NotIsolated: os << "NotIsolated"; break;
            case Kind::Simple: os << "Simple " << symbol; break;
            case Kind::Unimodal:
                os << "Unimodal " << symbol;
                if (!lambda.empty()) os << " (lambda=" << lambda << ")";
                break;
            case Kind::ModalityAtLeast2:
                os << "ModalityAtLeast2";
                if (witness)
                    os << " [" << witness->cond << " clause " << witness->clause << " at ("
                       << witness->u << "," << witness->v << ")]";
                break;
            case Kind::Undetermined: os << "Undetermined"; break;
        }
        if (!reason.empty()) os << ": " << reason;
        return os.str();
    }
};

namespace classify_detail {

inline std::string subst_params(std::string fam,
                                const std::vector<std::pair<std::string, long long>>& params) {
    auto get = [&](const std::string& k) -> std::optional<long long> {
        for (const auto& [n, v] : params)
            if (n == k) return v;
        return std::nullopt;
    };
    // instantiate composite exponents first, then single letters
    auto repl = [&](const std::string& pat, long long val) {
        size_t pos;
        while ((pos = fam.find(pat)) != std::string::npos)
            fam = fam.substr(0, pos) + std::to_string(val) + fam.substr(pos + pat.size());
    };
    if (auto t = get("t")) {
        if (fam.find("2t") != std::string::npos) repl("2t", 2 * *t);
        if (fam.find("3t") != std::string::npos) repl("3t", 3 * *t);
    }
    for (const char* k : {"r", "s", "k", "l", "t"}) {
        if (auto v = get(k)) {
            size_t pos = 0;
            while ((pos = fam.find(k, pos)) != std::string::npos) {
                fam = fam.substr(0, pos) + std::to_string(*v) + fam.substr(pos + 1);
                pos += std::to_string(*v).size();
            }
        }
    }
    return fam;
}

template <class K>
Verdict make_unimodal(const K& F, const std::string& family,
                      std::vector<std::pair<std::string, long long>> params,
                      const std::optional<typename K::Elem>& lam,
                      const std::optional<typename K::Elem>& lam_class,
                      std::vector<std::string> log) {
    Verdict v;
    v.kind = Verdict::Kind::Unimodal;
    v.family = family;
    v.params = std::move(params);
    v.symbol = subst_params(family, v.params);
    if (lam) v.lambda = F.to_string(*lam);
    if (lam_class) v.lambda_class = F.to_string(*lam_class);
    else if (lam) v.lambda_class = v.lambda;
    v.transform_log = std::move(log);
    return v;
}

inline Verdict make_mod2(std::optional<CondWitness> w, std::string why) {
    Verdict v;
    v.kind = Verdict::Kind::ModalityAtLeast2;
    v.witness = std::move(w);
    v.reason = std::move(why);
    return v;
}

inline Verdict make_undetermined(std::string why) {
    Verdict v;
    v.kind = Verdict::Kind::Undetermined;
    v.reason = std::move(why);
    return v;
}

inline Verdict make_simple(std::string sym, std::string why = "") {
    Verdict v;
    v.kind = Verdict::Kind::Simple;
    v.symbol = std::move(sym);
    v.reason = std::move(why);
    return v;
}

// map from table-check outcome to a verdict, given an already matched row
template <class K>
Verdict row_verdict(const K& F, const std::string& family,
                    std::vector<std::pair<std::string, long long>> params, long long p,
                    const std::optional<typename K::Elem>& lam,
                    const std::optional<typename K::Elem>& lam_class,
                    std::vector<std::string> log) {
    std::map<std::string, long long> pm(params.begin(), params.end());
    std::optional<BigRat> lam_q;
    if (lam) {
        // conditions on lambda are evaluated on the field element via an
        // integer lift; prime fields lift to the least residue
        if constexpr (std::is_same_v<K, Rationals>) lam_q = *lam;
        else lam_q = BigRat(static_cast<long long>(*lam));
    }
    auto chk = check_table_conditions(family, pm, p, lam_q);
    if (chk.unimodal) return make_unimodal(F, family, std::move(params), lam, lam_class, std::move(log));
    if (chk.witness) return make_mod2(chk.witness, chk.reason);
    return make_undetermined("matched " + family + " but " + chk.reason);
}

} // namespace classify_detail

// classify() and its family engines are long; they live in a companion
// header to keep this one focused on the reusable operations.

} // namespace germ

#include "classify_engine.hpp"
