#pragma once
// Monomials and the ambient power-series ring description. A monomial is an
// exponent vector; the ring fixes the variable count and print names. The
// canonical term order used everywhere (series printing, elimination pivots,
// standard-monomial listings) is: ascending total degree, ties broken so
// that earlier variables carry more weight first (x^2 before x*y before y^2).

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "germ/errors.hpp"

namespace germ {

constexpr unsigned MAX_VARS = 6;

using Mono = std::array<std::uint16_t, MAX_VARS>;

inline Mono mono_one() { return Mono{}; }

inline unsigned mono_deg(const Mono& m) {
    unsigned d = 0;
    for (auto e : m) d += e;
    return d;
}

inline Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r{};
    for (unsigned i = 0; i < MAX_VARS; ++i)
        r[i] = static_cast<std::uint16_t>(a[i] + b[i]);
    return r;
}

inline bool mono_divides(const Mono& a, const Mono& b) {
    for (unsigned i = 0; i < MAX_VARS; ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Mono mono_div(const Mono& a, const Mono& b) {
    Mono r{};
    for (unsigned i = 0; i < MAX_VARS; ++i) {
        if (b[i] > a[i]) fail("PreconditionViolated", "monomial quotient is not a monomial");
        r[i] = static_cast<std::uint16_t>(a[i] - b[i]);
    }
    return r;
}

// Canonical order: degree first, then lexicographic with x > y > z read
// descending, i.e. among equal degree x^2 < x*y < y^2 never happens; the
// listing goes x^2, x*y, y^2. Comparator returns true when a comes first.
inline bool mono_before(const Mono& a, const Mono& b) {
    unsigned da = mono_deg(a), db = mono_deg(b);
    if (da != db) return da < db;
    for (unsigned i = 0; i < MAX_VARS; ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return false;
}

struct MonoHash {
    size_t operator()(const Mono& m) const {
        size_t h = 0xcbf29ce484222325ULL;
        for (auto e : m) {
            h ^= e;
            h *= 0x100000001b3ULL;
        }
        return h;
    }
};

struct Ring {
    unsigned n = 0;
    std::vector<std::string> names;

    Ring() = default;
    explicit Ring(std::vector<std::string> vars) : n(static_cast<unsigned>(vars.size())), names(std::move(vars)) {
        if (n == 0 || n > MAX_VARS)
            fail("PreconditionViolated", "variable count must be between 1 and " + std::to_string(MAX_VARS));
    }
    static Ring standard(unsigned n) {
        static const char* defaults[MAX_VARS] = {"x", "y", "z", "w", "v", "u"};
        if (n == 0 || n > MAX_VARS)
            fail("PreconditionViolated", "variable count must be between 1 and " + std::to_string(MAX_VARS));
        std::vector<std::string> v(defaults, defaults + n);
        return Ring(std::move(v));
    }

    bool operator==(const Ring& o) const = default;

    int var_index(const std::string& name) const {
        for (unsigned i = 0; i < n; ++i)
            if (names[i] == name) return static_cast<int>(i);
        return -1;
    }

    Mono var(unsigned i) const {
        Mono m{};
        m[i] = 1;
        return m;
    }

    std::string mono_string(const Mono& m) const {
        std::string out;
        for (unsigned i = 0; i < n; ++i) {
            if (m[i] == 0) continue;
            if (!out.empty()) out += "*";
            out += names[i];
            if (m[i] > 1) out += "^" + std::to_string(m[i]);
        }
        return out.empty() ? "1" : out;
    }

    // All monomials of exact total degree d, in canonical order.
    std::vector<Mono> monos_of_degree(unsigned d) const {
        std::vector<Mono> out;
        Mono cur{};
        walk_degree(0, d, cur, out);
        return out;
    }

    // All monomials with deg < bound (for bound >= 0), canonical order.
    std::vector<Mono> monos_below(unsigned bound) const {
        std::vector<Mono> out;
        for (unsigned d = 0; d < bound; ++d) {
            auto layer = monos_of_degree(d);
            out.insert(out.end(), layer.begin(), layer.end());
        }
        return out;
    }

    // Number of monomials of exact degree d: C(d + n - 1, n - 1).
    std::uint64_t count_of_degree(unsigned d) const {
        std::uint64_t num = 1, den = 1;
        for (unsigned i = 1; i < n; ++i) {
            num *= d + i;
            den *= i;
        }
        return num / den;
    }
    std::uint64_t count_below(unsigned bound) const {
        std::uint64_t s = 0;
        for (unsigned d = 0; d < bound; ++d) s += count_of_degree(d);
        return s;
    }

private:
    // Descending-lex within a degree means the first variable takes the
    // largest exponent first.
    void walk_degree(unsigned i, unsigned rem, Mono& cur, std::vector<Mono>& out) const {
        if (i + 1 == n) {
            cur[i] = static_cast<std::uint16_t>(rem);
            out.push_back(cur);
            cur[i] = 0;
            return;
        }
        for (int e = static_cast<int>(rem); e >= 0; --e) {
            cur[i] = static_cast<std::uint16_t>(e);
            walk_degree(i + 1, rem - static_cast<unsigned>(e), cur, out);
        }
        cur[i] = 0;
    }
};

} // namespace germ
