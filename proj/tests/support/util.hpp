#pragma once
// Shared helpers for the test binaries: terse polynomial construction from
// exponent lists, so tests do not depend on the parser module.

#include <germ/series.hpp>

#include <initializer_list>
#include <utility>
#include <vector>

namespace testutil {

template <class K>
germ::Series<K> poly(const K& F, const germ::Ring& R,
                     std::initializer_list<std::pair<long long, std::vector<int>>> terms) {
    germ::Series<K> s(F, R);
    for (const auto& [c, exps] : terms) {
        germ::Mono m{};
        for (size_t i = 0; i < exps.size(); ++i)
            m[i] = static_cast<std::uint16_t>(exps[i]);
        s.add_term(m, F.from_int(c));
    }
    return s;
}

inline germ::Mono mono(std::initializer_list<int> exps) {
    germ::Mono m{};
    size_t i = 0;
    for (int e : exps) m[i++] = static_cast<std::uint16_t>(e);
    return m;
}

} // namespace testutil
