#include <catch2/catch_amalgamated.hpp>

#include <germ/acgrading.hpp>
#include <germ/field.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "support/util.hpp"

using namespace germ;
using testutil::mono;
using testutil::poly;

namespace {

template <class K>
std::set<Mono, MonoBefore> basis_set(const RegularBasis& b, const K&) {
    std::set<Mono, MonoBefore> s;
    for (const auto& [m, v] : b.monomials) s.insert(m);
    return s;
}

}  // namespace

TEST_CASE("pieces of x^3+y^5 recover the Tjurina standard monomials") {
    Rationals Q;
    Ring R = Ring::standard(2);
    auto f = poly(Q, R, {{1, {3, 0}}, {1, {0, 5}}});
    auto P = newton_diagram(f);
    REQUIRE(P.weights.size() == 1);
    REQUIRE(P.weights[0][0] == 5);
    REQUIRE(P.weights[0][1] == 3);

    // Nonzero pieces sit exactly at the valuations of the tau standard basis.
    std::map<long long, Mono> expected = {
        {0, mono({0, 0})},  {3, mono({0, 1})},  {5, mono({1, 0})},
        {6, mono({0, 2})},  {8, mono({1, 1})},  {9, mono({0, 3})},
        {11, mono({1, 2})}, {14, mono({1, 3})},
    };
    long long total = 0;
    for (long long d = 0; d <= 20; ++d) {
        auto piece = ac_piece(Q, f, P, d);
        auto it = expected.find(d);
        if (it == expected.end()) {
            INFO("level " << d);
            CHECK(piece.dimension == 0);
        } else {
            CHECK(piece.dimension == 1);
            REQUIRE(piece.standard.size() == 1);
            CHECK(piece.standard[0] == it->second);
        }
        total += piece.dimension;
    }
    CHECK(total == 8);
    CHECK(tau(f).dimension == 8);

    // x * df/dy covers xy^4 at level 17.
    CHECK(ac_piece(Q, f, P, 17).dimension == 0);

    auto B = regular_basis(Q, f, P);
    REQUIRE(B.finite);
    CHECK(B.monomials.size() == 8);
    long long maxv = 0;
    for (const auto& [m, v] : B.monomials) maxv = std::max(maxv, v);
    CHECK(maxv == 14);
    CHECK(B.window_lo == 15);
    CHECK(B.window_hi == 20);
}

TEST_CASE("bare derivations pull the ideal below the valuation of f") {
    Rationals Q;
    Ring R = Ring::standard(2);
    auto f = poly(Q, R, {{1, {3, 0}}, {1, {0, 5}}});
    auto P = newton_diagram(f);

    // v(d/dx) = -5 and v(d/dy) = -3, so x^2 dies at level 10 and y^4 at 12,
    // both below v(f) = 15.
    CHECK(ac_piece(Q, f, P, 10).dimension == 0);
    CHECK(ac_piece(Q, f, P, 12).dimension == 0);

    // Below v(f) minus the largest weight entry nothing reaches down, and the
    // full monomial space survives.
    for (long long d = 0; d < 10; ++d) {
        unsigned full = 0;
        for (const auto& m : R.monos_below(static_cast<unsigned>(d) + 1))
            if (vp_mono(P, m) == d) ++full;
        INFO("level " << d);
        CHECK(ac_piece(Q, f, P, d).dimension == full);
    }
}

TEST_CASE("x^3+y^8 over F_7: the lone high-valuation basis element") {
    PrimeField F(7);
    Ring R = Ring::standard(2);
    auto f = poly(F, R, {{1, {3, 0}}, {1, {0, 8}}});
    auto P = newton_diagram(f);
    REQUIRE(P.weights[0][0] == 8);
    REQUIRE(P.weights[0][1] == 3);

    auto piece = ac_piece(F, f, P, 26);
    CHECK(piece.dimension == 1);
    REQUIRE(piece.standard.size() == 1);
    CHECK(piece.standard[0] == mono({1, 6}));

    // xy^7 at level 29 is covered by x * df/dy since 7 does not divide 8.
    CHECK(ac_piece(F, f, P, 29).dimension == 0);

    auto B = regular_basis(F, f, P);
    REQUIRE(B.finite);
    CHECK(B.monomials.size() == 14);
    CHECK(B.monomials.size() == tau(f).dimension);
    std::vector<Mono> above;
    for (const auto& [m, v] : B.monomials)
        if (v > 24) above.push_back(m);
    REQUIRE(above.size() == 1);
    CHECK(above[0] == mono({1, 6}));

    CHECK(high_valuation_count(F, f, P, 26) == 1);
    CHECK(high_valuation_count(F, f, P, 25) == 0);

    auto g = poly(F, R, {{1, {3, 0}}, {1, {0, 5}}});
    CHECK(high_valuation_count(F, g, newton_diagram(g), 1000) == 0);
}

TEST_CASE("x^3+y^7 over F_7: vanishing df/dy adds a second high element") {
    PrimeField F(7);
    Ring R = Ring::standard(2);
    auto f = poly(F, R, {{1, {3, 0}}, {1, {0, 7}}});
    auto P = newton_diagram(f);

    CHECK(ac_piece(F, f, P, 25).dimension == 1);  // xy^6 survives, x*df/dy = 0

    auto B = regular_basis(F, f, P);
    REQUIRE(B.finite);
    CHECK(B.monomials.size() == 14);
    CHECK(B.monomials.size() == tau(f).dimension);
    std::set<Mono, MonoBefore> above;
    for (const auto& [m, v] : B.monomials)
        if (v > 21) above.insert(m);
    std::set<Mono, MonoBefore> want{mono({1, 5}), mono({1, 6})};
    CHECK(above == want);

    CHECK(high_valuation_count(F, f, P, 25) == 2);
    CHECK(high_valuation_count(F, f, P, 24) == 1);
    CHECK(high_valuation_count(F, f, P, 21) == 0);
}

TEST_CASE("x^3+xy^4+y^6: finite over F_7, not over F_31") {
    Ring R = Ring::standard(2);
    {
        PrimeField F(7);
        auto f = poly(F, R, {{1, {3, 0}}, {1, {1, 4}}, {1, {0, 6}}});
        auto P = newton_diagram(f);
        REQUIRE(P.weights.size() == 1);
        CHECK(P.weights[0][0] == 2);
        CHECK(P.weights[0][1] == 1);

        auto B = regular_basis(F, f, P);
        REQUIRE(B.finite);
        // 1, y..y^6, x..xy^2: ten elements. The count is pinned by char 0,
        // where tau equals the Milnor number 10 of this weighted-homogeneous
        // germ, and tau can only grow under reduction mod p.
        std::set<Mono, MonoBefore> want{mono({0, 0}), mono({1, 0}), mono({0, 1}),
                                        mono({1, 1}), mono({0, 2}), mono({1, 2}),
                                        mono({0, 3}), mono({0, 4}), mono({0, 5}),
                                        mono({0, 6})};
        CHECK(basis_set(B, F) == want);
        CHECK(B.monomials.size() == 10);
        // valuation-homogeneous, so the graded dimension equals tau exactly
        CHECK(tau(f).dimension == 10);

        Rationals Q;
        auto f0 = poly(Q, R, {{1, {3, 0}}, {1, {1, 4}}, {1, {0, 6}}});
        CHECK(tau(f0).dimension == 10);
    }
    {
        PrimeField F(31);
        auto f = poly(F, R, {{1, {3, 0}}, {1, {1, 4}}, {1, {0, 6}}});
        auto P = newton_diagram(f);
        try {
            regular_basis(F, f, P);
            FAIL("expected NotFinite");
        } catch (const CalcError& e) {
            CHECK(e.code() == "NotFinite");
        }
    }
}

TEST_CASE("x^3+xy^10+y^15 over F_5: the p | t basis count") {
    PrimeField F(5);
    Ring R = Ring::standard(2);
    auto f = poly(F, R, {{1, {3, 0}}, {1, {1, 10}}, {1, {0, 15}}});
    auto P = newton_diagram(f);
    REQUIRE(P.weights.size() == 1);
    CHECK(P.weights[0][0] == 5);
    CHECK(P.weights[0][1] == 1);

    auto B = regular_basis(F, f, P);
    REQUIRE(B.finite);
    // 1, x..xy^9, y..y^19: with p dividing t both stretches gain one step
    std::set<Mono, MonoBefore> want{mono({0, 0})};
    for (int j = 0; j <= 9; ++j) want.insert(mono({1, j}));
    for (int j = 1; j <= 19; ++j) want.insert(mono({0, j}));
    CHECK(basis_set(B, F) == want);
    CHECK(B.monomials.size() == 30);
    CHECK(tau(f).dimension == 30);
}

TEST_CASE("x^3+xy^6+y^9 over F_7: the p does not divide t shape") {
    PrimeField F(7);
    Ring R = Ring::standard(2);
    auto f = poly(F, R, {{1, {3, 0}}, {1, {1, 6}}, {1, {0, 9}}});
    auto B = regular_basis(F, f, newton_diagram(f));
    REQUIRE(B.finite);
    // 1, x..xy^4, y..y^10
    std::set<Mono, MonoBefore> want{mono({0, 0})};
    for (int j = 0; j <= 4; ++j) want.insert(mono({1, j}));
    for (int j = 1; j <= 10; ++j) want.insert(mono({0, j}));
    CHECK(basis_set(B, F) == want);
    CHECK(B.monomials.size() == 16);
    CHECK(tau(f).dimension == 16);
}

TEST_CASE("high-valuation count jumps with the characteristic") {
    PrimeField F(5);
    Ring R = Ring::standard(2);
    // 5 divides 3*21 - 2*29; the k = 20 neighbor is untouched.
    auto fj = poly(F, R, {{1, {3, 0}}, {1, {0, 29}}, {1, {1, 21}}});
    auto fn = poly(F, R, {{1, {3, 0}}, {1, {0, 29}}, {1, {1, 20}}});
    auto Pj = newton_diagram(fj);
    auto Pn = newton_diagram(fn);
    REQUIRE(Pj.weights.size() == 1);
    CHECK(Pj.weights[0][0] == 29);
    CHECK(Pj.weights[0][1] == 3);
    REQUIRE(Pn.weights.size() == 1);

    CHECK(tau_ext(fj).dimension == 58);
    CHECK(tau_ext(fn).dimension == 50);

    unsigned cj = high_valuation_count(F, fj, Pj, 174);
    unsigned cn = high_valuation_count(F, fn, Pn, 174);
    CHECK(cj == 8);
    CHECK(cn == 0);
    CHECK(cj > cn);
    // the window [87, 105] already holds all eight; the bound is inclusive at
    // v = v(f) = 87, where y^29 itself sits
    CHECK(high_valuation_count(F, fj, Pj, 105) == 8);
    CHECK(high_valuation_count(F, fj, Pj, 87) == 1);
    CHECK(high_valuation_count(F, fj, Pj, 88) == 1);
    CHECK(high_valuation_count(F, fj, Pj, 89) == 2);
}

TEST_CASE("raw series and initial part give the same pieces") {
    PrimeField F(7);
    Ring R = Ring::standard(2);
    auto base = poly(F, R, {{1, {3, 0}}, {1, {0, 5}}});
    auto P = newton_diagram(base);

    // deterministic tail above v(f) = 15
    auto f1 = poly(F, R, {{1, {3, 0}}, {1, {0, 5}}, {1, {1, 4}}});
    for (long long d = 0; d <= 25; ++d) {
        auto a = ac_piece(F, f1, P, d);
        auto b = ac_piece(F, base, P, d);
        INFO("level " << d);
        CHECK(a.dimension == b.dimension);
        CHECK(a.standard == b.standard);
    }

    // seeded random tails, compared through the regular-basis flag as well
    std::mt19937_64 rng(20260822);
    std::vector<Mono> high;
    for (const auto& m : R.monos_below(12))
        if (vp_mono(P, m) > 15) high.push_back(m);
    for (int trial = 0; trial < 20; ++trial) {
        auto f = base;
        for (const auto& m : high)
            if (rng() % 3 == 0) f.add_term(m, F.from_int(static_cast<long long>(rng() % 7)));
        auto raw = regular_basis(F, f, P, 0, false);
        auto ini = regular_basis(F, f, P, 0, true);
        REQUIRE(raw.finite);
        REQUIRE(ini.finite);
        CHECK(raw.monomials == ini.monomials);
    }
}

TEST_CASE("valuation-homogeneous germs: graded dimension equals tau") {
    Ring R = Ring::standard(2);
    auto check_equal = [&](auto F, int a, int b) {
        auto f = poly(F, R, {{1, {a, 0}}, {1, {0, b}}});
        auto P = newton_diagram(f);
        auto B = regular_basis(F, f, P);
        REQUIRE(B.finite);
        CHECK(B.monomials.size() == tau(f).dimension);
    };
    Rationals Q;
    check_equal(Q, 3, 4);
    check_equal(Q, 3, 5);
    check_equal(Q, 4, 5);
    PrimeField F7(7);
    check_equal(F7, 3, 4);
    check_equal(F7, 4, 5);
    check_equal(F7, 3, 7);  // df/dy vanishes identically, still finite
}

TEST_CASE("two-facet initial parts keep the surjection bound") {
    Ring R = Ring::standard(2);
    auto check_bound = [&](auto F, std::initializer_list<std::pair<long long, std::vector<int>>> terms) {
        auto f = poly(F, R, terms);
        auto P = newton_diagram(f);
        auto B = regular_basis(F, f, P);
        REQUIRE(B.finite);
        CHECK(B.monomials.size() >= tau(f).dimension);
    };
    Rationals Q;
    PrimeField F5(5), F7(7);
    check_bound(Q, {{1, {3, 0}}, {1, {1, 4}}, {1, {0, 7}}});
    check_bound(F5, {{1, {3, 0}}, {1, {1, 4}}, {1, {0, 7}}});
    check_bound(F7, {{1, {3, 0}}, {1, {1, 5}}, {1, {0, 8}}});
}

TEST_CASE("degenerate inputs") {
    Rationals Q;
    Ring R = Ring::standard(2);
    auto f = poly(Q, R, {{1, {2, 0}}, {1, {0, 2}}});
    auto P = newton_diagram(f);

    auto B = regular_basis(Q, f, P);
    REQUIRE(B.finite);
    REQUIRE(B.monomials.size() == 1);
    CHECK(B.monomials[0].first == mono({0, 0}));

    Series<Rationals> z(Q, R);
    try {
        ac_piece(Q, z, P, 3);
        FAIL("expected PreconditionViolated");
    } catch (const CalcError& e) {
        CHECK(e.code() == "PreconditionViolated");
    }
    try {
        regular_basis(Q, z, P);
        FAIL("expected PreconditionViolated");
    } catch (const CalcError& e) {
        CHECK(e.code() == "PreconditionViolated");
    }
}
