#include <catch2/catch_amalgamated.hpp>

#include <germ/field.hpp>
#include <germ/series.hpp>

#include <random>

#include "support/util.hpp"

using namespace germ;
using testutil::mono;
using testutil::poly;

namespace {

template <class K>
Series<K> random_series(const K& F, const Ring& R, unsigned maxdeg, std::mt19937_64& rng,
                        bool no_constant = false) {
    Series<K> s(F, R);
    auto monos = R.monos_below(maxdeg + 1);
    for (const auto& m : monos) {
        if (no_constant && mono_deg(m) == 0) continue;
        if (rng() % 3 == 0) continue;
        long long c = static_cast<long long>(rng() % 19) - 9;
        s.add_term(m, F.from_int(c));
    }
    return s;
}

} // namespace

TEST_CASE("term order in printed output") {
    Rationals Q;
    auto R = Ring::standard(2);
    auto f = poly(Q, R, {{1, {0, 5}}, {4, {1, 3}}, {1, {3, 0}}});
    CHECK(f.str() == "x^3 + 4*x*y^3 + y^5");

    auto g = poly(Q, R, {{1, {0, 2}}, {2, {1, 1}}, {1, {2, 0}}});
    CHECK(g.str() == "x^2 + 2*x*y + y^2");
}

TEST_CASE("order and jets") {
    Rationals Q;
    auto R = Ring::standard(2);
    auto f = poly(Q, R, {{3, {2, 1}}, {1, {0, 5}}, {-2, {4, 4}}});
    REQUIRE(f.order().has_value());
    CHECK(*f.order() == 3);
    CHECK(Series<Rationals>(Q, R).order() == std::nullopt);

    CHECK(f.jet(3).term_count() == 1);
    CHECK(f.jet(5).term_count() == 2);
    CHECK(f.jet(2).is_zero());
    CHECK(f.component(5).eq(poly(Q, R, {{1, {0, 5}}})));
}

TEST_CASE("truncated multiplication") {
    Rationals Q;
    auto R = Ring::standard(2);
    auto a = poly(Q, R, {{1, {0, 0}}, {1, {1, 0}}});
    auto b = poly(Q, R, {{1, {0, 0}}, {1, {0, 1}}});
    auto ab = a.mul_trunc(b, 10);
    CHECK(ab.eq(poly(Q, R, {{1, {0, 0}}, {1, {1, 0}}, {1, {0, 1}}, {1, {1, 1}}})));
    // cap drops the degree-2 product term
    CHECK(a.mul_trunc(b, 2).eq(poly(Q, R, {{1, {0, 0}}, {1, {1, 0}}, {1, {0, 1}}})));
}

TEST_CASE("derivative in characteristic p loses p-th powers") {
    PrimeField F(5);
    auto R = Ring::standard(2);
    auto f = poly(F, R, {{1, {5, 0}}, {1, {2, 3}}});
    auto fx = f.diff(0);
    CHECK(fx.eq(poly(F, R, {{2, {1, 3}}})));
    auto fy = f.diff(1);
    CHECK(fy.eq(poly(F, R, {{3, {2, 2}}})));
}

TEST_CASE("product rule holds under truncation") {
    PrimeField F(7);
    auto R = Ring::standard(3);
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        auto f = random_series(F, R, 4, rng);
        auto g = random_series(F, R, 4, rng);
        unsigned cap = 6;
        for (unsigned i = 0; i < 3; ++i) {
            auto lhs = f.mul_trunc(g, cap + 1).diff(i).trunc(cap);
            auto rhs = f.diff(i).mul_trunc(g, cap).add(f.mul_trunc(g.diff(i), cap)).trunc(cap);
            CHECK(lhs.eq(rhs));
        }
    }
}

TEST_CASE("substitution is a ring map") {
    PrimeField F(7);
    auto R = Ring::standard(2);
    std::mt19937_64 rng(43);
    unsigned cap = 7;
    std::vector<Series<PrimeField>> images = {
        poly(F, R, {{1, {0, 1}}, {2, {2, 0}}}),           // x -> y + 2x^2
        poly(F, R, {{1, {1, 0}}, {1, {1, 1}}}),           // y -> x + xy
    };
    for (int trial = 0; trial < 8; ++trial) {
        auto f = random_series(F, R, 4, rng);
        auto g = random_series(F, R, 4, rng);
        auto sum = f.add(g).subst_trunc(images, cap);
        CHECK(sum.eq(f.subst_trunc(images, cap).add(g.subst_trunc(images, cap))));
        auto prod = f.mul_trunc(g, cap).subst_trunc(images, cap);
        CHECK(prod.eq(f.subst_trunc(images, cap).mul_trunc(g.subst_trunc(images, cap), cap)));
    }
}

TEST_CASE("substitution requires a local map") {
    Rationals Q;
    auto R = Ring::standard(2);
    auto f = poly(Q, R, {{1, {1, 0}}});
    std::vector<Series<Rationals>> bad = {
        poly(Q, R, {{1, {0, 0}}, {1, {1, 0}}}),   // constant term 1
        poly(Q, R, {{1, {0, 1}}}),
    };
    try {
        f.subst_trunc(bad, 5);
        FAIL("expected an error");
    } catch (const CalcError& e) {
        CHECK(e.code() == "NotLocalMap");
    }
}

TEST_CASE("unit inversion") {
    Rationals Q;
    auto R = Ring::standard(1);
    auto f = poly(Q, R, {{1, {0}}, {1, {1}}});  // 1 + x
    auto inv = f.invert_unit(5);
    // 1 - x + x^2 - x^3 + x^4
    auto expect = poly(Q, R, {{1, {0}}, {-1, {1}}, {1, {2}}, {-1, {3}}, {1, {4}}});
    CHECK(inv.eq(expect));
    CHECK(f.mul_trunc(inv, 5).eq(poly(Q, R, {{1, {0}}})));

    auto nonunit = poly(Q, R, {{1, {1}}});
    try {
        nonunit.invert_unit(4);
        FAIL("expected an error");
    } catch (const CalcError& e) {
        CHECK(e.code() == "NotAUnit");
    }
}

TEST_CASE("random units invert mod the cap") {
    PrimeField F(11);
    auto R = Ring::standard(2);
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 10; ++trial) {
        auto u = random_series(F, R, 4, rng);
        u.set(mono_one(), F.from_int(1 + static_cast<long long>(rng() % 10)));
        unsigned cap = 6;
        auto prod = u.mul_trunc(u.invert_unit(cap), cap);
        CHECK(prod.eq(Series<PrimeField>::constant(F, R, F.one())));
    }
}

TEST_CASE("implicit solution of (1+y)^2 (1+x) = 1") {
    Rationals Q;
    auto R = Ring::standard(2);
    // expanded: x + 2y + 2xy + y^2 + xy^2
    auto f = poly(Q, R, {{1, {1, 0}}, {2, {0, 1}}, {2, {1, 1}}, {1, {0, 2}}, {1, {1, 2}}});
    auto g = hensel_solve(f, 1, 2);
    Series<Rationals> expect(Q, R);
    expect.add_term(mono({1, 0}), *Q.from_fraction(-1, 2));
    expect.add_term(mono({2, 0}), *Q.from_fraction(3, 8));
    CHECK(g.eq(expect));
}

TEST_CASE("implicit solution over F_7") {
    PrimeField F(7);
    auto R = Ring::standard(2);
    auto f = poly(F, R, {{1, {0, 1}}, {1, {1, 0}}, {1, {0, 2}}});  // y + x + y^2
    auto g = hensel_solve(f, 1, 3);
    // y = -x - x^2 - 2x^3 + ...
    CHECK(g.eq(poly(F, R, {{6, {1, 0}}, {6, {2, 0}}, {5, {3, 0}}})));
}

TEST_CASE("hensel solutions plug back to zero") {
    PrimeField F(13);
    auto R = Ring::standard(2);
    std::mt19937_64 rng(45);
    for (int trial = 0; trial < 8; ++trial) {
        auto f = random_series(F, R, 4, rng, /*no_constant=*/true);
        f.set(mono({0, 1}), F.from_int(1 + static_cast<long long>(rng() % 12)));
        unsigned N = 6;
        auto g = hensel_solve(f, 1, N);
        std::vector<Series<PrimeField>> images = {Series<PrimeField>::variable(F, R, 0), g};
        CHECK(f.subst_trunc(images, N + 1).is_zero());
    }
}

TEST_CASE("hensel preconditions") {
    Rationals Q;
    auto R = Ring::standard(2);
    auto no_unit = poly(Q, R, {{1, {1, 0}}, {1, {0, 2}}});  // x + y^2
    try {
        hensel_solve(no_unit, 1, 3);
        FAIL("expected an error");
    } catch (const CalcError& e) {
        CHECK(e.code() == "NotHenselian");
    }
}

TEST_CASE("hessian corank") {
    Rationals Q;
    auto R2 = Ring::standard(2);
    CHECK(hessian_corank(poly(Q, R2, {{1, {2, 0}}, {1, {0, 2}}})) == 0);
    CHECK(hessian_corank(poly(Q, R2, {{1, {2, 0}}, {1, {0, 3}}})) == 1);
    CHECK(hessian_corank(poly(Q, R2, {{1, {3, 0}}, {1, {0, 3}}})) == 2);
    // xy has full rank
    CHECK(hessian_corank(poly(Q, R2, {{1, {1, 1}}})) == 0);

    auto R3 = Ring::standard(3);
    CHECK(hessian_corank(poly(Q, R3, {{1, {2, 0, 0}}, {1, {0, 3, 0}}, {1, {0, 0, 2}}})) == 1);

    PrimeField F2(2);
    try {
        hessian_corank(poly(F2, R2, {{1, {2, 0}}}));
        FAIL("expected an error");
    } catch (const CalcError& e) {
        CHECK(e.code() == "CharTwoUnsupported");
    }
}

TEST_CASE("hessian corank respects the characteristic") {
    // x^2 + 5xy + y^2 over F_5 is x^2 + y^2 which is nondegenerate;
    // x^2 + 2xy + y^2 = (x+y)^2 drops rank everywhere
    PrimeField F(5);
    auto R = Ring::standard(2);
    CHECK(hessian_corank(poly(F, R, {{1, {2, 0}}, {5, {1, 1}}, {1, {0, 2}}})) == 0);
    CHECK(hessian_corank(poly(F, R, {{1, {2, 0}}, {2, {1, 1}}, {1, {0, 2}}})) == 1);
}
