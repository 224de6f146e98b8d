#include <catch2/catch_amalgamated.hpp>

#include <germ/field.hpp>
#include <germ/localalg.hpp>

#include <random>

#include "support/dense_oracle.hpp"
#include "support/util.hpp"

using namespace germ;
using testutil::mono;
using testutil::poly;

TEST_CASE("tjurina number of classic plane germs over Q") {
    Rationals Q;
    auto R = Ring::standard(2);

    // A_1
    auto a1 = tau(poly(Q, R, {{1, {2, 0}}, {1, {0, 2}}}));
    CHECK(a1.finite);
    CHECK(a1.dimension == 1);

    // A_k: x^2 + y^(k+1)
    for (unsigned k = 2; k <= 6; ++k) {
        auto r = tau(poly(Q, R, {{1, {2, 0}}, {1, {0, static_cast<int>(k + 1)}}}));
        CHECK(r.dimension == k);
    }

    // D_4 = x^2 y + y^3 and E_8 = x^3 + y^5
    CHECK(tau(poly(Q, R, {{1, {2, 1}}, {1, {0, 3}}})).dimension == 4);
    auto e8 = tau(poly(Q, R, {{1, {3, 0}}, {1, {0, 5}}}));
    CHECK(e8.dimension == 8);
    // its standard monomials are x^i y^j, i < 2, j < 4
    REQUIRE(e8.standard_monomials.size() == 8);
    for (const auto& m : e8.standard_monomials) {
        CHECK(m[0] < 2);
        CHECK(m[1] < 4);
    }
}

TEST_CASE("tjurina number drops p-th power derivatives in characteristic p") {
    // over F_5 the y-derivative of y^5 vanishes, so tj(x^3+y^5) = <x^2, y^5>
    PrimeField F(5);
    auto R = Ring::standard(2);
    auto r = tau(poly(F, R, {{1, {3, 0}}, {1, {0, 5}}}));
    CHECK(r.finite);
    CHECK(r.dimension == 10);
}

TEST_CASE("non-isolated germs never certify") {
    Rationals Q;
    auto R = Ring::standard(2);
    // x^2 alone: the Tjurina ideal misses every power of y
    auto r = tau(poly(Q, R, {{1, {2, 0}}}), 20);
    CHECK(!r.finite);

    // the zero germ
    auto z = tau(Series<Rationals>(Q, R), 20);
    CHECK(!z.finite);
}

TEST_CASE("a unit generator gives the zero quotient") {
    Rationals Q;
    auto R = Ring::standard(2);
    std::vector<Series<Rationals>> gens{poly(Q, R, {{1, {0, 0}}, {1, {1, 0}}})};
    auto eng = solve_local(Q, R, gens, 20);
    REQUIRE(eng.certified());
    CHECK(eng.certificate_degree() == 0);
    CHECK(eng.dimension() == 0);
}

TEST_CASE("extended tjurina numbers of the x^3 + y^s + x y^k family") {
    // frozen reference values, independently recomputed by the dense oracle
    struct Case {
        std::uint64_t p;
        int s, k;
        std::uint64_t expect;
    };
    // the three congruence cases: p coprime to 3k-2s, p | 3k-2s only,
    // p dividing both k and s
    for (const auto& c : {Case{7, 7, 5, 13}, Case{5, 11, 9, 22}, Case{5, 20, 15, 41}}) {
        PrimeField F(c.p);
        auto R = Ring::standard(2);
        auto f = poly(F, R, {{1, {3, 0}}, {1, {0, c.s}}, {1, {1, c.k}}});
        auto r = tau_ext(f);
        REQUIRE(r.finite);
        CHECK(r.dimension == c.expect);
        auto o = testoracle::oracle_tk(f, 1, r.certificate_degree + 3);
        REQUIRE(o.finite);
        CHECK(o.dim == c.expect);
    }
}

TEST_CASE("standard monomial list for x^3 + y^7 + x y^5 over F_7") {
    PrimeField F(7);
    auto R = Ring::standard(2);
    auto f = poly(F, R, {{1, {3, 0}}, {1, {0, 7}}, {1, {1, 5}}});
    auto r = tau_ext(f);
    REQUIRE(r.finite);
    REQUIRE(r.dimension == 13);
    // 1, y..y^6, x, xy..xy^4, x^2
    std::vector<Mono> expect;
    expect.push_back(mono({0, 0}));
    for (int j = 1; j <= 6; ++j) expect.push_back(mono({0, j}));
    expect.push_back(mono({1, 0}));
    for (int j = 1; j <= 4; ++j) expect.push_back(mono({1, j}));
    expect.push_back(mono({2, 0}));
    std::sort(expect.begin(), expect.end(), mono_before);
    CHECK(r.standard_monomials == expect);
}

TEST_CASE("tau over Q for x^3 + x y^13 + y^k") {
    Rationals Q;
    auto R = Ring::standard(2);
    for (int k = 14; k <= 17; ++k) {
        auto f = poly(Q, R, {{1, {3, 0}}, {1, {1, 13}}, {1, {0, k}}});
        CHECK(tau(f).dimension == static_cast<unsigned>(k) + 12);
    }
}

TEST_CASE("tau jump at the cone point over F_5") {
    PrimeField F(5);
    auto R = Ring::standard(2);
    // k = 17: 3*13 - 2*17 = 5, so the F_5 value exceeds the Q value 29
    auto f = poly(F, R, {{1, {3, 0}}, {1, {1, 13}}, {1, {0, 17}}});
    CHECK(tau(f).dimension == 32);
}

TEST_CASE("T_k interpolates between tau and larger quotients") {
    Rationals Q;
    auto R = Ring::standard(2);
    auto f = poly(Q, R, {{1, {3, 0}}, {1, {0, 5}}});
    auto t0 = tk_dim(f, 0);
    CHECK(t0.dimension == tau(f).dimension);
    auto t1 = tk_dim(f, 1);
    CHECK(t1.dimension == tau_ext(f).dimension);
    CHECK(t1.dimension == 10);
    // T_k grows with k and is bounded by dim R/<f, m^k ord-parts>
    std::uint64_t prev = t0.dimension;
    for (unsigned k = 1; k <= 4; ++k) {
        auto t = tk_dim(f, k);
        CHECK(t.dimension >= prev);
        prev = t.dimension;
    }
}

TEST_CASE("membership in the tjurina ideal") {
    Rationals Q;
    auto R = Ring::standard(2);
    auto f = poly(Q, R, {{1, {3, 0}}, {1, {0, 5}}});
    auto eng = solve_local(Q, R, tjurina_gens(f), 60);
    REQUIRE(eng.certified());
    CHECK(eng.contains(poly(Q, R, {{1, {0, 5}}})));          // y^5 = f - x*x^2
    CHECK(eng.contains(poly(Q, R, {{1, {2, 0}}})));          // x^2 from the derivative
    CHECK(eng.contains(poly(Q, R, {{2, {2, 3}}, {1, {0, 4}}})));
    CHECK(!eng.contains(poly(Q, R, {{1, {1, 0}}})));
    CHECK(!eng.contains(poly(Q, R, {{1, {1, 3}}, {1, {0, 2}}})));
}

TEST_CASE("basis verification") {
    Rationals Q;
    auto R = Ring::standard(2);
    auto f = poly(Q, R, {{1, {3, 0}}, {1, {0, 5}}});
    auto gens = tjurina_gens(f);

    std::vector<Series<Rationals>> good;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j) good.push_back(poly(Q, R, {{1, {i, j}}}));
    CHECK(is_basis(Q, R, gens, good));

    // replacing x y^3 by y^4 = (1/5) d_y f mod the ideal breaks independence
    auto bad = good;
    bad.back() = poly(Q, R, {{1, {0, 4}}});
    CHECK(!is_basis(Q, R, gens, bad));

    // wrong cardinality
    auto shorter = good;
    shorter.pop_back();
    CHECK(!is_basis(Q, R, gens, shorter));

    // non-monomial representatives are fine
    auto mixed = good;
    mixed[3] = poly(Q, R, {{1, {0, 3}}, {2, {1, 1}}, {7, {0, 5}}});
    CHECK(is_basis(Q, R, gens, mixed));
}

TEST_CASE("engine agrees with the dense oracle on random germs") {
    std::mt19937_64 rng(20260822);
    auto R = Ring::standard(2);
    for (std::uint64_t p : {5ULL, 7ULL, 13ULL}) {
        PrimeField F(p);
        for (int trial = 0; trial < 10; ++trial) {
            Series<PrimeField> f(F, R);
            // random germ of order >= 2, degree <= 8
            for (const auto& m : R.monos_below(9)) {
                if (mono_deg(m) < 2 || rng() % 3) continue;
                f.add_term(m, F.from_int(static_cast<long long>(rng() % p)));
            }
            if (f.is_zero()) continue;
            unsigned cap = 14;
            auto eng = solve_local(F, R, tjurina_gens(f), cap);
            auto orc = testoracle::oracle_tau(f, cap);
            REQUIRE(eng.certified() == orc.finite);
            if (orc.finite) {
                CHECK(eng.dimension() == orc.dim);
                CHECK(eng.standard_monomials() == orc.std_monos);
            }
        }
    }
}

TEST_CASE("dimension is stable under cap increase") {
    PrimeField F(7);
    auto R = Ring::standard(2);
    auto f = poly(F, R, {{1, {3, 0}}, {1, {0, 7}}, {1, {1, 5}}});
    auto lo = solve_local(F, R, tjurina_gens(f), 30);
    REQUIRE(lo.certified());
    LocalQuotient<PrimeField> hi(F, R, tjurina_gens(f), lo.cap() + 2);
    REQUIRE(hi.certified());
    CHECK(lo.dimension() == hi.dimension());
    CHECK(lo.standard_monomials() == hi.standard_monomials());
}

TEST_CASE("quotients over an extension field") {
    // same germ, same answer whether computed over F_5 or F_25
    TowerField F5(5);
    auto ext = F5.extend({F5.from_int(-3), F5.zero(), F5.one()}, "t1");
    auto R = Ring::standard(2);
    Series<TowerField> f(ext, R);
    f.add_term(mono({3, 0}), ext.one());
    f.add_term(mono({0, 5}), ext.one());
    auto r = tau(f);
    REQUIRE(r.finite);
    CHECK(r.dimension == 10);

    // and a germ with a coefficient outside the prime field
    auto t = ext.generator(0);
    Series<TowerField> g(ext, R);
    g.add_term(mono({2, 0}), ext.one());
    g.add_term(mono({0, 3}), t);
    CHECK(tau(g).dimension == 2);
}
