#include <catch2/catch_amalgamated.hpp>

#include <germ/determinacy.hpp>
#include <germ/field.hpp>

#include <random>
#include <set>

#include "support/util.hpp"

using namespace germ;
using testutil::mono;
using testutil::poly;

namespace {

std::set<Mono, MonoBefore> to_set(const std::vector<Mono>& v) {
    return std::set<Mono, MonoBefore>(v.begin(), v.end());
}

template <class K>
Series<K> random_tail(const K& F, const Ring& R, unsigned lo, unsigned hi, std::mt19937_64& rng) {
    Series<K> t(F, R);
    for (unsigned d = lo; d <= hi; ++d)
        for (const auto& m : R.monos_of_degree(d))
            if (rng() % 2 == 0) t.add_term(m, F.from_int(static_cast<long long>(rng() % 5) - 2));
    return t;
}

}  // namespace

TEST_CASE("tangent bounds on the reference germs") {
    Rationals Q;
    Ring R = Ring::standard(2);

    auto f = poly(Q, R, {{1, {2, 1}}, {1, {1, 2}}});
    auto b = determinacy_tangent(f);
    CHECK(b.k0 == 2);
    CHECK(b.k == 3);

    auto g = poly(Q, R, {{1, {2, 0}}, {1, {0, 2}}});
    auto bg = determinacy_tangent(g);
    CHECK(bg.k0 == 1);
    CHECK(bg.k == 2);

    // x^3 + y^4: xy^3 and y^4 only enter the ideal one layer later, so the
    // certified k0 is 3 and the bound lands at 5.
    auto h = poly(Q, R, {{1, {3, 0}}, {1, {0, 4}}});
    auto bh = determinacy_tangent(h);
    CHECK(bh.k0 == 3);
    CHECK(bh.k == 5);
    CHECK(bh.k >= 4);
}

TEST_CASE("tangent bound tails do not move tau") {
    std::mt19937_64 rng(911);
    Ring R = Ring::standard(2);

    auto run = [&](auto F, std::initializer_list<std::pair<long long, std::vector<int>>> terms) {
        auto f = poly(F, R, terms);
        auto b = determinacy_tangent(f);
        auto t0 = tau(f);
        auto e0 = tau_ext(f);
        REQUIRE(t0.finite);
        for (int trial = 0; trial < 20; ++trial) {
            auto t = random_tail(F, R, b.k + 1, b.k + 3, rng);
            auto g = f.add(t);
            CHECK(tau(g).dimension == t0.dimension);
            CHECK(tau_ext(g).dimension == e0.dimension);
        }
    };
    Rationals Q;
    run(Q, {{1, {2, 1}}, {1, {1, 2}}});
    run(Q, {{1, {3, 0}}, {1, {0, 4}}});
    PrimeField F5(5);
    run(F5, {{1, {3, 0}}, {1, {0, 4}}});
}

TEST_CASE("polytope bounds on the reference germs") {
    Ring R = Ring::standard(2);
    {
        PrimeField F(7);
        auto f = poly(F, R, {{1, {3, 0}}, {1, {1, 4}}, {1, {0, 6}}});
        auto b = determinacy_polytope(f, newton_diagram(f));
        CHECK(b.d == 6);
        CHECK(b.k == 6);
        CHECK(b.witness_v == 7);
    }
    {
        Rationals Q;
        auto f = poly(Q, R, {{1, {2, 0}}, {1, {0, 2}}});
        auto b = determinacy_polytope(f, newton_diagram(f));
        CHECK(b.d == 2);
        CHECK(b.k == 2);
    }
    {
        Rationals Q;
        auto f = poly(Q, R, {{1, {3, 0}}, {1, {0, 5}}});
        auto b = determinacy_polytope(f, newton_diagram(f));
        CHECK(b.d == 15);  // v(f) = 15 tops the basis maximum 14
        CHECK(b.k == 5);   // degree-5 monomials still reach level 15 exactly
        CHECK(b.witness_v == 18);
    }
    {
        PrimeField F(31);
        auto f = poly(F, R, {{1, {3, 0}}, {1, {1, 4}}, {1, {0, 6}}});
        try {
            determinacy_polytope(f, newton_diagram(f));
            FAIL("expected RegularBasisInfinite");
        } catch (const CalcError& e) {
            CHECK(e.code() == "RegularBasisInfinite");
        }
    }
}

TEST_CASE("polytope bound does not exceed the tangent bound on samples") {
    Ring R = Ring::standard(2);
    Rationals Q;
    PrimeField F7(7);
    auto compare = [&](auto F, std::initializer_list<std::pair<long long, std::vector<int>>> terms) {
        auto f = poly(F, R, terms);
        auto bp = determinacy_polytope(f, newton_diagram(f));
        auto bt = determinacy_tangent(f);
        // observed, not part of the contract; a violation is worth seeing
        CHECK_NOFAIL(bp.k <= bt.k);
    };
    compare(Q, {{1, {2, 0}}, {1, {0, 2}}});
    compare(Q, {{1, {3, 0}}, {1, {0, 5}}});
    compare(Q, {{1, {3, 0}}, {1, {0, 4}}});
    compare(F7, {{1, {3, 0}}, {1, {1, 4}}, {1, {0, 6}}});
    compare(F7, {{1, {3, 0}}, {1, {0, 8}}});
}

TEST_CASE("complete transversal of x^3 in the (3,6] window") {
    Rationals Q;
    Ring R = Ring::standard(2);
    auto f = poly(Q, R, {{1, {3, 0}}});
    auto T = complete_transversal(f, 3, 6);
    std::set<Mono, MonoBefore> want{mono({1, 3}), mono({1, 4}), mono({1, 5}),
                                    mono({0, 4}), mono({0, 5}), mono({0, 6})};
    CHECK(to_set(T.basis) == want);
    CHECK(T.codim == 6);
    CHECK(T.tangent_dim + T.codim == T.space_dim);
}

TEST_CASE("complete transversal of x^2y^2 in the (4,6] window") {
    Rationals Q;
    Ring R = Ring::standard(2);
    auto f = poly(Q, R, {{1, {2, 2}}});
    auto T = complete_transversal(f, 4, 6);
    std::set<Mono, MonoBefore> want{mono({5, 0}), mono({6, 0}), mono({0, 5}), mono({0, 6})};
    CHECK(to_set(T.basis) == want);
    CHECK(T.codim == 4);
}

TEST_CASE("x y (x+y) (x+2y) over F_7 has an empty transversal") {
    PrimeField F(7);
    Ring R = Ring::standard(2);
    // xy(x+y)(x+2y) = x^3y + 3x^2y^2 + 2xy^3
    auto f = poly(F, R, {{1, {3, 1}}, {3, {2, 2}}, {2, {1, 3}}});
    auto T = complete_transversal(f, 4, 6);
    CHECK(T.basis.empty());
    CHECK(T.codim == 0);
    CHECK(T.tangent_dim == T.space_dim);
}

TEST_CASE("transversal window degenerates cleanly at l = k") {
    Rationals Q;
    Ring R = Ring::standard(2);
    auto f = poly(Q, R, {{1, {3, 0}}});
    auto T = complete_transversal(f, 4, 4);
    CHECK(T.space_dim == 0);
    CHECK(T.basis.empty());
    CHECK(T.codim == 0);
}

TEST_CASE("transversal dimensions always split the window") {
    PrimeField F(7);
    Ring R = Ring::standard(2);
    std::mt19937_64 rng(2718);
    for (int trial = 0; trial < 10; ++trial) {
        Series<PrimeField> f(F, R);
        for (unsigned d = 2; d <= 5; ++d)
            for (const auto& m : R.monos_of_degree(d))
                if (rng() % 3 == 0) f.add_term(m, F.from_int(static_cast<long long>(rng() % 7)));
        if (f.is_zero()) continue;
        for (auto [k, l] : {std::pair<unsigned, unsigned>{2, 5}, {3, 6}}) {
            auto T = complete_transversal(f, k, l);
            CHECK(T.codim + T.tangent_dim == T.space_dim);
            unsigned expect = 0;
            for (unsigned d = k + 1; d <= l; ++d)
                expect += static_cast<unsigned>(R.count_of_degree(d));
            CHECK(T.space_dim == expect);
        }
    }
}

TEST_CASE("perturbed codimension: x^2y + xy^2 is already full at (3,4)") {
    Rationals Q;
    Ring R = Ring::standard(2);
    auto f = poly(Q, R, {{1, {2, 1}}, {1, {1, 2}}});
    Series<Rationals> zero(Q, R);
    CHECK(transversal_cod(f, zero, 3, 4) == 0);
}

TEST_CASE("perturbed codimension of the x^4 stratum stays at least 2") {
    Ring R = Ring::standard(2);
    {
        Rationals Q;
        auto f = poly(Q, R, {{1, {4, 0}}});
        auto a = poly(Q, R, {{1, {2, 4}}, {1, {1, 6}}, {1, {0, 8}}});
        CHECK(transversal_cod(f, a, 5, 8) == 5);
        for (long long c : {2, 3, -1})
            CHECK(transversal_cod(f, a.scale(Q.from_int(c)), 5, 8) == 5);
    }
    {
        // every member of x^4 + a x^2y^4 + b xy^6 + c y^8 over F_5
        PrimeField F(5);
        auto f = poly(F, R, {{1, {4, 0}}});
        for (int a = 0; a < 5; ++a)
            for (int b = 0; b < 5; ++b)
                for (int c = 0; c < 5; ++c) {
                    Series<PrimeField> t(F, R);
                    if (a) t.add_term(mono({2, 4}), F.from_int(a));
                    if (b) t.add_term(mono({1, 6}), F.from_int(b));
                    if (c) t.add_term(mono({0, 8}), F.from_int(c));
                    REQUIRE(transversal_cod(f, t, 5, 8) >= 2);
                }
    }
}

TEST_CASE("perturbed codimension can move along the line through a") {
    // cod is not a function of the line K*a alone: scaling the same
    // perturbation by 3 over F_7 shifts the tangent intersection by one.
    PrimeField F(7);
    Ring R = Ring::standard(2);
    auto f = poly(F, R, {{1, {4, 0}}});
    auto a = poly(F, R, {{1, {2, 4}}, {1, {1, 6}}, {1, {0, 8}}});
    CHECK(transversal_cod(f, a, 5, 8) == 5);
    CHECK(transversal_cod(f, a.scale(F.from_int(3)), 5, 8) == 6);
    CHECK(tau(f.add(a)).dimension == 21);
    CHECK(tau(f.add(a.scale(F.from_int(3)))).dimension == 21);
}

TEST_CASE("cod0 estimates") {
    Ring R = Ring::standard(2);
    {
        Rationals Q;
        auto f = poly(Q, R, {{1, {2, 1}}, {1, {1, 2}}});
        auto est = cod0_estimate(f, 3, 4);
        CHECK(est.cod0 == 0);
        CHECK(est.exhaustive);
    }
    {
        // 3 transversal monomials over F_5: a 125-point grid, walked fully.
        // A y^6 perturbation leaves the x^4 stratum, so the infimum drops to 0.
        PrimeField F(5);
        auto f = poly(F, R, {{1, {4, 0}}});
        auto est = cod0_estimate(f, 5, 6);
        CHECK(est.exhaustive);
        CHECK(est.tried == 125);
        CHECK(est.cod0 == 0);
    }
    {
        // 9 monomials over F_7: too big, sampled with a seed
        PrimeField F(7);
        auto f = poly(F, R, {{1, {4, 0}}});
        auto est = cod0_estimate(f, 5, 8, 64, 99);
        CHECK_FALSE(est.exhaustive);
        CHECK(est.tried == 65);
        CHECK(est.cod0 == 0);
        auto est2 = cod0_estimate(f, 5, 8, 64, 99);
        CHECK(est2.cod0 == est.cod0);  // same seed, same answer
    }
}

TEST_CASE("semiuniversal deformation bases") {
    Ring R = Ring::standard(2);
    {
        PrimeField F(7);
        auto f = poly(F, R, {{1, {3, 0}}, {1, {0, 5}}});
        auto B = semiuniversal_basis(f);
        std::set<Mono, MonoBefore> want{mono({1, 0}), mono({2, 0}), mono({0, 1}),
                                        mono({0, 2}), mono({0, 3}), mono({0, 4}),
                                        mono({1, 1}), mono({1, 2}), mono({1, 3})};
        CHECK(to_set(B) == want);
        CHECK(B.size() == 9);
    }
    {
        Rationals Q;
        auto f = poly(Q, R, {{1, {2, 0}}, {1, {0, 2}}});
        auto B = semiuniversal_basis(f);
        std::set<Mono, MonoBefore> want{mono({1, 0}), mono({0, 1})};
        CHECK(to_set(B) == want);
    }
    {
        PrimeField F(7);
        auto f = poly(F, R, {{1, {3, 0}}, {1, {0, 8}}});
        CHECK(semiuniversal_basis(f).size() == 15);
    }
    {
        Rationals Q;
        Series<Rationals> z(Q, R);
        try {
            semiuniversal_basis(z);
            FAIL("expected Uncertified");
        } catch (const CalcError& e) {
            CHECK(e.code() == "Uncertified");
        }
    }
}
