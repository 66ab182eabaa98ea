#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nslab/lie_core.hpp"

#include <random>

using namespace nslab;

TEST_CASE("rank-one algebra structure constants and Killing form") {
    LiePtr g = sl2();
    CHECK(g->dim() == 3);
    CHECK(g->validate());
    // Basis order e, h, f.
    CHECK(g->structure(0, 2, 1) == 1);   // [e,f] = h
    CHECK(g->structure(1, 0, 0) == 2);   // [h,e] = 2e
    CHECK(g->structure(1, 2, 2) == -2);  // [h,f] = -2f
    CHECK(g->killing().at(0, 2) == 4);
    CHECK(g->killing().at(2, 0) == 4);
    CHECK(g->killing().at(1, 1) == 8);
    CHECK(g->killing().at(0, 0) == 0);
    CHECK(g->killing().at(0, 1) == 0);
}

TEST_CASE("rank-two algebra validates and matches the trace-form scaling") {
    LiePtr g = sl3();
    CHECK(g->dim() == 8);
    CHECK(g->validate());
    // For 3x3 traceless matrices the Killing form is 6 tr(xy).
    CHECK(g->killing().at(0, 3) == 6);   // e12 vs e21
    CHECK(g->killing().at(1, 4) == 6);   // e13 vs e31
    CHECK(g->killing().at(6, 6) == 12);  // h1 vs h1
    CHECK(g->killing().at(6, 7) == -6);  // h1 vs h2
    CHECK(g->killing().at(0, 0) == 0);
    CHECK(g->killing().at(0, 6) == 0);
}

TEST_CASE("metric duals pair to the identity and trace to the dimension") {
    for (LiePtr g : {sl2(), sl3()}) {
        const std::size_t d = g->dim();
        for (std::size_t i = 0; i < d; ++i) {
            auto dual = g->dual_vector(i);
            for (std::size_t k = 0; k < d; ++k) {
                std::vector<Rational> ek(d, Rational(0));
                ek[k] = 1;
                CHECK(g->killing_form(dual, ek) == Rational(i == k ? 1 : 0));
            }
        }
        Rational tr = 0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                tr += g->killing_inverse().at(i, j) * g->killing().at(i, j);
        CHECK(tr == Rational(static_cast<long>(d)));
    }
}

TEST_CASE("quadratic tensor of the form is the known rank-one expression") {
    LiePtr g = sl2();
    QMatrix om = casimir_tensor(*g);
    CHECK(om.at(0, 2) == Rational(1, 4));
    CHECK(om.at(2, 0) == Rational(1, 4));
    CHECK(om.at(1, 1) == Rational(1, 8));
    CHECK(om.at(0, 0) == 0);
    CHECK(om.at(0, 1) == 0);
}

TEST_CASE("quadratic tensor is invariant under the diagonal action") {
    for (LiePtr g : {sl2(), sl3()}) {
        ScalarSeries one = ScalarSeries::constant({"x", "y"}, 1);
        TensorSeries om = scalar_times_tensor2(one, casimir_tensor(*g), g);
        for (std::size_t a = 0; a < g->dim(); ++a) {
            std::vector<Rational> coords(g->dim(), Rational(0));
            coords[a] = 1;
            TensorSeries moved =
                tensor_add(ad_action_const(om, 0, coords), ad_action_const(om, 1, coords));
            CHECK(moved.is_zero_on_window());
        }
    }
}

TEST_CASE("coordinate bracket satisfies the Jacobi identity on random triples") {
    LiePtr g = sl3();
    std::mt19937 rng(31337);
    std::uniform_int_distribution<int> d(-3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rational> u(8), v(8), w(8);
        for (std::size_t i = 0; i < 8; ++i) {
            u[i] = Rational(d(rng));
            v[i] = Rational(d(rng));
            w[i] = Rational(d(rng));
        }
        auto j1 = g->bracket(g->bracket(u, v), w);
        auto j2 = g->bracket(g->bracket(v, w), u);
        auto j3 = g->bracket(g->bracket(w, u), v);
        for (std::size_t i = 0; i < 8; ++i) CHECK(j1[i] + j2[i] + j3[i] == 0);
    }
}

TEST_CASE("leg swap exchanges legs and variables together") {
    LiePtr g = sl2();
    TensorSeries t(g, 2);
    t.set_coefficient({{0, 2}, {1, 0}}, Rational(3));  // 3 (e|f) x
    TensorSeries flipped = tau_flip(t);
    CHECK(*flipped.coefficient({{2, 0}, {0, 1}}) == 3);  // 3 (f|e) y
    CHECK(*flipped.coefficient({{0, 2}, {1, 0}}) == 0);
    CHECK(tau_flip(flipped) == t);
}

TEST_CASE("three-leg permutations compose correctly") {
    LiePtr g = sl2();
    TensorSeries t(g, 3);
    t.set_coefficient({{0, 1, 2}, {1, 2, 3}}, Rational(1));
    // Cycle result legs (0,1,2) <- input legs (1,2,0).
    TensorSeries c = leg_permute(t, {1, 2, 0});
    CHECK(*c.coefficient({{1, 2, 0}, {2, 3, 1}}) == 1);
    TensorSeries thrice = leg_permute(leg_permute(c, {1, 2, 0}), {1, 2, 0});
    CHECK(thrice == t);
}

TEST_CASE("scalar multiplication in one variable respects windows") {
    LiePtr g = sl2();
    TensorSeries t(g, 2);
    t.set_coefficient({{1, 1}, {0, 0}}, Rational(1));  // (h|h)
    ScalarSeries geo(std::vector<std::string>{"x"}, {VarWindow{0, 8}});
    for (long k = 0; k < 8; ++k) geo.set_coefficient({k}, 1);
    TensorSeries prod = mul_scalar_in_var(t, 0, geo);
    CHECK(prod.window()[0] == VarWindow{0, 8});
    CHECK(prod.window()[1].high >= kDegreeInf);
    CHECK(*prod.coefficient({{1, 1}, {5, 0}}) == 1);
    CHECK_FALSE(prod.is_known({{1, 1}, {8, 0}}));
}

TEST_CASE("adjoint action on one leg with a series coefficient") {
    LiePtr g = sl2();
    TensorSeries t(g, 2);
    t.set_coefficient({{1, 2}, {0, 1}}, Rational(1));  // (h|f) y
    ScalarSeries x = ScalarSeries::monomial({"x"}, {1}, 1);
    TensorSeries moved = ad_action(t, 0, 0, x);  // ad(e x) on the first leg
    CHECK(*moved.coefficient({{0, 2}, {1, 1}}) == -2);  // [e,h] = -2e
    TensorSeries moved2 = ad_action(t, 1, 0, x);  // ad(e x) on the second leg
    CHECK(*moved2.coefficient({{1, 1}, {0, 2}}) == 1);  // [e,f] = h, x acts in y
}
