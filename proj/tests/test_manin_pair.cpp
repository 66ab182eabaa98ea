#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nslab/error.hpp"
#include "nslab/manin_pair.hpp"

#include <random>

using namespace nslab;

namespace {

AlphaData make_alpha(long n, std::map<long, Rational> coeffs = {}) {
    AlphaData a;
    a.n = n;
    a.alpha = std::move(coeffs);
    a.validate();
    return a;
}

LnElement random_element(std::mt19937& rng, LiePtr g, long n) {
    std::uniform_int_distribution<int> coeff(-3, 3), expo(-3, 3);
    LnElement u = ln_zero(g, n);
    for (int t = 0; t < 5; ++t) {
        std::size_t i = rng() % g->dim();
        u.laurent.add_coefficient({{i}, {expo(rng)}}, Rational(coeff(rng)));
    }
    for (auto& row : u.poly)
        for (auto& c : row) c = Rational(coeff(rng));
    return u;
}

ScalarSeries upoly(std::vector<std::pair<long, Rational>> terms) {
    ScalarSeries s = ScalarSeries::zero({"x"});
    for (auto& [e, c] : terms) s = series_add(s, ScalarSeries::monomial({"x"}, {e}, c));
    return s;
}

}  // namespace

TEST_CASE("alpha datum: validation, series, JSON round trip") {
    AlphaData a = make_alpha(2, {{0, 1}, {-2, Rational(1, 3)}});
    CHECK(a.coefficient_at_exponent(-2) == 1);
    CHECK(a.coefficient_at_exponent(-1) == 1);
    CHECK(a.coefficient_at_exponent(1) == Rational(1, 3));
    CHECK(a.coefficient_at_exponent(0) == 0);

    AlphaData bad;
    bad.n = 2;
    bad.alpha[1] = 1;  // index must stay <= n-2 = 0
    CHECK_THROWS_AS(bad.validate(), DomainError);

    const std::string text = alpha_to_json_text(a);
    AlphaData back = alpha_from_json_text(text);
    CHECK(back == a);
    CHECK_THROWS_AS(alpha_from_json_text("{\"n\": 2, \"alpha\": {\"1\": \"1\"}}"), ParseError);
    CHECK_THROWS_AS(alpha_from_json_text("not json"), ParseError);

    // s = 1/(x^n alpha) is a unit power series.
    ScalarSeries s = a.s_series(4);
    CHECK(*s.coefficient({0}) == 1);
    CHECK(*s.coefficient({1}) == -1);  // unit series is 1 + x + x^3/3
}

TEST_CASE("residue functional on scalar pairs") {
    AlphaData a = make_alpha(2, {{0, 5}});
    CHECK(functional_t(a, upoly({{1, 1}}), {0, 0}) == 1);

    AlphaData plain = make_alpha(2);
    CHECK(functional_t(plain, ScalarSeries::zero({"x"}), {0, 1}) == -1);

    // Diagonal pairs of degree < n are killed.
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> d(-4, 4);
    for (int trial = 0; trial < 10; ++trial) {
        Rational c0(d(rng)), c1(d(rng));
        ScalarSeries f = upoly({{0, c0}, {1, c1}});
        CHECK(functional_t(a, f, {c0, c1}) == 0);
    }

    ScalarSeries blind(std::vector<std::string>{"x"}, {VarWindow{0, 1}});
    CHECK_THROWS_AS(functional_t(a, blind, {0, 0}), WindowError);
}

TEST_CASE("invariant form: pinned value, symmetry, diagonal isotropy") {
    LiePtr g = sl2();
    AlphaData a = make_alpha(2);
    // B(e(0,-[x]), f(0,-1)) = kappa(e,f) t(0,[x]) = 4 * (-1).
    LnElement u = ln_scale(ln_class_monomial(g, 2, 0, 1), -1);
    LnElement v = ln_scale(ln_class_monomial(g, 2, 2, 0), -1);
    CHECK(form_B(a, u, v) == -4);

    std::mt19937 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        LnElement x = random_element(rng, g, 2);
        LnElement y = random_element(rng, g, 2);
        CHECK(form_B(a, x, y) == form_B(a, y, x));
    }

    // All diagonal generators pair to zero, in and beyond the quotient range.
    AlphaData rich = make_alpha(2, {{0, 1}, {-1, 2}, {-3, Rational(7, 2)}});
    for (long k = 0; k <= 4; ++k)
        for (long l = 0; l <= 4; ++l)
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    CHECK(form_B(rich, ln_diagonal(g, 2, i, k), ln_diagonal(g, 2, j, l)) == 0);
}

TEST_CASE("invariance and symmetry of the form, randomized configurations") {
    LiePtr g = sl2();
    std::mt19937 rng(2024);
    for (long n = 0; n <= 4; ++n) {
        for (int extra : {0, 1, -2}) {
            std::map<long, Rational> coeffs;
            if (extra != 0) coeffs[std::min<long>(0, n - 2)] = extra;
            AlphaData a = make_alpha(n, coeffs);
            for (int trial = 0; trial < 200; ++trial) {
                LnElement u = random_element(rng, g, n);
                LnElement v = random_element(rng, g, n);
                LnElement w = random_element(rng, g, n);
                REQUIRE(invariance_check(a, u, v, w) == 0);
            }
        }
    }
    // A taste of the rank-two algebra as well.
    LiePtr g3 = sl3();
    AlphaData a3 = make_alpha(2, {{0, 1}});
    for (int trial = 0; trial < 10; ++trial) {
        LnElement u = random_element(rng, g3, 2);
        LnElement v = random_element(rng, g3, 2);
        LnElement w = random_element(rng, g3, 2);
        REQUIRE(invariance_check(a3, u, v, w) == 0);
    }
}

TEST_CASE("extended pairing reduces to the form and extracts duals") {
    LiePtr g = sl2();
    AlphaData a = make_alpha(2);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        LnElement u = random_element(rng, g, 2);
        LnElement v = random_element(rng, g, 2);
        CHECK(form_B_extended(a, u, v) == form_B(a, u, v));
    }

    // Pairing the first leg of the invariant 2-tensor against b_j x collapses
    // kappa^{-1} kappa to the identity and leaves b_j.
    Ln2Element om;
    om.n = 2;
    om.laurent = scalar_times_tensor2(ScalarSeries::constant({"x", "y"}, 1), casimir_tensor(*g), g);
    om.quotient = TensorSeries(g, 2);
    for (std::size_t j = 0; j < 3; ++j) {
        TensorSeries got = form_B_extended(a, om, ln_laurent_monomial(g, 2, j, 1));
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(*got.coefficient({{k}, {0}}) == Rational(k == j ? 1 : 0));
    }
}

TEST_CASE("truncated model: dimensions, pattern, and cross-checks") {
    LiePtr g = sl2();
    TruncatedModel m0 = build_truncated_model(make_alpha(0), g, 2);
    CHECK(m0.dim() == 12);
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 12; ++j) CHECK(m0.gram.at(i, j) == m0.gram.at(j, i));
    // Anti-diagonal residue pattern: degrees pair iff j + l = -1.
    for (long j = -2; j < 2; ++j)
        for (long l = -2; l < 2; ++l) {
            const Rational got = m0.gram.at(m0.laurent_index(j, 0), m0.laurent_index(l, 2));
            CHECK(got == Rational(j + l == -1 ? 4 : 0));
        }

    // Entries agree with the form computed from scratch.
    AlphaData a2 = make_alpha(2, {{0, 1}});
    TruncatedModel m2 = build_truncated_model(a2, g, 3);
    CHECK(m2.gram.at(m2.laurent_index(-2, 0), m2.laurent_index(1, 2)) ==
          form_B(a2, ln_laurent_monomial(g, 2, 0, -2), ln_laurent_monomial(g, 2, 2, 1)));
    CHECK(m2.gram.at(m2.class_index(1, 1), m2.class_index(0, 1)) ==
          form_B(a2, ln_class_monomial(g, 2, 1, 1), ln_class_monomial(g, 2, 1, 0)));
    CHECK(m2.gram.at(m2.laurent_index(0, 0), m2.class_index(1, 2)) == 0);

    // The diagonal block is isotropic.
    auto deltas = m2.delta_rows();
    for (const auto& r1 : deltas)
        for (const auto& r2 : deltas) {
            Rational pairing = 0;
            for (std::size_t i = 0; i < r1.size(); ++i)
                for (std::size_t j = 0; j < r2.size(); ++j)
                    if (r1[i] != 0 && r2[j] != 0) pairing += r1[i] * m2.gram.at(i, j) * r2[j];
            CHECK(pairing == 0);
        }

    // Round trip through model coordinates.
    std::mt19937 rng(55);
    for (int trial = 0; trial < 5; ++trial) {
        LnElement u = ln_zero(g, 2);
        std::uniform_int_distribution<int> c(-3, 3);
        for (long j = -3; j < 3; ++j)
            u.laurent.add_coefficient({{static_cast<std::size_t>(trial % 3)}, {j}},
                                      Rational(c(rng)));
        u.poly[1][2] = Rational(c(rng));
        auto coords = m2.coordinates(u);
        LnElement back = m2.element_from_coordinates(coords);
        CHECK(m2.coordinates(back) == coords);
    }
}

TEST_CASE("complementarity of subspaces against the diagonal block") {
    LiePtr g = sl2();
    // Pure pole rows complement the diagonal when there is no quotient.
    TruncatedModel m0 = build_truncated_model(make_alpha(0), g, 4);
    std::vector<std::vector<Rational>> yang;
    for (long k = 0; k < 4; ++k)
        for (std::size_t i = 0; i < 3; ++i)
            yang.push_back(m0.coordinates(ln_laurent_monomial(g, 0, i, -1 - k)));
    CHECK(complementarity_rank(m0, yang));
    CHECK_FALSE(complementarity_rank(m0, m0.delta_rows()));

    // One-pole case with a half-split zero row.
    TruncatedModel m1 = build_truncated_model(make_alpha(1), g, 4);
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 0; i < 3; ++i) {
        LnElement f0 = ln_add(ln_scale(ln_laurent_monomial(g, 1, i, 0), Rational(1, 2)),
                              ln_scale(ln_class_monomial(g, 1, i, 0), Rational(-1, 2)));
        rows.push_back(m1.coordinates(f0));
        for (long k = 1; k <= 4; ++k)
            rows.push_back(m1.coordinates(ln_laurent_monomial(g, 1, i, -k)));
    }
    CHECK(complementarity_rank(m1, rows));
}

TEST_CASE("normalizing transform: pinned coefficients and residue identity") {
    for (long n = 0; n <= 3; ++n) {
        NormalizingTransform t = solve_normalizing_transform(make_alpha(n), 6);
        CHECK(*t.psi.coefficient({1}) == 1);
        for (long m = 2; m <= 6; ++m) CHECK(*t.psi.coefficient({m}) == 0);
    }

    AlphaData a = make_alpha(2, {{-2, 1}});  // alpha = x^{-2} + x
    NormalizingTransform t = solve_normalizing_transform(a, 10);
    CHECK(*t.psi.coefficient({2}) == 0);
    CHECK(*t.psi.coefficient({3}) == 0);
    CHECK(*t.psi.coefficient({4}) == Rational(-1, 2));
    CHECK(t.beta.alpha.empty());

    // phi inverts psi.
    ScalarSeries round = series_compose(t.psi, t.phi);
    for (const auto& [e, c] : round.coefficients()) CHECK(c == Rational(e[0] == 1 ? 1 : 0));

    // Weighted residues: res_0 { beta x^k } = res_0 { alpha phi^k }
    //                                       = res_0 { alpha(psi) x^k psi' }
    // for -5 <= k <= 5; the middle term probes phi independently of the
    // recursion that built psi.
    ScalarSeries alpha_of_psi = series_compose(a.alpha_series(), t.psi, 6);
    ScalarSeries base = series_mul(alpha_of_psi, series_derivative(t.psi));
    ScalarSeries beta_series = t.beta.alpha_series();
    ScalarSeries inv_phi = series_invert(t.phi, 9);
    for (long k = -5; k <= 5; ++k) {
        ScalarSeries phi_power = ScalarSeries::constant({"x"}, 1);
        for (long i = 0; i < std::abs(k); ++i)
            phi_power = series_mul(phi_power, k > 0 ? t.phi : inv_phi);
        const Rational lhs = series_residue(series_mul(beta_series,
                                                       ScalarSeries::monomial({"x"}, {k}, 1)));
        CHECK(lhs == series_residue(series_mul(a.alpha_series(), phi_power)));
        CHECK(lhs == series_residue(series_mul(base, ScalarSeries::monomial({"x"}, {k}, 1))));
    }

    // An alpha_0-bearing case keeps beta_0 = alpha_0.
    AlphaData a0 = make_alpha(3, {{1, 2}, {0, Rational(1, 2)}});
    NormalizingTransform t0 = solve_normalizing_transform(a0, 8);
    CHECK(t0.beta.alpha.at(0) == Rational(1, 2));
    CHECK(t0.beta.alpha.size() == 1);

    CHECK_THROWS_AS(solve_normalizing_transform(a, 1), DomainError);
}
