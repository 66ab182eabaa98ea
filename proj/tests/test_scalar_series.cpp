#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nslab/error.hpp"
#include "nslab/scalar_series.hpp"

#include <random>

using namespace nslab;

namespace {

ScalarSeries upoly(std::vector<std::pair<long, Rational>> terms) {
    ScalarSeries s = ScalarSeries::zero({"x"});
    for (auto& [e, c] : terms) {
        ScalarSeries m = ScalarSeries::monomial({"x"}, {e}, c);
        s = series_add(s, m);
    }
    return s;
}

ScalarSeries bipoly(std::vector<std::tuple<long, long, Rational>> terms) {
    ScalarSeries s = ScalarSeries::zero({"x", "y"});
    for (auto& [ex, ey, c] : terms)
        s = series_add(s, ScalarSeries::monomial({"x", "y"}, {ex, ey}, c));
    return s;
}

}  // namespace

TEST_CASE("rational parsing and normalization") {
    CHECK(parse_rational("1/3") + parse_rational("1/6") == parse_rational("1/2"));
    CHECK(rational_to_string(parse_rational("-4/6")) == "-2/3");
    CHECK(rational_to_string(Rational(7)) == "7");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("x"), ParseError);
    CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
}

TEST_CASE("addition keeps lower Laurent support and intersects exactness") {
    ScalarSeries a = upoly({{-2, 1}, {-1, 1}});
    ScalarSeries b = upoly({{-1, -1}});
    ScalarSeries sum = series_add(a, b);
    CHECK(*sum.coefficient({-2}) == 1);
    CHECK(*sum.coefficient({-1}) == 0);
    CHECK(sum.window()[0].low == -2);

    // A finitely windowed operand caps the exactness of the sum.
    ScalarSeries c(std::vector<std::string>{"x"}, {VarWindow{0, 4}});
    c.set_coefficient({1}, 5);
    ScalarSeries sum2 = series_add(a, c);
    CHECK(sum2.window()[0].high == 4);
    CHECK(sum2.window()[0].low == -2);
    CHECK_FALSE(sum2.is_known({4}));
}

TEST_CASE("product window follows the convolution rule") {
    // (1 - x) * (truncated geometric series): exact through degree 7 only.
    ScalarSeries one_minus_x = upoly({{0, 1}, {1, -1}});
    ScalarSeries geo(std::vector<std::string>{"x"}, {VarWindow{0, 8}});
    for (long k = 0; k < 8; ++k) geo.set_coefficient({k}, 1);
    ScalarSeries prod = series_mul(one_minus_x, geo);
    CHECK(prod.window()[0] == VarWindow{0, 8});
    CHECK(*prod.coefficient({0}) == 1);
    for (long k = 1; k < 8; ++k) CHECK(*prod.coefficient({k}) == 0);
    CHECK_FALSE(prod.is_known({8}));
}

TEST_CASE("inversion of an exact unit monomial product") {
    ScalarSeries unit = series_mul(upoly({{2, 1}}), upoly({{-2, 1}}));
    ScalarSeries inv = series_invert(unit, 3);
    CHECK(*inv.coefficient({0}) == 1);
    CHECK(*inv.coefficient({1}) == 0);
}

TEST_CASE("inversion against multiply-back, randomized units") {
    std::mt19937 rng(20260823);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<long, Rational>> terms;
        long val = static_cast<long>(rng() % 5) - 2;
        terms.push_back({val, Rational(1 + (rng() % 3))});  // nonzero leading term
        for (long e = val + 1; e < val + 6; ++e) terms.push_back({e, Rational(coeff(rng))});
        ScalarSeries a = upoly(terms);
        ScalarSeries inv = series_invert(a, 4);
        ScalarSeries back = series_mul(a, inv);
        // a * a^{-1} = 1 on the certified window.
        for (const auto& [e, c] : back.coefficients()) {
            if (e[0] == 0)
                CHECK(c == 1);
            else
                CHECK(c == 0);
        }
        CHECK(*back.coefficient({0}) == 1);
    }
}

TEST_CASE("inversion window accounting for higher-valuation input") {
    // a = x^2 + x^3 known through degree 6: inverse certified on [-2, 3).
    ScalarSeries a(std::vector<std::string>{"x"}, {VarWindow{2, 7}});
    a.set_coefficient({2}, 1);
    a.set_coefficient({3}, 1);
    ScalarSeries inv = series_invert(a, 3);
    CHECK(inv.window()[0] == VarWindow{-2, 3});
    CHECK(*inv.coefficient({-2}) == 1);
    CHECK(*inv.coefficient({-1}) == -1);
    CHECK(*inv.coefficient({0}) == 1);
    CHECK_THROWS_AS(series_invert(a, 4), WindowError);
}

TEST_CASE("inversion rejects zero and empty-window series") {
    CHECK_THROWS_AS(series_invert(ScalarSeries::zero({"x"}), 3), DomainError);
    ScalarSeries blind(std::vector<std::string>{"x"}, {VarWindow{0, 2}});
    CHECK_THROWS_AS(series_invert(blind, 3), DomainError);
}

TEST_CASE("residue reads the degree -1 coefficient exactly") {
    ScalarSeries a = upoly({{-2, 1}, {-1, 1}});
    CHECK(series_residue(series_mul(a, upoly({{1, 1}}))) == 1);
    CHECK(series_residue(upoly({{-2, 1}, {1, 5}})) == 0);
    ScalarSeries blind(std::vector<std::string>{"x"}, {VarWindow{-5, -3}});
    CHECK_THROWS_AS(series_residue(blind), WindowError);
}

TEST_CASE("residue is linear and kills exact derivatives") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coeff(-4, 4);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::pair<long, Rational>> ta, tb;
        for (long e = -3; e <= 3; ++e) {
            ta.push_back({e, Rational(coeff(rng))});
            tb.push_back({e, Rational(coeff(rng))});
        }
        ScalarSeries a = upoly(ta), b = upoly(tb);
        CHECK(series_residue(series_add(a, b)) == series_residue(a) + series_residue(b));
        CHECK(series_residue(series_derivative(a)) == 0);
    }
}

TEST_CASE("composition with a pole expands the reciprocal") {
    // x^{-1} composed with x + x^2 = 1/(x(1+x)) = x^{-1} - 1 + x - x^2 + ...
    ScalarSeries f = upoly({{-1, 1}});
    ScalarSeries phi = upoly({{1, 1}, {2, 1}});
    ScalarSeries comp = series_compose(f, phi, 4);
    CHECK(*comp.coefficient({-1}) == 1);
    CHECK(*comp.coefficient({0}) == -1);
    CHECK(*comp.coefficient({1}) == 1);
    CHECK(*comp.coefficient({2}) == -1);
    CHECK(*comp.coefficient({3}) == 1);
}

TEST_CASE("composition validity checks") {
    ScalarSeries f = upoly({{-1, 1}});
    CHECK_THROWS_AS(series_compose(f, upoly({{0, 1}, {1, 1}}), 4), DomainError);  // phi(0) != 0
    CHECK_THROWS_AS(series_compose(f, upoly({{2, 1}}), 4), DomainError);  // phi'(0) = 0, f has pole
    // Polynomial f composed with quadratic phi is fine and exact.
    ScalarSeries g = upoly({{0, 1}, {2, 3}});
    ScalarSeries comp = series_compose(g, upoly({{2, 1}}));
    CHECK(*comp.coefficient({4}) == 3);
    CHECK(comp.window()[0].high >= kDegreeInf);
}

TEST_CASE("compositional inverse solves phi(psi) = x") {
    ScalarSeries phi = upoly({{1, 1}, {2, 1}});
    ScalarSeries psi = series_compositional_inverse(phi, 5);
    CHECK(*psi.coefficient({1}) == 1);
    CHECK(*psi.coefficient({2}) == -1);
    CHECK(*psi.coefficient({3}) == 2);
    CHECK(*psi.coefficient({4}) == -5);
    CHECK(*psi.coefficient({5}) == 14);
    ScalarSeries round = series_compose(phi, psi);
    for (const auto& [e, c] : round.coefficients()) {
        if (e[0] == 1)
            CHECK(c == 1);
        else
            CHECK(c == 0);
    }
}

TEST_CASE("compositional inverse respects the input window") {
    ScalarSeries phi(std::vector<std::string>{"x"}, {VarWindow{1, 4}});
    phi.set_coefficient({1}, 2);
    phi.set_coefficient({3}, -1);
    ScalarSeries psi = series_compositional_inverse(phi, 10);
    CHECK(psi.window()[0].high == 4);  // capped by phi's certification
    ScalarSeries round = series_compose(phi, psi);
    CHECK(*round.coefficient({1}) == 1);
    CHECK(*round.coefficient({2}) == 0);
    CHECK(*round.coefficient({3}) == 0);
}

TEST_CASE("division by the diagonal on an exact polynomial") {
    // (x^3 y - x y^3) / (x - y) = x^2 y + x y^2.
    ScalarSeries h = bipoly({{3, 1, 1}, {1, 3, -1}});
    ScalarSeries f = divide_by_diag(h, 5);
    CHECK(*f.coefficient({2, 1}) == 1);
    CHECK(*f.coefficient({1, 2}) == 1);
    CHECK(*f.coefficient({1, 1}) == 0);
    CHECK(*f.coefficient({3, 0}) == 0);
}

TEST_CASE("division by the diagonal rejects non-vanishing diagonals") {
    CHECK_THROWS_AS(divide_by_diag(bipoly({{1, 1, 1}}), 4), DomainError);
}

TEST_CASE("division by the diagonal, randomized multiply-back") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> coeff(-3, 3);
    ScalarSeries x_minus_y = bipoly({{1, 0, 1}, {0, 1, -1}});
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<std::tuple<long, long, Rational>> terms;
        for (long a = 0; a <= 3; ++a)
            for (long b = 0; b <= 3; ++b) terms.push_back({a, b, Rational(coeff(rng))});
        ScalarSeries g = bipoly(terms);
        ScalarSeries h = series_mul(x_minus_y, g);
        ScalarSeries f = divide_by_diag(h, 8);
        ScalarSeries back = series_mul(x_minus_y, f);
        auto diff = series_diff_on_shared_window(back, h);
        CHECK_FALSE(diff.has_value());
        // And f agrees with g on the certified window.
        auto diff2 = series_diff_on_shared_window(f, g);
        CHECK_FALSE(diff2.has_value());
    }
}

TEST_CASE("division by the diagonal with a finite window is certified conservatively") {
    // h known only through x^6, y^6.
    ScalarSeries h(std::vector<std::string>{"x", "y"}, {VarWindow{0, 7}, VarWindow{0, 7}});
    // h = (x - y) * (x^2 + xy + 2y^3), truncated consistently with the window.
    ScalarSeries g = bipoly({{2, 0, 1}, {1, 1, 1}, {0, 3, 2}});
    ScalarSeries exact = series_mul(bipoly({{1, 0, 1}, {0, 1, -1}}), g);
    for (const auto& [e, c] : exact.coefficients())
        if (e[0] < 7 && e[1] < 7) h.set_coefficient(e, c);
    ScalarSeries f = divide_by_diag(h, 3);
    CHECK(f.window()[0].high == 3);  // 7 - 1 - 3
    CHECK(f.window()[1].high == 3);
    auto diff = series_diff_on_shared_window(f, g);
    CHECK_FALSE(diff.has_value());
}

TEST_CASE("promotion embeds a univariate series into a larger variable list") {
    ScalarSeries s = upoly({{-1, 2}, {3, 1}});
    ScalarSeries p = s.promoted({"x", "y"});
    CHECK(p.nvars() == 2);
    CHECK(*p.coefficient({-1, 0}) == 2);
    CHECK(*p.coefficient({3, 0}) == 1);
    CHECK(*p.coefficient({3, 5}) == 0);  // exact zero in the new variable
    CHECK(p.window()[1].high >= kDegreeInf);
}
