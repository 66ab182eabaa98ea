#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nslab/error.hpp"
#include "nslab/linalg.hpp"

#include <random>

using namespace nslab;

namespace {
QMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c) {
    std::uniform_int_distribution<int> d(-4, 4);
    QMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = Rational(d(rng));
    return m;
}
}  // namespace

TEST_CASE("rref canonical form of a small matrix") {
    QMatrix a = QMatrix::from_rows({{Rational(1), Rational(2), Rational(3)},
                                    {Rational(2), Rational(4), Rational(7)},
                                    {Rational(1), Rational(2), Rational(4)}});
    QMatrix r = rref(a);
    CHECK(r.rows() == 2);
    CHECK(r.at(0, 0) == 1);
    CHECK(r.at(0, 1) == 2);
    CHECK(r.at(0, 2) == 0);
    CHECK(r.at(1, 0) == 0);
    CHECK(r.at(1, 1) == 0);
    CHECK(r.at(1, 2) == 1);
    CHECK(rank(a) == 2);
}

TEST_CASE("solve returns a particular solution and detects inconsistency") {
    QMatrix a = QMatrix::from_rows({{Rational(2), Rational(1)}, {Rational(1), Rational(-1)}});
    auto x = solve(a, {Rational(5), Rational(1)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 2);
    CHECK((*x)[1] == 1);

    QMatrix s = QMatrix::from_rows({{Rational(1), Rational(1)}, {Rational(2), Rational(2)}});
    CHECK_FALSE(solve(s, {Rational(1), Rational(3)}).has_value());
    CHECK(solve(s, {Rational(1), Rational(2)}).has_value());
}

TEST_CASE("nullspace vectors annihilate and have the right count") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 25; ++trial) {
        QMatrix a = random_matrix(rng, 4, 6);
        auto ns = nullspace(a);
        CHECK(ns.size() == 6 - rank(a));
        for (const auto& v : ns) {
            auto image = mat_apply(a, v);
            for (const auto& y : image) CHECK(y == 0);
        }
    }
}

TEST_CASE("rowspace comparisons are invariant under row operations") {
    std::mt19937 rng(777);
    for (int trial = 0; trial < 25; ++trial) {
        QMatrix a = random_matrix(rng, 3, 5);
        // b = random invertible combination of a's rows plus a redundant row.
        QMatrix b(4, 5);
        std::uniform_int_distribution<int> d(-3, 3);
        for (std::size_t i = 0; i < 3; ++i) {
            std::vector<Rational> combo(5, Rational(0));
            combo[0] = 0;  // placeholder
            QMatrix coeffs(1, 3);
            // diagonal-dominant mixing keeps the transform invertible
            for (std::size_t k = 0; k < 3; ++k) {
                Rational c = (k == i) ? Rational(1) : Rational(d(rng)) / 7;
                for (std::size_t j = 0; j < 5; ++j) b.at(i, j) += c * a.at(k, j);
            }
        }
        for (std::size_t j = 0; j < 5; ++j)
            b.at(3, j) = a.at(0, j) + a.at(1, j);
        CHECK(rowspace_equal(a, b));
        CHECK(rowspace_contains(a, b.row(3)));
        CHECK(rowspace_contains_all(a, b));
    }
}

TEST_CASE("solve against multiply-back on random square systems") {
    std::mt19937 rng(1001);
    int solved = 0;
    for (int trial = 0; trial < 30; ++trial) {
        QMatrix a = random_matrix(rng, 5, 5);
        std::vector<Rational> want(5);
        std::uniform_int_distribution<int> d(-4, 4);
        for (auto& w : want) w = Rational(d(rng)) / 3;
        std::vector<Rational> b = mat_apply(a, want);
        auto x = solve(a, b);
        REQUIRE(x.has_value());
        auto back = mat_apply(a, *x);
        for (std::size_t i = 0; i < 5; ++i) CHECK(back[i] == b[i]);
        if (rank(a) == 5) {
            ++solved;
            for (std::size_t i = 0; i < 5; ++i) CHECK((*x)[i] == want[i]);
        }
    }
    CHECK(solved > 20);  // most random square matrices are invertible
}

TEST_CASE("transpose") {
    QMatrix a(2, 3);
    a.at(0, 0) = 1;
    a.at(0, 2) = Rational(5, 2);
    a.at(1, 1) = -3;
    const QMatrix t = transpose(a);
    REQUIRE(t.rows() == 3);
    REQUIRE(t.cols() == 2);
    CHECK(t.at(0, 0) == 1);
    CHECK(t.at(2, 0) == Rational(5, 2));
    CHECK(t.at(1, 1) == -3);
    CHECK(t.at(2, 1) == 0);
}

TEST_CASE("solve_columns handles many right-hand sides at once") {
    std::mt19937 rng(77);
    QMatrix a = random_matrix(rng, 6, 4);
    QMatrix want(4, 3);
    std::uniform_int_distribution<int> d(-4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 3; ++j) want.at(i, j) = Rational(d(rng)) / 2;
    // b = a * want, column by column.
    QMatrix b(6, 3);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            Rational acc = 0;
            for (std::size_t k = 0; k < 4; ++k) acc += a.at(i, k) * want.at(k, j);
            b.at(i, j) = acc;
        }
    const auto x = solve_columns(a, b);
    REQUIRE(x.has_value());
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            Rational acc = 0;
            for (std::size_t k = 0; k < 4; ++k) acc += a.at(i, k) * x->at(k, j);
            CHECK(acc == b.at(i, j));
        }
    // One inconsistent column poisons the whole solve.
    QMatrix a2(2, 1);
    a2.at(0, 0) = 1;
    QMatrix b2(2, 2);
    b2.at(0, 0) = 3;
    b2.at(1, 1) = 1;  // unreachable: second row of a2 is zero
    CHECK(!solve_columns(a2, b2).has_value());
    QMatrix b3(2, 1);
    b3.at(0, 0) = 3;
    const auto x3 = solve_columns(a2, b3);
    REQUIRE(x3.has_value());
    CHECK(x3->at(0, 0) == 3);
    CHECK_THROWS_AS(solve_columns(a2, QMatrix(3, 1)), DomainError);
}
