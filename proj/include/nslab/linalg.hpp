#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nslab/rational.hpp"

namespace nslab {

// Dense matrix over the exact rationals.
class QMatrix {
  public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

    static QMatrix identity(std::size_t n);
    static QMatrix from_rows(std::vector<std::vector<Rational>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<Rational> row(std::size_t r) const;
    void append_row(const std::vector<Rational>& v);

    bool operator==(const QMatrix& other) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

QMatrix mat_mul(const QMatrix& a, const QMatrix& b);
std::vector<Rational> mat_apply(const QMatrix& a, const std::vector<Rational>& v);
QMatrix transpose(const QMatrix& a);

// Reduced row echelon form (canonical over Q); zero rows are dropped.
QMatrix rref(const QMatrix& a);
std::size_t rank(const QMatrix& a);

// One solution of A x = b, or nullopt if inconsistent.
std::optional<std::vector<Rational>> solve(const QMatrix& a, const std::vector<Rational>& b);

// Simultaneous solutions of A X = B (columns of B are independent right-hand
// sides) with a single elimination; free variables are set to zero.  nullopt
// if any column is inconsistent.
std::optional<QMatrix> solve_columns(const QMatrix& a, const QMatrix& b);

// Basis of the right null space (columns returned as vectors).
std::vector<std::vector<Rational>> nullspace(const QMatrix& a);

// Row-space relations, decided through canonical forms / rank.
bool rowspace_equal(const QMatrix& a, const QMatrix& b);
bool rowspace_contains(const QMatrix& a, const std::vector<Rational>& v);
bool rowspace_contains_all(const QMatrix& a, const QMatrix& b);

}  // namespace nslab
