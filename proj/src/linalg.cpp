#include "nslab/linalg.hpp"

#include "nslab/error.hpp"

namespace nslab {

QMatrix QMatrix::identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

QMatrix QMatrix::from_rows(std::vector<std::vector<Rational>> rows) {
    QMatrix m;
    for (auto& r : rows) m.append_row(r);
    return m;
}

std::vector<Rational> QMatrix::row(std::size_t r) const {
    std::vector<Rational> out(cols_);
    for (std::size_t c = 0; c < cols_; ++c) out[c] = at(r, c);
    return out;
}

void QMatrix::append_row(const std::vector<Rational>& v) {
    if (rows_ == 0 && cols_ == 0) cols_ = v.size();
    if (v.size() != cols_) throw DomainError("append_row: column count mismatch");
    data_.insert(data_.end(), v.begin(), v.end());
    ++rows_;
}

QMatrix mat_mul(const QMatrix& a, const QMatrix& b) {
    if (a.cols() != b.rows()) throw DomainError("mat_mul: shape mismatch");
    QMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a.at(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out.at(i, j) += a.at(i, k) * b.at(k, j);
        }
    return out;
}

std::vector<Rational> mat_apply(const QMatrix& a, const std::vector<Rational>& v) {
    if (a.cols() != v.size()) throw DomainError("mat_apply: shape mismatch");
    std::vector<Rational> out(a.rows(), Rational(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a.at(i, j) != 0) out[i] += a.at(i, j) * v[j];
    return out;
}

QMatrix transpose(const QMatrix& a) {
    QMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(j, i) = a.at(i, j);
    return out;
}

namespace {

// In-place Gauss-Jordan; returns the pivot columns.  Pivots are only sought
// in the first pivot_limit columns (later columns ride along, e.g. as
// right-hand sides).
std::vector<std::size_t> reduce(QMatrix& m, std::size_t pivot_limit) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < pivot_limit && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m.at(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(p, j), m.at(r, j));
        const Rational inv = Rational(1) / m.at(r, c);
        for (std::size_t j = c; j < m.cols(); ++j) m.at(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m.at(i, c) == 0) continue;
            const Rational f = m.at(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m.at(i, j) -= f * m.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::vector<std::size_t> reduce(QMatrix& m) { return reduce(m, m.cols()); }

}  // namespace

QMatrix rref(const QMatrix& a) {
    QMatrix m = a;
    const std::size_t r = reduce(m).size();
    QMatrix out(r, m.cols());
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = m.at(i, j);
    return out;
}

std::size_t rank(const QMatrix& a) {
    QMatrix m = a;
    return reduce(m).size();
}

std::optional<std::vector<Rational>> solve(const QMatrix& a, const std::vector<Rational>& b) {
    if (b.size() != a.rows()) throw DomainError("solve: right-hand side size mismatch");
    QMatrix m(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
        m.at(i, a.cols()) = b[i];
    }
    const std::vector<std::size_t> pivots = reduce(m);
    for (std::size_t c : pivots)
        if (c == a.cols()) return std::nullopt;  // pivot in the augmented column
    std::vector<Rational> x(a.cols(), Rational(0));
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = m.at(i, a.cols());
    return x;
}

std::optional<QMatrix> solve_columns(const QMatrix& a, const QMatrix& b) {
    if (b.rows() != a.rows()) throw DomainError("solve_columns: right-hand side shape mismatch");
    QMatrix m(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) m.at(i, a.cols() + j) = b.at(i, j);
    }
    const std::vector<std::size_t> pivots = reduce(m, a.cols());
    // Rows past the pivot count have a zero coefficient part; any remaining
    // right-hand side entry there marks an inconsistent column.
    for (std::size_t i = pivots.size(); i < m.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            if (m.at(i, a.cols() + j) != 0) return std::nullopt;
    QMatrix x(a.cols(), b.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) x.at(pivots[i], j) = m.at(i, a.cols() + j);
    return x;
}

std::vector<std::vector<Rational>> nullspace(const QMatrix& a) {
    QMatrix m = a;
    const std::vector<std::size_t> pivots = reduce(m);
    std::vector<bool> is_pivot(a.cols(), false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free_c = 0; free_c < a.cols(); ++free_c) {
        if (is_pivot[free_c]) continue;
        std::vector<Rational> v(a.cols(), Rational(0));
        v[free_c] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m.at(i, free_c);
        basis.push_back(std::move(v));
    }
    return basis;
}

bool rowspace_equal(const QMatrix& a, const QMatrix& b) {
    if (a.cols() != b.cols()) return false;
    return rref(a) == rref(b);
}

bool rowspace_contains(const QMatrix& a, const std::vector<Rational>& v) {
    if (v.size() != a.cols()) throw DomainError("rowspace_contains: length mismatch");
    QMatrix m = a;
    const std::size_t base = rank(m);
    m.append_row(v);
    return rank(m) == base;
}

bool rowspace_contains_all(const QMatrix& a, const QMatrix& b) {
    if (a.cols() != b.cols()) return false;
    QMatrix m = a;
    const std::size_t base = rank(m);
    for (std::size_t i = 0; i < b.rows(); ++i) m.append_row(b.row(i));
    return rank(m) == base;
}

}  // namespace nslab
