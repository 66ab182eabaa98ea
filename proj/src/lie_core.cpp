#include "nslab/lie_core.hpp"

#include <sstream>

#include "nslab/error.hpp"

namespace nslab {

namespace {

std::vector<Rational> flatten(const QMatrix& m) {
    std::vector<Rational> v;
    v.reserve(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m.at(i, j));
    return v;
}

QMatrix commutator(const QMatrix& a, const QMatrix& b) {
    QMatrix ab = mat_mul(a, b);
    QMatrix ba = mat_mul(b, a);
    for (std::size_t i = 0; i < ab.rows(); ++i)
        for (std::size_t j = 0; j < ab.cols(); ++j) ab.at(i, j) -= ba.at(i, j);
    return ab;
}

QMatrix invert_square(const QMatrix& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DomainError("invert_square: not square");
    QMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, n + i) = 1;
    }
    QMatrix red = rref(aug);
    if (red.rows() != n) throw DomainError("invert_square: singular matrix");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (red.at(i, j) != Rational(i == j ? 1 : 0))
                throw DomainError("invert_square: singular matrix");
    QMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = red.at(i, n + j);
    return inv;
}

std::string var_name(std::size_t v) {
    static const char* names[] = {"x", "y", "z", "w"};
    if (v < 4) return names[v];
    return "v" + std::to_string(v);
}

}  // namespace

LieAlgebraData LieAlgebraData::from_matrix_basis(std::string name,
                                                 std::vector<std::string> basis_names,
                                                 const std::vector<QMatrix>& basis_matrices) {
    LieAlgebraData g;
    g.name_ = std::move(name);
    g.basis_names_ = std::move(basis_names);
    g.dim_ = basis_matrices.size();
    const std::size_t d = g.dim_;
    if (g.basis_names_.size() != d) throw DomainError("basis name count mismatch");
    if (d == 0) throw DomainError("empty basis");

    // Columns are the flattened basis matrices.
    const std::size_t n2 = basis_matrices[0].rows() * basis_matrices[0].cols();
    QMatrix span(n2, d);
    for (std::size_t k = 0; k < d; ++k) {
        auto col = flatten(basis_matrices[k]);
        if (col.size() != n2) throw DomainError("basis matrix shape mismatch");
        for (std::size_t r = 0; r < n2; ++r) span.at(r, k) = col[r];
    }
    if (rank(span) != d) throw DomainError("basis matrices are dependent");

    g.structure_.assign(d * d * d, Rational(0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            auto c = flatten(commutator(basis_matrices[i], basis_matrices[j]));
            auto x = solve(span, c);
            if (!x) throw DomainError("commutator leaves the span: not a Lie subalgebra basis");
            for (std::size_t k = 0; k < d; ++k) g.structure_[(i * d + j) * d + k] = (*x)[k];
        }

    // Killing form from ad traces: kappa_ij = sum_{k,l} c_{ik}^l c_{jl}^k.
    g.killing_ = QMatrix(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            Rational s = 0;
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t l = 0; l < d; ++l)
                    s += g.structure_[(i * d + k) * d + l] * g.structure_[(j * d + l) * d + k];
            g.killing_.at(i, j) = s;
        }
    g.killing_inv_ = invert_square(g.killing_);
    return g;
}

const Rational& LieAlgebraData::structure(std::size_t i, std::size_t j, std::size_t k) const {
    return structure_[(i * dim_ + j) * dim_ + k];
}

std::vector<Rational> LieAlgebraData::bracket(const std::vector<Rational>& u,
                                              const std::vector<Rational>& v) const {
    if (u.size() != dim_ || v.size() != dim_) throw DomainError("bracket: coordinate size mismatch");
    std::vector<Rational> out(dim_, Rational(0));
    for (std::size_t i = 0; i < dim_; ++i) {
        if (u[i] == 0) continue;
        for (std::size_t j = 0; j < dim_; ++j) {
            if (v[j] == 0) continue;
            const Rational uv = u[i] * v[j];
            for (std::size_t k = 0; k < dim_; ++k) {
                const Rational& c = structure(i, j, k);
                if (c != 0) out[k] += uv * c;
            }
        }
    }
    return out;
}

Rational LieAlgebraData::killing_form(const std::vector<Rational>& u,
                                      const std::vector<Rational>& v) const {
    if (u.size() != dim_ || v.size() != dim_)
        throw DomainError("killing_form: coordinate size mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
        if (u[i] == 0) continue;
        for (std::size_t j = 0; j < dim_; ++j)
            if (v[j] != 0) s += u[i] * v[j] * killing_.at(i, j);
    }
    return s;
}

bool LieAlgebraData::validate() const {
    const std::size_t d = dim_;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k)
                if (structure(i, j, k) != -structure(j, i, k)) return false;
    // Jacobi on basis triples.
    auto basis_vec = [&](std::size_t i) {
        std::vector<Rational> v(d, Rational(0));
        v[i] = 1;
        return v;
    };
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) {
                auto t1 = bracket(bracket(basis_vec(i), basis_vec(j)), basis_vec(k));
                auto t2 = bracket(bracket(basis_vec(j), basis_vec(k)), basis_vec(i));
                auto t3 = bracket(bracket(basis_vec(k), basis_vec(i)), basis_vec(j));
                for (std::size_t m = 0; m < d; ++m)
                    if (t1[m] + t2[m] + t3[m] != 0) return false;
            }
    // ad-invariance of the Killing form.
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) {
                auto bij = bracket(basis_vec(i), basis_vec(j));
                auto bik = bracket(basis_vec(i), basis_vec(k));
                if (killing_form(bij, basis_vec(k)) + killing_form(basis_vec(j), bik) != 0)
                    return false;
            }
    return true;
}

LiePtr sl2() {
    static LiePtr g = [] {
        QMatrix e(2, 2), h(2, 2), f(2, 2);
        e.at(0, 1) = 1;
        h.at(0, 0) = 1;
        h.at(1, 1) = -1;
        f.at(1, 0) = 1;
        return std::make_shared<const LieAlgebraData>(
            LieAlgebraData::from_matrix_basis("sl2", {"e", "h", "f"}, {e, h, f}));
    }();
    return g;
}

LiePtr sl3() {
    static LiePtr g = [] {
        auto unit = [](std::size_t i, std::size_t j) {
            QMatrix m(3, 3);
            m.at(i, j) = 1;
            return m;
        };
        QMatrix h1(3, 3), h2(3, 3);
        h1.at(0, 0) = 1;
        h1.at(1, 1) = -1;
        h2.at(1, 1) = 1;
        h2.at(2, 2) = -1;
        return std::make_shared<const LieAlgebraData>(LieAlgebraData::from_matrix_basis(
            "sl3", {"e12", "e13", "e23", "e21", "e31", "e32", "h1", "h2"},
            {unit(0, 1), unit(0, 2), unit(1, 2), unit(1, 0), unit(2, 0), unit(2, 1), h1, h2}));
    }();
    return g;
}

LiePtr lie_by_name(const std::string& name) {
    if (name == "sl2") return sl2();
    if (name == "sl3") return sl3();
    throw DomainError("unknown Lie algebra: " + name);
}

QMatrix casimir_tensor(const LieAlgebraData& g) {
    return g.killing_inverse();
}

TensorSeries::TensorSeries(LiePtr g, std::size_t arity)
    : TensorSeries(std::move(g), arity, Window(arity, VarWindow{0, kDegreeInf})) {}

TensorSeries::TensorSeries(LiePtr g, std::size_t arity, Window w)
    : g_(std::move(g)), arity_(arity), window_(std::move(w)) {
    if (!g_) throw DomainError("TensorSeries requires an algebra");
    if (window_.size() != arity_) throw DomainError("TensorSeries window arity mismatch");
}

std::optional<Rational> TensorSeries::coefficient(const TensorKey& k) const {
    if (k.legs.size() != arity_ || k.exps.size() != arity_)
        throw DomainError("TensorSeries coefficient arity mismatch");
    for (std::size_t v = 0; v < arity_; ++v)
        if (k.exps[v] < window_[v].low) return Rational(0);
    for (std::size_t v = 0; v < arity_; ++v)
        if (k.exps[v] >= window_[v].high) return std::nullopt;
    auto it = coeff_.find(k);
    return it == coeff_.end() ? Rational(0) : it->second;
}

void TensorSeries::set_coefficient(const TensorKey& k, const Rational& c) {
    if (k.legs.size() != arity_ || k.exps.size() != arity_)
        throw DomainError("TensorSeries set_coefficient arity mismatch");
    for (std::size_t v = 0; v < arity_; ++v) {
        if (k.legs[v] >= g_->dim()) throw DomainError("TensorSeries leg index out of range");
        if (k.exps[v] >= window_[v].high)
            throw WindowError("TensorSeries set_coefficient outside the exactness window");
    }
    for (std::size_t v = 0; v < arity_; ++v)
        window_[v].low = std::min(window_[v].low, k.exps[v]);
    if (c == 0)
        coeff_.erase(k);
    else
        coeff_[k] = c;
}

void TensorSeries::add_coefficient(const TensorKey& k, const Rational& c) {
    if (c == 0) return;
    auto cur = coefficient(k);
    if (!cur) throw WindowError("TensorSeries add_coefficient outside the exactness window");
    set_coefficient(k, *cur + c);
}

bool TensorSeries::is_zero_on_window() const {
    for (const auto& [k, c] : coeff_)
        if (c != 0) return false;
    return true;
}

void TensorSeries::shrink_window(const Window& w) {
    if (w.size() != arity_) throw DomainError("TensorSeries shrink_window arity mismatch");
    for (std::size_t v = 0; v < arity_; ++v) {
        if (w[v].high > window_[v].high)
            throw WindowError("TensorSeries shrink_window cannot grow the window");
        window_[v].high = w[v].high;
        window_[v].low = std::min(window_[v].low, w[v].low);
    }
    for (auto it = coeff_.begin(); it != coeff_.end();) {
        bool keep = true;
        for (std::size_t v = 0; v < arity_; ++v)
            if (it->first.exps[v] >= window_[v].high) keep = false;
        it = keep ? std::next(it) : coeff_.erase(it);
    }
}

std::string TensorSeries::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : coeff_) {
        if (c == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << rational_to_string(c) << ")";
        for (std::size_t v = 0; v < arity_; ++v)
            os << (v == 0 ? " " : "|") << g_->basis_names()[k.legs[v]];
        for (std::size_t v = 0; v < arity_; ++v) {
            if (k.exps[v] == 0) continue;
            os << " " << var_name(v);
            if (k.exps[v] != 1) os << "^" << k.exps[v];
        }
    }
    if (first) os << "0";
    os << "   on ";
    for (std::size_t v = 0; v < arity_; ++v)
        os << (v == 0 ? "" : " x ") << window_to_string(window_[v]);
    return os.str();
}

bool TensorSeries::operator==(const TensorSeries& other) const {
    return arity_ == other.arity_ && window_ == other.window_ && coeff_ == other.coeff_ &&
           g_.get() == other.g_.get();
}

namespace {
void require_compatible(const TensorSeries& a, const TensorSeries& b, const char* who) {
    if (a.algebra().get() != b.algebra().get())
        throw DomainError(std::string(who) + ": different algebras");
    if (a.arity() != b.arity()) throw DomainError(std::string(who) + ": arity mismatch");
}
}  // namespace

TensorSeries tensor_add(const TensorSeries& a, const TensorSeries& b) {
    require_compatible(a, b, "tensor_add");
    Window w(a.arity());
    for (std::size_t v = 0; v < a.arity(); ++v) w[v] = window_add(a.window()[v], b.window()[v]);
    TensorSeries out(a.algebra(), a.arity(), w);
    auto pour = [&](const TensorSeries& src) {
        for (const auto& [k, c] : src.coefficients()) {
            bool inside = true;
            for (std::size_t v = 0; v < out.arity(); ++v)
                if (k.exps[v] >= w[v].high) inside = false;
            if (inside) out.add_coefficient(k, c);
        }
    };
    pour(a);
    pour(b);
    return out;
}

TensorSeries tensor_sub(const TensorSeries& a, const TensorSeries& b) {
    return tensor_add(a, tensor_neg(b));
}

TensorSeries tensor_neg(const TensorSeries& a) {
    return tensor_scale(a, Rational(-1));
}

TensorSeries tensor_scale(const TensorSeries& a, const Rational& c) {
    TensorSeries out(a.algebra(), a.arity(), a.window());
    if (c == 0) return out;
    for (const auto& [k, v] : a.coefficients()) out.set_coefficient(k, v * c);
    return out;
}

TensorSeries scalar_times_tensor2(const ScalarSeries& f, const QMatrix& t, LiePtr g) {
    if (f.nvars() != 2) throw DomainError("scalar_times_tensor2 expects a bivariate series");
    if (t.rows() != g->dim() || t.cols() != g->dim())
        throw DomainError("scalar_times_tensor2: tensor shape mismatch");
    TensorSeries out(std::move(g), 2, f.window());
    for (const auto& [e, c] : f.coefficients())
        for (std::size_t i = 0; i < t.rows(); ++i)
            for (std::size_t j = 0; j < t.cols(); ++j)
                if (t.at(i, j) != 0) out.add_coefficient({{i, j}, e}, c * t.at(i, j));
    return out;
}

TensorSeries leg_permute(const TensorSeries& a, const std::vector<std::size_t>& perm) {
    if (perm.size() != a.arity()) throw DomainError("leg_permute: permutation arity mismatch");
    Window w(a.arity());
    for (std::size_t v = 0; v < a.arity(); ++v) w[v] = a.window()[perm[v]];
    TensorSeries out(a.algebra(), a.arity(), w);
    for (const auto& [k, c] : a.coefficients()) {
        TensorKey nk{std::vector<std::size_t>(a.arity()), Exponents(a.arity())};
        for (std::size_t v = 0; v < a.arity(); ++v) {
            nk.legs[v] = k.legs[perm[v]];
            nk.exps[v] = k.exps[perm[v]];
        }
        out.set_coefficient(nk, c);
    }
    return out;
}

TensorSeries tau_flip(const TensorSeries& a) {
    if (a.arity() != 2) throw DomainError("tau_flip expects arity 2");
    return leg_permute(a, {1, 0});
}

TensorSeries mul_scalar_in_var(const TensorSeries& a, std::size_t leg, const ScalarSeries& s) {
    if (leg >= a.arity()) throw DomainError("mul_scalar_in_var: leg out of range");
    if (s.nvars() != 1) throw DomainError("mul_scalar_in_var expects a univariate series");
    Window w = a.window();
    w[leg] = window_mul(w[leg], s.window()[0]);
    TensorSeries out(a.algebra(), a.arity(), w);
    for (const auto& [k, c] : a.coefficients())
        for (const auto& [se, sc] : s.coefficients()) {
            TensorKey nk = k;
            nk.exps[leg] += se[0];
            if (nk.exps[leg] < w[leg].high) out.add_coefficient(nk, c * sc);
        }
    return out;
}

TensorSeries ad_action_const(const TensorSeries& a, std::size_t leg,
                             const std::vector<Rational>& elem) {
    if (leg >= a.arity()) throw DomainError("ad_action_const: leg out of range");
    const LieAlgebraData& g = *a.algebra();
    if (elem.size() != g.dim()) throw DomainError("ad_action_const: element size mismatch");
    TensorSeries out(a.algebra(), a.arity(), a.window());
    for (const auto& [k, c] : a.coefficients()) {
        for (std::size_t i = 0; i < g.dim(); ++i) {
            if (elem[i] == 0) continue;
            for (std::size_t m = 0; m < g.dim(); ++m) {
                const Rational& s = g.structure(i, k.legs[leg], m);
                if (s == 0) continue;
                TensorKey nk = k;
                nk.legs[leg] = m;
                out.add_coefficient(nk, c * elem[i] * s);
            }
        }
    }
    return out;
}

TensorSeries ad_action(const TensorSeries& a, std::size_t leg, std::size_t elem,
                       const ScalarSeries& c) {
    std::vector<Rational> coords(a.algebra()->dim(), Rational(0));
    if (elem >= coords.size()) throw DomainError("ad_action: element index out of range");
    coords[elem] = 1;
    return mul_scalar_in_var(ad_action_const(a, leg, coords), leg, c);
}

std::optional<std::pair<TensorKey, Rational>> tensor_diff_on_shared_window(
    const TensorSeries& a, const TensorSeries& b) {
    require_compatible(a, b, "tensor_diff_on_shared_window");
    std::vector<TensorKey> keys;
    for (const auto& [k, c] : a.coefficients()) keys.push_back(k);
    for (const auto& [k, c] : b.coefficients()) keys.push_back(k);
    for (const auto& k : keys) {
        auto ca = a.coefficient(k);
        auto cb = b.coefficient(k);
        if (ca && cb && *ca != *cb) return std::make_pair(k, *ca - *cb);
    }
    return std::nullopt;
}

}  // namespace nslab
