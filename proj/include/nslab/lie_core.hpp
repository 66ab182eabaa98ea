#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nslab/linalg.hpp"
#include "nslab/rational.hpp"
#include "nslab/scalar_series.hpp"
#include "nslab/window.hpp"

namespace nslab {

// Finite-dimensional Lie algebra given by structure constants, with the
// Killing form and its inverse precomputed.
class LieAlgebraData {
  public:
    // Build from a faithful matrix realization: structure constants are found
    // by expanding commutators in the given basis.
    static LieAlgebraData from_matrix_basis(std::string name,
                                            std::vector<std::string> basis_names,
                                            const std::vector<QMatrix>& basis_matrices);

    const std::string& name() const { return name_; }
    std::size_t dim() const { return dim_; }
    const std::vector<std::string>& basis_names() const { return basis_names_; }

    // Coefficient of b_k in [b_i, b_j].
    const Rational& structure(std::size_t i, std::size_t j, std::size_t k) const;
    // Coordinates of [u, v] for coordinate vectors u, v.
    std::vector<Rational> bracket(const std::vector<Rational>& u,
                                  const std::vector<Rational>& v) const;

    const QMatrix& killing() const { return killing_; }
    const QMatrix& killing_inverse() const { return killing_inv_; }
    Rational killing_form(const std::vector<Rational>& u, const std::vector<Rational>& v) const;
    // Coordinates of the metric dual b^i (pairing to delta_ij against b_j).
    std::vector<Rational> dual_vector(std::size_t i) const { return killing_inv_.row(i); }

    // Structural sanity: antisymmetry, Jacobi, ad-invariance of the form.
    bool validate() const;

  private:
    std::string name_;
    std::size_t dim_ = 0;
    std::vector<std::string> basis_names_;
    std::vector<Rational> structure_;  // dim^3, [i][j][k]
    QMatrix killing_;
    QMatrix killing_inv_;
};

using LiePtr = std::shared_ptr<const LieAlgebraData>;

LiePtr sl2();
LiePtr sl3();
LiePtr lie_by_name(const std::string& name);

// Casimir 2-tensor sum_ij (kappa^{-1})_ij b_i x b_j as a dim x dim matrix.
QMatrix casimir_tensor(const LieAlgebraData& g);

// One basis term of a pure tensor: which basis element sits on each leg,
// and the multi-exponent of the attached monomial.
struct TensorKey {
    std::vector<std::size_t> legs;
    Exponents exps;
    auto operator<=>(const TensorKey&) const = default;
};

// Element of g^{x arity} with coefficients that are exact windowed series in
// one formal variable per leg.
class TensorSeries {
  public:
    TensorSeries() = default;
    TensorSeries(LiePtr g, std::size_t arity);
    TensorSeries(LiePtr g, std::size_t arity, Window w);

    const LiePtr& algebra() const { return g_; }
    std::size_t arity() const { return arity_; }
    const Window& window() const { return window_; }
    const std::map<TensorKey, Rational>& coefficients() const { return coeff_; }

    std::optional<Rational> coefficient(const TensorKey& k) const;
    void set_coefficient(const TensorKey& k, const Rational& c);
    void add_coefficient(const TensorKey& k, const Rational& c);
    bool is_known(const TensorKey& k) const { return coefficient(k).has_value(); }
    bool is_zero_on_window() const;
    void shrink_window(const Window& w);

    std::string to_string() const;

    bool operator==(const TensorSeries& other) const;

  private:
    LiePtr g_;
    std::size_t arity_ = 0;
    Window window_;
    std::map<TensorKey, Rational> coeff_;
    friend TensorSeries tensor_add(const TensorSeries&, const TensorSeries&);
};

TensorSeries tensor_add(const TensorSeries& a, const TensorSeries& b);
TensorSeries tensor_sub(const TensorSeries& a, const TensorSeries& b);
TensorSeries tensor_neg(const TensorSeries& a);
TensorSeries tensor_scale(const TensorSeries& a, const Rational& c);

// Scalar series (in the variables of f, matched by count to the arity) times a
// constant 2-tensor given as a dim x dim coefficient matrix.
TensorSeries scalar_times_tensor2(const ScalarSeries& f, const QMatrix& t, LiePtr g);

// Permute legs and their variables in lockstep: result leg p of out takes leg
// perm[p] of the input, and likewise for exponents.
TensorSeries leg_permute(const TensorSeries& a, const std::vector<std::size_t>& perm);

// Swap of the two legs (and variables) of an arity-2 tensor.
TensorSeries tau_flip(const TensorSeries& a);

// Multiply by a univariate scalar series acting in the variable of one leg.
TensorSeries mul_scalar_in_var(const TensorSeries& a, std::size_t leg, const ScalarSeries& s);

// Apply ad(c(x_leg) * b_elem) on the chosen leg: every key picks up the bracket
// on that leg and the series factor in that leg's variable.
TensorSeries ad_action(const TensorSeries& a, std::size_t leg, std::size_t elem,
                       const ScalarSeries& c);

// Same with a plain algebra element (coordinates, no series factor).
TensorSeries ad_action_const(const TensorSeries& a, std::size_t leg,
                             const std::vector<Rational>& elem);

// Difference witness on the shared certified window, if any.
std::optional<std::pair<TensorKey, Rational>> tensor_diff_on_shared_window(const TensorSeries& a,
                                                                           const TensorSeries& b);

}  // namespace nslab
