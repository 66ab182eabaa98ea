#pragma once

#include "nslab/rational.hpp"
#include "nslab/window.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nslab {

using Exponents = std::vector<long>;

// Sparse truncated Laurent/power series over the rationals in finitely many
// named variables, together with a per-variable exactness window.  Stored
// coefficients always lie inside the window; absent in-window keys are exact
// zeros; degrees at or above a variable's high bound are unknown.
class ScalarSeries {
public:
    ScalarSeries() = default;
    ScalarSeries(std::vector<std::string> vars, Window window);

    // Exactly known series (window low = 0 per variable, high = +inf).
    static ScalarSeries zero(std::vector<std::string> vars);
    static ScalarSeries constant(std::vector<std::string> vars, const Rational& c);
    static ScalarSeries monomial(std::vector<std::string> vars, Exponents e, const Rational& c);

    std::size_t nvars() const { return vars_.size(); }
    const std::vector<std::string>& vars() const { return vars_; }
    const Window& window() const { return window_; }
    const std::map<Exponents, Rational>& coefficients() const { return coeff_; }

    // Coefficient at e: exact value if within the known region, nullopt if
    // uncertified.  Degrees below low report exact zero.
    std::optional<Rational> coefficient(const Exponents& e) const;
    bool is_known(const Exponents& e) const;

    // Sets a coefficient.  The degree must be inside the known region; the
    // support bound is lowered if needed.
    void set_coefficient(const Exponents& e, const Rational& c);
    void add_coefficient(const Exponents& e, const Rational& c);

    // True if every stored (certified) coefficient is zero.
    bool is_zero_on_window() const;

    // First (lexicographically smallest) nonzero certified coefficient.
    std::optional<std::pair<Exponents, Rational>> first_nonzero() const;

    // Restricts the exactness window (drops coefficients that fall outside).
    void shrink_window(const Window& w);

    // Reinterprets this series in a larger variable list: each existing
    // variable must appear in new_vars; the added variables get exponent 0
    // and a fully exact window.
    ScalarSeries promoted(const std::vector<std::string>& new_vars) const;

    // Renames variables (same count, order preserved).
    ScalarSeries renamed(std::vector<std::string> new_vars) const;

    std::string to_string() const;

    friend bool operator==(const ScalarSeries&, const ScalarSeries&) = default;

private:
    std::vector<std::string> vars_;
    Window window_;
    std::map<Exponents, Rational> coeff_;
};

// --- arithmetic (variable lists must match; promote first if needed) ------

ScalarSeries series_add(const ScalarSeries& a, const ScalarSeries& b);
ScalarSeries series_sub(const ScalarSeries& a, const ScalarSeries& b);
ScalarSeries series_neg(const ScalarSeries& a);
ScalarSeries series_scale(const ScalarSeries& a, const Rational& c);
ScalarSeries series_mul(const ScalarSeries& a, const ScalarSeries& b);

// Difference of the certified regions of a and b on their shared window;
// returns the first disagreement, or nullopt when equal on the shared window.
std::optional<std::pair<Exponents, Rational>> series_diff_on_shared_window(
    const ScalarSeries& a, const ScalarSeries& b);

// --- univariate operations ------------------------------------------------

// Multiplicative inverse of a unit Laurent series; result exact on
// [-v, target_high).  Throws DomainError if a is zero through its window,
// WindowError if the input window cannot certify the target.
ScalarSeries series_invert(const ScalarSeries& a, long target_high);

// Coefficient of x^{-1}.  Throws WindowError if that degree is uncertified.
Rational series_residue(const ScalarSeries& a);

// Exact termwise derivative d/dx.
ScalarSeries series_derivative(const ScalarSeries& a);

// f(phi):  phi(0) = 0; phi'(0) must be a unit when f has negative support.
// target_high optionally caps the requested exactness bound of the result;
// it is required when f has negative support but both inputs are fully exact
// (the composite then has infinite support).
ScalarSeries series_compose(const ScalarSeries& f, const ScalarSeries& phi,
                            long target_high = kDegreeInf);

// psi with phi(psi(x)) = x through degree `order`; phi = c1 x + ..., c1 != 0.
ScalarSeries series_compositional_inverse(const ScalarSeries& phi, long order);

// --- two-variable operation ----------------------------------------------

// Given h(x,y) with h(z,z) = 0 on the certified diagonal range, returns
// f = h / (x - y) via the substitution x = y + t, exact division by t in the
// (t,y) bigrading, and back-substitution t = x - y.  Both variables must be
// power-series variables (low >= 0).  target_y_high selects the rectangular
// exactness window of the result: y in [0, target_y_high), x in
// [0, h.x_high - target_y_high).
ScalarSeries divide_by_diag(const ScalarSeries& h, long target_y_high);

// Diagonal restriction h(z,z) as a univariate series in `diag_var`.
ScalarSeries diagonal_restriction(const ScalarSeries& h, const std::string& diag_var);

}  // namespace nslab
