#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "nslab/lie_core.hpp"
#include "nslab/manin_pair.hpp"
#include "nslab/rational.hpp"
#include "nslab/scalar_series.hpp"

namespace nslab {

// Series of shape r(x,y) = s(x) y^n Omega/(x-y) + g(x,y): n >= 0, s a unit
// power series in x, g an arity-2 tensor series with power-series windows in
// both slots.  Omega is the split Casimir; the rational-function part is read
// as the quotient-side expansion, so r pairs the L(n,alpha) rows f_{k,i}
// against the metric-dual basis on the y-leg.
struct NSSeries {
    long n = 0;
    ScalarSeries s;  // univariate unit power series
    TensorSeries g;  // arity 2, slots (x, y)

    // n >= 0, s univariate with s(0) != 0 certified, g arity 2 with
    // power-series windows.
    void validate() const;
};

NSSeries ns_from_json_text(const std::string& text, LiePtr lie);
std::string ns_to_json_text(const NSSeries& r);

// Quotient-side expansion basis of y^n/(x-y):
//   0 <= k <= n-1 :  b_i (0, -[x^{(n-1)-k}])
//   k >= n        :  b_i (x^{(n-1)-k}, 0)
LnElement w_basis(LiePtr lie, long n, long k, std::size_t i);

// s(x) * w_{k,i} inside L(n, .).  Quotient rows (k <= n-1) need s certified
// through degree k (the class has no window to carry uncertainty).
LnElement scaled_w(LiePtr lie, long n, const ScalarSeries& s, long k, std::size_t i);

// Rows f_{k,i} = s*w_{k,i} + g_{k,i}, the L(n, .)-valued coefficients of r
// against the metric-dual basis on the y-leg; g_{k,i} is the diagonal part
// read from g's y^k slice.
struct CoefficientTable {
    long n = 0;
    long k_max = 0;
    std::vector<std::vector<LnElement>> rows;  // [k][i]
};

CoefficientTable coefficients(const NSSeries& r, LiePtr lie, long k_max);

// Standard-form representative of h(x,y) Omega/(x-y) + g: n and s come from
// the diagonal h(x,x) = x^n s(x); the remainder moves into the regular part
// through f = (h - y^n s(x))/(x-y).  target_y_high = -1 splits the certified
// output triangle evenly between the two variables.
NSSeries normalize_to_ns(const ScalarSeries& h, const TensorSeries& gpart,
                         long target_y_high = -1);

// Transpose partner: represents s(y) x^n Omega/(x-y) - tau(g), renormalized
// to standard form.  Shares n and s with r; only the regular part moves.
NSSeries bar(const NSSeries& r, long target_y_high = -1);

struct SkewReport {
    bool skew = false;
    // First certified nonzero coefficient of r - bar(r), if any.
    std::optional<std::pair<TensorKey, Rational>> witness;
};

// r is skew-symmetric when r = bar(r) on the shared certified window.
SkewReport is_skew(const NSSeries& r, long target_y_high = -1);

// Closed form of B(s*w_{k,i}, s*w_{l,j}) for the pairing built from the alpha
// with s * x^n * alpha = 1:
//   -kappa_ij s_{k+l-n+1}  when 0 <= k,l <= n-1,
//    kappa_ij s_{k+l-n+1}  when k,l >= n,
//    0                     otherwise (s_m = 0 for m < 0).
Rational gram_ww(long n, const ScalarSeries& s, long k, std::size_t i, long l, std::size_t j,
                 const LieAlgebraData& lie);

// Outcome of a family of exact pairings: every certified pair must vanish (or
// hit its Kronecker target); pairs the windows cannot certify are skipped and
// counted, never reported as failures.
struct PairingReport {
    bool ok = true;
    long tested = 0;
    long skipped = 0;
    // (k, i, l, j, value) of the first violation.
    std::optional<std::tuple<long, std::size_t, long, std::size_t, Rational>> witness;
};

// All cross-pairings B(f_{k,i}, fbar_{l,j}) between the rows of r and of
// bar(r) vanish, for k,l < k_max.  Requires s * x^n * alpha = 1 on the
// certified read-set (DomainError otherwise).
PairingReport orthocomplement_check(const NSSeries& r, const AlphaData& a, LiePtr lie,
                                    long k_max);

// B(s*w_{k,i}, b^j (x^l, [x^l])) = delta_ij delta_kl for k,l < k_max.
PairingReport dual_basis_check(const NSSeries& r, const AlphaData& a, LiePtr lie, long k_max);

// Expansion of r in (g x g)((x))[[y]]: the singular part becomes
// Omega-weighted s(x) x^{-k-1} y^{n+k} stripes, plus g.  y_high caps the
// y-window of the result (the stripe family is infinite).
TensorSeries project_first(const NSSeries& r, long y_high);

// Inverse of project_first for the given n: s is read off the x^{-1} column,
// the stripes are subtracted, and the remainder must have no singular part.
// The certified y-range funds both the unit part and the regular part, so
// target_y_high picks the split (-1 = balanced, like normalize_to_ns).
NSSeries lift_projection(const TensorSeries& p, long n, long target_y_high = -1);

// Model coordinates of the table rows; Laurent tails are cut at the model
// degree bound (the model is a quotient by high degrees).
std::vector<std::vector<Rational>> table_rows(const TruncatedModel& model,
                                              const CoefficientTable& table);

// Series-from-subspace: for each k < k_max and basis index i, the unique
// member of span(rows) congruent to s*w_{k,i} modulo the diagonal block,
// in model coordinates.  DomainError when the span misses a generator.
std::vector<std::vector<Rational>> reconstruct_rows(const TruncatedModel& model,
                                                    const ScalarSeries& s,
                                                    const std::vector<std::vector<Rational>>& rows,
                                                    long k_max);

}  // namespace nslab
