#pragma once

#include <map>
#include <string>
#include <vector>

#include "nslab/lie_core.hpp"
#include "nslab/linalg.hpp"
#include "nslab/rational.hpp"
#include "nslab/scalar_series.hpp"

namespace nslab {

// The datum alpha(x) = x^{-n} + sum_{i <= n-2} alpha_i x^{-(i+1)}, finitely
// supported, with the x^{-n} coefficient pinned to 1.
struct AlphaData {
    long n = 0;
    std::map<long, Rational> alpha;  // index i -> alpha_i

    void validate() const;
    // Exact coefficient of x^e in alpha (0 outside the support).
    Rational coefficient_at_exponent(long e) const;
    ScalarSeries alpha_series(const std::string& var = "x") const;
    // x^n * alpha: a unit power series with constant term 1.
    ScalarSeries unit_series(const std::string& var = "x") const;
    // s = 1/(x^n alpha), certified through target_high.
    ScalarSeries s_series(long target_high, const std::string& var = "x") const;

    bool operator==(const AlphaData&) const = default;
};

AlphaData alpha_from_json_text(const std::string& text);
std::string alpha_to_json_text(const AlphaData& a);

// Element (f, [p]) of L(n,alpha) = g((x)) x g[x]/x^n g[x].
struct LnElement {
    long n = 0;
    TensorSeries laurent;                     // arity 1
    std::vector<std::vector<Rational>> poly;  // n rows of dim(g) coordinates
};

LnElement ln_zero(LiePtr g, long n);
LnElement ln_laurent_monomial(LiePtr g, long n, std::size_t i, long k);
LnElement ln_class_monomial(LiePtr g, long n, std::size_t i, long m);
// b_i (x^k, [x^k]) with the class truncated below degree n; k >= 0.
LnElement ln_diagonal(LiePtr g, long n, std::size_t i, long k);
LnElement ln_add(const LnElement& u, const LnElement& v);
LnElement ln_scale(const LnElement& u, const Rational& c);
LnElement ln_bracket(const LnElement& u, const LnElement& v);

// t(f, [p]) = res_0 { alpha (f - p) } on scalar pairs; p lists the class
// coefficients of degrees 0..n-1.
Rational functional_t(const AlphaData& a, const ScalarSeries& f, const std::vector<Rational>& p);

// B(a(f,[p]), b(g,[q])) = kappa(a,b) t(fg, [pq]), extended bilinearly.
Rational form_B(const AlphaData& a, const LnElement& u, const LnElement& v);

// B([u,v],w) - B(u,[v,w]); zero when every pairing is window-exact.
Rational invariance_check(const AlphaData& a, const LnElement& u, const LnElement& v,
                          const LnElement& w);

// L(n,alpha)-valued series with one spectator variable: the first leg and
// variable carry the (laurent | class) data, the second stays formal.
struct Ln2Element {
    long n = 0;
    TensorSeries laurent;   // arity 2, variables (x, y)
    TensorSeries quotient;  // arity 2; the x-exponent is a class degree < n
};

// Contract the first slot of u against v under B; the spectator variable and
// leg survive as an arity-1 tensor series.
TensorSeries form_B_extended(const AlphaData& a, const Ln2Element& u, const LnElement& v);
// Arity-1 reduction: coincides with form_B.
Rational form_B_extended(const AlphaData& a, const LnElement& u, const LnElement& v);

// Finite-dimensional stage: Laurent degrees -K..K-1 plus the n class degrees,
// each tensored with the algebra basis.
struct TruncatedModel {
    AlphaData alpha;
    LiePtr g;
    long K = 0;
    QMatrix gram;

    std::size_t dim() const;
    std::size_t laurent_index(long j, std::size_t i) const;  // -K <= j < K
    std::size_t class_index(long m, std::size_t i) const;    // 0 <= m < n
    std::vector<Rational> coordinates(const LnElement& u) const;
    LnElement element_from_coordinates(const std::vector<Rational>& v) const;
    // The K*dim(g) diagonal vectors b_i (x^j, [x^j]), 0 <= j < K.
    std::vector<std::vector<Rational>> delta_rows() const;
};

TruncatedModel build_truncated_model(const AlphaData& a, LiePtr g, long K);

// True iff the diagonal block and the given rows together span the whole
// model and the rows alone have full expected rank dim(g)*(K+n).
bool complementarity_rank(const TruncatedModel& model,
                          const std::vector<std::vector<Rational>>& w_rows);

// psi = x + O(x^2) with alpha(psi) psi' = beta, beta = x^{-n} + alpha_0 x^{-1};
// phi is the compositional inverse of psi.
struct NormalizingTransform {
    ScalarSeries psi;
    ScalarSeries phi;
    AlphaData beta;
};

NormalizingTransform solve_normalizing_transform(const AlphaData& a, long order);

}  // namespace nslab
