#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nslab/lie_core.hpp"
#include "nslab/manin_pair.hpp"
#include "nslab/ns_series.hpp"

namespace nslab {

// Pairing datum of the one-parameter family: alpha = x^{-n} + alpha0 x^{-1}.
// Below pole order two the tail slot is inadmissible and the datum degenerates
// to alpha = x^{-n} for every alpha0.
AlphaData catalog_alpha(long n, const Rational& alpha0);

// Explicit Lagrangian complement to the diagonal in L(n, alpha0), one
// generator row per family member and basis index.  Geometric tails
// x^e (1 - alpha0 x^{n-1} + alpha0^2 x^{2(n-1)} - ...) are cut strictly
// below exponent k_max (recorded in the row windows); the Laurent family
// x^{-k} runs through k = k_max.  The rows therefore fit the truncated
// stage with K = k_max exactly.  Row order is deterministic: descending
// heads, middle line (odd case), classes, the constant class, then the
// Laurent family, each over all basis indices.
std::vector<LnElement> lagrangian_basis(long n, const Rational& alpha0, LiePtr lie, long k_max);

// Skew series attached to the explicit Lagrangian complement:
//   r = s(x) y^n Omega/(x-y) + Omega [ s(x) A(x,y) + alpha0 s(x) s(y) B(x,y) ]
// with s = 1/(1 + alpha0 x^{n-1}) expanded through x^{order-1} and (A, B) the
// triangular polynomial pair of the family (half-weight middle terms when n
// is odd).  n = 0 gives the rational kernel itself, n = 1 the kernel shifted
// by Omega/2.
NSSeries quasi_r(long n, const Rational& alpha0, LiePtr lie, long order);

// Generic skew series of a pairing with unit s: the rational kernel plus the
// Gram-weighted correction
//   -(1/2) sum_{k,l} sigma(k,l) s_{k+l-n+1} x^k y^l Omega,
// sigma = -1 on the quotient block (k,l <= n-1, k+l >= n-1), +1 on the
// Laurent block (k,l >= n), truncated at x,y degree < order.  s must be
// certified through degree 2*order - n - 1 (WindowError otherwise).
NSSeries symmetrized_quasi_r(long n, const ScalarSeries& s, LiePtr lie, long order);

// Direct-sum decomposition g = part_one (+) part_two into subalgebras, each
// given by coordinate vectors in the algebra basis.
struct SubalgebraDecomposition {
    std::vector<std::vector<Rational>> part_one;
    std::vector<std::vector<Rational>> part_two;
};

// Upper-vs-strictly-lower split read off the basis names: e<ij> with i < j
// and the Cartan h<k> span part one, e<ij> with i > j span part two.
SubalgebraDecomposition borel_decomposition(LiePtr lie);

// The three bounded-subalgebra families: full span, plain kernel span, and
// the interpolating family attached to a decomposition of g.
enum class GeneralizedId { r0, r1, r01 };
GeneralizedId generalized_id_from_string(const std::string& s);
std::string to_string(GeneralizedId id);

// Closed-form series of the bounded-subalgebra family (n >= 1):
//   r1  = s(y) y^n Omega/(x-y)
//   r0  = r1 + s(y) y^{n-1} Omega
//   r01 = r1 + s(y) y^{n-1} (P1 (x) 1) Omega
// with s = 1/(1 + alpha0 x^{n-1}) and P1 the projection of g onto part one
// along part two.  The kernel is renormalized to the standard x-side shape,
// so the regular part carries the exact divided difference of the truncated
// s; its certified rectangle splits the expansion order between x and y.
// The decomposition is required (and validated) exactly for r01.
NSSeries generalized_r(GeneralizedId id, long n, const Rational& alpha0, LiePtr lie, long order,
                       const std::optional<SubalgebraDecomposition>& dec = std::nullopt);

// Same series as a sum of explicit product terms:
//   s(x) y^n Omega/(x-y)
//   + alpha0 s(x) s(y) ( y^{2(n-1)} + sum_{0<l<n-1} x^{n-1-l} y^{n-1+l} ) Omega
//   + [r0]  s(x) s(y) y^{n-1} (1 + alpha0 x^{n-1}) Omega
//   + [r01] s(y) y^{n-1} (P1 (x) 1) Omega.
// Contract: agrees with generalized_r coefficientwise on the shared window.
NSSeries generalized_r_long(GeneralizedId id, long n, const Rational& alpha0, LiePtr lie,
                            long order,
                            const std::optional<SubalgebraDecomposition>& dec = std::nullopt);

// Orthogonal complements of the bounded subalgebras, as explicit generator
// rows (equal, as row spaces, to the span of the bar-series coefficients):
// Laurent lines b_i(x^e/(1 + alpha0 x^{n-1}), 0) for -k_max <= e <= n-2,
// plus, per family: the e = n-1 line (w1); the top quotient class
// b_i(0, [x]^{n-1}) (w0); the e = n-1 line against the kappa-complement of
// part one and the top class against the kappa-complement of part two (w01).
// Geometric tails are cut strictly below exponent k_max, so the rows fit
// the truncated stage with K = k_max exactly.
enum class OrthoId { w0, w1, w01 };
std::vector<LnElement> orthocomplement_basis(
    OrthoId id, long n, const Rational& alpha0, LiePtr lie, long k_max,
    const std::optional<SubalgebraDecomposition>& dec = std::nullopt);

// Checks that the orthogonal complement of the row space of r under the
// alpha-pairing is the u(x)-multiple of its complement under the plain
// x^{-n}-pairing, u = 1/(x^n alpha).  Verifies the multiplier identity
// elementwise over a probe span (Laurent degrees -K..K-1 plus all classes)
// against every coefficient row of r, in both directions (u one way, the
// unit polynomial 1/u back), then confirms each pairing-kernel inside the
// probe span is carried into the other form's complement.  All equalities
// are exact; uncertifiable pairings raise WindowError.
bool rescaled_orthocomplement_check(const NSSeries& r, const AlphaData& a, LiePtr lie, long K);

// Pole-order reduction of a bounded-family series with n > 2 down to n = 2.
struct ReductionReport {
    // {0} x [x^2] g[x]/x^n g[x] lies in the row space of r.
    bool quotient_contained = false;
    std::optional<long> missing_class;
    // Every regular-part key has y-exponent >= n-2, so r = y^{n-2} r' with
    // r' a valid series of pole order two.
    bool factor_valid = false;
    // W(r') is complementary to the diagonal in the order-two model.
    bool projected_complementary = false;
    // r' still solves the generalized equation on the certified region.
    bool projected_gcyb_zero = false;

    bool ok() const {
        return quotient_contained && factor_valid && projected_complementary &&
               projected_gcyb_zero;
    }
};
ReductionReport projection_reduction_check(const NSSeries& r, LiePtr lie, long K);

// Addressable entries: "quasi_r/n=2/alpha0=1", "symmetrized/n=3/alpha0=1",
// "generalized/r01/n=2/alpha0=1/borel".  The alpha0 token defaults to 0 and
// must be absent or 0 when n <= 1; generalized ids require n >= 1 and r01
// requires a decomposition token.
struct CatalogEntry {
    std::string id;
    NSSeries r;
    AlphaData alpha;
};

std::vector<std::string> catalog_ids();
CatalogEntry catalog_entry(const std::string& id, LiePtr lie, long order);

}  // namespace nslab
