#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "nslab/lie_core.hpp"
#include "nslab/manin_pair.hpp"
#include "nslab/ns_series.hpp"

namespace nslab {

// --- double-commutator residuals -------------------------------------------
//
// Three-variable computations place the first-variable expansion P(x, y) of a
// series (see project_first) into legs (1,2), (1,3), (2,3) of g x g x g and
// sum the pairwise commutators
//
//     [P^{12}, P^{13}] + [P^{12}, P^{23}] + [P^{13}, Q^{23}],
//
// with Q = P for the plain residual and Q = the expansion of the transpose
// partner for the generalized one.  Exactness of an output coefficient of
// x1^a x2^b x3^c is decided per convolution from the input windows.  Because
// deeper x3-slices of the inputs reach further to the left in their own
// variable, the certified range of b shrinks as c grows: the region is not a
// plain box.  All certification questions must go through certifies(); the
// raw coefficient table makes no claim by itself.
struct TripleExpansion {
    LiePtr lie;
    // Stored values, already pruned to the certified region.
    std::map<TensorKey, Rational> coeff;
    // x1 in [a_low, a_high); x3 in [0, c_high); x2 in [b_low, b_high[c]).
    long a_low = 0;
    long a_high = 0;
    long b_low = 0;
    std::vector<long> b_high;
    long c_high = 0;
    // Human-readable description of the inputs and the derived bounds.
    std::string provenance;

    bool certifies(long a, long b, long c) const;
    bool certifies(const TensorKey& k) const;
    // Exact value when the key is certified, nullopt otherwise.
    std::optional<Rational> coefficient(const TensorKey& k) const;

    bool is_zero_on_certified() const;
    std::optional<std::pair<TensorKey, Rational>> first_certified_nonzero() const;
    // Number of certified lattice points (a,b,c).
    long certified_count() const;

    std::string region_to_string() const;
};

// Plain residual [P12,P13] + [P12,P23] + [P13,P23] of an arity-2 expansion.
// WindowError when no output coefficient is certifiable.
TripleExpansion cyb(const TensorSeries& P);
// Generalized residual: the second factor of the third term is the
// expansion Q of the transpose partner.
TripleExpansion gcyb(const TensorSeries& P, const TensorSeries& Q);

// Convenience forms: expand r (and, for the generalized residual, its
// transpose partner) to x3-order y_high first.
TripleExpansion cyb(const NSSeries& r, long y_high);
TripleExpansion gcyb(const NSSeries& r, long y_high);

// First difference on the intersection of the two certified regions.
std::optional<std::pair<TensorKey, Rational>> triple_diff_on_shared(const TripleExpansion& u,
                                                                    const TripleExpansion& v);

// --- cobracket data --------------------------------------------------------
//
// Arguments named `a` below are g-valued one-variable polynomials: arity-1
// tensor series with finite nonnegative support and exact windows.

// -[a x 1 + 1 x a, P] on the certified window of P.  Negative output
// degrees are kept so the caller can observe their cancellation.
TensorSeries delta_of(const TensorSeries& P, const TensorSeries& a);
TensorSeries delta_of(const NSSeries& r, const TensorSeries& a, long y_high);

// Asserts that every coefficient at a key with some negative exponent is
// zero, then narrows the window to the power-series quadrant.  A surviving
// pole raises DomainError naming the key; a window that cannot rule poles
// out (some exactness bound < 0) raises WindowError instead.
TensorSeries taylor_part(const TensorSeries& t);

// Cobracket tabulated on the monomial generators b_i x^m, 0 <= m <= m_max.
// Entries are taylor-restricted; pole cancellation is asserted at build
// time.  source_x_low records the support floor of the generating expansion
// P: the image of any generator b_i x^p has first-leg support >= source_x_low
// + p or second-leg support >= p, which bounds where generators beyond a
// finite certification horizon can contribute.
struct DeltaTable {
    LiePtr lie;
    long m_max = -1;
    long source_x_low = 0;
    std::vector<std::vector<TensorSeries>> entries;  // [m][i]

    // DomainError outside 0 <= m <= m_max.
    const TensorSeries& entry(long m, std::size_t i) const;
};

DeltaTable make_delta_table(const TensorSeries& P, long m_max);
DeltaTable make_delta_table(const NSSeries& r, long m_max, long y_high);

// Linear extension of the table to a polynomial argument.  DomainError when
// the argument involves a generator outside the table.
TensorSeries delta_from_table(const DeltaTable& t, const TensorSeries& a);

// Substitutes the tabulated image for leg 0: a key b_u x^p (x) rest becomes
// entry(p, u) on legs (0,1) with rest shifted up one leg.  The output
// windows account for generators beyond the certified first-leg degree of s
// through source_x_low.  WindowError (with the needed depth) when a stored
// nonzero key outruns the table.
TensorSeries apply_table_leg0(const DeltaTable& t, const TensorSeries& s);

// Signed symmetrization over all leg permutations (variables move with
// their legs).
TensorSeries alt_signed(const TensorSeries& t);

// t agrees with its signed leg-transposes (checked on adjacent swaps).
bool totally_alternating(const TensorSeries& t);

// Pointwise bracket [a, b] of two g-valued polynomials.
TensorSeries g_poly_bracket(const TensorSeries& a, const TensorSeries& b);

// Sum over legs of the action of a in that leg's variable:
// [a x 1 x ... + ... + ... x 1 x a, t].
TensorSeries ad_diagonal(const TensorSeries& t, const TensorSeries& a);

// Alternating 3-tensor attached to a skew series: checks r skew, computes
// the plain triple residual, asserts it pole-free on the certified region,
// and returns the sign-flipped restriction to the largest certified
// power-series box (balanced between the last two variables; the first
// window is exact whenever the inputs are exact in x).  In general the
// result is a genuine three-variable series, not a polynomial, and a larger
// expansion order widens the box.  WindowError when no box is certifiable.
TensorSeries phi_of(const NSSeries& r, long y_high);

// delta([a,b]) - [a x 1 + 1 x a, delta(b)] + [b x 1 + 1 x b, delta(a)].
// Zero exactly when the tabulated map is a cocycle on the tested pair.
TensorSeries cocycle_residual(const DeltaTable& t, const TensorSeries& a, const TensorSeries& b);

// (1/2) Alt((delta x 1) delta(a)) - [a x 1 x 1 + 1 x a x 1 + 1 x 1 x a, phi].
TensorSeries quasi_jacobi_residual(const DeltaTable& t, const TensorSeries& phi,
                                   const TensorSeries& a);

// Alt((delta x 1 x 1) phi); arity 4.
TensorSeries alt_delta_phi_residual(const DeltaTable& t, const TensorSeries& phi);

// Cobracket table plus alternating 3-tensor of a skew series, validated:
// every entry skew under the simultaneous leg/variable swap, phi totally
// alternating.
struct QuasiBialgebraData {
    DeltaTable delta;
    TensorSeries phi;  // arity 3
};

QuasiBialgebraData quasi_bialgebra_of(const NSSeries& r, long m_max, long y_high);

// --- twisting --------------------------------------------------------------

// r - s for a polynomial twist datum s (regular part only; the singular
// part is untouched).  TwistError when s is not skew; DomainError when s is
// not an exactly known tensor polynomial with nonnegative exponents.
NSSeries twist_series(const NSSeries& r, const TensorSeries& s_twist);

// { sum over terms c * B(second factor, w) * (first factor) - w : w in
// basis }, with both monomial factors of each term of s placed into the
// algebra along the diagonal.
std::vector<LnElement> twist_subspace(const std::vector<LnElement>& basis,
                                      const TensorSeries& s_twist, const AlphaData& a,
                                      LiePtr lie);

// Data of the twisted series from the data of the original: the cobracket
// gains [a x 1 + 1 x a, s]; phi gains the plain residual of s minus half
// the signed symmetrization of the table applied to s.
QuasiBialgebraData twist_delta_phi(const QuasiBialgebraData& q, const TensorSeries& s_twist);

// Plain residual of a polynomial two-tensor, exact end to end.
TensorSeries poly_cyb(const TensorSeries& s);

// --- subalgebra closure ----------------------------------------------------

struct SubalgebraReport {
    long tested = 0;    // pairs decided by an exact solve (includes failed)
    long untested = 0;  // pairs whose bracket can leave the row family
    long failed = 0;
    bool closed = false;  // at least one decided pair and no failures
    // First failing pair (k, i, l, j).
    std::optional<std::tuple<long, std::size_t, long, std::size_t>> witness;
    bool gcyb_zero = false;  // companion residual verdict
    bool coherent = false;   // closed == gcyb_zero
    long gcyb_order = 0;     // x3-order used for the companion residual
};

// Bracket closure of the span of the coefficient rows f_{k,i}, k < k_max, at
// linear stage max(K, k_max).  A pair (k,.),(l,.) is decided only when
// k + l <= k_max - 2, so the bracket's row expansion stays inside the
// family; other pairs are counted untested, never failed.  Requires
// s * x^n * alpha = 1 on the shared certified window.  The companion
// generalized residual is evaluated at order min(k_max, certified order)
// and the two verdicts compared.
SubalgebraReport subalgebra_residual(const NSSeries& r, const AlphaData& a, LiePtr lie,
                                     long k_max, long K);

// --- reports ---------------------------------------------------------------

// {"check", "verdict", "certified_region", "first_nonzero"} as JSON text.
std::string residual_json(const std::string& check, const TripleExpansion& t);
std::string residual_json(const std::string& check, const TensorSeries& t);
std::string report_json(const SubalgebraReport& rep);

}  // namespace nslab
