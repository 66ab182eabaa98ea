#include "nslab/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "nslab/error.hpp"
#include "nslab/linalg.hpp"
#include "nslab/scalar_series.hpp"
#include "nslab/yang_baxter.hpp"

namespace nslab {
namespace {

std::vector<Rational> unit_weight(std::size_t d, std::size_t i) {
    std::vector<Rational> w(d, Rational(0));
    w[i] = Rational(1);
    return w;
}

// Laurent line x^base * s(x) against the direction sum_i w_i b_i, written out
// as the geometric tail sum_j (-alpha0)^j x^{base + j(n-1)} and cut strictly
// below `high` (recorded in the window).  Exact single monomial when
// alpha0 == 0.
LnElement laurent_tail(const LiePtr& lie, long n, const std::vector<Rational>& w, long base,
                       long step, const Rational& alpha0, long high) {
    LnElement u = ln_zero(lie, n);
    if (alpha0 == 0) {
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] != 0) u.laurent.set_coefficient({{i}, {base}}, w[i]);
        return u;
    }
    u.laurent.shrink_window({VarWindow{std::min<long>(base, 0), high}});
    Rational c(1);
    for (long e = base; e < high; e += step) {
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] != 0) u.laurent.set_coefficient({{i}, {e}}, c * w[i]);
        c *= -alpha0;
        if (step <= 0) break;
    }
    return u;
}

// The family unit series 1/(1 + alpha0 x^{n-1}) through x^{order-1}; exact
// when the tail is absent.
ScalarSeries family_s(long n, const Rational& alpha0, long order) {
    if (alpha0 == 0) return ScalarSeries::constant({"x"}, Rational(1));
    return catalog_alpha(n, alpha0).s_series(order, "x");
}

ScalarSeries in_xy(const ScalarSeries& sx) { return sx.promoted({"x", "y"}); }

ScalarSeries in_y_of_xy(const ScalarSeries& sx) {
    return sx.renamed({"y"}).promoted({"x", "y"});
}

ScalarSeries mono_xy(long ex, long ey) {
    return ScalarSeries::monomial({"x", "y"}, {ex, ey}, Rational(1));
}

// (s(x) - s(y))/(x - y) of a truncated univariate power series: the (a, b)
// coefficient is s_{a+b+1}, certified on a rectangle that splits the input
// order between the two slots (exact everywhere when s is exact).
ScalarSeries divided_difference(const ScalarSeries& s) {
    if (s.nvars() != 1) throw DomainError("divided_difference: univariate series required");
    if (s.window()[0].low < 0) throw DomainError("divided_difference: power series required");
    const long order = s.window()[0].high;
    long hx = kDegreeInf;
    long hy = kDegreeInf;
    if (order < kDegreeInf) {
        hx = order - order / 2;
        hy = order / 2;
    }
    ScalarSeries out({"x", "y"}, {VarWindow{0, hx}, VarWindow{0, hy}});
    for (const auto& [e, c] : s.coefficients()) {
        if (c == 0 || e[0] < 1) continue;
        for (long a = 0; a < e[0] && a < hx; ++a) {
            const long b = e[0] - 1 - a;
            if (b >= hy) continue;
            out.add_coefficient({a, b}, c);
        }
    }
    return out;
}

QMatrix part_matrix(const std::vector<std::vector<Rational>>& part, std::size_t d,
                    const char* what) {
    if (part.empty()) throw DomainError(std::string(what) + ": a part of the decomposition is empty");
    for (const auto& v : part)
        if (v.size() != d)
            throw DomainError(std::string(what) + ": coordinate length does not match the algebra");
    return QMatrix::from_rows(part);
}

void validate_decomposition(const SubalgebraDecomposition& dec, const LieAlgebraData& lie,
                            const char* what) {
    const std::size_t d = lie.dim();
    const QMatrix m1 = part_matrix(dec.part_one, d, what);
    const QMatrix m2 = part_matrix(dec.part_two, d, what);
    if (dec.part_one.size() + dec.part_two.size() != d)
        throw DomainError(std::string(what) + ": part dimensions do not sum to the algebra dimension");
    QMatrix joint = m1;
    for (std::size_t r = 0; r < m2.rows(); ++r) joint.append_row(m2.row(r));
    if (rank(joint) != d)
        throw DomainError(std::string(what) + ": the parts do not span the algebra");
    auto check_closed = [&](const std::vector<std::vector<Rational>>& part, const QMatrix& span,
                            const char* which) {
        for (std::size_t a = 0; a < part.size(); ++a)
            for (std::size_t b = a + 1; b < part.size(); ++b)
                if (!rowspace_contains(span, lie.bracket(part[a], part[b])))
                    throw DomainError(std::string(what) + ": " + which + " is not a subalgebra");
    };
    check_closed(dec.part_one, m1, "part one");
    check_closed(dec.part_two, m2, "part two");
}

// Projection of g onto part one along part two, as a dim x dim matrix acting
// on coordinates.
QMatrix projection_onto_first(const SubalgebraDecomposition& dec, const LieAlgebraData& lie) {
    const std::size_t d = lie.dim();
    const std::size_t d1 = dec.part_one.size();
    QMatrix c(d, d);
    for (std::size_t col = 0; col < d; ++col) {
        const std::vector<Rational>& v =
            col < d1 ? dec.part_one[col] : dec.part_two[col - d1];
        for (std::size_t row = 0; row < d; ++row) c.at(row, col) = v[row];
    }
    const auto inv = solve_columns(c, QMatrix::identity(d));
    if (!inv) throw DomainError("decomposition: the parts do not span the algebra");
    QMatrix left(d, d1);
    QMatrix top(d1, d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t cc = 0; cc < d1; ++cc) left.at(r, cc) = c.at(r, cc);
    for (std::size_t r = 0; r < d1; ++r)
        for (std::size_t cc = 0; cc < d; ++cc) top.at(r, cc) = inv->at(r, cc);
    return mat_mul(left, top);
}

// Directions orthogonal to a part under the invariant form, as coordinate
// vectors.
std::vector<std::vector<Rational>> perp_weights(const std::vector<std::vector<Rational>>& part,
                                                const LieAlgebraData& lie) {
    return nullspace(mat_mul(QMatrix::from_rows(part), lie.killing()));
}

// f * v inside L(n, .): the Laurent slot multiplies as a series, the class
// slot modulo x^n.  f must be a univariate power series certified through
// the class degrees.
LnElement ln_scalar_mul(const ScalarSeries& f, const LnElement& v) {
    if (f.nvars() != 1) throw DomainError("ln_scalar_mul: univariate series required");
    if (f.window()[0].low < 0) throw DomainError("ln_scalar_mul: power series required");
    LnElement out = ln_zero(v.laurent.algebra(), v.n);
    out.laurent = mul_scalar_in_var(v.laurent, 0, f);
    for (long m = 0; m < v.n; ++m)
        for (std::size_t i = 0; i < out.poly[static_cast<std::size_t>(m)].size(); ++i) {
            Rational acc(0);
            for (long j = 0; j <= m; ++j) {
                const auto fj = f.coefficient({j});
                if (!fj)
                    throw WindowError("ln_scalar_mul: scalar not certified through the class degrees",
                                      v.n);
                if (*fj == 0) continue;
                acc += *fj * v.poly[static_cast<std::size_t>(m - j)][i];
            }
            out.poly[static_cast<std::size_t>(m)][i] = acc;
        }
    return out;
}

void check_generalized_args(const char* what, GeneralizedId id, long n, const Rational& alpha0,
                            const LiePtr& lie, long order,
                            const std::optional<SubalgebraDecomposition>& dec) {
    if (!lie) throw DomainError(std::string(what) + ": algebra required");
    if (n < 1)
        throw DomainError(std::string(what) + ": the bounded families need pole order at least one");
    if (order < 2) throw DomainError(std::string(what) + ": order must be at least two");
    if (n == 1 && alpha0 != 0)
        throw DomainError(std::string(what) + ": the pairing tail needs pole order at least two");
    if (id == GeneralizedId::r01 && !dec)
        throw DomainError(std::string(what) + ": r01 needs a decomposition");
    if (id != GeneralizedId::r01 && dec)
        throw DomainError(std::string(what) + ": only r01 takes a decomposition");
}

}  // namespace

AlphaData catalog_alpha(long n, const Rational& alpha0) {
    if (n < 0) throw DomainError("catalog_alpha: pole order must be nonnegative");
    AlphaData a;
    a.n = n;
    if (n >= 2 && alpha0 != 0) a.alpha[0] = alpha0;
    a.validate();
    return a;
}

std::vector<LnElement> lagrangian_basis(long n, const Rational& alpha0, LiePtr lie, long k_max) {
    if (!lie) throw DomainError("lagrangian_basis: algebra required");
    if (n < 0) throw DomainError("lagrangian_basis: pole order must be nonnegative");
    if (k_max < 1) throw DomainError("lagrangian_basis: k_max must be positive");
    if (n <= 1 && alpha0 != 0)
        throw DomainError("lagrangian_basis: the pairing tail needs pole order at least two");
    const std::size_t d = lie->dim();
    std::vector<LnElement> rows;
    auto push_all = [&](auto&& make) {
        for (std::size_t i = 0; i < d; ++i) rows.push_back(make(i));
    };
    if (n >= 2) {
        const long half = n / 2;  // (n-1)/2 when n is odd
        for (long m = 0; m < half; ++m)
            push_all([&](std::size_t i) {
                return laurent_tail(lie, n, unit_weight(d, i), (n - 1) - m, n - 1, alpha0, k_max);
            });
        if (n % 2 == 1) {
            // middle line: the head x^{(n-1)/2} rides together with minus its
            // own class, the tail stays on the Laurent side
            push_all([&](std::size_t i) {
                LnElement u = laurent_tail(lie, n, unit_weight(d, i), half, n - 1, alpha0, k_max);
                u.poly[static_cast<std::size_t>(half)][i] = Rational(-1);
                return u;
            });
        }
        const long class_start = (n % 2 == 0) ? half : half + 1;
        for (long l = class_start; l <= n - 2; ++l)
            push_all([&](std::size_t i) {
                LnElement u = ln_zero(lie, n);
                u.poly[static_cast<std::size_t>((n - 1) - l)][i] = Rational(-1);
                return u;
            });
        // constant class with its half-weight top correction
        push_all([&](std::size_t i) {
            LnElement u = ln_zero(lie, n);
            u.poly[0][i] = Rational(-1);
            if (alpha0 != 0) u.poly[static_cast<std::size_t>(n - 1)][i] = alpha0 / 2;
            return u;
        });
    } else if (n == 1) {
        push_all([&](std::size_t i) {
            LnElement u = ln_laurent_monomial(lie, 1, i, 0);
            u.poly[0][i] = Rational(-1);
            return u;
        });
    }
    for (long k = 1; k <= k_max; ++k)
        push_all([&](std::size_t i) { return ln_laurent_monomial(lie, n, i, -k); });
    return rows;
}

NSSeries quasi_r(long n, const Rational& alpha0, LiePtr lie, long order) {
    if (!lie) throw DomainError("quasi_r: algebra required");
    if (n < 0) throw DomainError("quasi_r: pole order must be nonnegative");
    if (order < 1) throw DomainError("quasi_r: order must be positive");
    if (n <= 1 && alpha0 != 0)
        throw DomainError("quasi_r: the pairing tail needs pole order at least two");
    const QMatrix om = casimir_tensor(*lie);
    const ScalarSeries sx = family_s(n, alpha0, order);
    if (n == 0) {
        NSSeries r{0, sx, TensorSeries(lie, 2)};
        r.validate();
        return r;
    }
    if (n == 1) {
        NSSeries r{1, sx,
                   scalar_times_tensor2(ScalarSeries::constant({"x", "y"}, Rational(1, 2)), om,
                                        lie)};
        r.validate();
        return r;
    }
    ScalarSeries a = ScalarSeries::zero({"x", "y"});
    ScalarSeries b = ScalarSeries::zero({"x", "y"});
    if (n % 2 == 0) {
        for (long m = 0; m < n / 2; ++m) a.add_coefficient({n - 1 - m, m}, Rational(1));
        b.add_coefficient({0, 2 * (n - 1)}, Rational(1));
        for (long l = n / 2; l < n - 1; ++l)
            b.add_coefficient({n - 1 - l, n - 1 + l}, Rational(1));
        b.add_coefficient({n - 1, n - 1}, Rational(-1, 2));
    } else {
        const long h = (n - 1) / 2;
        for (long m = 0; m < h; ++m) a.add_coefficient({n - 1 - m, m}, Rational(1));
        a.add_coefficient({h, h}, Rational(1, 2));
        b.add_coefficient({0, 2 * (n - 1)}, Rational(1));
        b.add_coefficient({h, n - 1 + h}, Rational(1, 2));
        for (long l = h + 1; l < n - 1; ++l)
            b.add_coefficient({n - 1 - l, n - 1 + l}, Rational(1));
        b.add_coefficient({n - 1, n - 1}, Rational(-1, 2));
    }
    ScalarSeries w = series_mul(in_xy(sx), a);
    if (alpha0 != 0)
        w = series_add(w, series_scale(series_mul(series_mul(in_xy(sx), in_y_of_xy(sx)), b),
                                       alpha0));
    NSSeries r{n, sx, scalar_times_tensor2(w, om, lie)};
    r.validate();
    return r;
}

NSSeries symmetrized_quasi_r(long n, const ScalarSeries& s, LiePtr lie, long order) {
    if (!lie) throw DomainError("symmetrized_quasi_r: algebra required");
    if (n < 0) throw DomainError("symmetrized_quasi_r: pole order must be nonnegative");
    if (order < 1 || order >= kDegreeInf / 4)
        throw DomainError("symmetrized_quasi_r: order out of range");
    if (s.nvars() != 1) throw DomainError("symmetrized_quasi_r: s must be univariate");
    if (s.window()[0].low < 0)
        throw DomainError("symmetrized_quasi_r: s must be a power series");
    const auto s0 = s.coefficient({0});
    if (!s0 || *s0 == 0) throw DomainError("symmetrized_quasi_r: s must be a unit");
    const long need = 2 * order - n;
    if (s.window()[0].high < need)
        throw WindowError("symmetrized_quasi_r: s is not certified deep enough for this order",
                          need);
    ScalarSeries w({"x", "y"}, {VarWindow{0, order}, VarWindow{0, order}});
    for (long k = 0; k < order; ++k)
        for (long l = 0; l < order; ++l) {
            int sign = 0;
            if (k <= n - 1 && l <= n - 1 && k + l >= n - 1)
                sign = -1;
            else if (k >= n && l >= n)
                sign = 1;
            if (sign == 0) continue;
            const Rational sj = s.coefficient({k + l - n + 1}).value();
            if (sj == 0) continue;
            w.add_coefficient({k, l}, Rational(-sign, 2) * sj);
        }
    NSSeries r{n, s.renamed({"x"}), scalar_times_tensor2(w, casimir_tensor(*lie), lie)};
    r.validate();
    return r;
}

SubalgebraDecomposition borel_decomposition(LiePtr lie) {
    if (!lie) throw DomainError("borel_decomposition: algebra required");
    const auto& names = lie->basis_names();
    const std::size_t d = lie->dim();
    SubalgebraDecomposition dec;
    for (std::size_t i = 0; i < d; ++i) {
        const std::string& nm = names[i];
        bool upper = false;
        if (nm == "e" || (!nm.empty() && nm[0] == 'h')) {
            upper = true;
        } else if (nm == "f") {
            upper = false;
        } else if (nm.size() == 3 && nm[0] == 'e' && std::isdigit(static_cast<unsigned char>(nm[1])) &&
                   std::isdigit(static_cast<unsigned char>(nm[2]))) {
            upper = nm[1] < nm[2];
        } else {
            throw DomainError("borel_decomposition: cannot classify basis vector " + nm);
        }
        (upper ? dec.part_one : dec.part_two).push_back(unit_weight(d, i));
    }
    if (dec.part_one.empty() || dec.part_two.empty())
        throw DomainError("borel_decomposition: the split is degenerate");
    return dec;
}

GeneralizedId generalized_id_from_string(const std::string& s) {
    if (s == "r0") return GeneralizedId::r0;
    if (s == "r1") return GeneralizedId::r1;
    if (s == "r01") return GeneralizedId::r01;
    throw DomainError("generalized id must be one of r0, r1, r01");
}

std::string to_string(GeneralizedId id) {
    switch (id) {
        case GeneralizedId::r0: return "r0";
        case GeneralizedId::r1: return "r1";
        case GeneralizedId::r01: return "r01";
    }
    throw DomainError("generalized id out of range");
}

NSSeries generalized_r(GeneralizedId id, long n, const Rational& alpha0, LiePtr lie, long order,
                       const std::optional<SubalgebraDecomposition>& dec) {
    check_generalized_args("generalized_r", id, n, alpha0, lie, order, dec);
    const QMatrix om = casimir_tensor(*lie);
    const ScalarSeries sx = family_s(n, alpha0, order);
    TensorSeries g2(lie, 2);
    if (alpha0 != 0)
        g2 = scalar_times_tensor2(series_neg(series_mul(divided_difference(sx), mono_xy(0, n))),
                                  om, lie);
    if (id != GeneralizedId::r1) {
        const ScalarSeries tail = series_mul(in_y_of_xy(sx), mono_xy(0, n - 1));
        QMatrix m = om;
        if (id == GeneralizedId::r01) {
            validate_decomposition(*dec, *lie, "generalized_r");
            m = mat_mul(projection_onto_first(*dec, *lie), om);
        }
        g2 = tensor_add(g2, scalar_times_tensor2(tail, m, lie));
    }
    NSSeries r{n, sx, g2};
    r.validate();
    return r;
}

NSSeries generalized_r_long(GeneralizedId id, long n, const Rational& alpha0, LiePtr lie,
                            long order, const std::optional<SubalgebraDecomposition>& dec) {
    check_generalized_args("generalized_r_long", id, n, alpha0, lie, order, dec);
    const QMatrix om = casimir_tensor(*lie);
    const ScalarSeries sx = family_s(n, alpha0, order);
    const ScalarSeries sxy = in_xy(sx);
    const ScalarSeries syy = in_y_of_xy(sx);
    TensorSeries g2(lie, 2);
    if (alpha0 != 0) {
        ScalarSeries q = ScalarSeries::zero({"x", "y"});
        q.add_coefficient({0, 2 * (n - 1)}, Rational(1));
        for (long l = 1; l < n - 1; ++l) q.add_coefficient({n - 1 - l, n - 1 + l}, Rational(1));
        g2 = scalar_times_tensor2(series_scale(series_mul(series_mul(sxy, syy), q), alpha0), om,
                                  lie);
    }
    if (id == GeneralizedId::r0) {
        ScalarSeries unit_x = ScalarSeries::zero({"x", "y"});
        unit_x.add_coefficient({0, 0}, Rational(1));
        if (alpha0 != 0) unit_x.add_coefficient({n - 1, 0}, alpha0);
        const ScalarSeries term =
            series_mul(series_mul(sxy, syy), series_mul(unit_x, mono_xy(0, n - 1)));
        g2 = tensor_add(g2, scalar_times_tensor2(term, om, lie));
    } else if (id == GeneralizedId::r01) {
        validate_decomposition(*dec, *lie, "generalized_r_long");
        g2 = tensor_add(g2,
                        scalar_times_tensor2(series_mul(syy, mono_xy(0, n - 1)),
                                             mat_mul(projection_onto_first(*dec, *lie), om), lie));
    }
    NSSeries r{n, sx, g2};
    r.validate();
    return r;
}

std::vector<LnElement> orthocomplement_basis(OrthoId id, long n, const Rational& alpha0,
                                             LiePtr lie, long k_max,
                                             const std::optional<SubalgebraDecomposition>& dec) {
    if (!lie) throw DomainError("orthocomplement_basis: algebra required");
    if (n < 1)
        throw DomainError("orthocomplement_basis: the bounded families need pole order at least one");
    if (k_max < 1) throw DomainError("orthocomplement_basis: k_max must be positive");
    if (n == 1 && alpha0 != 0)
        throw DomainError("orthocomplement_basis: the pairing tail needs pole order at least two");
    if ((id == OrthoId::w01) != dec.has_value())
        throw DomainError("orthocomplement_basis: a decomposition is required exactly for w01");
    const std::size_t d = lie->dim();
    std::vector<LnElement> rows;
    auto line = [&](const std::vector<Rational>& w, long e) {
        return laurent_tail(lie, n, w, e, n - 1, alpha0, k_max);
    };
    auto top_class = [&](const std::vector<Rational>& w) {
        LnElement u = ln_zero(lie, n);
        for (std::size_t i = 0; i < d; ++i) u.poly[static_cast<std::size_t>(n - 1)][i] = w[i];
        return u;
    };
    if (id == OrthoId::w01) {
        validate_decomposition(*dec, *lie, "orthocomplement_basis");
        for (const auto& w : perp_weights(dec->part_one, *lie)) rows.push_back(line(w, n - 1));
    } else if (id == OrthoId::w1) {
        for (std::size_t i = 0; i < d; ++i) rows.push_back(line(unit_weight(d, i), n - 1));
    }
    for (long e = n - 2; e >= -k_max; --e)
        for (std::size_t i = 0; i < d; ++i) rows.push_back(line(unit_weight(d, i), e));
    if (id == OrthoId::w0) {
        for (std::size_t i = 0; i < d; ++i) rows.push_back(top_class(unit_weight(d, i)));
    } else if (id == OrthoId::w01) {
        for (const auto& w : perp_weights(dec->part_two, *lie)) rows.push_back(top_class(w));
    }
    return rows;
}

bool rescaled_orthocomplement_check(const NSSeries& r, const AlphaData& a, LiePtr lie, long K) {
    if (!lie) throw DomainError("rescaled_orthocomplement_check: algebra required");
    r.validate();
    a.validate();
    if (K < 1) throw DomainError("rescaled_orthocomplement_check: K must be positive");
    if (a.n != r.n) throw DomainError("rescaled_orthocomplement_check: pole order mismatch");
    const long n = a.n;
    const std::size_t d = lie->dim();
    AlphaData plain;
    plain.n = n;
    plain.validate();
    std::vector<LnElement> probe;
    for (long e = -K; e < K; ++e)
        for (std::size_t i = 0; i < d; ++i) probe.push_back(ln_laurent_monomial(lie, n, i, e));
    for (long m = 0; m < n; ++m)
        for (std::size_t i = 0; i < d; ++i) probe.push_back(ln_class_monomial(lie, n, i, m));
    const CoefficientTable table = coefficients(r, lie, K + n);
    std::vector<const LnElement*> frows;
    for (long k = 0; k < table.k_max; ++k)
        for (std::size_t i = 0; i < d; ++i)
            frows.push_back(&table.rows[static_cast<std::size_t>(k)][i]);
    auto gram = [&](const AlphaData& al) {
        QMatrix m(frows.size(), probe.size());
        for (std::size_t fr = 0; fr < frows.size(); ++fr)
            for (std::size_t c = 0; c < probe.size(); ++c)
                m.at(fr, c) = form_B(al, probe[c], *frows[fr]);
        return m;
    };
    const ScalarSeries u = a.s_series(4 * (K + n) + 8, "x");
    const ScalarSeries unit = a.unit_series("x");
    // The multiplier identity, elementwise on the probe span: pairing with
    // the rescaled element under one form equals pairing with the plain
    // element under the other.
    for (const auto& p : probe) {
        const LnElement up = ln_scalar_mul(u, p);
        const LnElement unitp = ln_scalar_mul(unit, p);
        for (const LnElement* f : frows) {
            if (form_B(a, up, *f) != form_B(plain, p, *f)) return false;
            if (form_B(plain, unitp, *f) != form_B(a, p, *f)) return false;
        }
    }
    // Consequence at the orthocomplement level: each pairing-kernel inside
    // the probe span is carried into the orthogonal complement for the other
    // form by the matching multiplier.  (The two kernels can have different
    // sizes at a finite truncation, so no dimension comparison is made.)
    const auto ker_plain = nullspace(gram(plain));
    const auto ker_alpha = nullspace(gram(a));
    if (ker_plain.empty() || ker_alpha.empty()) return false;
    auto combine = [&](const std::vector<Rational>& c) {
        LnElement v = ln_zero(lie, n);
        for (std::size_t j = 0; j < probe.size(); ++j)
            if (c[j] != 0) v = ln_add(v, ln_scale(probe[j], c[j]));
        return v;
    };
    for (const auto& c : ker_plain) {
        const LnElement v = ln_scalar_mul(u, combine(c));
        for (const LnElement* f : frows)
            if (form_B(a, v, *f) != 0) return false;
    }
    for (const auto& c : ker_alpha) {
        const LnElement v = ln_scalar_mul(unit, combine(c));
        for (const LnElement* f : frows)
            if (form_B(plain, v, *f) != 0) return false;
    }
    return true;
}

ReductionReport projection_reduction_check(const NSSeries& r, LiePtr lie, long K) {
    if (!lie) throw DomainError("projection_reduction_check: algebra required");
    r.validate();
    if (K < 1) throw DomainError("projection_reduction_check: K must be positive");
    const long n = r.n;
    if (n <= 2) throw DomainError("projection_reduction_check: needs pole order above two");
    // the inverse unit must be 1 + alpha0 x^{n-1}: recover the tail, reject
    // series outside the one-tail family
    const ScalarSeries unit = series_invert(r.s, n);
    Rational alpha0(0);
    for (const auto& [e, c] : unit.coefficients()) {
        if (c == 0) continue;
        if (e[0] == 0) {
            if (c != 1)
                throw DomainError("projection_reduction_check: the unit part must start at one");
        } else if (e[0] == n - 1) {
            alpha0 = c;
        } else {
            throw DomainError("projection_reduction_check: the series is not of the one-tail family");
        }
    }
    ReductionReport rep;
    const AlphaData an = catalog_alpha(n, alpha0);
    const TruncatedModel model = build_truncated_model(an, lie, K);
    const QMatrix w = QMatrix::from_rows(table_rows(model, coefficients(r, lie, K + n)));
    rep.quotient_contained = true;
    for (long m = 2; m < n && rep.quotient_contained; ++m)
        for (std::size_t i = 0; i < lie->dim(); ++i)
            if (!rowspace_contains(w, model.coordinates(ln_class_monomial(lie, n, i, m)))) {
                rep.quotient_contained = false;
                rep.missing_class = m;
                break;
            }
    rep.factor_valid = true;
    for (const auto& [k, c] : r.g.coefficients())
        if (c != 0 && k.exps[1] < n - 2) {
            rep.factor_valid = false;
            break;
        }
    if (!rep.factor_valid) return rep;
    Window w2 = r.g.window();
    w2[1].low = std::max<long>(0, w2[1].low - (n - 2));
    if (w2[1].high < kDegreeInf) w2[1].high -= n - 2;
    if (w2[1].high < 2) return rep;
    TensorSeries gp(lie, 2, w2);
    for (const auto& [k, c] : r.g.coefficients())
        if (c != 0) gp.set_coefficient({k.legs, {k.exps[0], k.exps[1] - (n - 2)}}, c);
    NSSeries rp{2, r.s, gp};
    rp.validate();
    AlphaData a2;
    a2.n = 2;
    if (alpha0 != 0) a2.alpha[2 - n] = alpha0;
    a2.validate();
    const TruncatedModel model2 = build_truncated_model(a2, lie, K);
    rep.projected_complementary =
        complementarity_rank(model2, table_rows(model2, coefficients(rp, lie, K + 2)));
    const TripleExpansion t = gcyb(rp, std::min<long>(K + 2, w2[1].high));
    rep.projected_gcyb_zero = t.certified_count() > 0 && t.is_zero_on_certified();
    return rep;
}

namespace {

struct ParsedId {
    std::string family;
    std::optional<GeneralizedId> gid;
    long n = -1;
    Rational alpha0 = Rational(0);
    bool borel = false;
};

long parse_long_token(const std::string& text, const char* what) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(text, &pos);
    } catch (...) {
        throw DomainError(std::string("catalog id: bad ") + what);
    }
    if (pos != text.size()) throw DomainError(std::string("catalog id: bad ") + what);
    return v;
}

ParsedId parse_catalog_id(const std::string& id) {
    std::vector<std::string> tokens;
    std::size_t start = 0;
    while (start <= id.size()) {
        const std::size_t cut = id.find('/', start);
        if (cut == std::string::npos) {
            tokens.push_back(id.substr(start));
            break;
        }
        tokens.push_back(id.substr(start, cut - start));
        start = cut + 1;
    }
    if (tokens.empty() || tokens[0].empty()) throw DomainError("catalog id: empty");
    ParsedId p;
    p.family = tokens[0];
    std::size_t at = 1;
    if (p.family == "generalized") {
        if (tokens.size() < 2) throw DomainError("catalog id: generalized needs a member token");
        p.gid = generalized_id_from_string(tokens[1]);
        at = 2;
    } else if (p.family != "quasi_r" && p.family != "symmetrized") {
        throw DomainError("catalog id: unknown family " + p.family);
    }
    bool have_n = false;
    bool have_a = false;
    for (; at < tokens.size(); ++at) {
        const std::string& t = tokens[at];
        if (t.rfind("n=", 0) == 0) {
            if (have_n) throw DomainError("catalog id: duplicate n token");
            p.n = parse_long_token(t.substr(2), "pole order");
            have_n = true;
        } else if (t.rfind("alpha0=", 0) == 0) {
            if (have_a) throw DomainError("catalog id: duplicate alpha0 token");
            p.alpha0 = parse_rational(t.substr(7));
            have_a = true;
        } else if (t == "borel") {
            if (p.borel) throw DomainError("catalog id: duplicate borel token");
            p.borel = true;
        } else {
            throw DomainError("catalog id: unknown token " + t);
        }
    }
    if (!have_n) throw DomainError("catalog id: missing n token");
    if (p.n < 0) throw DomainError("catalog id: n must be nonnegative");
    return p;
}

std::string canonical_catalog_id(const ParsedId& p) {
    std::string out = p.family;
    if (p.gid) out += "/" + to_string(*p.gid);
    out += "/n=" + std::to_string(p.n);
    if (p.alpha0 != 0) out += "/alpha0=" + rational_to_string(p.alpha0);
    if (p.borel) out += "/borel";
    return out;
}

}  // namespace

std::vector<std::string> catalog_ids() {
    std::vector<std::string> out;
    auto add = [&](ParsedId p) { out.push_back(canonical_catalog_id(p)); };
    for (const char* family : {"quasi_r", "symmetrized"})
        for (long n = 0; n <= 4; ++n)
            for (int t = 0; t <= 1; ++t) {
                if (n <= 1 && t == 1) continue;
                ParsedId p;
                p.family = family;
                p.n = n;
                p.alpha0 = Rational(t);
                add(p);
            }
    for (GeneralizedId gid : {GeneralizedId::r0, GeneralizedId::r1, GeneralizedId::r01})
        for (long n = 1; n <= 4; ++n)
            for (int t = 0; t <= 1; ++t) {
                if (n == 1 && t == 1) continue;
                ParsedId p;
                p.family = "generalized";
                p.gid = gid;
                p.n = n;
                p.alpha0 = Rational(t);
                p.borel = gid == GeneralizedId::r01;
                add(p);
            }
    return out;
}

CatalogEntry catalog_entry(const std::string& id, LiePtr lie, long order) {
    if (!lie) throw DomainError("catalog_entry: algebra required");
    const ParsedId p = parse_catalog_id(id);
    CatalogEntry out;
    out.alpha = catalog_alpha(p.n, p.alpha0);
    if (p.family == "quasi_r") {
        if (p.borel) throw DomainError("catalog id: borel does not apply to quasi_r");
        out.r = quasi_r(p.n, p.alpha0, lie, order);
    } else if (p.family == "symmetrized") {
        if (p.borel) throw DomainError("catalog id: borel does not apply to symmetrized");
        if (p.n <= 1 && p.alpha0 != 0)
            throw DomainError("catalog id: the pairing tail needs pole order at least two");
        const ScalarSeries s = p.alpha0 == 0
                                   ? ScalarSeries::constant({"x"}, Rational(1))
                                   : out.alpha.s_series(std::max<long>(2 * order - p.n, 1), "x");
        out.r = symmetrized_quasi_r(p.n, s, lie, order);
    } else {
        std::optional<SubalgebraDecomposition> dec;
        if (*p.gid == GeneralizedId::r01) {
            if (!p.borel) throw DomainError("catalog id: r01 needs a decomposition token");
            dec = borel_decomposition(lie);
        } else if (p.borel) {
            throw DomainError("catalog id: only r01 takes a decomposition token");
        }
        out.r = generalized_r(*p.gid, p.n, p.alpha0, lie, order, dec);
    }
    out.id = canonical_catalog_id(p);
    return out;
}

}  // namespace nslab
