#include "nslab/ns_series.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "nslab/error.hpp"

namespace nslab {

namespace {

using nlohmann::json;

long window_bound_from_json(const json& v) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return kDegreeInf;
        throw ParseError("window bound must be an integer or \"inf\"");
    }
    if (!v.is_number_integer()) throw ParseError("window bound must be an integer or \"inf\"");
    return v.get<long>();
}

json window_bound_to_json(long b) {
    if (b >= kDegreeInf) return json("inf");
    return json(b);
}

VarWindow var_window_from_json(const json& v, const char* what) {
    if (!v.is_array() || v.size() != 2)
        throw ParseError(std::string(what) + " window must be a [low, high] pair");
    return VarWindow{window_bound_from_json(v[0]), window_bound_from_json(v[1])};
}

void require_same_algebra(const LiePtr& given, const LiePtr& held, const char* who) {
    if (!given || given.get() != held.get())
        throw DomainError(std::string(who) + ": algebra does not match the series");
}

// Largest contiguous row prefix [0, kc) whose coefficient rows the windows of
// r certify: y-slices of g through kc, the quotient block of g in x when
// n > 0, and the unit series through every quotient row it scales.
long certifiable_rows(const NSSeries& r, long k_max) {
    long kc = std::min(k_max, r.g.window()[1].high);
    if (r.n > 0) {
        if (r.g.window()[0].high < r.n) return 0;
        if (r.s.window()[0].high < r.n) kc = std::min(kc, r.s.window()[0].high);
    }
    return std::max<long>(kc, 0);
}

void require_unit_match(const NSSeries& r, const AlphaData& a, const char* who) {
    if (a.n != r.n)
        throw DomainError(std::string(who) + ": quotient sizes of the series and of alpha differ");
    const ScalarSeries prod = series_mul(r.s, a.unit_series(r.s.vars()[0]));
    const ScalarSeries one = ScalarSeries::constant(r.s.vars(), 1);
    if (const auto w = series_diff_on_shared_window(prod, one))
        throw DomainError(std::string(who) + ": s does not invert x^n alpha (degree " +
                          std::to_string(w->first[0]) + " of the product is off by " +
                          rational_to_string(w->second) + ")");
}

}  // namespace

void NSSeries::validate() const {
    if (n < 0) throw DomainError("NSSeries: n must be nonnegative");
    if (s.nvars() != 1) throw DomainError("NSSeries: s must be univariate");
    if (g.arity() != 2 || !g.algebra())
        throw DomainError("NSSeries: g must be a two-leg tensor series over an algebra");
    if (s.window()[0].low < 0 || g.window()[0].low < 0 || g.window()[1].low < 0)
        throw DomainError("NSSeries: s and g must be power series");
    const auto c0 = s.coefficient({0});
    if (!c0) throw WindowError("NSSeries: the constant term of s is not certified", 1);
    if (*c0 == 0) throw DomainError("NSSeries: s must be a unit (nonzero constant term)");
}

NSSeries ns_from_json_text(const std::string& text, LiePtr lie) {
    if (!lie) throw DomainError("ns_from_json_text: algebra required");
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("bad JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("s") || !j.contains("g"))
        throw ParseError("series JSON needs the fields n, s and g");
    if (!j["n"].is_number_integer() || j["n"].get<long>() < 0)
        throw ParseError("n must be a nonnegative integer");
    VarWindow ws{0, kDegreeInf}, wgx{0, kDegreeInf}, wgy{0, kDegreeInf};
    if (j.contains("windows")) {
        const json& w = j["windows"];
        if (!w.is_object()) throw ParseError("windows must be an object");
        if (w.contains("s")) ws = var_window_from_json(w["s"], "s");
        if (w.contains("g")) {
            if (!w["g"].is_array() || w["g"].size() != 2)
                throw ParseError("g window must list one pair per variable");
            wgx = var_window_from_json(w["g"][0], "g");
            wgy = var_window_from_json(w["g"][1], "g");
        }
    }
    NSSeries r;
    r.n = j["n"].get<long>();
    if (!j["s"].is_object()) throw ParseError("s must map degrees to rational strings");
    r.s = ScalarSeries({"x"}, {ws});
    for (auto it = j["s"].begin(); it != j["s"].end(); ++it) {
        long deg = 0;
        try {
            std::size_t used = 0;
            deg = std::stol(it.key(), &used);
            if (used != it.key().size()) throw ParseError("");
        } catch (...) {
            throw ParseError("bad degree key '" + it.key() + "' in s");
        }
        if (!it.value().is_string()) throw ParseError("coefficients must be rational strings");
        const Rational c = parse_rational(it.value().get<std::string>());
        if (deg < 0 || deg >= ws.high)
            throw ParseError("s coefficient at degree " + std::to_string(deg) +
                             " lies outside the declared window");
        if (c != 0) r.s.set_coefficient({deg}, c);
    }
    if (!j["g"].is_array()) throw ParseError("g must be an array of [i, j, kx, ky, coeff] entries");
    r.g = TensorSeries(lie, 2, {wgx, wgy});
    for (const json& e : j["g"]) {
        if (!e.is_array() || e.size() != 5 || !e[0].is_number_integer() ||
            !e[1].is_number_integer() || !e[2].is_number_integer() || !e[3].is_number_integer() ||
            !e[4].is_string())
            throw ParseError("g entries must be [i, j, kx, ky, coeff-string]");
        const long bi = e[0].get<long>(), bj = e[1].get<long>();
        const long kx = e[2].get<long>(), ky = e[3].get<long>();
        if (bi < 0 || bj < 0 || bi >= static_cast<long>(lie->dim()) ||
            bj >= static_cast<long>(lie->dim()))
            throw ParseError("g entry uses a basis index out of range");
        if (kx < 0 || ky < 0 || kx >= wgx.high || ky >= wgy.high)
            throw ParseError("g entry lies outside the declared window");
        const Rational c = parse_rational(e[4].get<std::string>());
        if (c != 0)
            r.g.add_coefficient(
                {{static_cast<std::size_t>(bi), static_cast<std::size_t>(bj)}, {kx, ky}}, c);
    }
    r.validate();
    return r;
}

std::string ns_to_json_text(const NSSeries& r) {
    json j;
    j["n"] = r.n;
    json s = json::object();
    for (const auto& [e, c] : r.s.coefficients())
        if (c != 0) s[std::to_string(e[0])] = rational_to_string(c);
    j["s"] = s;
    json g = json::array();
    for (const auto& [k, c] : r.g.coefficients()) {
        if (c == 0) continue;
        g.push_back(json::array({static_cast<long>(k.legs[0]), static_cast<long>(k.legs[1]),
                                 k.exps[0], k.exps[1], rational_to_string(c)}));
    }
    j["g"] = g;
    j["windows"] = {
        {"s", json::array({window_bound_to_json(r.s.window()[0].low),
                           window_bound_to_json(r.s.window()[0].high)})},
        {"g",
         json::array({json::array({window_bound_to_json(r.g.window()[0].low),
                                   window_bound_to_json(r.g.window()[0].high)}),
                      json::array({window_bound_to_json(r.g.window()[1].low),
                                   window_bound_to_json(r.g.window()[1].high)})})}};
    return j.dump(2);
}

LnElement w_basis(LiePtr lie, long n, long k, std::size_t i) {
    if (!lie) throw DomainError("w_basis: algebra required");
    if (n < 0) throw DomainError("w_basis: n must be nonnegative");
    if (k < 0) throw DomainError("w_basis: k must be nonnegative");
    if (i >= lie->dim()) throw DomainError("w_basis: basis index out of range");
    if (k <= n - 1) return ln_scale(ln_class_monomial(lie, n, i, (n - 1) - k), -1);
    return ln_laurent_monomial(lie, n, i, (n - 1) - k);
}

LnElement scaled_w(LiePtr lie, long n, const ScalarSeries& s, long k, std::size_t i) {
    if (!lie) throw DomainError("scaled_w: algebra required");
    if (n < 0) throw DomainError("scaled_w: n must be nonnegative");
    if (k < 0) throw DomainError("scaled_w: k must be nonnegative");
    if (i >= lie->dim()) throw DomainError("scaled_w: basis index out of range");
    if (s.nvars() != 1) throw DomainError("scaled_w: s must be univariate");
    LnElement out = ln_zero(lie, n);
    if (k <= n - 1) {
        // Quotient row: -s(x) [x^{(n-1)-k}], truncated below degree n.  The
        // quotient block carries no window, so every scaled entry must be
        // certified.
        for (long m = 0; m <= k; ++m) {
            const auto c = s.coefficient({m});
            if (!c)
                throw WindowError(
                    "scaled_w: s must be certified through degree " + std::to_string(k), k + 1);
            if (*c != 0) out.poly[(n - 1) - k + m][i] -= *c;
        }
        return out;
    }
    const long shift = (n - 1) - k;  // <= -1
    const VarWindow w = s.window()[0];
    TensorSeries lau(lie, 1, {VarWindow{sat_add(w.low, shift), sat_add(w.high, shift)}});
    for (const auto& [e, c] : s.coefficients())
        if (c != 0) lau.set_coefficient({{i}, {e[0] + shift}}, c);
    out.laurent = lau;
    return out;
}

CoefficientTable coefficients(const NSSeries& r, LiePtr lie, long k_max) {
    r.validate();
    require_same_algebra(lie, r.g.algebra(), "coefficients");
    if (k_max < 0) throw DomainError("coefficients: k_max must be nonnegative");
    const std::size_t d = lie->dim();
    const VarWindow wgx = r.g.window()[0], wgy = r.g.window()[1];
    if (wgy.high < k_max)
        throw WindowError("coefficients: g is certified only through y-degree " +
                              std::to_string(wgy.high - 1) + ", need " + std::to_string(k_max - 1),
                          k_max);
    if (r.n > 0 && wgx.high < r.n)
        throw WindowError("coefficients: the quotient block needs g certified through x-degree " +
                              std::to_string(r.n - 1),
                          r.n);
    const QMatrix& kappa = lie->killing();
    CoefficientTable table;
    table.n = r.n;
    table.k_max = k_max;
    for (long k = 0; k < k_max; ++k) {
        std::vector<LnElement> row;
        for (std::size_t i = 0; i < d; ++i) {
            // Diagonal part: the y^k slice of g, paired against b_i on the
            // y-leg through the metric.
            LnElement gki = ln_zero(lie, r.n);
            gki.laurent = TensorSeries(lie, 1, {VarWindow{0, wgx.high}});
            for (const auto& [key, c] : r.g.coefficients()) {
                if (key.exps[1] != k) continue;
                const Rational f = c * kappa.at(key.legs[1], i);
                if (f == 0) continue;
                const long p = key.exps[0];
                gki.laurent.add_coefficient({{key.legs[0]}, {p}}, f);
                if (p < r.n) gki.poly[p][key.legs[0]] += f;
            }
            row.push_back(ln_add(scaled_w(lie, r.n, r.s, k, i), gki));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

NSSeries normalize_to_ns(const ScalarSeries& h, const TensorSeries& gpart, long target_y_high) {
    if (h.nvars() != 2) throw DomainError("normalize_to_ns expects a bivariate scalar part");
    if (gpart.arity() != 2 || !gpart.algebra())
        throw DomainError("normalize_to_ns: the regular part must be a two-leg tensor series");
    if (h.window()[0].low < 0 || h.window()[1].low < 0 || gpart.window()[0].low < 0 ||
        gpart.window()[1].low < 0)
        throw DomainError("normalize_to_ns: power-series windows required");
    const std::string xv = h.vars()[0];
    const ScalarSeries diag = diagonal_restriction(h, xv);
    const auto lead = diag.first_nonzero();
    if (!lead)
        throw DomainError("normalize_to_ns: h vanishes on the diagonal through the computed window");
    const long n = lead->first[0];
    ScalarSeries s({xv}, {VarWindow{0, sat_add(diag.window()[0].high, -n)}});
    for (const auto& [e, c] : diag.coefficients()) {
        if (e[0] < n || c == 0) continue;
        s.set_coefficient({e[0] - n}, c);
    }
    // y^n s(x), with the sharp support bound n in y.
    ScalarSeries ysx(h.vars(), {s.window()[0], VarWindow{n, kDegreeInf}});
    for (const auto& [e, c] : s.coefficients())
        if (c != 0) ysx.set_coefficient({e[0], n}, c);
    const ScalarSeries num = series_sub(h, ysx);
    long ty = target_y_high;
    if (ty < 0) {
        const VarWindow wx = num.window()[0], wy = num.window()[1];
        const long dh = std::min(sat_add(wx.high, wy.low), sat_add(wy.high, wx.low));
        const long tri = std::max<long>(sat_add(dh, -1), 0);
        ty = tri >= kDegreeInf ? kDegreeInf : tri - tri / 2;
    }
    const ScalarSeries f = divide_by_diag(num, ty);
    const LiePtr lie = gpart.algebra();
    NSSeries out;
    out.n = n;
    out.s = std::move(s);
    out.g = tensor_add(scalar_times_tensor2(f, casimir_tensor(*lie), lie), gpart);
    out.validate();
    return out;
}

NSSeries bar(const NSSeries& r, long target_y_high) {
    r.validate();
    const std::string xv = r.s.vars()[0];
    const std::string yv = xv == "y" ? "y_" : "y";
    // s(y) x^n, with the sharp support bound n in x.
    const VarWindow ws = r.s.window()[0];
    ScalarSeries h({xv, yv}, {VarWindow{r.n, kDegreeInf}, ws});
    for (const auto& [e, c] : r.s.coefficients())
        if (c != 0) h.set_coefficient({r.n, e[0]}, c);
    NSSeries out = normalize_to_ns(h, tensor_neg(tau_flip(r.g)), target_y_high);
    if (out.n != r.n) throw DomainError("bar: the diagonal order changed unexpectedly");
    return out;
}

SkewReport is_skew(const NSSeries& r, long target_y_high) {
    const NSSeries b = bar(r, target_y_high);
    if (series_diff_on_shared_window(r.s, b.s))
        throw DomainError("is_skew: the transpose changed the unit part unexpectedly");
    SkewReport rep;
    rep.witness = tensor_diff_on_shared_window(r.g, b.g);
    rep.skew = !rep.witness.has_value();
    return rep;
}

Rational gram_ww(long n, const ScalarSeries& s, long k, std::size_t i, long l, std::size_t j,
                 const LieAlgebraData& lie) {
    if (n < 0 || k < 0 || l < 0) throw DomainError("gram_ww: indices must be nonnegative");
    if (i >= lie.dim() || j >= lie.dim()) throw DomainError("gram_ww: basis index out of range");
    const bool both_quotient = k <= n - 1 && l <= n - 1;
    const bool both_laurent = k >= n && l >= n;
    if (!both_quotient && !both_laurent) return 0;
    const long m = k + l - n + 1;
    if (m < 0) return 0;
    const Rational& kap = lie.killing().at(i, j);
    if (kap == 0) return 0;
    const auto sm = s.coefficient({m});
    if (!sm)
        throw WindowError("gram_ww: s is not certified at degree " + std::to_string(m), m + 1);
    return both_quotient ? Rational(-kap * *sm) : Rational(kap * *sm);
}

PairingReport orthocomplement_check(const NSSeries& r, const AlphaData& a, LiePtr lie,
                                    long k_max) {
    r.validate();
    require_same_algebra(lie, r.g.algebra(), "orthocomplement_check");
    require_unit_match(r, a, "orthocomplement_check");
    if (k_max < 0) throw DomainError("orthocomplement_check: k_max must be nonnegative");
    const long d = static_cast<long>(lie->dim());
    NSSeries rb = bar(r);
    long kc_b = certifiable_rows(rb, k_max);
    if (kc_b < k_max) {
        // The balanced split may starve the transpose rows; retry with the
        // y-window pinned at the requested row count.
        try {
            NSSeries rb2 = bar(r, k_max);
            if (certifiable_rows(rb2, k_max) > kc_b) {
                kc_b = certifiable_rows(rb2, k_max);
                rb = std::move(rb2);
            }
        } catch (const Error&) {
        }
    }
    const long kc_r = certifiable_rows(r, k_max);
    const CoefficientTable tr = coefficients(r, lie, kc_r);
    const CoefficientTable tb = coefficients(rb, lie, kc_b);
    PairingReport rep;
    for (long k = 0; k < k_max; ++k)
        for (long i = 0; i < d; ++i)
            for (long l = 0; l < k_max; ++l)
                for (long j = 0; j < d; ++j) {
                    if (k >= kc_r || l >= kc_b) {
                        ++rep.skipped;
                        continue;
                    }
                    try {
                        const Rational v = form_B(a, tr.rows[k][static_cast<std::size_t>(i)],
                                                  tb.rows[l][static_cast<std::size_t>(j)]);
                        ++rep.tested;
                        if (v != 0 && rep.ok) {
                            rep.ok = false;
                            rep.witness = {k, static_cast<std::size_t>(i), l,
                                           static_cast<std::size_t>(j), v};
                        }
                    } catch (const WindowError&) {
                        ++rep.skipped;
                    }
                }
    return rep;
}

PairingReport dual_basis_check(const NSSeries& r, const AlphaData& a, LiePtr lie, long k_max) {
    r.validate();
    require_same_algebra(lie, r.g.algebra(), "dual_basis_check");
    require_unit_match(r, a, "dual_basis_check");
    if (k_max < 0) throw DomainError("dual_basis_check: k_max must be nonnegative");
    const std::size_t d = lie->dim();
    const QMatrix& kinv = lie->killing_inverse();
    // Metric duals of the diagonal vectors: b^j (x^l, [x^l]).
    std::vector<std::vector<LnElement>> duals;
    for (long l = 0; l < k_max; ++l) {
        std::vector<LnElement> row;
        for (std::size_t j = 0; j < d; ++j) {
            LnElement e = ln_zero(lie, r.n);
            for (std::size_t m = 0; m < d; ++m)
                if (kinv.at(j, m) != 0)
                    e = ln_add(e, ln_scale(ln_diagonal(lie, r.n, m, l), kinv.at(j, m)));
            row.push_back(std::move(e));
        }
        duals.push_back(std::move(row));
    }
    PairingReport rep;
    for (long k = 0; k < k_max; ++k)
        for (std::size_t i = 0; i < d; ++i) {
            LnElement swk;
            bool have = true;
            try {
                swk = scaled_w(lie, r.n, r.s, k, i);
            } catch (const WindowError&) {
                have = false;
            }
            for (long l = 0; l < k_max; ++l)
                for (std::size_t j = 0; j < d; ++j) {
                    if (!have) {
                        ++rep.skipped;
                        continue;
                    }
                    try {
                        const Rational v =
                            form_B(a, swk, duals[static_cast<std::size_t>(l)][j]);
                        ++rep.tested;
                        const Rational want = (k == l && i == j) ? 1 : 0;
                        if (v != want && rep.ok) {
                            rep.ok = false;
                            rep.witness = {k, i, l, j, v};
                        }
                    } catch (const WindowError&) {
                        ++rep.skipped;
                    }
                }
        }
    return rep;
}

TensorSeries project_first(const NSSeries& r, long y_high) {
    r.validate();
    if (y_high < 0) throw DomainError("project_first: y_high must be nonnegative");
    if (y_high >= kDegreeInf)
        throw DomainError("project_first: y_high must be finite (the stripe family is infinite)");
    const LiePtr lie = r.g.algebra();
    const QMatrix omega = casimir_tensor(*lie);
    const std::size_t d = lie->dim();
    const VarWindow wgx = r.g.window()[0], wgy = r.g.window()[1];
    const VarWindow ws = r.s.window()[0];
    const long yh = std::min(wgy.high, y_high);
    const long top = yh - r.n - 1;  // top stripe index; negative means none
    VarWindow wx = wgx;
    VarWindow wy{wgy.low, yh};
    if (top >= 0) {
        wx.low = std::min(wgx.low, sat_add(ws.low, -(top + 1)));
        wx.high = std::min(wgx.high, sat_add(ws.high, -(top + 1)));
        wy.low = std::min(wy.low, r.n);
    }
    TensorSeries out(lie, 2, {wx, wy});
    for (const auto& [key, c] : r.g.coefficients())
        if (key.exps[0] < wx.high && key.exps[1] < wy.high) out.add_coefficient(key, c);
    for (long k = 0; k <= top; ++k)
        for (const auto& [e, c] : r.s.coefficients()) {
            const long p = e[0] - k - 1;
            if (c == 0 || p >= wx.high) continue;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    if (omega.at(i, j) != 0)
                        out.add_coefficient({{i, j}, {p, r.n + k}}, c * omega.at(i, j));
        }
    return out;
}

NSSeries lift_projection(const TensorSeries& p, long n, long target_y_high) {
    if (p.arity() != 2 || !p.algebra())
        throw DomainError("lift_projection expects a two-leg tensor series over an algebra");
    if (n < 0) throw DomainError("lift_projection: n must be nonnegative");
    const LiePtr lie = p.algebra();
    const std::size_t d = lie->dim();
    const QMatrix& kappa = lie->killing();
    const QMatrix omega = casimir_tensor(*lie);
    const VarWindow wx = p.window()[0], wy = p.window()[1];
    if (wy.high >= kDegreeInf)
        throw DomainError("lift_projection: the y window must be finite");
    if (wx.high < 0)
        throw WindowError("lift_projection: the x window must reach degree -1", 0);
    const long s_high = wy.high - n;
    if (s_high <= 0)
        throw WindowError("lift_projection: y window too small to read the unit part", n + 1);
    // Unit part from the x^{-1} column: the cell (-1, n+t) holds s_t Omega.
    ScalarSeries s({"x"}, {VarWindow{0, s_high}});
    {
        std::map<long, Rational> acc;
        for (const auto& [key, c] : p.coefficients()) {
            if (key.exps[0] != -1 || key.exps[1] < n) continue;
            acc[key.exps[1] - n] += c * kappa.at(key.legs[0], key.legs[1]);
        }
        for (const auto& [t, v] : acc)
            if (t < s_high && v != 0) s.set_coefficient({t}, v / static_cast<long>(d));
    }
    // Split the certified region between the unit-part reach in y and the
    // regular part's x-degrees: the cell (q, n+k) of the regular part needs
    // s_{q+k+1}, so x-degrees below s_high - (y_part - 1) - 1 survive.
    long y_part = target_y_high < 0 ? s_high - s_high / 2 : target_y_high - n;
    y_part = std::min(y_part, s_high);
    if (y_part < 0) y_part = 0;
    const long gx_high = std::min(wx.high, s_high - y_part);
    const long gy_high = n + y_part;
    if (gx_high <= 0)
        throw WindowError("lift_projection: the regular part has an empty window under this split",
                          wy.high + 1);
    // Remainder after removing the Omega stripes; everything left in negative
    // x-degrees must cancel exactly.
    std::map<TensorKey, Rational> rem;
    for (const auto& [key, c] : p.coefficients()) rem[key] = c;
    for (long k = 0; k + n < wy.high; ++k)
        for (const auto& [e, c] : s.coefficients()) {
            const long q = e[0] - k - 1;
            const bool needed = q < 0 || (q < gx_high && n + k < gy_high);
            if (c == 0 || !needed) continue;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    if (omega.at(i, j) != 0) rem[{{i, j}, {q, n + k}}] -= c * omega.at(i, j);
        }
    NSSeries out;
    out.n = n;
    out.s = std::move(s);
    out.g = TensorSeries(lie, 2,
                         {VarWindow{std::max<long>(wx.low, 0), gx_high},
                          VarWindow{std::max<long>(wy.low, 0), gy_high}});
    for (const auto& [key, c] : rem) {
        if (c == 0) continue;
        if (key.exps[0] < 0)
            throw DomainError("lift_projection: the singular part is not an Omega stripe family "
                              "for this n");
        if (key.exps[0] < gx_high && key.exps[1] < gy_high) out.g.add_coefficient(key, c);
    }
    out.validate();
    return out;
}

std::vector<std::vector<Rational>> table_rows(const TruncatedModel& model,
                                              const CoefficientTable& table) {
    std::vector<std::vector<Rational>> out;
    for (const auto& row : table.rows)
        for (const auto& u : row) {
            LnElement v = u;
            const VarWindow w = v.laurent.window()[0];
            v.laurent.shrink_window({VarWindow{w.low, std::min(w.high, model.K)}});
            out.push_back(model.coordinates(v));
        }
    return out;
}

std::vector<std::vector<Rational>> reconstruct_rows(const TruncatedModel& model,
                                                    const ScalarSeries& s,
                                                    const std::vector<std::vector<Rational>>& rows,
                                                    long k_max) {
    if (k_max < 0) throw DomainError("reconstruct_rows: k_max must be nonnegative");
    const std::size_t d = model.g->dim();
    const std::size_t dim = model.dim();
    QMatrix stacked = QMatrix::from_rows(rows);
    for (const auto& dr : model.delta_rows()) stacked.append_row(dr);
    if (stacked.cols() != dim) throw DomainError("reconstruct_rows: row length mismatch");
    const QMatrix a = transpose(stacked);
    QMatrix targets(dim, static_cast<std::size_t>(k_max) * d);
    for (long k = 0; k < k_max; ++k)
        for (std::size_t i = 0; i < d; ++i) {
            LnElement u = scaled_w(model.g, model.alpha.n, s, k, i);
            const VarWindow w = u.laurent.window()[0];
            u.laurent.shrink_window({VarWindow{w.low, std::min(w.high, model.K)}});
            const std::vector<Rational> t = model.coordinates(u);
            for (std::size_t rr = 0; rr < dim; ++rr)
                targets.at(rr, static_cast<std::size_t>(k) * d + i) = t[rr];
        }
    const auto sol = solve_columns(a, targets);
    if (!sol) throw DomainError("reconstruct_rows: a generator lies outside the span");
    std::vector<std::vector<Rational>> out;
    for (long k = 0; k < k_max; ++k)
        for (std::size_t i = 0; i < d; ++i) {
            std::vector<Rational> rec(dim, Rational(0));
            for (std::size_t c = 0; c < rows.size(); ++c) {
                const Rational& z = sol->at(c, static_cast<std::size_t>(k) * d + i);
                if (z == 0) continue;
                for (std::size_t rr = 0; rr < dim; ++rr) rec[rr] += z * rows[c][rr];
            }
            out.push_back(std::move(rec));
        }
    return out;
}

}  // namespace nslab
