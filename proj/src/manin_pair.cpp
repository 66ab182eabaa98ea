#include "nslab/manin_pair.hpp"

#include <nlohmann/json.hpp>

#include "nslab/error.hpp"

namespace nslab {

namespace {
using nlohmann::json;
}

void AlphaData::validate() const {
    if (n < 0) throw DomainError("AlphaData: n must be nonnegative");
    for (const auto& [i, c] : alpha) {
        (void)c;
        if (i > n - 2)
            throw DomainError("AlphaData: index " + std::to_string(i) +
                              " exceeds the largest admissible index " + std::to_string(n - 2));
    }
}

Rational AlphaData::coefficient_at_exponent(long e) const {
    if (e == -n) return 1;
    const long i = -(e + 1);  // exponent of alpha_i is -(i+1)
    auto it = alpha.find(i);
    return it == alpha.end() ? Rational(0) : it->second;
}

ScalarSeries AlphaData::alpha_series(const std::string& var) const {
    validate();
    ScalarSeries s({var}, {VarWindow{-n, kDegreeInf}});
    s.set_coefficient({-n}, 1);
    for (const auto& [i, c] : alpha) s.add_coefficient({-(i + 1)}, c);
    return s;
}

ScalarSeries AlphaData::unit_series(const std::string& var) const {
    validate();
    ScalarSeries s({var}, {VarWindow{0, kDegreeInf}});
    s.set_coefficient({0}, 1);
    for (const auto& [i, c] : alpha) s.add_coefficient({n - (i + 1)}, c);
    return s;
}

ScalarSeries AlphaData::s_series(long target_high, const std::string& var) const {
    return series_invert(unit_series(var), target_high);
}

AlphaData alpha_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("alpha JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
        throw ParseError("alpha JSON: expected an object with an integer field \"n\"");
    AlphaData a;
    a.n = j["n"].get<long>();
    if (j.contains("alpha")) {
        if (!j["alpha"].is_object()) throw ParseError("alpha JSON: \"alpha\" must be an object");
        for (const auto& [key, val] : j["alpha"].items()) {
            long idx = 0;
            try {
                std::size_t pos = 0;
                idx = std::stol(key, &pos);
                if (pos != key.size()) throw std::invalid_argument(key);
            } catch (const std::exception&) {
                throw ParseError("alpha JSON: bad index \"" + key + "\"");
            }
            if (!val.is_string()) throw ParseError("alpha JSON: coefficients must be strings");
            const Rational c = parse_rational(val.get<std::string>());
            if (c != 0) a.alpha[idx] = c;
        }
    }
    try {
        a.validate();
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return a;
}

std::string alpha_to_json_text(const AlphaData& a) {
    json j;
    j["n"] = a.n;
    j["alpha"] = json::object();
    for (const auto& [i, c] : a.alpha) j["alpha"][std::to_string(i)] = rational_to_string(c);
    return j.dump();
}

LnElement ln_zero(LiePtr g, long n) {
    if (n < 0) throw DomainError("ln_zero: n must be nonnegative");
    LnElement u;
    u.n = n;
    u.laurent = TensorSeries(g, 1);
    u.poly.assign(static_cast<std::size_t>(n), std::vector<Rational>(g->dim(), Rational(0)));
    return u;
}

LnElement ln_laurent_monomial(LiePtr g, long n, std::size_t i, long k) {
    LnElement u = ln_zero(std::move(g), n);
    u.laurent.set_coefficient({{i}, {k}}, 1);
    return u;
}

LnElement ln_class_monomial(LiePtr g, long n, std::size_t i, long m) {
    LnElement u = ln_zero(std::move(g), n);
    if (m < 0 || m >= n) throw DomainError("ln_class_monomial: degree outside the quotient");
    u.poly[m][i] = 1;
    return u;
}

LnElement ln_diagonal(LiePtr g, long n, std::size_t i, long k) {
    if (k < 0) throw DomainError("ln_diagonal: exponent must be nonnegative");
    LnElement u = ln_laurent_monomial(std::move(g), n, i, k);
    if (k < n) u.poly[k][i] = 1;
    return u;
}

LnElement ln_add(const LnElement& u, const LnElement& v) {
    if (u.n != v.n) throw DomainError("ln_add: mixed quotient sizes");
    LnElement out;
    out.n = u.n;
    out.laurent = tensor_add(u.laurent, v.laurent);
    out.poly = u.poly;
    for (std::size_t m = 0; m < out.poly.size(); ++m)
        for (std::size_t i = 0; i < out.poly[m].size(); ++i) out.poly[m][i] += v.poly[m][i];
    return out;
}

LnElement ln_scale(const LnElement& u, const Rational& c) {
    LnElement out = u;
    out.laurent = tensor_scale(u.laurent, c);
    for (auto& row : out.poly)
        for (auto& x : row) x *= c;
    return out;
}

LnElement ln_bracket(const LnElement& u, const LnElement& v) {
    if (u.n != v.n) throw DomainError("ln_bracket: mixed quotient sizes");
    const LieAlgebraData& g = *u.laurent.algebra();
    LnElement out = ln_zero(u.laurent.algebra(), u.n);
    // Laurent slot: degree-wise convolution with the bracket on coefficients.
    {
        const VarWindow w = window_mul(u.laurent.window()[0], v.laurent.window()[0]);
        TensorSeries lb(u.laurent.algebra(), 1, {w});
        for (const auto& [ku, cu] : u.laurent.coefficients())
            for (const auto& [kv, cv] : v.laurent.coefficients()) {
                const long e = ku.exps[0] + kv.exps[0];
                if (e >= w.high) continue;
                for (std::size_t m = 0; m < g.dim(); ++m) {
                    const Rational& s = g.structure(ku.legs[0], kv.legs[0], m);
                    if (s != 0) lb.add_coefficient({{m}, {e}}, cu * cv * s);
                }
            }
        out.laurent = lb;
    }
    // Quotient slot: polynomial bracket truncated below degree n.
    for (long a = 0; a < u.n; ++a)
        for (long b = 0; a + b < u.n; ++b) {
            auto br = g.bracket(u.poly[a], v.poly[b]);
            for (std::size_t i = 0; i < br.size(); ++i) out.poly[a + b][i] += br[i];
        }
    return out;
}

Rational functional_t(const AlphaData& a, const ScalarSeries& f, const std::vector<Rational>& p) {
    if (f.nvars() != 1) throw DomainError("functional_t expects a univariate series");
    if (static_cast<long>(p.size()) != a.n) throw DomainError("functional_t: class size mismatch");
    // Unknown coefficients of f start at window high; they escape the residue
    // only if alpha has no support reaching them: need high >= n.
    if (f.window()[0].high < a.n)
        throw WindowError("functional_t: window too short for the residue", a.n);
    Rational res = 0;
    for (const auto& [e, c] : f.coefficients()) res += c * a.coefficient_at_exponent(-1 - e[0]);
    for (long m = 0; m < a.n; ++m) res -= p[m] * a.coefficient_at_exponent(-1 - m);
    return res;
}

namespace {

// kappa-contracted scalar product pair of two elements: (fg, [pq]).
std::pair<ScalarSeries, std::vector<Rational>> scalar_product_pair(const LnElement& u,
                                                                   const LnElement& v) {
    if (u.n != v.n) throw DomainError("form_B: mixed quotient sizes");
    if (u.laurent.algebra().get() != v.laurent.algebra().get())
        throw DomainError("form_B: different algebras");
    const LieAlgebraData& g = *u.laurent.algebra();
    const VarWindow w = window_mul(u.laurent.window()[0], v.laurent.window()[0]);
    ScalarSeries prod(std::vector<std::string>{"x"}, {w});
    for (const auto& [ku, cu] : u.laurent.coefficients())
        for (const auto& [kv, cv] : v.laurent.coefficients()) {
            const long e = ku.exps[0] + kv.exps[0];
            if (e >= w.high) continue;
            const Rational k = g.killing().at(ku.legs[0], kv.legs[0]);
            if (k != 0) prod.add_coefficient({e}, cu * cv * k);
        }
    std::vector<Rational> classes(static_cast<std::size_t>(u.n), Rational(0));
    for (long x = 0; x < u.n; ++x)
        for (long y = 0; x + y < u.n; ++y) {
            Rational s = 0;
            for (std::size_t i = 0; i < g.dim(); ++i) {
                if (u.poly[x][i] == 0) continue;
                for (std::size_t j = 0; j < g.dim(); ++j)
                    if (v.poly[y][j] != 0) s += u.poly[x][i] * v.poly[y][j] * g.killing().at(i, j);
            }
            classes[x + y] += s;
        }
    return {prod, classes};
}

}  // namespace

Rational form_B(const AlphaData& a, const LnElement& u, const LnElement& v) {
    if (u.n != a.n) throw DomainError("form_B: element and alpha disagree on n");
    auto [prod, classes] = scalar_product_pair(u, v);
    return functional_t(a, prod, classes);
}

Rational invariance_check(const AlphaData& a, const LnElement& u, const LnElement& v,
                          const LnElement& w) {
    return form_B(a, ln_bracket(u, v), w) - form_B(a, u, ln_bracket(v, w));
}

TensorSeries form_B_extended(const AlphaData& a, const Ln2Element& u, const LnElement& v) {
    if (u.n != a.n || v.n != a.n) throw DomainError("form_B_extended: n mismatch");
    LiePtr g = v.laurent.algebra();
    if (u.laurent.algebra().get() != g.get() || u.quotient.algebra().get() != g.get())
        throw DomainError("form_B_extended: different algebras");
    if (u.laurent.arity() != 2 || u.quotient.arity() != 2)
        throw DomainError("form_B_extended: expected arity-2 carriers");
    const QMatrix& kappa = g->killing();

    // Laurent x Laurent contribution: residues against alpha.
    const VarWindow wx = window_mul(u.laurent.window()[0], v.laurent.window()[0]);
    if (wx.high < a.n)
        throw WindowError("form_B_extended: x-window too short for the residue", a.n);
    const VarWindow wy = window_add(u.laurent.window()[1], u.quotient.window()[1]);
    TensorSeries out(g, 1, {wy});
    for (const auto& [ku, cu] : u.laurent.coefficients()) {
        if (ku.exps[1] >= wy.high) continue;
        for (const auto& [kv, cv] : v.laurent.coefficients()) {
            const Rational k = kappa.at(ku.legs[0], kv.legs[0]);
            if (k == 0) continue;
            const Rational al = a.coefficient_at_exponent(-1 - ku.exps[0] - kv.exps[0]);
            if (al == 0) continue;
            out.add_coefficient({{ku.legs[1]}, {ku.exps[1]}}, cu * cv * k * al);
        }
    }
    // Class x class contribution enters with the opposite sign.
    for (const auto& [ku, cu] : u.quotient.coefficients()) {
        if (ku.exps[1] >= wy.high) continue;
        if (ku.exps[0] < 0 || ku.exps[0] >= a.n)
            throw DomainError("form_B_extended: quotient exponent outside the class range");
        for (long m = 0; m < a.n; ++m) {
            const Rational al = a.coefficient_at_exponent(-1 - ku.exps[0] - m);
            if (al == 0) continue;
            for (std::size_t j = 0; j < g->dim(); ++j) {
                if (v.poly[m][j] == 0) continue;
                const Rational k = kappa.at(ku.legs[0], j);
                if (k != 0)
                    out.add_coefficient({{ku.legs[1]}, {ku.exps[1]}},
                                        -cu * v.poly[m][j] * k * al);
            }
        }
    }
    return out;
}

Rational form_B_extended(const AlphaData& a, const LnElement& u, const LnElement& v) {
    return form_B(a, u, v);
}

std::size_t TruncatedModel::dim() const {
    return g->dim() * static_cast<std::size_t>(2 * K + alpha.n);
}

std::size_t TruncatedModel::laurent_index(long j, std::size_t i) const {
    if (j < -K || j >= K) throw DomainError("laurent_index out of range");
    return static_cast<std::size_t>(j + K) * g->dim() + i;
}

std::size_t TruncatedModel::class_index(long m, std::size_t i) const {
    if (m < 0 || m >= alpha.n) throw DomainError("class_index out of range");
    return static_cast<std::size_t>(2 * K + m) * g->dim() + i;
}

std::vector<Rational> TruncatedModel::coordinates(const LnElement& u) const {
    if (u.n != alpha.n) throw DomainError("coordinates: quotient size mismatch");
    if (u.laurent.window()[0].high < K)
        throw WindowError("coordinates: element window does not reach the model degree", K);
    std::vector<Rational> v(dim(), Rational(0));
    for (const auto& [k, c] : u.laurent.coefficients()) {
        if (c == 0) continue;
        if (k.exps[0] < -K || k.exps[0] >= K)
            throw WindowError("coordinates: support outside the model window");
        v[laurent_index(k.exps[0], k.legs[0])] = c;
    }
    for (long m = 0; m < alpha.n; ++m)
        for (std::size_t i = 0; i < g->dim(); ++i) v[class_index(m, i)] = u.poly[m][i];
    return v;
}

LnElement TruncatedModel::element_from_coordinates(const std::vector<Rational>& v) const {
    if (v.size() != dim()) throw DomainError("element_from_coordinates: size mismatch");
    LnElement u = ln_zero(g, alpha.n);
    for (long j = -K; j < K; ++j)
        for (std::size_t i = 0; i < g->dim(); ++i) {
            const Rational& c = v[laurent_index(j, i)];
            if (c != 0) u.laurent.set_coefficient({{i}, {j}}, c);
        }
    for (long m = 0; m < alpha.n; ++m)
        for (std::size_t i = 0; i < g->dim(); ++i) u.poly[m][i] = v[class_index(m, i)];
    return u;
}

std::vector<std::vector<Rational>> TruncatedModel::delta_rows() const {
    std::vector<std::vector<Rational>> rows;
    for (long j = 0; j < K; ++j)
        for (std::size_t i = 0; i < g->dim(); ++i)
            rows.push_back(coordinates(ln_diagonal(g, alpha.n, i, j)));
    return rows;
}

TruncatedModel build_truncated_model(const AlphaData& a, LiePtr g, long K) {
    a.validate();
    if (K < a.n + 1) throw DomainError("build_truncated_model: K must be at least n+1");
    TruncatedModel m;
    m.alpha = a;
    m.g = std::move(g);
    m.K = K;
    const std::size_t d = m.g->dim();
    m.gram = QMatrix(m.dim(), m.dim());
    const QMatrix& kappa = m.g->killing();
    // Laurent-Laurent block: kappa_ik alpha_{-1-j-l}; class-class block enters
    // with the opposite sign; mixed blocks vanish (products have a zero slot).
    for (long j = -K; j < K; ++j)
        for (long l = -K; l < K; ++l) {
            const Rational al = a.coefficient_at_exponent(-1 - j - l);
            if (al == 0) continue;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t k = 0; k < d; ++k)
                    if (kappa.at(i, k) != 0)
                        m.gram.at(m.laurent_index(j, i), m.laurent_index(l, k)) =
                            kappa.at(i, k) * al;
        }
    for (long x = 0; x < a.n; ++x)
        for (long y = 0; y < a.n; ++y) {
            const Rational al = a.coefficient_at_exponent(-1 - x - y);
            if (al == 0) continue;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t k = 0; k < d; ++k)
                    if (kappa.at(i, k) != 0)
                        m.gram.at(m.class_index(x, i), m.class_index(y, k)) =
                            -kappa.at(i, k) * al;
        }
    return m;
}

bool complementarity_rank(const TruncatedModel& model,
                          const std::vector<std::vector<Rational>>& w_rows) {
    const std::size_t d = model.g->dim();
    const std::size_t expect_w = d * static_cast<std::size_t>(model.K + model.alpha.n);
    QMatrix w;
    for (const auto& r : w_rows) {
        if (r.size() != model.dim()) throw DomainError("complementarity_rank: row size mismatch");
        w.append_row(r);
    }
    if (w.rows() == 0 || rank(w) != expect_w) return false;
    QMatrix stacked = w;
    for (const auto& r : model.delta_rows()) stacked.append_row(r);
    return rank(stacked) == model.dim();
}

NormalizingTransform solve_normalizing_transform(const AlphaData& a, long order) {
    a.validate();
    if (order < 2) throw DomainError("solve_normalizing_transform: order must be at least 2");
    const long n = a.n;
    Rational alpha0 = 0;
    if (auto it = a.alpha.find(0); it != a.alpha.end()) alpha0 = it->second;

    const ScalarSeries alpha = a.alpha_series();
    ScalarSeries beta({"x"}, {VarWindow{-n, kDegreeInf}});
    beta.set_coefficient({-n}, 1);
    if (alpha0 != 0) beta.add_coefficient({-1}, alpha0);

    // psi as an exact polynomial, refined degree by degree: the coefficient of
    // x^{m-n-1} in alpha(psi) psi' - beta is linear in psi_m with slope m - n.
    ScalarSeries psi = ScalarSeries::monomial({"x"}, {1}, 1);
    const long target = order - n + 1;
    for (long m = 2; m <= order; ++m) {
        ScalarSeries lhs =
            series_mul(series_compose(alpha, psi, target), series_derivative(psi));
        ScalarSeries residual = series_sub(lhs, beta);
        auto c = residual.coefficient({m - n - 1});
        if (!c) throw WindowError("solve_normalizing_transform: internal window shortfall");
        if (m == n) {
            if (*c != 0)
                throw DomainError(
                    "solve_normalizing_transform: degenerate recursion step (residue "
                    "constraint violated)");
            continue;  // gauge freedom at this order; keep psi_m = 0
        }
        if (*c != 0) psi.set_coefficient({m}, -*c / Rational(m - n));
    }
    // Final consistency across the full certified range.
    {
        ScalarSeries lhs =
            series_mul(series_compose(alpha, psi, target), series_derivative(psi));
        ScalarSeries residual = series_sub(lhs, beta);
        for (const auto& [e, c] : residual.coefficients())
            if (e[0] <= order - n - 1 && c != 0)
                throw DomainError("solve_normalizing_transform: recursion failed to close");
    }

    NormalizingTransform out;
    out.psi = ScalarSeries({"x"}, {VarWindow{1, order + 1}});
    for (const auto& [e, c] : psi.coefficients()) out.psi.set_coefficient(e, c);
    out.phi = series_compositional_inverse(out.psi, order);
    out.beta.n = n;
    if (alpha0 != 0 && n >= 2) out.beta.alpha[0] = alpha0;
    return out;
}

}  // namespace nslab
