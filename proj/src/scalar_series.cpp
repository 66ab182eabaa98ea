#include "nslab/scalar_series.hpp"

#include "nslab/error.hpp"

#include <algorithm>
#include <sstream>

namespace nslab {

namespace {

void require_same_vars(const ScalarSeries& a, const ScalarSeries& b) {
    if (a.vars() != b.vars())
        throw DomainError("series variable lists differ: (" + a.to_string() + ") vs (" +
                          b.to_string() + ")");
}

void require_univariate(const ScalarSeries& a, const char* op) {
    if (a.nvars() != 1) throw DomainError(std::string(op) + " expects a univariate series");
}

bool inside(const Window& w, const Exponents& e) {
    for (std::size_t v = 0; v < w.size(); ++v)
        if (e[v] < w[v].low || e[v] >= w[v].high) return false;
    return true;
}

}  // namespace

ScalarSeries::ScalarSeries(std::vector<std::string> vars, Window window)
    : vars_(std::move(vars)), window_(std::move(window)) {
    if (vars_.size() != window_.size())
        throw DomainError("window size does not match variable count");
}

ScalarSeries ScalarSeries::zero(std::vector<std::string> vars) {
    Window w(vars.size(), VarWindow{0, kDegreeInf});
    return ScalarSeries(std::move(vars), std::move(w));
}

ScalarSeries ScalarSeries::constant(std::vector<std::string> vars, const Rational& c) {
    ScalarSeries s = zero(std::move(vars));
    if (c != 0) s.coeff_[Exponents(s.nvars(), 0)] = c;
    return s;
}

ScalarSeries ScalarSeries::monomial(std::vector<std::string> vars, Exponents e, const Rational& c) {
    ScalarSeries s = zero(std::move(vars));
    if (e.size() != s.nvars()) throw DomainError("monomial exponent arity mismatch");
    for (std::size_t v = 0; v < s.nvars(); ++v)
        s.window_[v].low = std::min<long>(0, e[v]);
    if (c != 0) s.coeff_[std::move(e)] = c;
    return s;
}

std::optional<Rational> ScalarSeries::coefficient(const Exponents& e) const {
    if (e.size() != nvars()) throw DomainError("coefficient query arity mismatch");
    for (std::size_t v = 0; v < nvars(); ++v) {
        if (e[v] < window_[v].low) return Rational(0);  // below support bound
        if (e[v] >= window_[v].high) return std::nullopt;
    }
    const auto it = coeff_.find(e);
    return it == coeff_.end() ? Rational(0) : it->second;
}

bool ScalarSeries::is_known(const Exponents& e) const {
    for (std::size_t v = 0; v < nvars(); ++v)
        if (e[v] >= window_[v].high) return false;
    return true;
}

void ScalarSeries::set_coefficient(const Exponents& e, const Rational& c) {
    if (e.size() != nvars()) throw DomainError("set_coefficient arity mismatch");
    for (std::size_t v = 0; v < nvars(); ++v) {
        if (e[v] >= window_[v].high)
            throw WindowError("set_coefficient outside the exactness window");
        window_[v].low = std::min(window_[v].low, e[v]);
    }
    if (c == 0)
        coeff_.erase(e);
    else
        coeff_[e] = c;
}

void ScalarSeries::add_coefficient(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto cur = coefficient(e);
    if (!cur) throw WindowError("add_coefficient outside the exactness window");
    set_coefficient(e, *cur + c);
}

bool ScalarSeries::is_zero_on_window() const {
    for (const auto& [e, c] : coeff_)
        if (c != 0) return false;
    return true;
}

std::optional<std::pair<Exponents, Rational>> ScalarSeries::first_nonzero() const {
    for (const auto& [e, c] : coeff_)
        if (c != 0) return std::make_pair(e, c);
    return std::nullopt;
}

void ScalarSeries::shrink_window(const Window& w) {
    if (w.size() != nvars()) throw DomainError("shrink_window arity mismatch");
    for (std::size_t v = 0; v < nvars(); ++v) {
        if (w[v].high > window_[v].high)
            throw WindowError("shrink_window cannot grow the exactness window");
        window_[v].high = w[v].high;
        window_[v].low = std::min(window_[v].low, w[v].low);
    }
    for (auto it = coeff_.begin(); it != coeff_.end();)
        it = inside(window_, it->first) ? std::next(it) : coeff_.erase(it);
}

ScalarSeries ScalarSeries::promoted(const std::vector<std::string>& new_vars) const {
    std::vector<long> pos(nvars());
    for (std::size_t v = 0; v < nvars(); ++v) {
        const auto it = std::find(new_vars.begin(), new_vars.end(), vars_[v]);
        if (it == new_vars.end())
            throw DomainError("promoted: variable '" + vars_[v] + "' missing from target list");
        pos[v] = it - new_vars.begin();
    }
    Window w(new_vars.size(), VarWindow{0, kDegreeInf});
    for (std::size_t v = 0; v < nvars(); ++v) w[pos[v]] = window_[v];
    ScalarSeries out(new_vars, std::move(w));
    for (const auto& [e, c] : coeff_) {
        Exponents ne(new_vars.size(), 0);
        for (std::size_t v = 0; v < nvars(); ++v) ne[pos[v]] = e[v];
        out.coeff_[std::move(ne)] = c;
    }
    return out;
}

ScalarSeries ScalarSeries::renamed(std::vector<std::string> new_vars) const {
    if (new_vars.size() != nvars()) throw DomainError("renamed: variable count mismatch");
    ScalarSeries out = *this;
    out.vars_ = std::move(new_vars);
    return out;
}

std::string ScalarSeries::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : coeff_) {
        if (c == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << rational_to_string(c) << ")";
        for (std::size_t v = 0; v < nvars(); ++v)
            if (e[v] != 0) os << "*" << vars_[v] << "^" << e[v];
    }
    if (first) os << "0";
    os << "  {";
    for (std::size_t v = 0; v < nvars(); ++v)
        os << vars_[v] << window_to_string(window_[v]) << (v + 1 < nvars() ? ", " : "");
    os << "}";
    return os.str();
}

ScalarSeries series_add(const ScalarSeries& a, const ScalarSeries& b) {
    require_same_vars(a, b);
    Window w(a.nvars());
    for (std::size_t v = 0; v < a.nvars(); ++v)
        w[v] = window_add(a.window()[v], b.window()[v]);
    ScalarSeries out(a.vars(), w);
    for (const auto& [e, c] : a.coefficients())
        if (inside(w, e)) out.add_coefficient(e, c);
    for (const auto& [e, c] : b.coefficients())
        if (inside(w, e)) out.add_coefficient(e, c);
    return out;
}

ScalarSeries series_sub(const ScalarSeries& a, const ScalarSeries& b) {
    return series_add(a, series_neg(b));
}

ScalarSeries series_neg(const ScalarSeries& a) {
    return series_scale(a, Rational(-1));
}

ScalarSeries series_scale(const ScalarSeries& a, const Rational& c) {
    ScalarSeries out(a.vars(), a.window());
    if (c == 0) return out;
    for (const auto& [e, v] : a.coefficients()) out.set_coefficient(e, v * c);
    return out;
}

ScalarSeries series_mul(const ScalarSeries& a, const ScalarSeries& b) {
    require_same_vars(a, b);
    Window w(a.nvars());
    for (std::size_t v = 0; v < a.nvars(); ++v)
        w[v] = window_mul(a.window()[v], b.window()[v]);
    ScalarSeries out(a.vars(), w);
    for (const auto& [ea, ca] : a.coefficients()) {
        if (ca == 0) continue;
        for (const auto& [eb, cb] : b.coefficients()) {
            if (cb == 0) continue;
            Exponents e(a.nvars());
            bool keep = true;
            for (std::size_t v = 0; v < a.nvars(); ++v) {
                e[v] = ea[v] + eb[v];
                if (e[v] >= w[v].high) { keep = false; break; }
            }
            if (keep) out.add_coefficient(e, ca * cb);
        }
    }
    return out;
}

std::optional<std::pair<Exponents, Rational>> series_diff_on_shared_window(
    const ScalarSeries& a, const ScalarSeries& b) {
    const ScalarSeries d = series_sub(a, b);
    for (const auto& [e, c] : d.coefficients())
        if (c != 0) return std::make_pair(e, c);
    return std::nullopt;
}

ScalarSeries series_invert(const ScalarSeries& a, long target_high) {
    require_univariate(a, "series_invert");
    if (target_high >= kDegreeInf)
        throw DomainError("series_invert: a finite target window is required");
    const VarWindow wa = a.window()[0];
    // Valuation: smallest certified nonzero degree.
    std::optional<long> val;
    for (const auto& [e, c] : a.coefficients())
        if (c != 0) { val = e[0]; break; }
    if (!val) {
        if (wa.high >= kDegreeInf)
            throw DomainError("series_invert: series is exactly zero");
        throw DomainError("series_invert: series vanishes through its window; not a certified unit");
    }
    const long v = *val;
    // Coefficients of the inverse at degree -v + m need a known through v + m.
    const long m_limit = (wa.high >= kDegreeInf) ? kDegreeInf : wa.high - v;
    const long want_m = target_high + v;  // result degrees [-v, target_high)
    if (want_m > m_limit)
        throw WindowError("series_invert: input window certifies the inverse only through degree " +
                              std::to_string(m_limit - v - 1) + ", need " +
                              std::to_string(target_high - 1),
                          want_m - m_limit + (wa.high >= kDegreeInf ? 0 : wa.high));
    const long M = want_m;  // number of output coefficients
    if (M <= 0) throw DomainError("series_invert: empty target window");
    // Unit part u_m = a_{v+m}.
    auto u = [&](long m) -> Rational {
        auto c = a.coefficient({v + m});
        return c ? *c : Rational(0);
    };
    const Rational u0 = u(0);
    std::vector<Rational> wcoef(static_cast<std::size_t>(M));
    wcoef[0] = Rational(1) / u0;
    for (long m = 1; m < M; ++m) {
        Rational acc = 0;
        for (long j = 1; j <= m; ++j) acc += u(j) * wcoef[static_cast<std::size_t>(m - j)];
        wcoef[static_cast<std::size_t>(m)] = -acc / u0;
    }
    ScalarSeries out(a.vars(), {VarWindow{-v, target_high}});
    for (long m = 0; m < M; ++m)
        if (wcoef[static_cast<std::size_t>(m)] != 0)
            out.set_coefficient({-v + m}, wcoef[static_cast<std::size_t>(m)]);
    return out;
}

Rational series_residue(const ScalarSeries& a) {
    require_univariate(a, "series_residue");
    if (a.window()[0].high <= -1)
        throw WindowError("series_residue: degree -1 is outside the exactness window", 0);
    auto c = a.coefficient({-1});
    return c ? *c : Rational(0);
}

ScalarSeries series_derivative(const ScalarSeries& a) {
    require_univariate(a, "series_derivative");
    const VarWindow wa = a.window()[0];
    // The degree-0 term differentiates to nothing, so a power series keeps a
    // nonnegative support bound.
    const long low = wa.low >= 0 ? std::max<long>(wa.low - 1, 0) : sat_add(wa.low, -1);
    VarWindow w{low, wa.high >= kDegreeInf ? kDegreeInf : wa.high - 1};
    ScalarSeries out(a.vars(), {w});
    for (const auto& [e, c] : a.coefficients()) {
        if (e[0] == 0) continue;
        if (e[0] - 1 >= w.high) continue;
        out.add_coefficient({e[0] - 1}, c * e[0]);
    }
    return out;
}

ScalarSeries series_compose(const ScalarSeries& f, const ScalarSeries& phi_in,
                            long target_high) {
    require_univariate(f, "series_compose");
    require_univariate(phi_in, "series_compose");
    const ScalarSeries phi = phi_in.renamed(f.vars());
    const VarWindow wf = f.window()[0];
    const VarWindow wp = phi.window()[0];
    if (wp.low < 0) throw DomainError("series_compose: phi must be a power series");
    if (wp.high <= 0) throw WindowError("series_compose: phi window is empty");
    if (auto c0 = phi.coefficient({0}); c0 && *c0 != 0)
        throw DomainError("series_compose: phi(0) != 0");
    auto c1 = phi.coefficient({1});
    // Effective valuation of f: uncertified degrees of f start at wf.high, and
    // certified degrees below the first stored nonzero contribute nothing.
    long eff_low = wf.high;
    if (auto fn = f.first_nonzero()) eff_low = fn->first[0];
    if (eff_low >= wf.high) {
        // f is certified zero on its whole window.
        if (wf.high >= kDegreeInf) return ScalarSeries::zero(f.vars());
        if (wf.high < 0)
            throw WindowError("series_compose: f certified only as zero through a negative degree");
        return ScalarSeries(f.vars(), {VarWindow{wf.high, wf.high}});
    }
    const bool f_has_pole = eff_low < 0;
    if (f_has_pole) {
        if (!c1) throw WindowError("series_compose: phi's linear coefficient is uncertified");
        if (*c1 == 0)
            throw DomainError("series_compose: phi'(0) = 0 but f has negative powers");
    }
    // Result degree m is exact iff m < wf.high and m < (wp.high - 1) + val(f).
    const long hi =
        std::min({wf.high, sat_add(sat_add(wp.high, -1), eff_low), target_high});
    if (hi <= eff_low) throw WindowError("series_compose: certified result window is empty");
    if (hi >= kDegreeInf && f_has_pole)
        throw DomainError(
            "series_compose: f has negative powers and all inputs are fully exact; "
            "pass a finite target window");
    const VarWindow wout{eff_low, hi};

    auto truncated = [&](ScalarSeries s) {
        VarWindow w = s.window()[0];
        w.high = std::min(w.high, wout.high);
        s.shrink_window({w});
        return s;
    };

    ScalarSeries result(f.vars(), {wout});
    // Positive part: sum f_e * phi^e for e >= max(0, wf.low), via Horner from
    // the top used degree downward.
    {
        long top = std::min(wout.high - 1, wf.high >= kDegreeInf ? -1 : wf.high - 1);
        if (wf.high >= kDegreeInf) {
            top = -1;  // fully exact f: only its finite support matters
            for (const auto& [e, c] : f.coefficients())
                if (c != 0) top = std::max(top, e[0]);
            top = std::min(top, wout.high >= kDegreeInf ? top : wout.high - 1);
        }
        ScalarSeries acc = truncated(ScalarSeries::zero(f.vars()));
        for (long e = top; e >= 0; --e) {
            acc = truncated(series_mul(acc, phi));
            auto fe = f.coefficient({e});
            if (fe && *fe != 0)
                acc = series_add(acc, truncated(ScalarSeries::constant(f.vars(), *fe)));
        }
        result = series_add(result, acc);
    }
    // Negative part: f_{-k} * (phi^{-1})^k for 1 <= k <= -val(f).
    if (f_has_pole) {
        const long kmax = -eff_low;
        // Need phi^{-1} exact through enough degrees: phi^{-k} has valuation
        // -k; its coefficients through wout.high require inv exact through
        // wout.high + k - 1 - (-(k-1))... compute generously to target.
        const long inv_target = sat_add(wout.high, kmax);
        ScalarSeries inv = series_invert(phi, std::min(inv_target, sat_add(sat_add(wp.high, -1), -1)));
        ScalarSeries power = ScalarSeries::constant(f.vars(), Rational(1));
        for (long k = 1; k <= kmax; ++k) {
            power = series_mul(power, inv);
            {
                // Keep headroom for the remaining multiplications: each later
                // factor has valuation -1 and eats one certified degree.
                VarWindow w = power.window()[0];
                w.high = std::min(w.high, sat_add(wout.high, kmax - k));
                power.shrink_window({w});
            }
            auto fe = f.coefficient({-k});
            if (fe && *fe != 0) result = series_add(result, series_scale(power, *fe));
        }
    }
    {
        Window w = result.window();
        w[0].high = std::min(w[0].high, wout.high);
        w[0].low = std::min(w[0].low, wout.low);
        result.shrink_window(w);
    }
    return result;
}

ScalarSeries series_compositional_inverse(const ScalarSeries& phi, long order) {
    require_univariate(phi, "series_compositional_inverse");
    const VarWindow wp = phi.window()[0];
    if (wp.low < 0) throw DomainError("series_compositional_inverse: phi must be a power series");
    if (auto c0 = phi.coefficient({0}); c0 && *c0 != 0)
        throw DomainError("series_compositional_inverse: phi(0) != 0");
    auto c1 = phi.coefficient({1});
    if (!c1) throw WindowError("series_compositional_inverse: linear coefficient uncertified");
    if (*c1 == 0) throw DomainError("series_compositional_inverse: phi'(0) = 0");
    // psi_m depends on phi coefficients through degree m.
    const long hi = std::min(order + 1, wp.high);
    if (hi <= 1)
        throw WindowError("series_compositional_inverse: certified result window is empty");
    ScalarSeries psi(phi.vars(), {VarWindow{1, hi}});
    psi.set_coefficient({1}, Rational(1) / *c1);
    for (long m = 2; m < hi; ++m) {
        // phi(psi) = x + r_m x^m + O(x^{m+1}); correct with psi_m = -r_m / c1.
        ScalarSeries probe = psi;
        {
            Window w = probe.window();
            w[0].high = m + 1;
            probe.shrink_window(w);
        }
        ScalarSeries comp = series_compose(phi, probe);
        auto rm = comp.coefficient({m});
        if (!rm) throw WindowError("series_compositional_inverse: internal window shortfall");
        if (*rm != 0) psi.set_coefficient({m}, -*rm / *c1);
    }
    return psi;
}

ScalarSeries diagonal_restriction(const ScalarSeries& h, const std::string& diag_var) {
    if (h.nvars() != 2) throw DomainError("diagonal_restriction expects a bivariate series");
    const VarWindow wx = h.window()[0], wy = h.window()[1];
    ScalarSeries out({diag_var}, {window_mul(wx, wy)});
    for (const auto& [e, c] : h.coefficients()) {
        const long m = e[0] + e[1];
        if (m < out.window()[0].high) out.add_coefficient({m}, c);
    }
    return out;
}

ScalarSeries divide_by_diag(const ScalarSeries& h, long target_y_high) {
    if (h.nvars() != 2) throw DomainError("divide_by_diag expects a bivariate series");
    const VarWindow wx = h.window()[0], wy = h.window()[1];
    if (wx.low < 0 || wy.low < 0)
        throw DomainError("divide_by_diag expects power-series variables");
    // Diagonal must vanish wherever it is certified.
    {
        const ScalarSeries diag = diagonal_restriction(h, h.vars()[1]);
        if (auto nz = diag.first_nonzero())
            throw DomainError("divide_by_diag: h does not vanish on the diagonal (z^" +
                              std::to_string(nz->first[0]) + " coefficient " +
                              rational_to_string(nz->second) + ")");
    }
    // Substitution x = y + t:  H(t,y) = sum_{p,q} h_{p,q} sum_j C(p,j) t^j y^{p-j+q}.
    // H_{j,m} is certified iff every contributing (p,q) = (j+m-q', q') stays
    // inside h's window, i.e. j + m < wx.high + wy.low and m < wy.high + wx.low
    // (triangular in j+m).
    const long diag_high = std::min(sat_add(wx.high, wy.low), sat_add(wy.high, wx.low));
    std::map<Exponents, Rational> H;  // key (j, m)
    for (const auto& [e, c] : h.coefficients()) {
        const long p = e[0], q = e[1];
        for (long j = 0; j <= p; ++j) {
            const long m = p - j + q;
            if (sat_add(j, m) >= diag_high) continue;
            const Rational term = c * Rational(binomial(p, j));
            if (term != 0) H[{j, m}] += term;
        }
    }
    // Exact division by t: row j = 0 is the diagonal restriction, already
    // checked to vanish on its certified range.
    // Back-substitution t = x - y:  t^{j} y^{m} -> sum_i C(j,i) (-1)^{j-i} x^i y^{j-i+m},
    // with j now j-1 after the shift.  The result coefficient at (a,b) uses
    // H rows with (j-1) + m = a + b + 1 - ... all contributions have
    // (j + m) - 1 = a + b, so the certified output region is a + b < diag_high - 1.
    const long tri_high = std::max<long>(sat_add(diag_high, -1), 0);
    const long out_y_high = std::min(target_y_high, tri_high);
    const long out_x_high =
        tri_high >= kDegreeInf ? kDegreeInf : std::max<long>(tri_high - out_y_high, 0);
    ScalarSeries out(h.vars(), {VarWindow{0, out_x_high}, VarWindow{0, out_y_high}});
    if (out_x_high <= 0 || out_y_high <= 0)
        throw WindowError("divide_by_diag: certified result window is empty", diag_high);
    for (const auto& [jm, c] : H) {
        const long j = jm[0] - 1, m = jm[1];
        if (j < 0 || c == 0) continue;
        for (long i = 0; i <= j; ++i) {
            const long a = i, b = j - i + m;
            if (a >= out_x_high || b >= out_y_high) continue;
            Rational term = c * Rational(binomial(j, i));
            if ((j - i) % 2 != 0) term = -term;
            if (term != 0) out.add_coefficient({a, b}, term);
        }
    }
    return out;
}

}  // namespace nslab
