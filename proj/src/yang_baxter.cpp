#include "nslab/yang_baxter.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "nslab/error.hpp"

namespace nslab {

namespace {

std::string key_to_string(const TensorKey& k) {
    std::ostringstream os;
    os << "legs(";
    for (std::size_t t = 0; t < k.legs.size(); ++t) os << (t ? "," : "") << k.legs[t];
    os << ") exps(";
    for (std::size_t t = 0; t < k.exps.size(); ++t) os << (t ? "," : "") << k.exps[t];
    os << ")";
    return os.str();
}

void require_same_algebra(const LiePtr& a, const LiePtr& b, const char* what) {
    if (!a || !b || a->name() != b->name() || a->dim() != b->dim())
        throw DomainError(std::string(what) + ": operands live over different algebras");
}

void require_projection(const TensorSeries& p, const char* what) {
    if (p.arity() != 2) throw DomainError(std::string(what) + ": expected an arity-2 expansion");
    if (!p.algebra()) throw DomainError(std::string(what) + ": expansion has no algebra");
}

// A g-valued polynomial in one variable: arity 1, exactly known, supported
// in nonnegative degrees.
void require_g_poly(const TensorSeries& a, const char* what) {
    if (a.arity() != 1)
        throw DomainError(std::string(what) + ": polynomial argument must have arity 1");
    if (a.window()[0].high < kDegreeInf)
        throw DomainError(std::string(what) + ": polynomial argument must be exactly known");
    for (const auto& [k, v] : a.coefficients())
        if (v != 0 && k.exps[0] < 0)
            throw DomainError(std::string(what) +
                              ": polynomial argument has a negative degree at " + key_to_string(k));
}

TensorSeries g_monomial(const LiePtr& lie, std::size_t i, long m) {
    TensorSeries t(lie, 1);
    t.set_coefficient(TensorKey{{i}, {m}}, Rational(1));
    return t;
}

// --- certified region of a double-commutator sum ---------------------------

struct Region {
    long a_low = 0;
    long a_high = 0;
    long b_low = 0;
    std::vector<long> b_high;
    long c_high = 0;

    bool certifies(long a, long b, long c) const {
        if (c < 0 || c >= c_high) return false;
        if (a < a_low || a >= a_high) return false;
        return b >= b_low && b < b_high[static_cast<std::size_t>(c)];
    }

    bool empty() const {
        if (c_high <= 0 || a_low >= a_high) return true;
        for (long h : b_high)
            if (h > b_low) return false;
        return true;
    }
};

Region make_region(const TensorSeries& P, const TensorSeries& Q) {
    const VarWindow px = P.window()[0];
    const VarWindow py = P.window()[1];
    const VarWindow qx = Q.window()[0];
    const VarWindow qy = Q.window()[1];

    Region rg;
    rg.c_high = std::min(py.high, qy.high);
    if (rg.c_high >= kDegreeInf)
        throw DomainError(
            "triple residual: expansions must have a finite x3-order (project first, or use "
            "the polynomial residual)");
    if (rg.c_high < 0) rg.c_high = 0;

    // Certified support floor of P, globally and per x3-slice: inside the
    // certified box a stored zero is an exact zero, so the least stored
    // nonzero degree is a genuine support bound up to the exactness bound.
    long floor_all = px.high;
    std::vector<long> floor_slice(static_cast<std::size_t>(std::max<long>(rg.c_high, 0)),
                                  px.high);
    for (const auto& [k, v] : P.coefficients()) {
        if (v == 0) continue;
        floor_all = std::min(floor_all, k.exps[0]);
        const long c = k.exps[1];
        if (c >= 0 && c < rg.c_high)
            floor_slice[static_cast<std::size_t>(c)] =
                std::min(floor_slice[static_cast<std::size_t>(c)], k.exps[0]);
    }

    rg.a_low = std::min(sat_add(px.low, px.low), px.low);
    rg.a_high = std::min(sat_add(px.high, floor_all), px.high);
    rg.b_low = std::min({0L, px.low, qx.low});
    rg.b_high.resize(static_cast<std::size_t>(std::max<long>(rg.c_high, 0)));
    for (long c = 0; c < rg.c_high; ++c) {
        const long f = floor_slice[static_cast<std::size_t>(c)];
        rg.b_high[static_cast<std::size_t>(c)] =
            std::min({py.high, sat_add(py.high, f), px.high, qx.high});
    }
    return rg;
}

enum class Mode { k12_13, k12_23, k13_23 };

// Accumulates the commutator of A placed on the first pair of legs and B on
// the second pair, merging the shared leg through the structure constants.
// rg == nullptr keeps every output key (exact inputs).
void accumulate(std::map<TensorKey, Rational>& out, const LieAlgebraData& g,
                const TensorSeries& A, const TensorSeries& B, Mode mode, const Region* rg) {
    const std::size_t dim = g.dim();
    TensorKey key;
    key.legs.assign(3, 0);
    key.exps.assign(3, 0);
    for (const auto& [ka, ca] : A.coefficients()) {
        if (ca == 0) continue;
        const std::size_t i = ka.legs[0];
        const std::size_t j = ka.legs[1];
        const long p = ka.exps[0];
        const long q = ka.exps[1];
        for (const auto& [kb, cb] : B.coefficients()) {
            if (cb == 0) continue;
            const std::size_t k = kb.legs[0];
            const std::size_t l = kb.legs[1];
            const long r = kb.exps[0];
            const long s = kb.exps[1];

            std::size_t bi = 0, bj = 0, slot = 0;
            switch (mode) {
                case Mode::k12_13:
                    bi = i; bj = k; slot = 0;
                    key.legs[1] = j; key.legs[2] = l;
                    key.exps[0] = sat_add(p, r); key.exps[1] = q; key.exps[2] = s;
                    break;
                case Mode::k12_23:
                    bi = j; bj = k; slot = 1;
                    key.legs[0] = i; key.legs[2] = l;
                    key.exps[0] = p; key.exps[1] = sat_add(q, r); key.exps[2] = s;
                    break;
                case Mode::k13_23:
                    bi = j; bj = l; slot = 2;
                    key.legs[0] = i; key.legs[1] = k;
                    key.exps[0] = p; key.exps[1] = r; key.exps[2] = sat_add(q, s);
                    break;
            }
            if (rg && !rg->certifies(key.exps[0], key.exps[1], key.exps[2])) continue;
            const Rational prod = ca * cb;
            for (std::size_t m = 0; m < dim; ++m) {
                const Rational& n = g.structure(bi, bj, m);
                if (n == 0) continue;
                key.legs[slot] = m;
                out[key] += prod * n;
            }
        }
    }
}

void drop_zeros(std::map<TensorKey, Rational>& m) {
    for (auto it = m.begin(); it != m.end();)
        it = (it->second == 0) ? m.erase(it) : std::next(it);
}

std::string box_to_string(const TensorSeries& t) {
    std::ostringstream os;
    for (std::size_t v = 0; v < t.window().size(); ++v)
        os << (v ? " " : "") << "x" << v + 1 << " " << window_to_string(t.window()[v]);
    return os.str();
}

TripleExpansion build_triple(const TensorSeries& P, const TensorSeries& Q, bool generalized) {
    require_projection(P, "triple residual");
    require_projection(Q, "triple residual");
    require_same_algebra(P.algebra(), Q.algebra(), "triple residual");

    Region rg = make_region(P, Q);
    if (rg.empty())
        throw WindowError(
            "triple residual: no coefficient is certifiable from the input windows (" +
                box_to_string(P) + " against " + box_to_string(Q) +
                "); enlarge the series windows",
            rg.c_high + 2);

    TripleExpansion t;
    t.lie = P.algebra();
    t.a_low = rg.a_low;
    t.a_high = rg.a_high;
    t.b_low = rg.b_low;
    t.b_high = rg.b_high;
    t.c_high = rg.c_high;
    {
        std::ostringstream os;
        os << (generalized ? "generalized" : "plain")
           << " double-commutator residual; first factor " << box_to_string(P);
        if (generalized) os << "; transpose-partner factor " << box_to_string(Q);
        t.provenance = os.str();
    }

    const LieAlgebraData& g = *P.algebra();
    accumulate(t.coeff, g, P, P, Mode::k12_13, &rg);
    accumulate(t.coeff, g, P, P, Mode::k12_23, &rg);
    accumulate(t.coeff, g, P, Q, Mode::k13_23, &rg);
    drop_zeros(t.coeff);
    return t;
}

}  // namespace

// --- TripleExpansion --------------------------------------------------------

bool TripleExpansion::certifies(long a, long b, long c) const {
    if (c < 0 || c >= c_high) return false;
    if (a < a_low || a >= a_high) return false;
    return b >= b_low && b < b_high[static_cast<std::size_t>(c)];
}

bool TripleExpansion::certifies(const TensorKey& k) const {
    if (k.exps.size() != 3) return false;
    return certifies(k.exps[0], k.exps[1], k.exps[2]);
}

std::optional<Rational> TripleExpansion::coefficient(const TensorKey& k) const {
    if (k.legs.size() != 3 || k.exps.size() != 3)
        throw DomainError("triple residual: coefficient key must have three legs");
    for (std::size_t l : k.legs)
        if (!lie || l >= lie->dim()) throw DomainError("triple residual: leg index out of range");
    if (!certifies(k)) return std::nullopt;
    auto it = coeff.find(k);
    return it == coeff.end() ? Rational(0) : it->second;
}

bool TripleExpansion::is_zero_on_certified() const {
    for (const auto& [k, v] : coeff)
        if (v != 0) return false;
    return true;
}

std::optional<std::pair<TensorKey, Rational>> TripleExpansion::first_certified_nonzero() const {
    for (const auto& [k, v] : coeff)
        if (v != 0) return std::make_pair(k, v);
    return std::nullopt;
}

long TripleExpansion::certified_count() const {
    if (a_high >= kDegreeInf || a_low <= -kDegreeInf) return kDegreeInf;
    const long width_a = std::max<long>(a_high - a_low, 0);
    long total = 0;
    for (long c = 0; c < c_high; ++c) {
        const long bh = b_high[static_cast<std::size_t>(c)];
        if (bh >= kDegreeInf || b_low <= -kDegreeInf) return kDegreeInf;
        const long width_b = std::max<long>(bh - b_low, 0);
        total = sat_add(total, width_a * width_b);
        if (total >= kDegreeInf) return kDegreeInf;
    }
    return total;
}

std::string TripleExpansion::region_to_string() const {
    auto bound = [](long v) -> std::string {
        if (v >= kDegreeInf) return "+inf";
        if (v <= -kDegreeInf) return "-inf";
        return std::to_string(v);
    };
    std::ostringstream os;
    os << "x1 [" << bound(a_low) << "," << bound(a_high) << ") x3 [0," << bound(c_high)
       << ") x2 [" << bound(b_low) << ", per-slice";
    for (long c = 0; c < c_high; ++c)
        os << " " << bound(b_high[static_cast<std::size_t>(c)]);
    os << ")";
    return os.str();
}

// --- residual builders ------------------------------------------------------

TripleExpansion cyb(const TensorSeries& P) { return build_triple(P, P, false); }

TripleExpansion gcyb(const TensorSeries& P, const TensorSeries& Q) {
    return build_triple(P, Q, true);
}

TripleExpansion cyb(const NSSeries& r, long y_high) {
    return cyb(project_first(r, y_high));
}

TripleExpansion gcyb(const NSSeries& r, long y_high) {
    TensorSeries P = project_first(r, y_high);
    TensorSeries Q = project_first(bar(r, y_high), y_high);
    return gcyb(P, Q);
}

std::optional<std::pair<TensorKey, Rational>> triple_diff_on_shared(const TripleExpansion& u,
                                                                    const TripleExpansion& v) {
    require_same_algebra(u.lie, v.lie, "residual difference");
    std::map<TensorKey, Rational> diff;
    for (const auto& [k, val] : u.coeff)
        if (v.certifies(k)) diff[k] += val;
    for (const auto& [k, val] : v.coeff)
        if (u.certifies(k)) diff[k] -= val;
    for (const auto& [k, val] : diff)
        if (val != 0) return std::make_pair(k, val);
    return std::nullopt;
}

// --- cobracket --------------------------------------------------------------

TensorSeries delta_of(const TensorSeries& P, const TensorSeries& a) {
    require_projection(P, "cobracket");
    require_g_poly(a, "cobracket");
    require_same_algebra(P.algebra(), a.algebra(), "cobracket");
    TensorSeries acc(P.algebra(), 2);
    for (const auto& [k, c] : a.coefficients()) {
        if (c == 0) continue;
        const std::size_t i = k.legs[0];
        const long m = k.exps[0];
        const ScalarSeries mono = ScalarSeries::monomial({"t"}, {m}, Rational(1));
        TensorSeries term = tensor_add(ad_action(P, 0, i, mono), ad_action(P, 1, i, mono));
        acc = tensor_add(acc, tensor_scale(term, -c));
    }
    return acc;
}

TensorSeries delta_of(const NSSeries& r, const TensorSeries& a, long y_high) {
    return delta_of(project_first(r, y_high), a);
}

TensorSeries taylor_part(const TensorSeries& t) {
    for (std::size_t v = 0; v < t.window().size(); ++v)
        if (t.window()[v].high < 0)
            throw WindowError("taylor restriction: exactness bound of variable " +
                                  std::to_string(v + 1) +
                                  " is negative, poles cannot be ruled out",
                              0);
    for (const auto& [k, val] : t.coefficients()) {
        if (val == 0) continue;
        for (long e : k.exps)
            if (e < 0)
                throw DomainError("pole residual at " + key_to_string(k) + " value " +
                                  rational_to_string(val));
    }
    // Rebuild with the support bounds raised to zero: shrink_window can only
    // widen a low, and the certified negative range was just asserted zero.
    TensorSeries out(t.algebra(), t.arity());
    Window w = t.window();
    for (auto& vw : w) vw.low = std::max<long>(vw.low, 0);
    out.shrink_window(w);
    for (const auto& [k, val] : t.coefficients()) {
        bool keep = true;
        for (long e : k.exps)
            if (e < 0) keep = false;
        if (keep) out.add_coefficient(k, val);
    }
    return out;
}

const TensorSeries& DeltaTable::entry(long m, std::size_t i) const {
    if (m < 0 || m > m_max)
        throw DomainError("cobracket table: generator degree " + std::to_string(m) +
                          " outside table depth " + std::to_string(m_max));
    if (!lie || i >= lie->dim())
        throw DomainError("cobracket table: basis index out of range");
    return entries[static_cast<std::size_t>(m)][i];
}

DeltaTable make_delta_table(const TensorSeries& P, long m_max) {
    require_projection(P, "cobracket table");
    if (m_max < 0) throw DomainError("cobracket table: depth must be nonnegative");
    DeltaTable t;
    t.lie = P.algebra();
    t.m_max = m_max;
    t.source_x_low = P.window()[0].low;
    t.entries.resize(static_cast<std::size_t>(m_max) + 1);
    for (long m = 0; m <= m_max; ++m) {
        auto& row = t.entries[static_cast<std::size_t>(m)];
        row.reserve(t.lie->dim());
        for (std::size_t i = 0; i < t.lie->dim(); ++i)
            row.push_back(taylor_part(delta_of(P, g_monomial(t.lie, i, m))));
    }
    return t;
}

DeltaTable make_delta_table(const NSSeries& r, long m_max, long y_high) {
    return make_delta_table(project_first(r, y_high), m_max);
}

TensorSeries delta_from_table(const DeltaTable& t, const TensorSeries& a) {
    require_g_poly(a, "tabulated cobracket");
    require_same_algebra(t.lie, a.algebra(), "tabulated cobracket");
    TensorSeries acc(t.lie, 2);
    for (const auto& [k, c] : a.coefficients()) {
        if (c == 0) continue;
        acc = tensor_add(acc, tensor_scale(t.entry(k.exps[0], k.legs[0]), c));
    }
    return acc;
}

TensorSeries apply_table_leg0(const DeltaTable& t, const TensorSeries& s) {
    if (s.arity() < 1) throw DomainError("table application: argument must have at least one leg");
    require_same_algebra(t.lie, s.algebra(), "table application");
    const std::size_t ar = s.arity();
    const long h0 = s.window()[0].high;

    // Generators beyond the certified first-leg degree h0 of s contribute
    // only at first-leg output degrees >= source_x_low + h0 or second-leg
    // output degrees >= h0; both bounds start the output windows.
    long w0_high = sat_add(t.source_x_low, h0);
    long w1_high = h0;

    std::map<TensorKey, Rational> out;
    for (const auto& [k, c] : s.coefficients()) {
        if (c == 0) continue;
        const long p = k.exps[0];
        if (p < 0)
            throw DomainError("table application: argument has a negative first-leg degree at " +
                              key_to_string(k));
        if (p > t.m_max)
            throw WindowError("table application: generator degree " + std::to_string(p) +
                                  " outruns the table depth " + std::to_string(t.m_max),
                              p);
        const TensorSeries& e = t.entry(p, k.legs[0]);
        w0_high = std::min(w0_high, e.window()[0].high);
        w1_high = std::min(w1_high, e.window()[1].high);
        for (const auto& [ek, ec] : e.coefficients()) {
            if (ec == 0) continue;
            TensorKey nk;
            nk.legs.reserve(ar + 1);
            nk.exps.reserve(ar + 1);
            nk.legs.push_back(ek.legs[0]);
            nk.legs.push_back(ek.legs[1]);
            nk.exps.push_back(ek.exps[0]);
            nk.exps.push_back(ek.exps[1]);
            for (std::size_t v = 1; v < ar; ++v) {
                nk.legs.push_back(k.legs[v]);
                nk.exps.push_back(k.exps[v]);
            }
            out[nk] += c * ec;
        }
    }

    Window w;
    w.push_back({0, w0_high});
    w.push_back({0, w1_high});
    for (std::size_t v = 1; v < ar; ++v) w.push_back(s.window()[v]);
    TensorSeries res(t.lie, ar + 1, w);
    for (const auto& [k, v] : out) {
        if (v == 0) continue;
        bool inside = true;
        for (std::size_t d = 0; d < k.exps.size(); ++d)
            if (k.exps[d] >= w[d].high) inside = false;
        if (inside) res.add_coefficient(k, v);
    }
    return res;
}

TensorSeries alt_signed(const TensorSeries& t) {
    const std::size_t ar = t.arity();
    std::vector<std::size_t> perm(ar);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    TensorSeries acc(t.algebra(), ar);
    do {
        int inversions = 0;
        for (std::size_t u = 0; u < ar; ++u)
            for (std::size_t v = u + 1; v < ar; ++v)
                if (perm[u] > perm[v]) ++inversions;
        TensorSeries term = leg_permute(t, perm);
        acc = tensor_add(acc, (inversions % 2 == 0) ? term : tensor_neg(term));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

bool totally_alternating(const TensorSeries& t) {
    const std::size_t ar = t.arity();
    for (std::size_t k = 0; k + 1 < ar; ++k) {
        std::vector<std::size_t> perm(ar);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::swap(perm[k], perm[k + 1]);
        if (tensor_diff_on_shared_window(leg_permute(t, perm), tensor_neg(t))) return false;
    }
    return true;
}

TensorSeries g_poly_bracket(const TensorSeries& a, const TensorSeries& b) {
    require_g_poly(a, "polynomial bracket");
    require_g_poly(b, "polynomial bracket");
    require_same_algebra(a.algebra(), b.algebra(), "polynomial bracket");
    const LieAlgebraData& g = *a.algebra();
    TensorSeries out(a.algebra(), 1);
    for (const auto& [ka, ca] : a.coefficients()) {
        if (ca == 0) continue;
        for (const auto& [kb, cb] : b.coefficients()) {
            if (cb == 0) continue;
            const Rational prod = ca * cb;
            for (std::size_t m = 0; m < g.dim(); ++m) {
                const Rational& n = g.structure(ka.legs[0], kb.legs[0], m);
                if (n == 0) continue;
                out.add_coefficient(TensorKey{{m}, {ka.exps[0] + kb.exps[0]}}, prod * n);
            }
        }
    }
    return out;
}

TensorSeries ad_diagonal(const TensorSeries& t, const TensorSeries& a) {
    require_g_poly(a, "diagonal action");
    require_same_algebra(t.algebra(), a.algebra(), "diagonal action");
    TensorSeries acc(t.algebra(), t.arity());
    acc.shrink_window(t.window());
    for (const auto& [k, c] : a.coefficients()) {
        if (c == 0) continue;
        const ScalarSeries mono = ScalarSeries::monomial({"t"}, {k.exps[0]}, Rational(1));
        for (std::size_t leg = 0; leg < t.arity(); ++leg)
            acc = tensor_add(acc, tensor_scale(ad_action(t, leg, k.legs[0], mono), c));
    }
    return acc;
}

TensorSeries phi_of(const NSSeries& r, long y_high) {
    SkewReport sk = is_skew(r);
    if (!sk.skew) {
        std::string msg = "alternating tensor: series is not skew";
        if (sk.witness)
            msg += "; first asymmetry at " + key_to_string(sk.witness->first) + " value " +
                   rational_to_string(sk.witness->second);
        throw DomainError(msg);
    }
    TripleExpansion T = cyb(r, y_high);

    for (const auto& [k, v] : T.coeff) {
        if (v == 0) continue;
        for (long e : k.exps)
            if (e < 0)
                throw DomainError("alternating tensor: pole residual at " + key_to_string(k) +
                                  " value " + rational_to_string(v));
    }

    // Largest certified power-series box inside the region.  The second
    // bound shrinks with the third-variable order, so a balanced square in
    // (x2, x3) keeps the most usable range; the first bound comes straight
    // from the region (infinite when the inputs are exact in x).
    long best_c = 0, best_b = 0;
    long running_b = kDegreeInf;
    for (long c = 1; c <= T.c_high; ++c) {
        running_b = std::min(running_b, T.b_high[static_cast<std::size_t>(c - 1)]);
        if (std::min(running_b, c) >= std::min(best_b, best_c)) {
            best_c = c;
            best_b = running_b;
        }
    }
    if (T.a_high <= 0 || best_b <= 0 || best_c <= 0)
        throw WindowError(
            "alternating tensor: no certified power-series box; enlarge the expansion order",
            y_high + 2);

    TensorSeries phi(T.lie, 3);
    phi.shrink_window({VarWindow{0, T.a_high}, VarWindow{0, best_b}, VarWindow{0, best_c}});
    for (const auto& [k, v] : T.coeff) {
        if (v == 0) continue;
        if (k.exps[0] < T.a_high && k.exps[1] < best_b && k.exps[2] < best_c)
            phi.set_coefficient(k, -v);
    }
    return phi;
}

TensorSeries cocycle_residual(const DeltaTable& t, const TensorSeries& a, const TensorSeries& b) {
    TensorSeries d_ab = delta_from_table(t, g_poly_bracket(a, b));
    TensorSeries da = delta_from_table(t, a);
    TensorSeries db = delta_from_table(t, b);
    return tensor_add(tensor_sub(d_ab, ad_diagonal(db, a)), ad_diagonal(da, b));
}

TensorSeries quasi_jacobi_residual(const DeltaTable& t, const TensorSeries& phi,
                                   const TensorSeries& a) {
    if (phi.arity() != 3)
        throw DomainError("quasi-Jacobi residual: phi must be an arity-3 tensor");
    TensorSeries da = delta_from_table(t, a);
    TensorSeries lhs = tensor_scale(alt_signed(apply_table_leg0(t, da)), Rational(1, 2));
    TensorSeries rhs = ad_diagonal(phi, a);
    return tensor_sub(lhs, rhs);
}

TensorSeries alt_delta_phi_residual(const DeltaTable& t, const TensorSeries& phi) {
    if (phi.arity() != 3)
        throw DomainError("alternating compatibility residual: phi must be an arity-3 tensor");
    return alt_signed(apply_table_leg0(t, phi));
}

QuasiBialgebraData quasi_bialgebra_of(const NSSeries& r, long m_max, long y_high) {
    QuasiBialgebraData q{make_delta_table(r, m_max, y_high), phi_of(r, y_high)};
    for (long m = 0; m <= q.delta.m_max; ++m)
        for (std::size_t i = 0; i < q.delta.lie->dim(); ++i) {
            const TensorSeries& e = q.delta.entry(m, i);
            if (auto d = tensor_diff_on_shared_window(tau_flip(e), tensor_neg(e)))
                throw DomainError("cobracket image of generator (degree " + std::to_string(m) +
                                  ", basis " + std::to_string(i) + ") is not skew; difference at " +
                                  key_to_string(d->first));
        }
    if (!totally_alternating(q.phi))
        throw DomainError("alternating tensor fails total alternation");
    return q;
}

// --- twisting ---------------------------------------------------------------

namespace {

void require_twist(const TensorSeries& s, const char* what) {
    if (s.arity() != 2) throw DomainError(std::string(what) + ": twist must have arity 2");
    for (std::size_t v = 0; v < 2; ++v)
        if (s.window()[v].high < kDegreeInf)
            throw DomainError(std::string(what) +
                              ": twist must be an exactly known tensor polynomial");
    for (const auto& [k, val] : s.coefficients())
        if (val != 0 && (k.exps[0] < 0 || k.exps[1] < 0))
            throw DomainError(std::string(what) + ": twist has a negative degree at " +
                              key_to_string(k));
}

void require_skew_twist(const TensorSeries& s, const char* what) {
    if (auto d = tensor_diff_on_shared_window(tau_flip(s), tensor_neg(s)))
        throw TwistError(std::string(what) + ": twist datum is not skew; difference at " +
                         key_to_string(d->first) + " value " + rational_to_string(d->second));
}

}  // namespace

NSSeries twist_series(const NSSeries& r, const TensorSeries& s_twist) {
    require_twist(s_twist, "series twist");
    require_same_algebra(r.g.algebra(), s_twist.algebra(), "series twist");
    require_skew_twist(s_twist, "series twist");
    NSSeries out{r.n, r.s, tensor_sub(r.g, s_twist)};
    out.validate();
    return out;
}

std::vector<LnElement> twist_subspace(const std::vector<LnElement>& basis,
                                      const TensorSeries& s_twist, const AlphaData& a,
                                      LiePtr lie) {
    require_twist(s_twist, "subspace twist");
    require_same_algebra(lie, s_twist.algebra(), "subspace twist");
    std::vector<LnElement> out;
    out.reserve(basis.size());
    for (const LnElement& w : basis) {
        if (w.n != a.n)
            throw DomainError("subspace twist: basis element lives at a different pole order");
        LnElement acc = ln_scale(w, Rational(-1));
        for (const auto& [k, c] : s_twist.coefficients()) {
            if (c == 0) continue;
            const LnElement second = ln_diagonal(lie, a.n, k.legs[1], k.exps[1]);
            const Rational val = form_B(a, second, w);
            if (val == 0) continue;
            acc = ln_add(acc, ln_scale(ln_diagonal(lie, a.n, k.legs[0], k.exps[0]), c * val));
        }
        out.push_back(std::move(acc));
    }
    return out;
}

TensorSeries poly_cyb(const TensorSeries& s) {
    if (s.arity() != 2) throw DomainError("polynomial residual: argument must have arity 2");
    for (std::size_t v = 0; v < 2; ++v)
        if (s.window()[v].high < kDegreeInf)
            throw DomainError("polynomial residual: argument must be exactly known");
    const long xl = s.window()[0].low;
    const long yl = s.window()[1].low;
    Window w;
    w.push_back({std::min(sat_add(xl, xl), xl), kDegreeInf});
    w.push_back({std::min({yl, sat_add(yl, xl), xl}), kDegreeInf});
    w.push_back({std::min(yl, sat_add(yl, yl)), kDegreeInf});
    std::map<TensorKey, Rational> out;
    const LieAlgebraData& g = *s.algebra();
    accumulate(out, g, s, s, Mode::k12_13, nullptr);
    accumulate(out, g, s, s, Mode::k12_23, nullptr);
    accumulate(out, g, s, s, Mode::k13_23, nullptr);
    TensorSeries res(s.algebra(), 3, w);
    for (const auto& [k, v] : out)
        if (v != 0) res.add_coefficient(k, v);
    return res;
}

QuasiBialgebraData twist_delta_phi(const QuasiBialgebraData& q, const TensorSeries& s_twist) {
    require_twist(s_twist, "data twist");
    require_same_algebra(q.delta.lie, s_twist.algebra(), "data twist");
    require_skew_twist(s_twist, "data twist");

    DeltaTable nt;
    nt.lie = q.delta.lie;
    nt.m_max = q.delta.m_max;
    nt.source_x_low = q.delta.source_x_low;
    nt.entries.resize(q.delta.entries.size());
    for (long m = 0; m <= q.delta.m_max; ++m) {
        auto& row = nt.entries[static_cast<std::size_t>(m)];
        row.reserve(nt.lie->dim());
        for (std::size_t i = 0; i < nt.lie->dim(); ++i) {
            TensorSeries ds = ad_diagonal(s_twist, g_monomial(nt.lie, i, m));
            row.push_back(tensor_add(q.delta.entry(m, i), ds));
        }
    }
    // Twisting subtracts the polynomial from the series part, so the linear
    // term of the quadratic residual enters with a plus and the pure twist
    // square with a minus.
    TensorSeries phi_shift = tensor_sub(
        tensor_scale(alt_signed(apply_table_leg0(q.delta, s_twist)), Rational(1, 2)),
        poly_cyb(s_twist));
    return {std::move(nt), tensor_add(q.phi, phi_shift)};
}

// --- subalgebra closure -----------------------------------------------------

SubalgebraReport subalgebra_residual(const NSSeries& r, const AlphaData& a, LiePtr lie,
                                     long k_max, long K) {
    r.validate();
    a.validate();
    if (r.n != a.n)
        throw DomainError("subalgebra check: series and pairing data have different pole orders");
    if (k_max < 1 || K < 1) throw DomainError("subalgebra check: k_max and K must be positive");
    {
        const ScalarSeries prod = series_mul(r.s, a.unit_series());
        const ScalarSeries one = ScalarSeries::constant({"x"}, Rational(1));
        if (auto d = series_diff_on_shared_window(prod, one))
            throw DomainError("subalgebra check: series unit does not match the pairing data");
    }

    const CoefficientTable tab = coefficients(r, lie, k_max);
    const long M = std::max(K, k_max);
    const TruncatedModel model = build_truncated_model(a, lie, M);
    auto clipped_coordinates = [&](LnElement u) {
        u.laurent.shrink_window({{-M, M}});
        return model.coordinates(u);
    };

    std::vector<std::vector<Rational>> coords;
    coords.reserve(static_cast<std::size_t>(k_max) * lie->dim());
    for (long k = 0; k < k_max; ++k)
        for (std::size_t i = 0; i < lie->dim(); ++i)
            coords.push_back(clipped_coordinates(tab.rows[static_cast<std::size_t>(k)][i]));
    const QMatrix row_mat = QMatrix::from_rows(coords);

    SubalgebraReport rep;
    const std::size_t dim = lie->dim();
    const std::size_t total = static_cast<std::size_t>(k_max) * dim;
    for (std::size_t u = 0; u < total; ++u) {
        const long ku = static_cast<long>(u / dim);
        const std::size_t iu = u % dim;
        for (std::size_t v = u + 1; v < total; ++v) {
            const long kv = static_cast<long>(v / dim);
            const std::size_t iv = v % dim;
            if (ku + kv > k_max - 2) {
                ++rep.untested;
                continue;
            }
            const LnElement br = ln_bracket(tab.rows[static_cast<std::size_t>(ku)][iu],
                                            tab.rows[static_cast<std::size_t>(kv)][iv]);
            ++rep.tested;
            if (!rowspace_contains(row_mat, clipped_coordinates(br))) {
                ++rep.failed;
                if (!rep.witness) rep.witness = std::make_tuple(ku, iu, kv, iv);
            }
        }
    }
    rep.closed = rep.tested > 0 && rep.failed == 0;

    long y_cap = r.g.window()[1].high;
    const long y_high = std::min(k_max, y_cap);
    if (y_high < 1)
        throw WindowError("subalgebra check: regular part certifies no second-variable order",
                          k_max);
    const TripleExpansion residual = gcyb(r, y_high);
    rep.gcyb_zero = residual.is_zero_on_certified();
    rep.gcyb_order = y_high;
    rep.coherent = (rep.closed == rep.gcyb_zero);
    return rep;
}

// --- reports ----------------------------------------------------------------

namespace {

nlohmann::json witness_json(const TensorKey& k, const Rational& v) {
    nlohmann::json j;
    j["legs"] = k.legs;
    j["exponents"] = k.exps;
    j["value"] = rational_to_string(v);
    return j;
}

}  // namespace

std::string residual_json(const std::string& check, const TripleExpansion& t) {
    nlohmann::json j;
    j["check"] = check;
    auto w = t.first_certified_nonzero();
    j["verdict"] = w ? "fail" : "pass";
    j["certified_region"] = t.region_to_string();
    j["first_nonzero"] = w ? witness_json(w->first, w->second) : nlohmann::json(nullptr);
    return j.dump();
}

std::string residual_json(const std::string& check, const TensorSeries& t) {
    nlohmann::json j;
    j["check"] = check;
    std::optional<std::pair<TensorKey, Rational>> w;
    for (const auto& [k, v] : t.coefficients())
        if (v != 0) {
            w = std::make_pair(k, v);
            break;
        }
    j["verdict"] = w ? "fail" : "pass";
    j["certified_region"] = box_to_string(t);
    j["first_nonzero"] = w ? witness_json(w->first, w->second) : nlohmann::json(nullptr);
    return j.dump();
}

std::string report_json(const SubalgebraReport& rep) {
    nlohmann::json j;
    j["check"] = "subalgebra";
    j["verdict"] = rep.closed ? "closed" : "not-closed";
    j["tested"] = rep.tested;
    j["untested"] = rep.untested;
    j["failed"] = rep.failed;
    if (rep.witness) {
        nlohmann::json w;
        w["k"] = std::get<0>(*rep.witness);
        w["i"] = std::get<1>(*rep.witness);
        w["l"] = std::get<2>(*rep.witness);
        w["j"] = std::get<3>(*rep.witness);
        j["witness"] = w;
    } else {
        j["witness"] = nullptr;
    }
    j["gcyb_zero"] = rep.gcyb_zero;
    j["gcyb_order"] = rep.gcyb_order;
    j["coherent"] = rep.coherent;
    return j.dump();
}

}  // namespace nslab
