#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

namespace nslab {

// Degree bound sentinel.  Kept far from the long range so sums of a few
// bounds never overflow.
inline constexpr long kDegreeInf = std::numeric_limits<long>::max() / 8;

inline long sat_add(long a, long b) {
    if (a >= kDegreeInf || b >= kDegreeInf) return kDegreeInf;
    if (a <= -kDegreeInf || b <= -kDegreeInf) return -kDegreeInf;
    const long s = a + b;
    return std::clamp(s, -kDegreeInf, kDegreeInf);
}

// Exactness window of one series variable.
//
//   low   — guaranteed support bound: every coefficient at degree < low is
//           exactly zero;
//   high  — exactness bound (exclusive): every coefficient at degree < high
//           is exactly known; degrees >= high are unknown.
//
// An exactly known finite object (polynomial, finitely supported alpha
// sequence) has high = +kDegreeInf and low = its minimal support degree.
struct VarWindow {
    long low = 0;
    long high = kDegreeInf;

    bool contains(long degree) const { return degree >= low && degree < high; }
    bool known(long degree) const { return degree < high; }  // below low => known zero
    bool empty() const { return low >= high; }

    friend bool operator==(const VarWindow&, const VarWindow&) = default;
};

// Sum a + b: exact wherever both are exact; support bounded by the smaller low.
inline VarWindow window_add(const VarWindow& a, const VarWindow& b) {
    return {std::min(a.low, b.low), std::min(a.high, b.high)};
}

// Cauchy product a * b: an output degree e is certified iff no split of e can
// touch an unknown coefficient of either factor.
inline VarWindow window_mul(const VarWindow& a, const VarWindow& b) {
    return {sat_add(a.low, b.low),
            std::min(sat_add(a.high, b.low), sat_add(b.high, a.low))};
}

inline VarWindow window_intersect(const VarWindow& a, const VarWindow& b) {
    return {std::min(a.low, b.low), std::min(a.high, b.high)};
}

inline std::string window_to_string(const VarWindow& w) {
    auto bound = [](long v) -> std::string {
        if (v >= kDegreeInf) return "+inf";
        if (v <= -kDegreeInf) return "-inf";
        return std::to_string(v);
    };
    return "[" + bound(w.low) + "," + bound(w.high) + ")";
}

using Window = std::vector<VarWindow>;  // one entry per series variable

}  // namespace nslab
