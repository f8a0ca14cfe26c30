#pragma once

// Internal helper: jet arithmetic that truncates operands to the common
// order, so invariant formulas mixing a jet with its derivatives read like
// the printed formulas.  The public Jet operators stay strict.

#include <algorithm>

#include "abel/jet.hpp"

namespace abel::aligned {

struct V {
    Jet j;
    V(Jet jet) : j(std::move(jet)) {}  // NOLINT: implicit by design
};

inline Jet to_order(const Jet& j, int o) { return j.order() == o ? j : j.truncated(o); }

inline int common(const V& a, const V& b) { return std::min(a.j.order(), b.j.order()); }

inline V operator+(const V& a, const V& b) {
    const int o = common(a, b);
    return V(to_order(a.j, o) + to_order(b.j, o));
}
inline V operator-(const V& a, const V& b) {
    const int o = common(a, b);
    return V(to_order(a.j, o) - to_order(b.j, o));
}
inline V operator*(const V& a, const V& b) {
    const int o = common(a, b);
    return V(to_order(a.j, o) * to_order(b.j, o));
}
inline V operator/(const V& a, const V& b) {
    const int o = common(a, b);
    return V(to_order(a.j, o) / to_order(b.j, o));
}
inline V operator-(const V& a) { return V(-a.j); }
inline V operator*(double s, const V& a) { return V(a.j * s); }
inline V operator*(const V& a, double s) { return V(a.j * s); }
inline V operator+(const V& a, double s) { return V(a.j + s); }
inline V operator-(const V& a, double s) { return V(a.j - s); }

/// D/Dx on jet coordinates: the coefficient shift.
inline V D(const V& a) { return V(a.j.derivative()); }
inline V D2(const V& a) { return V(a.j.derivative().derivative()); }

inline V pw(const V& a, long long n) { return V(pow(a.j, n)); }

inline Jet mul(const Jet& a, const Jet& b) { return (V(a) * V(b)).j; }
inline Jet div(const Jet& a, const Jet& b) { return (V(a) / V(b)).j; }

}  // namespace abel::aligned
