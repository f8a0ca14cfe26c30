#include "abel/jet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <utility>

namespace abel {

namespace {

void require_compatible(const Jet& a, const Jet& b) {
    if (a.base_point() != b.base_point()) {
        throw BasePointMismatch("jets expanded at different base points");
    }
    if (a.order() != b.order()) {
        throw OrderMismatch("jets of different order");
    }
}

std::vector<double> cauchy_product(std::span<const double> a, std::span<const double> b) {
    std::vector<double> c(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        const std::size_t jmax = a.size() - i;
        for (std::size_t j = 0; j < jmax; ++j) {
            c[i + j] += a[i] * b[j];
        }
    }
    return c;
}

}  // namespace

Jet::Jet(double base_point, std::vector<double> coeffs)
    : base_point_(base_point), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
        throw Error("a jet needs at least the constant coefficient");
    }
    if (!std::isfinite(base_point_)) {
        throw Error("non-finite jet base point");
    }
    for (double c : coeffs_) {
        if (!std::isfinite(c)) {
            throw Error("non-finite jet coefficient");
        }
    }
}

Jet Jet::constant(double base_point, double value, int order) {
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    c[0] = value;
    return Jet(base_point, std::move(c));
}

Jet Jet::variable(double base_point, int order) {
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    c[0] = base_point;
    if (order >= 1) c[1] = 1.0;
    return Jet(base_point, std::move(c));
}

double Jet::derivative_value(int i) const {
    double fact = 1.0;
    for (int k = 2; k <= i; ++k) fact *= k;
    return fact * coeff(i);
}

double Jet::max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

Jet Jet::truncated(int order) const {
    if (order < 0 || order > this->order()) {
        throw OrderTooLow("cannot truncate an order-" + std::to_string(this->order()) +
                          " jet to order " + std::to_string(order));
    }
    return Jet(base_point_,
               std::vector<double>(coeffs_.begin(), coeffs_.begin() + order + 1));
}

Jet Jet::derivative() const {
    if (order() == 0) {
        throw OrderTooLow("derivative of an order-0 jet");
    }
    std::vector<double> c(coeffs_.size() - 1);
    for (std::size_t i = 0; i + 1 < coeffs_.size(); ++i) {
        c[i] = static_cast<double>(i + 1) * coeffs_[i + 1];
    }
    return Jet(base_point_, std::move(c));
}

double Jet::eval(double x) const {
    const double t = x - base_point_;
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        acc = acc * t + coeffs_[i];
    }
    return acc;
}

Jet Jet::operator-() const {
    std::vector<double> c(coeffs_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = -coeffs_[i];
    return Jet(base_point_, std::move(c));
}

Jet operator+(const Jet& a, const Jet& b) {
    require_compatible(a, b);
    std::vector<double> c(a.coeffs_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs_[i] + b.coeffs_[i];
    return Jet(a.base_point_, std::move(c));
}

Jet operator-(const Jet& a, const Jet& b) {
    require_compatible(a, b);
    std::vector<double> c(a.coeffs_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs_[i] - b.coeffs_[i];
    return Jet(a.base_point_, std::move(c));
}

Jet operator*(const Jet& a, const Jet& b) {
    require_compatible(a, b);
    return Jet(a.base_point_, cauchy_product(a.coeffs_, b.coeffs_));
}

Jet operator/(const Jet& a, const Jet& b) {
    require_compatible(a, b);
    if (b.value() == 0.0) {
        throw DivisionByZeroConstantTerm("division by a jet with zero constant term");
    }
    std::vector<double> c(a.coeffs_.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        double acc = a.coeffs_[i];
        for (std::size_t j = 0; j < i; ++j) {
            acc -= c[j] * b.coeffs_[i - j];
        }
        c[i] = acc / b.coeffs_[0];
    }
    return Jet(a.base_point_, std::move(c));
}

Jet operator+(const Jet& a, double s) {
    std::vector<double> c(a.coeffs_.begin(), a.coeffs_.end());
    c[0] += s;
    return Jet(a.base_point_, std::move(c));
}
Jet operator+(double s, const Jet& a) { return a + s; }
Jet operator-(const Jet& a, double s) { return a + (-s); }
Jet operator-(double s, const Jet& a) { return (-a) + s; }

Jet operator*(const Jet& a, double s) {
    std::vector<double> c(a.coeffs_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs_[i] * s;
    return Jet(a.base_point_, std::move(c));
}
Jet operator*(double s, const Jet& a) { return a * s; }
Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
Jet operator/(double s, const Jet& a) { return Jet::constant(a.base_point(), s, a.order()) / a; }

Jet compose(const Jet& outer, const Jet& inner) {
    if (outer.order() != inner.order()) {
        throw OrderMismatch("compose needs equal orders");
    }
    if (outer.base_point() != inner.value()) {
        throw BasePointMismatch("outer jet is not expanded at the inner jet's value");
    }
    // Horner on w = inner - inner(x0), which has zero constant term.
    Jet w = inner - inner.value();
    const int n = outer.order();
    Jet acc = Jet::constant(inner.base_point(), outer.coeff(n), n);
    for (int i = n - 1; i >= 0; --i) {
        acc = acc * w + outer.coeff(i);
    }
    return acc;
}

Jet revert(const Jet& j) {
    if (j.order() < 1 || j.coeff(1) == 0.0) {
        throw NonInvertibleJet("series reversion needs a nonzero linear coefficient");
    }
    const int n = j.order();
    // Solve sum_i d_i w(t)^i = t for d, where w = j - j(x0).
    std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 1; i <= n; ++i) w[static_cast<std::size_t>(i)] = j.coeff(i);
    std::vector<double> d(static_cast<std::size_t>(n) + 1, 0.0);
    d[0] = j.base_point();
    if (n >= 1) d[1] = 1.0 / w[1];

    // wpow[i] = coefficients of w^i; built incrementally.
    std::vector<std::vector<double>> wpow(static_cast<std::size_t>(n) + 1);
    wpow[0].assign(static_cast<std::size_t>(n) + 1, 0.0);
    wpow[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        wpow[static_cast<std::size_t>(i)] = cauchy_product(wpow[static_cast<std::size_t>(i - 1)], w);
    }
    double c1m = w[1];
    for (int m = 2; m <= n; ++m) {
        c1m *= w[1];
        double acc = 0.0;
        for (int i = 1; i < m; ++i) {
            acc += d[static_cast<std::size_t>(i)] * wpow[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
        }
        d[static_cast<std::size_t>(m)] = -acc / c1m;
    }
    return Jet(j.value(), std::move(d));
}

Jet abs(const Jet& j) {
    if (j.value() == 0.0) {
        throw DomainError("abs of a jet with zero constant term");
    }
    return j.value() < 0.0 ? -j : j;
}

Jet pow(const Jet& j, long long n) {
    if (n < 0) {
        return Jet::constant(j.base_point(), 1.0, j.order()) / pow(j, -n);
    }
    Jet acc = Jet::constant(j.base_point(), 1.0, j.order());
    Jet base = j;
    unsigned long long e = static_cast<unsigned long long>(n);
    while (e > 0) {
        if (e & 1ull) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

Jet rpow(const Jet& j, long long m, long long n) {
    if (n <= 0) throw DomainError("rpow needs a positive root index");
    const long long g = std::gcd(m < 0 ? -m : m, n);
    if (g > 1) {
        m /= g;
        n /= g;
    }
    if (n == 1) return pow(j, m);

    const double u0 = j.value();
    if (u0 == 0.0) {
        throw DomainError("rpow of a jet with zero constant term");
    }
    if (n % 2 == 0 && u0 < 0.0) {
        throw DomainError("even root of a negative constant term");
    }
    const double sign = (u0 < 0.0 && (m % 2 != 0)) ? -1.0 : 1.0;
    const Jet u = u0 < 0.0 ? -j : j;

    // Standard power-series recurrence for P = U^alpha: P'U = alpha U'P.
    const double alpha = static_cast<double>(m) / static_cast<double>(n);
    const int N = j.order();
    std::vector<double> p(static_cast<std::size_t>(N) + 1, 0.0);
    p[0] = std::pow(u.value(), alpha);
    for (int k = 1; k <= N; ++k) {
        double acc = 0.0;
        for (int i = 1; i <= k; ++i) {
            acc += alpha * i * u.coeff(i) * p[static_cast<std::size_t>(k - i)];
        }
        for (int i = 1; i < k; ++i) {
            acc -= i * p[static_cast<std::size_t>(i)] * u.coeff(k - i);
        }
        p[static_cast<std::size_t>(k)] = acc / (k * u.value());
    }
    if (sign < 0.0) {
        for (double& c : p) c = -c;
    }
    return Jet(j.base_point(), std::move(p));
}

namespace {

/// Builds the jet of f at inner.value() from the Taylor coefficients of f and
/// composes.  series(i) must return f^(i)(u0)/i!.
template <typename SeriesFn>
Jet via_series(const Jet& inner, SeriesFn series) {
    const int n = inner.order();
    std::vector<double> c(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) c[static_cast<std::size_t>(i)] = series(i);
    Jet outer(inner.value(), std::move(c));
    return compose(outer, inner);
}

double factorial(int i) {
    double f = 1.0;
    for (int k = 2; k <= i; ++k) f *= k;
    return f;
}

}  // namespace

Jet exp(const Jet& j) {
    const double e0 = std::exp(j.value());
    return via_series(j, [&](int i) { return e0 / factorial(i); });
}

Jet log(const Jet& j) {
    const double u0 = j.value();
    if (u0 <= 0.0) throw DomainError("log of a non-positive constant term");
    return via_series(j, [&](int i) {
        if (i == 0) return std::log(u0);
        double v = 1.0 / (i * std::pow(u0, i));
        return (i % 2 == 0) ? -v : v;
    });
}

Jet sin(const Jet& j) {
    const double s0 = std::sin(j.value());
    const double c0 = std::cos(j.value());
    const double cycle[4] = {s0, c0, -s0, -c0};
    return via_series(j, [&](int i) { return cycle[i % 4] / factorial(i); });
}

Jet cos(const Jet& j) {
    const double s0 = std::sin(j.value());
    const double c0 = std::cos(j.value());
    const double cycle[4] = {c0, -s0, -c0, s0};
    return via_series(j, [&](int i) { return cycle[i % 4] / factorial(i); });
}

Jet tan(const Jet& j) {
    Jet c = cos(j);
    if (c.value() == 0.0) throw DomainError("tan at a pole");
    return sin(j) / c;
}

Jet sinh(const Jet& j) {
    const double s0 = std::sinh(j.value());
    const double c0 = std::cosh(j.value());
    return via_series(j, [&](int i) { return (i % 2 == 0 ? s0 : c0) / factorial(i); });
}

Jet cosh(const Jet& j) {
    const double s0 = std::sinh(j.value());
    const double c0 = std::cosh(j.value());
    return via_series(j, [&](int i) { return (i % 2 == 0 ? c0 : s0) / factorial(i); });
}

Jet tanh(const Jet& j) { return sinh(j) / cosh(j); }

Jet sqrt(const Jet& j) { return rpow(j, 1, 2); }

std::string to_string(const Jet& j) {
    std::string out = "[";
    char buf[64];
    for (int i = 0; i <= j.order(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", j.coeff(i));
        if (i) out += ", ";
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "] @ %.17g", j.base_point());
    out += buf;
    return out;
}

}  // namespace abel
