#pragma once

#include <span>
#include <string>
#include <vector>

#include "abel/errors.hpp"

namespace abel {

/// Truncated Taylor expansion of a scalar function about a base point.
///
/// coeff(i) is the i-th Taylor coefficient, so the represented function is
/// sum_i coeff(i) (x - base_point)^i and the i-th derivative at the base
/// point is i! * coeff(i).  Values are immutable; every operation returns a
/// fresh jet and jets may be shared freely across threads.
class Jet {
public:
    Jet(double base_point, std::vector<double> coeffs);

    static Jet constant(double base_point, double value, int order);
    /// The identity function x expanded at base_point: [base_point, 1, 0, ...].
    static Jet variable(double base_point, int order);

    double base_point() const { return base_point_; }
    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    double value() const { return coeffs_[0]; }
    double coeff(int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
    std::span<const double> coeffs() const { return coeffs_; }
    /// i-th derivative at the base point, i.e. i! * coeff(i).
    double derivative_value(int i) const;
    double max_abs_coeff() const;

    /// Truncation to a lower order.  Raises OrderTooLow instead of zero-padding.
    Jet truncated(int order) const;
    /// Jet of the derivative (coefficient shift); one order lower.
    Jet derivative() const;
    /// Horner evaluation of the truncated polynomial at x.
    double eval(double x) const;

    Jet operator-() const;

    friend Jet operator+(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a, const Jet& b);
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);

    friend Jet operator+(const Jet& a, double s);
    friend Jet operator+(double s, const Jet& a);
    friend Jet operator-(const Jet& a, double s);
    friend Jet operator-(double s, const Jet& a);
    friend Jet operator*(const Jet& a, double s);
    friend Jet operator*(double s, const Jet& a);
    friend Jet operator/(const Jet& a, double s);
    friend Jet operator/(double s, const Jet& a);

private:
    double base_point_;
    std::vector<double> coeffs_;
};

/// Taylor coefficients of outer(inner(x)) at inner's base point.
/// Requires outer.base_point() == inner.value() and equal orders.
Jet compose(const Jet& outer, const Jet& inner);

/// Compositional inverse: a jet k at j(x0) with compose(k, j) = identity.
/// Requires j.coeff(1) != 0.
Jet revert(const Jet& j);

/// Real-branch fractional power j^(m/n).
///
/// For odd n the result represents sign(u)^m |u|^(m/n); for even n the
/// positive branch (constant term must be positive).  m/n is reduced
/// internally.
Jet rpow(const Jet& j, long long m, long long n);

/// |j| as a jet; requires a nonzero constant term.
Jet abs(const Jet& j);

/// Integer power by binary exponentiation (negative n divides).
Jet pow(const Jet& j, long long n);

Jet sin(const Jet& j);
Jet cos(const Jet& j);
Jet tan(const Jet& j);
Jet exp(const Jet& j);
Jet log(const Jet& j);
Jet sqrt(const Jet& j);
Jet sinh(const Jet& j);
Jet cosh(const Jet& j);
Jet tanh(const Jet& j);

std::string to_string(const Jet& j);

}  // namespace abel
