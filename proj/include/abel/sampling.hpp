#pragma once

#include <cstdint>

#include "abel/model.hpp"
#include "abel/transform.hpp"

namespace abel {

/// splitmix64-based generator: identical streams on every platform, so
/// seeded reports are byte-reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform(double lo, double hi);
    /// Magnitude drawn from [lo_abs, hi_abs], sign random.
    double uniform_signed_band(double lo_abs, double hi_abs);
    int uniform_int(int lo, int hi);  // inclusive

private:
    std::uint64_t state_;
};

Expression random_polynomial(Rng& rng, int degree, double lo, double hi);

struct EquationSampling {
    int max_degree = 2;
    double coeff_lo = -1.5;
    double coeff_hi = 1.5;
    double leading_lo = 0.6;       // |leading(x)| band over the window
    double leading_hi = 2.0;
    double regularity_margin = 1e-3;
    double window = 0.0;           // margins enforced on x0 +- window probes
    int max_attempts = 400;
};

/// A random equation of the family whose regularity denominators stay above
/// the scaled margin at the probe points.
AbelEquation random_equation(FamilyTag family, Rng& rng, double x0,
                             const EquationSampling& opts = {});

struct TransformSampling {
    double band_lo = 0.5;   // f'(x) and g(x) band over the window
    double band_hi = 2.0;
    double bend = 0.15;     // size of the nonlinear part of f, g
    double shift = 1.0;     // |h| coefficient bound
    double window = 0.0;
    bool orientation_reversing = false;  // f' < 0 instead
    int max_attempts = 400;
};

/// A random pseudogroup element with cubic f, g, h and the stated sign and
/// band conditions at the probe points.
PointTransformation random_transformation(Rng& rng, double x0, const TransformSampling& opts = {});

}  // namespace abel
