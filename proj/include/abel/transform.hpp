#pragma once

#include "abel/expr.hpp"
#include "abel/model.hpp"

namespace abel {

/// A pseudogroup element x -> f(x), y -> g(x) y + h(x).
struct PointTransformation {
    Expression f, g, h;
};

PointTransformation identity_transformation();

struct TransformedJets {
    double x_new;         // f(x0)
    JetMap coefficients;  // jets with respect to the new variable, at x_new
};

/// Pushforward of the equation under T: substitute y = (y~ - h)/g, divide by
/// f', collect powers of y~ with exact integer binomials, re-parametrize by
/// the reverted jet of f.  Coefficient jets come back at f(x0) in the same
/// family's coordinates.
TransformedJets apply(const PointTransformation& T, const AbelEquation& eq, double x0, int order);

/// Jet-level core: coefficient jets of order N, (f, g, h) jets of order N+1.
TransformedJets apply_jets(FamilyTag family, const JetMap& coefficients, const Jet& f_jet,
                           const Jet& g_jet, const Jet& h_jet);

/// Pseudogroup composition at the expression level:
/// f = f2 o f1, g = (g2 o f1) g1, h = (g2 o f1) h1 + h2 o f1.
PointTransformation compose(const PointTransformation& second, const PointTransformation& first);

/// Jets at f(x0) of the inverse element (f^-1, 1/(g o f^-1), -(h/g) o f^-1).
struct InverseJets {
    Jet f, g, h;
};
InverseJets invert(const PointTransformation& T, double x0, int order);

/// Canonical-form shuffle X~ = K^-m (X + h), Y~ = K Y with m = degree - 1.
struct ResidualTransformation {
    double scale;  // K, nonzero
    double shift;  // h
    int exponent;  // m
};
PointTransformation to_point_transformation(const ResidualTransformation& R);
/// Requires the equation to pass canonical_check at x0.
TransformedJets residual_apply(const ResidualTransformation& R, const AbelEquation& eq, double x0,
                               int order);

/// Exact transformed equation at the expression level.  Needs an affine f;
/// the quartic singular family additionally needs g/f' > 0 where evaluated,
/// and the quintic singular families a constant g (the grammar has no
/// fifth-root operator).
AbelEquation apply_symbolic(const PointTransformation& T, const AbelEquation& eq);

}  // namespace abel
