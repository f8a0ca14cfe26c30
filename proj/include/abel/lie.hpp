#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "abel/expr.hpp"
#include "abel/model.hpp"

namespace abel {

/// The vector field xi d/dx + (eta y + zeta) d/dy, acting on a family's
/// coefficient bundle through the printed representation.
struct InfinitesimalGenerator {
    Expression xi, eta, zeta;
    FamilyTag family;
};

/// A point of the jet space: coefficient jets of one family at a base point.
struct JetPoint {
    FamilyTag family;
    JetMap jets;
    double x() const { return jets.begin()->second.base_point(); }
};

/// Components of the prolonged generator at a jet point: phi.at(name)[i] is
/// the coefficient on the coordinate u^(i) of the named coefficient.
struct ProlongedComponents {
    std::map<std::string, std::vector<double>> phi;
    double l2_norm() const;
};

/// Prolongation via the printed base formulas (K3, K4, K4S) and the
/// recursion phi^(i+1) = D(phi^(i)) - u^(i+1) D(xi).  The quintic families
/// have no printed generator; they delegate to the finite-action derivation.
ProlongedComponents prolong_coefficients(const InfinitesimalGenerator& gen, int k,
                                         const JetPoint& at);

/// Same components obtained by differentiating the finite action along
/// t -> (x + t xi, 1 + t eta, t zeta) with a central difference.
ProlongedComponents prolong_via_finite_action(const InfinitesimalGenerator& gen, int k,
                                              const JetPoint& at, double step = 1e-5);

struct DefectReport {
    double defect;          // phi . grad(I)
    double gradient_norm;   // l2 norm of grad(I) over the jet coordinates
    double component_norm;  // l2 norm of the prolonged components
    bool defined;
    double normalized() const;
};

/// Directional derivative of an absolute invariant along the prolonged
/// generator, by contracting a central-difference gradient in the jet
/// coordinates with prolong_coefficients.  Near zero for invariants.
DefectReport infinitesimal_defect(const InfinitesimalGenerator& gen,
                                  std::string_view invariant_name, const JetPoint& at,
                                  bool via_finite_action = false);

/// d/dt at t = 0 of J evaluated on T_t . eq at f_t(x0), T_t = (x + t xi,
/// 1 + t eta, t zeta); vanishes for absolute invariants.
double finite_action_derivative(const InfinitesimalGenerator& gen,
                                std::string_view invariant_name, const AbelEquation& eq, double x0,
                                int order, double step = 1e-3);

}  // namespace abel
