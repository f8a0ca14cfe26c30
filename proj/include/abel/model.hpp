#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abel/expr.hpp"
#include "abel/jet.hpp"

namespace abel {

/// The six equation families: cubic, quartic, quartic-singular, quintic and
/// the two quintic-singular parametrizations.
enum class FamilyTag { K3, K4, K4S, K5, K5S1, K5S2 };

struct FamilyInfo {
    FamilyTag tag;
    const char* name;                 // file-format tag: "k3", "k4s", ...
    int degree;                       // k, the degree of the right-hand side
    int signature_dimension;          // number of signature components
    bool singular;                    // parametrized (p*y+q)^k form
    std::vector<const char*> coefficient_names;
};

const FamilyInfo& family_info(FamilyTag tag);
std::optional<FamilyTag> family_from_string(std::string_view name);
std::span<const FamilyTag> all_families();

using JetMap = std::map<std::string, Jet, std::less<>>;

/// One ODE of a family: the coefficient functions keyed by the family's
/// coefficient names, in family order.
class AbelEquation {
public:
    AbelEquation(FamilyTag family, std::vector<Expression> coefficients);

    FamilyTag family() const { return family_; }
    const FamilyInfo& info() const { return family_info(family_); }
    const Expression& coefficient(std::string_view name) const;
    const std::vector<Expression>& coefficients() const { return coefficients_; }
    AbelEquation with_coefficient(std::string_view name, Expression replacement) const;

private:
    FamilyTag family_;
    std::vector<Expression> coefficients_;
};

/// Parses the JSON equation document {"family": ..., "coefficients": {...}}.
AbelEquation load_equation(const std::string& text);
/// Canonical rendering: 2-space indent, coefficient keys in family order, LF.
std::string render_equation(const AbelEquation& eq);

/// Rewrites a singular-family equation ((p y + q)^k form) in full coefficient
/// form by binomial expansion at the expression level.
AbelEquation expand_singular(const AbelEquation& eq);

JetMap coefficient_jets(const AbelEquation& eq, double x0, int order);

enum class OrbitTag {
    Regular,
    SingularCubicS3Zero,
    SingularQuarticI1Zero,
    SingularQuarticL1Zero,
    SingularQuinticK1Zero,
    SingularQuinticK1K2Zero,
    SingularQuinticM2Zero,
    DegenerateLeadingCoefficient,
};

const char* to_string(OrbitTag tag);

struct OrbitClass {
    OrbitTag tag;
    /// The invariant values the classification tested.
    std::vector<std::pair<std::string, double>> witness;
};

inline constexpr double kDefaultZeroTol = 1e-9;
inline constexpr int kDefaultOrder = 8;

/// Scaled vanishing rule: |value| <= tol * (1 + input_scale)^degree.
bool scaled_vanishes(double value, int degree, double input_scale, double tol);
/// Max absolute Taylor coefficient over all jets of the map.
double jet_map_scale(const JetMap& jets);
/// Same, restricted to the coordinates a formula of the given jet order
/// consumes.
double jet_map_scale(const JetMap& jets, int max_order);

OrbitClass classify(FamilyTag family, const JetMap& jets, double tol = kDefaultZeroTol);
OrbitClass classify(const AbelEquation& eq, double x0, double tol = kDefaultZeroTol);

}  // namespace abel
