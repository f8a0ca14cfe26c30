#pragma once

#include <memory>
#include <string>
#include <vector>

#include "abel/model.hpp"
#include "abel/transform.hpp"

namespace abel {

struct SignatureComponent {
    std::string label;      // "J1", "nabla_J1", ...
    std::string invariant;  // base absolute invariant name
    int nabla;              // 0 or 1
};

/// The family's signature map components, in the theorem order.
std::vector<SignatureComponent> signature_components(FamilyTag family);

struct SignatureCurve {
    FamilyTag family;
    std::vector<std::string> components;
    std::vector<double> xs;                   // strictly increasing grid
    std::vector<std::vector<double>> values;  // [sample][component]
    std::vector<std::vector<double>> slopes;  // d(component)/dx, same shape
    std::vector<char> defined;                // regularity mask per sample
};

/// Anything that can produce coefficient jets at a point: a plain equation,
/// or a transformed equation that only exists at jet level.
class EquationSource {
public:
    virtual ~EquationSource() = default;
    virtual FamilyTag family() const = 0;
    virtual JetMap jets(double x, int order) const = 0;
};

class ExpressionSource final : public EquationSource {
public:
    explicit ExpressionSource(AbelEquation eq) : eq_(std::move(eq)) {}
    FamilyTag family() const override { return eq_.family(); }
    JetMap jets(double x, int order) const override { return coefficient_jets(eq_, x, order); }
    const AbelEquation& equation() const { return eq_; }

private:
    AbelEquation eq_;
};

/// T applied to a base equation, sampled in the new variable; each query
/// solves x = f^{-1}(x_new) by Newton iteration seeded near `seed_x`.
class TransformedSource final : public EquationSource {
public:
    TransformedSource(PointTransformation T, AbelEquation base, double seed_x);
    FamilyTag family() const override { return base_.family(); }
    JetMap jets(double x_new, int order) const override;
    double invert_x(double x_new) const;

private:
    PointTransformation T_;
    AbelEquation base_;
    double seed_x_;
};

struct SignatureOptions {
    int order = kDefaultOrder;
    double zero_tol = kDefaultZeroTol;
};

SignatureCurve signature(const EquationSource& source, double x_from, double x_to, int n_samples,
                         const SignatureOptions& opts = {});
SignatureCurve signature(const AbelEquation& eq, double x_from, double x_to, int n_samples,
                         const SignatureOptions& opts = {});

std::string signature_csv(const SignatureCurve& curve);

struct RegularityReport {
    OrbitClass orbit;
    bool orbit_regular;
    bool has_local_coordinate;
    std::string parametrizing_component;  // empty when none qualifies
    std::vector<std::pair<std::string, double>> nabla_values;
};

/// The paper's regularity conditions at one point: (i) regular orbit,
/// (ii)-(iii) some signature component has nonvanishing nabla-derivative.
RegularityReport regularity(const AbelEquation& eq, double x0, int order = kDefaultOrder,
                            double zero_tol = kDefaultZeroTol);

struct EquivalenceVerdict {
    enum class Kind { Equivalent, NotEquivalent, Inconclusive };
    Kind verdict;
    std::string reason;
    double overlap_fraction;
    double max_deviation;  // scaled sup-norm over the matched overlap
};

const char* to_string(EquivalenceVerdict::Kind kind);

/// Point-set comparison of two sampled signature curves: pick the
/// parametrizing component, reparametrize each maximal monotone segment by
/// it, and compare the remaining components on the parameter overlap.
EquivalenceVerdict curves_match(const SignatureCurve& a, const SignatureCurve& b,
                                double tol_rel = 1e-5, double min_overlap = 0.5);

struct EquivalenceOptions {
    double window = 0.5;
    int samples = 128;
    int order = kDefaultOrder;
    double tol_match = 1e-5;
    double zero_tol = kDefaultZeroTol;
    double min_overlap = 0.5;
};

EquivalenceVerdict decide_equivalence(const EquationSource& e1, double x1,
                                      const EquationSource& e2, double x2,
                                      const EquivalenceOptions& opts = {});
EquivalenceVerdict decide_equivalence(const AbelEquation& e1, double x1, const AbelEquation& e2,
                                      double x2, const EquivalenceOptions& opts = {});

}  // namespace abel
