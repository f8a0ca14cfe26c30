#include "abel/lie.hpp"

#include <cmath>

#include "abel/invariants.hpp"
#include "abel/transform.hpp"
#include "aligned_ops.hpp"

namespace abel {

namespace {

using aligned::D;
using aligned::V;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Printed base components of X-hat on the fiber coordinates, as jets along
/// the section.
std::map<std::string, Jet> base_components(const InfinitesimalGenerator& gen, const JetPoint& at,
                                           int n) {
    const double x0 = at.x();
    V xi(gen.xi.eval_jet(x0, n)), eta(gen.eta.eval_jet(x0, n)), zeta(gen.zeta.eval_jet(x0, n));
    V xip = D(xi), etap = D(eta), zetap = D(zeta);
    std::map<std::string, Jet> out;
    switch (at.family) {
        case FamilyTag::K3: {
            V a(at.jets.at("a")), b(at.jets.at("b")), c(at.jets.at("c")), d(at.jets.at("d"));
            out.emplace("a", (-(2.0 * eta + xip) * a).j);
            out.emplace("b", (-(xip * b + 3.0 * (zeta * a) + eta * b)).j);
            out.emplace("c", (etap - xip * c - 2.0 * (zeta * b)).j);
            out.emplace("d", (zetap - zeta * c + eta * d - xip * d).j);
            return out;
        }
        case FamilyTag::K4: {
            V a(at.jets.at("a")), b(at.jets.at("b")), c(at.jets.at("c")), d(at.jets.at("d")),
                e(at.jets.at("e"));
            out.emplace("a", (-(3.0 * eta + xip) * a).j);
            out.emplace("b", (-(xip * b + 4.0 * (zeta * a) + 2.0 * (eta * b))).j);
            out.emplace("c", (-(xip * c + 3.0 * (zeta * b) + eta * c)).j);
            out.emplace("d", (etap - 2.0 * (zeta * c) - xip * d).j);
            out.emplace("e", (zetap - zeta * d + eta * e - xip * e).j);
            return out;
        }
        case FamilyTag::K4S: {
            V p(at.jets.at("p")), q(at.jets.at("q")), r(at.jets.at("r")), s(at.jets.at("s"));
            out.emplace("p", (-0.25 * ((3.0 * eta + xip) * p)).j);
            out.emplace("q", (0.25 * ((eta - xip) * q - 4.0 * (zeta * p))).j);
            out.emplace("r", (etap - xip * r).j);
            out.emplace("s", (zetap + (eta - xip) * s - zeta * r).j);
            return out;
        }
        default:
            throw Error("no printed generator for this family");
    }
}

}  // namespace

double ProlongedComponents::l2_norm() const {
    double acc = 0.0;
    for (const auto& [_, comps] : phi) {
        for (double v : comps) acc += v * v;
    }
    return std::sqrt(acc);
}

ProlongedComponents prolong_coefficients(const InfinitesimalGenerator& gen, int k,
                                         const JetPoint& at) {
    if (at.family == FamilyTag::K5 || at.family == FamilyTag::K5S1 ||
        at.family == FamilyTag::K5S2) {
        return prolong_via_finite_action(gen, k, at);
    }
    int n = at.jets.begin()->second.order();
    for (const auto& [_, j] : at.jets) n = std::min(n, j.order());
    if (n < k + 1) {
        throw OrderTooLow("prolongation to order " + std::to_string(k) +
                          " needs jets of order >= " + std::to_string(k + 1));
    }
    const Jet xi_jet = gen.xi.eval_jet(at.x(), n);
    auto base = base_components(gen, at, n);

    ProlongedComponents out;
    for (const auto& [name, phi0] : base) {
        std::vector<double> comps;
        comps.reserve(k + 1);
        Jet phi = phi0;
        comps.push_back(phi.value());
        Jet u_deriv = at.jets.at(name);
        for (int i = 1; i <= k; ++i) {
            u_deriv = u_deriv.derivative();  // the coordinate u^(i) along the section
            phi = (D(V(phi)) - V(u_deriv) * D(V(xi_jet))).j;
            comps.push_back(phi.value());
        }
        out.phi.emplace(name, std::move(comps));
    }
    return out;
}

ProlongedComponents prolong_via_finite_action(const InfinitesimalGenerator& gen, int k,
                                              const JetPoint& at, double step) {
    int n = at.jets.begin()->second.order();
    for (const auto& [_, j] : at.jets) n = std::min(n, j.order());
    if (n < k) throw OrderTooLow("jets too shallow for the requested prolongation order");

    JetMap coeffs;
    for (const auto& [name, j] : at.jets) coeffs.emplace(name, j.truncated(k));

    const double x0 = at.x();
    auto shifted = [&](double t) {
        const Expression tt = Expression::number(t);
        Expression f = Expression::variable() + tt * gen.xi;
        Expression g = Expression::number(1.0) + tt * gen.eta;
        Expression h = tt * gen.zeta;
        return apply_jets(at.family, coeffs, f.eval_jet(x0, k + 1), g.eval_jet(x0, k + 1),
                          h.eval_jet(x0, k + 1));
    };
    TransformedJets plus = shifted(step);
    TransformedJets minus = shifted(-step);

    ProlongedComponents out;
    for (const auto& [name, _] : coeffs) {
        std::vector<double> comps(k + 1);
        const Jet& jp = plus.coefficients.at(name);
        const Jet& jm = minus.coefficients.at(name);
        for (int i = 0; i <= k; ++i) {
            comps[i] = (jp.derivative_value(i) - jm.derivative_value(i)) / (2.0 * step);
        }
        out.phi.emplace(name, std::move(comps));
    }
    return out;
}

double DefectReport::normalized() const {
    if (!defined) return kNaN;
    const double denom = gradient_norm * component_norm;
    if (denom < 1e-300) return 0.0;
    return std::abs(defect) / denom;
}

DefectReport infinitesimal_defect(const InfinitesimalGenerator& gen,
                                  std::string_view invariant_name, const JetPoint& at,
                                  bool via_finite_action) {
    int consumed = 0;
    for (const auto& def : absolute_catalog(at.family)) {
        if (invariant_name == def.name) consumed = def.jet_order;
    }
    auto value_of = [&](const JetMap& jets) -> std::optional<double> {
        auto j = absolute_invariant_jet(at.family, invariant_name, jets, kDefaultZeroTol);
        if (!j) return std::nullopt;
        return j->value();
    };
    if (!value_of(at.jets)) return {kNaN, 0.0, 0.0, false};

    ProlongedComponents phi = via_finite_action
                                  ? prolong_via_finite_action(gen, consumed, at)
                                  : prolong_coefficients(gen, consumed, at);

    double defect = 0.0;
    double grad_norm_sq = 0.0;
    double phi_norm_sq = 0.0;
    for (const auto& [name, comps] : phi.phi) {
        const Jet& jet = at.jets.at(name);
        for (int i = 0; i <= consumed; ++i) {
            const double coord = jet.derivative_value(i);
            const double delta = 1e-6 * (1.0 + std::abs(coord));
            double fact = 1.0;
            for (int m = 2; m <= i; ++m) fact *= m;

            auto perturbed = [&](double sign) {
                std::vector<double> c(jet.coeffs().begin(), jet.coeffs().end());
                c[static_cast<std::size_t>(i)] += sign * delta / fact;
                JetMap jets = at.jets;
                jets.erase(name);
                jets.emplace(name, Jet(jet.base_point(), std::move(c)));
                return value_of(jets);
            };
            auto up = perturbed(1.0);
            auto down = perturbed(-1.0);
            if (!up || !down) return {kNaN, 0.0, 0.0, false};
            const double grad = (*up - *down) / (2.0 * delta);
            defect += comps[static_cast<std::size_t>(i)] * grad;
            grad_norm_sq += grad * grad;
            phi_norm_sq += comps[static_cast<std::size_t>(i)] * comps[static_cast<std::size_t>(i)];
        }
    }
    return {defect, std::sqrt(grad_norm_sq), std::sqrt(phi_norm_sq), true};
}

double finite_action_derivative(const InfinitesimalGenerator& gen,
                                std::string_view invariant_name, const AbelEquation& eq, double x0,
                                int order, double step) {
    auto value_at = [&](double t) {
        const Expression tt = Expression::number(t);
        PointTransformation T{Expression::variable() + tt * gen.xi,
                              Expression::number(1.0) + tt * gen.eta, tt * gen.zeta};
        TransformedJets out = apply(T, eq, x0, order);
        auto j = absolute_invariant_jet(eq.family(), invariant_name, out.coefficients);
        if (!j) throw Error("invariant undefined along the one-parameter subgroup");
        return j->value();
    };
    return (value_at(step) - value_at(-step)) / (2.0 * step);
}

}  // namespace abel
