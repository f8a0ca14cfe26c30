#include <doctest.h>

#include <cmath>

#include "abel/invariants.hpp"
#include "abel/lie.hpp"
#include "abel/model.hpp"
#include "abel/sampling.hpp"
#include "abel/transform.hpp"

using namespace abel;

namespace {

InfinitesimalGenerator gen(FamilyTag family, const char* xi, const char* eta, const char* zeta) {
    return {Expression::parse(xi), Expression::parse(eta), Expression::parse(zeta), family};
}

}  // namespace

TEST_CASE("prolongation of simple generators on the cubic family") {
    const AbelEquation eq(FamilyTag::K3,
                          {Expression::parse("x+2"), Expression::parse("x"),
                           Expression::parse("x^2"), Expression::parse("1")});
    const double x0 = 0.5;
    const JetPoint at{FamilyTag::K3, coefficient_jets(eq, x0, 4)};

    // pure scaling eta = 1: component on a is -2a, on a' is -2a'
    const ProlongedComponents scaling = prolong_coefficients(gen(FamilyTag::K3, "0", "1", "0"), 2, at);
    CHECK(scaling.phi.at("a")[0] == doctest::Approx(-2.0 * (x0 + 2)));
    CHECK(scaling.phi.at("a")[1] == doctest::Approx(-2.0));
    CHECK(scaling.phi.at("a")[2] == doctest::Approx(0.0).scale(1.0));

    // xi = x: base component -a, first prolongation -2a'
    const ProlongedComponents shift = prolong_coefficients(gen(FamilyTag::K3, "x", "0", "0"), 1, at);
    CHECK(shift.phi.at("a")[0] == doctest::Approx(-(x0 + 2)));
    CHECK(shift.phi.at("a")[1] == doctest::Approx(-2.0));

    // zeta = 1: component on d is -c
    const ProlongedComponents trans = prolong_coefficients(gen(FamilyTag::K3, "0", "0", "1"), 1, at);
    CHECK(trans.phi.at("d")[0] == doctest::Approx(-(x0 * x0)));
}

TEST_CASE("printed generators agree with the finite-action derivation") {
    Rng rng(89);
    double worst = 0.0;
    for (FamilyTag family : {FamilyTag::K3, FamilyTag::K4, FamilyTag::K4S}) {
        for (int t = 0; t < 10; ++t) {
            const double x0 = rng.uniform(-1.0, 1.0);
            const AbelEquation eq = random_equation(family, rng, x0);
            const InfinitesimalGenerator g{random_polynomial(rng, 3, -1.0, 1.0),
                                           random_polynomial(rng, 3, -1.0, 1.0),
                                           random_polynomial(rng, 3, -1.0, 1.0), family};
            const JetPoint at{family, coefficient_jets(eq, x0, 4)};
            const ProlongedComponents printed = prolong_coefficients(g, 2, at);
            const ProlongedComponents finite = prolong_via_finite_action(g, 2, at);
            const double s = 1.0 + std::max(printed.l2_norm(), finite.l2_norm());
            for (const auto& [name, comps] : printed.phi) {
                for (std::size_t i = 0; i < comps.size(); ++i) {
                    worst = std::max(worst, std::abs(comps[i] - finite.phi.at(name)[i]) / s);
                }
            }
        }
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("absolute invariants have vanishing infinitesimal defect") {
    Rng rng(97);
    double worst = 0.0;
    int done = 0;
    for (FamilyTag family : {FamilyTag::K3, FamilyTag::K4, FamilyTag::K4S}) {
        for (int t = 0; t < 15; ++t) {
            const double x0 = rng.uniform(-1.0, 1.0);
            const AbelEquation eq = random_equation(family, rng, x0);
            const InfinitesimalGenerator g{random_polynomial(rng, 3, -1.0, 1.0),
                                           random_polynomial(rng, 3, -1.0, 1.0),
                                           random_polynomial(rng, 3, -1.0, 1.0), family};
            int max_order = 0;
            for (const auto& def : absolute_catalog(family)) {
                max_order = std::max(max_order, def.jet_order);
            }
            const JetPoint at{family, coefficient_jets(eq, x0, max_order + 1)};
            for (const auto& def : absolute_catalog(family)) {
                const DefectReport rep = infinitesimal_defect(g, def.name, at);
                if (!rep.defined) continue;
                ++done;
                worst = std::max(worst, rep.normalized());
            }
        }
    }
    CHECK(done >= 60);
    CHECK(worst <= 1e-6);
}

TEST_CASE("relative invariants pick up the weight eigenvalue") {
    // under pure scaling eta = 1, d/dt s3(T_t . E) = -3 s3 (the g-exponent)
    Rng rng(101);
    const double x0 = 0.4;
    const AbelEquation eq = random_equation(FamilyTag::K3, rng, x0);
    const double s3 = relative_invariant_jet(FamilyTag::K3, "s3",
                                             coefficient_jets(eq, x0, 2)).value();
    const double step = 1e-5;
    auto s3_at = [&](double t) {
        const PointTransformation T{Expression::variable(),
                                    Expression::number(1.0 + t), Expression::number(0.0)};
        return relative_invariant_jet(FamilyTag::K3, "s3", apply(T, eq, x0, 2).coefficients)
            .value();
    };
    const double eigen = (s3_at(step) - s3_at(-step)) / (2.0 * step) / s3;
    CHECK(eigen == doctest::Approx(-3.0).epsilon(1e-6));
}

TEST_CASE("finite action derivative vanishes for quintic absolute invariants") {
    Rng rng(103);
    double worst = 0.0;
    for (FamilyTag family : {FamilyTag::K5, FamilyTag::K5S1, FamilyTag::K5S2}) {
        for (int t = 0; t < 10; ++t) {
            const double x0 = rng.uniform(-1.0, 1.0);
            const AbelEquation eq = random_equation(family, rng, x0);
            const InfinitesimalGenerator g{random_polynomial(rng, 2, -1.0, 1.0),
                                           random_polynomial(rng, 2, -1.0, 1.0),
                                           random_polynomial(rng, 2, -1.0, 1.0), family};
            for (const auto& def : absolute_catalog(family)) {
                const double j0 =
                    absolute_invariant_jet(family, def.name, coefficient_jets(eq, x0, 4))->value();
                const double dd = finite_action_derivative(g, def.name, eq, x0, 4);
                worst = std::max(worst, std::abs(dd) / (1.0 + std::abs(j0)));
            }
        }
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("quintic defects via the finite-action prolongation") {
    Rng rng(107);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const double x0 = rng.uniform(-1.0, 1.0);
        const AbelEquation eq = random_equation(FamilyTag::K5, rng, x0);
        const InfinitesimalGenerator g{random_polynomial(rng, 2, -1.0, 1.0),
                                       random_polynomial(rng, 2, -1.0, 1.0),
                                       random_polynomial(rng, 2, -1.0, 1.0), FamilyTag::K5};
        const JetPoint at{FamilyTag::K5, coefficient_jets(eq, x0, 3)};
        for (const char* name : {"J0", "J1", "J2"}) {
            const DefectReport rep = infinitesimal_defect(g, name, at, true);
            if (rep.defined) worst = std::max(worst, rep.normalized());
        }
    }
    CHECK(worst <= 1e-6);
}
