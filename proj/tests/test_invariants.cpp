#include <doctest.h>

#include <cmath>

#include "abel/invariants.hpp"
#include "abel/model.hpp"
#include "abel/sampling.hpp"
#include "abel/transform.hpp"

using namespace abel;

namespace {

JetMap const_jets(FamilyTag family, std::initializer_list<double> values, int order = 4) {
    const FamilyInfo& info = family_info(family);
    JetMap jets;
    auto it = values.begin();
    for (const char* name : info.coefficient_names) {
        jets.emplace(name, Jet::constant(0.0, *it++, order));
    }
    return jets;
}

AbelEquation cubic_plus_x() {
    return load_equation(R"({"family":"k3","coefficients":{"a":"1","b":"0","c":"0","d":"x"}})");
}

}  // namespace

TEST_CASE("relative invariants at hand-substituted points") {
    // s3 = -(2/9) b^3 for constants with c = d = 0
    CHECK(relative_invariant_jet(FamilyTag::K3, "s3", const_jets(FamilyTag::K3, {1, 3, 0, 0}))
              .value() == doctest::Approx(-6.0));

    // only 64 a^3 c d survives for a=1, b=0, c=1, d=1
    CHECK(relative_invariant_jet(FamilyTag::K4, "I3", const_jets(FamilyTag::K4, {1, 0, 1, 1, 0}))
              .value() == doctest::Approx(64.0));

    const JetMap k5 = const_jets(FamilyTag::K5, {1, 1, 1, 1, 0, 0});
    CHECK(relative_invariant_jet(FamilyTag::K5, "K1", k5).value() == doctest::Approx(3.0));
    CHECK(relative_invariant_jet(FamilyTag::K5, "K2", k5).value() == doctest::Approx(14.0));
}

TEST_CASE("cubic chain on constant and polynomial data") {
    const JetMap consts = const_jets(FamilyTag::K3, {1, 0, 1, 1});
    CHECK(cubic_chain(consts, 1).value() == doctest::Approx(-3.0));
    CHECK(cubic_chain(consts, 2).value() == doctest::Approx(9.0));

    const JetMap jets = coefficient_jets(cubic_plus_x(), 1.0, 4);
    CHECK(cubic_chain(jets, 1).value() == doctest::Approx(-3.0));
    CHECK(cubic_chain(jets, 2).value() == doctest::Approx(-3.0));
    CHECK(cubic_chain(jets, 3).value() == doctest::Approx(0.0).scale(1.0));

    // homogeneity: s_{2n-1} = 0 in a neighborhood forces s_{2n+1} = 0
    const AbelEquation member(FamilyTag::K3,
                              {Expression::number(1.0), Expression::variable(),
                               Expression::number(0.0), Expression::parse("-(1 + (2/9)*x^3)/3")});
    const JetMap zero3 = coefficient_jets(member, 0.7, 4);
    CHECK(std::abs(cubic_chain(zero3, 1).value()) <= 1e-12);
    CHECK(std::abs(cubic_chain(zero3, 2).value()) <= 1e-12);
}

TEST_CASE("absolute invariants at hand-substituted points") {
    const JetMap jets = coefficient_jets(cubic_plus_x(), 1.0, 4);
    CHECK(absolute_invariant_jet(FamilyTag::K3, "J1", jets)->value() ==
          doctest::Approx(1.0 / 9.0).epsilon(1e-12));

    // I1 = 8, I2 = 13, I3 = 64 by substitution; scalar oracle for the power
    const JetMap k4 = const_jets(FamilyTag::K4, {1, 0, 1, 1, 1});
    CHECK(absolute_invariant_jet(FamilyTag::K4, "J1", k4)->value() ==
          doctest::Approx(13.0 / 64.0));
    CHECK(absolute_invariant_jet(FamilyTag::K4, "J2", k4)->value() ==
          doctest::Approx(64.0 / std::pow(8.0, 2.5)));

    // M2 = 3, M4 = -15; scalar oracle for 3^(9/5)
    const JetMap k5s2 = const_jets(FamilyTag::K5S2, {1, 0, 1, 3});
    CHECK(absolute_invariant_jet(FamilyTag::K5S2, "J", k5s2)->value() ==
          doctest::Approx(-15.0 / std::pow(3.0, 1.8)).epsilon(1e-12));
}

TEST_CASE("derivation coefficients use the real-branch powers") {
    CHECK(derivation_coefficient(FamilyTag::K3, const_jets(FamilyTag::K3, {1, 0, 1, 1})).value ==
          doctest::Approx(std::pow(3.0, -2.0 / 3.0)));
    CHECK(derivation_coefficient(FamilyTag::K4, const_jets(FamilyTag::K4, {1, 0, 1, 0, 1})).value ==
          doctest::Approx(std::pow(8.0, -1.5)));
    CHECK(derivation_coefficient(FamilyTag::K5, const_jets(FamilyTag::K5, {1, 1, 1, 1, 0, 0})).value ==
          doctest::Approx(1.0 / 9.0));
}

TEST_CASE("soft failure on singular denominators") {
    // s3 = -3x vanishes at x0 = 0
    const JetMap jets = coefficient_jets(cubic_plus_x(), 0.0, 4);
    CHECK(!absolute_invariant_jet(FamilyTag::K3, "J1", jets).has_value());
    const auto values = absolute_invariants(FamilyTag::K3, jets);
    for (const auto& v : values) CHECK(!v.defined);
    CHECK(!derivation_coefficient(FamilyTag::K3, jets).defined);
    CHECK(!nabla_power(FamilyTag::K3, jets, "J1", 1).defined);
}

TEST_CASE("nabla kills constants and matches the finite-difference oracle") {
    const JetMap k4 = const_jets(FamilyTag::K4, {1, 0, 1, 1, 1});
    CHECK(std::abs(nabla_power(FamilyTag::K4, k4, "J1", 1).value) <= 1e-14);
    CHECK(std::abs(nabla_power(FamilyTag::K4, k4, "J2", 1).value) <= 1e-14);

    const AbelEquation eq = cubic_plus_x();
    const JetMap jets = coefficient_jets(eq, 1.0, 8);
    const double closed = -(5.0 / 9.0) * std::pow(3.0, -2.0 / 3.0);
    CHECK(nabla_power(FamilyTag::K3, jets, "J1", 1).value ==
          doctest::Approx(closed).epsilon(1e-11));

    const double delta = 1e-3;
    auto j1_at = [&](double x) {
        return absolute_invariant_jet(FamilyTag::K3, "J1", coefficient_jets(eq, x, 8))->value();
    };
    const double a_val = derivation_coefficient(FamilyTag::K3, jets).value;
    // fourth-order central stencil keeps the oracle below 1e-12
    const double fd = a_val *
                      (-j1_at(1 + 2 * delta) + 8 * j1_at(1 + delta) - 8 * j1_at(1 - delta) +
                       j1_at(1 - 2 * delta)) /
                      (12 * delta);
    CHECK(nabla_power(FamilyTag::K3, jets, "J1", 1).value == doctest::Approx(fd).epsilon(1e-9));

    auto n1_at = [&](double x) {
        return nabla_power(FamilyTag::K3, coefficient_jets(eq, x, 8), "J1", 1).value;
    };
    const double fd2 = a_val *
                       (-n1_at(1 + 2 * delta) + 8 * n1_at(1 + delta) - 8 * n1_at(1 - delta) +
                        n1_at(1 - 2 * delta)) /
                       (12 * delta);
    CHECK(nabla_power(FamilyTag::K3, jets, "J1", 2).value == doctest::Approx(fd2).epsilon(1e-5));
}

TEST_CASE("order bookkeeping raises OrderTooLow") {
    const JetMap shallow = coefficient_jets(cubic_plus_x(), 1.0, 1);
    CHECK_THROWS_AS(absolute_invariant_jet(FamilyTag::K3, "J1", shallow), OrderTooLow);
    CHECK_THROWS_AS(cubic_chain(shallow, 3), OrderTooLow);
    CHECK_THROWS_AS(relative_invariant_jet(FamilyTag::K3, "nope", shallow), UnknownInvariant);
}

TEST_CASE("Tresse derivative") {
    const AbelEquation eq = cubic_plus_x();
    const InvariantValue self = tresse_derivative(eq, 1.0, "J1", "J1");
    CHECK(self.value == doctest::Approx(1.0));

    Rng rng(73);
    const AbelEquation consts(FamilyTag::K3,
                              {Expression::number(1.0), Expression::number(0.0),
                               Expression::number(1.0), Expression::number(1.0)});
    CHECK_THROWS_AS(tresse_derivative(consts, 0.0, "J1", "J2"), TresseDenominatorVanishes);

    // DF/DJ * nabla J = nabla F on random regular cubic samples
    double worst = 0.0;
    int done = 0;
    for (int t = 0; t < 60 && done < 20; ++t) {
        const double x0 = rng.uniform(-1.0, 1.0);
        const AbelEquation sample = random_equation(FamilyTag::K3, rng, x0);
        const JetMap jets = coefficient_jets(sample, x0, 8);
        const double nj = nabla_power(FamilyTag::K3, jets, "J2", 1).value;
        const double nf = nabla_power(FamilyTag::K3, jets, "J1", 1).value;
        if (!std::isfinite(nj) || std::abs(nj) < 1e-4) continue;
        try {
            const InvariantValue lambda = tresse_derivative(sample, x0, "J1", "J2");
            ++done;
            worst = std::max(worst,
                             std::abs(lambda.value * nj - nf) / (1.0 + std::abs(nf)));
        } catch (const TresseDenominatorVanishes&) {
            continue;
        }
    }
    CHECK(done >= 10);
    CHECK(worst <= 1e-8);
}

TEST_CASE("weight_fit recovers the catalog exponents") {
    const WeightFit s1 = weight_fit(FamilyTag::K3, "s1", 20, 1001);
    CHECK(s1.g_exponent == Rational{-2, 1});
    CHECK(s1.fp_exponent == Rational{-1, 1});
    CHECK(s1.residual <= 1e-6);

    const WeightFit i0 = weight_fit(FamilyTag::K4, "I0", 20, 1002);
    CHECK(i0.g_exponent == Rational{-3, 1});
    CHECK(i0.fp_exponent == Rational{-1, 1});

    const WeightFit l0 = weight_fit(FamilyTag::K4S, "L0", 20, 1003);
    CHECK(l0.g_exponent == Rational{-3, 4});
    CHECK(l0.fp_exponent == Rational{-1, 4});

    // identity transformation: multiplier is exactly 1
    Rng rng(79);
    const AbelEquation eq = random_equation(FamilyTag::K3, rng, 0.5);
    const JetMap before = coefficient_jets(eq, 0.5, 4);
    const TransformedJets after = apply(identity_transformation(), eq, 0.5, 4);
    for (const auto& def : relative_catalog(FamilyTag::K3)) {
        CHECK(def.eval(after.coefficients).value() ==
              doctest::Approx(def.eval(before).value()).epsilon(1e-13));
    }
}

TEST_CASE("canonical_check recognizes the canonical shapes") {
    CHECK(canonical_check(cubic_plus_x(), 1.0));
    const AbelEquation with_b = load_equation(
        R"({"family":"k3","coefficients":{"a":"1","b":"1","c":"0","d":"0"}})");
    CHECK(!canonical_check(with_b, 0.0));
    const AbelEquation k4 = load_equation(
        R"({"family":"k4","coefficients":{"a":"1","b":"0","c":"x","d":"0","e":"1"}})");
    CHECK(canonical_check(k4, 0.5));
    // pointwise zeros that are not identical zeros do not count
    const AbelEquation fake = load_equation(
        R"({"family":"k3","coefficients":{"a":"1","b":"x","c":"0","d":"1"}})");
    CHECK(!canonical_check(fake, 0.0));
}

TEST_CASE("absolute invariance under orientation reversal (cubic family)") {
    Rng rng(83);
    const double x0 = 0.3;
    const AbelEquation eq = random_equation(FamilyTag::K3, rng, x0);
    TransformSampling opts;
    opts.orientation_reversing = true;
    const PointTransformation T = random_transformation(rng, x0, opts);
    const JetMap before = coefficient_jets(eq, x0, 8);
    const TransformedJets after = apply(T, eq, x0, 8);
    const double j1b = absolute_invariant_jet(FamilyTag::K3, "J1", before)->value();
    const double j1a = absolute_invariant_jet(FamilyTag::K3, "J1", after.coefficients)->value();
    CHECK(j1a == doctest::Approx(j1b).epsilon(1e-9));
    // and nabla J1 is insensitive to the reversal as well (integer-power ratios)
    const double n1b = nabla_power(FamilyTag::K3, before, "J1", 1).value;
    const double n1a = nabla_power(FamilyTag::K3, after.coefficients, "J1", 1).value;
    CHECK(n1a == doctest::Approx(n1b).epsilon(1e-8));
}
