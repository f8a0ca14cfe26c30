#include <doctest.h>

#include <cmath>

#include "abel/equivalence.hpp"
#include "abel/invariants.hpp"
#include "abel/model.hpp"
#include "abel/sampling.hpp"

using namespace abel;

namespace {

AbelEquation cubic_plus_x() {
    return load_equation(R"({"family":"k3","coefficients":{"a":"1","b":"0","c":"0","d":"x"}})");
}

AbelEquation cubic_plus_x2() {
    return load_equation(R"({"family":"k3","coefficients":{"a":"1","b":"0","c":"0","d":"x^2"}})");
}

}  // namespace

TEST_CASE("signature components follow the theorem lists") {
    CHECK(signature_components(FamilyTag::K3).size() == 2);
    CHECK(signature_components(FamilyTag::K4).size() == 4);
    CHECK(signature_components(FamilyTag::K4S).size() == 2);
    CHECK(signature_components(FamilyTag::K5).size() == 6);
    CHECK(signature_components(FamilyTag::K5S1).size() == 4);
    CHECK(signature_components(FamilyTag::K5S2).size() == 2);
    for (FamilyTag family : all_families()) {
        CHECK(static_cast<int>(signature_components(family).size()) ==
              family_info(family).signature_dimension);
    }
    const auto k4 = signature_components(FamilyTag::K4);
    CHECK(k4[0].label == "J1");
    CHECK(k4[1].label == "J2");
    CHECK(k4[2].label == "nabla_J1");
    CHECK(k4[3].label == "nabla_J2");
}

TEST_CASE("signature of y' = y^3 + x matches the closed form") {
    const SignatureCurve curve = signature(cubic_plus_x(), 1.0, 2.0, 64, {});
    REQUIRE(curve.xs.size() == 64);
    const double c = std::pow(3.0, -2.0 / 3.0);
    for (std::size_t i = 0; i < curve.xs.size(); ++i) {
        REQUIRE(curve.defined[i]);
        const double x = curve.xs[i];
        CHECK(curve.values[i][0] == doctest::Approx(1.0 / (9.0 * std::pow(x, 5))).epsilon(1e-12));
        CHECK(curve.values[i][1] ==
              doctest::Approx(-(5.0 / 9.0) * c * std::pow(x, -20.0 / 3.0)).epsilon(1e-10));
    }
}

TEST_CASE("constant-coefficient equations degenerate to a point") {
    const AbelEquation consts(FamilyTag::K4,
                              {Expression::number(1.0), Expression::number(0.0),
                               Expression::number(1.0), Expression::number(0.0),
                               Expression::number(1.0)});
    const SignatureCurve curve = signature(consts, -1.0, 1.0, 16, {});
    for (std::size_t i = 1; i < curve.xs.size(); ++i) {
        CHECK(curve.values[i][0] == doctest::Approx(curve.values[0][0]));
    }
    const RegularityReport reg = regularity(consts, 0.0);
    CHECK(reg.orbit_regular);
    CHECK(!reg.has_local_coordinate);

    const EquivalenceVerdict v = decide_equivalence(consts, 0.0, consts, 0.0, {});
    CHECK(v.verdict == EquivalenceVerdict::Kind::Inconclusive);
}

TEST_CASE("samples crossing the singular locus are masked") {
    // s3 = -3x crosses zero at the middle sample
    const SignatureCurve curve = signature(cubic_plus_x(), -0.5, 0.5, 65, {});
    CHECK(!curve.defined[32]);
    CHECK(curve.defined[0]);
    CHECK(curve.defined[64]);
}

TEST_CASE("regularity report for the worked example") {
    const RegularityReport reg = regularity(cubic_plus_x(), 1.0);
    CHECK(reg.orbit_regular);
    CHECK(reg.has_local_coordinate);
    CHECK(reg.parametrizing_component == "J1");

    const AbelEquation pure = load_equation(
        R"({"family":"k3","coefficients":{"a":"1","b":"0","c":"0","d":"0"}})");
    const RegularityReport sing = regularity(pure, 0.0);
    CHECK(!sing.orbit_regular);
    CHECK(sing.orbit.tag == OrbitTag::SingularCubicS3Zero);
}

TEST_CASE("a curve matches itself") {
    const SignatureCurve s = signature(cubic_plus_x(), 1.0, 2.0, 64, {});
    const EquivalenceVerdict v = curves_match(s, s);
    CHECK(v.verdict == EquivalenceVerdict::Kind::Equivalent);
    CHECK(v.max_deviation == doctest::Approx(0.0).scale(1.0));
    CHECK(v.overlap_fraction == doctest::Approx(1.0));
}

TEST_CASE("transformed equations match their source") {
    Rng rng(109);
    const double x1 = 0.2;
    EquationSampling eopts;
    eopts.window = 1.2;
    const AbelEquation eq = random_equation(FamilyTag::K3, rng, x1, eopts);
    TransformSampling topts;
    topts.window = 0.6;
    const PointTransformation T = random_transformation(rng, x1, topts);
    const double x2 = T.f.eval(x1);

    const ExpressionSource src1(eq);
    const TransformedSource src2(T, eq, x1);
    const SignatureCurve s1 = signature(src1, x1 - 0.5, x1 + 0.5, 96, {});
    const SignatureCurve s2 = signature(src2, x2 - 0.5, x2 + 0.5, 96, {});
    const EquivalenceVerdict v = curves_match(s1, s2);
    // reparametrization invariance: the image does not depend on the sampling
    if (v.verdict == EquivalenceVerdict::Kind::Equivalent) {
        CHECK(v.max_deviation <= 1e-5);
    } else {
        // conditioning may fail for an unlucky seed; the acceptance suite runs
        // hundreds of conditioned trials, this one pins a single seeded case
        FAIL("seeded constructive pair did not match: " << v.reason);
    }
}

TEST_CASE("y' = y^3 + x is not equivalent to y' = y^3 + x^2") {
    // closed-form signature oracle:
    //   E1: j1 = (1/9) x^-5,   j11 = -(5/9) 3^(-2/3) x^(-20/3)
    //   E2: j1 = (8/9) x^-7,   j11 = -(56/9) 3^(-2/3) x^(-28/3)
    // eliminating x, at a common j1 the j11 values differ by the factor
    //   (56/5) 8^(-4/3) = 0.7, so the curves are distinct point sets.
    const double c = std::pow(3.0, -2.0 / 3.0);
    auto j11_of_j1_e1 = [&](double j1) {
        return -(5.0 / 9.0) * c * std::pow(9.0 * j1, 4.0 / 3.0);
    };
    auto j11_of_j1_e2 = [&](double j1) {
        return -(56.0 / 9.0) * c * std::pow(9.0 / 8.0 * j1, 4.0 / 3.0);
    };
    const double probe = 0.05;
    const double ratio = j11_of_j1_e2(probe) / j11_of_j1_e1(probe);
    CHECK(ratio == doctest::Approx(56.0 / 5.0 * std::pow(8.0, -4.0 / 3.0)));
    CHECK(std::abs(ratio - 1.0) > 0.25);

    // the sampled signatures agree with the closed forms
    const SignatureCurve s2 = signature(cubic_plus_x2(), 1.0, 1.5, 32, {});
    for (std::size_t i = 0; i < s2.xs.size(); ++i) {
        const double x = s2.xs[i];
        CHECK(s2.values[i][0] == doctest::Approx((8.0 / 9.0) * std::pow(x, -7)).epsilon(1e-10));
    }

    const EquivalenceVerdict v = decide_equivalence(cubic_plus_x(), 1.0, cubic_plus_x2(), 1.0, {});
    CHECK(v.verdict == EquivalenceVerdict::Kind::NotEquivalent);
}

TEST_CASE("disjoint parameter ranges are inconclusive, never equivalent") {
    const AbelEquation eq = cubic_plus_x();
    const SignatureCurve near = signature(eq, 1.0, 1.5, 32, {});
    const SignatureCurve far = signature(eq, 3.0, 3.5, 32, {});
    const EquivalenceVerdict v = curves_match(near, far);
    CHECK(v.verdict == EquivalenceVerdict::Kind::Inconclusive);
}

TEST_CASE("family mismatch handling") {
    Rng rng(113);
    const AbelEquation k4 = random_equation(FamilyTag::K4, rng, 0.2);
    const AbelEquation k4s = random_equation(FamilyTag::K4S, rng, 0.2);
    // regular k4 against the singular parametrization: distinct I1 loci
    const EquivalenceVerdict v = decide_equivalence(ExpressionSource(k4), 0.2,
                                                    ExpressionSource(k4s), 0.2, {});
    CHECK(v.verdict == EquivalenceVerdict::Kind::NotEquivalent);

    // a k4 input that actually lies in the I1 = 0 class: out of scope, honest
    const AbelEquation embedded = expand_singular(k4s);
    const EquivalenceVerdict v2 = decide_equivalence(ExpressionSource(embedded), 0.2,
                                                     ExpressionSource(k4s), 0.2, {});
    CHECK(v2.verdict == EquivalenceVerdict::Kind::Inconclusive);

    const AbelEquation k3 = cubic_plus_x();
    CHECK_THROWS_AS(decide_equivalence(k3, 1.0, k4, 1.0, {}), FamilyMismatch);
}

TEST_CASE("within-family orbit-class mismatch is NotEquivalent") {
    Rng rng(127);
    const AbelEquation k4s = random_equation(FamilyTag::K4S, rng, 0.2);
    const AbelEquation embedded = expand_singular(k4s);  // I1 = 0 identically
    const AbelEquation regular = random_equation(FamilyTag::K4, rng, 0.2);
    const EquivalenceVerdict v = decide_equivalence(regular, 0.2, embedded, 0.2, {});
    CHECK(v.verdict == EquivalenceVerdict::Kind::NotEquivalent);
}

TEST_CASE("CSV export format") {
    const SignatureCurve curve = signature(cubic_plus_x(), 1.0, 2.0, 8, {});
    const std::string csv = signature_csv(curve);
    CHECK(csv.substr(0, csv.find('\n')) == "x,J1,nabla_J1,defined");
    // one header plus eight rows, LF endings
    int lines = 0;
    for (char ch : csv) lines += ch == '\n';
    CHECK(lines == 9);
    CHECK(csv.find("defined\n1,") != std::string::npos);
}
