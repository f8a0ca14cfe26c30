#include <doctest.h>

#include <cmath>

#include "abel/invariants.hpp"
#include "abel/model.hpp"
#include "abel/sampling.hpp"
#include "abel/transform.hpp"

using namespace abel;

namespace {

AbelEquation pure_cubic() {
    return load_equation(R"({"family":"k3","coefficients":{"a":"1","b":"0","c":"0","d":"0"}})");
}

double jets_dist(const JetMap& a, const JetMap& b) {
    double m = 0.0;
    for (const auto& [name, j] : a) {
        const Jet& other = b.at(name);
        const double s = 1.0 + std::max(j.max_abs_coeff(), other.max_abs_coeff());
        for (int i = 0; i <= std::min(j.order(), other.order()); ++i) {
            m = std::max(m, std::abs(j.coeff(i) - other.coeff(i)) / s);
        }
    }
    return m;
}

/// Pointwise right-hand sides of the original and transformed equations must
/// satisfy the chain rule at matched (x, y) pairs.
double flow_residual(const AbelEquation& eq, const PointTransformation& T, double x0, double y) {
    const TransformedJets out = apply(T, eq, x0, 4);
    const FamilyInfo& info = eq.info();
    const double g = T.g.eval(x0);
    const double h = T.h.eval(x0);
    const double gp = T.g.derivative().eval(x0);
    const double hp = T.h.derivative().eval(x0);
    const double fp = T.f.eval_jet(x0, 1).coeff(1);

    double rhs = 0.0;
    if (!info.singular) {
        for (std::size_t i = 0; i < info.coefficient_names.size(); ++i) {
            rhs = rhs * y + eq.coefficients()[i].eval(x0);
        }
    } else {
        const double p = eq.coefficient("p").eval(x0);
        const double q = eq.coefficient("q").eval(x0);
        rhs = std::pow(p * y + q, info.degree);
        if (eq.family() == FamilyTag::K4S) {
            rhs += eq.coefficient("r").eval(x0) * y + eq.coefficient("s").eval(x0);
        } else if (eq.family() == FamilyTag::K5S1) {
            rhs += eq.coefficient("r").eval(x0) * y * y + eq.coefficient("s").eval(x0) * y +
                   eq.coefficient("t").eval(x0);
        } else {
            rhs += eq.coefficient("s").eval(x0) * y + eq.coefficient("t").eval(x0);
        }
    }
    const double expected = (gp * y + g * rhs + hp) / fp;

    const double y_new = g * y + h;
    double transformed = 0.0;
    if (!info.singular) {
        for (const char* name : info.coefficient_names) {
            transformed = transformed * y_new + out.coefficients.at(name).value();
        }
    } else {
        const double p = out.coefficients.at("p").value();
        const double q = out.coefficients.at("q").value();
        transformed = std::pow(p * y_new + q, info.degree);
        if (eq.family() == FamilyTag::K4S) {
            transformed += out.coefficients.at("r").value() * y_new +
                           out.coefficients.at("s").value();
        } else if (eq.family() == FamilyTag::K5S1) {
            transformed += out.coefficients.at("r").value() * y_new * y_new +
                           out.coefficients.at("s").value() * y_new +
                           out.coefficients.at("t").value();
        } else {
            transformed += out.coefficients.at("s").value() * y_new +
                           out.coefficients.at("t").value();
        }
    }
    return std::abs(transformed - expected) / (1.0 + std::abs(expected));
}

}  // namespace

TEST_CASE("the identity transformation fixes coefficients") {
    Rng rng(3);
    for (FamilyTag family : all_families()) {
        const AbelEquation eq = random_equation(family, rng, 0.4);
        const TransformedJets out = apply(identity_transformation(), eq, 0.4, 5);
        CHECK(out.x_new == doctest::Approx(0.4));
        CHECK(jets_dist(out.coefficients, coefficient_jets(eq, 0.4, 5)) <= 1e-12);
    }
}

TEST_CASE("hand-checked pushforwards of y' = y^3") {
    // y~ = 2y: a~ = 1/4
    const TransformedJets scaled = apply(
        {Expression::variable(), Expression::number(2.0), Expression::number(0.0)},
        pure_cubic(), 0.3, 4);
    CHECK(scaled.coefficients.at("a").value() == doctest::Approx(0.25));
    CHECK(scaled.coefficients.at("b").max_abs_coeff() == doctest::Approx(0.0));
    CHECK(scaled.coefficients.at("c").max_abs_coeff() == doctest::Approx(0.0));
    CHECK(scaled.coefficients.at("d").max_abs_coeff() == doctest::Approx(0.0));

    // y~ = y + 1: expand (y~ - 1)^3
    const TransformedJets shifted = apply(
        {Expression::variable(), Expression::number(1.0), Expression::number(1.0)},
        pure_cubic(), 0.3, 4);
    CHECK(shifted.coefficients.at("a").value() == doctest::Approx(1.0));
    CHECK(shifted.coefficients.at("b").value() == doctest::Approx(-3.0));
    CHECK(shifted.coefficients.at("c").value() == doctest::Approx(3.0));
    CHECK(shifted.coefficients.at("d").value() == doctest::Approx(-1.0));
}

TEST_CASE("pushforward agrees with the pointwise flow oracle") {
    Rng rng(47);
    double worst = 0.0;
    for (FamilyTag family : all_families()) {
        for (int t = 0; t < 25; ++t) {
            const double x0 = rng.uniform(-1.0, 1.0);
            const AbelEquation eq = random_equation(family, rng, x0);
            const PointTransformation T = random_transformation(rng, x0);
            for (double y : {-0.7, 0.2, 1.3}) {
                worst = std::max(worst, flow_residual(eq, T, x0, y));
            }
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("composition of transformations") {
    const PointTransformation t1{Expression::parse("2*x"), Expression::number(2.0),
                                 Expression::number(0.0)};
    const PointTransformation t2{Expression::parse("x+1"), Expression::number(3.0),
                                 Expression::number(0.0)};
    const PointTransformation c = compose(t2, t1);
    CHECK(c.f.eval(1.5) == doctest::Approx(4.0));   // 2x + 1
    CHECK(c.g.eval(0.0) == doctest::Approx(6.0));   // scalings multiply

    const PointTransformation ci = compose(identity_transformation(), t1);
    CHECK(ci.f.eval(2.0) == doctest::Approx(t1.f.eval(2.0)));
    CHECK(ci.g.eval(2.0) == doctest::Approx(t1.g.eval(2.0)));
}

TEST_CASE("group laws hold at jet level") {
    Rng rng(53);
    double worst_compose = 0.0, worst_invert = 0.0;
    for (FamilyTag family : all_families()) {
        for (int t = 0; t < 10; ++t) {
            const double x0 = rng.uniform(-1.0, 1.0);
            const AbelEquation eq = random_equation(family, rng, x0);
            const PointTransformation t1 = random_transformation(rng, x0);
            const TransformedJets out1 = apply(t1, eq, x0, 6);
            const PointTransformation t2 = random_transformation(rng, out1.x_new);
            const TransformedJets chained =
                apply_jets(family, out1.coefficients, t2.f.eval_jet(out1.x_new, 7),
                           t2.g.eval_jet(out1.x_new, 7), t2.h.eval_jet(out1.x_new, 7));
            const TransformedJets direct = apply(compose(t2, t1), eq, x0, 6);
            worst_compose = std::max(worst_compose,
                                     jets_dist(chained.coefficients, direct.coefficients));

            const InverseJets inv = invert(t1, x0, 7);
            const TransformedJets back = apply_jets(family, out1.coefficients, inv.f, inv.g, inv.h);
            worst_invert = std::max(worst_invert,
                                    jets_dist(back.coefficients, coefficient_jets(eq, x0, 6)));
        }
    }
    CHECK(worst_compose <= 1e-9);
    CHECK(worst_invert <= 1e-8);
}

TEST_CASE("inversion of a cubic f at jet level") {
    const PointTransformation T{Expression::parse("x^3+x"), Expression::number(1.0),
                                Expression::number(0.0)};
    const InverseJets inv = invert(T, 1.0, 4);
    CHECK(inv.f.base_point() == doctest::Approx(2.0));
    CHECK(inv.f.value() == doctest::Approx(1.0));
    CHECK(inv.f.coeff(1) == doctest::Approx(0.25));

    CHECK_THROWS_AS(invert({Expression::parse("x^2"), Expression::number(1.0),
                            Expression::number(0.0)},
                           0.0, 3),
                    NonInvertibleAtPoint);
}

TEST_CASE("direct singular pushforward matches the expanded route") {
    Rng rng(59);
    double worst = 0.0;
    for (FamilyTag family : {FamilyTag::K4S, FamilyTag::K5S1, FamilyTag::K5S2}) {
        for (int t = 0; t < 15; ++t) {
            const double x0 = rng.uniform(-1.0, 1.0);
            const AbelEquation eq = random_equation(family, rng, x0);
            const PointTransformation T = random_transformation(rng, x0);

            const TransformedJets direct = apply(T, eq, x0, 4);
            const TransformedJets expanded = apply(T, expand_singular(eq), x0, 4);

            // expand the direct (p, q, ...) jets and compare coefficients
            const int k = family_info(family).degree;
            const Jet& p = direct.coefficients.at("p");
            const Jet& q = direct.coefficients.at("q");
            JetMap rebuilt;
            const FamilyInfo& full = family_info(k == 4 ? FamilyTag::K4 : FamilyTag::K5);
            for (int j = k; j >= 0; --j) {
                double binom = 1.0;
                for (int i = 1; i <= k - j; ++i) binom = binom * (j + i) / i;
                Jet term = pow(p, j) * pow(q, k - j) * binom;
                rebuilt.emplace(full.coefficient_names[static_cast<std::size_t>(k - j)], term);
            }
            auto add_to = [&](const char* name, const Jet& extra) {
                Jet cur = rebuilt.at(name);
                rebuilt.erase(name);
                rebuilt.emplace(name, cur + extra);
            };
            if (family == FamilyTag::K4S) {
                add_to("d", direct.coefficients.at("r"));
                add_to("e", direct.coefficients.at("s"));
            } else if (family == FamilyTag::K5S1) {
                add_to("d", direct.coefficients.at("r"));
                add_to("e", direct.coefficients.at("s"));
                add_to("f", direct.coefficients.at("t"));
            } else {
                add_to("e", direct.coefficients.at("s"));
                add_to("f", direct.coefficients.at("t"));
            }
            worst = std::max(worst, jets_dist(rebuilt, expanded.coefficients));
        }
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("residual transformations permute canonical forms") {
    // K3, Y' = Y^3 + 1 under K = 2, h = 0: d~ = d g / f' = 1 * 2 / (1/4) = 8
    const AbelEquation canonical = load_equation(
        R"({"family":"k3","coefficients":{"a":"1","b":"0","c":"0","d":"1"}})");
    const TransformedJets out = residual_apply({2.0, 0.0, 2}, canonical, 0.5, 4);
    CHECK(canonical_check(FamilyTag::K3, out.coefficients, 1e-9));
    CHECK(out.coefficients.at("d").value() == doctest::Approx(8.0));
    CHECK(out.coefficients.at("a").value() == doctest::Approx(1.0));

    const AbelEquation not_canonical = load_equation(
        R"({"family":"k3","coefficients":{"a":"1","b":"1","c":"0","d":"0"}})");
    CHECK_THROWS_AS(residual_apply({2.0, 0.0, 2}, not_canonical, 0.0, 4), NotCanonical);
    CHECK_THROWS_AS(residual_apply({2.0, 0.0, 3}, canonical, 0.0, 4), WrongFamily);

    // K4 canonical shape is preserved for random (K, h)
    Rng rng(61);
    for (int t = 0; t < 20; ++t) {
        const AbelEquation k4 = AbelEquation(
            FamilyTag::K4,
            {Expression::number(1.0), Expression::number(0.0),
             Expression::number(rng.uniform_signed_band(0.5, 2.0)) + Expression::variable(),
             Expression::number(0.0), random_polynomial(rng, 2, -1.0, 1.0)});
        const ResidualTransformation R{rng.uniform_signed_band(0.1, 3.0), rng.uniform(-2.0, 2.0),
                                       3};
        const TransformedJets res = residual_apply(R, k4, rng.uniform(-1.0, 1.0), 5);
        CHECK(canonical_check(FamilyTag::K4, res.coefficients, 1e-9));
    }
}

TEST_CASE("symbolic transforms match the jet route") {
    Rng rng(67);
    // regular family, affine f, polynomial g and h
    const AbelEquation eq = random_equation(FamilyTag::K3, rng, 0.4);
    const PointTransformation T{Expression::parse("x/2+1"), Expression::parse("2+x^2"),
                                Expression::parse("x-1")};
    const AbelEquation sym = apply_symbolic(T, eq);
    const TransformedJets jets = apply(T, eq, 0.4, 5);
    CHECK(jets_dist(coefficient_jets(sym, jets.x_new, 5), jets.coefficients) <= 1e-11);

    // quartic singular family with nonconstant g via nested square roots
    const AbelEquation k4s = random_equation(FamilyTag::K4S, rng, 0.4);
    const AbelEquation sym2 = apply_symbolic(T, k4s);
    const TransformedJets jets2 = apply(T, k4s, 0.4, 5);
    CHECK(jets_dist(coefficient_jets(sym2, jets2.x_new, 5), jets2.coefficients) <= 1e-11);

    // quintic singular family needs a constant g
    const AbelEquation k5s2 = random_equation(FamilyTag::K5S2, rng, 0.4);
    const PointTransformation Tc{Expression::parse("x/2+1"), Expression::parse("3/2"),
                                 Expression::parse("x-1")};
    const AbelEquation sym3 = apply_symbolic(Tc, k5s2);
    const TransformedJets jets3 = apply(Tc, k5s2, 0.4, 5);
    CHECK(jets_dist(coefficient_jets(sym3, jets3.x_new, 5), jets3.coefficients) <= 1e-11);

    CHECK_THROWS_AS(apply_symbolic({Expression::parse("x^3+x"), Expression::number(1.0),
                                    Expression::number(0.0)},
                                   eq),
                    UnsupportedTransform);
    CHECK_THROWS_AS(apply_symbolic(T, k5s2), UnsupportedTransform);
}

TEST_CASE("orientation-reversing f is permitted") {
    Rng rng(71);
    const AbelEquation eq = random_equation(FamilyTag::K3, rng, 0.2);
    TransformSampling opts;
    opts.orientation_reversing = true;
    const PointTransformation T = random_transformation(rng, 0.2, opts);
    const TransformedJets out = apply(T, eq, 0.2, 6);
    // degree preserved, leading coefficient nonzero
    CHECK(std::abs(out.coefficients.at("a").value()) > 1e-6);
}
