#include "abel/transform.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include "abel/invariants.hpp"
#include "aligned_ops.hpp"

namespace abel {

namespace {

double binomial(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

struct Pieces {
    int n;            // working order
    double x_new;
    Jet f_inv;        // at x_new, value x0
    Jet g, h, fp, gp, hp;  // all order n, at x0
};

Pieces split(const JetMap& coefficients, const Jet& f_jet, const Jet& g_jet, const Jet& h_jet) {
    if (coefficients.empty()) throw Error("no coefficient jets");
    const int n = coefficients.begin()->second.order();
    for (const auto& [name, j] : coefficients) {
        if (j.order() != n) throw OrderMismatch("coefficient jets of mixed order");
    }
    if (f_jet.order() != n + 1 || g_jet.order() != n + 1 || h_jet.order() != n + 1) {
        throw OrderTooLow("apply needs (f, g, h) jets one order deeper than the coefficients");
    }
    Jet fp = f_jet.derivative();
    if (fp.value() == 0.0) throw NonInvertibleAtPoint("f'(x0) = 0");
    if (g_jet.value() == 0.0) throw NonInvertibleAtPoint("g(x0) = 0");
    return {n,
            f_jet.value(),
            revert(f_jet).truncated(n),
            g_jet.truncated(n),
            h_jet.truncated(n),
            std::move(fp),
            g_jet.derivative(),
            h_jet.derivative()};
}

}  // namespace

PointTransformation identity_transformation() {
    return {Expression::variable(), Expression::number(1.0), Expression::number(0.0)};
}

TransformedJets apply_jets(FamilyTag family, const JetMap& coefficients, const Jet& f_jet,
                           const Jet& g_jet, const Jet& h_jet) {
    using aligned::V;
    const FamilyInfo& info = family_info(family);
    Pieces pc = split(coefficients, f_jet, g_jet, h_jet);
    JetMap out;

    if (!info.singular) {
        const int k = info.degree;
        // a[i] = coefficient jet of y^i
        std::vector<Jet> a;
        a.reserve(k + 1);
        for (auto it = info.coefficient_names.rbegin(); it != info.coefficient_names.rend(); ++it) {
            a.push_back(coefficients.at(*it));
        }
        std::vector<Jet> gpow;  // gpow[i] = g^(1-i)
        gpow.reserve(k + 1);
        for (int i = 0; i <= k; ++i) gpow.push_back(pow(pc.g, 1 - i));
        std::vector<Jet> mh_pow;  // (-h)^e
        mh_pow.reserve(k + 1);
        for (int e = 0; e <= k; ++e) mh_pow.push_back(pow(-pc.h, e));

        for (int j = 0; j <= k; ++j) {
            Jet acc = Jet::constant(pc.g.base_point(), 0.0, pc.n);
            for (int i = j; i <= k; ++i) {
                acc = acc + binomial(i, j) * (a[i] * gpow[i] * mh_pow[i - j]);
            }
            if (j == 1) acc = acc + pc.gp / pc.g;
            if (j == 0) acc = acc + pc.hp - pc.gp * pc.h / pc.g;
            const char* name = info.coefficient_names[k - j];
            out.emplace(name, compose(acc / pc.fp, pc.f_inv));
        }
        return {pc.x_new, std::move(out)};
    }

    const Jet& p = coefficients.at("p");
    const Jet& q = coefficients.at("q");
    const Jet ratio = pc.g / pc.fp;
    const Jet p_hat = p / pc.g;
    const Jet q_hat = q - p * pc.h / pc.g;

    auto push = [&](const char* name, const Jet& j) { out.emplace(name, compose(j, pc.f_inv)); };

    switch (family) {
        case FamilyTag::K4S: {
            if (ratio.value() <= 0.0) {
                throw DomainError("the (p y + q)^4 parametrization needs g/f' > 0");
            }
            const Jet w = rpow(ratio, 1, 4);
            const Jet& r = coefficients.at("r");
            const Jet& s = coefficients.at("s");
            // (p, q) and (-p, -q) parametrize the same equation; keep p > 0
            const double flip = p_hat.value() * w.value() < 0.0 ? -1.0 : 1.0;
            push("p", flip * (p_hat * w));
            push("q", flip * (q_hat * w));
            push("r", (pc.gp / pc.g + r) / pc.fp);
            push("s", (pc.hp - pc.gp * pc.h / pc.g - r * pc.h + pc.g * s) / pc.fp);
            break;
        }
        case FamilyTag::K5S1: {
            const Jet w = rpow(ratio, 1, 5);
            const Jet& r = coefficients.at("r");
            const Jet& s = coefficients.at("s");
            const Jet& t = coefficients.at("t");
            push("p", p_hat * w);
            push("q", q_hat * w);
            push("r", r / (pc.g * pc.fp));
            push("s", (pc.gp / pc.g + s) / pc.fp - 2.0 * (pc.h * r) / (pc.g * pc.fp));
            push("t", (pc.hp - pc.gp * pc.h / pc.g - s * pc.h + pc.g * t) / pc.fp +
                          r * pc.h * pc.h / (pc.g * pc.fp));
            break;
        }
        case FamilyTag::K5S2: {
            const Jet w = rpow(ratio, 1, 5);
            const Jet& s = coefficients.at("s");
            const Jet& t = coefficients.at("t");
            push("p", p_hat * w);
            push("q", q_hat * w);
            push("s", (pc.gp / pc.g + s) / pc.fp);
            push("t", (pc.hp - pc.gp * pc.h / pc.g - s * pc.h + pc.g * t) / pc.fp);
            break;
        }
        default:
            throw Error("unreachable");
    }
    return {pc.x_new, std::move(out)};
}

TransformedJets apply(const PointTransformation& T, const AbelEquation& eq, double x0, int order) {
    return apply_jets(eq.family(), coefficient_jets(eq, x0, order), T.f.eval_jet(x0, order + 1),
                      T.g.eval_jet(x0, order + 1), T.h.eval_jet(x0, order + 1));
}

PointTransformation compose(const PointTransformation& second, const PointTransformation& first) {
    Expression g2_of_f1 = second.g.substitute(first.f);
    return {second.f.substitute(first.f), g2_of_f1 * first.g,
            g2_of_f1 * first.h + second.h.substitute(first.f)};
}

InverseJets invert(const PointTransformation& T, double x0, int order) {
    Jet fj = T.f.eval_jet(x0, order);
    Jet gj = T.g.eval_jet(x0, order);
    Jet hj = T.h.eval_jet(x0, order);
    if (order < 1 || fj.coeff(1) == 0.0) throw NonInvertibleAtPoint("f'(x0) = 0");
    if (gj.value() == 0.0) throw NonInvertibleAtPoint("g(x0) = 0");
    Jet f_inv = revert(fj);
    Jet g_comp = compose(gj, f_inv);
    Jet g_inv = 1.0 / g_comp;
    Jet h_inv = -(compose(hj, f_inv) * g_inv);
    return {std::move(f_inv), std::move(g_inv), std::move(h_inv)};
}

PointTransformation to_point_transformation(const ResidualTransformation& R) {
    if (R.scale == 0.0) throw NonInvertibleAtPoint("residual transformation needs K != 0");
    const double factor = std::pow(R.scale, -static_cast<double>(R.exponent));
    return {Expression::number(factor) * (Expression::variable() + Expression::number(R.shift)),
            Expression::number(R.scale), Expression::number(0.0)};
}

TransformedJets residual_apply(const ResidualTransformation& R, const AbelEquation& eq, double x0,
                               int order) {
    if (R.exponent != eq.info().degree - 1) {
        throw WrongFamily("residual exponent " + std::to_string(R.exponent) +
                          " does not match family " + eq.info().name);
    }
    if (!canonical_check(eq, x0)) {
        throw NotCanonical("the equation is not in canonical shape at x0 = " + std::to_string(x0));
    }
    return apply(to_point_transformation(R), eq, x0, order);
}

namespace {

/// (slope, intercept) when the expression is the affine function slope*x + intercept.
std::optional<std::pair<double, double>> as_affine(const Expression& e) {
    struct Lin {
        double slope, intercept;
    };
    struct Walk {
        static std::optional<Lin> go(const ExprNode& n) {
            switch (n.kind) {
                case NodeKind::Number: return Lin{0.0, n.number};
                case NodeKind::Variable: return Lin{1.0, 0.0};
                case NodeKind::Negate: {
                    auto u = go(*n.left);
                    if (!u) return std::nullopt;
                    return Lin{-u->slope, -u->intercept};
                }
                case NodeKind::Add:
                case NodeKind::Sub: {
                    auto u = go(*n.left), v = go(*n.right);
                    if (!u || !v) return std::nullopt;
                    const double s = n.kind == NodeKind::Add ? 1.0 : -1.0;
                    return Lin{u->slope + s * v->slope, u->intercept + s * v->intercept};
                }
                case NodeKind::Mul: {
                    auto u = go(*n.left), v = go(*n.right);
                    if (!u || !v) return std::nullopt;
                    if (u->slope != 0.0 && v->slope != 0.0) return std::nullopt;
                    return Lin{u->slope * v->intercept + v->slope * u->intercept,
                               u->intercept * v->intercept};
                }
                case NodeKind::Div: {
                    auto u = go(*n.left), v = go(*n.right);
                    if (!u || !v || v->slope != 0.0 || v->intercept == 0.0) return std::nullopt;
                    return Lin{u->slope / v->intercept, u->intercept / v->intercept};
                }
                case NodeKind::Pow: {
                    auto u = go(*n.left);
                    if (!u || u->slope != 0.0) {
                        if (u && n.exponent == 1) return u;
                        return std::nullopt;
                    }
                    return Lin{0.0, std::pow(u->intercept, static_cast<double>(n.exponent))};
                }
                case NodeKind::Call: {
                    auto u = go(*n.left);
                    if (!u || u->slope != 0.0) return std::nullopt;
                    // constant argument: evaluate the call numerically
                    return Lin{0.0, Expression::apply(n.func, Expression::number(u->intercept)).eval(0.0)};
                }
            }
            return std::nullopt;
        }
    };
    auto lin = Walk::go(e.root());
    if (!lin) return std::nullopt;
    return std::make_pair(lin->slope, lin->intercept);
}

double real_root_scalar(double v, int n) {
    if (v >= 0.0) return std::pow(v, 1.0 / n);
    if (n % 2 == 0) throw DomainError("even root of a negative value");
    return -std::pow(-v, 1.0 / n);
}

}  // namespace

AbelEquation apply_symbolic(const PointTransformation& T, const AbelEquation& eq) {
    const auto affine = as_affine(T.f);
    if (!affine) {
        throw UnsupportedTransform(
            "a symbolic transform needs an affine f (its inverse must live in the grammar); "
            "use the jet-level apply for general f");
    }
    const auto [alpha, beta] = *affine;
    if (alpha == 0.0) throw NonInvertibleAtPoint("f'(x) = 0 for affine f");

    const Expression x = Expression::variable();
    const Expression x_back = (x - Expression::number(beta)) / Expression::number(alpha);
    const Expression fp = Expression::number(alpha);
    const Expression g = T.g;
    const Expression h = T.h;
    const Expression gp = g.derivative();
    const Expression hp = h.derivative();
    const FamilyInfo& info = eq.info();

    auto back = [&](const Expression& e) { return e.substitute(x_back); };

    if (!info.singular) {
        const int k = info.degree;
        std::vector<Expression> a;  // a[i] = coefficient of y^i
        for (auto it = info.coefficient_names.rbegin(); it != info.coefficient_names.rend(); ++it) {
            a.push_back(eq.coefficient(*it));
        }
        std::vector<Expression> result;
        for (int j = k; j >= 0; --j) {
            Expression acc = Expression::number(0.0);
            for (int i = j; i <= k; ++i) {
                Expression term = a[i] * Expression::number(binomial(i, j));
                if (i - 1 != 0) term = term * g.pow(1 - i);
                if (i - j != 0) term = term * (-h).pow(i - j);
                acc = acc + term;
            }
            if (j == 1) acc = acc + gp / g;
            if (j == 0) acc = acc + hp - gp * h / g;
            result.push_back(back(acc / fp));
        }
        return AbelEquation(eq.family(), std::move(result));
    }

    const int k = info.degree;
    Expression w = Expression::number(1.0);
    if (g.is_constant()) {
        const double gval = g.constant_value();
        if (gval == 0.0) throw NonInvertibleAtPoint("g = 0");
        if (k == 4 && gval / alpha <= 0.0) {
            throw DomainError("the (p y + q)^4 parametrization needs g/f' > 0");
        }
        w = Expression::number(real_root_scalar(gval / alpha, k));
    } else if (k == 4) {
        // (g/alpha)^(1/4) via nested square roots; domain checked at evaluation
        w = Expression::apply(FuncId::Sqrt,
                              Expression::apply(FuncId::Sqrt, g / Expression::number(alpha)));
    } else {
        throw UnsupportedTransform(
            "the quintic singular families need a constant g for a symbolic transform "
            "(no fifth root in the grammar); use the jet-level apply instead");
    }

    const Expression p = eq.coefficient("p");
    const Expression q = eq.coefficient("q");
    const Expression pt = p / g * w;
    const Expression qt = (q - p * h / g) * w;
    switch (eq.family()) {
        case FamilyTag::K4S: {
            const Expression r = eq.coefficient("r");
            const Expression s = eq.coefficient("s");
            return AbelEquation(FamilyTag::K4S,
                                {back(pt), back(qt), back((gp / g + r) / fp),
                                 back((hp - gp * h / g - r * h + g * s) / fp)});
        }
        case FamilyTag::K5S1: {
            const Expression r = eq.coefficient("r");
            const Expression s = eq.coefficient("s");
            const Expression t = eq.coefficient("t");
            return AbelEquation(
                FamilyTag::K5S1,
                {back(pt), back(qt), back(r / (g * fp)),
                 back((gp / g + s) / fp - Expression::number(2.0) * h * r / (g * fp)),
                 back((hp - gp * h / g - s * h + g * t) / fp + r * h * h / (g * fp))});
        }
        case FamilyTag::K5S2: {
            const Expression s = eq.coefficient("s");
            const Expression t = eq.coefficient("t");
            return AbelEquation(FamilyTag::K5S2,
                                {back(pt), back(qt), back((gp / g + s) / fp),
                                 back((hp - gp * h / g - s * h + g * t) / fp)});
        }
        default:
            throw Error("unreachable");
    }
}

}  // namespace abel
