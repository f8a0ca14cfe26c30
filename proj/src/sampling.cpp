#include "abel/sampling.hpp"

#include <array>
#include <cmath>

#include "abel/invariants.hpp"

namespace abel {

std::uint64_t Rng::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

double Rng::uniform_signed_band(double lo_abs, double hi_abs) {
    const double v = uniform(lo_abs, hi_abs);
    return (next() & 1ull) ? v : -v;
}

int Rng::uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(next() % span);
}

Expression random_polynomial(Rng& rng, int degree, double lo, double hi) {
    Expression acc = Expression::number(rng.uniform(lo, hi));
    const Expression x = Expression::variable();
    for (int i = 1; i <= degree; ++i) {
        Expression mono = i == 1 ? x : x.pow(i);
        acc = acc + Expression::number(rng.uniform(lo, hi)) * mono;
    }
    return acc;
}

namespace {

std::array<double, 5> probe_points(double x0, double window) {
    return {x0, x0 - window, x0 + window, x0 - 0.5 * window, x0 + 0.5 * window};
}

bool margins_ok(FamilyTag family, const AbelEquation& eq, double x0, const EquationSampling& opts) {
    struct Quantity {
        const char* name;
        int degree;
        int jet_order;
    };
    // the family regularity denominators, same list the soft-fail rule uses
    std::vector<Quantity> quantities;
    switch (family) {
        case FamilyTag::K3: quantities = {{"s1", 1, 0}, {"s3", 3, 1}}; break;
        case FamilyTag::K4: quantities = {{"I0", 1, 0}, {"I1", 2, 0}}; break;
        case FamilyTag::K4S: quantities = {{"L0", 1, 0}, {"L1", 3, 1}}; break;
        case FamilyTag::K5: quantities = {{"K0", 1, 0}, {"K1", 2, 0}}; break;
        case FamilyTag::K5S1: quantities = {{"L0", 1, 0}, {"L1", 1, 0}}; break;
        case FamilyTag::K5S2: quantities = {{"M0", 1, 0}, {"M2", 3, 1}}; break;
    }
    for (double x : probe_points(x0, opts.window)) {
        JetMap jets = coefficient_jets(eq, x, 2);
        for (const auto& qty : quantities) {
            const double v = relative_invariant_jet(family, qty.name, jets).value();
            const double scale = jet_map_scale(jets, qty.jet_order);
            if (std::abs(v) < opts.regularity_margin * std::pow(1.0 + scale, qty.degree)) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

AbelEquation random_equation(FamilyTag family, Rng& rng, double x0, const EquationSampling& opts) {
    const FamilyInfo& info = family_info(family);
    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
        std::vector<Expression> coeffs;
        for (std::size_t i = 0; i < info.coefficient_names.size(); ++i) {
            if (i == 0) {
                // leading coefficient (a or p): constant band plus a small bend
                const double lead = rng.uniform_signed_band(opts.leading_lo, opts.leading_hi);
                Expression e = Expression::number(lead) +
                               Expression::number(rng.uniform(-0.2, 0.2)) * Expression::variable();
                coeffs.push_back(e);
            } else {
                coeffs.push_back(
                    random_polynomial(rng, rng.uniform_int(0, opts.max_degree), opts.coeff_lo, opts.coeff_hi));
            }
        }
        if (family == FamilyTag::K4S) {
            // keep p > 0: the (p y + q)^4 family transforms within g/f' > 0
            Expression& p = coeffs[0];
            if (p.eval(x0) < 0.0) p = -p;
        }
        AbelEquation eq(family, std::move(coeffs));
        if (margins_ok(family, eq, x0, opts)) return eq;
    }
    throw Error("random_equation: no sample met the regularity margins");
}

PointTransformation random_transformation(Rng& rng, double x0, const TransformSampling& opts) {
    const Expression x = Expression::variable();
    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
        const double slope = rng.uniform(opts.band_lo, opts.band_hi) *
                             (opts.orientation_reversing ? -1.0 : 1.0);
        Expression f = Expression::number(rng.uniform(-0.5, 0.5)) + Expression::number(slope) * x +
                       Expression::number(rng.uniform(-opts.bend, opts.bend)) * x.pow(2) +
                       Expression::number(rng.uniform(-opts.bend, opts.bend) / 3.0) * x.pow(3);
        Expression g = Expression::number(rng.uniform(opts.band_lo, opts.band_hi)) +
                       Expression::number(rng.uniform(-opts.bend, opts.bend)) * x +
                       Expression::number(rng.uniform(-opts.bend, opts.bend)) * x.pow(2);
        Expression h = random_polynomial(rng, 3, -opts.shift, opts.shift);

        bool ok = true;
        for (double xp : probe_points(x0, opts.window)) {
            const double fp = f.eval_jet(xp, 1).coeff(1);
            const double gv = g.eval(xp);
            const bool fp_ok = opts.orientation_reversing
                                   ? (fp <= -opts.band_lo * 0.5 && fp >= -2.0 * opts.band_hi)
                                   : (fp >= opts.band_lo * 0.5 && fp <= 2.0 * opts.band_hi);
            if (!fp_ok || gv < opts.band_lo * 0.5 || gv > 2.0 * opts.band_hi) {
                ok = false;
                break;
            }
        }
        if (ok) return {std::move(f), std::move(g), std::move(h)};
    }
    throw Error("random_transformation: no sample met the band conditions");
}

}  // namespace abel
