#include "abel/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <thread>

#include "abel/invariants.hpp"
#include "aligned_ops.hpp"

namespace abel {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::vector<SignatureComponent> signature_components(FamilyTag family) {
    auto make = [](std::initializer_list<const char*> bases) {
        std::vector<SignatureComponent> out;
        for (const char* b : bases) out.push_back({b, b, 0});
        for (const char* b : bases) out.push_back({"nabla_" + std::string(b), b, 1});
        return out;
    };
    switch (family) {
        case FamilyTag::K3: return make({"J1"});
        case FamilyTag::K4: return make({"J1", "J2"});
        case FamilyTag::K4S: return make({"J"});
        case FamilyTag::K5: return make({"J0", "J1", "J2"});
        case FamilyTag::K5S1: return make({"J0", "J1"});
        case FamilyTag::K5S2: return make({"J"});
    }
    throw Error("unreachable");
}

TransformedSource::TransformedSource(PointTransformation T, AbelEquation base, double seed_x)
    : T_(std::move(T)), base_(std::move(base)), seed_x_(seed_x) {}

double TransformedSource::invert_x(double x_new) const {
    double x = seed_x_;
    for (int i = 0; i < 200; ++i) {
        const Jet fj = T_.f.eval_jet(x, 1);
        const double fx = fj.value();
        const double fpx = fj.coeff(1);
        if (fpx == 0.0) throw NonInvertibleAtPoint("f' vanished during inversion");
        const double dx = (fx - x_new) / fpx;
        x -= dx;
        if (std::abs(dx) <= 1e-15 * (1.0 + std::abs(x))) break;
    }
    if (std::abs(T_.f.eval(x) - x_new) > 1e-9 * (1.0 + std::abs(x_new))) {
        throw NonInvertibleAtPoint("Newton inversion of f did not converge");
    }
    return x;
}

JetMap TransformedSource::jets(double x_new, int order) const {
    const double x = invert_x(x_new);
    TransformedJets out = apply(T_, base_, x, order);
    return std::move(out.coefficients);
}

namespace {

struct PointSample {
    std::vector<double> values;
    std::vector<double> slopes;
    bool defined;
};

PointSample signature_point(FamilyTag family, const JetMap& jets,
                            const std::vector<SignatureComponent>& comps, double zero_tol) {
    PointSample out;
    out.values.assign(comps.size(), 0.0);
    out.slopes.assign(comps.size(), 0.0);
    out.defined = false;
    auto a_jet = derivation_coefficient_jet(family, jets, zero_tol);
    if (!a_jet) return out;
    std::map<std::string, Jet, std::less<>> base;
    for (const auto& c : comps) {
        if (base.find(c.invariant) == base.end()) {
            auto j = absolute_invariant_jet(family, c.invariant, jets, zero_tol);
            if (!j) return out;
            base.emplace(c.invariant, std::move(*j));
        }
    }
    for (std::size_t i = 0; i < comps.size(); ++i) {
        Jet cur = base.at(comps[i].invariant);
        for (int k = 0; k < comps[i].nabla; ++k) {
            cur = aligned::mul(*a_jet, cur.derivative());
        }
        const double v = cur.value();
        const double m = cur.derivative().value();
        if (!std::isfinite(v) || !std::isfinite(m)) return out;
        out.values[i] = v;
        out.slopes[i] = m;
    }
    out.defined = true;
    return out;
}

int thread_budget() {
    if (const char* env = std::getenv("ABEL_EQUIV_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return std::min(n, 64);
    }
    return 1;
}

}  // namespace

SignatureCurve signature(const EquationSource& source, double x_from, double x_to, int n_samples,
                         const SignatureOptions& opts) {
    if (!(x_from < x_to)) throw Error("signature needs x_from < x_to");
    if (n_samples < 8) throw Error("signature needs at least 8 samples");
    const FamilyTag family = source.family();
    const auto comps = signature_components(family);

    SignatureCurve curve;
    curve.family = family;
    for (const auto& c : comps) curve.components.push_back(c.label);
    curve.xs.resize(n_samples);
    curve.values.assign(n_samples, {});
    curve.slopes.assign(n_samples, {});
    curve.defined.assign(n_samples, 0);
    for (int i = 0; i < n_samples; ++i) {
        curve.xs[i] = x_from + (x_to - x_from) * i / (n_samples - 1);
    }

    auto work = [&](int i) {
        try {
            const JetMap jets = source.jets(curve.xs[i], opts.order);
            PointSample s = signature_point(family, jets, comps, opts.zero_tol);
            curve.values[i] = std::move(s.values);
            curve.slopes[i] = std::move(s.slopes);
            curve.defined[i] = s.defined ? 1 : 0;
        } catch (const Error&) {
            curve.values[i].assign(comps.size(), 0.0);
            curve.slopes[i].assign(comps.size(), 0.0);
            curve.defined[i] = 0;
        }
    };

    const int threads = std::min(thread_budget(), n_samples);
    if (threads <= 1) {
        for (int i = 0; i < n_samples; ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t]() {
                for (int i = t; i < n_samples; i += threads) work(i);
            });
        }
        for (auto& th : pool) th.join();
    }
    return curve;
}

SignatureCurve signature(const AbelEquation& eq, double x_from, double x_to, int n_samples,
                         const SignatureOptions& opts) {
    return signature(ExpressionSource(eq), x_from, x_to, n_samples, opts);
}

std::string signature_csv(const SignatureCurve& curve) {
    std::string out = "x";
    for (const auto& c : curve.components) {
        out += ',';
        out += c;
    }
    out += ",defined\n";
    char buf[64];
    for (std::size_t i = 0; i < curve.xs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", curve.xs[i]);
        out += buf;
        for (double v : curve.values[i]) {
            std::snprintf(buf, sizeof buf, ",%.17g", v);
            out += buf;
        }
        out += curve.defined[i] ? ",1\n" : ",0\n";
    }
    return out;
}

RegularityReport regularity(const AbelEquation& eq, double x0, int order, double zero_tol) {
    RegularityReport report;
    report.orbit = classify(eq, x0, zero_tol);
    report.orbit_regular = report.orbit.tag == OrbitTag::Regular;
    report.has_local_coordinate = false;

    const JetMap jets = coefficient_jets(eq, x0, order);
    const double scale = jet_map_scale(jets);
    for (const auto& comp : signature_components(eq.family())) {
        InvariantValue grad = report.orbit_regular
                                  ? nabla_power(eq.family(), jets, comp.invariant, comp.nabla + 1,
                                                zero_tol)
                                  : InvariantValue{nabla_label(comp.invariant, comp.nabla + 1), 0,
                                                   kNaN, false};
        report.nabla_values.emplace_back("nabla_" + comp.label,
                                         grad.defined ? grad.value : kNaN);
        if (grad.defined && std::abs(grad.value) > zero_tol * (1.0 + scale)) {
            // the first qualifying component in theorem order parametrizes
            if (!report.has_local_coordinate) report.parametrizing_component = comp.label;
            report.has_local_coordinate = true;
        }
    }
    return report;
}

const char* to_string(EquivalenceVerdict::Kind kind) {
    switch (kind) {
        case EquivalenceVerdict::Kind::Equivalent: return "equivalent";
        case EquivalenceVerdict::Kind::NotEquivalent: return "not_equivalent";
        case EquivalenceVerdict::Kind::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

// ----------------------------------------------------- curve matching ---

struct Segment {
    int lo, hi;       // inclusive sample range, strictly monotone in the chosen component
    double vmin, vmax;
};

double movement(const SignatureCurve& c, std::size_t comp) {
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -vmin;
    double vabs = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < c.xs.size(); ++i) {
        if (!c.defined[i]) continue;
        const double v = c.values[i][comp];
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
        vabs = std::max(vabs, std::abs(v));
        ++n;
    }
    if (n < 2) return 0.0;
    return (vmax - vmin) / (1.0 + vabs);
}

std::vector<Segment> monotone_segments(const SignatureCurve& c, std::size_t comp) {
    std::vector<Segment> out;
    const int n = static_cast<int>(c.xs.size());
    int start = -1;
    int dir = 0;
    auto flush = [&](int end) {
        if (start >= 0 && end - start >= 1) {
            const double a = c.values[start][comp], b = c.values[end][comp];
            out.push_back({start, end, std::min(a, b), std::max(a, b)});
        }
        start = -1;
        dir = 0;
    };
    for (int i = 0; i < n; ++i) {
        if (!c.defined[i]) {
            flush(i - 1);
            continue;
        }
        if (start < 0) {
            start = i;
            dir = 0;
            continue;
        }
        const double dv = c.values[i][comp] - c.values[i - 1][comp];
        const int s = dv > 0.0 ? 1 : (dv < 0.0 ? -1 : 0);
        if (s == 0) {
            flush(i - 1);
            start = i;
        } else if (dir == 0) {
            dir = s;
        } else if (s != dir) {
            flush(i - 1);
            start = i - 1;
            dir = s;
        }
    }
    flush(n - 1);
    return out;
}

double hermite(double x0, double x1, double v0, double v1, double m0, double m1, double x) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * v1 +
           (t3 - t2) * h * m1;
}

double hermite_d(double x0, double x1, double v0, double v1, double m0, double m1, double x) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * v0 + (3 * t2 - 4 * t + 1) * h * m0 + (-6 * t2 + 6 * t) * v1 +
            (3 * t2 - 2 * t) * h * m1) / h;
}

/// x in [xs[i], xs[i+1]] with component(comp)(x) = tau, via safeguarded Newton
/// on the cubic Hermite model.
double invert_on_interval(const SignatureCurve& c, std::size_t comp, int i, double tau) {
    const double x0 = c.xs[i], x1 = c.xs[i + 1];
    const double v0 = c.values[i][comp], v1 = c.values[i + 1][comp];
    const double m0 = c.slopes[i][comp], m1 = c.slopes[i + 1][comp];
    double a = x0, b = x1;
    double fa = v0 - tau;
    double x = x0 + (x1 - x0) * ((v1 != v0) ? (tau - v0) / (v1 - v0) : 0.5);
    for (int it = 0; it < 80; ++it) {
        const double fx = hermite(x0, x1, v0, v1, m0, m1, x) - tau;
        if (std::abs(fx) <= 1e-14 * (1.0 + std::abs(tau))) break;
        if ((fx < 0) == (fa < 0)) a = x; else b = x;
        const double dfx = hermite_d(x0, x1, v0, v1, m0, m1, x);
        double next = dfx != 0.0 ? x - fx / dfx : 0.5 * (a + b);
        if (!(next > std::min(a, b) && next < std::max(a, b))) next = 0.5 * (a + b);
        if (std::abs(next - x) <= 1e-16 * (1.0 + std::abs(x))) { x = next; break; }
        x = next;
    }
    return x;
}

/// Sample index i within [seg.lo, seg.hi) whose interval brackets tau.
int bracket(const SignatureCurve& c, std::size_t comp, const Segment& seg, double tau) {
    const bool inc = c.values[seg.hi][comp] >= c.values[seg.lo][comp];
    int lo = seg.lo, hi = seg.hi;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        const double v = c.values[mid][comp];
        if (inc ? (v <= tau) : (v >= tau)) lo = mid; else hi = mid;
    }
    return lo;
}

struct PairOutcome {
    double overlap_fraction = 0.0;
    double deviation = 0.0;
    bool valid = false;  // nonempty overlap
};

PairOutcome match_pair(const SignatureCurve& A, const SignatureCurve& B, std::size_t comp,
                       const Segment& sa, const Segment& sb) {
    PairOutcome out;
    const double lo = std::max(sa.vmin, sb.vmin);
    const double hi = std::min(sa.vmax, sb.vmax);
    if (!(hi > lo)) return out;
    const double shorter = std::min(sa.vmax - sa.vmin, sb.vmax - sb.vmin);
    out.valid = true;
    out.overlap_fraction = shorter > 0.0 ? (hi - lo) / shorter : 0.0;

    const std::size_t ncomp = A.components.size();
    constexpr int kProbes = 65;
    std::vector<double> scale(ncomp, 0.0);
    std::vector<std::vector<double>> va(kProbes, std::vector<double>(ncomp));
    std::vector<std::vector<double>> vb(kProbes, std::vector<double>(ncomp));
    for (int j = 0; j < kProbes; ++j) {
        const double tau = lo + (hi - lo) * (j + 0.5) / kProbes;
        const int ia = bracket(A, comp, sa, tau);
        const int ib = bracket(B, comp, sb, tau);
        const double xa = invert_on_interval(A, comp, ia, tau);
        const double xb = invert_on_interval(B, comp, ib, tau);
        for (std::size_t cidx = 0; cidx < ncomp; ++cidx) {
            va[j][cidx] = hermite(A.xs[ia], A.xs[ia + 1], A.values[ia][cidx], A.values[ia + 1][cidx],
                                  A.slopes[ia][cidx], A.slopes[ia + 1][cidx], xa);
            vb[j][cidx] = hermite(B.xs[ib], B.xs[ib + 1], B.values[ib][cidx], B.values[ib + 1][cidx],
                                  B.slopes[ib][cidx], B.slopes[ib + 1][cidx], xb);
            scale[cidx] = std::max({scale[cidx], std::abs(va[j][cidx]), std::abs(vb[j][cidx])});
        }
    }
    double dev = 0.0;
    for (int j = 0; j < kProbes; ++j) {
        for (std::size_t cidx = 0; cidx < ncomp; ++cidx) {
            if (cidx == comp) continue;
            dev = std::max(dev, std::abs(va[j][cidx] - vb[j][cidx]) / (1.0 + scale[cidx]));
        }
    }
    out.deviation = dev;
    return out;
}

}  // namespace

EquivalenceVerdict curves_match(const SignatureCurve& a, const SignatureCurve& b, double tol_rel,
                                double min_overlap) {
    if (a.family != b.family) throw FamilyMismatch("signature curves of different families");
    const std::size_t ncomp = a.components.size();

    // parametrizing component: largest scaled movement common to both curves,
    // lowest index among those within 5% of the best
    double best_metric = 0.0;
    std::vector<double> metric(ncomp);
    for (std::size_t c = 0; c < ncomp; ++c) {
        metric[c] = std::min(movement(a, c), movement(b, c));
        best_metric = std::max(best_metric, metric[c]);
    }
    if (best_metric <= 0.0) {
        return {EquivalenceVerdict::Kind::Inconclusive,
                "no signature component varies on both curves (degenerate signature)", 0.0, 0.0};
    }
    std::size_t comp = 0;
    for (std::size_t c = 0; c < ncomp; ++c) {
        if (metric[c] >= 0.95 * best_metric) {
            comp = c;
            break;
        }
    }

    const auto segs_a = monotone_segments(a, comp);
    const auto segs_b = monotone_segments(b, comp);
    if (segs_a.empty() || segs_b.empty()) {
        return {EquivalenceVerdict::Kind::Inconclusive,
                "no monotone segment in the parametrizing component " + a.components[comp], 0.0,
                0.0};
    }

    std::optional<PairOutcome> best_equivalent;
    std::optional<PairOutcome> best_mismatch;
    std::optional<PairOutcome> best_grey;
    bool any_overlap = false;
    for (const auto& sa : segs_a) {
        for (const auto& sb : segs_b) {
            const PairOutcome out = match_pair(a, b, comp, sa, sb);
            if (!out.valid) continue;
            any_overlap = true;
            if (out.overlap_fraction >= min_overlap && out.deviation <= tol_rel) {
                if (!best_equivalent || out.deviation < best_equivalent->deviation) {
                    best_equivalent = out;
                }
            } else if (out.overlap_fraction >= min_overlap && out.deviation > 10.0 * tol_rel) {
                if (!best_mismatch || out.deviation > best_mismatch->deviation) best_mismatch = out;
            } else {
                if (!best_grey || out.overlap_fraction > best_grey->overlap_fraction) best_grey = out;
            }
        }
    }
    if (best_equivalent) {
        return {EquivalenceVerdict::Kind::Equivalent,
                "signatures agree on the matched overlap (parametrized by " + a.components[comp] + ")",
                best_equivalent->overlap_fraction, best_equivalent->deviation};
    }
    if (best_mismatch) {
        return {EquivalenceVerdict::Kind::NotEquivalent,
                "signatures deviate beyond 10x the match tolerance on the overlap",
                best_mismatch->overlap_fraction, best_mismatch->deviation};
    }
    if (best_grey) {
        return {EquivalenceVerdict::Kind::Inconclusive,
                "deviation in the grey zone or overlap below the minimum",
                best_grey->overlap_fraction, best_grey->deviation};
    }
    if (!any_overlap) {
        return {EquivalenceVerdict::Kind::Inconclusive,
                "parameter ranges of the signature curves are disjoint", 0.0, 0.0};
    }
    return {EquivalenceVerdict::Kind::Inconclusive, "no usable segment pair", 0.0, 0.0};
}

namespace {

struct ClassQuantity {
    const char* name;
    int degree;
    int jet_order;
};

std::optional<ClassQuantity> class_quantity(FamilyTag family) {
    switch (family) {
        case FamilyTag::K3: return ClassQuantity{"s3", 3, 1};
        case FamilyTag::K4: return ClassQuantity{"I1", 2, 0};
        case FamilyTag::K4S: return ClassQuantity{"L1", 3, 1};
        case FamilyTag::K5: return ClassQuantity{"K1", 2, 0};
        case FamilyTag::K5S2: return ClassQuantity{"M2", 3, 1};
        case FamilyTag::K5S1: return std::nullopt;
    }
    return std::nullopt;
}

bool identically_zero(const EquationSource& src, FamilyTag family, const ClassQuantity& q,
                      double lo, double hi, double tol) {
    constexpr int kProbes = 17;
    for (int i = 0; i < kProbes; ++i) {
        const double x = lo + (hi - lo) * i / (kProbes - 1);
        try {
            const JetMap jets = src.jets(x, 2);
            const double v = relative_invariant_jet(family, q.name, jets).value();
            if (!scaled_vanishes(v, q.degree, jet_map_scale(jets, q.jet_order), tol)) return false;
        } catch (const Error&) {
            return false;
        }
    }
    return true;
}

bool has_local_coordinate_at(const EquationSource& src, double x, int order, double tol) {
    try {
        const JetMap jets = src.jets(x, order);
        const double scale = jet_map_scale(jets, 4);
        for (const auto& comp : signature_components(src.family())) {
            InvariantValue v = nabla_power(src.family(), jets, comp.invariant, comp.nabla + 1, tol);
            if (v.defined && std::abs(v.value) > tol * (1.0 + scale)) return true;
        }
    } catch (const Error&) {
        return false;
    }
    return false;
}

EquivalenceVerdict cross_family(const EquationSource& e1, double x1, const EquationSource& e2,
                                double x2, const EquivalenceOptions& opts) {
    const FamilyTag f1 = e1.family(), f2 = e2.family();
    if (family_info(f1).degree != family_info(f2).degree) {
        throw FamilyMismatch("equivalence across different degrees is not defined");
    }
    auto ordered = [&](FamilyTag regular) -> std::pair<const EquationSource*, double> {
        return f1 == regular ? std::make_pair(&e1, x1) : std::make_pair(&e2, x2);
    };
    auto zero_on_window = [&](const EquationSource& src, double x, const ClassQuantity& q) {
        return identically_zero(src, src.family(), q, x - opts.window, x + opts.window,
                                opts.zero_tol);
    };
    // K4 vs K4S: the K4 side must have I1 = 0 identically to even be a candidate
    if ((f1 == FamilyTag::K4 && f2 == FamilyTag::K4S) ||
        (f1 == FamilyTag::K4S && f2 == FamilyTag::K4)) {
        auto [src, x] = ordered(FamilyTag::K4);
        if (!zero_on_window(*src, x, {"I1", 2})) {
            return {EquivalenceVerdict::Kind::NotEquivalent,
                    "I1 vanishes identically for the k4s input but not for the k4 input", 0.0, 0.0};
        }
        return {EquivalenceVerdict::Kind::Inconclusive,
                "the k4 input lies in the I1 = 0 class; rewrite it in the k4s parametrization to compare",
                0.0, 0.0};
    }
    if ((f1 == FamilyTag::K5 && (f2 == FamilyTag::K5S1 || f2 == FamilyTag::K5S2)) ||
        ((f1 == FamilyTag::K5S1 || f1 == FamilyTag::K5S2) && f2 == FamilyTag::K5)) {
        auto [src, x] = ordered(FamilyTag::K5);
        if (!zero_on_window(*src, x, {"K1", 2})) {
            return {EquivalenceVerdict::Kind::NotEquivalent,
                    "K1 vanishes identically for the singular input but not for the k5 input", 0.0,
                    0.0};
        }
        return {EquivalenceVerdict::Kind::Inconclusive,
                "the k5 input lies in the K1 = 0 class; rewrite it in the matching singular parametrization",
                0.0, 0.0};
    }
    // K5S1 vs K5S2: on (11), K2 = 25 p^10 r != 0; on (12), K2 = 0 identically
    return {EquivalenceVerdict::Kind::NotEquivalent,
            "the K2 locus separates the two quintic singular classes (r != 0 on k5s1)", 0.0, 0.0};
}

}  // namespace

EquivalenceVerdict decide_equivalence(const EquationSource& e1, double x1,
                                      const EquationSource& e2, double x2,
                                      const EquivalenceOptions& opts) {
    const FamilyTag family = e1.family();
    if (family != e2.family()) return cross_family(e1, x1, e2, x2, opts);

    OrbitClass c1 = classify(family, e1.jets(x1, 2), opts.zero_tol);
    OrbitClass c2 = classify(family, e2.jets(x2, 2), opts.zero_tol);
    if (c1.tag == OrbitTag::DegenerateLeadingCoefficient ||
        c2.tag == OrbitTag::DegenerateLeadingCoefficient) {
        return {EquivalenceVerdict::Kind::Inconclusive,
                "a leading coefficient degenerates at the query point", 0.0, 0.0};
    }

    if (auto q = class_quantity(family)) {
        const bool z1 = identically_zero(e1, family, *q, x1 - opts.window, x1 + opts.window,
                                         opts.zero_tol);
        const bool z2 = identically_zero(e2, family, *q, x2 - opts.window, x2 + opts.window,
                                         opts.zero_tol);
        if (z1 != z2) {
            return {EquivalenceVerdict::Kind::NotEquivalent,
                    std::string(q->name) +
                        " vanishes identically for exactly one of the equations (relative-"
                        "invariant loci are preserved)",
                    0.0, 0.0};
        }
        if (z1 && z2) {
            switch (family) {
                case FamilyTag::K3:
                    return {EquivalenceVerdict::Kind::Equivalent,
                            "singular class s3 = 0: all such equations are equivalent", 1.0, 0.0};
                case FamilyTag::K4S:
                    return {EquivalenceVerdict::Kind::Equivalent,
                            "singular class L1 = 0: both equivalent to Y' = Y^4", 1.0, 0.0};
                case FamilyTag::K5S2:
                    return {EquivalenceVerdict::Kind::Equivalent,
                            "singular class M2 = 0: both equivalent to Y' = Y^5", 1.0, 0.0};
                case FamilyTag::K4:
                    return {EquivalenceVerdict::Kind::Inconclusive,
                            "I1 = 0 identically for both; decide in the k4s parametrization", 0.0,
                            0.0};
                case FamilyTag::K5:
                    return {EquivalenceVerdict::Kind::Inconclusive,
                            "K1 = 0 identically for both; decide in the k5s1/k5s2 parametrization",
                            0.0, 0.0};
                default:
                    break;
            }
        }
    }

    if (c1.tag != OrbitTag::Regular || c2.tag != OrbitTag::Regular) {
        return {EquivalenceVerdict::Kind::Inconclusive,
                "an equation is not on a regular orbit at its query point", 0.0, 0.0};
    }

    if (!has_local_coordinate_at(e1, x1, opts.order, opts.zero_tol) ||
        !has_local_coordinate_at(e2, x2, opts.order, opts.zero_tol)) {
        return {EquivalenceVerdict::Kind::Inconclusive,
                "no signature component has a nonvanishing derivative at the query point "
                "(the signature degenerates)",
                0.0, 0.0};
    }

    SignatureOptions sig_opts{opts.order, opts.zero_tol};
    SignatureCurve s1 = signature(e1, x1 - opts.window, x1 + opts.window, opts.samples, sig_opts);
    SignatureCurve s2 = signature(e2, x2 - opts.window, x2 + opts.window, opts.samples, sig_opts);
    return curves_match(s1, s2, opts.tol_match, opts.min_overlap);
}

EquivalenceVerdict decide_equivalence(const AbelEquation& e1, double x1, const AbelEquation& e2,
                                      double x2, const EquivalenceOptions& opts) {
    return decide_equivalence(ExpressionSource(e1), x1, ExpressionSource(e2), x2, opts);
}

}  // namespace abel
