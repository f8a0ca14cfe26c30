#include "abel/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <array>

#include "abel/sampling.hpp"
#include "abel/transform.hpp"
#include "aligned_ops.hpp"

namespace abel {

namespace {

using aligned::D;
using aligned::D2;
using aligned::pw;
using aligned::V;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ------------------------------------------------------------------- K3 ---

Jet k3_s1(const JetMap& m) { return m.at("a"); }

Jet k3_s3(const JetMap& m) {
    V a(m.at("a")), b(m.at("b")), c(m.at("c")), d(m.at("d"));
    return (D(a) * b - D(b) * a + a * b * c - (2.0 / 9.0) * pw(b, 3) - 3.0 * (a * a * d)).j;
}

Jet k3_chain(const JetMap& m, int n) {
    V a(m.at("a")), b(m.at("b")), c(m.at("c"));
    V s(k3_s3(m));
    V t = D(a) + a * c - (1.0 / 3.0) * (b * b);
    for (int i = 2; i <= n; ++i) {
        s = a * D(s) - static_cast<double>(2 * i - 1) * (s * t);
    }
    return s.j;
}

Jet k3_s5(const JetMap& m) { return k3_chain(m, 2); }
Jet k3_s7(const JetMap& m) { return k3_chain(m, 3); }
Jet k3_s9(const JetMap& m) { return k3_chain(m, 4); }

// ------------------------------------------------------------------- K4 ---

Jet k4_I0(const JetMap& m) { return m.at("a"); }

Jet k4_I1(const JetMap& m) {
    V a(m.at("a")), b(m.at("b")), c(m.at("c"));
    return (8.0 * (a * c) - 3.0 * (b * b)).j;
}

Jet k4_I2(const JetMap& m) {
    V a(m.at("a")), b(m.at("b")), c(m.at("c")), d(m.at("d")), e(m.at("e"));
    return (3.0 * (a * D(b) - D(a) * b) + a * c * c - 3.0 * (a * b * d) + 12.0 * (a * a * e)).j;
}

Jet k4_I3(const JetMap& m) {
    V a(m.at("a")), b(m.at("b")), c(m.at("c")), d(m.at("d"));
    return (8.0 * (a * D(a) * (4.0 * (a * c) - 3.0 * (b * b))) + 24.0 * (a * a * b * D(b)) -
            32.0 * (pw(a, 3) * D(c)) - 3.0 * pw(b, 5) + 64.0 * (pw(a, 3) * c * d) -
            24.0 * (a * a * b * b * d) - 32.0 * (a * a * b * c * c) + 20.0 * (a * pw(b, 3) * c)).j;
}

// ------------------------------------------------------------------ K4S ---

Jet k4s_L0(const JetMap& m) { return m.at("p"); }

Jet k4s_L1(const JetMap& m) {
    V p(m.at("p")), q(m.at("q")), r(m.at("r")), s(m.at("s"));
    return (D(q) * p - D(p) * q + p * p * s - p * q * r).j;
}

Jet k4s_L2(const JetMap& m) {
    V p(m.at("p")), q(m.at("q")), r(m.at("r")), s(m.at("s"));
    return (p * (p * D2(q) - q * D2(p)) + 6.0 * (D(p) * (D(p) * q - p * D(q))) +
            D(p) * p * (9.0 * (q * r) - 4.0 * (p * s)) - 5.0 * (r * p * p * D(q)) -
            p * p * q * D(r) + pw(p, 3) * D(s) + 4.0 * (p * p * r * (q * r - p * s))).j;
}

// ------------------------------------------------------------------- K5 ---

Jet k5_K0(const JetMap& m) { return m.at("a"); }

Jet k5_K1(const JetMap& m) {
    V a(m.at("a")), b(m.at("b")), c(m.at("c"));
    return (5.0 * (a * c) - 2.0 * (b * b)).j;
}

Jet k5_K2(const JetMap& m) {
    V a(m.at("a")), b(m.at("b")), c(m.at("c")), d(m.at("d"));
    return (4.0 * pw(b, 3) - 15.0 * (a * b * c) + 25.0 * (a * a * d)).j;
}

Jet k5_K3(const JetMap& m) {
    V a(m.at("a")), b(m.at("b")), c(m.at("c")), d(m.at("d")), e(m.at("e")), f(m.at("f"));
    return (50.0 * (a * D(b)) - 50.0 * (b * D(a)) + 8.0 * (b * b * d) + 5.0 * (a * c * d) -
            50.0 * (a * b * e) - 3.0 * (b * c * c) + 250.0 * (a * a * f)).j;
}

Jet k5_K4(const JetMap& m) {
    V a(m.at("a")), b(m.at("b")), c(m.at("c")), d(m.at("d")), e(m.at("e")), f(m.at("f"));
    return (2500.0 * (a * a * d * D(a)) + 1500.0 * (a * a * b * D(c)) - 2500.0 * (pw(a, 3) * D(d)) -
            1500.0 * (a * a * c * D(b)) + 825.0 * (a * a * c * c * d) + 6000.0 * (a * a * b * b * f) -
            495.0 * (a * b * pw(c, 3)) + 1440.0 * (a * b * b * c * d) - 3000.0 * (a * a * b * d * d) -
            288.0 * (pw(b, 4) * d) - 1500.0 * (a * a * b * c * e) + 7500.0 * (pw(a, 3) * d * e) -
            15000.0 * (pw(a, 3) * c * f) + 108.0 * (pw(b, 3) * c * c)).j;
}

// ----------------------------------------------------------------- K5S1 ---

Jet k5s1_L0(const JetMap& m) { return m.at("p"); }
Jet k5s1_L1(const JetMap& m) { return m.at("r"); }

Jet k5s1_L2(const JetMap& m) {
    V p(m.at("p")), q(m.at("q")), r(m.at("r")), s(m.at("s")), t(m.at("t"));
    return (-(D(p) * q) + D(q) * p + q * q * r - p * q * s + t * p * p).j;
}

Jet k5s1_L3(const JetMap& m) {
    V p(m.at("p")), q(m.at("q")), r(m.at("r")), s(m.at("s"));
    return (5.0 * (D(p) * r) + 3.0 * (p * r * s) - 6.0 * (q * r * r) - p * D(r)).j;
}

// ----------------------------------------------------------------- K5S2 ---

Jet k5s2_M0(const JetMap& m) { return m.at("p"); }

Jet k5s2_M2(const JetMap& m) {
    V p(m.at("p")), q(m.at("q")), s(m.at("s")), t(m.at("t"));
    return (-(D(p) * q) + D(q) * p - p * q * s + t * p * p).j;
}

Jet k5s2_M4(const JetMap& m) {
    V p(m.at("p")), q(m.at("q")), s(m.at("s")), t(m.at("t"));
    return (p * (p * D2(q) - q * D2(p)) + 7.0 * (D(p) * (D(p) * q - p * D(q))) + pw(p, 3) * D(t) -
            p * p * q * D(s) - 6.0 * (p * p * s * D(q)) + D(p) * p * (11.0 * (q * s) - 5.0 * (p * t)) +
            5.0 * (p * p * s * (q * s - p * t))).j;
}

// ------------------------------------------------------ relative catalog ---

const RelativeInvariantDef kK3Rel[] = {
    {"s1", 0, 1, {-2, 1}, {-1, 1}, k3_s1},
    {"s3", 1, 3, {-3, 1}, {-3, 1}, k3_s3},
    {"s5", 2, 5, {-5, 1}, {-5, 1}, k3_s5},
    {"s7", 3, 7, {-7, 1}, {-7, 1}, k3_s7},
    {"s9", 4, 9, {-9, 1}, {-9, 1}, k3_s9},
};
const RelativeInvariantDef kK4Rel[] = {
    {"I0", 0, 1, {-3, 1}, {-1, 1}, k4_I0},
    {"I1", 0, 2, {-4, 1}, {-2, 1}, k4_I1},
    {"I2", 1, 3, {-5, 1}, {-3, 1}, k4_I2},
    {"I3", 1, 5, {-10, 1}, {-5, 1}, k4_I3},
};
const RelativeInvariantDef kK4SRel[] = {
    {"L0", 0, 1, {-3, 4}, {-1, 4}, k4s_L0},
    {"L1", 1, 3, {-1, 2}, {-3, 2}, k4s_L1},
    {"L2", 2, 5, {-5, 4}, {-11, 4}, k4s_L2},
};
const RelativeInvariantDef kK5Rel[] = {
    {"K0", 0, 1, {-4, 1}, {-1, 1}, k5_K0},
    {"K1", 0, 2, {-6, 1}, {-2, 1}, k5_K1},
    {"K2", 0, 3, {-9, 1}, {-3, 1}, k5_K2},
    {"K3", 1, 3, {-7, 1}, {-3, 1}, k5_K3},
    {"K4", 1, 5, {-13, 1}, {-5, 1}, k5_K4},
};
const RelativeInvariantDef kK5S1Rel[] = {
    {"L0", 0, 1, {-4, 5}, {-1, 5}, k5s1_L0},
    {"L1", 0, 1, {-1, 1}, {-1, 1}, k5s1_L1},
    {"L2", 1, 3, {-3, 5}, {-7, 5}, k5s1_L2},
    {"L3", 1, 3, {-9, 5}, {-11, 5}, k5s1_L3},
};
const RelativeInvariantDef kK5S2Rel[] = {
    {"M0", 0, 1, {-4, 5}, {-1, 5}, k5s2_M0},
    {"M2", 1, 3, {-3, 5}, {-7, 5}, k5s2_M2},
    {"M4", 2, 5, {-7, 5}, {-13, 5}, k5s2_M4},
};

// ------------------------------------------------------ regularity guard ---

struct Denominator {
    const char* name;
    int degree;
    int jet_order;
};

std::span<const Denominator> regularity_denominators(FamilyTag family) {
    static const Denominator k3[] = {{"s1", 1, 0}, {"s3", 3, 1}};
    static const Denominator k4[] = {{"I0", 1, 0}, {"I1", 2, 0}};
    static const Denominator k4s[] = {{"L0", 1, 0}, {"L1", 3, 1}};
    static const Denominator k5[] = {{"K0", 1, 0}, {"K1", 2, 0}};
    static const Denominator k5s1[] = {{"L0", 1, 0}, {"L1", 1, 0}};
    static const Denominator k5s2[] = {{"M0", 1, 0}, {"M2", 3, 1}};
    switch (family) {
        case FamilyTag::K3: return k3;
        case FamilyTag::K4: return k4;
        case FamilyTag::K4S: return k4s;
        case FamilyTag::K5: return k5;
        case FamilyTag::K5S1: return k5s1;
        case FamilyTag::K5S2: return k5s2;
    }
    throw Error("unreachable");
}

// ------------------------------------------------------ absolute catalog ---

bool guard(FamilyTag family, const JetMap& m, double tol) { return regularity_ok(family, m, tol); }

std::optional<Jet> k3_J1(const JetMap& m, double tol) {
    if (!guard(FamilyTag::K3, m, tol)) return std::nullopt;
    return aligned::div(pow(k3_s5(m), 3), pow(k3_s3(m), 5));
}
std::optional<Jet> k3_J2(const JetMap& m, double tol) {
    if (!guard(FamilyTag::K3, m, tol)) return std::nullopt;
    return aligned::div(aligned::mul(k3_s5(m), k3_s7(m)), pow(k3_s3(m), 4));
}
std::optional<Jet> k3_J3(const JetMap& m, double tol) {
    if (!guard(FamilyTag::K3, m, tol)) return std::nullopt;
    return aligned::div(k3_s9(m), pow(k3_s3(m), 3));
}

std::optional<Jet> k4_J1(const JetMap& m, double tol) {
    if (!guard(FamilyTag::K4, m, tol)) return std::nullopt;
    return aligned::div(aligned::mul(k4_I2(m), k4_I0(m)), pow(k4_I1(m), 2));
}
std::optional<Jet> k4_J2(const JetMap& m, double tol) {
    if (!guard(FamilyTag::K4, m, tol)) return std::nullopt;
    return aligned::mul(k4_I3(m), rpow(abs(k4_I1(m)), -5, 2));
}

// The printed exponents L0^2 |L1|^{7/2} fail invariance (weight g^2 f'^3);
// the unique invariant normalization is |L0|^{1/2} |L1|^{7/4}.
std::optional<Jet> k4s_J(const JetMap& m, double tol) {
    if (!guard(FamilyTag::K4S, m, tol)) return std::nullopt;
    return aligned::mul(k4s_L2(m),
                        aligned::mul(rpow(abs(k4s_L0(m)), -1, 2), rpow(abs(k4s_L1(m)), -7, 4)));
}

std::optional<Jet> k5_J0(const JetMap& m, double tol) {
    if (!guard(FamilyTag::K5, m, tol)) return std::nullopt;
    return aligned::div(pow(k5_K2(m), 2), pow(k5_K1(m), 3));
}
std::optional<Jet> k5_J1(const JetMap& m, double tol) {
    if (!guard(FamilyTag::K5, m, tol)) return std::nullopt;
    return aligned::mul(aligned::mul(k5_K3(m), pow(k5_K0(m), 2)), rpow(abs(k5_K1(m)), -5, 2));
}
std::optional<Jet> k5_J2(const JetMap& m, double tol) {
    if (!guard(FamilyTag::K5, m, tol)) return std::nullopt;
    return aligned::mul(aligned::mul(k5_K4(m), pow(k5_K0(m), 2)), rpow(abs(k5_K1(m)), -7, 2));
}

std::optional<Jet> k5s1_J0(const JetMap& m, double tol) {
    if (!guard(FamilyTag::K5S1, m, tol)) return std::nullopt;
    return aligned::mul(aligned::mul(k5s1_L2(m), rpow(m.at("p"), 4, 3)), rpow(m.at("r"), -5, 3));
}
std::optional<Jet> k5s1_J1(const JetMap& m, double tol) {
    if (!guard(FamilyTag::K5S1, m, tol)) return std::nullopt;
    return aligned::mul(aligned::mul(k5s1_L3(m), rpow(m.at("p"), 2, 3)), rpow(m.at("r"), -7, 3));
}

std::optional<Jet> k5s2_J(const JetMap& m, double tol) {
    if (!guard(FamilyTag::K5S2, m, tol)) return std::nullopt;
    return aligned::mul(k5s2_M4(m),
                        aligned::mul(rpow(m.at("p"), -2, 5), rpow(k5s2_M2(m), -9, 5)));
}

const AbsoluteInvariantDef kK3Abs[] = {
    {"J1", 2, k3_J1},
    {"J2", 3, k3_J2},
    {"J3", 4, k3_J3},
};
const AbsoluteInvariantDef kK4Abs[] = {
    {"J1", 1, k4_J1},
    {"J2", 1, k4_J2},
};
const AbsoluteInvariantDef kK4SAbs[] = {
    {"J", 2, k4s_J},
};
const AbsoluteInvariantDef kK5Abs[] = {
    {"J0", 0, k5_J0},
    {"J1", 1, k5_J1},
    {"J2", 1, k5_J2},
};
const AbsoluteInvariantDef kK5S1Abs[] = {
    {"J0", 1, k5s1_J0},
    {"J1", 1, k5s1_J1},
};
const AbsoluteInvariantDef kK5S2Abs[] = {
    {"J", 2, k5s2_J},
};

}  // namespace

std::span<const RelativeInvariantDef> relative_catalog(FamilyTag family) {
    switch (family) {
        case FamilyTag::K3: return kK3Rel;
        case FamilyTag::K4: return kK4Rel;
        case FamilyTag::K4S: return kK4SRel;
        case FamilyTag::K5: return kK5Rel;
        case FamilyTag::K5S1: return kK5S1Rel;
        case FamilyTag::K5S2: return kK5S2Rel;
    }
    throw Error("unreachable");
}

std::span<const AbsoluteInvariantDef> absolute_catalog(FamilyTag family) {
    switch (family) {
        case FamilyTag::K3: return kK3Abs;
        case FamilyTag::K4: return kK4Abs;
        case FamilyTag::K4S: return kK4SAbs;
        case FamilyTag::K5: return kK5Abs;
        case FamilyTag::K5S1: return kK5S1Abs;
        case FamilyTag::K5S2: return kK5S2Abs;
    }
    throw Error("unreachable");
}

namespace {

const RelativeInvariantDef& find_relative(FamilyTag family, std::string_view name) {
    for (const auto& def : relative_catalog(family)) {
        if (name == def.name) return def;
    }
    throw UnknownInvariant("family " + std::string(family_info(family).name) +
                           " has no relative invariant '" + std::string(name) + "'");
}

const AbsoluteInvariantDef& find_absolute(FamilyTag family, std::string_view name) {
    for (const auto& def : absolute_catalog(family)) {
        if (name == def.name) return def;
    }
    throw UnknownInvariant("family " + std::string(family_info(family).name) +
                           " has no absolute invariant '" + std::string(name) + "'");
}

int min_jet_order(const JetMap& jets) {
    int o = std::numeric_limits<int>::max();
    for (const auto& [_, j] : jets) o = std::min(o, j.order());
    return o;
}

void require_order(const JetMap& jets, int needed, std::string_view what) {
    if (min_jet_order(jets) < needed) {
        throw OrderTooLow(std::string(what) + " needs jets of order >= " + std::to_string(needed));
    }
}

}  // namespace

Jet relative_invariant_jet(FamilyTag family, std::string_view name, const JetMap& jets) {
    const auto& def = find_relative(family, name);
    require_order(jets, def.jet_order, name);
    return def.eval(jets);
}

int relative_invariant_degree(FamilyTag family, std::string_view name) {
    return find_relative(family, name).degree;
}

std::optional<Jet> absolute_invariant_jet(FamilyTag family, std::string_view name,
                                          const JetMap& jets, double zero_tol) {
    const auto& def = find_absolute(family, name);
    require_order(jets, def.jet_order, name);
    return def.eval(jets, zero_tol);
}

std::vector<InvariantValue> relative_invariants(FamilyTag family, const JetMap& jets) {
    std::vector<InvariantValue> out;
    for (const auto& def : relative_catalog(family)) {
        out.push_back({def.name, def.jet_order, def.eval(jets).value(), true});
    }
    return out;
}

std::vector<InvariantValue> absolute_invariants(FamilyTag family, const JetMap& jets,
                                                double zero_tol) {
    std::vector<InvariantValue> out;
    for (const auto& def : absolute_catalog(family)) {
        auto j = def.eval(jets, zero_tol);
        if (j) {
            out.push_back({def.name, def.jet_order, j->value(), true});
        } else {
            out.push_back({def.name, def.jet_order, kNaN, false});
        }
    }
    return out;
}

Jet cubic_chain(const JetMap& jets, int n) {
    if (n < 1) throw Error("the cubic chain starts at n = 1 (s3)");
    require_order(jets, n, "s" + std::to_string(2 * n + 1));
    return k3_chain(jets, n);
}

bool regularity_ok(FamilyTag family, const JetMap& jets, double zero_tol) {
    for (const auto& den : regularity_denominators(family)) {
        const double v = relative_invariant_jet(family, den.name, jets).value();
        if (scaled_vanishes(v, den.degree, jet_map_scale(jets, den.jet_order), zero_tol)) {
            return false;
        }
    }
    return true;
}

std::optional<Jet> derivation_coefficient_jet(FamilyTag family, const JetMap& jets,
                                              double zero_tol) {
    if (!regularity_ok(family, jets, zero_tol)) return std::nullopt;
    switch (family) {
        case FamilyTag::K3:
            return aligned::mul(k3_s1(jets), rpow(k3_s3(jets), -2, 3));
        case FamilyTag::K4:
            return aligned::mul(pow(k4_I0(jets), 2), rpow(abs(k4_I1(jets)), -3, 2));
        case FamilyTag::K4S:
            return aligned::mul(rpow(abs(k4s_L0(jets)), 1, 2), rpow(abs(k4s_L1(jets)), -3, 4));
        case FamilyTag::K5:
            return aligned::div(pow(k5_K0(jets), 3), pow(k5_K1(jets), 2));
        case FamilyTag::K5S1:
            return aligned::mul(rpow(jets.at("p"), 5, 3), rpow(jets.at("r"), -4, 3));
        case FamilyTag::K5S2:
            return aligned::mul(rpow(jets.at("p"), 3, 5), rpow(k5s2_M2(jets), -4, 5));
    }
    throw Error("unreachable");
}

InvariantValue derivation_coefficient(FamilyTag family, const JetMap& jets, double zero_tol) {
    auto j = derivation_coefficient_jet(family, jets, zero_tol);
    const int order = family == FamilyTag::K3 || family == FamilyTag::K4S ||
                              family == FamilyTag::K5S2
                          ? 1
                          : 0;
    if (!j) return {"A", order, kNaN, false};
    return {"A", order, j->value(), true};
}

std::string nabla_label(std::string_view name, int k) {
    if (k == 0) return std::string(name);
    if (k == 1) return "nabla_" + std::string(name);
    return "nabla" + std::to_string(k) + "_" + std::string(name);
}

std::optional<Jet> nabla_power_jet(FamilyTag family, const JetMap& jets, std::string_view name,
                                   int k, double zero_tol) {
    auto cur = absolute_invariant_jet(family, name, jets, zero_tol);
    if (!cur) return std::nullopt;
    if (k == 0) return cur;
    auto a = derivation_coefficient_jet(family, jets, zero_tol);
    if (!a) return std::nullopt;
    for (int i = 0; i < k; ++i) {
        cur = aligned::mul(*a, cur->derivative());
    }
    return cur;
}

InvariantValue nabla_power(FamilyTag family, const JetMap& jets, std::string_view name, int k,
                           double zero_tol) {
    if (k < 0) throw Error("nabla_power needs k >= 0");
    const auto& def = find_absolute(family, name);
    auto j = nabla_power_jet(family, jets, name, k, zero_tol);
    if (!j) return {nabla_label(name, k), def.jet_order + k, kNaN, false};
    return {nabla_label(name, k), def.jet_order + k, j->value(), true};
}

InvariantValue nabla_power(const AbelEquation& eq, double x0, std::string_view name, int k,
                           int order, double zero_tol) {
    return nabla_power(eq.family(), coefficient_jets(eq, x0, order), name, k, zero_tol);
}

InvariantValue tresse_derivative(const AbelEquation& eq, double x0, std::string_view f_name,
                                 std::string_view j_name, int order, double zero_tol) {
    const JetMap jets = coefficient_jets(eq, x0, order);
    const auto& fdef = find_absolute(eq.family(), f_name);
    const auto& jdef = find_absolute(eq.family(), j_name);
    const std::string label = "D" + std::string(f_name) + "/D" + std::string(j_name);
    const int consumed = std::max(fdef.jet_order, jdef.jet_order) + 1;
    auto fj = absolute_invariant_jet(eq.family(), f_name, jets, zero_tol);
    auto jj = absolute_invariant_jet(eq.family(), j_name, jets, zero_tol);
    if (!fj || !jj) return {label, consumed, kNaN, false};
    const double df = fj->derivative().value();
    const double dj = jj->derivative().value();
    if (std::abs(dj) <= zero_tol * (1.0 + std::abs(jj->value()))) {
        throw TresseDenominatorVanishes("DJ/Dx vanishes at x0 = " + std::to_string(x0));
    }
    return {label, consumed, df / dj, true};
}

namespace {

Rational nearest_rational(double v, int max_den, double* err) {
    Rational best{0, 1};
    double best_err = std::numeric_limits<double>::infinity();
    for (int den = 1; den <= max_den; ++den) {
        const double num = std::round(v * den);
        const double e = std::abs(v - num / den);
        if (e < best_err - 1e-12) {
            best_err = e;
            best = {static_cast<int>(num), den};
        }
    }
    const int g = static_cast<int>(std::gcd(std::abs(best.num), best.den));
    if (g > 1) {
        best.num /= g;
        best.den /= g;
    }
    *err = best_err;
    return best;
}

}  // namespace

WeightFit weight_fit(FamilyTag family, std::string_view name, int trials, std::uint64_t seed,
                     double fail_threshold) {
    const auto& def = find_relative(family, name);
    Rng rng(seed);
    std::vector<std::array<double, 3>> rows;  // log g, log f', log|ratio|
    int attempts = 0;
    const int jet_order = def.jet_order + 1;
    while (static_cast<int>(rows.size()) < trials && attempts < trials * 50) {
        ++attempts;
        const double x0 = rng.uniform(-1.0, 1.0);
        AbelEquation eq = random_equation(family, rng, x0, {});
        PointTransformation T = random_transformation(rng, x0, {});
        const JetMap jets = coefficient_jets(eq, x0, jet_order + 2);
        const double f0 = def.eval(jets).value();
        if (scaled_vanishes(f0, def.degree, jet_map_scale(jets), 1e-5)) continue;
        TransformedJets out = apply(T, eq, x0, jet_order + 2);
        const double f1 = def.eval(out.coefficients).value();
        if (f1 == 0.0) continue;
        const double g0 = T.g.eval(x0);
        const double fp0 = T.f.eval_jet(x0, 1).coeff(1);
        if (g0 <= 0.0 || fp0 <= 0.0) continue;
        rows.push_back({std::log(g0), std::log(fp0), std::log(std::abs(f1 / f0))});
    }
    if (static_cast<int>(rows.size()) < std::max(4, trials / 2)) {
        throw FitFailed("weight_fit could not assemble enough well-conditioned samples");
    }
    double sxx = 0, sxy = 0, syy = 0, bx = 0, by = 0;
    for (const auto& r : rows) {
        sxx += r[0] * r[0];
        sxy += r[0] * r[1];
        syy += r[1] * r[1];
        bx += r[0] * r[2];
        by += r[1] * r[2];
    }
    const double det = sxx * syy - sxy * sxy;
    if (std::abs(det) < 1e-9) throw FitFailed("weight_fit design matrix is singular");
    const double p = (syy * bx - sxy * by) / det;
    const double q = (sxx * by - sxy * bx) / det;
    double perr = 0, qerr = 0;
    WeightFit fit;
    fit.g_exponent = nearest_rational(p, 12, &perr);
    fit.fp_exponent = nearest_rational(q, 12, &qerr);
    fit.g_raw = p;
    fit.fp_raw = q;
    fit.samples = static_cast<int>(rows.size());
    double residual = 0.0;
    const double pr = fit.g_exponent.to_double(), qr = fit.fp_exponent.to_double();
    for (const auto& r : rows) {
        residual = std::max(residual, std::abs(r[2] - pr * r[0] - qr * r[1]));
    }
    fit.residual = residual;
    if (residual > fail_threshold) {
        throw FitFailed("weight_fit residual " + std::to_string(residual) + " for " +
                        std::string(name) + " exceeds the threshold; the multiplier is not a pure"
                        " power of (g, f') at the point");
    }
    return fit;
}

namespace {

bool jet_small(const Jet& j, double bound) { return j.max_abs_coeff() <= bound; }

}  // namespace

bool canonical_check(FamilyTag family, const JetMap& jets, double tol) {
    const double bound = tol * (1.0 + jet_map_scale(jets));
    auto is_zero = [&](const char* name) { return jet_small(jets.at(name), bound); };
    auto is_one = [&](const char* name) { return jet_small(jets.at(name) - 1.0, bound); };
    switch (family) {
        case FamilyTag::K3: return is_one("a") && is_zero("b") && is_zero("c");
        case FamilyTag::K4: return is_one("a") && is_zero("b") && is_zero("d");
        case FamilyTag::K5: return is_one("a") && is_zero("b") && is_zero("e");
        case FamilyTag::K4S: return is_one("p") && is_zero("q") && is_zero("r");
        case FamilyTag::K5S1: return is_one("p") && is_zero("q") && is_zero("s");
        case FamilyTag::K5S2: return is_one("p") && is_zero("q") && is_zero("s");
    }
    throw Error("unreachable");
}

bool canonical_check(const AbelEquation& eq, double x0, double tol) {
    return canonical_check(eq.family(), coefficient_jets(eq, x0, 4), tol);
}

}  // namespace abel
