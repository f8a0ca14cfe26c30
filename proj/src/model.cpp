#include "abel/model.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "abel/invariants.hpp"

namespace abel {

namespace {

const FamilyInfo kFamilies[] = {
    {FamilyTag::K3, "k3", 3, 2, false, {"a", "b", "c", "d"}},
    {FamilyTag::K4, "k4", 4, 4, false, {"a", "b", "c", "d", "e"}},
    {FamilyTag::K4S, "k4s", 4, 2, true, {"p", "q", "r", "s"}},
    {FamilyTag::K5, "k5", 5, 6, false, {"a", "b", "c", "d", "e", "f"}},
    {FamilyTag::K5S1, "k5s1", 5, 4, true, {"p", "q", "r", "s", "t"}},
    {FamilyTag::K5S2, "k5s2", 5, 2, true, {"p", "q", "s", "t"}},
};

const FamilyTag kAllFamilies[] = {FamilyTag::K3,  FamilyTag::K4,   FamilyTag::K4S,
                                  FamilyTag::K5,  FamilyTag::K5S1, FamilyTag::K5S2};

}  // namespace

const FamilyInfo& family_info(FamilyTag tag) {
    return kFamilies[static_cast<int>(tag)];
}

std::optional<FamilyTag> family_from_string(std::string_view name) {
    for (const FamilyInfo& info : kFamilies) {
        if (name == info.name) return info.tag;
    }
    return std::nullopt;
}

std::span<const FamilyTag> all_families() { return kAllFamilies; }

AbelEquation::AbelEquation(FamilyTag family, std::vector<Expression> coefficients)
    : family_(family), coefficients_(std::move(coefficients)) {
    const FamilyInfo& info = family_info(family_);
    if (coefficients_.size() != info.coefficient_names.size()) {
        throw WrongFamily(std::string("family ") + info.name + " needs " +
                          std::to_string(info.coefficient_names.size()) + " coefficients");
    }
}

const Expression& AbelEquation::coefficient(std::string_view name) const {
    const FamilyInfo& info = this->info();
    for (std::size_t i = 0; i < info.coefficient_names.size(); ++i) {
        if (name == info.coefficient_names[i]) return coefficients_[i];
    }
    throw Error("family " + std::string(info.name) + " has no coefficient '" + std::string(name) + "'");
}

AbelEquation AbelEquation::with_coefficient(std::string_view name, Expression replacement) const {
    const FamilyInfo& info = this->info();
    std::vector<Expression> coeffs = coefficients_;
    for (std::size_t i = 0; i < info.coefficient_names.size(); ++i) {
        if (name == info.coefficient_names[i]) {
            coeffs[i] = std::move(replacement);
            return AbelEquation(family_, std::move(coeffs));
        }
    }
    throw Error("family " + std::string(info.name) + " has no coefficient '" + std::string(name) + "'");
}

AbelEquation load_equation(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw BadEquationFile(std::string("not a valid equation document: ") + e.what());
    }
    if (!doc.is_object()) throw BadEquationFile("equation document must be a JSON object");
    for (const auto& [key, _] : doc.items()) {
        if (key != "family" && key != "coefficients") {
            throw UnexpectedKey("unexpected key '" + key + "'");
        }
    }
    if (!doc.contains("family") || !doc["family"].is_string()) {
        throw UnknownFamily("missing or non-string 'family'");
    }
    const std::string fam_name = doc["family"].get<std::string>();
    auto tag = family_from_string(fam_name);
    if (!tag) throw UnknownFamily("unknown family '" + fam_name + "'");
    if (!doc.contains("coefficients") || !doc["coefficients"].is_object()) {
        throw MissingCoefficient("missing 'coefficients' table");
    }
    const FamilyInfo& info = family_info(*tag);
    const auto& table = doc["coefficients"];
    for (const auto& [key, _] : table.items()) {
        if (std::find_if(info.coefficient_names.begin(), info.coefficient_names.end(),
                         [&](const char* n) { return key == n; }) == info.coefficient_names.end()) {
            throw UnexpectedKey("unexpected coefficient '" + key + "' for family " + fam_name);
        }
    }
    std::vector<Expression> coeffs;
    coeffs.reserve(info.coefficient_names.size());
    for (const char* name : info.coefficient_names) {
        if (!table.contains(name)) {
            throw MissingCoefficient("missing coefficient '" + std::string(name) + "'");
        }
        if (!table[name].is_string()) {
            throw BadEquationFile("coefficient '" + std::string(name) + "' must be an expression string");
        }
        coeffs.push_back(Expression::parse(table[name].get<std::string>()));
    }
    return AbelEquation(*tag, std::move(coeffs));
}

std::string render_equation(const AbelEquation& eq) {
    const FamilyInfo& info = eq.info();
    std::string out = "{\n  \"family\": \"";
    out += info.name;
    out += "\",\n  \"coefficients\": {\n";
    for (std::size_t i = 0; i < info.coefficient_names.size(); ++i) {
        out += "    \"";
        out += info.coefficient_names[i];
        out += "\": \"";
        for (char c : eq.coefficients()[i].render()) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        out += i + 1 < info.coefficient_names.size() ? "\",\n" : "\"\n";
    }
    out += "  }\n}\n";
    return out;
}

AbelEquation expand_singular(const AbelEquation& eq) {
    const Expression k = Expression::number(0.0);  // placeholder, unused
    auto num = [](double v) { return Expression::number(v); };
    switch (eq.family()) {
        case FamilyTag::K4S: {
            const Expression &p = eq.coefficient("p"), &q = eq.coefficient("q");
            const Expression &r = eq.coefficient("r"), &s = eq.coefficient("s");
            return AbelEquation(FamilyTag::K4,
                                {p.pow(4),
                                 num(4) * p.pow(3) * q,
                                 num(6) * p.pow(2) * q.pow(2),
                                 num(4) * p * q.pow(3) + r,
                                 q.pow(4) + s});
        }
        case FamilyTag::K5S1: {
            const Expression &p = eq.coefficient("p"), &q = eq.coefficient("q");
            const Expression &r = eq.coefficient("r"), &s = eq.coefficient("s");
            const Expression& t = eq.coefficient("t");
            return AbelEquation(FamilyTag::K5,
                                {p.pow(5),
                                 num(5) * p.pow(4) * q,
                                 num(10) * p.pow(3) * q.pow(2),
                                 num(10) * p.pow(2) * q.pow(3) + r,
                                 num(5) * p * q.pow(4) + s,
                                 q.pow(5) + t});
        }
        case FamilyTag::K5S2: {
            const Expression &p = eq.coefficient("p"), &q = eq.coefficient("q");
            const Expression &s = eq.coefficient("s"), &t = eq.coefficient("t");
            return AbelEquation(FamilyTag::K5,
                                {p.pow(5),
                                 num(5) * p.pow(4) * q,
                                 num(10) * p.pow(3) * q.pow(2),
                                 num(10) * p.pow(2) * q.pow(3),
                                 num(5) * p * q.pow(4) + s,
                                 q.pow(5) + t});
        }
        default:
            throw WrongFamily(std::string("expand_singular needs a singular family, got ") +
                              eq.info().name);
    }
}

JetMap coefficient_jets(const AbelEquation& eq, double x0, int order) {
    JetMap jets;
    const FamilyInfo& info = eq.info();
    for (std::size_t i = 0; i < info.coefficient_names.size(); ++i) {
        jets.emplace(info.coefficient_names[i], eq.coefficients()[i].eval_jet(x0, order));
    }
    return jets;
}

const char* to_string(OrbitTag tag) {
    switch (tag) {
        case OrbitTag::Regular: return "regular";
        case OrbitTag::SingularCubicS3Zero: return "singular_cubic_s3_zero";
        case OrbitTag::SingularQuarticI1Zero: return "singular_quartic_i1_zero";
        case OrbitTag::SingularQuarticL1Zero: return "singular_quartic_l1_zero";
        case OrbitTag::SingularQuinticK1Zero: return "singular_quintic_k1_zero";
        case OrbitTag::SingularQuinticK1K2Zero: return "singular_quintic_k1_k2_zero";
        case OrbitTag::SingularQuinticM2Zero: return "singular_quintic_m2_zero";
        case OrbitTag::DegenerateLeadingCoefficient: return "degenerate_leading_coefficient";
    }
    return "?";
}

bool scaled_vanishes(double value, int degree, double input_scale, double tol) {
    return std::abs(value) <= tol * std::pow(1.0 + input_scale, degree);
}

double jet_map_scale(const JetMap& jets) {
    double m = 0.0;
    for (const auto& [_, j] : jets) m = std::max(m, j.max_abs_coeff());
    return m;
}

double jet_map_scale(const JetMap& jets, int max_order) {
    double m = 0.0;
    for (const auto& [_, j] : jets) {
        const int upto = std::min(j.order(), max_order);
        for (int i = 0; i <= upto; ++i) m = std::max(m, std::abs(j.coeff(i)));
    }
    return m;
}

OrbitClass classify(FamilyTag family, const JetMap& jets, double tol) {
    auto value = [&](const char* name) {
        return relative_invariant_jet(family, name, jets).value();
    };
    auto vanish = [&](double v, const char* name) {
        for (const auto& def : relative_catalog(family)) {
            if (std::string_view(name) == def.name) {
                return scaled_vanishes(v, def.degree, jet_map_scale(jets, def.jet_order), tol);
            }
        }
        throw Error("unreachable");
    };
    switch (family) {
        case FamilyTag::K3: {
            const double s1 = value("s1"), s3 = value("s3");
            OrbitClass out{OrbitTag::Regular, {{"s1", s1}, {"s3", s3}}};
            if (vanish(s1, "s1")) out.tag = OrbitTag::DegenerateLeadingCoefficient;
            else if (vanish(s3, "s3")) out.tag = OrbitTag::SingularCubicS3Zero;
            return out;
        }
        case FamilyTag::K4: {
            const double i0 = value("I0"), i1 = value("I1");
            OrbitClass out{OrbitTag::Regular, {{"I0", i0}, {"I1", i1}}};
            if (vanish(i0, "I0")) out.tag = OrbitTag::DegenerateLeadingCoefficient;
            else if (vanish(i1, "I1")) out.tag = OrbitTag::SingularQuarticI1Zero;
            return out;
        }
        case FamilyTag::K4S: {
            const double l0 = value("L0"), l1 = value("L1");
            OrbitClass out{OrbitTag::Regular, {{"L0", l0}, {"L1", l1}}};
            if (vanish(l0, "L0")) out.tag = OrbitTag::DegenerateLeadingCoefficient;
            else if (vanish(l1, "L1")) out.tag = OrbitTag::SingularQuarticL1Zero;
            return out;
        }
        case FamilyTag::K5: {
            const double k0 = value("K0"), k1 = value("K1"), k2 = value("K2");
            OrbitClass out{OrbitTag::Regular, {{"K0", k0}, {"K1", k1}, {"K2", k2}}};
            if (vanish(k0, "K0")) {
                out.tag = OrbitTag::DegenerateLeadingCoefficient;
            } else if (vanish(k1, "K1")) {
                out.tag = vanish(k2, "K2") ? OrbitTag::SingularQuinticK1K2Zero
                                           : OrbitTag::SingularQuinticK1Zero;
            }
            return out;
        }
        case FamilyTag::K5S1: {
            const double l0 = value("L0"), l1 = value("L1");
            OrbitClass out{OrbitTag::Regular, {{"L0", l0}, {"L1", l1}}};
            if (vanish(l0, "L0") || vanish(l1, "L1")) {
                out.tag = OrbitTag::DegenerateLeadingCoefficient;
            }
            return out;
        }
        case FamilyTag::K5S2: {
            const double m0 = value("M0"), m2 = value("M2");
            OrbitClass out{OrbitTag::Regular, {{"M0", m0}, {"M2", m2}}};
            if (vanish(m0, "M0")) out.tag = OrbitTag::DegenerateLeadingCoefficient;
            else if (vanish(m2, "M2")) out.tag = OrbitTag::SingularQuinticM2Zero;
            return out;
        }
    }
    throw Error("unreachable");
}

OrbitClass classify(const AbelEquation& eq, double x0, double tol) {
    return classify(eq.family(), coefficient_jets(eq, x0, 2), tol);
}

}  // namespace abel
