// abel-equiv: differential invariants and local equivalence of Abel-type ODEs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "abel/equivalence.hpp"
#include "abel/invariants.hpp"
#include "abel/jsonio.hpp"
#include "abel/model.hpp"
#include "abel/transform.hpp"
#include "abel/verify.hpp"

namespace {

using namespace abel;

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitInternal = 70;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BadEquationFile("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

AbelEquation load_equation_file(const std::string& path) { return load_equation(read_file(path)); }

struct ValueEntry {
    double value;
    bool defined;
};

void print_values_json(const std::string& family, double at, int order, const OrbitClass& orbit,
                       const std::map<std::string, ValueEntry>& values) {
    JsonWriter w;
    w.begin_object();
    w.key("at");
    w.value(at);
    w.key("defined");
    w.begin_object();
    for (const auto& [name, entry] : values) {
        w.key(name);
        w.value(entry.defined);
    }
    w.end_object();
    w.key("family");
    w.value(family);
    w.key("orbit");
    w.value(to_string(orbit.tag));
    w.key("order");
    w.value(order);
    w.key("values");
    w.begin_object();
    for (const auto& [name, entry] : values) {
        w.key(name);
        if (entry.defined) {
            w.value(entry.value);
        } else {
            w.null();
        }
    }
    w.end_object();
    w.end_object();
    std::fputs(w.take().c_str(), stdout);
}

int cmd_invariants(const std::string& eq_file, double at, int order, double tol_zero,
                   const std::string& format) {
    const AbelEquation eq = load_equation_file(eq_file);
    const JetMap jets = coefficient_jets(eq, at, order);
    std::map<std::string, ValueEntry> values;
    for (const auto& v : relative_invariants(eq.family(), jets)) {
        values[v.name] = {v.value, v.defined};
    }
    for (const auto& v : absolute_invariants(eq.family(), jets, tol_zero)) {
        values[v.name] = {v.value, v.defined};
        const InvariantValue n = nabla_power(eq.family(), jets, v.name, 1, tol_zero);
        values[n.name] = {n.value, n.defined};
    }
    const InvariantValue a = derivation_coefficient(eq.family(), jets, tol_zero);
    values["derivation_A"] = {a.value, a.defined};
    const OrbitClass orbit = classify(eq, at, tol_zero);
    if (format == "text") {
        std::printf("family %s at %.17g (orbit: %s)\n", eq.info().name, at, to_string(orbit.tag));
        for (const auto& [name, entry] : values) {
            if (entry.defined) {
                std::printf("  %-10s %.17g\n", name.c_str(), entry.value);
            } else {
                std::printf("  %-10s undefined\n", name.c_str());
            }
        }
    } else {
        print_values_json(eq.info().name, at, order, orbit, values);
    }
    return 0;
}

int cmd_classify(const std::string& eq_file, double at, double tol_zero,
                 const std::string& format) {
    const AbelEquation eq = load_equation_file(eq_file);
    const OrbitClass orbit = classify(eq, at, tol_zero);
    if (format == "text") {
        std::printf("%s\n", to_string(orbit.tag));
        for (const auto& [name, value] : orbit.witness) {
            std::printf("  %s = %.17g\n", name.c_str(), value);
        }
        return 0;
    }
    JsonWriter w;
    w.begin_object();
    w.key("at");
    w.value(at);
    w.key("family");
    w.value(eq.info().name);
    w.key("orbit");
    w.value(to_string(orbit.tag));
    w.key("witness");
    w.begin_object();
    std::map<std::string, double> sorted(orbit.witness.begin(), orbit.witness.end());
    for (const auto& [name, value] : sorted) {
        w.key(name);
        w.value(value);
    }
    w.end_object();
    w.end_object();
    std::fputs(w.take().c_str(), stdout);
    return 0;
}

int cmd_signature(const std::string& eq_file, double from, double to, int samples, int order,
                  double tol_zero, const std::string& format) {
    const AbelEquation eq = load_equation_file(eq_file);
    SignatureOptions opts;
    opts.order = order;
    opts.zero_tol = tol_zero;
    const SignatureCurve curve = signature(eq, from, to, samples, opts);
    if (format == "json") {
        JsonWriter w;
        w.begin_object();
        w.key("components");
        w.begin_array();
        for (const auto& c : curve.components) w.value(c);
        w.end_array();
        w.key("family");
        w.value(eq.info().name);
        w.key("samples");
        w.begin_array();
        for (std::size_t i = 0; i < curve.xs.size(); ++i) {
            w.begin_object();
            w.key("defined");
            w.value(curve.defined[i] != 0);
            w.key("values");
            w.begin_array();
            for (double v : curve.values[i]) w.value(v);
            w.end_array();
            w.key("x");
            w.value(curve.xs[i]);
            w.end_object();
        }
        w.end_array();
        w.end_object();
        std::fputs(w.take().c_str(), stdout);
    } else {
        std::fputs(signature_csv(curve).c_str(), stdout);
    }
    return 0;
}

int cmd_equivalent(const std::string& eq1_file, const std::string& eq2_file, double at1,
                   double at2, const EquivalenceOptions& opts, const std::string& format) {
    const AbelEquation eq1 = load_equation_file(eq1_file);
    const AbelEquation eq2 = load_equation_file(eq2_file);
    const EquivalenceVerdict v = decide_equivalence(eq1, at1, eq2, at2, opts);
    if (format == "text") {
        std::printf("%s: %s (overlap %.3f, deviation %.3g)\n", to_string(v.verdict),
                    v.reason.c_str(), v.overlap_fraction, v.max_deviation);
    } else {
        JsonWriter w;
        w.begin_object();
        w.key("max_deviation");
        w.value(v.max_deviation);
        w.key("overlap_fraction");
        w.value(v.overlap_fraction);
        w.key("reason");
        w.value(v.reason);
        w.key("verdict");
        w.value(to_string(v.verdict));
        w.end_object();
        std::fputs(w.take().c_str(), stdout);
    }
    switch (v.verdict) {
        case EquivalenceVerdict::Kind::Equivalent: return 0;
        case EquivalenceVerdict::Kind::NotEquivalent: return 1;
        case EquivalenceVerdict::Kind::Inconclusive: return 2;
    }
    return kExitInternal;
}

int cmd_transform(const std::string& eq_file, const std::string& f_text, const std::string& g_text,
                  const std::string& h_text, std::optional<double> at, int order,
                  const std::string& out_path) {
    const AbelEquation eq = load_equation_file(eq_file);
    const PointTransformation T{Expression::parse(f_text), Expression::parse(g_text),
                                Expression::parse(h_text)};
    if (at) {
        const TransformedJets out = apply(T, eq, *at, order);
        JsonWriter w;
        w.begin_object();
        w.key("coefficients");
        w.begin_object();
        for (const auto& [name, jet] : out.coefficients) {
            w.key(name);
            w.begin_array();
            for (int i = 0; i <= jet.order(); ++i) w.value(jet.coeff(i));
            w.end_array();
        }
        w.end_object();
        w.key("family");
        w.value(eq.info().name);
        w.key("order");
        w.value(order);
        w.key("x_new");
        w.value(out.x_new);
        w.end_object();
        std::fputs(w.take().c_str(), stdout);
        return 0;
    }
    const AbelEquation transformed = apply_symbolic(T, eq);
    const std::string text = render_equation(transformed);
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw BadEquationFile("cannot write '" + out_path + "'");
        out << text;
    }
    return 0;
}

int cmd_verify(const std::string& eq_file, int trials, std::uint64_t seed,
               const std::string& format) {
    std::optional<AbelEquation> eq;
    if (!eq_file.empty()) eq = load_equation_file(eq_file);
    const VerifyReport report = run_verify(seed, trials, eq);
    if (format == "text") {
        for (const auto& r : report.results) {
            std::printf("[%s] %-34s worst %.3g tol %.3g (%d trials)%s\n",
                        r.informational ? "info" : (r.pass ? "pass" : "FAIL"), r.name.c_str(),
                        r.worst, r.tolerance, r.trials, r.informational ? " [informational]" : "");
        }
        std::printf("%s\n", report.all_pass() ? "all properties pass" : "FAILURES present");
    } else {
        std::fputs(verify_report_json(report).c_str(), stdout);
    }
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"differential invariants and local equivalence of Abel-type ODEs"};
    app.require_subcommand(1);

    std::string eq_file, eq1_file, eq2_file, f_text = "x", g_text = "1", h_text = "0";
    std::string format = "json", out_path;
    double at = 0.0, at1 = 0.0, at2 = 0.0, from = 0.0, to = 1.0;
    int order = kDefaultOrder, samples = 128, trials = 200;
    double tol_match = 1e-5, tol_zero = kDefaultZeroTol, min_overlap = 0.5, window = 0.5;
    std::uint64_t seed = 42;
    std::optional<double> at_opt;

    auto* inv = app.add_subcommand("invariants", "evaluate all invariants of an equation");
    inv->add_option("--eq", eq_file)->required();
    inv->add_option("--at", at)->required();
    inv->add_option("--order", order);
    inv->add_option("--tol-zero", tol_zero);
    inv->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

    auto* cls = app.add_subcommand("classify", "orbit classification at a point");
    cls->add_option("--eq", eq_file)->required();
    cls->add_option("--at", at)->required();
    cls->add_option("--tol-zero", tol_zero);
    cls->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

    auto* sig = app.add_subcommand("signature", "sample the signature curve");
    sig->add_option("--eq", eq_file)->required();
    sig->add_option("--from", from)->required();
    sig->add_option("--to", to)->required();
    sig->add_option("--samples", samples);
    sig->add_option("--order", order);
    sig->add_option("--tol-zero", tol_zero);
    std::string sig_format = "csv";
    sig->add_option("--format", sig_format)->check(CLI::IsMember({"csv", "json"}));

    auto* equiv = app.add_subcommand("equivalent", "decide local equivalence of two equations");
    equiv->add_option("--eq1", eq1_file)->required();
    equiv->add_option("--eq2", eq2_file)->required();
    equiv->add_option("--at1", at1)->required();
    equiv->add_option("--at2", at2)->required();
    equiv->add_option("--window", window);
    equiv->add_option("--samples", samples);
    equiv->add_option("--order", order);
    equiv->add_option("--tol-match", tol_match);
    equiv->add_option("--tol-zero", tol_zero);
    equiv->add_option("--min-overlap", min_overlap);
    equiv->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

    auto* tra = app.add_subcommand("transform", "apply a pseudogroup element to an equation");
    tra->set_help_flag("--help", "print this help message and exit");
    tra->add_option("--eq", eq_file)->required();
    tra->add_option("--f", f_text);
    tra->add_option("--g", g_text);
    tra->add_option("--h", h_text);
    tra->add_option("--at", at_opt, "emit transformed coefficient jets at this point");
    tra->add_option("--order", order);
    tra->add_option("--out", out_path, "write the transformed equation file here");

    auto* ver = app.add_subcommand("verify", "run the property-verification suite");
    ver->add_option("--eq", eq_file);
    ver->add_option("--trials", trials);
    ver->add_option("--seed", seed);
    ver->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (inv->parsed()) return cmd_invariants(eq_file, at, order, tol_zero, format);
        if (cls->parsed()) return cmd_classify(eq_file, at, tol_zero, format);
        if (sig->parsed()) return cmd_signature(eq_file, from, to, samples, order, tol_zero, sig_format);
        if (equiv->parsed()) {
            EquivalenceOptions opts;
            opts.window = window;
            opts.samples = samples;
            opts.order = order;
            opts.tol_match = tol_match;
            opts.zero_tol = tol_zero;
            opts.min_overlap = min_overlap;
            return cmd_equivalent(eq1_file, eq2_file, at1, at2, opts, format);
        }
        if (tra->parsed()) return cmd_transform(eq_file, f_text, g_text, h_text, at_opt, order, out_path);
        if (ver->parsed()) return cmd_verify(eq_file, trials, seed, format);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitUsage;
}
