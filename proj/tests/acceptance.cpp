// Acceptance suite: runs the full seeded verification through the CLI and
// maps the property results onto the ten acceptance criteria, one line each.

#include <chrono>
#include <cstdio>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#ifndef ABEL_CLI_PATH
#define ABEL_CLI_PATH "abel-equiv"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string output;
    double seconds;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(ABEL_CLI_PATH) + " " + args + " 2>/dev/null";
    const auto start = std::chrono::steady_clock::now();
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, "", 0.0};
    std::string out;
    char buf[8192];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    const auto stop = std::chrono::steady_clock::now();
    return {WEXITSTATUS(status), out,
            std::chrono::duration<double>(stop - start).count()};
}

struct Property {
    bool pass = false;
    bool informational = false;
    double worst = 0.0;
    double tolerance = 0.0;
    int trials = 0;
};

int failures = 0;

void criterion(int number, const std::string& label, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", number, label.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

int main() {
    std::printf("running the full seeded verification suite twice (seed 42, trials 200)...\n");
    const RunResult first = run_cli("verify --seed 42 --trials 200");
    const RunResult second = run_cli("verify --seed 42 --trials 200");
    if (first.exit_code != 0 && first.output.empty()) {
        std::printf("[FAIL] could not run the CLI at %s\n", ABEL_CLI_PATH);
        return 1;
    }

    std::map<std::string, Property> props;
    try {
        const auto doc = nlohmann::json::parse(first.output);
        for (const auto& p : doc["properties"]) {
            props[p["name"].get<std::string>()] = {
                p["pass"].get<bool>(), p["informational"].get<bool>(),
                p["worst"].is_null() ? 0.0 : p["worst"].get<double>(),
                p["tolerance"].get<double>(), p["trials"].get<int>()};
        }
    } catch (const std::exception& e) {
        std::printf("[FAIL] verify output was not parseable JSON: %s\n", e.what());
        return 1;
    }
    auto get = [&](const std::string& name) { return props[name]; };

    {
        const Property inv = get("absolute_invariance");
        const Property n2 = get("absolute_invariance_nabla2_k3");
        criterion(1, "absolute invariance of J and nabla J (all six families)",
                  inv.pass && n2.pass,
                  "worst " + fmt(inv.worst) + " <= 1e-7 over " + std::to_string(inv.trials) +
                      " triples/family; nabla^2 on k3 worst " + fmt(n2.worst) + " <= 1e-6");
    }
    {
        const Property w = get("weight_fit_exponents");
        criterion(2, "relative-invariant weights fit rational exponents",
                  w.pass,
                  "residual " + fmt(w.worst) + " <= 1e-6 for all " + std::to_string(w.trials) +
                      " cataloged relative invariants; leading law (-(k-1), -1) exact");
    }
    {
        const Property v = get("worked_example_values");
        const Property n = get("worked_example_nabla");
        criterion(3, "worked closed-form case y' = y^3 + x at x0 = 1",
                  v.pass && n.pass,
                  "s3 = -3, s5 = -3, s7 = 0, J1 = 1/9 to " + fmt(v.worst) +
                      "; nabla J1 error " + fmt(n.worst) + " <= 1e-9");
    }
    {
        const Property d = get("syzygy_derived_form");
        const Property p = get("syzygy_printed_form");
        criterion(4, "syzygy: derived form J2 = J1^(1/3) nabla(J1^(1/3)) + (5/3) J1",
                  d.pass,
                  "worst " + fmt(d.worst) + " <= 1e-8 over " + std::to_string(d.trials) +
                      " samples; printed-form residual " + fmt(p.worst) + " (informational)");
    }
    {
        const Property defect = get("infinitesimal_invariance");
        const Property fin = get("finite_infinitesimal_consistency");
        criterion(5, "infinitesimal invariance (K3/K4/K4S defects, quintic consistency)",
                  defect.pass && fin.pass,
                  "normalized defect " + fmt(defect.worst) + " <= 1e-6; quintic d/dt " +
                      fmt(fin.worst) + " <= 1e-6");
    }
    {
        const Property c = get("group_law_composition");
        const Property i = get("group_law_inversion");
        criterion(6, "pseudogroup composition and inversion on jets",
                  c.pass && i.pass,
                  "compose " + fmt(c.worst) + ", invert " + fmt(i.worst) + " <= 1e-8 over " +
                      std::to_string(c.trials) + " pairs");
    }
    {
        const Property e = get("singular_embeddings");
        const Property f = get("restriction_factor_i2_l1");
        const Property i3 = get("restriction_i3_identically_zero");
        criterion(7, "singular embeddings: I1, K1, K2 vanish on expanded forms",
                  e.pass && f.pass,
                  "worst scaled residual " + fmt(e.worst) + " <= 1e-10; I2 = 12 p^6 L1 to " +
                      fmt(f.worst) + "; I3 restricts to 0 (residual " + fmt(i3.worst) + ")");
    }
    {
        const Property s = get("equivalence_soundness");
        const Property p = get("equivalence_sensitivity");
        const Property l = get("singular_class_labels");
        criterion(8, "equivalence decision soundness, sensitivity and singular labels",
                  s.pass && p.pass && l.pass,
                  std::to_string(s.trials) + "/" + std::to_string(s.trials) +
                      " constructed pairs Equivalent; " + std::to_string(p.trials) + "/" +
                      std::to_string(p.trials) + " perturbed pairs NotEquivalent; class labels " +
                      (l.pass ? "returned" : "WRONG"));
    }
    {
        const Property c = get("canonical_closure");
        criterion(9, "residual transformations preserve canonical shapes",
                  c.pass,
                  "worst canonical residual " + fmt(c.worst) + " <= 1e-9 over " +
                      std::to_string(c.trials) + " random (K, h)");
    }
    {
        const bool bytes_equal = first.output == second.output && first.exit_code == 0 &&
                                 second.exit_code == 0;
        const bool fast = first.seconds < 120.0 && second.seconds < 120.0;
        criterion(10, "end-to-end determinism and runtime",
                  bytes_equal && fast,
                  std::string("verify --seed 42 byte-identical across runs: ") +
                      (bytes_equal ? "yes" : "NO") + "; runtimes " + fmt(first.seconds) + " s / " +
                      fmt(second.seconds) + " s (< 120 s)");
    }

    if (failures == 0) {
        std::printf("all 10 acceptance criteria pass\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", failures);
    return 1;
}
