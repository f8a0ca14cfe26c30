#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#ifndef ABEL_CLI_PATH
#define ABEL_CLI_PATH "abel-equiv"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(ABEL_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/abel_cli_test_" + name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    return path;
}

const char* kCubicPlusX =
    R"({"family":"k3","coefficients":{"a":"1","b":"0","c":"0","d":"x"}})";
const char* kCubicPlusX2 =
    R"({"family":"k3","coefficients":{"a":"1","b":"0","c":"0","d":"x^2"}})";
const char* kConstants =
    R"({"family":"k3","coefficients":{"a":"1","b":"0","c":"1","d":"1"}})";

}  // namespace

TEST_CASE("invariants subcommand reports values and defined flags") {
    const std::string eq = write_temp("cubic.json", kCubicPlusX);
    const RunResult at1 = run_cli("invariants --eq " + eq + " --at 1");
    CHECK(at1.exit_code == 0);
    CHECK(at1.output.find("\"s3\": -3") != std::string::npos);
    CHECK(at1.output.find("\"J1\": 0.1111111111") != std::string::npos);
    CHECK(at1.output.find("\"orbit\": \"regular\"") != std::string::npos);

    // s3 = 0 at the origin: soft-failed values are null with defined false
    const RunResult at0 = run_cli("invariants --eq " + eq + " --at 0");
    CHECK(at0.exit_code == 0);
    CHECK(at0.output.find("\"J1\": null") != std::string::npos);
    CHECK(at0.output.find("\"J1\": false") != std::string::npos);

    const RunResult missing = run_cli("invariants --eq /tmp/no_such_file.json --at 1");
    CHECK(missing.exit_code == 65);
}

TEST_CASE("classify subcommand") {
    const std::string eq = write_temp("classify.json", kCubicPlusX);
    const RunResult r = run_cli("classify --eq " + eq + " --at 0");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("singular_cubic_s3_zero") != std::string::npos);
}

TEST_CASE("signature subcommand emits CSV") {
    const std::string eq = write_temp("sig.json", kCubicPlusX);
    const RunResult r = run_cli("signature --eq " + eq + " --from 1 --to 2 --samples 16");
    CHECK(r.exit_code == 0);
    CHECK(r.output.rfind("x,J1,nabla_J1,defined\n", 0) == 0);
    // 17-significant-digit values are present
    CHECK(r.output.find("0.1111111111111111") != std::string::npos);
}

TEST_CASE("equivalent subcommand exit codes") {
    const std::string eq1 = write_temp("eq1.json", kCubicPlusX);
    const std::string eq2 = write_temp("eq2.json", kCubicPlusX2);
    const std::string eqc = write_temp("eqc.json", kConstants);

    // transform-generated pair decides Equivalent with exit 0
    const std::string transformed = "/tmp/abel_cli_test_transformed.json";
    const RunResult t = run_cli("transform --eq " + eq1 +
                                " --f \"x/2+1\" --g \"2\" --h \"x\" --out " + transformed);
    CHECK(t.exit_code == 0);
    const RunResult same = run_cli("equivalent --eq1 " + eq1 + " --eq2 " + transformed +
                                   " --at1 1 --at2 1.5");
    CHECK(same.exit_code == 0);
    CHECK(same.output.find("\"verdict\": \"equivalent\"") != std::string::npos);

    const RunResult diff = run_cli("equivalent --eq1 " + eq1 + " --eq2 " + eq2 +
                                   " --at1 1 --at2 1");
    CHECK(diff.exit_code == 1);

    const RunResult inconclusive = run_cli("equivalent --eq1 " + eqc + " --eq2 " + eqc +
                                           " --at1 0 --at2 0");
    CHECK(inconclusive.exit_code == 2);
}

TEST_CASE("transform subcommand emits jets at a point for general f") {
    const std::string eq = write_temp("tra.json", kCubicPlusX);
    const RunResult r = run_cli("transform --eq " + eq +
                                " --f \"x^3+x\" --g \"1+x^2\" --h \"sin(x)\" --at 1 --order 4");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"x_new\": 2") != std::string::npos);
    CHECK(r.output.find("\"a\": [") != std::string::npos);

    // non-affine f cannot be emitted symbolically
    const RunResult bad = run_cli("transform --eq " + eq + " --f \"x^3+x\" --g \"1\" --h \"0\"");
    CHECK(bad.exit_code == 65);
}

TEST_CASE("usage errors exit with 64") {
    const RunResult r = run_cli("invariants --no-such-flag");
    CHECK(r.exit_code == 64);
    const RunResult none = run_cli("");
    CHECK(none.exit_code == 64);
}

TEST_CASE("seeded verify runs are byte-identical") {
    const RunResult a = run_cli("verify --seed 42 --trials 4");
    const RunResult b = run_cli("verify --seed 42 --trials 4");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("\"all_pass\": true") != std::string::npos);
}
