#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ionpulse/cli.hpp"
#include "ionpulse/json_io.hpp"

using namespace ionpulse;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("ionpulse_test_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(std::vector<std::string> args) {
    std::vector<const char*> argv{"ionpulse"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_strong_spec(const std::string& path) {
    // strong, short-cycle pulse to keep propagation cheap in unit tests
    const PulseSpec spec = monochromatic_reference(0.4, 0.2, 10);
    std::ofstream out(path);
    out << spec_to_json(spec).dump() << "\n";
}

} // namespace

TEST_CASE("simulate writes a deterministic trace with the expected header") {
    TempDir tmp;
    write_strong_spec(tmp.file("spec.json"));
    const std::string out = tmp.file("out");
    REQUIRE(run({"simulate", "--spec", tmp.file("spec.json"), "--out", out, "--cycles", "0.25",
                 "--grid", "40"}) == 0);

    const std::string trace = slurp(out + "/trace.csv");
    CHECK(trace.rfind("t,p_g0,p_e0,p_g1,", 0) == 0);
    CHECK(trace.find("defect,leakage") != std::string::npos);
    // initial condition: first data row starts at t=0 with P_g1 = 1
    std::istringstream lines(trace);
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(first.rfind("0,0,0,1,", 0) == 0);

    const std::string manifest = slurp(out + "/manifest.json");
    CHECK(manifest.find("trace.csv") != std::string::npos);

    // byte-identical rerun
    REQUIRE(run({"simulate", "--spec", tmp.file("spec.json"), "--out", tmp.file("out2"),
                 "--cycles", "0.25", "--grid", "40"}) == 0);
    CHECK(slurp(tmp.file("out2") + "/trace.csv") == trace);
}

TEST_CASE("overrides reach the spec and unknown keys are named") {
    TempDir tmp;
    write_strong_spec(tmp.file("spec.json"));
    REQUIRE(run({"coeffs", "--spec", tmp.file("spec.json"), "--out", tmp.file("o"),
                 "--set", "delta=0.3"}) == 0);
    const Json report = Json::parse(slurp(tmp.file("o") + "/coeffs.json"));
    CHECK(report.at("alpha").at("alpha1_0").at(0).get<double>() == doctest::Approx(-0.075));

    CHECK(run({"coeffs", "--spec", tmp.file("spec.json"), "--out", tmp.file("o2"),
               "--set", "bogus_key=1"}) == 1);
}

TEST_CASE("evaluate emits every functional") {
    TempDir tmp;
    write_strong_spec(tmp.file("spec.json"));
    REQUIRE(run({"evaluate", "--spec", tmp.file("spec.json"), "--out", tmp.file("o")}) == 0);
    const Json report = Json::parse(slurp(tmp.file("o") + "/evaluate.json"));
    for (const char* key : {"G1", "G2", "G3", "state_g1", "state_e0", "gate_truncated",
                            "gate_asymptotic", "cycle_g1"})
        CHECK(report.contains(key));
    CHECK(report.at("cycle_g1").get<double>() > 0.0);
}

TEST_CASE("verify-magnus passes on a random spec") {
    TempDir tmp;
    REQUIRE(run({"verify-magnus", "--seed", "3", "--n", "2", "--out", tmp.file("o")}) == 0);
    const Json report = Json::parse(slurp(tmp.file("o") + "/verify_magnus.json"));
    CHECK(report.at("pass").get<bool>());
    for (const auto& [label, entry] : report.at("coefficients").items()) {
        (void)label;
        CHECK(entry.at("rel_err").get<double>() < 1e-8);
    }
}

TEST_CASE("optimize writes result and pulse files") {
    TempDir tmp;
    OptimizationProblem problem;
    problem.n = 3;
    problem.scan.step = 0.05;
    problem.scan.refine_iters = 6;
    {
        std::ofstream out(tmp.file("problem.json"));
        out << problem_to_json(problem).dump() << "\n";
    }
    REQUIRE(run({"optimize", "--spec", tmp.file("problem.json"), "--out", tmp.file("o")}) == 0);
    const Json result = Json::parse(slurp(tmp.file("o") + "/result.json"));
    CHECK(result.at("feasible").get<bool>());
    const PulseSpec pulse = load_spec(tmp.file("o") + "/pulse.json");
    CHECK(pulse.n == 3);

    // an infeasible problem (single tone, five constraints) exits with 2
    REQUIRE(run({"optimize", "--spec", tmp.file("problem.json"), "--out", tmp.file("o2"),
                 "--set", "n=0"}) == 2);
}

TEST_CASE("sweep-n emits the improvement CSV") {
    TempDir tmp;
    OptimizationProblem problem;
    problem.n = 3;
    problem.eta = 0.2;   // strong, short-cycle parameters keep this fast
    problem.f_tg = 0.4;
    problem.scan.step = 0.1;
    problem.scan.refine_iters = 4;
    {
        std::ofstream out(tmp.file("problem.json"));
        out << problem_to_json(problem).dump() << "\n";
    }
    REQUIRE(run({"sweep-n", "--spec", tmp.file("problem.json"), "--out", tmp.file("o"),
                 "--n-min", "3", "--n-max", "3", "--grid", "120"}) == 0);
    const std::string csv = slurp(tmp.file("o") + "/sweep.csv");
    CHECK(csv.rfind("n,R_cycle,R_theory,I_mono,I_poly,delta_opt,feasible", 0) == 0);
    CHECK(csv.find("\n3,") != std::string::npos);
}

TEST_CASE("usage errors") {
    CHECK(run({"unknown-command"}) != 0);
    CHECK(run({"simulate", "--spec", "/nonexistent/path.json"}) == 1);
    TempDir tmp;
    {
        std::ofstream out(tmp.file("bad.json"));
        out << "{\"m\": 10, \"n\": 0, \"delta\": 0, \"f\": [0], \"eta\": [0.05], \"f_tg\": 0.1, "
               "\"extra\": 5}\n";
    }
    CHECK(run({"simulate", "--spec", tmp.file("bad.json")}) == 1);
}
