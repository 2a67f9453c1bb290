// Timing comparison between the OpenMP kernels and their serial reference
// path. The numerics are identical either way (per-index storage, fixed
// reduction order); this target only reports wall times.

#include <chrono>
#include <cstdio>
#include <random>

#include "ionpulse/magnus.hpp"
#include "ionpulse/optimizer.hpp"
#include "ionpulse/parallel.hpp"

using namespace ionpulse;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

PulseSpec random_spec(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    std::vector<double> f(static_cast<std::size_t>(2 * n + 1));
    for (auto& v : f) v = amp(rng);
    return make_spec(10, n, 0.2, f, 0.05, 0.1);
}

double bench_oracle(bool parallel) {
    parallel::set_enabled(parallel);
    std::mt19937_64 rng(1);
    std::vector<PulseSpec> specs;
    for (int i = 0; i < 8; ++i) specs.push_back(random_spec(rng, 5));
    const auto start = Clock::now();
    std::vector<double> sums(specs.size(), 0.0);
    parallel::for_index(static_cast<int>(specs.size()), [&](int i) {
        const AlphaOracle oracle(specs[static_cast<std::size_t>(i)]);
        double acc = 0.0;
        for (AlphaLabel label : all_alpha_labels()) acc += std::abs(oracle.value(label));
        sums[static_cast<std::size_t>(i)] = acc;
    });
    double total = 0.0;
    for (double s : sums) total += s;
    std::printf("  checksum %.12f\n", total);
    return seconds_since(start);
}

double bench_scan(bool parallel) {
    parallel::set_enabled(parallel);
    OptimizationProblem problem;
    problem.n = 5;
    problem.scan.refine_iters = 4;
    const auto start = Clock::now();
    const OptimizationResult res = solve(problem);
    std::printf("  delta_opt %.6f objective %.9e\n", res.delta_opt, res.objective_value);
    return seconds_since(start);
}

double bench_magnus(bool parallel) {
    parallel::set_enabled(parallel);
    std::mt19937_64 rng(2);
    const PulseSpec spec = random_spec(rng, 3);
    const SpaceConfig cfg{3, 0};
    const auto start = Clock::now();
    const MagnusTerms terms = magnus_numeric(spec, cfg);
    std::printf("  |M2| %.9e\n", terms.M2.cwiseAbs().maxCoeff());
    return seconds_since(start);
}

} // namespace

int main() {
    struct Case {
        const char* name;
        double (*fn)(bool);
    };
    const Case cases[] = {
        {"alpha oracle batch (8 specs)", bench_oracle},
        {"delta scan solve (n=5)", bench_scan},
        {"Magnus matrix oracle", bench_magnus},
    };
    std::printf("%-32s %12s %12s %9s\n", "kernel", "serial [s]", "openmp [s]", "speedup");
    for (const Case& c : cases) {
        std::printf("%s\n", c.name);
        const double serial = c.fn(false);
        const double parallel = c.fn(true);
        std::printf("%-32s %12.3f %12.3f %8.2fx\n", "", serial, parallel, serial / parallel);
    }
    parallel::set_enabled(true);
    return 0;
}
