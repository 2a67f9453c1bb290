#include "ionpulse/cli.hpp"

#include <CLI11.hpp>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "ionpulse/json_io.hpp"
#include "ionpulse/magnus.hpp"

namespace ionpulse {

namespace {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw UsageError("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

class OutputDir {
public:
    OutputDir(std::string dir, std::string command, Json parameters)
        : dir_(std::move(dir)), command_(std::move(command)), parameters_(std::move(parameters)) {
        fs::create_directories(dir_);
    }

    fs::path path(const std::string& name) const { return fs::path(dir_) / name; }

    void write(const std::string& name, const std::string& content, const std::string& desc) {
        atomic_write(path(name), content);
        artifacts_.push_back(Json{{"path", name}, {"description", desc}});
    }

    void write_json(const std::string& name, const Json& j, const std::string& desc) {
        write(name, j.dump(2) + "\n", desc);
    }

    void finish() {
        const Json manifest{{"schema", 1},
                            {"command", command_},
                            {"parameters", parameters_},
                            {"artifacts", artifacts_}};
        atomic_write(path("manifest.json"), manifest.dump(2) + "\n");
    }

private:
    std::string dir_;
    std::string command_;
    Json parameters_;
    Json artifacts_ = Json::array();
};

struct CsvBuilder {
    std::string text;

    explicit CsvBuilder(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) text += ',';
            text += header[i];
        }
        text += '\n';
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) text += ',';
            text += format_double(values[i]);
        }
        text += '\n';
    }
};

Json load_with_overrides(const std::string& path, const std::vector<std::string>& sets) {
    Json doc = load_json_file(path);
    for (const std::string& assignment : sets) apply_override(doc, assignment);
    return doc;
}

Json complex_json(Complex v) { return Json{v.real(), v.imag()}; }

std::string trace_csv(const SimulationTrace& trace, const SpaceConfig& cfg) {
    std::vector<std::string> header{"t"};
    for (int k = 0; k < cfg.d; ++k) {
        header.push_back("p_g" + std::to_string(k));
        header.push_back("p_e" + std::to_string(k));
    }
    header.push_back("defect");
    header.push_back("leakage");
    CsvBuilder csv(header);
    for (std::size_t s = 0; s < trace.times.size(); ++s) {
        std::vector<double> row{trace.times[s]};
        for (int idx = 0; idx < cfg.dim(); ++idx)
            row.push_back(trace.populations(static_cast<Eigen::Index>(s), idx));
        row.push_back(trace.defect_series[s]);
        row.push_back(trace.leakage_series[s]);
        csv.row(row);
    }
    return csv.text;
}

double cycle_length(const PulseSpec& spec, const BasisIndex& initial) {
    if (!(spec.f_tg > 0.0))
        throw UsageError("a positive f_tg is needed to define the gate cycle length");
    const int k = initial.electronic == Electronic::g ? std::max(initial.k, 1) : initial.k + 1;
    return 4.0 * std::acos(-1.0) / (spec.f_tg * std::sqrt(static_cast<double>(k)));
}

// ---- subcommand bodies ----------------------------------------------------

int cmd_simulate(const std::string& spec_path, const std::vector<std::string>& sets,
                 const std::string& out_dir, const std::string& initial_label, double cycles,
                 int grid) {
    const PulseSpec spec = spec_from_json(load_with_overrides(spec_path, sets));
    const BasisIndex initial = parse_basis_label(initial_label);
    const SpaceConfig cfg = default_space_for(initial.k);
    const double t_end = cycles * cycle_length(spec, initial);
    const auto samples = propagate_exact(spec, cfg, uniform_grid(t_end, grid));
    const SimulationTrace trace = trace_from_samples(samples, cfg, initial);

    OutputDir out(out_dir, "simulate",
                  Json{{"spec", spec_to_json(spec)},
                       {"initial", initial_label},
                       {"cycles", cycles},
                       {"grid", grid}});
    out.write("trace.csv", trace_csv(trace, cfg), "populations, defect and leakage per time");
    out.finish();
    if (trace.leakage_flagged) {
        std::cerr << "warning: guard-band leakage " << trace.leakage << " flagged\n";
    }
    return 0;
}

int cmd_evaluate(const std::string& spec_path, const std::vector<std::string>& sets,
                 const std::string& out_dir, int d, int grid) {
    const PulseSpec spec = spec_from_json(load_with_overrides(spec_path, sets));
    const GIntegrals g = g_integrals(spec);
    CycleOptions copts;
    copts.grid_per_period = grid;
    const Json report{
        {"schema", 1},
        {"G1", g.g1},
        {"G2", g.g2},
        {"G3", g.g3},
        {"G3cos_k1", g3cos_integral(spec, 1)},
        {"state_g1", state_infidelity(spec, BasisIndex{Electronic::g, 1})},
        {"state_e0", state_infidelity(spec, BasisIndex{Electronic::e, 0})},
        {"gate_truncated", gate_infidelity_truncated(spec, d)},
        {"gate_asymptotic", gate_infidelity_asymptotic(spec)},
        {"cycle_g1", cycle_infidelity(spec, BasisIndex{Electronic::g, 1}, spec.f_tg, copts)},
    };
    OutputDir out(out_dir, "evaluate", Json{{"spec", spec_to_json(spec)}, {"d", d}, {"grid", grid}});
    out.write_json("evaluate.json", report, "all functional values for the pulse");
    out.finish();
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_coeffs(const std::string& spec_path, const std::vector<std::string>& sets,
               const std::string& out_dir) {
    const PulseSpec spec = spec_from_json(load_with_overrides(spec_path, sets));
    const EffectiveCoefficients ec = effective_coefficients(spec);
    const SpaceConfig cfg = default_space_for(1);
    const AssembledEffective assembled = assemble(spec, cfg);
    Json alphas;
    alphas["alpha1_0"] = complex_json(ec.alpha0[0]);
    alphas["alpha2_0"] = complex_json(ec.alpha0[1]);
    for (int i = 0; i < 8; ++i)
        alphas["alpha" + std::to_string(i + 1) + "_1"] = complex_json(ec.alpha1[i]);
    for (int i = 0; i < 11; ++i)
        alphas["alpha" + std::to_string(i + 1) + "_2"] = complex_json(ec.alpha2[i]);
    Json cs = Json::array();
    for (const Complex& c : assembled.c) cs.push_back(complex_json(c));
    const auto res5 = constraint_residuals(spec);
    const auto res7 = full_constraint_residuals(spec);
    const Json report{{"schema", 1},
                      {"branch", ec.branch == Branch::m_gt_2n ? "m>2n" : "2n>=m>n"},
                      {"alpha", alphas},
                      {"c", cs},
                      {"constraints_five", std::vector<double>(res5.begin(), res5.end())},
                      {"constraints_seven", std::vector<double>(res7.begin(), res7.end())}};
    OutputDir out(out_dir, "coeffs", Json{{"spec", spec_to_json(spec)}});
    out.write_json("coeffs.json", report, "effective-Hamiltonian coefficients and residuals");
    out.finish();
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_verify_magnus(const std::string& spec_path, const std::vector<std::string>& sets,
                      const std::string& out_dir, std::uint64_t seed, int n) {
    PulseSpec spec;
    if (!spec_path.empty()) {
        spec = spec_from_json(load_with_overrides(spec_path, sets));
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> amp(-2.0, 2.0);
        std::uniform_real_distribution<double> det(0.0, 0.5);
        std::uniform_real_distribution<double> ld(0.02, 0.2);
        spec.m = 10;
        spec.n = n;
        spec.delta = det(rng);
        spec.f.resize(static_cast<std::size_t>(2 * n + 1));
        spec.eta.resize(static_cast<std::size_t>(2 * n + 1));
        for (auto& v : spec.f) v = amp(rng);
        for (auto& v : spec.eta) v = ld(rng);
        spec.f_tg = 0.1;
        spec.validate();
    }

    const EffectiveCoefficients ec = effective_coefficients(spec);
    const AlphaOracle oracle(spec);
    Json entries;
    bool ok = true;
    // 1e-8 relative with a 1e-12 absolute floor
    constexpr double kRelTol = 1e-8;
    constexpr double kAbsFloor = 1e-12;
    for (AlphaLabel label : all_alpha_labels()) {
        const int idx = static_cast<int>(label);
        const Complex closed = idx < 8 ? ec.alpha1[idx] : ec.alpha2[idx - 8];
        const Complex numeric = oracle.value(label);
        const double rel = std::abs(closed - numeric) /
                           std::max(std::abs(numeric), kAbsFloor / kRelTol);
        ok = ok && rel < kRelTol;
        entries[to_string(label)] =
            Json{{"closed_form", complex_json(closed)},
                 {"oracle", complex_json(numeric)},
                 {"rel_err", rel}};
    }
    const Json report{{"schema", 1}, {"spec", spec_to_json(spec)}, {"coefficients", entries},
                      {"pass", ok}};
    OutputDir out(out_dir, "verify-magnus", Json{{"seed", seed}, {"n", spec.n}});
    out.write_json("verify_magnus.json", report, "closed form vs quadrature oracle");
    out.finish();
    std::cout << report.dump(2) << "\n";
    if (!ok) throw OracleError("closed forms disagree with the quadrature oracle");
    return 0;
}

int cmd_optimize(const std::string& spec_path, const std::vector<std::string>& sets,
                 const std::string& out_dir) {
    const OptimizationProblem problem = problem_from_json(load_with_overrides(spec_path, sets));
    const OptimizationResult result = solve(problem);
    OutputDir out(out_dir, "optimize", problem_to_json(problem));
    out.write_json("result.json", result_to_json(result), "optimal pulse and scan profile");
    if (result.feasible)
        out.write_json("pulse.json", spec_to_json(spec_from_result(problem, result)),
                       "optimal pulse as a loadable spec");
    out.finish();
    std::cout << result_to_json(result).dump(2) << "\n";
    return result.feasible ? 0 : 2;
}

int cmd_sweep(const std::string& spec_path, const std::vector<std::string>& sets,
              const std::string& out_dir, int n_min, int n_max, int grid) {
    const OptimizationProblem base = problem_from_json(load_with_overrides(spec_path, sets));
    std::vector<int> ns;
    for (int n = n_min; n <= n_max; ++n) ns.push_back(n);
    CycleOptions copts;
    copts.grid_per_period = grid;
    const auto reports = improvement_sweep(base, ns, copts);

    CsvBuilder csv({"n", "R_cycle", "R_theory", "I_mono", "I_poly", "delta_opt", "feasible"});
    for (const auto& rep : reports) {
        if (!rep.error.empty()) {
            std::cerr << "n=" << rep.n << " failed: " << rep.error << "\n";
            continue;
        }
        csv.row({static_cast<double>(rep.n), rep.R_cycle, rep.R_theory, rep.I_mono, rep.I_poly,
                 rep.delta_opt, rep.feasible ? 1.0 : 0.0});
    }
    OutputDir out(out_dir, "sweep-n",
                  Json{{"problem", problem_to_json(base)}, {"n_min", n_min}, {"n_max", n_max}});
    out.write("sweep.csv", csv.text, "improvement ratios per sideband count");
    out.finish();
    return 0;
}

int cmd_timing(const std::string& spec_path, const std::vector<std::string>& sets,
               const std::string& out_dir, int q_max) {
    const PulseSpec spec = spec_from_json(load_with_overrides(spec_path, sets));
    const PulseSpec mono = monochromatic_reference(spec.f_tg, spec.eta_at(0), spec.m);
    const BasisIndex initial{Electronic::g, 1};
    CsvBuilder csv({"q", "sensitivity", "sensitivity_mono"});
    for (int q = 1; q <= q_max; ++q)
        csv.row({static_cast<double>(q), timing_sensitivity(spec, initial, q),
                 timing_sensitivity(mono, initial, q)});
    OutputDir out(out_dir, "timing-scan", Json{{"spec", spec_to_json(spec)}, {"q_max", q_max}});
    out.write("timing.csv", csv.text, "|dP/dt| at t=qT for the pulse and its monochromatic reference");
    out.finish();
    return 0;
}

// ---- figure reproductions --------------------------------------------------

OptimizationProblem canonical_problem(int n, ConstraintChoice constraints = ConstraintChoice::five,
                                  ObjectiveKind kind = ObjectiveKind::state) {
    OptimizationProblem p;
    p.objective.kind = kind;
    p.constraints = constraints;
    p.m = 10;
    p.n = n;
    p.eta = 0.05;
    p.f_tg = 0.1;
    return p;
}

PulseSpec single_tone_baseline() { return make_spec(10, 0, 0.2, {2.0}, 0.05, 0.1); }

struct SeriesSet {
    std::vector<double> t;
    std::vector<std::vector<double>> columns;
};

// Populations of `tracked` starting from |g,1> for several propagators.
SeriesSet population_series(const std::vector<std::vector<PropagatorSample>>& runs,
                            const SpaceConfig& cfg, const BasisIndex& tracked) {
    SeriesSet s;
    const int row = flat_index(tracked, cfg);
    const int col = flat_index(Electronic::g, 1, cfg);
    for (const auto& sample : runs.front()) s.t.push_back(sample.t);
    for (const auto& run : runs) {
        std::vector<double> series;
        series.reserve(run.size());
        for (const auto& sample : run) series.push_back(std::norm(sample.U(row, col)));
        s.columns.push_back(std::move(series));
    }
    return s;
}

std::string series_csv(const SeriesSet& s, const std::vector<std::string>& names,
                       double t_min = -1.0) {
    std::vector<std::string> header{"t"};
    header.insert(header.end(), names.begin(), names.end());
    CsvBuilder csv(header);
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        if (s.t[i] < t_min) continue;
        std::vector<double> row{s.t[i]};
        for (const auto& col : s.columns) row.push_back(col[i]);
        csv.row(row);
    }
    return csv.text;
}

std::vector<PropagatorSample> target_samples(double f_tg, const SpaceConfig& cfg,
                                             const std::vector<double>& grid) {
    std::vector<PropagatorSample> out;
    out.reserve(grid.size());
    for (double t : grid) out.push_back({t, target_propagator(f_tg, cfg, t)});
    return out;
}

int cmd_reproduce(const std::string& tag, const std::string& out_dir, int grid) {
    const SpaceConfig cfg = default_space_for(1);
    const double T_cycle = 4.0 * std::acos(-1.0) / 0.1;

    OutputDir out(out_dir, "reproduce", Json{{"tag", tag}, {"grid", grid}});
    if (tag == "fig1" || tag == "fig3" || tag == "fig4") {
        const bool seven = tag == "fig4";
        const OptimizationProblem problem =
            canonical_problem(5, seven ? ConstraintChoice::seven : ConstraintChoice::five);
        const OptimizationResult res = solve(problem);
        if (!res.feasible) return 2;
        const PulseSpec poly = spec_from_result(problem, res);
        const PulseSpec mono = monochromatic_reference(0.1, 0.05, 10);

        const double t_end = tag == "fig3" ? 8.2 * kPeriod : T_cycle;
        std::vector<double> time_grid = uniform_grid(t_end, tag == "fig3" ? 8 * grid : grid);
        const auto mono_run = propagate_exact(mono, cfg, time_grid);
        const auto tg_run = target_samples(0.1, cfg, time_grid);
        const auto poly_run = propagate_exact(poly, cfg, time_grid);
        const std::vector<std::string> names{"mono", "target", "poly"};

        const double t_min = tag == "fig3" ? 7.8 * kPeriod : -1.0;
        out.write(tag + "_pg1.csv",
                  series_csv(population_series({mono_run, tg_run, poly_run}, cfg,
                                               BasisIndex{Electronic::g, 1}),
                             names, t_min),
                  "population of |g,1> from initial |g,1>");
        if (tag != "fig3")
            out.write(tag + "_pe1.csv",
                      series_csv(population_series({mono_run, tg_run, poly_run}, cfg,
                                                   BasisIndex{Electronic::e, 1}),
                                 names, t_min),
                      "population of |e,1> from initial |g,1>");
        out.write_json(tag + "_pulse.json", spec_to_json(poly), "optimized pulse");
    } else if (tag == "fig2" || tag == "fig6") {
        std::vector<int> ns{3, 4, 5, 6, 7, 8, 9};
        CycleOptions copts;
        copts.grid_per_period = grid;
        const auto state_rep = improvement_sweep(canonical_problem(5), ns, copts);
        if (tag == "fig2") {
            CsvBuilder csv({"n", "R_theory", "R_cycle"});
            for (const auto& rep : state_rep)
                csv.row({static_cast<double>(rep.n), rep.R_theory, rep.R_cycle});
            out.write("fig2_improvement.csv", csv.text, "theoretical vs one-cycle improvement");
        } else {
            const auto gate_rep = improvement_sweep(
                canonical_problem(5, ConstraintChoice::five, ObjectiveKind::gate_truncated), ns, copts);
            CsvBuilder csv({"n", "R_state", "R_gate_truncated"});
            for (std::size_t i = 0; i < state_rep.size(); ++i)
                csv.row({static_cast<double>(state_rep[i].n), state_rep[i].R_cycle,
                         gate_rep[i].R_cycle});
            out.write("fig6.csv", csv.text, "state vs truncated-gate objective, one-cycle R");
        }
    } else if (tag == "fig5") {
        const PulseSpec spec = single_tone_baseline();
        const std::vector<double> time_grid = uniform_grid(2.0 * T_cycle, grid);
        std::vector<std::vector<PropagatorSample>> runs;
        runs.push_back(propagate_exact(spec, cfg, time_grid));
        for (int order = 0; order <= 2; ++order)
            runs.push_back(propagate_effective(assemble(spec, cfg, order).H, time_grid));
        const std::vector<std::string> names{"exact", "order0", "order1", "order2"};
        out.write("fig5_pg1.csv",
                  series_csv(population_series(runs, cfg, BasisIndex{Electronic::g, 1}), names),
                  "P_g1 under the exact and effective Hamiltonians");
        out.write("fig5_pe0.csv",
                  series_csv(population_series(runs, cfg, BasisIndex{Electronic::e, 0}), names),
                  "P_e0 under the exact and effective Hamiltonians");
    } else {
        throw UsageError("unknown figure tag '" + tag + "' (expected fig1..fig6)");
    }
    out.finish();
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Polychromatic red-sideband pulse synthesis and verification"};
    app.require_subcommand(1);

    std::string spec_path, out_dir = "out", initial = "g1", tag;
    std::vector<std::string> sets;
    int grid = 200, d = 2, q_max = 8, n_min = 3, n_max = 9, rand_n = 5;
    double cycles = 1.0;
    std::uint64_t seed = 1;

    auto add_common = [&](CLI::App* cmd, bool needs_spec) {
        if (needs_spec)
            cmd->add_option("--spec", spec_path, "input JSON file")->required();
        else
            cmd->add_option("--spec", spec_path, "input JSON file");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--set", sets, "override key=value (repeatable, dotted paths)");
        cmd->add_option("--grid", grid, "output samples per fundamental period");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "propagate a pulse and export the trace");
    add_common(simulate, true);
    simulate->add_option("--initial", initial, "initial basis state, e.g. g1");
    simulate->add_option("--cycles", cycles, "duration in target cycles");

    CLI::App* evaluate = app.add_subcommand("evaluate", "print all infidelity functionals");
    add_common(evaluate, true);
    evaluate->add_option("--d", d, "truncated-gate subspace size");

    CLI::App* coeffs = app.add_subcommand("coeffs", "print effective-Hamiltonian coefficients");
    add_common(coeffs, true);

    CLI::App* verify = app.add_subcommand("verify-magnus", "closed forms vs quadrature oracle");
    add_common(verify, false);
    verify->add_option("--seed", seed, "random spec seed");
    verify->add_option("--n", rand_n, "sideband count of the random spec");

    CLI::App* optimize = app.add_subcommand("optimize", "solve a constrained pulse optimization");
    add_common(optimize, true);

    CLI::App* sweep = app.add_subcommand("sweep-n", "improvement ratio across sideband counts");
    add_common(sweep, true);
    sweep->add_option("--n-min", n_min, "first sideband count");
    sweep->add_option("--n-max", n_max, "last sideband count");

    CLI::App* timing = app.add_subcommand("timing-scan", "timing-error sensitivity at t=qT");
    add_common(timing, true);
    timing->add_option("--q-max", q_max, "scan q = 1..q_max");

    CLI::App* reproduce = app.add_subcommand("reproduce", "emit the data series behind a figure");
    reproduce->add_option("--tag", tag, "fig1..fig6")->required();
    reproduce->add_option("--out", out_dir, "output directory");
    reproduce->add_option("--grid", grid, "output samples per fundamental period");

    try {
        app.parse(argc, argv);
        if (simulate->parsed()) return cmd_simulate(spec_path, sets, out_dir, initial, cycles, grid);
        if (evaluate->parsed()) return cmd_evaluate(spec_path, sets, out_dir, d, grid);
        if (coeffs->parsed()) return cmd_coeffs(spec_path, sets, out_dir);
        if (verify->parsed()) return cmd_verify_magnus(spec_path, sets, out_dir, seed, rand_n);
        if (optimize->parsed()) return cmd_optimize(spec_path, sets, out_dir);
        if (sweep->parsed()) return cmd_sweep(spec_path, sets, out_dir, n_min, n_max, grid);
        if (timing->parsed()) return cmd_timing(spec_path, sets, out_dir, q_max);
        if (reproduce->parsed()) return cmd_reproduce(tag, out_dir, grid);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const RegimeError& e) {
        std::cerr << "unsupported regime: " << e.what() << "\n";
        return 1;
    } catch (const IntegrationError& e) {
        std::cerr << "integration failure: " << e.what() << "\n";
        return 3;
    } catch (const OracleError& e) {
        std::cerr << "numerical verification failure: " << e.what() << "\n";
        return 3;
    }
}

} // namespace ionpulse
