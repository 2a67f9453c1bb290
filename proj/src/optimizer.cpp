#include "ionpulse/optimizer.hpp"

#include <cmath>
#include <limits>

#include "ionpulse/parallel.hpp"

namespace ionpulse {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kKktTol = 1e-8;

struct Score {
    bool feasible = false;
    double value = std::numeric_limits<double>::infinity();
    double delta = 0.0;

    bool operator<(const Score& other) const {
        if (feasible != other.feasible) return feasible;
        if (value != other.value) return value < other.value;
        return delta < other.delta;
    }
};

Score score_of(const OptimizationResult& res) {
    return Score{res.feasible,
                 res.feasible ? res.objective_value : res.residuals.squaredNorm(), res.delta_opt};
}

struct LocalSolver {
    const OptimizationProblem& problem;
    Eigen::MatrixXd Q;
    ConstraintSystem constraints;
    double delta;
    int nf;
    int rows;
    int iterations = 0;

    LocalSolver(const OptimizationProblem& prob, const Eigen::MatrixXd& Qmat, double delta_in)
        : problem(prob),
          Q(Qmat),
          constraints(prob.m, prob.n, prob.eta_vector(), prob.f_tg,
                      prob.constraints == ConstraintChoice::seven),
          delta(delta_in),
          nf(2 * prob.n + 1),
          rows(constraints.count()) {}

    double objective(const Eigen::VectorXd& f) const { return f.dot(Q * f); }

    // Damped Newton minimization of the augmented Lagrangian.
    void inner_minimize(Eigen::VectorXd& f, const Eigen::VectorXd& lambda, double mu,
                        double grad_tol, int max_iter) {
        Eigen::VectorXd r(rows);
        Eigen::MatrixXd J(rows, nf);
        std::vector<Eigen::MatrixXd> H;
        for (int iter = 0; iter < max_iter; ++iter) {
            constraints.eval(delta, f, r, &J, &H);
            const Eigen::VectorXd weight = lambda + mu * r;
            Eigen::VectorXd grad = 2.0 * Q * f + J.transpose() * weight;
            if (grad.cwiseAbs().maxCoeff() < grad_tol) return;
            Eigen::MatrixXd hess = 2.0 * Q + mu * J.transpose() * J;
            for (int i = 0; i < rows; ++i) hess += weight(i) * H[static_cast<std::size_t>(i)];

            Eigen::VectorXd step;
            double shift = 0.0;
            for (;;) {
                Eigen::LDLT<Eigen::MatrixXd> ldlt(hess + shift * Eigen::MatrixXd::Identity(nf, nf));
                step = ldlt.solve(-grad);
                if (ldlt.info() == Eigen::Success && step.dot(grad) < 0.0) break;
                shift = shift == 0.0 ? 1e-8 * std::max(1.0, hess.cwiseAbs().maxCoeff()) : 10.0 * shift;
                if (shift > 1e12) { step = -grad; break; }
            }

            const double phi0 = merit(f, lambda, mu);
            const double slope = grad.dot(step);
            double alpha = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 40; ++ls) {
                const Eigen::VectorXd trial = f + alpha * step;
                if (merit(trial, lambda, mu) <= phi0 + 1e-4 * alpha * slope) {
                    f = trial;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            ++iterations;
            if (!accepted) return; // stalled; let the outer loop react
        }
    }

    double merit(const Eigen::VectorXd& f, const Eigen::VectorXd& lambda, double mu) {
        Eigen::VectorXd r(rows);
        constraints.eval(delta, f, r);
        return objective(f) + lambda.dot(r) + 0.5 * mu * r.squaredNorm();
    }

    // Newton restoration onto the constraint manifold (least-norm steps).
    bool restore(Eigen::VectorXd& f, double tol) {
        Eigen::VectorXd r(rows);
        Eigen::MatrixXd J(rows, nf);
        for (int iter = 0; iter < 40; ++iter) {
            constraints.eval(delta, f, r, &J);
            if (r.cwiseAbs().maxCoeff() <= tol) return true;
            const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(-r);
            if (!step.allFinite() || step.cwiseAbs().maxCoeff() > 1e3) return false;
            f += step;
            ++iterations;
        }
        constraints.eval(delta, f, r);
        return r.cwiseAbs().maxCoeff() <= tol;
    }

    OptimizationResult run(const Eigen::VectorXd& warm) {
        Eigen::VectorXd f = warm;
        Eigen::VectorXd lambda = Eigen::VectorXd::Zero(rows);
        double mu = 10.0;
        Eigen::VectorXd r(rows);
        constraints.eval(delta, f, r);
        double feas = r.cwiseAbs().maxCoeff();

        for (int outer = 0; outer < 40 && feas > 1e-7; ++outer) {
            const double grad_tol = std::max(1e-10, 1e-3 * feas);
            inner_minimize(f, lambda, mu, grad_tol, 80);
            constraints.eval(delta, f, r);
            const double feas_new = r.cwiseAbs().maxCoeff();
            lambda += mu * r;
            if (feas_new > 0.25 * feas) mu = std::min(mu * 10.0, 1e12);
            if (std::abs(feas_new - feas) < 1e-16 && mu >= 1e12) { feas = feas_new; break; }
            feas = feas_new;
        }

        OptimizationResult res;
        res.delta_opt = delta;
        double kkt = std::numeric_limits<double>::infinity();

        // Feasibility-preserving descent to the KKT point.
        if (feas <= 1e-4 && restore(f, 1e-12)) {
            Eigen::MatrixXd J(rows, nf);
            std::vector<Eigen::MatrixXd> H;
            for (int iter = 0; iter < 100; ++iter) {
                constraints.eval(delta, f, r, &J, &H);
                const Eigen::VectorXd g = 2.0 * Q * f;
                const Eigen::VectorXd lam =
                    J.transpose().completeOrthogonalDecomposition().solve(-g);
                kkt = (g + J.transpose() * lam).cwiseAbs().maxCoeff();
                if (kkt <= kKktTol) break;

                // Null-space basis of J.
                Eigen::FullPivHouseholderQR<Eigen::MatrixXd> qr(J.transpose());
                const int rank = static_cast<int>(qr.rank());
                if (rank >= nf) break; // fully pinned, nothing to descend along
                const Eigen::MatrixXd Qfull = qr.matrixQ();
                const Eigen::MatrixXd Z = Qfull.rightCols(nf - rank);
                Eigen::MatrixXd L = 2.0 * Q;
                for (int i = 0; i < rows; ++i) L += lam(i) * H[static_cast<std::size_t>(i)];
                Eigen::MatrixXd Hz = Z.transpose() * L * Z;
                const Eigen::VectorXd gz = Z.transpose() * g;
                Eigen::VectorXd dz;
                double shift = 0.0;
                for (;;) {
                    Eigen::LDLT<Eigen::MatrixXd> ldlt(
                        Hz + shift * Eigen::MatrixXd::Identity(Hz.rows(), Hz.cols()));
                    dz = ldlt.solve(-gz);
                    if (ldlt.info() == Eigen::Success && dz.dot(gz) < 0.0) break;
                    shift = shift == 0.0 ? 1e-10 : 10.0 * shift;
                    if (shift > 1e8) { dz = -gz; break; }
                }

                const double obj0 = objective(f);
                double alpha = 1.0;
                bool moved = false;
                for (int ls = 0; ls < 30; ++ls) {
                    Eigen::VectorXd trial = f + alpha * (Z * dz);
                    if (restore(trial, 1e-12) &&
                        objective(trial) <= obj0 + 1e-4 * alpha * gz.dot(dz)) {
                        f = trial;
                        moved = true;
                        break;
                    }
                    alpha *= 0.5;
                }
                ++iterations;
                if (!moved) break;
            }
        }

        constraints.eval(delta, f, r);
        res.f_opt = f;
        res.objective_value = objective(f);
        res.residuals = r;
        res.residual_norm = r.cwiseAbs().maxCoeff();
        res.feasible = res.residual_norm < kFeasTol && kkt <= kKktTol;
        res.iterations = iterations;
        res.kkt_norm = kkt;
        return res;
    }
};

Eigen::VectorXd default_warm_start(const OptimizationProblem& problem) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(2 * problem.n + 1);
    f(problem.n) = problem.f_tg / problem.eta;
    return f;
}

} // namespace

void OptimizationProblem::validate() const {
    if (m <= 0 || n < 0) throw ConfigError("OptimizationProblem: need m > 0, n >= 0");
    if (m <= n) throw RegimeError("OptimizationProblem: requires m > n");
    if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("OptimizationProblem: eta must be in (0,1)");
    if (!(f_tg >= 0.0)) throw ConfigError("OptimizationProblem: f_tg must be non-negative");
    if (!(scan.lo < scan.hi) || !(scan.step > 0.0))
        throw ConfigError("OptimizationProblem: need lo < hi and step > 0");
    if (objective.kind == ObjectiveKind::gate_truncated && objective.d < 1)
        throw ConfigError("OptimizationProblem: truncated-gate d must be >= 1");
}

std::vector<double> OptimizationProblem::eta_vector() const {
    return std::vector<double>(static_cast<std::size_t>(2 * n + 1), eta);
}

Eigen::MatrixXd objective_matrix(const OptimizationProblem& problem) {
    problem.validate();
    const std::vector<double> eta = problem.eta_vector();
    const Eigen::MatrixXd Q1 = g1_matrix(problem.m, problem.n, eta);
    const Eigen::MatrixXd Q2 = g2_matrix(problem.m, problem.n, eta);
    const Eigen::MatrixXd Q3 = g3_matrix(problem.m, problem.n, eta);
    switch (problem.objective.kind) {
        case ObjectiveKind::state: {
            const BasisIndex& initial = problem.objective.initial;
            if (initial.electronic == Electronic::g && initial.k == 0) return Q1;
            const int k = initial.electronic == Electronic::g ? initial.k : initial.k + 1;
            Eigen::MatrixXd Q = Q1 + k * (Q2 + Q3);
            if (!problem.objective.average_pair) {
                const double sign = initial.electronic == Electronic::g ? 1.0 : -1.0;
                Q += sign * g3cos_matrix(problem.m, problem.n, eta, k, problem.f_tg);
            }
            return Q;
        }
        case ObjectiveKind::gate_truncated: {
            const double d = problem.objective.d;
            return 2.0 * d * Q1 + d * d * (Q2 + Q3);
        }
        case ObjectiveKind::gate_asymptotic:
        default:
            return Q2 + Q3;
    }
}

OptimizationResult solve_at_delta(const OptimizationProblem& problem, double delta,
                                  const std::optional<Eigen::VectorXd>& warm) {
    problem.validate();
    LocalSolver solver(problem, objective_matrix(problem), delta);
    return solver.run(warm ? *warm : default_warm_start(problem));
}

OptimizationResult solve(const OptimizationProblem& problem) {
    problem.validate();
    const Eigen::MatrixXd Q = objective_matrix(problem);
    const DeltaScan& scan = problem.scan;

    const int grid_count = static_cast<int>(std::floor((scan.hi - scan.lo) / scan.step + 1e-12)) + 1;
    std::vector<OptimizationResult> grid_results(static_cast<std::size_t>(grid_count));
    parallel::for_index(grid_count, [&](int i) {
        const double delta = scan.lo + scan.step * i;
        LocalSolver solver(problem, Q, delta);
        grid_results[static_cast<std::size_t>(i)] = solver.run(default_warm_start(problem));
    });

    std::vector<std::pair<double, double>> profile;
    profile.reserve(static_cast<std::size_t>(grid_count + scan.refine_iters));
    int best = 0;
    for (int i = 0; i < grid_count; ++i) {
        const OptimizationResult& res = grid_results[static_cast<std::size_t>(i)];
        profile.emplace_back(res.delta_opt, res.objective_value);
        if (score_of(res) < score_of(grid_results[static_cast<std::size_t>(best)])) best = i;
    }
    OptimizationResult best_res = grid_results[static_cast<std::size_t>(best)];
    Score best_score = score_of(best_res);

    // Golden-section refinement around the best grid point.
    double a = std::max(scan.lo, best_res.delta_opt - scan.step);
    double b = std::min(scan.hi, best_res.delta_opt + scan.step);
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    auto probe = [&](double delta) -> Score {
        LocalSolver solver(problem, Q, delta);
        OptimizationResult res = solver.run(default_warm_start(problem));
        profile.emplace_back(res.delta_opt, res.objective_value);
        const Score s = score_of(res);
        if (s < best_score) {
            best_score = s;
            best_res = std::move(res);
        }
        return s;
    };
    if (scan.refine_iters >= 2) {
        double x1 = b - golden * (b - a);
        double x2 = a + golden * (b - a);
        Score s1 = probe(x1);
        Score s2 = probe(x2);
        for (int iter = 2; iter < scan.refine_iters; ++iter) {
            if (s1 < s2) {
                b = x2;
                x2 = x1;
                s2 = s1;
                x1 = b - golden * (b - a);
                s1 = probe(x1);
            } else {
                a = x1;
                x1 = x2;
                s1 = s2;
                x2 = a + golden * (b - a);
                s2 = probe(x2);
            }
        }
    }

    best_res.delta_profile = std::move(profile);
    return best_res;
}

PulseSpec spec_from_result(const OptimizationProblem& problem, const OptimizationResult& result) {
    PulseSpec spec;
    spec.m = problem.m;
    spec.n = problem.n;
    spec.delta = result.delta_opt;
    spec.f.assign(result.f_opt.data(), result.f_opt.data() + result.f_opt.size());
    spec.eta = problem.eta_vector();
    spec.f_tg = problem.f_tg;
    spec.validate();
    return spec;
}

namespace {

double perturbative_objective(const OptimizationProblem& problem, const PulseSpec& spec) {
    switch (problem.objective.kind) {
        case ObjectiveKind::state: {
            if (problem.objective.average_pair) {
                const BasisIndex& ini = problem.objective.initial;
                const int k = ini.electronic == Electronic::g ? ini.k : ini.k + 1;
                const GIntegrals g = g_integrals(spec);
                return g.g1 + k * (g.g2 + g.g3);
            }
            return state_infidelity(spec, problem.objective.initial);
        }
        case ObjectiveKind::gate_truncated:
            return gate_infidelity_truncated(spec, problem.objective.d);
        case ObjectiveKind::gate_asymptotic:
        default:
            return gate_infidelity_asymptotic(spec);
    }
}

} // namespace

std::vector<ImprovementReport> improvement_sweep(const OptimizationProblem& base,
                                                 const std::vector<int>& n_values,
                                                 const CycleOptions& cycle_opts) {
    const PulseSpec mono = monochromatic_reference(base.f_tg, base.eta, base.m);
    const BasisIndex tracked{Electronic::g, 1};
    const double I_mono = cycle_infidelity(mono, tracked, base.f_tg, cycle_opts);

    std::vector<ImprovementReport> reports;
    std::optional<OptimizationResult> previous;
    int previous_n = 0;
    for (int n : n_values) {
        OptimizationProblem problem = base;
        problem.n = n;
        ImprovementReport rep;
        rep.n = n;
        try {
            const double theory_mono = perturbative_objective(problem, mono);
            OptimizationResult res = solve(problem);
            if (previous && previous->feasible && n >= previous_n) {
                // A lower-n solution padded with zero tones stays feasible, so
                // chaining it guarantees the perturbative optimum cannot get
                // worse as tones are added.
                Eigen::VectorXd padded = Eigen::VectorXd::Zero(2 * n + 1);
                padded.segment(n - previous_n, 2 * previous_n + 1) = previous->f_opt;
                OptimizationResult chained =
                    solve_at_delta(problem, previous->delta_opt, padded);
                if (score_of(chained) < score_of(res)) {
                    chained.delta_profile = std::move(res.delta_profile);
                    res = std::move(chained);
                }
            }
            const PulseSpec spec = spec_from_result(problem, res);
            rep.delta_opt = res.delta_opt;
            rep.feasible = res.feasible;
            rep.I_mono = I_mono;
            rep.I_poly = cycle_infidelity(spec, tracked, base.f_tg, cycle_opts);
            rep.R_cycle = I_mono / rep.I_poly;
            rep.R_theory = theory_mono / perturbative_objective(problem, spec);
            previous = res;
            previous_n = n;
        } catch (const std::exception& e) {
            rep.error = e.what();
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

} // namespace ionpulse
