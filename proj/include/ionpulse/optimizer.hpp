#ifndef IONPULSE_OPTIMIZER_HPP
#define IONPULSE_OPTIMIZER_HPP

#include <optional>
#include <string>
#include <utility>

#include "ionpulse/effective.hpp"
#include "ionpulse/functionals.hpp"

namespace ionpulse {

enum class ObjectiveKind { state, gate_truncated, gate_asymptotic };

struct ObjectiveSpec {
    ObjectiveKind kind = ObjectiveKind::state;
    BasisIndex initial{Electronic::g, 1}; // state objective
    bool average_pair = false;            // average |g,k> with |e,k-1>
    int d = 2;                            // truncated-gate subspace size
};

enum class ConstraintChoice { five, seven };

struct DeltaScan {
    double lo = 0.0;
    double hi = 0.5;
    double step = 0.01;
    int refine_iters = 20;
};

struct OptimizationProblem {
    ObjectiveSpec objective;
    ConstraintChoice constraints = ConstraintChoice::five;
    int m = 10;
    int n = 5;
    double eta = 0.05;
    double f_tg = 0.1;
    DeltaScan scan;

    void validate() const;
    std::vector<double> eta_vector() const;
};

struct OptimizationResult {
    double delta_opt = 0.0;
    Eigen::VectorXd f_opt;
    double objective_value = 0.0;
    Eigen::VectorXd residuals;
    double residual_norm = 0.0; // max-norm
    bool feasible = false;
    int iterations = 0;
    double kkt_norm = 0.0;
    std::vector<std::pair<double, double>> delta_profile;
};

// Objective as a quadratic form in the tone amplitudes.
Eigen::MatrixXd objective_matrix(const OptimizationProblem& problem);

// Equality-constrained local solve at fixed detuning: augmented-Lagrangian
// outer loop with damped-Newton inner iterations, then feasibility-preserving
// reduced-Newton polish to the KKT tolerances (residuals < 1e-9,
// projected gradient < 1e-8).
OptimizationResult solve_at_delta(const OptimizationProblem& problem, double delta,
                                  const std::optional<Eigen::VectorXd>& warm = std::nullopt);

// Coarse scan over the detuning grid, feasibility-aware ranking (ties to the
// smaller delta), then golden-section refinement around the best point.
OptimizationResult solve(const OptimizationProblem& problem);

PulseSpec spec_from_result(const OptimizationProblem& problem, const OptimizationResult& result);

struct ImprovementReport {
    int n = 0;
    double I_mono = 0.0;
    double I_poly = 0.0;
    double R_cycle = 0.0;
    double R_theory = 0.0;
    double delta_opt = 0.0;
    bool feasible = false;
    std::string error; // non-empty when this n failed
};

std::vector<ImprovementReport> improvement_sweep(const OptimizationProblem& base,
                                                 const std::vector<int>& n_values,
                                                 const CycleOptions& cycle_opts = {});

} // namespace ionpulse

#endif
