#ifndef IONPULSE_PROPAGATE_HPP
#define IONPULSE_PROPAGATE_HPP

#include <vector>

#include "ionpulse/drive.hpp"

namespace ionpulse {

struct PropagatorSample {
    double t = 0.0;
    Matrix U;
};

struct IntegratorOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double defect_tol = 1e-8; // max-norm bound on U^dag U - 1 at samples
};

// Exact time-ordered propagation of i dU/dt = H(t) U with an embedded
// Dormand-Prince 5(4) pair. The step size is additionally capped at
// T / (40 (2m+n)) so the fastest drive component is always resolved.
std::vector<PropagatorSample> propagate_exact(const PulseSpec& spec, const SpaceConfig& cfg,
                                              const std::vector<double>& t_grid,
                                              const IntegratorOptions& opts = {});

// Same integrator started at t_grid.front() with U = 1 there; used for
// composing propagators across split points.
std::vector<PropagatorSample> propagate_exact_segment(const PulseSpec& spec,
                                                      const SpaceConfig& cfg,
                                                      const std::vector<double>& t_grid,
                                                      const IntegratorOptions& opts = {});

// Analytic propagator of the ideal red-sideband generator
// (i f_tg / 2)(sigma_+ a - sigma_- a^dag): |g,0> is invariant, each pair
// {|g,k>, |e,k-1>} rotates by theta_k = f_tg sqrt(k) t / 2, and the unpaired
// top state |e,d-1> is left invariant.
Matrix target_propagator(double f_tg, const SpaceConfig& cfg, double t);

// exp(-i H_eff t) through a Hermitian eigendecomposition.
std::vector<PropagatorSample> propagate_effective(const Matrix& H_eff,
                                                  const std::vector<double>& t_grid);

struct SimulationTrace {
    std::vector<double> times;
    Eigen::MatrixXd populations;        // rows = times, cols = flat basis index
    std::vector<double> defect_series;  // ||U^dag U - 1||_max per sample
    std::vector<double> leakage_series; // guard-band population per sample
    double unitarity_defect = 0.0;      // max over the grid
    double leakage = 0.0;               // max over the grid
    bool leakage_flagged = false;       // leakage >= 1e-6
};

SimulationTrace trace_from_samples(const std::vector<PropagatorSample>& samples,
                                   const SpaceConfig& cfg, const BasisIndex& initial);

// Uniform grid with `points_per_period` samples per fundamental period,
// starting at 0 and ending exactly at t_end.
std::vector<double> uniform_grid(double t_end, int points_per_period);

// Space large enough for dynamics started in |g,k> or |e,k>: the physically
// reachable levels k..k+2 plus `buffer` guard levels on top.
SpaceConfig default_space_for(int k, int buffer = 8);

} // namespace ionpulse

#endif
