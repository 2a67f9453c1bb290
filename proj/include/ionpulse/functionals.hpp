#ifndef IONPULSE_FUNCTIONALS_HPP
#define IONPULSE_FUNCTIONALS_HPP

#include "ionpulse/propagate.hpp"

namespace ionpulse {

// Perturbative infidelity measures built from the time-averaged first-order
// fluctuation strengths of the carrier (G1), red-sideband (G2) and
// blue-sideband (G3) drive components, plus the exact one-cycle infidelity
// computed from time-dependent propagation.

struct GIntegrals {
    double g1 = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;
};

GIntegrals g_integrals(const PulseSpec& spec);

// (1/T) int cos(f_tg sqrt(k) t) |g3|^2 dt for the interference term of the
// state infidelity; k >= 1.
double g3cos_integral(const PulseSpec& spec, int k);

// Quadratic-form matrices in the tone amplitudes: value = f^T Q f.
Eigen::MatrixXd g1_matrix(int m, int n, const std::vector<double>& eta);
Eigen::MatrixXd g2_matrix(int m, int n, const std::vector<double>& eta);
Eigen::MatrixXd g3_matrix(int m, int n, const std::vector<double>& eta);
Eigen::MatrixXd g3cos_matrix(int m, int n, const std::vector<double>& eta, int k, double f_tg);

// Perturbative state infidelity for initial |g,k> (plus sign) or |e,k-1>
// (minus sign); |g,0> reduces to the carrier term alone.
double state_infidelity(const PulseSpec& spec, const BasisIndex& initial);

double gate_infidelity_truncated(const PulseSpec& spec, int d);
double gate_infidelity_asymptotic(const PulseSpec& spec);

struct CycleOptions {
    int grid_per_period = 200;
    double rel_tol = 1e-6;
    int max_refinements = 5;
    IntegratorOptions integrator{};
    int buffer = 8;
};

// Time-averaged deviation from the target red-sideband dynamics over one
// full amplitude cycle T_cycle = 4 pi / (f_tg sqrt(k)), from initial |g,k>.
double cycle_infidelity(const PulseSpec& spec, const BasisIndex& initial, double f_tg,
                        const CycleOptions& opts = {});

// Average of 1 - |<i| U^dag(t) U_tg(t) |i>|^2 over precomputed samples.
double cycle_infidelity_between(const std::vector<PropagatorSample>& samples,
                                const SpaceConfig& cfg, const BasisIndex& initial, double f_tg);

// |d P_initial / dt| at t = qT by central differences on the exact trace.
double timing_sensitivity(const PulseSpec& spec, const BasisIndex& initial, int q,
                          const CycleOptions& opts = {});

} // namespace ionpulse

#endif
