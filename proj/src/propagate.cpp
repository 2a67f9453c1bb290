#include "ionpulse/propagate.hpp"

#include <cmath>

namespace ionpulse {

namespace {

const Complex kI(0.0, 1.0);

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 5th-minus-4th order error weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

double unitarity_defect(const Matrix& U) {
    const int dim = static_cast<int>(U.rows());
    return (U.adjoint() * U - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

} // namespace

std::vector<double> uniform_grid(double t_end, int points_per_period) {
    if (points_per_period <= 0) throw ConfigError("grid density must be positive");
    const int total = std::max(2, static_cast<int>(std::ceil(t_end / kPeriod * points_per_period)) + 1);
    std::vector<double> grid(static_cast<std::size_t>(total));
    for (int i = 0; i < total; ++i) grid[static_cast<std::size_t>(i)] = t_end * i / (total - 1);
    return grid;
}

SpaceConfig default_space_for(int k, int buffer) {
    SpaceConfig cfg;
    cfg.d = k + 3 + buffer;
    cfg.buffer = buffer;
    cfg.validate();
    return cfg;
}

std::vector<PropagatorSample> propagate_exact(const PulseSpec& spec, const SpaceConfig& cfg,
                                              const std::vector<double>& t_grid,
                                              const IntegratorOptions& opts) {
    if (t_grid.empty() || t_grid.front() != 0.0)
        throw ConfigError("propagate_exact: time grid must start at 0");
    return propagate_exact_segment(spec, cfg, t_grid, opts);
}

std::vector<PropagatorSample> propagate_exact_segment(const PulseSpec& spec,
                                                      const SpaceConfig& cfg,
                                                      const std::vector<double>& t_grid,
                                                      const IntegratorOptions& opts) {
    spec.validate();
    cfg.validate();
    if (t_grid.empty() || t_grid.front() < 0.0)
        throw ConfigError("propagate: time grid must start at a non-negative time");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] <= t_grid[i - 1]) throw ConfigError("propagate: grid must ascend");

    const Operators ops = build_operators(cfg);
    const int dim = cfg.dim();
    auto rhs = [&](double t, const Matrix& U) -> Matrix { return -kI * (hamiltonian(spec, t, ops) * U); };

    const double h_cap = kPeriod / (40.0 * (2 * spec.m + spec.n));
    const double h_min = 1e-14 * std::max(t_grid.back(), kPeriod);

    std::vector<PropagatorSample> out;
    out.reserve(t_grid.size());
    Matrix U = Matrix::Identity(dim, dim);
    out.push_back({t_grid.front(), U});

    double t = t_grid.front();
    double h = h_cap;
    Matrix k1 = rhs(t, U); // FSAL
    for (std::size_t gi = 1; gi < t_grid.size(); ++gi) {
        const double t_target = t_grid[gi];
        while (t < t_target) {
            const double gap = t_target - t;
            if (gap <= h_min) { // sub-epsilon sliver left by rounding
                t = t_target;
                break;
            }
            if (h < h_min) throw IntegrationError("step size underflow", t);
            const double hs = std::min({h, h_cap, gap});
            const Matrix k2 = rhs(t + c2 * hs, U + hs * (a21 * k1));
            const Matrix k3 = rhs(t + c3 * hs, U + hs * (a31 * k1 + a32 * k2));
            const Matrix k4 = rhs(t + c4 * hs, U + hs * (a41 * k1 + a42 * k2 + a43 * k3));
            const Matrix k5 =
                rhs(t + c5 * hs, U + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const Matrix k6 =
                rhs(t + hs, U + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const Matrix U5 = U + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const Matrix k7 = rhs(t + hs, U5);
            const Matrix err_mat =
                hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double scale = opts.atol + opts.rtol * std::max(1.0, U.cwiseAbs().maxCoeff());
            const double err = err_mat.cwiseAbs().maxCoeff() / scale;
            if (err <= 1.0) {
                t += hs;
                U = U5;
                k1 = k7;
            }
            const double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h = hs * std::min(5.0, std::max(0.2, factor));
        }
        const double defect = unitarity_defect(U);
        if (defect > opts.defect_tol)
            throw IntegrationError("unitarity defect " + std::to_string(defect) + " exceeded", t);
        out.push_back({t_target, U});
    }
    return out;
}

Matrix target_propagator(double f_tg, const SpaceConfig& cfg, double t) {
    cfg.validate();
    if (t < 0.0) throw ConfigError("target_propagator: t must be non-negative");
    const int dim = cfg.dim();
    Matrix U = Matrix::Zero(dim, dim);
    U(flat_index(Electronic::g, 0, cfg), flat_index(Electronic::g, 0, cfg)) = 1.0;
    U(flat_index(Electronic::e, cfg.d - 1, cfg), flat_index(Electronic::e, cfg.d - 1, cfg)) = 1.0;
    for (int k = 1; k < cfg.d; ++k) {
        const double theta = 0.5 * f_tg * std::sqrt(static_cast<double>(k)) * t;
        const int ig = flat_index(Electronic::g, k, cfg);
        const int ie = flat_index(Electronic::e, k - 1, cfg);
        U(ig, ig) = std::cos(theta);
        U(ie, ie) = std::cos(theta);
        U(ie, ig) = std::sin(theta);
        U(ig, ie) = -std::sin(theta);
    }
    return U;
}

std::vector<PropagatorSample> propagate_effective(const Matrix& H_eff,
                                                  const std::vector<double>& t_grid) {
    if (H_eff.rows() != H_eff.cols()) throw ShapeError("propagate_effective: H_eff must be square");
    const double herm = (H_eff - H_eff.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10)
        throw ConfigError("propagate_effective: H_eff is not Hermitian (defect " +
                          std::to_string(herm) + ")");
    const Matrix H = 0.5 * (H_eff + H_eff.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const Matrix& V = es.eigenvectors();

    std::vector<PropagatorSample> out;
    out.reserve(t_grid.size());
    Eigen::VectorXcd phases(ev.size());
    for (double t : t_grid) {
        for (int i = 0; i < ev.size(); ++i) phases(i) = std::exp(-kI * ev(i) * t);
        out.push_back({t, V * phases.asDiagonal() * V.adjoint()});
    }
    return out;
}

SimulationTrace trace_from_samples(const std::vector<PropagatorSample>& samples,
                                   const SpaceConfig& cfg, const BasisIndex& initial) {
    SimulationTrace trace;
    const int dim = cfg.dim();
    const int col0 = flat_index(initial, cfg);
    const int guard_start = cfg.d - cfg.buffer;
    trace.times.reserve(samples.size());
    trace.populations.resize(static_cast<Eigen::Index>(samples.size()), dim);
    trace.defect_series.reserve(samples.size());
    trace.leakage_series.reserve(samples.size());
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const Matrix& U = samples[s].U;
        if (U.rows() != dim) throw ShapeError("trace_from_samples: sample dimension mismatch");
        trace.times.push_back(samples[s].t);
        double leak = 0.0;
        for (int idx = 0; idx < dim; ++idx) {
            const double pop = std::norm(U(idx, col0));
            trace.populations(static_cast<Eigen::Index>(s), idx) = pop;
            if (idx / 2 >= guard_start) leak = std::max(leak, pop);
        }
        trace.defect_series.push_back(unitarity_defect(U));
        trace.leakage_series.push_back(leak);
        trace.unitarity_defect = std::max(trace.unitarity_defect, trace.defect_series.back());
        trace.leakage = std::max(trace.leakage, leak);
    }
    trace.leakage_flagged = trace.leakage >= 1e-6;
    return trace;
}

} // namespace ionpulse
