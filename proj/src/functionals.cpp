#include "ionpulse/functionals.hpp"

#include <cmath>

namespace ionpulse {

namespace {

const Complex kI(0.0, 1.0);
const double kPi = std::acos(-1.0);

Complex cos_bracket(int m, int j, int q, double nu) {
    auto piece = [](double freq) -> Complex {
        // (e^{2 pi i x} - 1)/x = 2 i e^{i pi x} sin(pi x)/x; series below the
        // rounding knee keeps the j=q and f_tg -> 0 entries finite.
        if (std::abs(freq) < 1e-6) {
            const double px = kPi * freq;
            return Complex(0.0, 2.0 * kPi) * std::polar(1.0, px) * (1.0 - px * px / 6.0);
        }
        return (std::exp(2.0 * kPi * kI * freq) - 1.0) / freq;
    };
    return piece(2 * m - j + nu) -
           (std::exp(-2.0 * kPi * kI * (2 * m - q - nu)) - 1.0) / (2 * m - q - nu) - piece(nu) -
           piece(q - j + nu);
}

// Entry of the cos-weighted blue-sideband kernel; the printed sum plus its
// conjugate makes the quadratic form real.
Complex g3cos_entry(int m, int j, int q, double eta_j, double eta_q, double nu) {
    return kI * eta_j * eta_q / (16.0 * kPi * (2 * m - j) * (2 * m - q)) *
           cos_bracket(m, j, q, nu);
}

int pair_quantum(const BasisIndex& initial) {
    return initial.electronic == Electronic::g ? initial.k : initial.k + 1;
}

} // namespace

GIntegrals g_integrals(const PulseSpec& spec) {
    spec.validate();
    GIntegrals g;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (int j = -spec.n; j <= spec.n; ++j) {
        const double fj = spec.f_at(j);
        const double ej = spec.eta_at(j);
        g.g1 += fj * fj / (4.0 * (spec.m - j) * (spec.m - j));
        s1 += fj / (2.0 * (spec.m - j));
        if (j != 0) {
            g.g2 += ej * ej * fj * fj / (4.0 * j * j);
            s2 += ej * fj / (2.0 * j);
        }
        g.g3 += ej * ej * fj * fj / (4.0 * (2 * spec.m - j) * (2 * spec.m - j));
        s3 += ej * fj / (2.0 * (2 * spec.m - j));
    }
    g.g1 += s1 * s1;
    g.g2 += s2 * s2;
    g.g3 += s3 * s3;
    return g;
}

double g3cos_integral(const PulseSpec& spec, int k) {
    spec.validate();
    if (k < 1) throw ConfigError("g3cos_integral: k must be >= 1");
    const double nu = spec.f_tg * std::sqrt(static_cast<double>(k));
    Complex sum(0.0);
    for (int j = -spec.n; j <= spec.n; ++j)
        for (int q = -spec.n; q <= spec.n; ++q)
            sum += g3cos_entry(spec.m, j, q, spec.eta_at(j), spec.eta_at(q), nu) * spec.f_at(j) *
                   spec.f_at(q);
    return 2.0 * sum.real();
}

Eigen::MatrixXd g1_matrix(int m, int n, const std::vector<double>& eta) {
    (void)eta;
    const int nf = 2 * n + 1;
    Eigen::MatrixXd Q(nf, nf);
    for (int j = -n; j <= n; ++j)
        for (int q = -n; q <= n; ++q) {
            double v = 1.0 / (4.0 * (m - j) * (m - q));
            if (j == q) v += 1.0 / (4.0 * (m - j) * (m - j));
            Q(j + n, q + n) = v;
        }
    return Q;
}

Eigen::MatrixXd g2_matrix(int m, int n, const std::vector<double>& eta) {
    (void)m;
    const int nf = 2 * n + 1;
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(nf, nf);
    for (int j = -n; j <= n; ++j)
        for (int q = -n; q <= n; ++q) {
            if (j == 0 || q == 0) continue;
            double v = eta[j + n] * eta[q + n] / (4.0 * j * q);
            if (j == q) v += eta[j + n] * eta[j + n] / (4.0 * j * j);
            Q(j + n, q + n) = v;
        }
    return Q;
}

Eigen::MatrixXd g3_matrix(int m, int n, const std::vector<double>& eta) {
    const int nf = 2 * n + 1;
    Eigen::MatrixXd Q(nf, nf);
    for (int j = -n; j <= n; ++j)
        for (int q = -n; q <= n; ++q) {
            double v = eta[j + n] * eta[q + n] / (4.0 * (2 * m - j) * (2 * m - q));
            if (j == q) v += eta[j + n] * eta[j + n] / (4.0 * (2 * m - j) * (2 * m - j));
            Q(j + n, q + n) = v;
        }
    return Q;
}

Eigen::MatrixXd g3cos_matrix(int m, int n, const std::vector<double>& eta, int k, double f_tg) {
    const int nf = 2 * n + 1;
    const double nu = f_tg * std::sqrt(static_cast<double>(k));
    Eigen::MatrixXd A(nf, nf);
    for (int j = -n; j <= n; ++j)
        for (int q = -n; q <= n; ++q)
            A(j + n, q + n) = 2.0 * g3cos_entry(m, j, q, eta[j + n], eta[q + n], nu).real();
    return 0.5 * (A + A.transpose());
}

double state_infidelity(const PulseSpec& spec, const BasisIndex& initial) {
    if (initial.electronic == Electronic::g && initial.k == 0) return g_integrals(spec).g1;
    const int k = pair_quantum(initial);
    const GIntegrals g = g_integrals(spec);
    const double sign = initial.electronic == Electronic::g ? 1.0 : -1.0;
    return g.g1 + k * (g.g2 + g.g3) + sign * g3cos_integral(spec, k);
}

double gate_infidelity_truncated(const PulseSpec& spec, int d) {
    if (d < 1) throw ConfigError("gate_infidelity_truncated: d must be >= 1");
    const GIntegrals g = g_integrals(spec);
    return 2.0 * d * g.g1 + static_cast<double>(d) * d * (g.g2 + g.g3);
}

double gate_infidelity_asymptotic(const PulseSpec& spec) {
    const GIntegrals g = g_integrals(spec);
    return g.g2 + g.g3;
}

double cycle_infidelity_between(const std::vector<PropagatorSample>& samples,
                                const SpaceConfig& cfg, const BasisIndex& initial, double f_tg) {
    const int i0 = flat_index(initial, cfg);
    const int count = static_cast<int>(samples.size()) - 1;
    if (count < 2 || count % 2 != 0)
        throw ConfigError("cycle_infidelity_between: need an even number of uniform intervals");
    std::vector<double> integrand(samples.size());
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const Matrix U_tg = target_propagator(f_tg, cfg, samples[s].t);
        const Complex overlap = samples[s].U.col(i0).adjoint() * U_tg.col(i0);
        integrand[s] = 1.0 - std::norm(overlap);
    }
    double sum = 0.0;
    for (int i = 0; i + 2 <= count; i += 2)
        sum += integrand[static_cast<std::size_t>(i)] + 4.0 * integrand[static_cast<std::size_t>(i + 1)] +
               integrand[static_cast<std::size_t>(i + 2)];
    // Simpson average over [0, T]: (h/3) * sum / T with h = T / count.
    return sum / (3.0 * count);
}

namespace {

double cycle_pass(const PulseSpec& spec, const SpaceConfig& cfg, const BasisIndex& initial,
                  double f_tg, double t_cycle, int intervals, const CycleOptions& opts,
                  double* coarse) {
    std::vector<double> grid(static_cast<std::size_t>(intervals) + 1);
    for (int i = 0; i <= intervals; ++i) grid[static_cast<std::size_t>(i)] = t_cycle * i / intervals;
    const auto samples = propagate_exact(spec, cfg, grid, opts.integrator);
    const SimulationTrace trace = trace_from_samples(samples, cfg, initial);
    if (trace.leakage_flagged)
        throw IntegrationError("guard-band leakage " + std::to_string(trace.leakage) + " flagged",
                               t_cycle);
    if (coarse) {
        std::vector<PropagatorSample> half;
        half.reserve(samples.size() / 2 + 1);
        for (std::size_t s = 0; s < samples.size(); s += 2) half.push_back(samples[s]);
        *coarse = cycle_infidelity_between(half, cfg, initial, f_tg);
    }
    return cycle_infidelity_between(samples, cfg, initial, f_tg);
}

} // namespace

double cycle_infidelity(const PulseSpec& spec, const BasisIndex& initial, double f_tg,
                        const CycleOptions& opts) {
    if (initial.electronic != Electronic::g || initial.k < 1)
        throw ConfigError("cycle_infidelity: initial state must be |g,k> with k >= 1");
    const int k = initial.k;
    const double t_cycle = 4.0 * kPi / (f_tg * std::sqrt(static_cast<double>(k)));
    const SpaceConfig cfg = default_space_for(k, opts.buffer);

    int intervals = static_cast<int>(std::ceil(t_cycle / kPeriod * opts.grid_per_period));
    intervals = (intervals + 3) / 4 * 4; // keep both the fine and the half grid Simpson-ready
    for (int pass = 0; pass <= opts.max_refinements; ++pass) {
        double coarse = 0.0;
        const double fine = cycle_pass(spec, cfg, initial, f_tg, t_cycle, intervals, opts, &coarse);
        if (std::abs(fine - coarse) <= opts.rel_tol * std::max(std::abs(fine), 1e-12)) return fine;
        intervals *= 2;
    }
    throw OracleError("cycle_infidelity did not converge under grid refinement");
}

double timing_sensitivity(const PulseSpec& spec, const BasisIndex& initial, int q,
                          const CycleOptions& opts) {
    if (q < 1) throw ConfigError("timing_sensitivity: q must be >= 1");
    const double t0 = q * kPeriod;
    const SpaceConfig cfg = default_space_for(initial.k, opts.buffer);
    const int idx = flat_index(initial, cfg);

    double h = kPeriod / 1024.0;
    double prev = 0.0;
    for (int pass = 0; pass < 8; ++pass) {
        const std::vector<double> grid = {0.0, t0 - h, t0 - 0.5 * h, t0 + 0.5 * h, t0 + h};
        const auto samples = propagate_exact(spec, cfg, grid, opts.integrator);
        auto pop = [&](std::size_t s) { return std::norm(samples[s].U(idx, idx)); };
        const double est_h = std::abs(pop(4) - pop(1)) / (2.0 * h);
        const double est_h2 = std::abs(pop(3) - pop(2)) / h;
        if (std::abs(est_h - est_h2) <= 1e-3 * std::max(est_h2, 1e-9)) return est_h2;
        prev = est_h2;
        h *= 0.5;
    }
    return prev;
}

} // namespace ionpulse
