#include "ionpulse/drive.hpp"

#include <cmath>
#include <iostream>

namespace ionpulse {

void PulseSpec::validate() const {
    if (m <= 0) throw ConfigError("PulseSpec: m must be positive");
    if (n < 0) throw ConfigError("PulseSpec: n must be non-negative");
    if (m <= n)
        throw RegimeError("PulseSpec: only the regime m > n is supported (m=" +
                          std::to_string(m) + ", n=" + std::to_string(n) + ")");
    const std::size_t count = static_cast<std::size_t>(2 * n + 1);
    if (f.size() != count)
        throw ConfigError("PulseSpec: f must have 2n+1 = " + std::to_string(count) + " entries");
    if (eta.size() != count)
        throw ConfigError("PulseSpec: eta must have 2n+1 = " + std::to_string(count) + " entries");
    for (double e : eta)
        if (!(e > 0.0 && e < 1.0))
            throw ConfigError("PulseSpec: Lamb-Dicke parameters must lie in (0, 1)");
    if (!(f_tg >= 0.0)) throw ConfigError("PulseSpec: f_tg must be non-negative");
}

PulseSpec make_spec(int m, int n, double delta, std::vector<double> f, double eta, double f_tg) {
    PulseSpec spec;
    spec.m = m;
    spec.n = n;
    spec.delta = delta;
    spec.f = std::move(f);
    spec.eta.assign(static_cast<std::size_t>(2 * n + 1), eta);
    spec.f_tg = f_tg;
    spec.validate();
    return spec;
}

DriveCoefficients h_funcs(const PulseSpec& spec, double t) {
    const Complex i(0.0, 1.0);
    const Complex wm = std::polar(1.0, spec.m * t);
    const Complex w2m = std::polar(1.0, 2.0 * spec.m * t);
    DriveCoefficients h{0.0, 0.0, 0.0};
    for (int j = -spec.n; j <= spec.n; ++j) {
        const double fj = spec.f_at(j);
        if (fj == 0.0) continue;
        const double ej = spec.eta_at(j);
        const Complex wj = std::polar(1.0, -j * t); // e^{-i j t}
        h.h1 += 0.5 * fj * (wm * wj);
        h.h2 += 0.5 * i * ej * fj * wj;
        h.h3 += 0.5 * i * ej * fj * (w2m * wj);
    }
    return h;
}

Matrix hamiltonian(const PulseSpec& spec, double t, const Operators& ops) {
    const int dim = ops.cfg.dim();
    if (ops.a.rows() != dim || ops.sigma_plus.rows() != dim)
        throw ShapeError("hamiltonian: operator set inconsistent with its SpaceConfig");
    const DriveCoefficients h = h_funcs(spec, t);
    Matrix H = (-0.5 * spec.delta) * ops.sigma_z;
    // Raising part, then add the conjugate transpose once.
    Matrix upper = h.h1 * ops.sigma_plus + h.h2 * (ops.sigma_plus * ops.a) +
                   h.h3 * (ops.sigma_plus * ops.a_dag);
    H += upper + upper.adjoint();
    return H;
}

PulseSpec monochromatic_reference(double f_tg, double eta, int m) {
    if (!(f_tg > 0.0) || !(eta > 0.0) || m <= 0)
        throw ConfigError("monochromatic_reference: f_tg, eta, m must be positive");
    const double f0 = f_tg / eta;
    if (f0 >= 0.5 * m)
        std::cerr << "warning: monochromatic reference outside the weak-driving regime "
                  << "(f_tg/eta = " << f0 << " vs m = " << m << ")\n";
    PulseSpec spec;
    spec.m = m;
    spec.n = 0;
    spec.delta = f_tg * f_tg / (2.0 * eta * eta * m);
    spec.f = {f0};
    spec.eta = {eta};
    spec.f_tg = f_tg;
    spec.validate();
    return spec;
}

} // namespace ionpulse
