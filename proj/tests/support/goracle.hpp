#ifndef IONPULSE_TESTS_GORACLE_HPP
#define IONPULSE_TESTS_GORACLE_HPP

// Time-quadrature oracle for the closed-form fluctuation integrals: builds
// the first-order fluctuation functions g_i(t) (running integrals of the
// drive sums minus their secular parts) and averages |g_i|^2 directly.

#include "ionpulse/drive.hpp"
#include "ionpulse/quad.hpp"

namespace ionpulse::testsupport {

struct GQuadrature {
    double g1 = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;
    double g3cos = 0.0; // cos(f_tg sqrt(k) t)-weighted |g3|^2 average
};

inline GQuadrature g_quadrature(const PulseSpec& spec, int k, int panels = 48) {
    const PanelGrid grid(kPeriod, panels, 16);
    const Complex dc2(0.0, 0.5 * spec.eta_at(0) * spec.f_at(0)); // secular part of h2
    CumulativeIntegral<Complex> c1([&](double t) { return h_funcs(spec, t).h1; }, grid, Complex(0.0));
    CumulativeIntegral<Complex> c2([&](double t) { return h_funcs(spec, t).h2 - dc2; }, grid,
                                   Complex(0.0));
    CumulativeIntegral<Complex> c3([&](double t) { return h_funcs(spec, t).h3; }, grid, Complex(0.0));

    const double nu = spec.f_tg * std::sqrt(static_cast<double>(k));
    GQuadrature out;
    for (int i = 0; i < grid.size(); ++i) {
        const double t = grid.node(i);
        const double w = grid.weight(i) / kPeriod;
        const double a3 = std::norm(c3(t));
        out.g1 += w * std::norm(c1(t));
        out.g2 += w * std::norm(c2(t));
        out.g3 += w * a3;
        out.g3cos += w * std::cos(nu * t) * a3;
    }
    return out;
}

} // namespace ionpulse::testsupport

#endif
