#ifndef IONPULSE_TESTS_SPECGEN_HPP
#define IONPULSE_TESTS_SPECGEN_HPP

#include <random>

#include "ionpulse/drive.hpp"
#include "ionpulse/magnus.hpp"
#include "polyexp.hpp"

namespace ionpulse::testsupport {

inline PulseSpec random_spec(std::mt19937_64& rng, int m, int n, bool uniform_eta = false) {
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    std::uniform_real_distribution<double> det(0.0, 0.5);
    std::uniform_real_distribution<double> ld(0.02, 0.2);
    PulseSpec spec;
    spec.m = m;
    spec.n = n;
    spec.delta = det(rng);
    spec.f.resize(static_cast<std::size_t>(2 * n + 1));
    spec.eta.resize(static_cast<std::size_t>(2 * n + 1));
    for (auto& v : spec.f) v = amp(rng);
    if (uniform_eta) {
        spec.eta.assign(spec.eta.size(), ld(rng));
    } else {
        for (auto& v : spec.eta) v = ld(rng);
    }
    spec.f_tg = 0.1;
    spec.validate();
    return spec;
}

inline PolyExp basis_poly(const PulseSpec& spec, BasisFn fn) {
    switch (fn) {
        case BasisFn::One: return PolyExp::term(1.0, 0, 0);
        case BasisFn::H1: return drive_poly(spec, 1, false);
        case BasisFn::H2: return drive_poly(spec, 2, false);
        case BasisFn::H3: return drive_poly(spec, 3, false);
        case BasisFn::H1c: return drive_poly(spec, 1, true);
        case BasisFn::H2c: return drive_poly(spec, 2, true);
        default: return drive_poly(spec, 3, true);
    }
}

// Exact evaluation of a coefficient's defining integrand, independent of
// both the closed forms and the quadrature oracle.
inline Complex alpha_exact(const PulseSpec& spec, AlphaLabel label) {
    const AlphaDefinition& def = alpha_definition(label);
    Complex sum(0.0);
    for (const AlphaTerm& term : def.terms) {
        double c = term.coef;
        for (int p = 0; p < term.delta_power; ++p) c *= spec.delta;
        if (c == 0.0) continue;
        const PolyExp f1 = basis_poly(spec, term.t1);
        const PolyExp f2 = basis_poly(spec, term.t2);
        if (def.integral_order == 2)
            sum += c * ordered_integral2(f1, f2, kPeriod);
        else
            sum += c * ordered_integral3(f1, f2, basis_poly(spec, term.t3), kPeriod);
    }
    return def.prefactor * sum;
}

} // namespace ionpulse::testsupport

#endif
