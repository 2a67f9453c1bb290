#ifndef IONPULSE_DRIVE_HPP
#define IONPULSE_DRIVE_HPP

#include <vector>

#include "ionpulse/fock.hpp"

namespace ionpulse {

// All frequencies are dimensionless multiples of the fundamental frequency
// (omega = 1 units), so the driving period is T = 2*pi.
inline constexpr double kPeriod = 6.283185307179586476925286766559;

// Polychromatic drive: 2n+1 tones j = -n..n centered (up to the detuning
// delta) on the red sideband of a trap at frequency m. Amplitudes f[j] and
// Lamb-Dicke parameters eta[j] are stored in j-ascending order; f_tg is the
// Rabi amplitude of the target red-sideband process.
struct PulseSpec {
    int m = 10;
    int n = 0;
    double delta = 0.0;
    std::vector<double> f;
    std::vector<double> eta;
    double f_tg = 0.1;

    double f_at(int j) const { return f[static_cast<std::size_t>(j + n)]; }
    double eta_at(int j) const { return eta[static_cast<std::size_t>(j + n)]; }

    void validate() const;
};

// Convenience constructor with uniform Lamb-Dicke parameter.
PulseSpec make_spec(int m, int n, double delta, std::vector<double> f, double eta, double f_tg);

struct DriveCoefficients {
    Complex h1; // carrier multiplier of sigma_+
    Complex h2; // red-sideband multiplier of sigma_+ a
    Complex h3; // blue-sideband multiplier of sigma_+ a^dag
};

DriveCoefficients h_funcs(const PulseSpec& spec, double t);

// H(t) = -(delta/2) sigma_z + h1 sigma_+ + h2 sigma_+ a + h3 sigma_+ a^dag + h.c.
Matrix hamiltonian(const PulseSpec& spec, double t, const Operators& ops);

// Single-tone pulse resonant with the red sideband after cancelling the
// leading Lamb shift: f0 = f_tg/eta, delta = f_tg^2 / (2 eta^2 m).
PulseSpec monochromatic_reference(double f_tg, double eta, int m);

} // namespace ionpulse

#endif
