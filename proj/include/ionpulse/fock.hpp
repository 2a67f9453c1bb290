#ifndef IONPULSE_FOCK_HPP
#define IONPULSE_FOCK_HPP

#include <Eigen/Dense>
#include <complex>

#include "ionpulse/errors.hpp"

namespace ionpulse {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Truncated qubit (x) oscillator space: d oscillator levels retained,
// of which the top `buffer` levels are a guard band used only to absorb
// off-resonant leakage. Total matrix dimension is 2*d.
struct SpaceConfig {
    int d = 2;
    int buffer = 0;

    int dim() const { return 2 * d; }
    void validate() const;
};

enum class Electronic { g, e };

struct BasisIndex {
    Electronic electronic = Electronic::g;
    int k = 0;
};

// Basis ordering is electronic-fastest: |g,0>, |e,0>, |g,1>, |e,1>, ...
int flat_index(Electronic electronic, int k, const SpaceConfig& cfg);
inline int flat_index(const BasisIndex& b, const SpaceConfig& cfg) {
    return flat_index(b.electronic, b.k, cfg);
}
BasisIndex basis_from_flat(int index, const SpaceConfig& cfg);

// Human-readable state label, e.g. "g1" or "e0".
std::string basis_label(const BasisIndex& b);
BasisIndex parse_basis_label(const std::string& label);

struct Operators {
    Matrix a;
    Matrix a_dag;
    Matrix sigma_plus;
    Matrix sigma_minus;
    Matrix sigma_z;
    Matrix identity;
    SpaceConfig cfg;
};

Operators build_operators(const SpaceConfig& cfg);

} // namespace ionpulse

#endif
