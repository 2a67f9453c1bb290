#include "ionpulse/fock.hpp"

#include <cmath>

namespace ionpulse {

void SpaceConfig::validate() const {
    if (d < 2)
        throw ConfigError("SpaceConfig: need at least 2 oscillator levels, got d=" + std::to_string(d));
    if (buffer < 0 || buffer > d - 1)
        throw ConfigError("SpaceConfig: buffer must be in [0, d-1], got " + std::to_string(buffer));
}

int flat_index(Electronic electronic, int k, const SpaceConfig& cfg) {
    if (k < 0 || k >= cfg.d)
        throw std::out_of_range("flat_index: oscillator level " + std::to_string(k) +
                                " outside [0, " + std::to_string(cfg.d) + ")");
    return 2 * k + (electronic == Electronic::g ? 0 : 1);
}

BasisIndex basis_from_flat(int index, const SpaceConfig& cfg) {
    if (index < 0 || index >= cfg.dim())
        throw std::out_of_range("basis_from_flat: index " + std::to_string(index) +
                                " outside [0, " + std::to_string(cfg.dim()) + ")");
    return BasisIndex{index % 2 == 0 ? Electronic::g : Electronic::e, index / 2};
}

std::string basis_label(const BasisIndex& b) {
    return (b.electronic == Electronic::g ? "g" : "e") + std::to_string(b.k);
}

BasisIndex parse_basis_label(const std::string& label) {
    if (label.size() < 2 || (label[0] != 'g' && label[0] != 'e'))
        throw UsageError("bad basis label '" + label + "', expected e.g. 'g1'");
    BasisIndex b;
    b.electronic = label[0] == 'g' ? Electronic::g : Electronic::e;
    try {
        b.k = std::stoi(label.substr(1));
    } catch (const std::exception&) {
        throw UsageError("bad basis label '" + label + "', expected e.g. 'g1'");
    }
    if (b.k < 0) throw UsageError("bad basis label '" + label + "'");
    return b;
}

Operators build_operators(const SpaceConfig& cfg) {
    cfg.validate();
    const int dim = cfg.dim();
    Operators ops;
    ops.cfg = cfg;
    ops.a = Matrix::Zero(dim, dim);
    ops.sigma_plus = Matrix::Zero(dim, dim);
    ops.sigma_z = Matrix::Zero(dim, dim);
    ops.identity = Matrix::Identity(dim, dim);

    for (int k = 1; k < cfg.d; ++k) {
        const double amp = std::sqrt(static_cast<double>(k));
        for (Electronic s : {Electronic::g, Electronic::e})
            ops.a(flat_index(s, k - 1, cfg), flat_index(s, k, cfg)) = amp;
    }
    for (int k = 0; k < cfg.d; ++k) {
        ops.sigma_plus(flat_index(Electronic::e, k, cfg), flat_index(Electronic::g, k, cfg)) = 1.0;
        ops.sigma_z(flat_index(Electronic::g, k, cfg), flat_index(Electronic::g, k, cfg)) = -1.0;
        ops.sigma_z(flat_index(Electronic::e, k, cfg), flat_index(Electronic::e, k, cfg)) = 1.0;
    }
    ops.a_dag = ops.a.adjoint();
    ops.sigma_minus = ops.sigma_plus.adjoint();
    return ops;
}

} // namespace ionpulse
