#ifndef IONPULSE_EFFECTIVE_HPP
#define IONPULSE_EFFECTIVE_HPP

#include <array>
#include <vector>

#include "ionpulse/drive.hpp"

namespace ionpulse {

// Closed-form effective Hamiltonian of the periodically driven ion through
// third Magnus order: the scalar coefficient sums, their assembly into a
// sum of independent operators, and the constraint sets used by the pulse
// optimizer. All values are in omega = 1 units.

enum class Branch { m_gt_2n, two_n_ge_m_gt_n };

struct EffectiveCoefficients {
    std::array<Complex, 2> alpha0;   // alpha1_0, alpha2_0
    std::array<Complex, 8> alpha1;   // alpha1_1 .. alpha8_1
    std::array<Complex, 11> alpha2;  // alpha1_2 .. alpha11_2
    Branch branch = Branch::m_gt_2n;
};

// Evaluates every coefficient and asserts that each lies on its fixed axis
// (purely real or purely imaginary for real drive parameters).
EffectiveCoefficients effective_coefficients(const PulseSpec& spec);

std::array<Complex, 2> alpha_zeroth(const PulseSpec& spec);
std::array<Complex, 8> alpha_first(const PulseSpec& spec);
std::array<Complex, 11> alpha_second(const PulseSpec& spec);

Branch branch_for(int m, int n);

// Coefficients of {1, sigma_z, sigma_z a, sigma_z a^2, sigma_z a^dag a,
// sigma_+, sigma_+ a, sigma_+ a^dag}; the materialized H adds the h.c. part.
struct AssembledEffective {
    std::array<Complex, 8> c;
    Matrix H;
};

// `order` keeps terms through the given Magnus order (0, 1 or 2).
AssembledEffective assemble(const PulseSpec& spec, const SpaceConfig& cfg, int order = 2);

// The five equality constraints, each projected onto its fixed axis:
//   0: sigma_z a coefficient
//   1: sigma_z a^2 coefficient
//   2: bare sigma_z (Lamb shift) part
//   3: sigma_z a^dag a part
//   4: red-sideband coefficient minus the target f_tg/2 (alpha2_2 excluded)
std::array<double, 5> constraint_residuals(const PulseSpec& spec);

// Seven-constraint variant: the sideband residual includes alpha2_2, and the
// carrier (sigma_+) and blue-sideband (sigma_+ a^dag) coefficients are
// constrained to zero as entries 5 and 6.
std::array<double, 7> full_constraint_residuals(const PulseSpec& spec);

// Constraint system with analytic derivatives in the tone amplitudes, for
// the optimizer. Rows follow the orderings above.
class ConstraintSystem {
public:
    ConstraintSystem(int m, int n, std::vector<double> eta, double f_tg, bool seven);

    int count() const { return seven_ ? 7 : 5; }
    int vars() const { return 2 * n_ + 1; }

    void eval(double delta, const Eigen::VectorXd& f, Eigen::VectorXd& r,
              Eigen::MatrixXd* jac = nullptr, std::vector<Eigen::MatrixXd>* hess = nullptr) const;

private:
    int m_, n_;
    std::vector<double> eta_;
    double f_tg_;
    bool seven_;
};

} // namespace ionpulse

#endif
