#ifndef IONPULSE_MAGNUS_HPP
#define IONPULSE_MAGNUS_HPP

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "ionpulse/drive.hpp"
#include "ionpulse/quad.hpp"

namespace ionpulse {

// Numerical oracle for the Magnus terms and for the scalar coefficient
// integrals behind the closed-form effective Hamiltonian. Everything here
// is evaluated by nested Gauss-Legendre quadrature with node doubling and
// is kept independent of the closed forms it validates; nothing in this
// module belongs on an optimization hot path.

struct MagnusTerms {
    Matrix M0, M1, M2; // evaluated at t = T
};

MagnusTerms magnus_numeric(const PulseSpec& spec, const SpaceConfig& cfg);

enum class AlphaLabel {
    a1_1, a2_1, a3_1, a4_1, a5_1, a6_1, a7_1, a8_1,
    a1_2, a2_2, a3_2, a4_2, a5_2, a6_2, a7_2, a8_2, a9_2, a10_2, a11_2,
};

const std::vector<AlphaLabel>& all_alpha_labels();
std::string to_string(AlphaLabel label);
AlphaLabel alpha_label_from_string(const std::string& name);

Complex scalar_alpha_numeric(const PulseSpec& spec, AlphaLabel label);

// Evaluates the full coefficient set against one shared node tabulation;
// much cheaper than 19 separate scalar_alpha_numeric calls.
class AlphaOracle {
public:
    explicit AlphaOracle(const PulseSpec& spec);
    ~AlphaOracle();
    AlphaOracle(const AlphaOracle&) = delete;
    AlphaOracle& operator=(const AlphaOracle&) = delete;

    Complex value(AlphaLabel label) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Defining integrand of a coefficient, exposed as a sum of separable
// products of the drive Fourier sums (h1, h2, h3, conjugates, 1). Shared by
// the quadrature oracle and by any independent evaluation route in tests.
enum class BasisFn { One, H1, H2, H3, H1c, H2c, H3c };

struct AlphaTerm {
    double coef = 1.0;   // constant factor
    int delta_power = 0; // multiply by delta^p
    BasisFn t1 = BasisFn::One;
    BasisFn t2 = BasisFn::One;
    BasisFn t3 = BasisFn::One; // ignored for double integrals
};

struct AlphaDefinition {
    int integral_order;  // 2 = double, 3 = triple time-ordered integral
    Complex prefactor;   // includes the 1/T normalization
    std::vector<AlphaTerm> terms;
};

const AlphaDefinition& alpha_definition(AlphaLabel label);

} // namespace ionpulse

#endif
