#include "ionpulse/effective.hpp"

#include <cmath>

namespace ionpulse {

namespace {

const Complex kI(0.0, 1.0);

struct Params {
    int m;
    int n;
    const double* eta; // 2n+1 entries, j-ascending
    const double* f;
    double delta;

    double fj(int j) const { return f[j + n]; }
    double ej(int j) const { return eta[j + n]; }
};

// Accumulates sums of monomials c * f_j [* f_q [* f_r]] together with their
// first and second derivatives in the tone amplitudes.
struct Accum {
    const Params& p;
    Complex v{0.0};
    Eigen::VectorXcd* grad = nullptr;
    Eigen::MatrixXcd* hess = nullptr;

    explicit Accum(const Params& params) : p(params) {}

    void add0(Complex c) { v += c; }

    void add1(Complex c, int j) {
        v += c * p.fj(j);
        if (grad) (*grad)(j + p.n) += c;
    }

    void add2(Complex c, int j, int q) {
        v += c * p.fj(j) * p.fj(q);
        if (grad) {
            (*grad)(j + p.n) += c * p.fj(q);
            (*grad)(q + p.n) += c * p.fj(j);
        }
        if (hess) {
            (*hess)(j + p.n, q + p.n) += c;
            (*hess)(q + p.n, j + p.n) += c;
        }
    }

    void add3(Complex c, int j, int q, int r) {
        const double fj = p.fj(j), fq = p.fj(q), fr = p.fj(r);
        v += c * fj * fq * fr;
        if (grad) {
            (*grad)(j + p.n) += c * fq * fr;
            (*grad)(q + p.n) += c * fj * fr;
            (*grad)(r + p.n) += c * fj * fq;
        }
        if (hess) {
            (*hess)(j + p.n, q + p.n) += c * fr;
            (*hess)(q + p.n, j + p.n) += c * fr;
            (*hess)(j + p.n, r + p.n) += c * fq;
            (*hess)(r + p.n, j + p.n) += c * fq;
            (*hess)(q + p.n, r + p.n) += c * fj;
            (*hess)(r + p.n, q + p.n) += c * fj;
        }
    }
};

// ---- first Magnus order -------------------------------------------------
// Closed forms for m > n. alpha1_1 is implemented with the sign fixed by
// its defining double integral (the quadrature oracle arbitrates).

void alpha1_1(const Params& p, Accum& a) {
    for (int j = -p.n; j <= p.n; ++j) a.add1(-p.delta / (2.0 * (p.m - j)), j);
}

void alpha2_1(const Params& p, Accum& a) {
    for (int j = -p.n; j <= p.n; ++j)
        if (j != 0) a.add1(kI * p.ej(j) * p.delta / (2.0 * j), j);
}

void alpha3_1(const Params& p, Accum& a) {
    for (int j = -p.n; j <= p.n; ++j) a.add1(-kI * p.ej(j) * p.delta / (2.0 * (2 * p.m - j)), j);
}

void alpha4_1(const Params& p, Accum& a) {
    for (int j = -p.n; j <= p.n; ++j) a.add2(1.0 / (8.0 * (p.m - j)), j, j);
}

void alpha5_1(const Params& p, Accum& a) {
    for (int j = -p.n; j <= p.n; ++j) a.add2(-kI * p.ej(0) / (4.0 * (p.m - j)), 0, j);
    if (p.m <= 2 * p.n) {
        for (int j = -p.n; j <= p.n; ++j)
            for (int q = -p.n; q <= p.n; ++q) {
                if (p.m + j - q == 0) a.add2(kI * p.ej(j) / (4.0 * (p.m - q)), j, q);
                if (p.m + q - j == 0) a.add2(-kI * p.ej(j) / (4.0 * (2 * p.m - j)), j, q);
            }
    }
}

void alpha6_1(const Params& p, Accum& a) {
    for (int j = -p.n; j <= p.n; ++j) a.add2(-p.ej(0) * p.ej(j) / (4.0 * (2 * p.m - j)), 0, j);
}

void alpha7_1(const Params& p, Accum& a) {
    for (int j = -p.n; j <= p.n; ++j) {
        if (j == 0) continue;
        a.add2(p.ej(0) * p.ej(j) / (4.0 * j), 0, j);
        a.add2(-p.ej(j) * p.ej(j) / (8.0 * j), j, j);
    }
}

void alpha8_1(const Params& p, Accum& a) {
    for (int j = -p.n; j <= p.n; ++j) a.add2(p.ej(j) * p.ej(j) / (8.0 * (2 * p.m - j)), j, j);
}

// ---- second Magnus order ------------------------------------------------

void alpha1_2(const Params& p, Accum& a) {
    const double d2 = p.delta * p.delta;
    for (int j = -p.n; j <= p.n; ++j) a.add1(-d2 / (2.0 * (p.m - j) * (p.m - j)), j);
}

void alpha2_2(const Params& p, Accum& a) {
    const double d2 = p.delta * p.delta;
    for (int j = -p.n; j <= p.n; ++j)
        if (j != 0) a.add1(-kI * d2 * p.ej(j) / (2.0 * j * j), j);
}

void alpha3_2(const Params& p, Accum& a) {
    const double d2 = p.delta * p.delta;
    for (int j = -p.n; j <= p.n; ++j)
        a.add1(-kI * d2 * p.ej(j) / (2.0 * (2 * p.m - j) * (2 * p.m - j)), j);
}

void alpha4_2(const Params& p, Accum& a) {
    for (int j = -p.n; j <= p.n; ++j) {
        a.add2(p.delta / (8.0 * (p.m - j) * (p.m - j)), j, j);
        for (int q = -p.n; q <= p.n; ++q)
            a.add2(p.delta / (8.0 * (p.m - j) * (p.m - q)), j, q);
    }
}

void alpha5_2(const Params& p, Accum& a) {
    const double d = p.delta;
    for (int j = -p.n; j <= p.n; ++j) {
        a.add2(-kI * d * p.ej(0) / (4.0 * (p.m - j) * (p.m - j)), 0, j);
        for (int q = -p.n; q <= p.n; ++q) {
            if (q != 0) a.add2(-kI * d * p.ej(q) / (4.0 * q * (p.m - j)), j, q);
            a.add2(-kI * d * p.ej(j) / (4.0 * (p.m - q) * (2 * p.m - j)), j, q);
        }
    }
    if (p.m <= 2 * p.n) {
        for (int j = -p.n; j <= p.n; ++j)
            for (int q = -p.n; q <= p.n; ++q) {
                if (q != 0 && p.m - j + q == 0) a.add2(kI * d * p.ej(q) / (8.0 * q * q), j, q);
                if (p.m - q + j == 0) a.add2(kI * d * p.ej(j) / (8.0 * (p.m - q) * (p.m - q)), j, q);
                if (p.m + j - q == 0)
                    a.add2(-kI * d * p.ej(q) / (6.0 * (2 * p.m - q) * (2 * p.m - q)), j, q);
                if (p.m - j + q == 0)
                    a.add2(-kI * d * p.ej(j) / (12.0 * (p.m - q) * (p.m - q)), j, q);
            }
    }
}

void alpha6_2(const Params& p, Accum& a) {
    const double d = p.delta;
    for (int j = -p.n; j <= p.n; ++j) {
        a.add2(-d * p.ej(0) * p.ej(j) / (4.0 * (2 * p.m - j) * (2 * p.m - j)), 0, j);
        if (j != 0)
            for (int q = -p.n; q <= p.n; ++q)
                a.add2(-d * p.ej(j) * p.ej(q) / (4.0 * j * (2 * p.m - q)), j, q);
    }
}

void alpha7_2(const Params& p, Accum& a) {
    const double d = p.delta;
    for (int j = -p.n; j <= p.n; ++j) {
        if (j == 0) continue;
        a.add2(d * p.ej(j) * p.ej(j) / (8.0 * j * j), j, j);
        a.add2(-d * p.ej(0) * p.ej(j) / (4.0 * j * j), 0, j);
        for (int q = -p.n; q <= p.n; ++q)
            if (q != 0) a.add2(d * p.ej(j) * p.ej(q) / (8.0 * j * q), j, q);
    }
}

void alpha8_2(const Params& p, Accum& a) {
    const double d = p.delta;
    for (int j = -p.n; j <= p.n; ++j) {
        a.add2(d * p.ej(j) * p.ej(j) / (8.0 * (2 * p.m - j) * (2 * p.m - j)), j, j);
        for (int q = -p.n; q <= p.n; ++q)
            a.add2(d * p.ej(j) * p.ej(q) / (8.0 * (2 * p.m - j) * (2 * p.m - q)), j, q);
    }
}

void alpha9_2(const Params& p, Accum& a) {
    for (int j = -p.n; j <= p.n; ++j)
        for (int q = -p.n; q <= p.n; ++q)
            a.add3(1.0 / (4.0 * (p.m - j) * (p.m - q)), j, q, q);
    if (3 * p.n >= p.m) {
        for (int j = -p.n; j <= p.n; ++j)
            for (int q = -p.n; q <= p.n; ++q)
                for (int r = -p.n; r <= p.n; ++r)
                    if (q != r && p.m - j + q - r == 0)
                        a.add3(1.0 / (8.0 * (p.m - r) * (q - r)), j, q, r);
    }
}

void alpha10_2(const Params& p, Accum& a) {
    const int m = p.m, n = p.n;
    if (m > 2 * n) {
        for (int j = -n; j <= n; ++j)
            for (int q = -n; q <= n; ++q) {
                a.add3(-kI * p.ej(0) / (6.0 * (m - j) * (m - q)), 0, j, q);
                if (j != 0) a.add3(-kI * p.ej(j) / (4.0 * j * (m - q)), j, q, q);
                if (j != q) a.add3(kI * p.ej(0) / (12.0 * (m - q) * (q - j)), 0, j, q);
                for (int r = -n; r <= n; ++r) {
                    if (q - r - j == 0) a.add3(-kI * p.ej(q) / (8.0 * (m - r) * (q - r - m)), j, q, r);
                    if (q - r + j == 0) a.add3(-kI * p.ej(q) / (12.0 * (m - r) * (m + q - r)), j, q, r);
                    if (q != r && r + j - q == 0) a.add3(-kI * p.ej(j) / (6.0 * (m - r) * (r - q)), j, q, r);
                    if (q != r && r - q - j == 0) a.add3(kI * p.ej(j) / (12.0 * (m - r) * (r - q)), j, q, r);
                }
            }
    } else {
        for (int j = -n; j <= n; ++j) {
            a.add3(-kI * p.ej(0) / (6.0 * (m - j) * (m - j)), 0, j, j);
            for (int q = -n; q <= n; ++q) {
                if (j != q) a.add3(-kI * p.ej(0) / (4.0 * (m - j) * (j - q)), 0, j, q);
                if (j != 0) a.add3(-kI * p.ej(j) / (4.0 * j * (m - q)), j, q, q);
                for (int r = -n; r <= n; ++r) {
                    if (j - m - q != 0 && j - r - q == 0)
                        a.add3(-kI * p.ej(j) / (4.0 * (2 * m - j) * (j - m - q)), j, q, r);
                    if (j - m - q == 0) a.add3(-kI * p.ej(j) / (4.0 * (2 * m - j) * (m - r)), j, q, r);
                    if (q != r && r - q - j == 0)
                        a.add3(kI * p.ej(j) / (12.0 * (m - r) * (r - q)), j, q, r);
                    if (m - r + j != 0 && r - j - q == 0)
                        a.add3(-kI * p.ej(j) / (12.0 * (m - r) * (m - r + j)), j, q, r);
                    if (m - r + j == 0) a.add3(kI * p.ej(j) / (12.0 * (m - r) * (m - q)), j, q, r);
                    if (j != 0 && m - j - q == 0) a.add3(kI * p.ej(j) / (12.0 * j * (m - r)), j, q, r);
                    if (m - q - j == 0) a.add3(-kI * p.ej(j) / (12.0 * (m - r) * (m - q)), j, q, r);
                    if (j != 0 && m - q + j == 0) a.add3(-kI * p.ej(j) / (6.0 * j * (m - r)), j, q, r);
                    if (j != 0 && m - q + j != 0 && q - r - j == 0)
                        a.add3(kI * p.ej(j) / (6.0 * j * (m - q + j)), j, q, r);
                }
            }
        }
    }
}

void alpha11_2(const Params& p, Accum& a) {
    const int m = p.m, n = p.n;
    if (m > 2 * n) {
        for (int j = -n; j <= n; ++j)
            for (int q = -n; q <= n; ++q) {
                a.add3(kI * p.ej(0) / (8.0 * (m - j) * (m - q)), 0, j, q);
                a.add3(kI * p.ej(j) / (4.0 * (m - q) * (2 * m - j)), j, q, q);
            }
        return;
    }
    // Shared sums of both 2n >= m sub-branches.
    for (int j = -n; j <= n; ++j)
        for (int q = -n; q <= n; ++q) {
            a.add3(kI * p.ej(0) / (4.0 * (m - q) * (2 * m - j - q)), 0, j, q);
            a.add3(kI * p.ej(j) / (4.0 * (m - q) * (2 * m - j)), j, q, q);
            for (int r = -n; r <= n; ++r) {
                if (j != 0 && m - q + j == 0) a.add3(kI * p.ej(j) / (4.0 * j * (m - r)), j, q, r);
                if (m + q - j == 0) a.add3(kI * p.ej(j) / (4.0 * (2 * m - j) * (m - r)), j, q, r);
            }
        }
    if (2 * m > 3 * n) return; // 2n >= m > 3n/2
    // 3n/2 >= m > n: resonances among the three-tone products appear.
    for (int j = -n; j <= n; ++j)
        for (int q = -n; q <= n; ++q)
            for (int r = -n; r <= n; ++r) {
                if (j != 0 && m - q + j != 0 && 2 * m - r - q + j == 0)
                    a.add3(kI * p.ej(j) / (4.0 * j * (m - q + j)), j, q, r);
                if (q != r && 2 * m - j + r - q == 0)
                    a.add3(kI * p.ej(j) / (12.0 * (m - r) * (r - q)), j, q, r);
                if (m + q - j != 0 && 2 * m - j + q - r == 0)
                    a.add3(kI * p.ej(j) / (6.0 * (2 * m - j) * (m + q - j)), j, q, r);
                if (2 * m + q - j - r == 0)
                    a.add3(-kI * p.ej(j) / (12.0 * (m - r) * (3 * m - j - r)), j, q, r);
            }
}

using AlphaFn = void (*)(const Params&, Accum&);

constexpr AlphaFn kFirstOrder[8] = {alpha1_1, alpha2_1, alpha3_1, alpha4_1,
                                    alpha5_1, alpha6_1, alpha7_1, alpha8_1};
constexpr AlphaFn kSecondOrder[11] = {alpha1_2, alpha2_2, alpha3_2, alpha4_2, alpha5_2, alpha6_2,
                                      alpha7_2, alpha8_2, alpha9_2, alpha10_2, alpha11_2};

Params params_from(const PulseSpec& spec) {
    return Params{spec.m, spec.n, spec.eta.data(), spec.f.data(), spec.delta};
}

Complex eval_alpha(const Params& p, AlphaFn fn) {
    Accum a(p);
    fn(p, a);
    return a.v;
}

void assert_axis(Complex v, bool real_axis, const char* name) {
    const double off = real_axis ? std::abs(v.imag()) : std::abs(v.real());
    if (off > 1e-12 * std::max(1.0, std::abs(v)))
        throw std::logic_error(std::string("coefficient ") + name + " left its fixed axis");
}

constexpr bool kFirstReal[8] = {true, false, false, true, false, true, true, true};
constexpr bool kSecondReal[11] = {true, false, false, true, false, true,
                                  true, true, true, false, false};

} // namespace

Branch branch_for(int m, int n) {
    if (m <= n) throw RegimeError("no closed forms for n >= m");
    return m > 2 * n ? Branch::m_gt_2n : Branch::two_n_ge_m_gt_n;
}

std::array<Complex, 2> alpha_zeroth(const PulseSpec& spec) {
    spec.validate();
    return {Complex(-spec.delta / 4.0), kI * spec.eta_at(0) * spec.f_at(0) / 2.0};
}

std::array<Complex, 8> alpha_first(const PulseSpec& spec) {
    spec.validate();
    const Params p = params_from(spec);
    std::array<Complex, 8> out;
    for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = eval_alpha(p, kFirstOrder[i]);
    return out;
}

std::array<Complex, 11> alpha_second(const PulseSpec& spec) {
    spec.validate();
    const Params p = params_from(spec);
    std::array<Complex, 11> out;
    for (int i = 0; i < 11; ++i) out[static_cast<std::size_t>(i)] = eval_alpha(p, kSecondOrder[i]);
    return out;
}

EffectiveCoefficients effective_coefficients(const PulseSpec& spec) {
    EffectiveCoefficients ec;
    ec.alpha0 = alpha_zeroth(spec);
    ec.alpha1 = alpha_first(spec);
    ec.alpha2 = alpha_second(spec);
    ec.branch = branch_for(spec.m, spec.n);
    assert_axis(ec.alpha0[0], true, "alpha1_0");
    assert_axis(ec.alpha0[1], false, "alpha2_0");
    for (int i = 0; i < 8; ++i)
        assert_axis(ec.alpha1[static_cast<std::size_t>(i)], kFirstReal[i],
                    ("alpha" + std::to_string(i + 1) + "_1").c_str());
    for (int i = 0; i < 11; ++i)
        assert_axis(ec.alpha2[static_cast<std::size_t>(i)], kSecondReal[i],
                    ("alpha" + std::to_string(i + 1) + "_2").c_str());
    return ec;
}

AssembledEffective assemble(const PulseSpec& spec, const SpaceConfig& cfg, int order) {
    if (order < 0 || order > 2) throw ConfigError("assemble: order must be 0, 1 or 2");
    const EffectiveCoefficients ec = effective_coefficients(spec);
    const auto& a0 = ec.alpha0;
    std::array<Complex, 8> a1{};
    std::array<Complex, 11> a2{};
    if (order >= 1) a1 = ec.alpha1;
    if (order >= 2) a2 = ec.alpha2;

    AssembledEffective out;
    out.c[0] = 0.5 * (a1[6] + a2[6] - a1[7] - a2[7]);
    out.c[1] = a0[0] + a1[3] + a2[3] + 0.5 * (a1[6] + a2[6] + a1[7] + a2[7]);
    out.c[2] = a1[4] + a2[4];
    out.c[3] = a1[5] + a2[5];
    out.c[4] = a1[6] + a2[6] + a1[7] + a2[7];
    out.c[5] = a1[0] + a2[0] + a2[8];
    out.c[6] = a0[1] + a1[1] + a2[1] + a2[9];
    out.c[7] = a1[2] + a2[2] + a2[10];

    const Operators ops = build_operators(cfg);
    Matrix upper = out.c[0] * ops.identity + out.c[1] * ops.sigma_z +
                   out.c[2] * (ops.sigma_z * ops.a) + out.c[3] * (ops.sigma_z * ops.a * ops.a) +
                   out.c[4] * (ops.sigma_z * ops.a_dag * ops.a) + out.c[5] * ops.sigma_plus +
                   out.c[6] * (ops.sigma_plus * ops.a) + out.c[7] * (ops.sigma_plus * ops.a_dag);
    out.H = upper + upper.adjoint();
    return out;
}

std::array<double, 5> constraint_residuals(const PulseSpec& spec) {
    const EffectiveCoefficients ec = effective_coefficients(spec);
    const auto& a0 = ec.alpha0;
    const auto& a1 = ec.alpha1;
    const auto& a2 = ec.alpha2;
    std::array<double, 5> r;
    r[0] = (a1[4] + a2[4]).imag();
    r[1] = (a1[5] + a2[5]).real();
    r[2] = (a0[0] + a1[3] + a2[3]).real();
    r[3] = (a1[6] + a2[6] + a1[7] + a2[7]).real();
    r[4] = (a0[1] + a1[1] + a2[9]).imag() - spec.f_tg / 2.0;
    return r;
}

std::array<double, 7> full_constraint_residuals(const PulseSpec& spec) {
    const EffectiveCoefficients ec = effective_coefficients(spec);
    const auto& a0 = ec.alpha0;
    const auto& a1 = ec.alpha1;
    const auto& a2 = ec.alpha2;
    std::array<double, 7> r;
    r[0] = (a1[4] + a2[4]).imag();
    r[1] = (a1[5] + a2[5]).real();
    r[2] = (a0[0] + a1[3] + a2[3]).real();
    r[3] = (a1[6] + a2[6] + a1[7] + a2[7]).real();
    r[4] = (a0[1] + a1[1] + a2[1] + a2[9]).imag() - spec.f_tg / 2.0;
    r[5] = (a1[0] + a2[0] + a2[8]).real();
    r[6] = (a1[2] + a2[2] + a2[10]).imag();
    return r;
}

ConstraintSystem::ConstraintSystem(int m, int n, std::vector<double> eta, double f_tg, bool seven)
    : m_(m), n_(n), eta_(std::move(eta)), f_tg_(f_tg), seven_(seven) {
    if (m_ <= n_) throw RegimeError("ConstraintSystem: requires m > n");
    if (static_cast<int>(eta_.size()) != 2 * n_ + 1)
        throw ConfigError("ConstraintSystem: eta must have 2n+1 entries");
}

void ConstraintSystem::eval(double delta, const Eigen::VectorXd& f, Eigen::VectorXd& r,
                            Eigen::MatrixXd* jac, std::vector<Eigen::MatrixXd>* hess) const {
    const int nf = vars();
    if (f.size() != nf) throw ShapeError("ConstraintSystem: wrong amplitude vector size");
    const Params p{m_, n_, eta_.data(), f.data(), delta};
    const int rows = count();
    r.resize(rows);
    if (jac) jac->resize(rows, nf);
    if (hess) hess->assign(static_cast<std::size_t>(rows), Eigen::MatrixXd::Zero(nf, nf));

    // row -> {alpha terms, axis, constant offset}
    struct Row {
        std::vector<AlphaFn> fns;
        bool real_axis;
        Complex constant;
        double offset;
    };
    const Complex lamb(-delta / 4.0, 0.0);
    std::vector<Row> rowdefs;
    rowdefs.push_back({{alpha5_1, alpha5_2}, false, 0.0, 0.0});
    rowdefs.push_back({{alpha6_1, alpha6_2}, true, 0.0, 0.0});
    rowdefs.push_back({{alpha4_1, alpha4_2}, true, lamb, 0.0});
    rowdefs.push_back({{alpha7_1, alpha7_2, alpha8_1, alpha8_2}, true, 0.0, 0.0});
    if (seven_) {
        rowdefs.push_back({{alpha2_1, alpha2_2, alpha10_2}, false, 0.0, -f_tg_ / 2.0});
        rowdefs.push_back({{alpha1_1, alpha1_2, alpha9_2}, true, 0.0, 0.0});
        rowdefs.push_back({{alpha3_1, alpha3_2, alpha11_2}, false, 0.0, 0.0});
    } else {
        rowdefs.push_back({{alpha2_1, alpha10_2}, false, 0.0, -f_tg_ / 2.0});
    }

    Eigen::VectorXcd g(nf);
    Eigen::MatrixXcd h(nf, nf);
    for (int row = 0; row < rows; ++row) {
        const Row& def = rowdefs[static_cast<std::size_t>(row)];
        g.setZero();
        h.setZero();
        Accum acc(p);
        if (jac) acc.grad = &g;
        if (hess) acc.hess = &h;
        acc.add0(def.constant);
        // The sideband rows carry the zeroth-order term i eta_0 f_0 / 2.
        if (row == 4) acc.add1(kI * p.ej(0) / 2.0, 0);
        for (AlphaFn fn : def.fns) fn(p, acc);
        if (def.real_axis) {
            r(row) = acc.v.real() + def.offset;
            if (jac) jac->row(row) = g.real().transpose();
            if (hess) (*hess)[static_cast<std::size_t>(row)] = h.real();
        } else {
            r(row) = acc.v.imag() + def.offset;
            if (jac) jac->row(row) = g.imag().transpose();
            if (hess) (*hess)[static_cast<std::size_t>(row)] = h.imag();
        }
    }
}

} // namespace ionpulse
