#include "ionpulse/magnus.hpp"

#include <cmath>
#include <map>

#include "ionpulse/parallel.hpp"

namespace ionpulse {

namespace {

constexpr double kT = kPeriod;
const Complex kI(0.0, 1.0);

std::map<AlphaLabel, AlphaDefinition> build_alpha_definitions() {
    using B = BasisFn;
    std::map<AlphaLabel, AlphaDefinition> defs;
    const Complex half = -kI / (2.0 * kT);
    const Complex quarter = -kI / (4.0 * kT);
    const Complex triple = Complex(-1.0 / (6.0 * kT), 0.0);

    auto d2 = [](double c, int dp, B a, B b) { return AlphaTerm{c, dp, a, b, B::One}; };
    auto d3 = [](double c, int dp, B a, B b, B c3) { return AlphaTerm{c, dp, a, b, c3}; };

    defs[AlphaLabel::a1_1] = {2, half, {d2(1, 1, B::H1, B::One), d2(-1, 1, B::One, B::H1)}};
    defs[AlphaLabel::a2_1] = {2, half, {d2(1, 1, B::H2, B::One), d2(-1, 1, B::One, B::H2)}};
    defs[AlphaLabel::a3_1] = {2, half, {d2(1, 1, B::H3, B::One), d2(-1, 1, B::One, B::H3)}};
    defs[AlphaLabel::a4_1] = {2, quarter, {d2(1, 0, B::H1, B::H1c), d2(-1, 0, B::H1c, B::H1)}};
    defs[AlphaLabel::a5_1] = {2, half,
        {d2(-1, 0, B::H1c, B::H2), d2(1, 0, B::H1, B::H3c), d2(1, 0, B::H2, B::H1c), d2(-1, 0, B::H3c, B::H1)}};
    defs[AlphaLabel::a6_1] = {2, half, {d2(1, 0, B::H2, B::H3c), d2(-1, 0, B::H3c, B::H2)}};
    defs[AlphaLabel::a7_1] = {2, quarter, {d2(1, 0, B::H2, B::H2c), d2(-1, 0, B::H2c, B::H2)}};
    defs[AlphaLabel::a8_1] = {2, quarter, {d2(1, 0, B::H3, B::H3c), d2(-1, 0, B::H3c, B::H3)}};

    auto secular3 = [&](B h) {
        return std::vector<AlphaTerm>{d3(1, 2, B::One, B::One, h), d3(1, 2, h, B::One, B::One),
                                      d3(-2, 2, B::One, h, B::One)};
    };
    defs[AlphaLabel::a1_2] = {3, triple, secular3(B::H1)};
    defs[AlphaLabel::a2_2] = {3, triple, secular3(B::H2)};
    defs[AlphaLabel::a3_2] = {3, triple, secular3(B::H3)};

    auto cross3 = [&](B u, B v) {
        // delta * (u*(t1) v(t3) + v(t1) u*(t3) - u*(t1) v(t2) - v(t2) u*(t3))
        // with u already passed in conjugated form.
        return std::vector<AlphaTerm>{d3(1, 1, u, B::One, v), d3(1, 1, v, B::One, u),
                                      d3(-1, 1, u, v, B::One), d3(-1, 1, B::One, v, u)};
    };
    defs[AlphaLabel::a4_2] = {3, triple, cross3(B::H1c, B::H1)};
    {
        std::vector<AlphaTerm> t;
        for (const auto& part : {cross3(B::H1c, B::H2), cross3(B::H1, B::H3c),
                                 cross3(B::H2, B::H1c), cross3(B::H3c, B::H1)})
            t.insert(t.end(), part.begin(), part.end());
        defs[AlphaLabel::a5_2] = {3, triple, t};
    }
    {
        std::vector<AlphaTerm> t;
        for (const auto& part : {cross3(B::H2, B::H3c), cross3(B::H3c, B::H2)})
            t.insert(t.end(), part.begin(), part.end());
        defs[AlphaLabel::a6_2] = {3, triple, t};
    }
    defs[AlphaLabel::a7_2] = {3, triple, cross3(B::H2c, B::H2)};
    defs[AlphaLabel::a8_2] = {3, triple, cross3(B::H3c, B::H3)};

    defs[AlphaLabel::a9_2] = {3, triple,
        {d3(-2, 0, B::H1, B::H1, B::H1c), d3(4, 0, B::H1, B::H1c, B::H1), d3(-2, 0, B::H1c, B::H1, B::H1)}};
    defs[AlphaLabel::a10_2] = {3, triple,
        {d3(-2, 0, B::H1, B::H1, B::H3c), d3(-2, 0, B::H1, B::H2, B::H1c), d3(4, 0, B::H1, B::H1c, B::H2),
         d3(4, 0, B::H1, B::H3c, B::H1), d3(-2, 0, B::H2, B::H1, B::H1c), d3(4, 0, B::H2, B::H1c, B::H1),
         d3(-2, 0, B::H3c, B::H1, B::H1), d3(-2, 0, B::H1c, B::H2, B::H1), d3(-2, 0, B::H1c, B::H1, B::H2)}};
    defs[AlphaLabel::a11_2] = {3, triple,
        {d3(-2, 0, B::H1, B::H1, B::H2c), d3(-2, 0, B::H1, B::H3, B::H1c), d3(4, 0, B::H1, B::H1c, B::H3),
         d3(4, 0, B::H1, B::H2c, B::H1), d3(-2, 0, B::H3, B::H1, B::H1c), d3(4, 0, B::H3, B::H1c, B::H1),
         d3(-2, 0, B::H2c, B::H1, B::H1), d3(-2, 0, B::H1c, B::H3, B::H1), d3(-2, 0, B::H1c, B::H1, B::H3)}};
    return defs;
}

} // namespace

const AlphaDefinition& alpha_definition(AlphaLabel label) {
    static const std::map<AlphaLabel, AlphaDefinition> defs = build_alpha_definitions();
    return defs.at(label);
}

const std::vector<AlphaLabel>& all_alpha_labels() {
    static const std::vector<AlphaLabel> labels = {
        AlphaLabel::a1_1, AlphaLabel::a2_1, AlphaLabel::a3_1, AlphaLabel::a4_1,
        AlphaLabel::a5_1, AlphaLabel::a6_1, AlphaLabel::a7_1, AlphaLabel::a8_1,
        AlphaLabel::a1_2, AlphaLabel::a2_2, AlphaLabel::a3_2, AlphaLabel::a4_2,
        AlphaLabel::a5_2, AlphaLabel::a6_2, AlphaLabel::a7_2, AlphaLabel::a8_2,
        AlphaLabel::a9_2, AlphaLabel::a10_2, AlphaLabel::a11_2};
    return labels;
}

std::string to_string(AlphaLabel label) {
    const int idx = static_cast<int>(label);
    if (idx < 8) return "alpha" + std::to_string(idx + 1) + "_1";
    return "alpha" + std::to_string(idx - 8 + 1) + "_2";
}

AlphaLabel alpha_label_from_string(const std::string& name) {
    for (AlphaLabel label : all_alpha_labels())
        if (to_string(label) == name) return label;
    throw UsageError("unknown coefficient label '" + name + "'");
}

struct AlphaOracle::Impl {
    PulseSpec spec;

    struct Level {
        SimplexIntegrator quad;
        std::array<SimplexIntegrator::Table, 7> tables;
    };
    mutable std::vector<Level> levels;

    static constexpr int kBasePanels = 16;
    static constexpr int kOrder = 16;
    static constexpr int kMaxLevels = 4;

    explicit Impl(const PulseSpec& s) : spec(s) { spec.validate(); }

    const Level& level(int idx) const {
        while (static_cast<int>(levels.size()) <= idx) {
            const int panels = kBasePanels << levels.size();
            SimplexIntegrator quad(kT, panels, kOrder);
            const PulseSpec& sp = spec;
            // Order matches BasisFn: One, H1, H2, H3, H1c, H2c, H3c.
            auto values = quad.tabulate_multi(
                [&sp](double t, Complex* out) {
                    const DriveCoefficients h = h_funcs(sp, t);
                    out[0] = Complex(1.0);
                    out[1] = h.h1;
                    out[2] = h.h2;
                    out[3] = h.h3;
                    out[4] = std::conj(h.h1);
                    out[5] = std::conj(h.h2);
                    out[6] = std::conj(h.h3);
                },
                7);
            std::array<SimplexIntegrator::Table, 7> tables;
            for (int b = 0; b < 7; ++b) tables[static_cast<std::size_t>(b)] = std::move(values[static_cast<std::size_t>(b)]);
            levels.push_back(Level{std::move(quad), std::move(tables)});
        }
        return levels[static_cast<std::size_t>(idx)];
    }

    Complex evaluate(int level_idx, AlphaLabel label) const {
        const Level& lv = level(level_idx);
        const AlphaDefinition& def = alpha_definition(label);
        Complex sum(0.0);
        for (const AlphaTerm& term : def.terms) {
            double c = term.coef;
            for (int p = 0; p < term.delta_power; ++p) c *= spec.delta;
            if (c == 0.0) continue;
            const auto& ta = lv.tables[static_cast<std::size_t>(term.t1)];
            const auto& tb = lv.tables[static_cast<std::size_t>(term.t2)];
            if (def.integral_order == 2) {
                sum += c * lv.quad.integrate2(ta, tb);
            } else {
                const auto& tc = lv.tables[static_cast<std::size_t>(term.t3)];
                sum += c * lv.quad.integrate3(ta, tb, tc);
            }
        }
        return def.prefactor * sum;
    }
};

AlphaOracle::AlphaOracle(const PulseSpec& spec) : impl_(std::make_unique<Impl>(spec)) {}
AlphaOracle::~AlphaOracle() = default;

Complex AlphaOracle::value(AlphaLabel label) const {
    Complex prev = impl_->evaluate(0, label);
    for (int lvl = 1; lvl < Impl::kMaxLevels; ++lvl) {
        const Complex cur = impl_->evaluate(lvl, label);
        if (std::abs(cur - prev) <= std::max(1e-10 * std::abs(cur), 1e-14)) return cur;
        prev = cur;
    }
    throw OracleError("scalar alpha quadrature did not converge for " + to_string(label));
}

Complex scalar_alpha_numeric(const PulseSpec& spec, AlphaLabel label) {
    return AlphaOracle(spec).value(label);
}

namespace {

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

struct MagnusPass {
    Matrix M0, M1, M2;
};

MagnusPass magnus_pass(const PulseSpec& spec, const Operators& ops, int panels, int order) {
    const int dim = ops.cfg.dim();
    const Matrix zero = Matrix::Zero(dim, dim);
    auto H = [&](double t) { return hamiltonian(spec, t, ops); };

    PanelGrid grid(kT, panels, order);
    CumulativeIntegral<Matrix> m0cum(H, grid, zero);

    auto m1_integrand = [&](double t) -> Matrix { return -0.5 * kI * commutator(H(t), m0cum(t)); };
    CumulativeIntegral<Matrix> m1cum(m1_integrand, grid, zero);

    // First half of M2: -(i/3) * int [H(tau), M1(tau)] dtau.
    Matrix m2a = zero;
    {
        std::vector<Matrix> parts(static_cast<std::size_t>(grid.size()), zero);
        parallel::for_index(grid.size(), [&](int i) {
            parts[static_cast<std::size_t>(i)] =
                grid.weight(i) * commutator(H(grid.node(i)), m1cum(grid.node(i)));
        });
        for (const Matrix& part : parts) m2a += part;
        m2a *= -kI / 3.0;
    }

    // Second half: the time-ordered triple integral of [H(t3),[H(t2),H(t1)]].
    // The innermost integral passes through the outer commutator slot
    // linearly, leaving int dt1 int_0^t1 dt2 [M0(t2), [H(t2), H(t1)]].
    Matrix m2b = zero;
    {
        // Cache H and M0 at the shared grid nodes; only the partial top
        // panel of each inner integral needs fresh evaluations.
        std::vector<Matrix> Hx(static_cast<std::size_t>(grid.size()));
        std::vector<Matrix> Ax(static_cast<std::size_t>(grid.size()));
        parallel::for_index(grid.size(), [&](int i) {
            Hx[static_cast<std::size_t>(i)] = H(grid.node(i));
            Ax[static_cast<std::size_t>(i)] = m0cum(grid.node(i));
        });

        std::vector<Matrix> parts(static_cast<std::size_t>(grid.size()), zero);
        const GaussRule& rule = gauss_legendre(order);
        parallel::for_index(grid.size(), [&](int i) {
            const double t1 = grid.node(i);
            const Matrix& H1 = Hx[static_cast<std::size_t>(i)];
            Matrix inner = zero;
            const int p_top = grid.panel_of(i);
            for (int w = 0; w < p_top * order; ++w)
                inner += grid.weight(w) *
                         commutator(Ax[static_cast<std::size_t>(w)],
                                    commutator(Hx[static_cast<std::size_t>(w)], H1));
            const double a = grid.panel_start(p_top);
            const double half = 0.5 * (t1 - a);
            const double mid = 0.5 * (t1 + a);
            for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
                const double t2 = mid + half * rule.nodes[g];
                inner += (half * rule.weights[g]) * commutator(m0cum(t2), commutator(H(t2), H1));
            }
            parts[static_cast<std::size_t>(i)] = grid.weight(i) * inner;
        });
        for (const Matrix& part : parts) m2b += part;
        m2b *= -1.0 / 6.0;
    }

    return MagnusPass{m0cum.total(), m1cum.total(), m2a + m2b};
}

double max_norm(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

MagnusTerms magnus_numeric(const PulseSpec& spec, const SpaceConfig& cfg) {
    spec.validate();
    const Operators ops = build_operators(cfg);
    const int order = 16;
    int panels = 16;
    MagnusPass prev = magnus_pass(spec, ops, panels, order);
    for (int refine = 0; refine < 3; ++refine) {
        panels *= 2;
        MagnusPass cur = magnus_pass(spec, ops, panels, order);
        const double err = std::max({max_norm(cur.M0 - prev.M0) / std::max(max_norm(cur.M0), 1e-14),
                                     max_norm(cur.M1 - prev.M1) / std::max(max_norm(cur.M1), 1e-14),
                                     max_norm(cur.M2 - prev.M2) / std::max(max_norm(cur.M2), 1e-14)});
        if (err <= 1e-8) return MagnusTerms{cur.M0, cur.M1, cur.M2};
        prev = cur;
    }
    throw OracleError("Magnus quadrature did not converge within the refinement cap");
}

} // namespace ionpulse
