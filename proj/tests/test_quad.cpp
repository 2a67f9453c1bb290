#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ionpulse/quad.hpp"
#include "polyexp.hpp"

using namespace ionpulse;
using testsupport::PolyExp;

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
    for (int order : {4, 8, 16, 24}) {
        const GaussRule& rule = gauss_legendre(order);
        REQUIRE(static_cast<int>(rule.nodes.size()) == order);
        // int_{-1}^{1} x^k dx
        for (int k = 0; k < 2 * order - 1; ++k) {
            double acc = 0.0;
            for (int i = 0; i < order; ++i) acc += rule.weights[i] * std::pow(rule.nodes[i], k);
            const double expected = k % 2 == 1 ? 0.0 : 2.0 / (k + 1);
            CHECK(acc == doctest::Approx(expected).epsilon(1e-13));
        }
    }
}

TEST_CASE("composite grid integrates oscillatory functions") {
    const PanelGrid grid(kPeriod, 16, 16);
    Complex acc(0.0);
    for (int i = 0; i < grid.size(); ++i)
        acc += grid.weight(i) * std::exp(Complex(0.0, 25.0) * grid.node(i));
    CHECK(std::abs(acc) < 1e-12); // exact value 0 for integer frequency
}

TEST_CASE("cumulative integral matches the antiderivative") {
    const PanelGrid grid(kPeriod, 16, 16);
    auto f = [](double t) { return Complex(std::cos(7.0 * t), std::sin(3.0 * t)); };
    CumulativeIntegral<Complex> cum(f, grid, Complex(0.0));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> tdist(0.0, kPeriod);
    for (int trial = 0; trial < 25; ++trial) {
        const double t = tdist(rng);
        const Complex expected(std::sin(7.0 * t) / 7.0, (1.0 - std::cos(3.0 * t)) / 3.0);
        CHECK(std::abs(cum(t) - expected) < 1e-13);
    }
}

namespace {

PolyExp random_trig(std::mt19937_64& rng, int max_freq, int terms) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<int> freq(-max_freq, max_freq);
    PolyExp out;
    for (int i = 0; i < terms; ++i) out.add(Complex(coef(rng), coef(rng)), freq(rng), 0);
    return out;
}

} // namespace

TEST_CASE("simplex integrator agrees with exact ordered integrals") {
    std::mt19937_64 rng(17);
    const SimplexIntegrator quad(kPeriod, 32, 16);
    for (int trial = 0; trial < 8; ++trial) {
        const PolyExp f1 = random_trig(rng, 25, 5);
        const PolyExp f2 = random_trig(rng, 25, 5);
        const PolyExp f3 = random_trig(rng, 25, 5);
        const auto t1 = quad.tabulate([&](double t) { return f1.eval(t); });
        const auto t2 = quad.tabulate([&](double t) { return f2.eval(t); });
        const auto t3 = quad.tabulate([&](double t) { return f3.eval(t); });

        const Complex exact2 = testsupport::ordered_integral2(f1, f2, kPeriod);
        const Complex got2 = quad.integrate2(t1, t2);
        CHECK(std::abs(got2 - exact2) < 1e-10 * std::max(1.0, std::abs(exact2)));

        const Complex exact3 = testsupport::ordered_integral3(f1, f2, f3, kPeriod);
        const Complex got3 = quad.integrate3(t1, t2, t3);
        CHECK(std::abs(got3 - exact3) < 1e-10 * std::max(1.0, std::abs(exact3)));
    }
}

TEST_CASE("polyexp integral is exact on a known case") {
    // int_0^t s e^{2is} ds = t e^{2it}/(2i) + (e^{2it}-1)/4
    PolyExp p = PolyExp::term(1.0, 2, 1);
    const PolyExp ip = p.integral();
    for (double t : {0.3, 1.7, 5.0}) {
        const Complex i2(0.0, 2.0);
        const Complex expected =
            t * std::exp(i2 * t) / i2 + (std::exp(i2 * t) - 1.0) / 4.0;
        CHECK(std::abs(ip.eval(t) - expected) < 1e-14);
    }
}
