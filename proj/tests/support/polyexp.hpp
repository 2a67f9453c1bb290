#ifndef IONPULSE_TESTS_POLYEXP_HPP
#define IONPULSE_TESTS_POLYEXP_HPP

// Exact arithmetic for sums of t^p e^{i k t} with integer k: products and
// running integrals stay in the same family, so ordered simplex integrals of
// drive-function products can be evaluated without quadrature. Used as an
// independent cross-check of the Gauss-Legendre machinery in the tests.

#include <complex>
#include <map>
#include <utility>

#include "ionpulse/drive.hpp"

namespace ionpulse::testsupport {

class PolyExp {
public:
    using Key = std::pair<int, int>; // (frequency k, power p)

    static PolyExp term(Complex c, int freq, int power = 0) {
        PolyExp out;
        out.add(c, freq, power);
        return out;
    }

    void add(Complex c, int freq, int power) {
        if (c == Complex(0.0)) return;
        terms_[{freq, power}] += c;
    }

    PolyExp operator*(const PolyExp& other) const {
        PolyExp out;
        for (const auto& [ka, ca] : terms_)
            for (const auto& [kb, cb] : other.terms_)
                out.add(ca * cb, ka.first + kb.first, ka.second + kb.second);
        return out;
    }

    PolyExp operator+(const PolyExp& other) const {
        PolyExp out = *this;
        for (const auto& [k, c] : other.terms_) out.add(c, k.first, k.second);
        return out;
    }

    PolyExp scaled(Complex s) const {
        PolyExp out;
        for (const auto& [k, c] : terms_) out.add(s * c, k.first, k.second);
        return out;
    }

    // int_0^t f(s) ds, exact.
    PolyExp integral() const {
        PolyExp out;
        for (const auto& [key, c] : terms_) integrate_term(out, c, key.first, key.second);
        return out;
    }

    Complex eval(double t) const {
        const Complex i(0.0, 1.0);
        Complex sum(0.0);
        for (const auto& [key, c] : terms_) {
            double tp = 1.0;
            for (int p = 0; p < key.second; ++p) tp *= t;
            sum += c * tp * std::exp(i * static_cast<double>(key.first) * t);
        }
        return sum;
    }

private:
    static void integrate_term(PolyExp& out, Complex c, int freq, int power) {
        if (freq == 0) {
            out.add(c / static_cast<double>(power + 1), 0, power + 1);
            return;
        }
        const Complex ik(0.0, static_cast<double>(freq));
        // int t^p e^{ikt} = t^p e^{ikt}/(ik) - (p/(ik)) int t^{p-1} e^{ikt}
        Complex coef = c / ik;
        int p = power;
        for (;;) {
            out.add(coef, freq, p);
            if (p == 0) break;
            coef *= -static_cast<double>(p) / ik;
            --p;
        }
        // subtract the value at t = 0 (only the p = 0 term contributes)
        Complex at_zero = c / ik;
        for (int q = power; q > 0; --q) at_zero *= -static_cast<double>(q) / ik;
        out.add(-at_zero, 0, 0);
    }

    std::map<Key, Complex> terms_;
};

inline PolyExp drive_poly(const PulseSpec& spec, int which, bool conj) {
    PolyExp out;
    const Complex i(0.0, 1.0);
    for (int j = -spec.n; j <= spec.n; ++j) {
        const double fj = spec.f_at(j);
        const double ej = spec.eta_at(j);
        Complex c;
        int freq = 0;
        switch (which) {
            case 1: c = 0.5 * fj; freq = spec.m - j; break;
            case 2: c = 0.5 * i * ej * fj; freq = -j; break;
            default: c = 0.5 * i * ej * fj; freq = 2 * spec.m - j; break;
        }
        if (conj) {
            c = std::conj(c);
            freq = -freq;
        }
        out.add(c, freq, 0);
    }
    return out;
}

// Exact ordered integrals over 0 <= t3 <= t2 <= t1 <= T.
inline Complex ordered_integral3(const PolyExp& f1, const PolyExp& f2, const PolyExp& f3,
                                 double T) {
    return ((f1 * ((f2 * f3.integral()).integral())).integral()).eval(T);
}

inline Complex ordered_integral2(const PolyExp& f1, const PolyExp& f2, double T) {
    return ((f1 * f2.integral()).integral()).eval(T);
}

} // namespace ionpulse::testsupport

#endif
