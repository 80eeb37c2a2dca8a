// Uniform singular-value amplification: an odd polynomial that multiplies by
// t on the window the data occupies while staying bounded by one.
//
// The fit target is the smooth saturating clip  s * u (1+u^{2q})^{-1/(2q)}
// with u = t x / s: linear to high order on the window, capped at s = 1-eta
// beyond it. Saturating (rather than rolling off) halves the bandwidth the
// Chebyshev fit has to resolve. Applying the fit through the phased chain to
// an encoding whose eigenvalues carry a known 1/t prefactor restores the
// unscaled values up to the plateau tolerance.

#pragma once

#include "ntca/poly/chebyshev.hpp"
#include "ntca/qsvt/phase_solver.hpp"

namespace ntca {

struct UniformAmplifier {
    PolynomialSpec poly; // odd, |poly| <= 1 on [-1,1]
    PhaseFactors phases;
    double t = 1.0;      // amplification factor
    double window = 0.0; // |z| <= window is amplified faithfully
    double tol = 0.0;    // achieved max |poly(z/t) - z| on the window
    int degree = 0;

    double amplified(double x) const { return poly.eval(x).real(); }
};

inline UniformAmplifier build_uniform_amplifier(double t, double z_window, double tol = 3e-4,
                                                double eta = 0.01, int degree_cap = 128,
                                                std::uint64_t seed = 0) {
    require(t > 1.0, "amplification factor must exceed one");
    const double s = 1.0 - eta;
    require(z_window > 0.0 && z_window <= s - 0.01, "window must sit inside the saturation level");
    const double a = z_window / t;

    for (int q : {10, 8, 12, 6}) {
        auto target = [&](double x) {
            double u = t * x / s;
            return s * u / std::pow(1.0 + std::pow(std::abs(u), 2.0 * q), 1.0 / (2.0 * q));
        };
        for (int d = 15; d <= degree_cap; d += 2) {
            PolynomialSpec fit = chebyshev_fit(target, d, 4001, Parity::Odd, "sv-amplifier");
            double plateau_err = 0.0;
            for (int i = 0; i <= 400; ++i) {
                double x = -a + 2.0 * a * double(i) / 400.0;
                plateau_err = std::max(plateau_err, std::abs(fit.eval(x).real() - t * x));
            }
            if (plateau_err > tol) continue;
            if (fit.measured_sup(4001) > 1.0 - eta / 4.0) continue;

            UniformAmplifier amp;
            amp.poly = fit;
            amp.degree = fit.degree;
            amp.t = t;
            amp.window = z_window;
            amp.tol = plateau_err;
            amp.phases =
                solve_phase_factors_at_degree(fit, fit.degree, 1e-8, seed, degree_cap);
            return amp;
        }
    }
    throw NumericalError("no amplification polynomial within the degree cap");
}

} // namespace ntca
