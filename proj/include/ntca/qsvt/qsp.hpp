// Signal-processing layer: 2x2 phased products in the Wx convention.
//
//   U_Phi(x) = e^{i phi_0 Z} * prod_{j=1..d} [ W(x) e^{i phi_j Z} ],
//   W(x) = [[x, i s],[i s, x]],  s = sqrt(1-x^2).
//
// The circuit side uses reflection-interleaved rotations; the exact identity
//   W(x) = -i * e^{i 3pi/4 Z} R(x) e^{-i pi/4 Z},  R(x) = [[x, s],[s, -x]],
// turns Wx phases into the projector-rotation angles
//   phi~_0 = phi_0 + 3pi/4,  phi~_j = phi_j + pi/2 (0<j<d),  phi~_d = phi_d - pi/4,
// with a residual global phase (-i)^d that the circuit carries explicitly.
// Negated Wx phases give the complex-conjugate top-left entry, which is how
// real polynomials are extracted by a two-branch average.

#pragma once

#include <Eigen/Dense>

#include "ntca/poly/polynomial.hpp"

namespace ntca {

namespace qsp {

inline Eigen::Matrix2cd w_matrix(double x) {
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    Eigen::Matrix2cd w;
    w << cdouble(x, 0.0), cdouble(0.0, s), cdouble(0.0, s), cdouble(x, 0.0);
    return w;
}

inline Eigen::Matrix2cd z_rotation(double phi) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = std::exp(cdouble(0.0, phi));
    m(1, 1) = std::exp(cdouble(0.0, -phi));
    return m;
}

// Top-left entry of U_Phi(x).
inline cdouble top_left(const std::vector<double>& phi, double x) {
    Eigen::Matrix2cd u = z_rotation(phi[0]);
    const Eigen::Matrix2cd w = w_matrix(x);
    for (std::size_t j = 1; j < phi.size(); ++j) u = u * w * z_rotation(phi[j]);
    return u(0, 0);
}

inline double real_part(const std::vector<double>& phi, double x) { return top_left(phi, x).real(); }

// Value and gradient of Re[U_Phi(x)]_{00} w.r.t. every phase.
inline double real_part_with_gradient(const std::vector<double>& phi, double x,
                                      std::vector<double>& grad) {
    const std::size_t n = phi.size();
    const Eigen::Matrix2cd w = w_matrix(x);
    std::vector<Eigen::Matrix2cd> prefix(n);
    prefix[0] = z_rotation(phi[0]);
    for (std::size_t j = 1; j < n; ++j) prefix[j] = prefix[j - 1] * w * z_rotation(phi[j]);

    grad.assign(n, 0.0);
    Eigen::Matrix2cd suffix = Eigen::Matrix2cd::Identity();
    const cdouble i1(0.0, 1.0);
    for (std::size_t j = n; j-- > 0;) {
        // d/dphi_j inserts iZ right after e^{i phi_j Z}.
        cdouble d00 = i1 * (prefix[j](0, 0) * suffix(0, 0) - prefix[j](0, 1) * suffix(1, 0));
        grad[j] = d00.real();
        if (j > 0) suffix = w * z_rotation(phi[j]) * suffix;
    }
    return prefix[n - 1](0, 0).real();
}

// Wx phases whose real top-left entry vanishes identically: (pi/4, 0,...,0, pi/4)
// gives U_00 = i T_d(x).
inline std::vector<double> zero_target_phases(int degree) {
    require(degree >= 0, "negative degree");
    if (degree == 0) return {M_PI / 2.0};
    std::vector<double> phi(degree + 1, 0.0);
    phi.front() = M_PI / 4.0;
    phi.back() = M_PI / 4.0;
    return phi;
}

// Projector-rotation angles for a Wx phase sequence (optionally negated for
// the conjugate branch). The accompanying global phase is (-i)^degree.
inline std::vector<double> projector_angles(const std::vector<double>& wx_phases, bool conjugate) {
    const int d = int(wx_phases.size()) - 1;
    std::vector<double> out(wx_phases.size());
    for (int p = 0; p <= d; ++p) {
        double phi = conjugate ? -wx_phases[p] : wx_phases[p];
        if (d == 0) {
            out[p] = phi;
        } else if (p == 0) {
            out[p] = phi + 3.0 * M_PI / 4.0;
        } else if (p == d) {
            out[p] = phi - M_PI / 4.0;
        } else {
            out[p] = phi + M_PI / 2.0;
        }
    }
    return out;
}

inline double global_phase_for_degree(int degree) { return -0.5 * M_PI * double(degree); }

} // namespace qsp

} // namespace ntca
