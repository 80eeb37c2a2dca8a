// State-preparation oracle synthesis.
//
// Builds a circuit U with U|0..0> = sum_k c_k |k-1> from a normalized complex
// vector, as a rotation cascade: a binary tree of pattern-controlled Ry gates
// fixes the magnitude profile, then pattern-controlled phase insertions fix
// every amplitude's phase including the global one. Basis convention:
// data label k in 1..N sits on computational basis state k-1.

#pragma once

#include <cmath>

#include "ntca/core/circuit.hpp"
#include "ntca/core/simulator.hpp"

namespace ntca {

struct AmplitudeVector {
    cvector entries; // c_k = x_k + i y_k, padded to 2^n

    explicit AmplitudeVector(cvector c, double norm_tol = 1e-9) {
        require(!c.empty(), "amplitude vector must be nonempty");
        std::size_t n = 1;
        int width = 0;
        while (n < c.size()) {
            n <<= 1;
            ++width;
        }
        double s = 0.0;
        for (const auto& z : c) s += std::norm(z);
        require(std::abs(s - 1.0) <= norm_tol, "amplitude vector is not normalized");
        c.resize(n, cdouble(0.0));
        entries = std::move(c);
        num_qubits_ = width;
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return entries.size(); }

    double x(std::size_t k) const { return entries[k - 1].real(); } // k in 1..N
    double y(std::size_t k) const { return entries[k - 1].imag(); }

private:
    int num_qubits_ = 0;
};

namespace detail {

inline std::vector<ControlSpec> pattern_controls(std::size_t pattern, int bits, int first_qubit = 0) {
    std::vector<ControlSpec> out;
    out.reserve(bits);
    for (int j = 0; j < bits; ++j) {
        bool v = (pattern >> (bits - 1 - j)) & 1;
        out.push_back({first_qubit + j, v});
    }
    return out;
}

} // namespace detail

inline Circuit synthesize_state_prep(const AmplitudeVector& c) {
    const int n = c.num_qubits();
    Circuit u(n);
    if (n == 0) {
        double phi = std::arg(c.entries[0]);
        if (phi != 0.0) u.add(gate_gphase(phi));
        return u;
    }

    // Subtree weights: level j has 2^j nodes; weight = sum of |c|^2 below.
    std::vector<std::vector<double>> w(n + 1);
    w[n].resize(c.dim());
    for (std::size_t k = 0; k < c.dim(); ++k) w[n][k] = std::norm(c.entries[k]);
    for (int j = n; j > 0; --j) {
        w[j - 1].resize(w[j].size() / 2);
        for (std::size_t b = 0; b < w[j - 1].size(); ++b) w[j - 1][b] = w[j][2 * b] + w[j][2 * b + 1];
    }

    for (int j = 0; j < n; ++j) {
        for (std::size_t b = 0; b < w[j].size(); ++b) {
            if (w[j][b] <= 0.0) continue;
            double theta = 2.0 * std::atan2(std::sqrt(w[j + 1][2 * b + 1]), std::sqrt(w[j + 1][2 * b]));
            if (theta == 0.0) continue;
            u.add(gate_ry(theta, j, detail::pattern_controls(b, j)));
        }
    }
    for (std::size_t k = 0; k < c.dim(); ++k) {
        if (std::abs(c.entries[k]) == 0.0) continue;
        double phi = std::arg(c.entries[k]);
        if (phi == 0.0) continue;
        u.add(gate_gphase(phi, detail::pattern_controls(k, n)));
    }
    return u;
}

// Uniform superposition over labels 1..n1 (basis states 0..n1-1).
inline Circuit synthesize_uniform_prefix(int n, std::size_t n1) {
    require(n1 >= 1 && n1 <= (std::size_t(1) << n), "prefix size out of range");
    cvector c(n1, cdouble(1.0 / std::sqrt(double(n1))));
    c.resize(std::size_t(1) << n, cdouble(0.0));
    return synthesize_state_prep(AmplitudeVector(std::move(c)));
}

// Controlled oracle: a fresh most-significant control qubit gates every gate
// of `u`; the result registers as one controlled-U (or controlled-U^dag) use.
inline Circuit controlled_oracle(const Circuit& u, bool dagger = false) {
    Circuit out(u.num_qubits() + 1);
    out.add_oracle(u.embedded(u.num_qubits() + 1, 1), dagger ? -1 : +1, {{0, true}});
    return out;
}

} // namespace ntca
