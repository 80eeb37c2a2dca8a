// Block-encodings: a circuit whose top-left block (ancillas projected to |0>)
// encodes a matrix, with scale alpha, ancilla count a and error bound epsilon.
// Ancillas are always the first (most significant) `ancillas` qubits.

#pragma once

#include <Eigen/Dense>

#include "ntca/core/simulator.hpp"

namespace ntca {

struct BlockEncoding {
    Circuit circuit;
    double alpha = 1.0;
    int ancillas = 0;
    double epsilon = 0.0;
    int system_width = 0;

    int total_width() const { return ancillas + system_width; }
};

// alpha * (<0|^a ⊗ I) U (|0>^a ⊗ I), computed column by column.
inline Eigen::MatrixXcd extract_block(const BlockEncoding& be, int cap = kDefaultDenseCap) {
    require(be.circuit.num_qubits() == be.total_width(), "block-encoding width mismatch");
    require(be.total_width() <= cap, "block-encoding width above dense cap");
    const std::size_t sys_dim = std::size_t(1) << be.system_width;
    Eigen::MatrixXcd block(sys_dim, sys_dim);
    for (std::size_t col = 0; col < sys_dim; ++col) {
        QuantumState s = QuantumState::basis(RegisterLayout::flat(be.total_width()), col);
        run_circuit_in_place(s, be.circuit);
        for (std::size_t row = 0; row < sys_dim; ++row) block(row, col) = be.alpha * s[row];
    }
    return block;
}

inline double hermiticity_residual(const Eigen::MatrixXcd& m) {
    return (m - m.adjoint().eval()).norm();
}

// Max |ancilla-0 block of U  -  A/alpha| entry-wise deviation, for desk checks.
inline double block_encoding_residual(const BlockEncoding& be, const Eigen::MatrixXcd& a,
                                      int cap = kDefaultDenseCap) {
    Eigen::MatrixXcd block = extract_block(be, cap);
    return (block - a).norm();
}

} // namespace ntca
