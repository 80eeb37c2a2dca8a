// Gate application, circuit execution, projection and dense extraction.

#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "ntca/core/circuit.hpp"
#include "ntca/core/state.hpp"

namespace ntca {

namespace detail {

// Qubit q addresses bit (m-1-q) of the amplitude index.
inline std::size_t index_bit(int num_qubits, int qubit) {
    return std::size_t(1) << (num_qubits - 1 - qubit);
}

struct ControlMask {
    std::size_t mask = 0;
    std::size_t value = 0;
    bool matches(std::size_t idx) const { return (idx & mask) == value; }
};

inline ControlMask control_mask(int num_qubits, const std::vector<ControlSpec>& controls) {
    ControlMask cm;
    for (const auto& c : controls) {
        std::size_t b = index_bit(num_qubits, c.qubit);
        cm.mask |= b;
        if (c.value) cm.value |= b;
    }
    return cm;
}

inline void apply_single(cvector& amps, int m, const Gate& g) {
    const Eigen::Matrix2cd u = single_qubit_matrix(g.kind, g.params);
    const std::size_t stride = index_bit(m, g.targets[0]);
    const ControlMask cm = control_mask(m, g.controls);
    const std::size_t dim = amps.size();
    const cdouble a = u(0, 0), b = u(0, 1), c = u(1, 0), d = u(1, 1);
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & stride) continue;
        if (!cm.matches(base)) continue;
        const std::size_t i1 = base | stride;
        const cdouble a0 = amps[base], a1 = amps[i1];
        amps[base] = a * a0 + b * a1;
        amps[i1] = c * a0 + d * a1;
    }
}

inline void apply_gphase(cvector& amps, int m, const Gate& g) {
    const cdouble phase = std::exp(cdouble(0.0, g.params[0]));
    const ControlMask cm = control_mask(m, g.controls);
    if (cm.mask == 0) {
        for (auto& a : amps) a *= phase;
        return;
    }
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (cm.matches(i)) amps[i] *= phase;
    }
}

inline bool targets_contiguous(const std::vector<int>& t) {
    for (std::size_t j = 1; j < t.size(); ++j) {
        if (t[j] != t[j - 1] + 1) return false;
    }
    return true;
}

inline void apply_dense(cvector& amps, int m, const Gate& g) {
    const int k = int(g.targets.size());
    const std::size_t block = std::size_t(1) << k;
    const Eigen::MatrixXcd& u = *g.dense;

    if (g.controls.empty() && targets_contiguous(g.targets)) {
        // Index splits as (outer, gate block, inner); one GEMM per outer slice.
        const int low = m - g.targets.back() - 1;
        const std::size_t inner = std::size_t(1) << low;
        const std::size_t slice = block * inner;
        const std::size_t outer = amps.size() / slice;
        using RowMat = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        for (std::size_t o = 0; o < outer; ++o) {
            Eigen::Map<RowMat> seg(amps.data() + o * slice, block, inner);
            seg = (u * seg).eval();
        }
        return;
    }

    std::vector<std::size_t> spread(block, 0);
    for (std::size_t l = 0; l < block; ++l) {
        for (int j = 0; j < k; ++j) {
            if ((l >> (k - 1 - j)) & 1) spread[l] |= index_bit(m, g.targets[j]);
        }
    }
    std::size_t tmask = 0;
    for (int t : g.targets) tmask |= index_bit(m, t);
    const ControlMask cm = control_mask(m, g.controls);

    Eigen::VectorXcd in(block), out(block);
    for (std::size_t base = 0; base < amps.size(); ++base) {
        if (base & tmask) continue;
        if (!cm.matches(base)) continue;
        for (std::size_t l = 0; l < block; ++l) in(l) = amps[base | spread[l]];
        out.noalias() = u * in;
        for (std::size_t l = 0; l < block; ++l) amps[base | spread[l]] = out(l);
    }
}

} // namespace detail

inline void apply_gate_in_place(QuantumState& state, const Gate& g) {
    const int m = state.num_qubits();
    auto check = [&](int q) { require(q >= 0 && q < m, "qubit index out of range"); };
    for (int t : g.targets) check(t);
    for (const auto& c : g.controls) {
        check(c.qubit);
        for (int t : g.targets) require(t != c.qubit, "overlapping target/control");
    }
    switch (g.kind) {
        case GateKind::GPhase: detail::apply_gphase(state.amplitudes(), m, g); break;
        case GateKind::Dense: detail::apply_dense(state.amplitudes(), m, g); break;
        default: detail::apply_single(state.amplitudes(), m, g); break;
    }
}

inline QuantumState apply_gate(const QuantumState& state, const Gate& g) {
    QuantumState out = state;
    apply_gate_in_place(out, g);
    return out;
}

inline void run_circuit_in_place(QuantumState& state, const Circuit& circuit) {
    require(circuit.num_qubits() == state.num_qubits(), "circuit/state width mismatch");
    for (const Gate& g : circuit.gates()) apply_gate_in_place(state, g);
}

inline QuantumState run_circuit(const QuantumState& initial, const Circuit& circuit) {
    QuantumState out = initial;
    run_circuit_in_place(out, circuit);
    return out;
}

struct ProjectionOutcome {
    QuantumState post_state;
    double probability = 0.0;
};

// Projects `qubits` onto the bit string `outcome` (MSB-first over the subset),
// renormalizing the survivor. Throws on analytically-zero branches.
inline ProjectionOutcome project(const QuantumState& state, const std::vector<int>& qubits,
                                 const std::vector<bool>& outcome, double floor = kProjectionFloor) {
    require(qubits.size() == outcome.size(), "projection outcome length mismatch");
    const int m = state.num_qubits();
    std::vector<ControlSpec> specs;
    specs.reserve(qubits.size());
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        require(qubits[i] >= 0 && qubits[i] < m, "projection qubit out of range");
        specs.push_back({qubits[i], bool(outcome[i])});
    }
    const detail::ControlMask cm = detail::control_mask(m, specs);

    ProjectionOutcome result;
    result.post_state = state;
    double p = 0.0;
    auto& amps = result.post_state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (cm.matches(i)) {
            p += std::norm(amps[i]);
        } else {
            amps[i] = 0.0;
        }
    }
    result.probability = p;
    if (p < floor) throw NumericalError("projection onto a zero-probability outcome");
    const double inv = 1.0 / std::sqrt(p);
    for (auto& a : amps) a *= inv;
    return result;
}

inline ProjectionOutcome project_register(const QuantumState& state, const std::string& reg,
                                          std::size_t value, double floor = kProjectionFloor) {
    const auto qubits = state.layout().qubits(reg);
    std::vector<bool> bits(qubits.size());
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        bits[i] = (value >> (qubits.size() - 1 - i)) & 1;
    }
    return project(state, qubits, bits, floor);
}

// Probability of an outcome without collapsing (no floor applied).
inline double outcome_probability(const QuantumState& state, const std::vector<int>& qubits,
                                  const std::vector<bool>& outcome) {
    std::vector<ControlSpec> specs;
    for (std::size_t i = 0; i < qubits.size(); ++i) specs.push_back({qubits[i], bool(outcome[i])});
    const detail::ControlMask cm = detail::control_mask(state.num_qubits(), specs);
    double p = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (cm.matches(i)) p += std::norm(state[i]);
    }
    return p;
}

// Full 2^m x 2^m matrix of a circuit, column by column.
inline Eigen::MatrixXcd dense_unitary(const Circuit& circuit, int cap = kDefaultDenseCap) {
    require(circuit.num_qubits() <= cap, "circuit width above dense cap");
    const std::size_t dim = std::size_t(1) << circuit.num_qubits();
    Eigen::MatrixXcd u(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        QuantumState s = QuantumState::basis(RegisterLayout::flat(circuit.num_qubits()), col);
        run_circuit_in_place(s, circuit);
        for (std::size_t row = 0; row < dim; ++row) u(row, col) = s[row];
    }
    return u;
}

inline double unitarity_residual(const Eigen::MatrixXcd& u) {
    return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).norm();
}

} // namespace ntca
