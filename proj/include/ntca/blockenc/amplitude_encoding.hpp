// Block-encoding of amplitudes.
//
// From a state-preparation oracle U (U|0> = sum_k c_k |k-1>) we build
//   W        — entangles each address label k with the data-register state
//              (sum_j c_j|j> ± |k>)/2 tagged by ancilla B,
//   G        — the reflection product W S0 W^dag Z_B, whose invariant 2x2
//              subspace for label k has eigenvalues -x_k ± i sqrt(1-x_k^2),
//   G-tilde  — a one-ancilla combiner whose top-left block is -(G+G^dag)/2,
//              a Hermitian matrix with eigenvalues {x_k} (REAL_PART) or
//              {y_k} (IMAG_PART, where W gains an S on B).
//
// Register order, most significant first: [ad (n_label)][da (data)][B (1)],
// with the combiner ancilla prepended for G-tilde. The whole G-tilde costs
// exactly four applications of the U family: {U, cU^dag} inside W and
// {U^dag, cU} inside W^dag; the two reflections S0 from the controlled G and
// G^dag branches merge, so no further oracle calls appear.

#pragma once

#include "ntca/blockenc/block_encoding.hpp"
#include "ntca/oracle/state_prep.hpp"

#include <Eigen/Eigenvalues>

namespace ntca {

enum class AmplitudePart { RealPart, ImagPart };

// A state-preparation oracle whose basis labels may be embedded in a wider
// data register (used when a composed circuit acts as the oracle). For a
// plain vector oracle the label spans the whole register. cost_u/cost_udag
// record the data-oracle calls one application stands for, so layered
// compositions keep counting uses of the innermost oracle.
struct StatePrepOracle {
    Circuit circuit;      // width = data_width
    int data_width = 0;   // n_da
    int label_width = 0;  // n_ad
    int label_offset = 0; // label bit positions inside the data register
    long cost_u = 1;
    long cost_udag = 0;

    static StatePrepOracle from_vector(const AmplitudeVector& c) {
        Circuit u = synthesize_state_prep(c);
        return {std::move(u), c.num_qubits(), c.num_qubits(), 0, 1, 0};
    }

    static StatePrepOracle from_circuit(Circuit u, int label_width, int label_offset) {
        const int w = u.num_qubits();
        require(label_offset >= 0 && label_offset + label_width <= w, "label range out of bounds");
        long cu = u.query_count_u(), cud = u.query_count_udag();
        if (cu == 0 && cud == 0) cu = 1;
        return {std::move(u), w, label_width, label_offset, cu, cud};
    }

    std::size_t label_count() const { return std::size_t(1) << label_width; }
};

struct WFrame {
    RegisterLayout layout; // [ad][da][B]
    int b_qubit = 0;
    int total = 0;
};

inline WFrame w_frame(const StatePrepOracle& o) {
    WFrame f;
    f.layout = RegisterLayout({{"ad", o.label_width}, {"da", o.data_width}, {"B", 1}});
    f.total = f.layout.total_width();
    f.b_qubit = f.total - 1;
    return f;
}

inline Circuit build_w(const StatePrepOracle& o, AmplitudePart kind) {
    const WFrame f = w_frame(o);
    const int da_off = o.label_width;
    Circuit w(f.total);

    Circuit u_wide = o.circuit.embedded(f.total, da_off);
    w.add_oracle(u_wide, +1, {}, "oracle", o.cost_u, o.cost_udag);
    w.add(gate_h(f.b_qubit));
    if (kind == AmplitudePart::ImagPart) w.add(gate_s(f.b_qubit));
    w.add_oracle(u_wide, -1, {{f.b_qubit, true}}, "oracle", o.cost_u, o.cost_udag);
    for (int j = 0; j < o.label_width; ++j) {
        int ad_bit = j;
        int da_bit = da_off + o.label_offset + j;
        w.add(gate_x(da_bit, {{ad_bit, true}, {f.b_qubit, true}}));
    }
    w.add(gate_h(f.b_qubit));
    return w;
}

// Reflection about |0...0> on the data register and B: I - 2|0><0|_{da,B}.
inline Gate reflection_s0(const WFrame& f, int offset = 0) {
    std::vector<ControlSpec> zeros;
    for (int q = f.layout.offset("da"); q < f.total; ++q) zeros.push_back({offset + q, false});
    return gate_gphase(M_PI, std::move(zeros));
}

inline Circuit build_g(const StatePrepOracle& o, AmplitudePart kind) {
    const WFrame f = w_frame(o);
    Circuit w = build_w(o, kind);
    Circuit g(f.total);
    g.add(gate_z(f.b_qubit));
    g.add(w.adjoint());
    g.add(reflection_s0(f));
    g.add(w);
    return g;
}

// One-ancilla combiner block-encoding -(G+G^dag)/2. The combiner qubit is
// qubit 0; the controlled-G / controlled-G^dag pair shares its W conjugation,
// leaving a single W ... W^dag sandwich and per-branch Z_B gates.
inline BlockEncoding build_gtilde(const StatePrepOracle& o, AmplitudePart kind) {
    const WFrame f = w_frame(o);
    const int total = f.total + 1;
    const int g_anc = 0;
    const int b_q = 1 + f.b_qubit;

    Circuit w = build_w(o, kind).embedded(total, 1);

    Circuit c(total);
    c.add(gate_h(g_anc));
    c.add(gate_z(b_q, {{g_anc, true}}));
    c.add(w.adjoint());
    c.add(reflection_s0(f, 1));
    c.add(w);
    c.add(gate_z(b_q, {{g_anc, false}}));
    c.add(gate_h(g_anc));
    c.add(gate_gphase(M_PI));

    BlockEncoding be;
    be.circuit = std::move(c);
    be.alpha = 1.0;
    be.ancillas = 1;
    be.epsilon = 0.0;
    be.system_width = f.total;
    return be;
}

// W|k>_ad|0>_da,B — an eigenvector of -(G+G^dag)/2 with eigenvalue x_k
// (or y_k for the ImagPart frame). k in 1..label_count.
inline QuantumState eigenstate_for_k(const StatePrepOracle& o, std::size_t k, AmplitudePart kind) {
    require(k >= 1 && k <= o.label_count(), "label k out of range");
    const WFrame f = w_frame(o);
    const std::size_t index = (k - 1) << (o.data_width + 1);
    QuantumState s = QuantumState::basis(f.layout, index);
    run_circuit_in_place(s, build_w(o, kind));
    return s;
}

struct AmplitudeSpectrum {
    std::vector<double> values;
    AmplitudePart kind = AmplitudePart::RealPart;
};

inline AmplitudeSpectrum block_spectrum(const BlockEncoding& be, AmplitudePart kind,
                                        int cap = kDefaultDenseCap) {
    Eigen::MatrixXcd block = extract_block(be, cap);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(block);
    AmplitudeSpectrum sp;
    sp.kind = kind;
    sp.values.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
    return sp;
}

// Multiset inclusion: every target matched to a distinct spectrum value.
inline bool spectrum_contains(const std::vector<double>& spectrum, const std::vector<double>& targets,
                              double tol) {
    std::vector<bool> used(spectrum.size(), false);
    for (double t : targets) {
        bool found = false;
        for (std::size_t i = 0; i < spectrum.size(); ++i) {
            if (!used[i] && std::abs(spectrum[i] - t) <= tol) {
                used[i] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

} // namespace ntca
