// Gate descriptors. Every gate is a small named unitary (or an opaque dense
// block) plus arbitrary control qubits with per-control polarity. A gate with
// kind GPhase has no target: it multiplies the matched subspace by e^{i*theta},
// which keeps global phases meaningful under controlled composition.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ntca/core/types.hpp"

namespace ntca {

enum class GateKind { X, Z, H, S, Sdg, Ry, Rz, Phase, GPhase, Dense };

struct ControlSpec {
    int qubit = 0;
    bool value = true; // true: active on |1>, false: active on |0>
};

struct Gate {
    GateKind kind = GateKind::X;
    std::vector<double> params;
    std::vector<int> targets;
    std::vector<ControlSpec> controls;
    // Dense payload; shared so cached subcircuit matrices are not copied.
    std::shared_ptr<const Eigen::MatrixXcd> dense;
    std::string label;
    // Oracle bookkeeping carried by the gate itself so that composing,
    // controlling and inverting circuits keeps query counters truthful.
    long oracle_u = 0;
    long oracle_udag = 0;
};

inline const char* gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::X: return "x";
        case GateKind::Z: return "z";
        case GateKind::H: return "h";
        case GateKind::S: return "s";
        case GateKind::Sdg: return "sdg";
        case GateKind::Ry: return "ry";
        case GateKind::Rz: return "rz";
        case GateKind::Phase: return "phase";
        case GateKind::GPhase: return "gphase";
        case GateKind::Dense: return "dense";
    }
    return "?";
}

inline std::optional<GateKind> gate_kind_from_name(const std::string& s) {
    for (GateKind k : {GateKind::X, GateKind::Z, GateKind::H, GateKind::S, GateKind::Sdg,
                       GateKind::Ry, GateKind::Rz, GateKind::Phase, GateKind::GPhase,
                       GateKind::Dense}) {
        if (s == gate_kind_name(k)) return k;
    }
    return std::nullopt;
}

// 2x2 matrix of a single-target kind (not valid for GPhase/Dense).
inline Eigen::Matrix2cd single_qubit_matrix(GateKind kind, const std::vector<double>& params) {
    const cdouble i(0.0, 1.0);
    Eigen::Matrix2cd m;
    switch (kind) {
        case GateKind::X: m << 0, 1, 1, 0; return m;
        case GateKind::Z: m << 1, 0, 0, -1; return m;
        case GateKind::H: m << 1, 1, 1, -1; return m / std::sqrt(2.0);
        case GateKind::S: m << 1, 0, 0, i; return m;
        case GateKind::Sdg: m << 1, 0, 0, -i; return m;
        case GateKind::Ry: {
            require(params.size() == 1, "ry requires one angle");
            double t = params[0] / 2.0;
            m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
            return m;
        }
        case GateKind::Rz: {
            require(params.size() == 1, "rz requires one angle");
            double t = params[0] / 2.0;
            m << std::exp(-i * t), 0, 0, std::exp(i * t);
            return m;
        }
        case GateKind::Phase: {
            require(params.size() == 1, "phase requires one angle");
            m << 1, 0, 0, std::exp(i * params[0]);
            return m;
        }
        default: break;
    }
    throw PreconditionError("gate kind has no 2x2 matrix");
}

inline Gate adjoint(const Gate& g) {
    Gate out = g;
    std::swap(out.oracle_u, out.oracle_udag);
    switch (g.kind) {
        case GateKind::X:
        case GateKind::Z:
        case GateKind::H:
            break;
        case GateKind::S: out.kind = GateKind::Sdg; break;
        case GateKind::Sdg: out.kind = GateKind::S; break;
        case GateKind::Ry:
        case GateKind::Rz:
        case GateKind::Phase:
        case GateKind::GPhase:
            out.params[0] = -g.params[0];
            break;
        case GateKind::Dense:
            out.dense = std::make_shared<Eigen::MatrixXcd>(g.dense->adjoint());
            break;
    }
    return out;
}

// -- compact constructors ----------------------------------------------------

inline Gate make_gate(GateKind kind, std::vector<int> targets, std::vector<double> params = {},
                      std::vector<ControlSpec> controls = {}) {
    Gate g;
    g.kind = kind;
    g.targets = std::move(targets);
    g.params = std::move(params);
    g.controls = std::move(controls);
    return g;
}

inline Gate gate_x(int t, std::vector<ControlSpec> c = {}) { return make_gate(GateKind::X, {t}, {}, std::move(c)); }
inline Gate gate_z(int t, std::vector<ControlSpec> c = {}) { return make_gate(GateKind::Z, {t}, {}, std::move(c)); }
inline Gate gate_h(int t, std::vector<ControlSpec> c = {}) { return make_gate(GateKind::H, {t}, {}, std::move(c)); }
inline Gate gate_s(int t, std::vector<ControlSpec> c = {}) { return make_gate(GateKind::S, {t}, {}, std::move(c)); }
inline Gate gate_sdg(int t, std::vector<ControlSpec> c = {}) { return make_gate(GateKind::Sdg, {t}, {}, std::move(c)); }
inline Gate gate_ry(double th, int t, std::vector<ControlSpec> c = {}) { return make_gate(GateKind::Ry, {t}, {th}, std::move(c)); }
inline Gate gate_rz(double th, int t, std::vector<ControlSpec> c = {}) { return make_gate(GateKind::Rz, {t}, {th}, std::move(c)); }
inline Gate gate_phase(double th, int t, std::vector<ControlSpec> c = {}) { return make_gate(GateKind::Phase, {t}, {th}, std::move(c)); }
inline Gate gate_gphase(double th, std::vector<ControlSpec> c = {}) { return make_gate(GateKind::GPhase, {}, {th}, std::move(c)); }

inline Gate gate_dense(std::shared_ptr<const Eigen::MatrixXcd> m, std::vector<int> targets,
                       std::vector<ControlSpec> c = {}, std::string label = {}) {
    require(m != nullptr, "dense gate requires a matrix");
    require(m->rows() == m->cols(), "dense gate matrix must be square");
    require(m->rows() == (1L << targets.size()), "dense gate dimension mismatch");
    Gate g = make_gate(GateKind::Dense, std::move(targets), {}, std::move(c));
    g.dense = std::move(m);
    g.label = std::move(label);
    return g;
}

} // namespace ntca
