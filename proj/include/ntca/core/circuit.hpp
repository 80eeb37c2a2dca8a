// Ordered gate sequences with oracle-query counters.
//
// Counters count applications of the state-preparation oracle and its adjoint,
// controlled or not. They are attached when an oracle subcircuit is appended
// and propagate additively under composition, swap under adjoint, and survive
// controlling, so a composite circuit always reports the number of oracle uses
// a single application of it performs.

#pragma once

#include <utility>

#include "ntca/core/gate.hpp"

namespace ntca {

class Circuit {
public:
    Circuit() = default;
    explicit Circuit(int num_qubits) : num_qubits_(num_qubits) {
        require(num_qubits >= 0, "negative qubit count");
    }

    int num_qubits() const { return num_qubits_; }
    const std::vector<Gate>& gates() const { return gates_; }
    long query_count_u() const { return query_count_u_; }
    long query_count_udag() const { return query_count_udag_; }
    long query_count_total() const { return query_count_u_ + query_count_udag_; }
    std::size_t size() const { return gates_.size(); }

    void add(Gate g) {
        validate_gate(g);
        query_count_u_ += g.oracle_u;
        query_count_udag_ += g.oracle_udag;
        gates_.push_back(std::move(g));
    }

    // Appends another circuit of the same width.
    void add(const Circuit& other) {
        require(other.num_qubits_ == num_qubits_, "circuit width mismatch in composition");
        gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
        query_count_u_ += other.query_count_u_;
        query_count_udag_ += other.query_count_udag_;
    }

    // Appends `oracle`, tagging it as one use of U (direction=+1) or U^dag
    // (direction=-1). The subcircuit's own tags are dropped and replaced by a
    // single tag carrying (cost_u, cost_udag) — the data-oracle calls one
    // application of this subcircuit stands for (1,0 for a bare oracle; the
    // accumulated totals for composed ones). The adjoint direction swaps them.
    void add_oracle(const Circuit& oracle, int direction, std::vector<ControlSpec> extra_controls = {},
                    const std::string& label = {}, long cost_u = 1, long cost_udag = 0) {
        require(oracle.num_qubits_ == num_qubits_, "oracle width mismatch");
        require(direction == 1 || direction == -1, "oracle direction must be +/-1");
        bool first = true;
        const Circuit body = (direction == 1) ? oracle : oracle.adjoint();
        const long tag_u = (direction == 1) ? cost_u : cost_udag;
        const long tag_udag = (direction == 1) ? cost_udag : cost_u;
        for (Gate g : body.gates_) {
            g.oracle_u = 0;
            g.oracle_udag = 0;
            for (const auto& c : extra_controls) g.controls.push_back(c);
            if (first) {
                g.oracle_u = tag_u;
                g.oracle_udag = tag_udag;
                if (!label.empty()) g.label = label;
                first = false;
            }
            add(std::move(g));
        }
        if (first) {
            // Empty oracle body: keep the count with a no-op phase.
            Gate g = gate_gphase(0.0);
            g.oracle_u = tag_u;
            g.oracle_udag = tag_udag;
            add(std::move(g));
        }
    }

    Circuit adjoint() const {
        Circuit out(num_qubits_);
        out.gates_.reserve(gates_.size());
        for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) out.add(ntca::adjoint(*it));
        return out;
    }

    // Every gate gains the extra control; GPhase gates become controlled
    // phases, so relative phases between branches stay correct.
    Circuit controlled(ControlSpec c) const {
        require(c.qubit >= 0 && c.qubit < num_qubits_, "control qubit out of range");
        Circuit out(num_qubits_);
        out.gates_.reserve(gates_.size());
        for (Gate g : gates_) {
            for (const auto& t : g.targets) require(t != c.qubit, "control overlaps circuit target");
            g.controls.push_back(c);
            out.add(std::move(g));
        }
        return out;
    }

    // Re-indexes the circuit into a wider register, qubit q -> q + offset.
    Circuit embedded(int new_width, int offset) const {
        require(offset >= 0 && offset + num_qubits_ <= new_width, "embedding out of range");
        Circuit out(new_width);
        out.gates_.reserve(gates_.size());
        for (Gate g : gates_) {
            for (auto& t : g.targets) t += offset;
            for (auto& c : g.controls) c.qubit += offset;
            out.add(std::move(g));
        }
        return out;
    }

private:
    void validate_gate(const Gate& g) const {
        std::vector<int> seen;
        auto check = [&](int q) {
            require(q >= 0 && q < num_qubits_, "qubit index out of range");
            for (int s : seen) require(s != q, "overlapping target/control qubits");
            seen.push_back(q);
        };
        for (int t : g.targets) check(t);
        for (const auto& c : g.controls) check(c.qubit);
        if (g.kind == GateKind::GPhase) {
            require(g.targets.empty() && g.params.size() == 1, "malformed gphase");
        } else if (g.kind == GateKind::Dense) {
            require(!g.targets.empty() && g.dense != nullptr, "malformed dense gate");
        } else {
            require(g.targets.size() == 1, "gate requires exactly one target");
        }
    }

    int num_qubits_ = 0;
    std::vector<Gate> gates_;
    long query_count_u_ = 0;
    long query_count_udag_ = 0;
};

} // namespace ntca
