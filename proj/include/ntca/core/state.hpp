// Dense statevector over named qubit registers.
//
// Qubit ordering convention (fixed project-wide): registers are declared
// most-significant first, and qubit 0 is the most significant bit of the
// amplitude index. Basis label j on a width-w register means the register
// qubits read j in binary, MSB first.

#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ntca/core/types.hpp"

namespace ntca {

struct Register {
    std::string name;
    int width = 0;
};

class RegisterLayout {
public:
    RegisterLayout() = default;
    RegisterLayout(std::initializer_list<Register> regs) : regs_(regs) { validate(); }
    explicit RegisterLayout(std::vector<Register> regs) : regs_(std::move(regs)) { validate(); }

    // Single anonymous register covering `width` qubits.
    static RegisterLayout flat(int width) { return RegisterLayout({{"q", width}}); }

    const std::vector<Register>& registers() const { return regs_; }

    int total_width() const {
        int w = 0;
        for (const auto& r : regs_) w += r.width;
        return w;
    }

    int offset(const std::string& name) const {
        int off = 0;
        for (const auto& r : regs_) {
            if (r.name == name) return off;
            off += r.width;
        }
        throw PreconditionError("unknown register: " + name);
    }

    int width(const std::string& name) const {
        for (const auto& r : regs_) {
            if (r.name == name) return r.width;
        }
        throw PreconditionError("unknown register: " + name);
    }

    std::vector<int> qubits(const std::string& name) const {
        int off = offset(name), w = width(name);
        std::vector<int> out(w);
        std::iota(out.begin(), out.end(), off);
        return out;
    }

    // Layout with extra registers prepended (more significant).
    RegisterLayout prefixed(std::initializer_list<Register> front) const {
        std::vector<Register> all(front);
        all.insert(all.end(), regs_.begin(), regs_.end());
        return RegisterLayout(std::move(all));
    }

private:
    void validate() const {
        for (std::size_t i = 0; i < regs_.size(); ++i) {
            require(regs_[i].width >= 0, "negative register width");
            require(!regs_[i].name.empty(), "empty register name");
            for (std::size_t j = i + 1; j < regs_.size(); ++j)
                require(regs_[i].name != regs_[j].name, "duplicate register name: " + regs_[i].name);
        }
    }

    std::vector<Register> regs_;
};

class QuantumState {
public:
    QuantumState() = default;

    explicit QuantumState(RegisterLayout layout)
        : layout_(std::move(layout)), amps_(std::size_t(1) << layout_.total_width(), cdouble(0.0)) {
        amps_[0] = 1.0;
    }

    QuantumState(RegisterLayout layout, cvector amps) : layout_(std::move(layout)), amps_(std::move(amps)) {
        require(amps_.size() == (std::size_t(1) << layout_.total_width()), "amplitude vector size mismatch");
    }

    static QuantumState zero(int num_qubits) { return QuantumState(RegisterLayout::flat(num_qubits)); }

    static QuantumState basis(RegisterLayout layout, std::size_t index) {
        QuantumState s(std::move(layout));
        require(index < s.amps_.size(), "basis index out of range");
        s.amps_[0] = 0.0;
        s.amps_[index] = 1.0;
        return s;
    }

    const RegisterLayout& layout() const { return layout_; }
    int num_qubits() const { return layout_.total_width(); }
    std::size_t dim() const { return amps_.size(); }
    const cvector& amplitudes() const { return amps_; }
    cvector& amplitudes() { return amps_; }
    const cdouble& operator[](std::size_t i) const { return amps_[i]; }
    cdouble& operator[](std::size_t i) { return amps_[i]; }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    void normalize() {
        double n = std::sqrt(norm_sq());
        if (n < kProjectionFloor) throw NumericalError("cannot normalize a null state");
        for (auto& a : amps_) a /= n;
    }

    cdouble inner_product(const QuantumState& other) const {
        require(dim() == other.dim(), "state width mismatch");
        cdouble s(0.0);
        for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
        return s;
    }

private:
    RegisterLayout layout_;
    cvector amps_;
};

// |<a|b>|^2.
inline double fidelity(const QuantumState& a, const QuantumState& b) {
    return std::norm(a.inner_product(b));
}

} // namespace ntca
