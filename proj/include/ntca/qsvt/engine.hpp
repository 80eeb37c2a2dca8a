// Polynomial transformation of block-encoded Hermitian matrices.
//
// The chain alternates the encoding and its adjoint with projector-controlled
// phase rotations on one signal qubit; a conjugation qubit averages the phase
// sequence with its negation, which extracts the real part of the signal-
// processing polynomial. A second ladder qubit linearly combines two such
// branch pairs, covering
//   - complex targets whose real and imaginary coefficient parts each have
//     definite parity (branch B carries the imaginary part behind an i), and
//   - real targets of mixed parity (branches carry the even and odd halves).
// Branch chains of unequal length share every encoding application except the
// first, which runs controlled on the ladder qubit. A fully general complex
// mixed-parity target would need one more combination qubit than the three
// this layout spends, and is rejected.
//
// Ancilla layout, most significant first: [ladder?][conj][signal][input a][system].

#pragma once

#include "ntca/blockenc/block_encoding.hpp"
#include "ntca/qsvt/phase_solver.hpp"
#include "ntca/qsvt/reference.hpp"

namespace ntca {

struct QsvtCircuit {
    BlockEncoding encoding;    // resulting block-encoding of p(A/alpha)
    PolynomialSpec realized;   // the polynomial the block realizes
    double error_bound = 0.0;  // 4 d sqrt(eps/alpha) + dim * delta
    double solver_residual = 0.0;
    int extra_ancillas = 0;    // beyond the input encoding's ancillas
    int chain_length = 0;      // applications of the input encoding family
};

namespace qsvtdetail {

struct BranchPlan {
    bool used = false;
    PhaseFactors phases;   // for the positive-phase slot; negation derives the pair
    cdouble weight = 1.0;  // phase factor applied to this branch (e.g. i)
    int length = 0;        // chain length of this branch
};

// Shared-chain emission. Branch angle tables are indexed by rotation position
// p in 0..length; a branch shorter than the longest chain skips position D and
// its first application runs controlled on the ladder qubit.
struct LadderSpec {
    std::vector<BranchPlan> branches; // 1 (no ladder) or 2
    int ladder_qubit = -1;            // -1 when unused
    int conj_qubit = 0;
    int signal_qubit = 0;
};

inline Gate projector_flip(const BlockEncoding& be, int signal, int anc_offset) {
    std::vector<ControlSpec> zeros;
    for (int q = 0; q < be.ancillas; ++q) zeros.push_back({anc_offset + q, false});
    return gate_x(signal, std::move(zeros));
}

inline void emit_rotation(Circuit& c, const LadderSpec& plan, const BlockEncoding& be,
                          int anc_offset, int position) {
    const Gate flip = projector_flip(be, plan.signal_qubit, anc_offset);
    bool any = false;
    for (std::size_t b = 0; b < plan.branches.size(); ++b) {
        if (plan.branches[b].used && position <= plan.branches[b].length) any = true;
    }
    if (!any) return;
    c.add(flip);
    for (std::size_t b = 0; b < plan.branches.size(); ++b) {
        const BranchPlan& br = plan.branches[b];
        if (!br.used || position > br.length) continue;
        for (int conj = 0; conj < 2; ++conj) {
            std::vector<double> angles = qsp::projector_angles(br.phases.angles, conj == 1);
            std::vector<ControlSpec> ctl = {{plan.conj_qubit, conj == 1}};
            if (plan.ladder_qubit >= 0) ctl.push_back({plan.ladder_qubit, b == 1});
            c.add(gate_rz(2.0 * angles[position], plan.signal_qubit, std::move(ctl)));
        }
    }
    c.add(flip);
}

inline Circuit assemble_ladder(const BlockEncoding& be, const LadderSpec& plan, int extra) {
    const int total = extra + be.total_width();
    const int anc_offset = extra;
    Circuit chain_body = be.circuit.embedded(total, extra);
    Circuit chain_body_adj = chain_body.adjoint();

    int longest = 0;
    for (const auto& br : plan.branches) {
        if (br.used) longest = std::max(longest, br.length);
    }

    Circuit c(total);
    c.add(gate_h(plan.conj_qubit));
    if (plan.ladder_qubit >= 0) c.add(gate_h(plan.ladder_qubit));

    for (std::size_t b = 0; b < plan.branches.size(); ++b) {
        const BranchPlan& br = plan.branches[b];
        if (!br.used) continue;
        std::vector<ControlSpec> ctl;
        if (plan.ladder_qubit >= 0) ctl.push_back({plan.ladder_qubit, b == 1});
        double w_phase = std::arg(br.weight);
        double g_phase = qsp::global_phase_for_degree(br.length);
        if (w_phase + g_phase != 0.0) c.add(gate_gphase(w_phase + g_phase, ctl));
    }

    for (int position = longest; position >= 1; --position) {
        emit_rotation(c, plan, be, anc_offset, position);
        // Application j = position, alternating type by position index.
        const Circuit& body = (position % 2 == 1) ? chain_body : chain_body_adj;
        bool padded = false;
        for (const auto& br : plan.branches) {
            if (br.used && br.length < position) padded = true;
        }
        if (padded) {
            // Only full-length branches run this application.
            for (std::size_t b = 0; b < plan.branches.size(); ++b) {
                const BranchPlan& br = plan.branches[b];
                if (!br.used || br.length < position) continue;
                require(plan.ladder_qubit >= 0, "padded chain requires the ladder qubit");
                c.add(body.controlled({plan.ladder_qubit, b == 1}));
            }
        } else {
            c.add(body);
        }
    }
    emit_rotation(c, plan, be, anc_offset, 0);

    if (plan.ladder_qubit >= 0) c.add(gate_h(plan.ladder_qubit));
    c.add(gate_h(plan.conj_qubit));
    return c;
}

inline PolynomialSpec branch_target(const PolynomialSpec& piece, double scale, const char* tag) {
    PolynomialSpec t = poly_scale(piece, cdouble(scale, 0.0));
    t.label = piece.label + tag;
    return t;
}

} // namespace qsvtdetail

// Real definite-parity transformation: block = f(A/alpha) for the polynomial f
// the phases encode. Two extra ancillas (conjugation + signal).
inline QsvtCircuit assemble_qsvt(const BlockEncoding& be, const PhaseFactors& phases,
                                 const PolynomialSpec& target, double herm_tol = 1e-9,
                                 bool check_hermitian = true, int cap = kDefaultDenseCap) {
    if (check_hermitian && be.total_width() <= cap) {
        Eigen::MatrixXcd block = extract_block(be, cap);
        require(hermiticity_residual(block) <= herm_tol, "encoded block is not Hermitian");
    }
    qsvtdetail::LadderSpec plan;
    plan.branches.resize(1);
    plan.branches[0].used = true;
    plan.branches[0].phases = phases;
    plan.branches[0].length = phases.degree;
    plan.ladder_qubit = -1;
    plan.conj_qubit = 0;
    plan.signal_qubit = 1;

    QsvtCircuit out;
    out.encoding.circuit = qsvtdetail::assemble_ladder(be, plan, 2);
    out.encoding.alpha = 1.0;
    out.encoding.ancillas = be.ancillas + 2;
    out.encoding.system_width = be.system_width;
    out.realized = target;
    out.solver_residual = phases.residual;
    out.chain_length = phases.degree;
    out.extra_ancillas = 2;
    const double dim = double(std::size_t(1) << be.system_width);
    out.error_bound = 4.0 * phases.degree * std::sqrt(be.epsilon / be.alpha) + dim * phases.residual;
    out.encoding.epsilon = out.error_bound;
    return out;
}

// Complex polynomial transformation with |p| <= 1/4: block = p(A/alpha),
// three extra ancillas. `force_ladder` keeps the three-qubit layout even for
// targets the two-qubit path could satisfy, so register maps stay uniform.
inline QsvtCircuit complex_poly_block(const BlockEncoding& be, const PolynomialSpec& p, double tol,
                                      bool force_ladder = true, std::uint64_t seed = 0,
                                      int degree_cap = kPhaseDegreeCap) {
    auto [re, im] = complex_split(p);
    // Component-wise quarter bound: each branch target is doubled and must
    // stay representable (sup <= 1). This admits every |p| <= 1/4 input.
    require(std::max(re.measured_sup(), im.measured_sup()) <= 0.25 + 1e-9,
            "polynomial sup-norm exceeds 1/4");

    if (!force_ladder && im.is_zero() && re.parity != Parity::Mixed) {
        PhaseFactors ph = solve_phase_factors_at_degree(re, re.is_zero() ? 1 : re.degree, tol, seed);
        return assemble_qsvt(be, ph, re, 1e-9, false);
    }

    qsvtdetail::LadderSpec plan;
    plan.branches.resize(2);
    plan.ladder_qubit = 0;
    plan.conj_qubit = 1;
    plan.signal_qubit = 2;

    PolynomialSpec target_a, target_b;
    cdouble weight_b(1.0);
    if (re.parity != Parity::Mixed && im.parity != Parity::Mixed) {
        // branch A carries 2*Re p, branch B carries 2*Im p behind an i.
        target_a = qsvtdetail::branch_target(re, 2.0, ":reb");
        target_b = qsvtdetail::branch_target(im, 2.0, ":imb");
        weight_b = cdouble(0.0, 1.0);
    } else if (im.is_zero()) {
        auto [ev, od] = parity_split(re);
        target_a = qsvtdetail::branch_target(ev, 2.0, ":evb");
        target_b = qsvtdetail::branch_target(od, 2.0, ":odb");
    } else if (re.is_zero()) {
        // Pure-imaginary mixed parity: parity ladder with the i hoisted into
        // both branch weights.
        auto [ev, od] = parity_split(im);
        target_a = qsvtdetail::branch_target(ev, 2.0, ":evb");
        target_b = qsvtdetail::branch_target(od, 2.0, ":odb");
        plan.branches[0].weight = cdouble(0.0, 1.0);
        weight_b = cdouble(0.0, 1.0);
    } else {
        throw PreconditionError(
            "complex polynomial with mixed-parity real and imaginary parts does not fit the "
            "three-ancilla layout; split it or use separate transformations");
    }

    // Chain lengths: same parity solves at a unified degree, opposite parity
    // pads the shorter branch by one controlled application.
    auto deg_of = [](const PolynomialSpec& t, int fallback) {
        return t.is_zero() ? fallback : t.degree;
    };
    int da = deg_of(target_a, -1), db = deg_of(target_b, -1);
    int longest = std::max({da, db, 1});
    auto unify = [&](int d) {
        if (d < 0) return longest; // zero target: ride along at full length
        return ((longest - d) % 2 == 0) ? longest : longest - 1;
    };
    int la = unify(da), lb = unify(db);
    require(la <= degree_cap && lb <= degree_cap, "degree above the configured cap");

    double delta = 0.0;
    auto solve = [&](const PolynomialSpec& t, int length) {
        PhaseFactors ph = solve_phase_factors_at_degree(t, length, tol, seed);
        delta = std::max(delta, ph.residual);
        return ph;
    };
    plan.branches[0].used = true;
    plan.branches[0].phases = solve(target_a, la);
    plan.branches[0].length = la;
    plan.branches[1].used = true;
    plan.branches[1].phases = solve(target_b, lb);
    plan.branches[1].length = lb;
    plan.branches[1].weight = weight_b;

    QsvtCircuit out;
    out.encoding.circuit = qsvtdetail::assemble_ladder(be, plan, 3);
    out.encoding.alpha = 1.0;
    out.encoding.ancillas = be.ancillas + 3;
    out.encoding.system_width = be.system_width;
    out.realized = p;
    out.solver_residual = delta;
    out.chain_length = std::max(la, lb);
    out.extra_ancillas = 3;
    const double dim = double(std::size_t(1) << be.system_width);
    out.error_bound =
        4.0 * out.chain_length * std::sqrt(be.epsilon / be.alpha) + dim * delta;
    out.encoding.epsilon = out.error_bound;
    return out;
}

} // namespace ntca
