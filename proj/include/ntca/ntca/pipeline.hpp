// End-to-end nonlinear amplitude transformation.
//
// Full variant register order, most significant first:
//   [cb][qsvt (ladder,conj,signal)][g (encoding ancillas)][ad][da][B]
// The combiner qubit cb selects the real-part branch (P on W-prepared
// eigenstates) or the imaginary-part branch (Q on the S-dressed frame);
// projecting cb+qsvt+g onto zeros leaves sum_k (P'(x_k)+Q'(y_k)) |k> on the
// address register with prefactor 1/(8 gamma sqrt(N)). The real-only variant
// drops cb and the ladder qubit, uses the half-scale target P'/(2 gamma), and
// post-selects three ancillas with prefactor 1/(2 gamma sqrt(N)).
//
// Per-invocation oracle cost: each encoding application spends 4 U-family
// calls, so one full invocation registers 4(dp + dq) + 8 and the real variant
// 4d + 4 (the +4/+8 are the branch preparation/uncompute W pairs).

#pragma once

#include "ntca/blockenc/amplitude_encoding.hpp"
#include "ntca/ntca/amplify.hpp"
#include "ntca/qsvt/engine.hpp"

namespace ntca {

enum class NtcaVariant { Full, Partial, RealOnly };
enum class AmplifyMode { None, MeasureUntilSuccess, AmplitudeAmplify };

using ScalarTarget = std::function<cdouble(double)>;
using EigenvalueMap = std::function<double(double)>;

inline constexpr double kGammaHeadroom = 1e-3;

struct NtcaConfig {
    std::optional<AmplitudeVector> input;
    std::optional<StatePrepOracle> oracle; // overrides synthesis from `input`
    PolynomialSpec poly_p = poly_zero();
    PolynomialSpec poly_q = poly_zero();
    ScalarTarget target_p; // analytic targets; default: the polynomials themselves
    ScalarTarget target_q;
    double gamma = 0.0; // 0: headroom above the measured sups
    double epsilon = 1e-2;
    NtcaVariant variant = NtcaVariant::Full;
    std::size_t n1 = 0; // Partial prefix; 0 means the whole register
    AmplifyMode amplify = AmplifyMode::None;
    std::uint64_t seed = 0;
    double success_floor = 1e-12;
    double phase_tol = 0.0; // 0: eps / (16 gamma N)
};

struct ErrorLedger {
    double budget_approx = 0.0, budget_qsvt = 0.0, budget_part = 0.0, budget_combined = 0.0;
    double measured_approx_p = 0.0, measured_approx_q = 0.0;
    double measured_qsvt_p = 0.0, measured_qsvt_q = 0.0;
    double measured_part_p = 0.0, measured_part_q = 0.0;
    double measured_combined = 0.0;
    bool within_budget = false;
};

struct NtcaResult {
    QuantumState output_state; // address register only
    cvector b_values;          // rescaled, phase-aligned per-label readings
    double success_probability = 0.0;
    double predicted_success_probability = 0.0;
    long amplification_rounds = 1;
    long queries_controlled_u = 0;
    long queries_controlled_udag = 0;
    long queries_per_invocation = 0;
    double expected_amplified_queries = 0.0;
    double fidelity_vs_target = 0.0;
    double per_point_error_bound = 0.0; // eps / N
    double max_point_error = 0.0;
    ErrorLedger ledger;
    double gamma_used = 0.0;
    int flag_count = 0;
    int chain_degree_p = 0, chain_degree_q = 0;
};

// Amplitudes the oracle prepares on its embedded labels.
inline cvector oracle_amplitudes(const StatePrepOracle& o) {
    QuantumState s = run_circuit(QuantumState::zero(o.data_width), o.circuit);
    const int shift = o.data_width - o.label_offset - o.label_width;
    cvector c(o.label_count());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = s[k << shift];
    return c;
}

// One unitary whose ancilla-zero block multiplies each W-prepared eigenstate
// by P'(x_k)/(4 gamma).
inline QsvtCircuit build_p_unitary(const StatePrepOracle& o, const PolynomialSpec& p, double gamma,
                                   double delta, AmplitudePart part = AmplitudePart::RealPart,
                                   std::optional<BlockEncoding> be = {}, std::uint64_t seed = 0) {
    BlockEncoding enc = be ? *be : build_gtilde(o, part);
    PolynomialSpec scaled = rescale_quarter(p, gamma);
    return complex_poly_block(enc, scaled, delta, /*force_ladder=*/true, seed);
}

struct NtcaAssembly {
    StatePrepOracle oracle;
    Circuit circuit; // the preparation circuit, run from |0...0>
    RegisterLayout layout;
    int flag_count = 0;
    std::size_t n_terms = 0;  // superposition size N (or N1)
    std::size_t label_dim = 0;
    double gamma = 0.0;
    double rescale_factor = 0.0; // b_k = post-amplitude * rescale_factor
    int dp = 0, dq = 0;
    QsvtCircuit unit_p, unit_q;
    bool has_q = false;
};

namespace ntcadetail {

inline double resolve_gamma(const NtcaConfig& cfg) {
    double sup = std::max(cfg.poly_p.measured_sup(), cfg.poly_q.measured_sup());
    if (cfg.gamma > 0.0) {
        require(cfg.gamma >= sup - 1e-12, "gamma below the measured sup of P'/Q'");
        return cfg.gamma;
    }
    if (sup == 0.0) return 1.0;
    return sup * (1.0 + kGammaHeadroom);
}

inline Circuit address_prep(int total, int offset, int label_width, std::size_t n_terms) {
    Circuit prep(total);
    if (n_terms == (std::size_t(1) << label_width)) {
        for (int j = 0; j < label_width; ++j) prep.add(gate_h(offset + j));
    } else {
        prep.add(synthesize_uniform_prefix(label_width, n_terms).embedded(total, offset));
    }
    return prep;
}

// <v| C |v> with v = |0...0>_anc (x) sys, i.e. the block's diagonal value on a
// system vector that is an eigenvector.
inline cdouble block_expectation(const BlockEncoding& enc, const QuantumState& sys_state) {
    const int extra = enc.ancillas;
    RegisterLayout layout({{"anc", extra}, {"sys", enc.system_width}});
    cvector amps(std::size_t(1) << layout.total_width(), cdouble(0.0));
    for (std::size_t i = 0; i < sys_state.dim(); ++i) amps[i] = sys_state[i];
    QuantumState v(layout, amps);
    QuantumState out = run_circuit(v, enc.circuit);
    return v.inner_product(out);
}

} // namespace ntcadetail

inline NtcaAssembly build_ntca_assembly(const NtcaConfig& cfg,
                                        std::optional<BlockEncoding> be_p = {},
                                        std::optional<BlockEncoding> be_q = {}) {
    require(cfg.input.has_value() || cfg.oracle.has_value(), "no input vector or oracle given");
    NtcaAssembly a;
    a.oracle = cfg.oracle ? *cfg.oracle : StatePrepOracle::from_vector(*cfg.input);
    a.label_dim = a.oracle.label_count();
    a.n_terms = (cfg.n1 > 0) ? cfg.n1 : a.label_dim;
    require(a.n_terms >= 1 && a.n_terms <= a.label_dim, "label prefix out of range");
    a.gamma = ntcadetail::resolve_gamma(cfg);

    const double n = double(a.n_terms);
    const double tol = cfg.phase_tol > 0.0 ? cfg.phase_tol
                                           : cfg.epsilon / (16.0 * a.gamma * n);
    const WFrame frame = w_frame(a.oracle);

    if (cfg.variant == NtcaVariant::RealOnly) {
        require(cfg.poly_q.is_zero(), "the real-only variant has no Q branch");
        require(cfg.poly_p.is_real(), "the real-only variant requires a real polynomial");
        require(cfg.poly_p.parity != Parity::Mixed,
                "mixed-parity activation needs the full variant");
        BlockEncoding enc = be_p ? *be_p : build_gtilde(a.oracle, AmplitudePart::RealPart);
        PolynomialSpec half = poly_scale(cfg.poly_p, cdouble(1.0 / (2.0 * a.gamma), 0.0));
        half.label = cfg.poly_p.label + "/(2g)";
        PhaseFactors ph = solve_phase_factors_at_degree(
            half, half.is_zero() ? 1 : half.degree, tol, cfg.seed);
        a.unit_p = assemble_qsvt(enc, ph, half, 1e-9, false);
        a.dp = a.unit_p.chain_length;
        a.flag_count = a.unit_p.encoding.ancillas;

        const int total = a.unit_p.encoding.total_width();
        a.layout = RegisterLayout({{"qsvt", 2},
                                   {"g", enc.ancillas},
                                   {"ad", a.oracle.label_width},
                                   {"da", a.oracle.data_width},
                                   {"B", 1}});
        require(a.layout.total_width() == total, "register bookkeeping mismatch");
        Circuit w = build_w(a.oracle, AmplitudePart::RealPart).embedded(total, a.flag_count);

        Circuit c(total);
        c.add(ntcadetail::address_prep(total, a.layout.offset("ad"), a.oracle.label_width, a.n_terms));
        c.add(w);
        c.add(a.unit_p.encoding.circuit);
        c.add(w.adjoint());
        a.circuit = std::move(c);
        a.rescale_factor = 2.0 * a.gamma * std::sqrt(n);
        a.has_q = false;
        return a;
    }

    BlockEncoding enc_p = be_p ? *be_p : build_gtilde(a.oracle, AmplitudePart::RealPart);
    BlockEncoding enc_q = be_q ? *be_q : build_gtilde(a.oracle, AmplitudePart::ImagPart);
    require(enc_p.ancillas == enc_q.ancillas, "branch encodings must share the flag register");

    a.unit_p = build_p_unitary(a.oracle, cfg.poly_p, a.gamma, tol, AmplitudePart::RealPart, enc_p,
                               cfg.seed);
    a.unit_q = build_p_unitary(a.oracle, cfg.poly_q, a.gamma, tol, AmplitudePart::ImagPart, enc_q,
                               cfg.seed + 1);
    a.dp = a.unit_p.chain_length;
    a.dq = a.unit_q.chain_length;
    a.has_q = true;
    a.flag_count = 1 + a.unit_p.encoding.ancillas;

    const int total = 1 + a.unit_p.encoding.total_width();
    a.layout = RegisterLayout({{"cb", 1},
                               {"qsvt", 3},
                               {"g", enc_p.ancillas},
                               {"ad", a.oracle.label_width},
                               {"da", a.oracle.data_width},
                               {"B", 1}});
    require(a.layout.total_width() == total, "register bookkeeping mismatch");

    const int w_off = a.flag_count;
    Circuit w_real = build_w(a.oracle, AmplitudePart::RealPart).embedded(total, w_off);
    Circuit w_imag = build_w(a.oracle, AmplitudePart::ImagPart).embedded(total, w_off);
    Circuit pu = a.unit_p.encoding.circuit.embedded(total, 1);
    Circuit qu = a.unit_q.encoding.circuit.embedded(total, 1);

    Circuit c(total);
    c.add(gate_h(0));
    c.add(ntcadetail::address_prep(total, a.layout.offset("ad"), a.oracle.label_width, a.n_terms));
    c.add(w_real.controlled({0, false}));
    c.add(w_imag.controlled({0, true}));
    c.add(pu.controlled({0, false}));
    c.add(qu.controlled({0, true}));
    c.add(w_real.adjoint().controlled({0, false}));
    c.add(w_imag.adjoint().controlled({0, true}));
    c.add(gate_h(0));
    a.circuit = std::move(c);
    a.rescale_factor = 8.0 * a.gamma * std::sqrt(n);
    return a;
}

// Fig-style preparation circuit alone (full variant).
inline Circuit build_fig3_circuit(const AmplitudeVector& c, const PolynomialSpec& p,
                                  const PolynomialSpec& q, double gamma, double eps = 1e-2) {
    NtcaConfig cfg;
    cfg.input = c;
    cfg.poly_p = p;
    cfg.poly_q = q;
    cfg.gamma = gamma;
    cfg.epsilon = eps;
    return build_ntca_assembly(cfg).circuit;
}

inline NtcaResult run_ntca_assembled(const NtcaConfig& cfg, const NtcaAssembly& a,
                                     EigenvalueMap map_p = {}, EigenvalueMap map_q = {}) {
    const double n = double(a.n_terms);
    const double eps_n = cfg.epsilon / n;

    // Theorem hypothesis on the approximants, relative to the analytic targets.
    if (cfg.target_p) {
        require(cfg.poly_p.certified_error <= cfg.epsilon / (4.0 * n) + 1e-15,
                "approximation budget violated: P'.certified_error > eps/(4N)");
    }
    if (cfg.target_q) {
        require(cfg.poly_q.certified_error <= cfg.epsilon / (4.0 * n) + 1e-15,
                "approximation budget violated: Q'.certified_error > eps/(4N)");
    }

    const cvector amps = oracle_amplitudes(a.oracle);
    auto eig_p = [&](std::size_t k) {
        double x = amps[k - 1].real();
        return map_p ? map_p(x) : x;
    };
    auto eig_q = [&](std::size_t k) {
        double y = amps[k - 1].imag();
        return map_q ? map_q(y) : y;
    };

    // Execute and post-select the flag block.
    QuantumState full = run_circuit(QuantumState::basis(a.layout, 0), a.circuit);
    std::vector<int> flags(a.flag_count);
    std::iota(flags.begin(), flags.end(), 0);
    const double p_meas = outcome_probability(full, flags, std::vector<bool>(a.flag_count, false));
    if (p_meas < cfg.success_floor) {
        throw NumericalError("UNAMPLIFIABLE: success probability below the floor");
    }
    QuantumState post = project(full, flags, std::vector<bool>(a.flag_count, false)).post_state;

    NtcaResult r;
    r.gamma_used = a.gamma;
    r.flag_count = a.flag_count;
    r.chain_degree_p = a.dp;
    r.chain_degree_q = a.dq;
    r.success_probability = p_meas;
    r.per_point_error_bound = eps_n;
    r.queries_per_invocation = a.circuit.query_count_total();

    // Read the address block: labels live at [flags=0][ad=k-1][da=0][B=0].
    const int tail = a.oracle.data_width + 1;
    cvector address(a.label_dim, cdouble(0.0));
    r.b_values.assign(a.n_terms, cdouble(0.0));
    for (std::size_t k = 1; k <= a.label_dim; ++k) {
        const std::size_t idx = (k - 1) << tail;
        address[k - 1] = post[idx];
        if (k <= a.n_terms) r.b_values[k - 1] = post[idx] * std::sqrt(p_meas) * a.rescale_factor;
    }
    r.output_state = QuantumState(RegisterLayout({{"ad", a.oracle.label_width}}), address);
    r.output_state.normalize();

    // Classical targets; default to the supplied polynomials.
    cvector targets(a.n_terms, cdouble(0.0));
    double predicted_sum = 0.0;
    for (std::size_t k = 1; k <= a.n_terms; ++k) {
        const double x = eig_p(k), y = eig_q(k);
        cdouble tp = cfg.target_p ? cfg.target_p(x) : cfg.poly_p.eval(x);
        cdouble tq(0.0);
        if (a.has_q) tq = cfg.target_q ? cfg.target_q(y) : cfg.poly_q.eval(y);
        targets[k - 1] = tp + tq;
        cdouble ideal = cfg.poly_p.eval(x) + (a.has_q ? cfg.poly_q.eval(y) : cdouble(0.0));
        predicted_sum += std::norm(ideal);
    }
    const double coeff = a.has_q ? 64.0 : 4.0;
    r.predicted_success_probability = predicted_sum / (coeff * a.gamma * a.gamma * n);

    // Global phase alignment on the strongest target component.
    std::size_t jmax = 0;
    for (std::size_t k = 1; k < a.n_terms; ++k) {
        if (std::abs(targets[k]) > std::abs(targets[jmax])) jmax = k;
    }
    if (std::abs(targets[jmax]) > 0.0 && std::abs(r.b_values[jmax]) > 0.0) {
        cdouble rot = std::exp(cdouble(0.0, std::arg(targets[jmax]) - std::arg(r.b_values[jmax])));
        for (auto& b : r.b_values) b *= rot;
    }
    for (std::size_t k = 0; k < a.n_terms; ++k) {
        r.max_point_error = std::max(r.max_point_error, std::abs(r.b_values[k] - targets[k]));
    }

    // Fidelity against the normalized classical target.
    {
        cvector tfull(a.label_dim, cdouble(0.0));
        double norm = 0.0;
        for (std::size_t k = 0; k < a.n_terms; ++k) {
            tfull[k] = targets[k];
            norm += std::norm(targets[k]);
        }
        if (norm > 0.0) {
            for (auto& z : tfull) z /= std::sqrt(norm);
            QuantumState tstate(RegisterLayout({{"ad", a.oracle.label_width}}), tfull);
            r.fidelity_vs_target = fidelity(tstate, r.output_state);
        }
    }

    // Error ledger: the triangle chain, measured term by term.
    ErrorLedger& lg = r.ledger;
    lg.budget_approx = cfg.epsilon / (4.0 * n);
    lg.budget_qsvt = cfg.epsilon / (4.0 * n);
    lg.budget_part = cfg.epsilon / (2.0 * n);
    lg.budget_combined = eps_n;
    const double back_scale = a.has_q ? 4.0 * a.gamma : 2.0 * a.gamma;
    for (std::size_t k = 1; k <= a.n_terms; ++k) {
        const double x = eig_p(k);
        QuantumState eig_state = eigenstate_for_k(a.oracle, k, AmplitudePart::RealPart);
        cdouble realized = ntcadetail::block_expectation(a.unit_p.encoding, eig_state);
        cdouble tp = cfg.target_p ? cfg.target_p(x) : cfg.poly_p.eval(x);
        lg.measured_approx_p = std::max(lg.measured_approx_p, std::abs(tp - cfg.poly_p.eval(x)));
        lg.measured_qsvt_p = std::max(lg.measured_qsvt_p,
                                      std::abs(back_scale * realized - cfg.poly_p.eval(x)));
        lg.measured_part_p = std::max(lg.measured_part_p, std::abs(tp - back_scale * realized));
        if (a.has_q) {
            const double y = eig_q(k);
            QuantumState eig_q_state = eigenstate_for_k(a.oracle, k, AmplitudePart::ImagPart);
            cdouble realized_q = ntcadetail::block_expectation(a.unit_q.encoding, eig_q_state);
            cdouble tq = cfg.target_q ? cfg.target_q(y) : cfg.poly_q.eval(y);
            lg.measured_approx_q = std::max(lg.measured_approx_q, std::abs(tq - cfg.poly_q.eval(y)));
            lg.measured_qsvt_q = std::max(lg.measured_qsvt_q,
                                          std::abs(4.0 * a.gamma * realized_q - cfg.poly_q.eval(y)));
            lg.measured_part_q = std::max(lg.measured_part_q, std::abs(tq - 4.0 * a.gamma * realized_q));
        }
    }
    lg.measured_combined = r.max_point_error;
    lg.within_budget = lg.measured_approx_p <= lg.budget_approx &&
                       lg.measured_approx_q <= lg.budget_approx &&
                       lg.measured_qsvt_p <= lg.budget_qsvt && lg.measured_qsvt_q <= lg.budget_qsvt &&
                       lg.measured_part_p <= lg.budget_part && lg.measured_part_q <= lg.budget_part &&
                       lg.measured_combined <= lg.budget_combined;

    // Query accounting under the chosen boost.
    const long inv_u = a.circuit.query_count_u();
    const long inv_udag = a.circuit.query_count_udag();
    std::mt19937_64 gen(cfg.seed ^ 0xd1b54a32d192ed03ull);
    switch (cfg.amplify) {
        case AmplifyMode::None:
            r.amplification_rounds = 1;
            r.queries_controlled_u = inv_u;
            r.queries_controlled_udag = inv_udag;
            r.expected_amplified_queries = double(r.queries_per_invocation);
            break;
        case AmplifyMode::MeasureUntilSuccess: {
            std::geometric_distribution<long> geo(p_meas);
            r.amplification_rounds = geo(gen) + 1;
            r.queries_controlled_u = r.amplification_rounds * inv_u;
            r.queries_controlled_udag = r.amplification_rounds * inv_udag;
            r.expected_amplified_queries = double(r.queries_per_invocation) / p_meas;
            break;
        }
        case AmplifyMode::AmplitudeAmplify: {
            AmplificationRun run = sample_amplification(p_meas, gen);
            r.amplification_rounds = run.rounds;
            r.queries_controlled_u = long(run.invocations * double(inv_u));
            r.queries_controlled_udag = long(run.invocations * double(inv_udag));
            r.expected_amplified_queries =
                run.expected_invocations * double(r.queries_per_invocation);
            break;
        }
    }
    return r;
}

inline NtcaResult run_ntca(const NtcaConfig& cfg, std::optional<BlockEncoding> be_p = {},
                           std::optional<BlockEncoding> be_q = {},
                           EigenvalueMap map_p = {}, EigenvalueMap map_q = {}) {
    NtcaAssembly a = build_ntca_assembly(cfg, std::move(be_p), std::move(be_q));
    return run_ntca_assembled(cfg, a, std::move(map_p), std::move(map_q));
}

inline NtcaResult run_partial_ntca(NtcaConfig cfg, std::size_t n1) {
    cfg.variant = NtcaVariant::Partial;
    cfg.n1 = n1;
    return run_ntca(cfg);
}

inline NtcaResult run_real_ntca(NtcaConfig cfg) {
    cfg.variant = NtcaVariant::RealOnly;
    cfg.poly_q = poly_zero();
    return run_ntca(cfg);
}

} // namespace ntca
