// Amplitude estimation and node-value readout.
//
// Phase estimation on the search iterate sees eigenphases ±2θ with θ =
// asin(|a|); an m-qubit evaluation register pins θ to a π/2^m grid. The
// spectral picture is simulated exactly: the deterministic mode returns the
// most likely outcome (grid-rounded θ), the sampled mode draws from the exact
// outcome distribution. Node values are reconstructed from three magnitude
// estimates via Re a = (|1+a|^2 - |a|^2 - 1)/2 and the i-shifted analogue,
// with the shifted circuits built by feeding (1+F)/2 and (1+iF)/2 activation
// pairs through the ordinary pipeline.

#pragma once

#include "ntca/qnn/layers.hpp"

namespace ntca {

struct AmplitudeEstimate {
    double value = 0.0;          // |a| estimate
    double beta = 0.0;           // additive-error target
    int evaluation_qubits = 0;
    long circuit_uses = 0;       // preparation-circuit applications
    long oracle_queries = 0;     // data-oracle calls across those uses
};

inline constexpr int kEvaluationQubitCap = 26;

// |a| of the amplitude on `outcome` over `outcome_qubits` in a |0..0>-prepared
// circuit, to additive error beta.
inline AmplitudeEstimate amplitude_estimation(const Circuit& a, const std::vector<int>& outcome_qubits,
                                              const std::vector<bool>& outcome, double beta,
                                              bool exact_mode = true, std::uint64_t seed = 0) {
    require(beta > 0.0 && beta < 1.0, "beta must lie in (0,1)");
    const int m = int(std::ceil(std::log2(1.0 / beta))) + 2;
    require(m <= kEvaluationQubitCap, "evaluation register width above the dense cap");
    const long big_m = 1L << m;

    QuantumState prepared = run_circuit(QuantumState::zero(a.num_qubits()), a);
    const double p = outcome_probability(prepared, outcome_qubits, outcome);
    const double theta = std::asin(std::sqrt(std::clamp(p, 0.0, 1.0)));

    AmplitudeEstimate est;
    est.beta = beta;
    est.evaluation_qubits = m;
    est.circuit_uses = 2 * (big_m - 1) + 1;
    est.oracle_queries = est.circuit_uses * a.query_count_total();

    if (exact_mode) {
        const long y = std::lround(theta * double(big_m) / M_PI);
        est.value = std::abs(std::sin(M_PI * double(y) / double(big_m)));
        return est;
    }

    // Exact outcome distribution of the two-phase mixture (weights 1/2 each).
    auto kernel = [&](double delta) {
        double s = std::sin(delta / 2.0);
        if (std::abs(s) < 1e-15) return 1.0;
        double num = std::sin(double(big_m) * delta / 2.0);
        return (num * num) / (double(big_m) * double(big_m) * s * s);
    };
    std::vector<double> probs(big_m);
    double total = 0.0;
    for (long y = 0; y < big_m; ++y) {
        double w = 2.0 * M_PI * double(y) / double(big_m);
        probs[y] = 0.5 * kernel(2.0 * theta - w) + 0.5 * kernel(-2.0 * theta - w);
        total += probs[y];
    }
    std::mt19937_64 gen(seed ^ 0xa0761d6478bd642full);
    std::uniform_real_distribution<double> unit(0.0, total);
    double draw = unit(gen), acc = 0.0;
    long picked = 0;
    for (long y = 0; y < big_m; ++y) {
        acc += probs[y];
        if (draw <= acc) {
            picked = y;
            break;
        }
    }
    est.value = std::abs(std::sin(M_PI * double(picked) / double(big_m)));
    return est;
}

struct NodeEstimate {
    std::size_t k = 0;
    double re = 0.0, im = 0.0;
    double beta = 0.0;
    long queries_used = 0;
};

namespace estdetail {

struct ShiftedPipeline {
    NtcaAssembly assembly;
    double scale = 0.0; // amplitude of node k = value_k / scale
};

// Pipeline preparing (shift + w*F(node_k))/2-type amplitudes: activation pair
// ((shift + w*P)/2, w*Q/2).
inline ShiftedPipeline shifted_pipeline(const StatePrepOracle& oracle, const PolynomialSpec& p,
                                        const PolynomialSpec& q, std::size_t width, cdouble shift,
                                        cdouble w, const QnnOptions& opt) {
    NtcaConfig cfg;
    std::vector<cdouble> shift_coeff = {shift / 2.0};
    cfg.poly_p = poly_add(poly_from_chebyshev(shift_coeff), poly_scale(p, w / 2.0));
    cfg.poly_q = poly_scale(q, w / 2.0);
    cfg.gamma = 0.0;
    cfg.epsilon = opt.epsilon;
    cfg.variant = NtcaVariant::Partial;
    cfg.n1 = width;
    cfg.seed = opt.seed;
    cfg.oracle = oracle;

    ShiftedPipeline sp;
    sp.assembly = build_ntca_assembly(cfg);
    sp.scale = sp.assembly.rescale_factor; // node amplitude = value / scale
    return sp;
}

inline std::vector<int> flag_and_label_qubits(const NtcaAssembly& a, std::size_t k,
                                              std::vector<bool>& outcome) {
    std::vector<int> qubits;
    for (int q = 0; q < a.flag_count; ++q) {
        qubits.push_back(q);
        outcome.push_back(false);
    }
    const auto ad = a.layout.qubits("ad");
    for (std::size_t j = 0; j < ad.size(); ++j) {
        qubits.push_back(ad[j]);
        outcome.push_back(((k - 1) >> (ad.size() - 1 - j)) & 1);
    }
    const auto da = a.layout.qubits("da");
    for (int q : da) {
        qubits.push_back(q);
        outcome.push_back(false);
    }
    qubits.push_back(a.layout.offset("B"));
    outcome.push_back(false);
    return qubits;
}

inline double estimate_magnitude(const ShiftedPipeline& sp, std::size_t k, double beta_amp,
                                 bool exact, std::uint64_t seed, long& queries) {
    std::vector<bool> outcome;
    std::vector<int> qubits = flag_and_label_qubits(sp.assembly, k, outcome);
    AmplitudeEstimate est =
        amplitude_estimation(sp.assembly.circuit, qubits, outcome, beta_amp, exact, seed);
    queries += est.oracle_queries;
    return est.value * sp.scale;
}

} // namespace estdetail

// Node values F(sum_j v_kj psi_j) for the listed labels, to additive error
// beta, from magnitude estimates of F, (1+F)/2 and (1+iF)/2.
inline std::vector<NodeEstimate> estimate_nodes(const Circuit& u_psi, const LayerSpec& layer,
                                                const std::vector<std::size_t>& ks, double beta,
                                                bool exact_mode = true, const QnnOptions& opt = {}) {
    require(beta > 0.0 && beta < 1.0, "beta must lie in (0,1)");
    layer.validate();
    StatePrepOracle oracle = qnndetail::weighted_oracle(u_psi, layer.weights);
    const PolynomialSpec& p = layer.activation_p;
    const PolynomialSpec& q = layer.activation_q;

    estdetail::ShiftedPipeline plain =
        estdetail::shifted_pipeline(oracle, p, q, layer.width, cdouble(0.0), cdouble(2.0), opt);
    estdetail::ShiftedPipeline one_plus =
        estdetail::shifted_pipeline(oracle, p, q, layer.width, cdouble(1.0), cdouble(1.0), opt);
    estdetail::ShiftedPipeline i_shift = estdetail::shifted_pipeline(
        oracle, p, q, layer.width, cdouble(1.0), cdouble(0.0, 1.0), opt);

    // Magnitude error budget: each squared term amplifies by at most twice the
    // magnitude (<= 2), and three estimates enter the reconstruction.
    const double worst_scale =
        std::max({plain.scale, one_plus.scale, i_shift.scale});
    const double beta_amp = beta / (12.0 * worst_scale);

    std::vector<NodeEstimate> out;
    for (std::size_t k : ks) {
        NodeEstimate ne;
        ne.k = k;
        ne.beta = beta;
        long queries = 0;
        const double f_abs =
            estdetail::estimate_magnitude(plain, k, beta_amp, exact_mode, opt.seed + 3 * k, queries);
        const double one_abs = estdetail::estimate_magnitude(one_plus, k, beta_amp, exact_mode,
                                                             opt.seed + 3 * k + 1, queries) *
                               2.0;
        const double i_abs = estdetail::estimate_magnitude(i_shift, k, beta_amp, exact_mode,
                                                           opt.seed + 3 * k + 2, queries) *
                             2.0;
        // |1+a|^2 = 1 + 2 Re a + |a|^2  and  |1+ia|^2 = 1 - 2 Im a + |a|^2.
        ne.re = (one_abs * one_abs - f_abs * f_abs - 1.0) / 2.0;
        ne.im = -(i_abs * i_abs - f_abs * f_abs - 1.0) / 2.0;
        ne.queries_used = queries;
        out.push_back(ne);
    }
    return out;
}

} // namespace ntca
