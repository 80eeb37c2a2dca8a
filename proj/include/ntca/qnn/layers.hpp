// Neural-network layers on amplitudes.
//
// A layer applies a unitary weight matrix through the oracle and the
// activation through the transformation pipeline: the output nodes are
// F(sum_j v_kj psi_j) with F(z) = P(Re z) + Q(Im z). For depth two, the whole
// layer-one preparation circuit (with the second weight matrix on its address
// block) becomes the next state-preparation oracle; the known prefactor its
// amplitudes carry is stripped by amplifying the next encoding's eigenvalues,
// and the pipeline then runs unchanged behind the amplified encoding. Query
// counters always report uses of the innermost data oracle.
//
// Depth three and beyond re-seed each level with a synthesized oracle that
// carries the previous outputs verbatim (plus one garbage label for the
// residual norm); the query model charges what the physical amplification
// chain would: one call to the compressed oracle stands for
// amplifier_degree x (calls of one invocation at the level below).

#pragma once

#include "ntca/ntca/pipeline.hpp"
#include "ntca/qnn/sv_amplify.hpp"

namespace ntca {

struct LayerSpec {
    Eigen::MatrixXcd weights; // square over the previous register, unitary
    PolynomialSpec activation_p = poly_identity();
    PolynomialSpec activation_q = poly_zero();
    std::size_t width = 0; // output nodes N_l (<= matrix dimension)
    bool real_orthogonal = false;

    void validate() const {
        require(weights.rows() == weights.cols(), "weight matrix must be square");
        const auto dim = weights.rows();
        require((weights.adjoint() * weights - Eigen::MatrixXcd::Identity(dim, dim)).norm() <=
                    kUnitaryTol,
                "weight matrix is not unitary");
        if (real_orthogonal) {
            require(weights.imag().norm() <= kUnitaryTol, "orthogonal weights must be real");
        }
        require(width >= 1 && width <= std::size_t(dim), "layer width out of range");
    }
};

struct QnnOptions {
    double epsilon = 1e-2;
    double amplifier_tol = 1e-4;
    double gamma = 0.0; // 0: auto per layer
    bool prefer_real_variant = true;
    std::uint64_t seed = 0;
    AmplifyMode amplify = AmplifyMode::None;
};

struct LayerRun {
    NtcaResult result;
    cvector node_values; // classical F(sum v_kj psi_j) reference
    long queries_u_psi = 0;
    double composed_budget = 0.0;
    int amplifier_degree = 0;
    double amplifier_tol = 0.0;
    double scale_removed = 1.0;
};

// Classical reference evaluation of one layer.
inline cvector classical_layer(const cvector& input, const LayerSpec& layer) {
    const auto dim = layer.weights.rows();
    Eigen::VectorXcd in = Eigen::VectorXcd::Zero(dim);
    for (Eigen::Index j = 0; j < dim && j < Eigen::Index(input.size()); ++j) in(j) = input[j];
    Eigen::VectorXcd mixed = layer.weights * in;
    cvector out(layer.width, cdouble(0.0));
    for (std::size_t k = 0; k < layer.width; ++k) {
        out[k] = layer.activation_p.eval(mixed(k).real()) + layer.activation_q.eval(mixed(k).imag());
    }
    return out;
}

namespace qnndetail {

inline bool vector_is_real(const cvector& v, double tol = 1e-10) {
    for (const auto& z : v) {
        if (std::abs(z.imag()) > tol) return false;
    }
    return true;
}

inline StatePrepOracle weighted_oracle(const Circuit& u_psi, const Eigen::MatrixXcd& weights) {
    const int n = u_psi.num_qubits();
    require(weights.rows() == (1L << n), "weight matrix dimension mismatch");
    Circuit c = u_psi;
    std::vector<int> targets(n);
    std::iota(targets.begin(), targets.end(), 0);
    c.add(gate_dense(std::make_shared<Eigen::MatrixXcd>(weights), targets, {}, "weights"));
    return StatePrepOracle::from_circuit(std::move(c), n, 0);
}

inline bool real_path_ok(const LayerSpec& layer, const cvector& node_inputs) {
    return layer.activation_q.is_zero() && layer.activation_p.is_real() &&
           layer.activation_p.parity != Parity::Mixed && vector_is_real(node_inputs);
}

inline NtcaConfig layer_config(const LayerSpec& layer, const QnnOptions& opt, bool real_path) {
    NtcaConfig cfg;
    cfg.poly_p = layer.activation_p;
    cfg.poly_q = real_path ? poly_zero() : layer.activation_q;
    cfg.gamma = opt.gamma;
    cfg.epsilon = opt.epsilon;
    cfg.variant = real_path ? NtcaVariant::RealOnly : NtcaVariant::Partial;
    cfg.n1 = layer.width;
    cfg.seed = opt.seed;
    cfg.amplify = opt.amplify;
    return cfg;
}

inline cvector oracle_input(const Circuit& u_psi) {
    StatePrepOracle o{u_psi, u_psi.num_qubits(), u_psi.num_qubits(), 0, 1, 0};
    return oracle_amplitudes(o);
}

inline double activation_slope(const PolynomialSpec& p) {
    double lip = 0.0;
    for (int i = 0; i < 401; ++i) {
        double x = -1.0 + 2.0 * i / 400.0;
        double h = 1e-5;
        lip = std::max(lip, std::abs((p.eval(x + h) - p.eval(x - h)) / (2.0 * h)));
    }
    return lip;
}

} // namespace qnndetail

inline LayerRun single_layer(const Circuit& u_psi, const LayerSpec& layer, const QnnOptions& opt = {}) {
    layer.validate();
    StatePrepOracle oracle = qnndetail::weighted_oracle(u_psi, layer.weights);
    cvector mixed = oracle_amplitudes(oracle);
    const bool real_path = opt.prefer_real_variant && qnndetail::real_path_ok(layer, mixed);

    NtcaConfig cfg = qnndetail::layer_config(layer, opt, real_path);
    cfg.oracle = oracle;

    LayerRun run;
    NtcaAssembly a = build_ntca_assembly(cfg);
    run.result = run_ntca_assembled(cfg, a);
    run.queries_u_psi = run.result.queries_controlled_u + run.result.queries_controlled_udag;
    run.composed_budget = opt.epsilon / double(a.n_terms);
    run.node_values = classical_layer(qnndetail::oracle_input(u_psi), layer);
    run.scale_removed = a.rescale_factor;
    return run;
}

inline LayerRun single_layer(const AmplitudeVector& input, const LayerSpec& layer,
                             const QnnOptions& opt = {}) {
    return single_layer(synthesize_state_prep(input), layer, opt);
}

inline LayerRun two_layer(const Circuit& u_psi, const LayerSpec& layer1, const LayerSpec& layer2,
                          const QnnOptions& opt = {}) {
    layer1.validate();
    layer2.validate();

    // Layer one, assembled for its preparation circuit.
    StatePrepOracle oracle1 = qnndetail::weighted_oracle(u_psi, layer1.weights);
    cvector mixed1 = oracle_amplitudes(oracle1);
    const bool real1 = opt.prefer_real_variant && qnndetail::real_path_ok(layer1, mixed1);
    NtcaConfig cfg1 = qnndetail::layer_config(layer1, opt, real1);
    cfg1.oracle = oracle1;
    NtcaAssembly a1 = build_ntca_assembly(cfg1);

    // Classical references.
    cvector input = qnndetail::oracle_input(u_psi);
    cvector nodes1 = classical_layer(input, layer1);
    cvector nodes2 = classical_layer(nodes1, layer2);

    // The second weight matrix acts on the address block of the layer-one
    // circuit; the result is the next state-preparation oracle.
    Circuit tilde = a1.circuit;
    const auto ad_qubits = a1.layout.qubits("ad");
    require(layer2.weights.rows() == (1L << ad_qubits.size()), "layer-2 weight dimension mismatch");
    tilde.add(
        gate_dense(std::make_shared<Eigen::MatrixXcd>(layer2.weights), ad_qubits, {}, "weights-2"));
    StatePrepOracle oracle2 =
        StatePrepOracle::from_circuit(std::move(tilde), int(ad_qubits.size()), a1.layout.offset("ad"));

    // Prefactor removal.
    const double t = a1.rescale_factor;
    cvector z_scaled = oracle_amplitudes(oracle2);
    double zmax = 0.0;
    for (std::size_t k = 0; k < layer2.width; ++k) zmax = std::max(zmax, std::abs(z_scaled[k]) * t);
    const double window = std::clamp(1.2 * zmax + 0.05, 0.15, 0.95);
    UniformAmplifier amp = build_uniform_amplifier(t, window, opt.amplifier_tol, 0.01, 80, opt.seed);

    const bool real2 = opt.prefer_real_variant && qnndetail::real_path_ok(layer2, z_scaled);
    NtcaConfig cfg2 = qnndetail::layer_config(layer2, opt, real2);
    cfg2.oracle = oracle2;
    EigenvalueMap map = [poly = amp.poly](double x) { return poly.eval(x).real(); };

    LayerRun run;
    run.amplifier_degree = amp.degree;
    run.amplifier_tol = amp.tol;
    run.scale_removed = t;
    if (real2) {
        BlockEncoding enc = build_gtilde(oracle2, AmplitudePart::RealPart);
        QsvtCircuit amplified = assemble_qsvt(enc, amp.phases, amp.poly, 1e-9, false);
        NtcaAssembly a2 = build_ntca_assembly(cfg2, amplified.encoding);
        run.result = run_ntca_assembled(cfg2, a2, map, {});
    } else {
        BlockEncoding enc_re = build_gtilde(oracle2, AmplitudePart::RealPart);
        BlockEncoding enc_im = build_gtilde(oracle2, AmplitudePart::ImagPart);
        QsvtCircuit amp_re = assemble_qsvt(enc_re, amp.phases, amp.poly, 1e-9, false);
        QsvtCircuit amp_im = assemble_qsvt(enc_im, amp.phases, amp.poly, 1e-9, false);
        NtcaAssembly a2 = build_ntca_assembly(cfg2, amp_re.encoding, amp_im.encoding);
        run.result = run_ntca_assembled(cfg2, a2, map, map);
    }
    run.queries_u_psi = run.result.queries_controlled_u + run.result.queries_controlled_udag;
    run.node_values = nodes2;

    // Layer-2 per-point allowance plus the amplification tolerance pushed
    // through the activation slope.
    run.composed_budget = opt.epsilon / double(layer2.width) +
                          2.0 * qnndetail::activation_slope(layer2.activation_p) * amp.tol;
    return run;
}

inline LayerRun two_layer(const AmplitudeVector& input, const LayerSpec& l1, const LayerSpec& l2,
                          const QnnOptions& opt = {}) {
    return two_layer(synthesize_state_prep(input), l1, l2, opt);
}

struct MultiLayerRun {
    NtcaResult result;
    cvector node_values; // classical nested reference
    double queries_u_psi = 0.0; // physical for depth <= 2, cost model deeper
    double composed_budget = 0.0;
    bool compressed = false;
};

inline MultiLayerRun multi_layer(const AmplitudeVector& input, const std::vector<LayerSpec>& layers,
                                 const QnnOptions& opt = {}, std::size_t depth_cap = 3) {
    require(!layers.empty(), "at least one layer required");
    require(layers.size() <= depth_cap, "layer count above the configured cap");

    MultiLayerRun out;
    if (layers.size() == 1) {
        LayerRun r = single_layer(input, layers[0], opt);
        out.result = std::move(r.result);
        out.node_values = std::move(r.node_values);
        out.queries_u_psi = double(r.queries_u_psi);
        out.composed_budget = r.composed_budget;
        return out;
    }
    if (layers.size() == 2) {
        LayerRun r = two_layer(input, layers[0], layers[1], opt);
        out.result = std::move(r.result);
        out.node_values = std::move(r.node_values);
        out.queries_u_psi = double(r.queries_u_psi);
        out.composed_budget = r.composed_budget;
        return out;
    }

    // Compressed composition: run all but the final pair level by level,
    // re-seeding a synthesized oracle with the exact node values each time.
    cvector reference = input.entries;
    for (const auto& l : layers) reference = classical_layer(reference, l);

    cvector current = input.entries;
    double per_call = 1.0; // data-oracle calls one current-oracle call stands for
    double budget = 0.0;
    for (std::size_t li = 0; li + 2 < layers.size(); ++li) {
        LayerRun r = single_layer(AmplitudeVector(current), layers[li], opt);
        budget += r.composed_budget;

        require(r.node_values.size() < current.size(),
                "compressed hand-off needs one spare label for the residual");
        cvector packed(current.size(), cdouble(0.0));
        double norm2 = 0.0;
        for (std::size_t k = 0; k < r.node_values.size(); ++k) {
            packed[k] = r.node_values[k];
            norm2 += std::norm(r.node_values[k]);
        }
        require(norm2 <= 1.0 + 1e-12, "layer outputs exceed unit norm");
        packed[r.node_values.size()] = std::sqrt(std::max(0.0, 1.0 - norm2));
        current = std::move(packed);

        // Cost model for the hand-off the physical chain would need.
        const double t = r.scale_removed;
        double zmax = 0.0;
        for (const auto& v : r.node_values) zmax = std::max(zmax, std::abs(v));
        const double window = std::clamp(1.2 * zmax + 0.05, 0.15, 0.95);
        UniformAmplifier amp =
            build_uniform_amplifier(t, window, opt.amplifier_tol, 0.01, 80, opt.seed);
        per_call *= double(amp.degree) * double(r.result.queries_per_invocation);
        budget += 2.0 * qnndetail::activation_slope(layers[li + 1].activation_p) * amp.tol;
    }

    LayerRun tail = two_layer(AmplitudeVector(current), layers[layers.size() - 2],
                              layers[layers.size() - 1], opt);
    out.result = std::move(tail.result);
    out.node_values = std::move(reference);
    out.queries_u_psi = double(tail.queries_u_psi) * per_call;
    out.composed_budget = budget + tail.composed_budget;
    out.compressed = true;
    return out;
}

} // namespace ntca
