#include "test_util.hpp"

#include "ntca/ntca/pipeline.hpp"
#include "ntca/poly/tanh_taylor.hpp"

using namespace ntca;
using ntca::testing::random_normalized;
using ntca::testing::random_real_normalized;

namespace {

NtcaConfig base_config(const cvector& c) {
    NtcaConfig cfg;
    cfg.input = AmplitudeVector(c);
    cfg.poly_p = poly_identity();
    cfg.poly_q = poly_zero();
    cfg.gamma = 1.0;
    cfg.epsilon = 1e-2;
    return cfg;
}

cvector classical_targets(const cvector& c, const PolynomialSpec& p, const PolynomialSpec& q) {
    cvector t(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        t[k] = p.eval(c[k].real()) + q.eval(c[k].imag());
    }
    return t;
}

double multiset_distance(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("transformation unit multiplies eigenstates by P'(x)/4g", "[pipeline]") {
    auto gen = ntca::testing::rng(61);

    SECTION("identity polynomial on a real vector") {
        cvector c = random_real_normalized(4, gen);
        StatePrepOracle o = StatePrepOracle::from_vector(AmplitudeVector(c));
        QsvtCircuit unit = build_p_unitary(o, poly_identity(), 1.0, 1e-9);
        for (std::size_t k = 1; k <= 4; ++k) {
            QuantumState v = eigenstate_for_k(o, k, AmplitudePart::RealPart);
            cdouble got = ntcadetail::block_expectation(unit.encoding, v);
            CHECK(std::abs(got - c[k - 1].real() / 4.0) < 1e-10);
        }
    }

    SECTION("basis vector reads P'(1)/(4 gamma)") {
        StatePrepOracle o = StatePrepOracle::from_vector(AmplitudeVector({cdouble(1.0), cdouble(0.0)}));
        PolynomialSpec p = taylor_tanh(3);
        const double gamma = 0.9;
        QsvtCircuit unit = build_p_unitary(o, p, gamma, 1e-9);
        QuantumState v = eigenstate_for_k(o, 1, AmplitudePart::RealPart);
        cdouble got = ntcadetail::block_expectation(unit.encoding, v);
        CHECK(std::abs(got - p.eval(1.0) / (4.0 * gamma)) < 1e-9);
    }

    SECTION("zero polynomial produces an unamplifiable pipeline") {
        cvector c = random_normalized(4, gen);
        NtcaConfig cfg = base_config(c);
        cfg.poly_p = poly_zero();
        cfg.poly_q = poly_zero();
        CHECK_THROWS_AS(run_ntca(cfg), NumericalError);
    }
}

TEST_CASE("full pipeline matches the closed-form success probability", "[pipeline]") {
    auto gen = ntca::testing::rng(62);
    cvector c = random_normalized(4, gen);
    NtcaConfig cfg = base_config(c);
    cfg.poly_p = rescale_quarter(taylor_tanh(2), 1.0);
    cfg.poly_q = poly_identity();
    cfg.gamma = 1.0;
    NtcaResult r = run_ntca(cfg);

    double expect = 0.0;
    for (const auto& z : c) expect += std::norm(cfg.poly_p.eval(z.real()) + cfg.poly_q.eval(z.imag()));
    expect /= 64.0 * 4.0; // gamma = 1, N = 4
    CHECK(r.success_probability == Catch::Approx(expect).margin(1e-9));
    CHECK(r.predicted_success_probability == Catch::Approx(expect).margin(1e-12));
}

TEST_CASE("identity transform returns the input on real vectors", "[pipeline]") {
    auto gen = ntca::testing::rng(63);
    cvector c = random_real_normalized(4, gen);
    NtcaConfig cfg = base_config(c);
    NtcaResult r = run_ntca(cfg);

    QuantumState input(RegisterLayout({{"ad", 2}}), c);
    CHECK(fidelity(r.output_state, input) >= 1.0 - 1e-10);
    // d=1 on both branches: one invocation costs 2(4d+4) oracle uses.
    CHECK(r.queries_per_invocation == 16);
    CHECK(r.queries_controlled_u + r.queries_controlled_udag == 16);
    CHECK(r.max_point_error < 1e-9);
}

TEST_CASE("squared activation on the uniform pair gives the uniform output", "[pipeline]") {
    cvector c = {cdouble(1.0 / std::sqrt(2.0)), cdouble(1.0 / std::sqrt(2.0))};
    NtcaConfig cfg = base_config(c);
    cfg.poly_p = poly_from_monomial({cdouble(0.0), cdouble(0.0), cdouble(1.0)}, "x^2");
    NtcaResult r = run_ntca(cfg);
    // x_k^2 = 1/2 for both labels: the post-selected state is uniform.
    CHECK(std::abs(r.b_values[0] - cdouble(0.5)) < 1e-9);
    CHECK(std::abs(r.b_values[1] - cdouble(0.5)) < 1e-9);
    CHECK(std::abs(std::abs(r.output_state[0]) - 1.0 / std::sqrt(2.0)) < 1e-9);
}

TEST_CASE("tanh activation meets the per-point contract on random inputs", "[pipeline][property]") {
    auto gen = ntca::testing::rng(64);
    PolynomialSpec t5 = taylor_tanh(5);
    for (int trial = 0; trial < 3; ++trial) {
        cvector c = random_normalized(4, gen);
        NtcaConfig cfg = base_config(c);
        cfg.poly_p = t5;
        cfg.poly_q = t5;
        cfg.gamma = 0.0; // auto headroom
        cfg.epsilon = 1e-2;
        NtcaResult r = run_ntca(cfg);

        CHECK(r.max_point_error <= r.per_point_error_bound);
        CHECK(r.ledger.within_budget);
        CHECK(r.queries_per_invocation == 2 * (4 * 9 + 4));

        cvector t = classical_targets(c, t5, t5);
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(std::abs(r.b_values[k] - t[k]) < 2.5e-3);
        }
    }
}

TEST_CASE("analytic tanh targets pass the full error ledger", "[pipeline]") {
    auto gen = ntca::testing::rng(65);
    cvector c = random_normalized(4, gen);
    const double eps = 1e-2;
    const double budget = eps / 16.0; // eps/(4N), N=4
    int d = min_tanh_terms(budget);
    PolynomialSpec p = taylor_tanh(d);
    REQUIRE(p.certified_error <= budget);

    NtcaConfig cfg = base_config(c);
    cfg.poly_p = p;
    cfg.poly_q = p;
    cfg.epsilon = eps;
    cfg.gamma = 0.0;
    cfg.target_p = [](double x) { return cdouble(std::tanh(x)); };
    cfg.target_q = [](double y) { return cdouble(std::tanh(y)); };
    NtcaResult r = run_ntca(cfg);

    CHECK(r.ledger.measured_approx_p <= r.ledger.budget_approx);
    CHECK(r.ledger.measured_qsvt_p <= r.ledger.budget_qsvt);
    CHECK(r.ledger.measured_part_p <= r.ledger.budget_part);
    CHECK(r.ledger.measured_part_q <= r.ledger.budget_part);
    CHECK(r.ledger.measured_combined <= r.ledger.budget_combined);
    CHECK(r.ledger.within_budget);
    CHECK(r.max_point_error <= eps / 4.0);
}

TEST_CASE("approximation budget violations are rejected up front", "[pipeline]") {
    auto gen = ntca::testing::rng(66);
    cvector c = random_normalized(4, gen);
    NtcaConfig cfg = base_config(c);
    cfg.poly_p = taylor_tanh(2); // far too coarse for eps/(4N)
    cfg.epsilon = 1e-2;
    cfg.target_p = [](double x) { return cdouble(std::tanh(x)); };
    CHECK_THROWS_AS(run_ntca(cfg), PreconditionError);
}

TEST_CASE("partial restriction reproduces the full run and the prefix", "[pipeline]") {
    auto gen = ntca::testing::rng(67);
    cvector c = random_normalized(4, gen);
    NtcaConfig cfg = base_config(c);
    cfg.poly_p = taylor_tanh(3);
    cfg.poly_q = taylor_tanh(3);
    cfg.gamma = 0.0;

    SECTION("n1 = N is the full run") {
        NtcaResult full = run_ntca(cfg);
        NtcaResult part = run_partial_ntca(cfg, 4);
        CHECK(fidelity(full.output_state, part.output_state) >= 1.0 - 1e-9);
        CHECK(part.success_probability == Catch::Approx(full.success_probability).margin(1e-12));
    }

    SECTION("n1 = 2 keeps only the first two labels") {
        NtcaConfig cfg2 = base_config(c);
        NtcaResult r = run_partial_ntca(cfg2, 2);
        cdouble t0 = c[0].real(), t1 = c[1].real();
        double norm = std::sqrt(std::norm(t0) + std::norm(t1));
        CHECK(std::abs(std::abs(r.output_state[0]) - std::abs(t0) / norm) < 1e-9);
        CHECK(std::abs(std::abs(r.output_state[1]) - std::abs(t1) / norm) < 1e-9);
        CHECK(std::abs(r.output_state[2]) < 1e-10);
        CHECK(std::abs(r.output_state[3]) < 1e-10);
    }

    SECTION("n1 = 1 is deterministic whenever the single term survives") {
        NtcaConfig cfg1 = base_config(c);
        NtcaResult r = run_partial_ntca(cfg1, 1);
        CHECK(std::abs(std::abs(r.output_state[0]) - 1.0) < 1e-9);
    }
}

TEST_CASE("real-only variant: three flags and the same output", "[pipeline]") {
    auto gen = ntca::testing::rng(68);
    cvector c = random_real_normalized(4, gen);
    PolynomialSpec t5 = taylor_tanh(5);

    NtcaConfig cfg = base_config(c);
    cfg.poly_p = t5;
    cfg.gamma = 0.0;
    NtcaResult real = run_real_ntca(cfg);
    CHECK(real.flag_count == 3);
    CHECK(real.queries_per_invocation == 4 * 9 + 4);

    NtcaConfig cfg_full = cfg;
    cfg_full.variant = NtcaVariant::Full;
    NtcaResult full = run_ntca(cfg_full);
    CHECK(fidelity(real.output_state, full.output_state) >= 1.0 - 1e-9);

    SECTION("success probability for the identity activation at gamma=1") {
        NtcaConfig cid = base_config(c);
        cid.gamma = 1.0;
        NtcaResult r = run_real_ntca(cid);
        double sum = 0.0;
        for (const auto& z : c) sum += z.real() * z.real();
        CHECK(r.success_probability == Catch::Approx(sum / 16.0).margin(1e-9)); // 1/(4 g^2 N)
        CHECK(r.success_probability == Catch::Approx(1.0 / 16.0).margin(1e-9)); // real normalized c
    }

    SECTION("mixed-parity activation is routed to the full variant") {
        NtcaConfig bad = base_config(c);
        bad.poly_p = poly_from_monomial({cdouble(0.2), cdouble(0.2)});
        bad.variant = NtcaVariant::RealOnly;
        CHECK_THROWS_AS(run_ntca(bad), PreconditionError);
    }
}

TEST_CASE("swapping P and Q with a rotated input preserves magnitudes", "[pipeline][property]") {
    auto gen = ntca::testing::rng(69);
    cvector c = random_normalized(4, gen);
    PolynomialSpec pa = taylor_tanh(2);
    PolynomialSpec pb = poly_from_monomial({cdouble(0.0), cdouble(0.0), cdouble(0.8)}, "0.8x^2");

    NtcaConfig cfg1 = base_config(c);
    cfg1.poly_p = pa;
    cfg1.poly_q = pb;
    cfg1.gamma = 0.0;

    cvector rotated(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        rotated[k] = cdouble(c[k].imag(), c[k].real()); // i * conj(c)
    }
    NtcaConfig cfg2 = base_config(rotated);
    cfg2.poly_p = pb;
    cfg2.poly_q = pa;
    cfg2.gamma = 0.0;

    NtcaResult r1 = run_ntca(cfg1);
    NtcaResult r2 = run_ntca(cfg2);
    std::vector<double> m1, m2;
    for (std::size_t k = 0; k < 4; ++k) {
        m1.push_back(std::abs(r1.b_values[k]));
        m2.push_back(std::abs(r2.b_values[k]));
    }
    CHECK(multiset_distance(m1, m2) < 1e-9);
}

TEST_CASE("iterated search amplification follows the exact rotation angle", "[pipeline][amplify]") {
    auto gen = ntca::testing::rng(70);
    cvector c = random_normalized(2, gen);
    NtcaConfig cfg = base_config(c);
    cfg.poly_p = poly_identity();
    cfg.poly_q = poly_identity();
    NtcaAssembly a = build_ntca_assembly(cfg);

    QuantumState prepared = run_circuit(QuantumState::basis(a.layout, 0), a.circuit);
    std::vector<int> flags(a.flag_count);
    std::iota(flags.begin(), flags.end(), 0);
    const double p = outcome_probability(prepared, flags, std::vector<bool>(a.flag_count, false));
    const double theta = std::asin(std::sqrt(p));

    Circuit iterate = grover_iterate(a.circuit, flags);
    QuantumState s = prepared;
    for (int j = 1; j <= 3; ++j) {
        s = run_circuit(s, iterate);
        const double pj = outcome_probability(s, flags, std::vector<bool>(a.flag_count, false));
        const double want = std::pow(std::sin((2.0 * j + 1.0) * theta), 2.0);
        INFO("iteration " << j);
        CHECK(pj == Catch::Approx(want).margin(1e-9));
    }
}

TEST_CASE("amplified query expectation scales as inverse square root", "[pipeline][amplify]") {
    // Two inputs engineered so the second success probability is half the
    // first: P=x with x_1 = 0.2 vs 0.2/sqrt(2), the rest purely imaginary.
    auto make = [](double x1) {
        double rest = std::sqrt((1.0 - x1 * x1) / 3.0);
        cvector c = {cdouble(x1), cdouble(0.0, rest), cdouble(0.0, rest), cdouble(0.0, rest)};
        NtcaConfig cfg;
        cfg.input = AmplitudeVector(c);
        cfg.poly_p = poly_identity();
        cfg.poly_q = poly_zero();
        cfg.gamma = 1.0;
        cfg.amplify = AmplifyMode::AmplitudeAmplify;
        cfg.seed = 5;
        return run_ntca(cfg);
    };
    NtcaResult r1 = make(0.2);
    NtcaResult r2 = make(0.2 / std::sqrt(2.0));
    CHECK(r2.success_probability == Catch::Approx(r1.success_probability / 2.0).margin(1e-12));
    const double ratio = r2.expected_amplified_queries / r1.expected_amplified_queries;
    INFO("query ratio " << ratio);
    CHECK(ratio > std::sqrt(2.0) * 0.75);
    CHECK(ratio < std::sqrt(2.0) * 1.25);
}

TEST_CASE("retry-until-success accounting is geometric and seeded", "[pipeline][amplify]") {
    auto gen = ntca::testing::rng(71);
    cvector c = random_real_normalized(4, gen);
    NtcaConfig cfg = base_config(c);
    cfg.amplify = AmplifyMode::MeasureUntilSuccess;
    cfg.seed = 11;
    NtcaResult r1 = run_ntca(cfg);
    NtcaResult r2 = run_ntca(cfg);
    CHECK(r1.amplification_rounds == r2.amplification_rounds);
    CHECK(r1.queries_controlled_u == r1.amplification_rounds * 8);
    CHECK(r1.expected_amplified_queries ==
          Catch::Approx(16.0 / r1.success_probability).margin(1e-9));
}

TEST_CASE("zero-padded inputs keep the contract over the padded labels", "[pipeline]") {
    cvector three = {cdouble(0.6), cdouble(0.0, 0.64), cdouble(0.48)};
    NtcaConfig cfg;
    cfg.input = AmplitudeVector(three); // pads to N=4 with c_4 = 0
    cfg.poly_p = taylor_tanh(3);
    cfg.poly_q = taylor_tanh(3);
    cfg.gamma = 0.0;
    NtcaResult r = run_ntca(cfg);
    CHECK(r.b_values.size() == 4);
    CHECK(std::abs(r.b_values[3]) < 1e-9); // tanh(0) + tanh(0)
    CHECK(r.max_point_error <= r.per_point_error_bound);
}
