#include "test_util.hpp"

#include "ntca/core/json_io.hpp"

using namespace ntca;
using ntca::testing::max_state_diff;
using ntca::testing::random_normalized;

namespace {

Circuit random_circuit(int qubits, int gates, std::mt19937_64& gen) {
    std::uniform_int_distribution<int> pick(0, 6);
    std::uniform_int_distribution<int> qd(0, qubits - 1);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);
    Circuit c(qubits);
    for (int i = 0; i < gates; ++i) {
        int t = qd(gen);
        switch (pick(gen)) {
            case 0: c.add(gate_x(t)); break;
            case 1: c.add(gate_h(t)); break;
            case 2: c.add(gate_s(t)); break;
            case 3: c.add(gate_ry(ang(gen), t)); break;
            case 4: c.add(gate_rz(ang(gen), t)); break;
            case 5: {
                int ctrl = qd(gen);
                if (ctrl == t) ctrl = (t + 1) % qubits;
                c.add(gate_x(t, {{ctrl, gen() & 1 ? true : false}}));
                break;
            }
            default: c.add(gate_phase(ang(gen), t)); break;
        }
    }
    return c;
}

} // namespace

TEST_CASE("single-qubit gates act as expected", "[statevector]") {
    QuantumState zero = QuantumState::zero(1);

    QuantumState one = apply_gate(zero, gate_x(0));
    CHECK(std::abs(one[1] - cdouble(1.0)) < 1e-15);

    QuantumState plus = apply_gate(zero, gate_h(0));
    CHECK(std::abs(plus[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(plus[1] - 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("controlled-Z flips the |11> phase of a Bell pair", "[statevector]") {
    RegisterLayout layout({{"q", 2}});
    cvector bell = {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};
    QuantumState s(layout, bell);
    QuantumState out = apply_gate(s, gate_z(1, {{0, true}}));
    CHECK(std::abs(out[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(out[3] + 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("run_circuit identities", "[statevector]") {
    auto gen = ntca::testing::rng(11);
    QuantumState psi(RegisterLayout::flat(3), random_normalized(8, gen));

    Circuit empty(3);
    CHECK(max_state_diff(run_circuit(psi, empty), psi) == 0.0);

    Circuit hh(3);
    hh.add(gate_h(1));
    hh.add(gate_h(1));
    CHECK(max_state_diff(run_circuit(psi, hh), psi) < 1e-15);

    Circuit wrong(2);
    CHECK_THROWS_AS(run_circuit(psi, wrong), PreconditionError);
}

TEST_CASE("gate validation rejects bad wiring", "[statevector]") {
    QuantumState s = QuantumState::zero(2);
    CHECK_THROWS_AS(apply_gate(s, gate_x(5)), PreconditionError);
    CHECK_THROWS_AS(apply_gate(s, gate_x(0, {{0, true}})), PreconditionError);
    Circuit c(2);
    CHECK_THROWS_AS(c.add(gate_x(0, {{0, true}})), PreconditionError);
}

TEST_CASE("projection on product and superposed states", "[statevector]") {
    auto gen = ntca::testing::rng(12);
    cvector inner = random_normalized(4, gen);

    RegisterLayout layout({{"flag", 1}, {"sys", 2}});
    cvector amps(8, cdouble(0.0));
    for (int i = 0; i < 4; ++i) amps[i] = inner[i]; // flag=0 times |psi>
    QuantumState s(layout, amps);

    auto outcome = project(s, {0}, {false});
    CHECK(outcome.probability == Catch::Approx(1.0).margin(1e-12));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(outcome.post_state[i] - inner[i]) < 1e-12);

    QuantumState plus = apply_gate(QuantumState::zero(1), gate_h(0));
    auto one = project(plus, {0}, {true});
    CHECK(one.probability == Catch::Approx(0.5).margin(1e-12));
    CHECK(std::abs(one.post_state[1] - 1.0) < 1e-12);

    QuantumState z0 = QuantumState::zero(1);
    CHECK_THROWS_AS(project(z0, {0}, {true}), NumericalError);
}

TEST_CASE("projection completeness over a register", "[statevector][property]") {
    auto gen = ntca::testing::rng(13);
    RegisterLayout layout({{"a", 2}, {"b", 2}});
    QuantumState s(layout, random_normalized(16, gen));
    double total = 0.0;
    auto qubits = layout.qubits("a");
    for (std::size_t v = 0; v < 4; ++v) {
        std::vector<bool> bits = {bool(v & 2), bool(v & 1)};
        total += outcome_probability(s, qubits, bits);
    }
    CHECK(total == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("dense_unitary basics and composition", "[statevector]") {
    Circuit cx(1);
    cx.add(gate_x(0));
    Eigen::MatrixXcd ux = dense_unitary(cx);
    CHECK(std::abs(ux(0, 1) - 1.0) < 1e-15);
    CHECK(std::abs(ux(1, 0) - 1.0) < 1e-15);
    CHECK(std::abs(ux(0, 0)) < 1e-15);

    Circuit cs(1);
    cs.add(gate_s(0));
    Eigen::MatrixXcd us = dense_unitary(cs);
    CHECK(std::abs(us(1, 1) - cdouble(0.0, 1.0)) < 1e-15);

    auto gen = ntca::testing::rng(14);
    Circuit c1 = random_circuit(3, 12, gen);
    Circuit c2 = random_circuit(3, 12, gen);
    Circuit both = c1;
    both.add(c2);
    Eigen::MatrixXcd lhs = dense_unitary(both);
    Eigen::MatrixXcd rhs = dense_unitary(c2) * dense_unitary(c1);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);

    Circuit wide(15);
    CHECK_THROWS_AS(dense_unitary(wide), PreconditionError);
}

TEST_CASE("norm preservation and unitarity of every gate kind", "[statevector][property]") {
    auto gen = ntca::testing::rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        Circuit c = random_circuit(4, 25, gen);
        QuantumState s(RegisterLayout::flat(4), random_normalized(16, gen));
        QuantumState out = run_circuit(s, c);
        CHECK(std::abs(out.norm_sq() - 1.0) < 1e-12);
        CHECK(unitarity_residual(dense_unitary(c)) < 1e-10);
    }
}

TEST_CASE("dense gate fast path agrees with scattered path", "[statevector]") {
    auto gen = ntca::testing::rng(16);
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Random(4, 4);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(block);
    Eigen::MatrixXcd q = qr.householderQ();
    auto qm = std::make_shared<Eigen::MatrixXcd>(q);

    QuantumState s(RegisterLayout::flat(4), random_normalized(16, gen));
    // Contiguous targets: GEMM path. Same gate with a spectator control that
    // is always satisfied must agree with the gather/scatter path.
    QuantumState fast = apply_gate(s, gate_dense(qm, {1, 2}));
    QuantumState slow_t = apply_gate(s, gate_dense(qm, {1, 2}, {{0, false}}));
    QuantumState slow_f = apply_gate(s, gate_dense(qm, {1, 2}, {{0, true}}));

    QuantumState zeroed = project(s, {0}, {false}).post_state;
    QuantumState expect_t = apply_gate(zeroed, gate_dense(qm, {1, 2}));
    CHECK(max_state_diff(project(slow_t, {0}, {false}).post_state, expect_t) < 1e-12);
    CHECK(std::abs(fast.norm_sq() - 1.0) < 1e-12);
    CHECK(max_state_diff(project(slow_f, {0}, {false}).post_state, zeroed) < 1e-12);

    // Non-contiguous targets as well.
    QuantumState scattered = apply_gate(s, gate_dense(qm, {0, 3}));
    CHECK(std::abs(scattered.norm_sq() - 1.0) < 1e-12);
}

TEST_CASE("global phase gates control correctly", "[statevector]") {
    QuantumState s = apply_gate(QuantumState::zero(2), gate_h(0));
    QuantumState out = apply_gate(s, gate_gphase(M_PI, {{0, true}}));
    CHECK(std::abs(out[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(out[2] + 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("fidelity basics", "[statevector]") {
    auto gen = ntca::testing::rng(17);
    QuantumState psi(RegisterLayout::flat(2), random_normalized(4, gen));
    CHECK(fidelity(psi, psi) == Catch::Approx(1.0).margin(1e-12));

    QuantumState zero = QuantumState::zero(1);
    QuantumState one = apply_gate(zero, gate_x(0));
    CHECK(fidelity(zero, one) == Catch::Approx(0.0).margin(1e-15));

    QuantumState plus = apply_gate(zero, gate_h(0));
    CHECK(fidelity(zero, plus) == Catch::Approx(0.5).margin(1e-12));

    CHECK_THROWS_AS(fidelity(zero, psi), PreconditionError);
}

TEST_CASE("state and circuit JSON round-trips", "[statevector][io]") {
    auto gen = ntca::testing::rng(18);
    RegisterLayout layout({{"ad", 1}, {"da", 1}, {"B", 1}});
    QuantumState s(layout, random_normalized(8, gen));
    QuantumState back = state_from_json(state_to_json(s));
    CHECK(max_state_diff(s, back) == 0.0);
    CHECK(back.layout().width("da") == 1);

    Circuit c = random_circuit(3, 10, gen);
    c.add(gate_gphase(0.25, {{0, false}}));
    Circuit rc = circuit_from_json(circuit_to_json(c));
    QuantumState a = run_circuit(s, c);
    QuantumState b = run_circuit(s, rc);
    CHECK(max_state_diff(a, b) < 1e-15);
}

TEST_CASE("query counters compose, control and invert", "[statevector]") {
    auto gen = ntca::testing::rng(19);
    Circuit u = random_circuit(2, 5, gen).embedded(3, 1);

    Circuit host(3);
    host.add_oracle(u, +1);
    host.add_oracle(u, -1, {{0, true}});
    CHECK(host.query_count_u() == 1);
    CHECK(host.query_count_udag() == 1);

    Circuit two = host;
    two.add(host);
    CHECK(two.query_count_u() == 2);
    CHECK(two.query_count_udag() == 2);

    Circuit adj = host.adjoint();
    CHECK(adj.query_count_u() == 1);
    CHECK(adj.query_count_udag() == 1);

    Circuit once(3);
    once.add_oracle(u, +1);
    CHECK(once.adjoint().query_count_udag() == 1);
    CHECK(once.adjoint().query_count_u() == 0);
    CHECK(once.controlled({0, true}).query_count_u() == 1);
}
