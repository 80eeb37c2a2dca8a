// Success-probability boosting for post-selected circuits.
//
// The search iterate reflects about the prepared state and about the good
// outcome; in the 2D span of those vectors, j iterations move the success
// probability to sin^2((2j+1) theta) with theta = asin(sqrt(p)). The unknown-
// amplitude schedule doubles the iteration budget each round and draws the
// iteration count uniformly, so its cost can be both sampled (seeded) and
// computed in expectation in closed form.

#pragma once

#include <random>

#include "ntca/core/simulator.hpp"

namespace ntca {

// Reflection-pair iterate for a preparation circuit `a` whose good outcomes
// have zeros on `good_qubits`.
inline Circuit grover_iterate(const Circuit& a, const std::vector<int>& good_qubits) {
    Circuit q(a.num_qubits());
    std::vector<ControlSpec> good_zeros;
    for (int g : good_qubits) good_zeros.push_back({g, false});
    q.add(gate_gphase(M_PI, good_zeros)); // I - 2 P_good
    q.add(a.adjoint());
    std::vector<ControlSpec> all_zeros;
    for (int i = 0; i < a.num_qubits(); ++i) all_zeros.push_back({i, false});
    q.add(gate_gphase(M_PI, all_zeros)); // I - 2 |0><0|
    q.add(a);
    return q;
}

// Mean success probability of a round that draws j uniformly from [0, M).
inline double round_success_mean(double theta, double m) {
    if (theta <= 0.0) return 0.0;
    // sum_{j<M} sin^2((2j+1)theta) = M/2 - sin(4 M theta) / (4 sin 2 theta)
    double s = m / 2.0 - std::sin(4.0 * m * theta) / (4.0 * std::sin(2.0 * theta));
    return std::clamp(s / m, 0.0, 1.0);
}

// Expected number of preparation-circuit invocations of the doubling schedule
// (each iteration costs two invocations, plus one per round to measure).
inline double expected_amplification_invocations(double p, int max_rounds = 64) {
    require(p > 0.0 && p <= 1.0, "success probability out of range");
    if (p >= 1.0) return 1.0;
    const double theta = std::asin(std::sqrt(p));
    double reach = 1.0, total = 0.0;
    for (int l = 1; l <= max_rounds; ++l) {
        double m = std::ldexp(1.0, l - 1);
        total += reach * m; // E[2j+1] = M
        reach *= 1.0 - round_success_mean(theta, m);
        if (reach < 1e-16) break;
    }
    return total;
}

struct AmplificationRun {
    long rounds = 0;
    long iterations = 0;            // total search iterations drawn
    double invocations = 0.0;       // sampled preparation-circuit invocations
    double expected_invocations = 0.0;
};

inline AmplificationRun sample_amplification(double p, std::mt19937_64& gen, int max_rounds = 64) {
    require(p > 0.0 && p <= 1.0, "success probability out of range");
    const double theta = std::asin(std::sqrt(std::min(1.0, p)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    AmplificationRun run;
    run.expected_invocations = expected_amplification_invocations(p, max_rounds);
    for (int l = 1; l <= max_rounds; ++l) {
        const long m = (l - 1 < 62) ? (1L << (l - 1)) : (1L << 62);
        std::uniform_int_distribution<long> pick(0, m - 1);
        const long j = pick(gen);
        run.rounds += 1;
        run.iterations += j;
        run.invocations += 2.0 * double(j) + 1.0;
        const double s = std::sin((2.0 * double(j) + 1.0) * theta);
        if (unit(gen) < s * s) return run;
    }
    throw NumericalError("amplification schedule exhausted without a success");
}

} // namespace ntca
