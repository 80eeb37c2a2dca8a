// Phase-factor computation for real definite-parity targets.
//
// Symmetric phase sequences (phi_j = phi_{d-j}) are optimized so that
// Re[U_Phi(x)]_{00} matches the target on positive Chebyshev nodes: L-BFGS
// from the (pi/4, 0, ..., 0, pi/4) start, seeded restarts if it stalls, and
// a Gauss-Newton polish to push the residual to machine precision.

#pragma once

#include <random>

#include "ntca/qsvt/qsp.hpp"

namespace ntca {

struct PhaseFactors {
    std::vector<double> angles; // Wx convention, length degree+1
    int degree = 0;
    Parity parity = Parity::Even;
    double residual = 0.0; // max deviation on the 201-point check grid
    std::string target_label;
    std::string convention = "wx-reflection";
};

inline constexpr int kPhaseDegreeCap = 60;

namespace qspsolve {

struct Problem {
    std::vector<double> nodes;
    std::vector<double> values;
    int degree = 0;
};

inline std::vector<double> expand_symmetric(const std::vector<double>& v, int d) {
    std::vector<double> phi(d + 1);
    for (int j = 0; j <= d; ++j) phi[j] = v[std::min(j, d - j)];
    return phi;
}

inline void fold_gradient(const std::vector<double>& grad_phi, int d, std::vector<double>& grad_v) {
    const int h = d / 2 + 1;
    grad_v.assign(std::size_t(h), 0.0);
    for (int j = 0; j <= d; ++j) grad_v[std::min(j, d - j)] += grad_phi[j];
    // Symmetric pairs were double-counted exactly once each; the middle of an
    // even-length sequence maps to a single variable so it is already right.
    // Nothing further: phi_j and phi_{d-j} share one variable, so d/dv = sum.
}

inline double objective(const Problem& pr, const std::vector<double>& v, std::vector<double>* grad_v) {
    const int d = pr.degree;
    std::vector<double> phi = expand_symmetric(v, d);
    double f = 0.0;
    if (grad_v) grad_v->assign(std::size_t(d / 2 + 1), 0.0);
    std::vector<double> g_phi, g_fold;
    for (std::size_t i = 0; i < pr.nodes.size(); ++i) {
        double r;
        if (grad_v) {
            r = qsp::real_part_with_gradient(phi, pr.nodes[i], g_phi) - pr.values[i];
            fold_gradient(g_phi, d, g_fold);
            for (std::size_t k = 0; k < grad_v->size(); ++k) (*grad_v)[k] += 2.0 * r * g_fold[k];
        } else {
            r = qsp::real_part(phi, pr.nodes[i]) - pr.values[i];
        }
        f += r * r;
    }
    return f;
}

inline double max_residual(const Problem& pr, const std::vector<double>& v) {
    std::vector<double> phi = expand_symmetric(v, pr.degree);
    double m = 0.0;
    for (std::size_t i = 0; i < pr.nodes.size(); ++i) {
        m = std::max(m, std::abs(qsp::real_part(phi, pr.nodes[i]) - pr.values[i]));
    }
    return m;
}

// Plain two-loop L-BFGS with Armijo backtracking.
inline bool lbfgs(const Problem& pr, std::vector<double>& v, int max_iters, double stop_res) {
    const std::size_t n = v.size();
    const int mem = 8;
    std::vector<std::vector<double>> s_hist, y_hist;
    std::vector<double> rho_hist;

    std::vector<double> grad, grad_new;
    double f = objective(pr, v, &grad);
    for (int iter = 0; iter < max_iters; ++iter) {
        if (max_residual(pr, v) <= stop_res) return true;

        std::vector<double> q = grad;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t k = s_hist.size(); k-- > 0;) {
            double a = 0.0;
            for (std::size_t i = 0; i < n; ++i) a += s_hist[k][i] * q[i];
            a *= rho_hist[k];
            alpha[k] = a;
            for (std::size_t i = 0; i < n; ++i) q[i] -= a * y_hist[k][i];
        }
        double scale = 1.0;
        if (!s_hist.empty()) {
            double sy = 0.0, yy = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                sy += s_hist.back()[i] * y_hist.back()[i];
                yy += y_hist.back()[i] * y_hist.back()[i];
            }
            if (yy > 0.0) scale = sy / yy;
        }
        for (auto& x : q) x *= scale;
        for (std::size_t k = 0; k < s_hist.size(); ++k) {
            double b = 0.0;
            for (std::size_t i = 0; i < n; ++i) b += y_hist[k][i] * q[i];
            b *= rho_hist[k];
            for (std::size_t i = 0; i < n; ++i) q[i] += s_hist[k][i] * (alpha[k] - b);
        }
        // q is the ascent-preconditioned gradient; descend along -q.
        double gq = 0.0;
        for (std::size_t i = 0; i < n; ++i) gq += grad[i] * q[i];
        if (gq <= 0.0) {
            q = grad;
            gq = 0.0;
            for (std::size_t i = 0; i < n; ++i) gq += grad[i] * grad[i];
        }

        double t = 1.0;
        std::vector<double> v_new(n);
        double f_new = f;
        bool moved = false;
        for (int ls = 0; ls < 40; ++ls) {
            for (std::size_t i = 0; i < n; ++i) v_new[i] = v[i] - t * q[i];
            f_new = objective(pr, v_new, nullptr);
            if (f_new <= f - 1e-4 * t * gq) {
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if (!moved) {
            if (s_hist.empty()) return max_residual(pr, v) <= stop_res;
            // Restart the quasi-Newton memory and try a plain gradient step.
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            continue;
        }

        objective(pr, v_new, &grad_new);
        std::vector<double> s(n), y(n);
        double sy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = v_new[i] - v[i];
            y[i] = grad_new[i] - grad[i];
            sy += s[i] * y[i];
        }
        if (sy > 1e-14) {
            s_hist.push_back(s);
            y_hist.push_back(y);
            rho_hist.push_back(1.0 / sy);
            if (int(s_hist.size()) > mem) {
                s_hist.erase(s_hist.begin());
                y_hist.erase(y_hist.begin());
                rho_hist.erase(rho_hist.begin());
            }
        }
        v = std::move(v_new);
        f = f_new;
        grad = grad_new;
        if (std::sqrt(f) < 1e-15) return true;
    }
    return max_residual(pr, v) <= stop_res;
}

// Fixed-point iteration on reduced symmetric phases. At the canonical start
// (pi/4, 0, ..., 0, pi/4) the map from phases to the Chebyshev coefficients of
// Re[U]_00 has Jacobian -2I (and -1 on the middle variable), so dividing the
// coefficient residual by that slope gives a contraction for targets whose
// sup-norm stays away from one. Returns the best residual reached.
inline double fixed_point(const Problem& pr, std::vector<double>& v,
                          const std::vector<double>& target_cheb, int max_iters, double stop_res) {
    const int d = pr.degree;
    const int h = d / 2 + 1;
    const int m = d + 1; // interpolation nodes for exact degree-d coefficients
    std::vector<double> nodes(m);
    for (int i = 0; i < m; ++i) nodes[i] = std::cos(M_PI * (i + 0.5) / m);

    std::vector<double> best = v;
    double best_res = 1e300;
    std::vector<double> gvals(m), coeff(d + 1);
    for (int iter = 0; iter < max_iters; ++iter) {
        std::vector<double> phi = expand_symmetric(v, d);
        for (int i = 0; i < m; ++i) gvals[i] = qsp::real_part(phi, nodes[i]);
        for (int k = 0; k <= d; ++k) {
            double acc = 0.0;
            for (int i = 0; i < m; ++i) acc += gvals[i] * std::cos(M_PI * k * (i + 0.5) / m);
            coeff[k] = (k == 0 ? 1.0 : 2.0) * acc / m;
        }
        double res = 0.0;
        for (int k = 0; k <= d; ++k) {
            double target = (k < int(target_cheb.size())) ? target_cheb[k] : 0.0;
            res = std::max(res, std::abs(coeff[k] - target));
        }
        if (res < best_res) {
            best_res = res;
            best = v;
        }
        if (res <= stop_res || res > 1e3) break;
        for (int i = 0; i < h; ++i) {
            const int k = d - 2 * i;
            const double slope = (2 * i == d) ? 1.0 : 2.0;
            double target = (k < int(target_cheb.size())) ? target_cheb[k] : 0.0;
            v[i] += (coeff[k] - target) / slope;
        }
    }
    v = best;
    return best_res;
}

// Gauss-Newton polish on the residual vector; keeps the best iterate seen.
inline void gauss_newton(const Problem& pr, std::vector<double>& v, int steps) {
    const int d = pr.degree;
    const std::size_t n = v.size();
    const std::size_t m = pr.nodes.size();
    std::vector<double> g_phi, g_fold;
    std::vector<double> best = v;
    double best_res = max_residual(pr, v);
    for (int step = 0; step < steps; ++step) {
        Eigen::MatrixXd jac(m, n);
        Eigen::VectorXd res(m);
        std::vector<double> phi = expand_symmetric(v, d);
        for (std::size_t i = 0; i < m; ++i) {
            double val = qsp::real_part_with_gradient(phi, pr.nodes[i], g_phi);
            fold_gradient(g_phi, d, g_fold);
            res(i) = val - pr.values[i];
            for (std::size_t k = 0; k < n; ++k) jac(i, k) = g_fold[k];
        }
        Eigen::VectorXd dv = jac.colPivHouseholderQr().solve(res);
        for (std::size_t k = 0; k < n; ++k) v[k] -= dv(k);
        double r = max_residual(pr, v);
        if (r < best_res) {
            best_res = r;
            best = v;
        }
        if (best_res < 1e-15) break;
    }
    v = best;
}

} // namespace qspsolve

// Solve phases for `target` at chain length `degree` (target degree may be
// lower; parity must match degree mod 2 unless the target is zero).
inline PhaseFactors solve_phase_factors_at_degree(const PolynomialSpec& target, int degree,
                                                  double tol = 1e-9, std::uint64_t seed = 0,
                                                  int degree_cap = kPhaseDegreeCap) {
    require(degree >= 0 && degree <= degree_cap, "chain degree outside the supported range");
    require(target.is_real(), "phase targets must have real coefficients");
    require(target.degree <= degree, "target degree exceeds the chain length");

    PhaseFactors out;
    out.degree = degree;
    out.parity = (degree % 2 == 0) ? Parity::Even : Parity::Odd;
    out.target_label = target.label;

    if (target.is_zero()) {
        out.angles = qsp::zero_target_phases(degree);
        out.residual = 0.0;
        return out;
    }
    require(target.parity != Parity::Mixed, "phase targets must have definite parity");
    require((target.parity == Parity::Even) == (degree % 2 == 0),
            "target parity must match the chain length");
    double sup = target.measured_sup();
    require(sup <= 1.0 + 1e-12, "phase target exceeds unit sup-norm");

    if (degree == 0) {
        out.angles = {std::acos(std::clamp(target.eval(0.5).real(), -1.0, 1.0))};
        out.residual = 0.0;
        return out;
    }

    qspsolve::Problem pr;
    pr.degree = degree;
    const int nodes = std::max(degree + 1, 12);
    for (int i = 0; i < nodes; ++i) {
        double x = std::cos((2.0 * i + 1.0) * M_PI / (4.0 * nodes));
        pr.nodes.push_back(x);
        pr.values.push_back(target.eval(x).real());
    }

    const int h = degree / 2 + 1;
    std::vector<double> target_cheb(target.chebyshev.size());
    for (std::size_t k = 0; k < target_cheb.size(); ++k) target_cheb[k] = target.chebyshev[k].real();

    std::vector<double> best_v;
    double best_res = 1e300;
    std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> jitter(0.0, 0.05);

    // Coefficient fixed point first: cheap and reliable away from unit sup.
    {
        std::vector<double> v(h, 0.0);
        v[0] = M_PI / 4.0;
        qspsolve::fixed_point(pr, v, target_cheb, 600, 1e-14);
        qspsolve::gauss_newton(pr, v, 6);
        best_res = qspsolve::max_residual(pr, v);
        best_v = v;
    }

    for (int attempt = 0; attempt < 8 && best_res > 1e-13; ++attempt) {
        std::vector<double> v(h, 0.0);
        v[0] = M_PI / 4.0;
        if (attempt > 0) {
            for (auto& x : v) x += jitter(gen);
        }
        qspsolve::lbfgs(pr, v, 8000, 1e-12);
        qspsolve::gauss_newton(pr, v, 10);
        if (qspsolve::max_residual(pr, v) > 1e-12) {
            // Another optimize/polish round pays off when the first stalls.
            qspsolve::lbfgs(pr, v, 8000, 1e-12);
            qspsolve::gauss_newton(pr, v, 10);
        }
        double r = qspsolve::max_residual(pr, v);
        if (r < best_res) {
            best_res = r;
            best_v = v;
        }
    }

    out.angles = qspsolve::expand_symmetric(best_v, degree);

    // Check on the documented 201-point grid (signs included via parity).
    double worst = 0.0;
    for (int i = 0; i < 201; ++i) {
        double x = std::cos((2.0 * i + 1.0) * M_PI / (2.0 * 201));
        worst = std::max(worst, std::abs(qsp::real_part(out.angles, x) - target.eval(x).real()));
    }
    out.residual = worst;
    if (worst > tol) {
        throw NumericalError("phase-factor solve did not converge: best residual " +
                             std::to_string(worst));
    }
    return out;
}

inline PhaseFactors compute_phase_factors(const PolynomialSpec& target, double tol = 1e-9,
                                          int degree_cap = kPhaseDegreeCap, std::uint64_t seed = 0) {
    require(target.degree <= degree_cap, "degree above the configured cap");
    return solve_phase_factors_at_degree(target, target.is_zero() ? 1 : target.degree, tol, seed);
}

} // namespace ntca
