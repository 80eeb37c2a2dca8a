// Polynomial specifications with dual bases.
//
// Coefficients are kept in both the monomial and Chebyshev bases. Evaluation
// always goes through Clenshaw on the Chebyshev side, which stays stable at
// every degree we use; the monomial side is exact for polynomials built from
// monomial data and is flagged invalid beyond the degree where the
// Chebyshev-to-monomial conversion loses digits in doubles.

#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "ntca/core/types.hpp"

namespace ntca {

enum class Parity { Even, Odd, Mixed };

inline const char* parity_name(Parity p) {
    switch (p) {
        case Parity::Even: return "even";
        case Parity::Odd: return "odd";
        case Parity::Mixed: return "mixed";
    }
    return "?";
}

inline constexpr int kMonomialStableDegree = 30;
inline constexpr int kSupGridPoints = 2001;

namespace polydetail {

inline std::vector<cdouble> trim(std::vector<cdouble> c) {
    while (c.size() > 1 && c.back() == cdouble(0.0)) c.pop_back();
    if (c.empty()) c.push_back(cdouble(0.0));
    return c;
}

inline Parity parity_of(const std::vector<cdouble>& c) {
    bool even_ok = true, odd_ok = true;
    for (std::size_t m = 0; m < c.size(); ++m) {
        if (c[m] == cdouble(0.0)) continue;
        if (m % 2 == 0) odd_ok = false;
        else even_ok = false;
    }
    if (even_ok && odd_ok) return Parity::Even; // zero polynomial
    if (even_ok) return Parity::Even;
    if (odd_ok) return Parity::Odd;
    return Parity::Mixed;
}

// x^m expanded over T_k: x^m = 2^(1-m) * sum_j eps_j C(m,j) T_{m-2j}.
inline std::vector<cdouble> monomial_to_chebyshev(const std::vector<cdouble>& mono) {
    std::vector<cdouble> out(mono.size(), cdouble(0.0));
    for (std::size_t m = 0; m < mono.size(); ++m) {
        if (mono[m] == cdouble(0.0)) continue;
        double scale = std::pow(2.0, 1.0 - double(m));
        if (m == 0) scale = 1.0;
        double binom = 1.0; // C(m, 0)
        for (std::size_t j = 0; 2 * j <= m; ++j) {
            double eps = (m - 2 * j == 0) ? 0.5 : 1.0;
            if (m == 0) eps = 1.0;
            out[m - 2 * j] += mono[m] * scale * eps * binom;
            binom = binom * double(m - j) / double(j + 1);
        }
    }
    return trim(out);
}

// T_{k+1} = 2x T_k - T_{k-1}, accumulated into monomial coefficients.
inline std::vector<cdouble> chebyshev_to_monomial(const std::vector<cdouble>& cheb) {
    std::vector<cdouble> out(cheb.size(), cdouble(0.0));
    std::vector<double> tkm1 = {1.0};
    std::vector<double> tk = {0.0, 1.0};
    auto add = [&](const std::vector<double>& t, const cdouble& w) {
        if (w == cdouble(0.0)) return;
        for (std::size_t i = 0; i < t.size(); ++i) out[i] += w * t[i];
    };
    if (!cheb.empty()) add(tkm1, cheb[0]);
    if (cheb.size() > 1) add(tk, cheb[1]);
    for (std::size_t k = 2; k < cheb.size(); ++k) {
        std::vector<double> tnext(k + 1, 0.0);
        for (std::size_t i = 0; i < tk.size(); ++i) tnext[i + 1] += 2.0 * tk[i];
        for (std::size_t i = 0; i < tkm1.size(); ++i) tnext[i] -= tkm1[i];
        add(tnext, cheb[k]);
        tkm1 = std::move(tk);
        tk = std::move(tnext);
    }
    return trim(out);
}

inline cdouble clenshaw(const std::vector<cdouble>& a, double x) {
    cdouble b1(0.0), b2(0.0);
    for (std::size_t m = a.size(); m-- > 1;) {
        cdouble b = a[m] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b;
    }
    return a[0] + x * b1 - b2;
}

} // namespace polydetail

struct PolynomialSpec {
    std::vector<cdouble> monomial;  // index = power of x
    std::vector<cdouble> chebyshev; // index = Chebyshev order
    int degree = 0;
    Parity parity = Parity::Even;
    double gamma = 0.0;           // sup-norm bound on [-1,1], >= measured sup
    double certified_error = 0.0; // sup |this - target| on [-1,1] for the target it approximates
    std::string label;
    bool monomial_valid = true;

    cdouble eval(double x) const { return polydetail::clenshaw(chebyshev, x); }

    cdouble eval_monomial(double x) const {
        require(monomial_valid, "monomial coefficients unavailable at this degree");
        cdouble acc(0.0);
        for (std::size_t m = monomial.size(); m-- > 0;) acc = acc * x + monomial[m];
        return acc;
    }

    bool is_zero() const {
        for (const auto& z : chebyshev) {
            if (z != cdouble(0.0)) return false;
        }
        return true;
    }

    bool is_real() const {
        for (const auto& z : chebyshev) {
            if (z.imag() != 0.0) return false;
        }
        return true;
    }

    double measured_sup(int grid = kSupGridPoints) const {
        double s = 0.0;
        for (int i = 0; i < grid; ++i) {
            double x = -1.0 + 2.0 * double(i) / double(grid - 1);
            s = std::max(s, std::abs(eval(x)));
        }
        return s;
    }
};

inline PolynomialSpec poly_from_monomial(std::vector<cdouble> coeffs, std::string label = {}) {
    PolynomialSpec p;
    p.monomial = polydetail::trim(std::move(coeffs));
    p.chebyshev = polydetail::monomial_to_chebyshev(p.monomial);
    p.degree = int(p.monomial.size()) - 1;
    p.parity = polydetail::parity_of(p.monomial);
    p.label = std::move(label);
    p.monomial_valid = true;
    p.gamma = p.measured_sup();
    return p;
}

inline PolynomialSpec poly_from_chebyshev(std::vector<cdouble> coeffs, std::string label = {}) {
    PolynomialSpec p;
    p.chebyshev = polydetail::trim(std::move(coeffs));
    p.degree = int(p.chebyshev.size()) - 1;
    p.parity = polydetail::parity_of(p.chebyshev);
    p.label = std::move(label);
    if (p.degree <= kMonomialStableDegree) {
        p.monomial = polydetail::chebyshev_to_monomial(p.chebyshev);
        p.monomial_valid = true;
    } else {
        p.monomial.clear();
        p.monomial_valid = false;
    }
    p.gamma = p.measured_sup();
    return p;
}

inline PolynomialSpec poly_zero() { return poly_from_monomial({cdouble(0.0)}, "zero"); }

inline PolynomialSpec poly_identity() { return poly_from_monomial({cdouble(0.0), cdouble(1.0)}, "x"); }

inline PolynomialSpec poly_chebyshev_t(int d) {
    std::vector<cdouble> c(d + 1, cdouble(0.0));
    c[d] = 1.0;
    return poly_from_chebyshev(std::move(c), "T" + std::to_string(d));
}

// p / (4*gamma); requires gamma to dominate the measured sup of p.
inline PolynomialSpec rescale_quarter(const PolynomialSpec& p, double gamma) {
    require(gamma > 0.0, "gamma must be positive");
    double sup = p.measured_sup();
    require(gamma >= sup - 1e-12, "gamma below the measured sup of the polynomial");
    PolynomialSpec out = p;
    for (auto& z : out.monomial) z /= 4.0 * gamma;
    for (auto& z : out.chebyshev) z /= 4.0 * gamma;
    out.gamma = std::min(0.25, sup / (4.0 * gamma));
    out.certified_error = p.certified_error / (4.0 * gamma);
    if (!out.label.empty()) out.label += "/(4g)";
    double check = out.measured_sup();
    require(check <= 0.25 + 1e-12, "rescaled polynomial exceeds 1/4");
    return out;
}

// p = even + odd, exactly, in both bases.
inline std::pair<PolynomialSpec, PolynomialSpec> parity_split(const PolynomialSpec& p) {
    auto part = [&](bool keep_even) {
        std::vector<cdouble> cheb(p.chebyshev.size(), cdouble(0.0));
        for (std::size_t m = 0; m < p.chebyshev.size(); ++m) {
            if ((m % 2 == 0) == keep_even) cheb[m] = p.chebyshev[m];
        }
        PolynomialSpec out = poly_from_chebyshev(std::move(cheb), p.label);
        if (!out.label.empty()) out.label += keep_even ? ":even" : ":odd";
        return out;
    };
    auto even = part(true);
    auto odd = part(false);
    if (even.is_zero()) even.parity = Parity::Even;
    if (odd.is_zero()) odd.parity = Parity::Odd;
    return {std::move(even), std::move(odd)};
}

// Real/imaginary coefficient parts (functions of a real variable).
inline std::pair<PolynomialSpec, PolynomialSpec> complex_split(const PolynomialSpec& p) {
    std::vector<cdouble> re(p.chebyshev.size()), im(p.chebyshev.size());
    for (std::size_t m = 0; m < p.chebyshev.size(); ++m) {
        re[m] = cdouble(p.chebyshev[m].real(), 0.0);
        im[m] = cdouble(p.chebyshev[m].imag(), 0.0);
    }
    return {poly_from_chebyshev(std::move(re), p.label + ":re"),
            poly_from_chebyshev(std::move(im), p.label + ":im")};
}

inline PolynomialSpec poly_scale(const PolynomialSpec& p, cdouble factor) {
    std::vector<cdouble> cheb = p.chebyshev;
    for (auto& z : cheb) z *= factor;
    PolynomialSpec out = poly_from_chebyshev(std::move(cheb), p.label);
    out.certified_error = p.certified_error * std::abs(factor);
    return out;
}

inline PolynomialSpec poly_add(const PolynomialSpec& a, const PolynomialSpec& b) {
    std::vector<cdouble> cheb(std::max(a.chebyshev.size(), b.chebyshev.size()), cdouble(0.0));
    for (std::size_t m = 0; m < a.chebyshev.size(); ++m) cheb[m] += a.chebyshev[m];
    for (std::size_t m = 0; m < b.chebyshev.size(); ++m) cheb[m] += b.chebyshev[m];
    return poly_from_chebyshev(std::move(cheb));
}

inline double sup_diff_on_grid(const PolynomialSpec& p, const std::function<cdouble(double)>& f,
                               int grid) {
    double s = 0.0;
    for (int i = 0; i < grid; ++i) {
        double x = -1.0 + 2.0 * double(i) / double(grid - 1);
        s = std::max(s, std::abs(p.eval(x) - f(x)));
    }
    return s;
}

} // namespace ntca
