// Chebyshev interpolation of bounded real functions on [-1,1].
//
// Degree-d interpolant at the d+1 Chebyshev nodes. The reported
// certified_error is an empirical sup over a dense grid, not a proof.

#pragma once

#include "ntca/poly/polynomial.hpp"

namespace ntca {

inline PolynomialSpec chebyshev_fit(const std::function<double(double)>& f, int d,
                                    int grid = 4001, std::optional<Parity> parity_hint = {},
                                    std::string label = "chebfit") {
    require(d >= 0, "negative degree");
    const int m = d + 1;
    std::vector<double> nodes(m), values(m);
    for (int i = 0; i < m; ++i) {
        nodes[i] = std::cos(M_PI * (i + 0.5) / m);
        values[i] = f(nodes[i]);
        require(std::isfinite(values[i]), "function returned a non-finite value");
    }
    std::vector<cdouble> cheb(m, cdouble(0.0));
    for (int k = 0; k < m; ++k) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) acc += values[i] * std::cos(M_PI * k * (i + 0.5) / m);
        double coeff = 2.0 * acc / m;
        if (k == 0) coeff *= 0.5;
        cheb[k] = coeff;
    }
    if (parity_hint) {
        for (int k = 0; k < m; ++k) {
            bool keep = (*parity_hint == Parity::Even) ? (k % 2 == 0) : (k % 2 == 1);
            if (*parity_hint == Parity::Mixed) keep = true;
            if (!keep) cheb[k] = 0.0;
        }
    }
    PolynomialSpec p = poly_from_chebyshev(std::move(cheb), std::move(label));
    p.certified_error = sup_diff_on_grid(p, [&](double x) { return cdouble(f(x)); }, grid);
    return p;
}

} // namespace ntca
