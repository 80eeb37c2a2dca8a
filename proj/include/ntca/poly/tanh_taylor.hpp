// Taylor approximants of tanh with exact-rational Bernoulli coefficients.
//
// tanh(x) = sum_{n>=1} 2^{2n} (2^{2n}-1) B_{2n} / (2n)! * x^{2n-1}; the
// coefficients alternate and grow before the factorial wins, so B_{2n} and the
// whole coefficient are carried as exact rationals and rounded to double only
// at the end. The truncation after d terms has the closed-form tail bound
// (5 sqrt(pi) / (1 - 2/pi)) * (2/pi)^(d+1) on [-1,1].

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "ntca/poly/polynomial.hpp"

namespace ntca {

inline constexpr int kTanhTermCap = 64;

namespace polydetail {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// B_0 .. B_max via the defining recurrence
//   B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j,   B_1 = -1/2.
inline std::vector<BigRational> bernoulli_numbers(int max_index) {
    std::vector<BigRational> b(max_index + 1);
    b[0] = 1;
    for (int m = 1; m <= max_index; ++m) {
        BigRational acc = 0;
        BigInt binom = 1; // C(m+1, 0)
        for (int j = 0; j < m; ++j) {
            acc += BigRational(binom) * b[j];
            binom = binom * BigInt(m + 1 - j) / BigInt(j + 1);
        }
        b[m] = -acc / BigRational(m + 1);
    }
    return b;
}

inline BigInt factorial(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace polydetail

// Exact rational Taylor coefficient of x^(2n-1) in tanh.
inline double tanh_series_coefficient(int n, const std::vector<polydetail::BigRational>& bern) {
    using namespace polydetail;
    BigInt p2 = BigInt(1) << (2 * n); // 2^{2n}
    BigRational c = BigRational(p2 * (p2 - 1)) * bern[2 * n] / BigRational(factorial(2 * n));
    return c.convert_to<double>();
}

inline double tanh_tail_bound(int d) {
    return 5.0 * std::sqrt(M_PI) / (1.0 - 2.0 / M_PI) * std::pow(2.0 / M_PI, d + 1);
}

// First d Taylor terms of tanh (degree 2d-1), odd parity. certified_error is
// the measured sup deviation from tanh on a dense grid; it always sits below
// the closed-form tail bound, which tests assert separately.
inline PolynomialSpec taylor_tanh(int d, int grid = 10001) {
    require(d >= 1, "taylor_tanh requires at least one term");
    require(d <= kTanhTermCap, "tanh term count exceeds the rational workspace cap");
    auto bern = polydetail::bernoulli_numbers(2 * d);
    std::vector<cdouble> mono(2 * d, cdouble(0.0));
    for (int n = 1; n <= d; ++n) mono[2 * n - 1] = tanh_series_coefficient(n, bern);
    PolynomialSpec p = poly_from_monomial(std::move(mono), "tanh-d" + std::to_string(d));
    p.certified_error = sup_diff_on_grid(p, [](double x) { return cdouble(std::tanh(x)); }, grid);
    return p;
}

// Smallest term count whose measured error meets eps.
inline int min_tanh_terms(double eps, int cap = 40) {
    for (int d = 1; d <= cap; ++d) {
        if (taylor_tanh(d).certified_error <= eps) return d;
    }
    throw NumericalError("tanh approximation did not reach the requested accuracy within the cap");
}

} // namespace ntca
