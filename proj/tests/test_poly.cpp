#include "test_util.hpp"

#include "ntca/poly/chebyshev.hpp"
#include "ntca/poly/poly_io.hpp"
#include "ntca/poly/tanh_taylor.hpp"

using namespace ntca;

TEST_CASE("tanh Taylor coefficients from exact rationals", "[poly]") {
    PolynomialSpec p1 = taylor_tanh(1);
    REQUIRE(p1.degree == 1);
    CHECK(p1.monomial[1].real() == Catch::Approx(1.0).margin(1e-15));
    CHECK(p1.certified_error <= tanh_tail_bound(1));

    // Three terms: x - x^3/3 + 2x^5/15, i.e. B_2=1/6, B_4=-1/30, B_6=1/42
    // pushed through the series.
    PolynomialSpec p3 = taylor_tanh(3);
    REQUIRE(p3.degree == 5);
    CHECK(p3.monomial[1].real() == Catch::Approx(1.0).margin(1e-15));
    CHECK(p3.monomial[3].real() == Catch::Approx(-1.0 / 3.0).margin(1e-15));
    CHECK(p3.monomial[5].real() == Catch::Approx(2.0 / 15.0).margin(1e-15));
    CHECK(p3.parity == Parity::Odd);
    for (std::size_t m = 0; m < p3.monomial.size(); m += 2) CHECK(p3.monomial[m] == cdouble(0.0));

    CHECK_THROWS_AS(taylor_tanh(0), PreconditionError);
    CHECK_THROWS_AS(taylor_tanh(kTanhTermCap + 1), PreconditionError);
}

TEST_CASE("measured tanh error sits below the closed-form tail bound", "[poly][property]") {
    for (int d = 1; d <= 12; ++d) {
        PolynomialSpec p = taylor_tanh(d);
        CHECK(p.certified_error <= tanh_tail_bound(d));
        CHECK(p.certified_error > 0.0);
    }
}

TEST_CASE("minimal degree grows affinely in log(1/eps)", "[poly]") {
    std::vector<double> epses = {1e-2, 1e-3, 1e-4};
    std::vector<double> logs, ds;
    for (double eps : epses) {
        int d = min_tanh_terms(eps);
        PolynomialSpec p = taylor_tanh(d);
        CHECK(p.certified_error <= eps);
        if (d > 1) CHECK(taylor_tanh(d - 1).certified_error > eps);
        logs.push_back(std::log(1.0 / eps));
        ds.push_back(double(d));
        INFO("eps=" << eps << " -> terms d=" << d);
    }
    // Least-squares slope of d against ln(1/eps).
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        mx += logs[i];
        my += ds[i];
    }
    mx /= logs.size();
    my /= ds.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        num += (logs[i] - mx) * (ds[i] - my);
        den += (logs[i] - mx) * (logs[i] - mx);
    }
    double slope = num / den;
    double reference = 1.0 / std::log(M_PI / 2.0);
    CHECK(slope > 0.0);
    CHECK(slope >= reference / 3.0);
    CHECK(slope <= reference * 3.0);
}

TEST_CASE("Chebyshev fit reproduces polynomials exactly", "[poly]") {
    PolynomialSpec p = chebyshev_fit([](double x) { return x * x; }, 2);
    CHECK(p.certified_error < 1e-12);
    CHECK(std::abs(p.eval(0.3) - cdouble(0.09)) < 1e-12);
}

TEST_CASE("Chebyshev fit of tanh beats the Taylor truncation at equal degree", "[poly]") {
    PolynomialSpec taylor = taylor_tanh(5); // degree 9
    PolynomialSpec cheb = chebyshev_fit([](double x) { return std::tanh(x); }, 9, 4001, Parity::Odd);
    CHECK(cheb.degree <= 9);
    CHECK(cheb.parity == Parity::Odd);
    CHECK(cheb.certified_error < taylor.certified_error);
}

TEST_CASE("Chebyshev fit of |x| converges slowly; error is only reported", "[poly]") {
    PolynomialSpec p = chebyshev_fit([](double x) { return std::abs(x); }, 4);
    INFO("degree-4 |x| interpolation error = " << p.certified_error);
    CHECK(p.certified_error > 1e-3);
    CHECK(p.certified_error < 0.5);
}

TEST_CASE("Chebyshev fit rejects non-finite functions", "[poly]") {
    CHECK_THROWS_AS(chebyshev_fit([](double) { return std::nan(""); }, 3), PreconditionError);
}

TEST_CASE("rescale_quarter obeys its contract", "[poly]") {
    PolynomialSpec ident = poly_identity();
    PolynomialSpec q = rescale_quarter(ident, 1.0);
    CHECK(q.measured_sup() == Catch::Approx(0.25).margin(1e-12));

    // gamma below the measured sup is rejected: tanh-d3 peaks at 0.8 > tanh(1).
    PolynomialSpec t3 = taylor_tanh(3);
    CHECK(t3.measured_sup() == Catch::Approx(0.8).margin(1e-9));
    CHECK_THROWS_AS(rescale_quarter(t3, std::tanh(1.0)), PreconditionError);

    PolynomialSpec ok = rescale_quarter(t3, 0.8);
    CHECK(ok.measured_sup() <= 0.25 + 1e-12);

    PolynomialSpec z = rescale_quarter(poly_zero(), 1.0);
    CHECK(z.is_zero());
}

TEST_CASE("parity_split is exact and recombines", "[poly]") {
    PolynomialSpec p = poly_from_monomial({cdouble(0.0), cdouble(1.0), cdouble(1.0)}); // x^2 + x
    auto [even, odd] = parity_split(p);
    CHECK(even.degree == 2);
    CHECK(odd.degree == 1);
    CHECK(std::abs(even.eval(0.5) - cdouble(0.25)) < 1e-14);
    CHECK(std::abs(odd.eval(0.5) - cdouble(0.5)) < 1e-14);

    auto [te, to] = parity_split(taylor_tanh(4));
    CHECK(te.is_zero());
    CHECK(to.parity == Parity::Odd);

    auto [ce, co] = parity_split(poly_from_monomial({cdouble(0.2)}));
    CHECK(std::abs(ce.eval(0.7) - cdouble(0.2)) < 1e-15);
    CHECK(co.is_zero());
}

TEST_CASE("parity split and quarter rescale commute with evaluation", "[poly][property]") {
    auto gen = ntca::testing::rng(41);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<cdouble> mono(7);
        for (auto& z : mono) z = cdouble(coeff(gen), coeff(gen));
        PolynomialSpec p = poly_from_monomial(mono);
        double gamma = p.measured_sup() + 0.1;
        auto [even, odd] = parity_split(p);
        PolynomialSpec lhs = poly_add(rescale_quarter(even, gamma), rescale_quarter(odd, gamma));
        PolynomialSpec rhs = rescale_quarter(p, gamma);
        for (double x = -1.0; x <= 1.0; x += 0.125) {
            CHECK(std::abs(lhs.eval(x) - rhs.eval(x)) < 1e-12);
        }
    }
}

TEST_CASE("bases agree on a dense grid", "[poly][property]") {
    auto gen = ntca::testing::rng(42);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (int deg : {3, 8, 15, 24}) {
        std::vector<cdouble> mono(deg + 1);
        for (auto& z : mono) z = cdouble(coeff(gen), coeff(gen));
        PolynomialSpec p = poly_from_monomial(mono);
        double worst = 0.0;
        for (int i = 0; i < kSupGridPoints; ++i) {
            double x = -1.0 + 2.0 * double(i) / double(kSupGridPoints - 1);
            worst = std::max(worst, std::abs(p.eval(x) - p.eval_monomial(x)));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("gamma dominates the measured sup and parity matches sparsity", "[poly][property]") {
    PolynomialSpec t = taylor_tanh(6);
    CHECK(t.gamma >= t.measured_sup() - 1e-12);
    CHECK(t.parity == Parity::Odd);
    PolynomialSpec even = poly_from_monomial({cdouble(0.5), cdouble(0.0), cdouble(0.25)});
    CHECK(even.parity == Parity::Even);
    PolynomialSpec mixed = poly_from_monomial({cdouble(0.5), cdouble(0.5)});
    CHECK(mixed.parity == Parity::Mixed);
}

TEST_CASE("polynomial JSON round-trip", "[poly][io]") {
    PolynomialSpec p = taylor_tanh(4);
    PolynomialSpec back = poly_from_json(poly_to_json(p));
    CHECK(back.degree == p.degree);
    CHECK(back.parity == p.parity);
    CHECK(back.certified_error == p.certified_error);
    for (double x = -1.0; x <= 1.0; x += 0.25) CHECK(std::abs(back.eval(x) - p.eval(x)) < 1e-14);
}
