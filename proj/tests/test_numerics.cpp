#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "oscprop/numerics.hpp"

using namespace oscprop;
using Catch::Matchers::WithinAbs;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    const QuadRule r = gauss_legendre(8);
    double sum = 0.0, moment = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        sum += r.w[i];
        moment += r.w[i] * std::pow(r.x[i], 14);  // degree 14 < 2*8
    }
    CHECK_THAT(sum, WithinAbs(2.0, 1e-14));
    CHECK_THAT(moment, WithinAbs(2.0 / 15.0, 1e-14));
}

TEST_CASE("gauss-hermite total weights integrate gaussians") {
    const QuadRule r = gauss_hermite_total(48);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        sum += r.w[i] * std::exp(-r.x[i] * r.x[i]);
        sum2 += r.w[i] * r.x[i] * r.x[i] * std::exp(-r.x[i] * r.x[i]);
    }
    CHECK_THAT(sum, WithinAbs(std::sqrt(kPi), 1e-13));
    CHECK_THAT(sum2, WithinAbs(0.5 * std::sqrt(kPi), 1e-13));
}

TEST_CASE("adaptive quadrature hits tight tolerances") {
    double v = integrate_adaptive([](double x) { return std::exp(-x * x); }, -10.0, 10.0, 1e-13);
    CHECK_THAT(v, WithinAbs(std::sqrt(kPi), 1e-12));

    // complex integrand
    std::complex<double> w = integrate_adaptive(
        [](double x) { return std::exp(std::complex<double>(-x * x, 3.0 * x)); }, -12.0, 12.0,
        1e-13, 20000, "gaussian with phase");
    // exact: sqrt(pi) e^{-9/4}
    CHECK_THAT(w.real(), WithinAbs(std::sqrt(kPi) * std::exp(-2.25), 1e-12));
    CHECK_THAT(w.imag(), WithinAbs(0.0, 1e-12));
}

TEST_CASE("adaptive quadrature reports non-convergence with the label") {
    bool threw = false;
    try {
        integrate_adaptive([](double x) { return std::sin(1.0 / (x * x + 1e-14)); }, 0.0, 1.0,
                           1e-13, 16, "nasty");
    } catch (const QuadratureError& e) {
        threw = true;
        CHECK(e.label() == "nasty");
    }
    CHECK(threw);
}

TEST_CASE("tridiagonal solver") {
    // -u'' = 1 on [0,1], dirichlet, exact u(x) = x(1-x)/2
    const int n = 64;
    const double h = 1.0 / (n + 1);
    std::vector<double> low(n - 1, -1.0), up(n - 1, -1.0), dia(n, 2.0), rhs(n, h * h);
    solve_tridiagonal(low, dia, up, rhs);
    for (int i = 0; i < n; ++i) {
        double x = (i + 1) * h;
        REQUIRE_THAT(rhs[i], WithinAbs(0.5 * x * (1.0 - x), 1e-12));
    }
}

TEST_CASE("cubic spline converges at fourth order on smooth functions") {
    auto worst_err = [](int n) {
        std::vector<double> xs(n), ys(n);
        for (int i = 0; i < n; ++i) {
            xs[i] = -3.0 + 6.0 * i / (n - 1);
            ys[i] = std::sin(2.0 * xs[i]);
        }
        CubicSpline<double> s(xs, ys);
        double worst = 0.0;
        for (int k = 0; k < 500; ++k) {
            double x = -3.0 + 6.0 * k / 499.0;
            worst = std::max(worst, std::abs(s(x) - std::sin(2.0 * x)));
        }
        return worst;
    };
    const double e1 = worst_err(201), e2 = worst_err(401);
    CHECK(e1 < 1e-6);
    CHECK(e1 / e2 > 10.0);  // ~16 for a fourth-order method
}

TEST_CASE("uniform 8-point interpolant is near machine precision on smooth data") {
    const int n = 769;
    const double x0 = -12.0, dx = 24.0 / (n - 1);
    std::vector<std::complex<double>> vals(n);
    for (int i = 0; i < n; ++i) {
        double x = x0 + i * dx;
        vals[i] = std::exp(std::complex<double>(-0.5 * x * x, 0.7 * x));
    }
    UniformInterpolant<std::complex<double>> interp(x0, dx, vals);
    double worst = 0.0;
    for (int k = 0; k < 997; ++k) {
        double x = -11.9 + 23.8 * k / 996.0;
        std::complex<double> exact = std::exp(std::complex<double>(-0.5 * x * x, 0.7 * x));
        worst = std::max(worst, std::abs(interp(x) - exact));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("fresnel line integral evaluates the pure gaussian-phase integral") {
    // int exp(i(c2 z^2 + b1 z)) dz = sqrt(pi i / c2) exp(-i b1^2 / (4 c2))
    const double c2 = 0.8, b1 = 1.3;
    std::complex<double> got = fresnel_line_integral(
        [&](std::complex<double> z) {
            return std::exp(std::complex<double>(0.0, 1.0) * (c2 * z * z + b1 * z));
        },
        c2, b1);
    std::complex<double> want = std::sqrt(kPi / c2) * std::polar(1.0, kPi / 4.0) *
                                std::exp(std::complex<double>(0.0, -b1 * b1 / (4.0 * c2)));
    CHECK(std::abs(got - want) < 1e-12);
}

TEST_CASE("parallel_for covers every index exactly once") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) REQUIRE(h == 1);
}
