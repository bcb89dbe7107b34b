#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oscprop/specfun.hpp"
#include "support/oracles.hpp"

using namespace oscprop;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("hermite small-order values") {
    CHECK_THAT(hermite(0, 3.7), WithinAbs(1.0, 0.0));
    CHECK_THAT(hermite(1, 0.5), WithinAbs(1.0, 1e-15));
    // H_4(x) = 16x^4 - 48x^2 + 12 at x = 0
    CHECK_THAT(hermite(4, 0.0), WithinAbs(12.0, 0.0));
    // cross-check the closed quartic on a few points
    for (double x : {-1.3, 0.2, 2.4}) {
        double quartic = 16.0 * std::pow(x, 4) - 48.0 * x * x + 12.0;
        REQUIRE_THAT(hermite(4, x), WithinRel(quartic, 1e-13));
    }
}

TEST_CASE("hermite overflow is flagged, not returned") {
    CHECK_THROWS_AS(hermite(400, 18.0), std::overflow_error);
}

TEST_CASE("oscillator wavefunction values and stability") {
    CHECK_THAT(osc_wavefunction(0, 0.0), WithinAbs(std::pow(kPi, -0.25), 1e-14));
    CHECK_THAT(osc_wavefunction(1, 0.0), WithinAbs(0.0, 1e-300));
    // finite deep into the documented range
    for (unsigned n : {64u, 256u, 512u})
        for (double x : {-20.0, -3.4, 0.0, 20.0}) REQUIRE(std::isfinite(osc_wavefunction(n, x)));
}

TEST_CASE("oscillator orthonormality under gauss-hermite quadrature") {
    const unsigned n_max = 20;
    const QuadRule rule = gauss_hermite_total(2 * n_max + 16);
    std::vector<std::vector<double>> psi(rule.x.size());
    for (std::size_t j = 0; j < rule.x.size(); ++j) psi[j] = osc_wavefunctions(n_max, rule.x[j]);
    for (unsigned n = 0; n <= n_max; ++n) {
        for (unsigned m = n; m <= n_max; ++m) {
            double s = 0.0;
            for (std::size_t j = 0; j < rule.x.size(); ++j) s += rule.w[j] * psi[j][n] * psi[j][m];
            REQUIRE_THAT(s, WithinAbs(n == m ? 1.0 : 0.0, 1e-10));
        }
    }
}

TEST_CASE("normalization of Psi_3 via quadrature") {
    const QuadRule rule = gauss_hermite_total(24);
    double s = 0.0;
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
        double v = osc_wavefunction(3, rule.x[j]);
        s += rule.w[j] * v * v;
    }
    CHECK_THAT(s, WithinAbs(1.0, 1e-12));
}

TEST_CASE("ladder identities under central differences") {
    const double h = 1e-5;
    for (unsigned n = 0; n <= 10; ++n) {
        for (double x : {-1.7, 0.3, 2.2}) {
            double d = (osc_wavefunction(n, x + h) - osc_wavefunction(n, x - h)) / (2.0 * h);
            double raise = (x * osc_wavefunction(n, x) - d) / std::sqrt(2.0);
            REQUIRE_THAT(raise, WithinAbs(std::sqrt(n + 1.0) * osc_wavefunction(n + 1, x), 1e-6));
            double lower = (x * osc_wavefunction(n, x) + d) / std::sqrt(2.0);
            double want = n == 0 ? 0.0 : std::sqrt(static_cast<double>(n)) *
                                             osc_wavefunction(n - 1, x);
            REQUIRE_THAT(lower, WithinAbs(want, 1e-6));
        }
    }
}

TEST_CASE("charlier basics") {
    for (unsigned n : {0u, 1u, 4u, 9u})
        REQUIRE_THAT(charlier(n, 0.7, 0.0), WithinAbs(1.0, 1e-12));
    for (double mu : {0.2, 0.9, 3.0})
        for (double x : {-1.0, 0.5, 4.0})
            REQUIRE_THAT(charlier(1, mu, x), WithinAbs(1.0 - x / mu, 1e-13));
    CHECK_THROWS_AS(charlier(2, 0.0, 1.0), std::domain_error);
}

TEST_CASE("charlier recurrence agrees with the terminating 2F0 series") {
    // includes the spec point (5, 0.3, 4)
    for (unsigned n : {0u, 1u, 3u, 5u, 8u}) {
        for (double mu : {0.3, 0.5, 1.2}) {
            for (unsigned x : {0u, 1u, 4u, 7u}) {
                double rec = charlier(n, mu, x);
                double series = hyp2f0_terminating(n, x, -1.0 / mu);
                REQUIRE_THAT(rec, WithinAbs(series, 1e-10 * std::max(1.0, std::abs(series))));
            }
        }
    }
}

TEST_CASE("charlier self-duality at integer arguments") {
    for (unsigned n = 0; n <= 9; ++n)
        for (unsigned m = 0; m <= 9; ++m)
            REQUIRE_THAT(charlier(n, 0.6, m),
                         WithinAbs(charlier(m, 0.6, n),
                                   1e-11 * std::max(1.0, std::abs(charlier(n, 0.6, m)))));
}

TEST_CASE("charlier discrete orthogonality with poisson weights") {
    const double mu = 0.5;
    // sum k until the poisson tail drops below 1e-16
    unsigned kmax = 0;
    double tail = 1.0;
    while (tail > 1e-16 && kmax < 300) {
        tail -= poisson_weight(mu, kmax);
        ++kmax;
    }
    for (unsigned n = 0; n <= 10; ++n) {
        for (unsigned m = n; m <= 10; ++m) {
            double s = 0.0;
            for (unsigned k = 0; k <= kmax; ++k)
                s += charlier(n, mu, k) * charlier(m, mu, k) * poisson_weight(mu, k);
            double want = n == m ? std::exp(log_factorial(n) - n * std::log(mu)) : 0.0;
            REQUIRE_THAT(s, WithinAbs(want, 1e-10 * std::max(1.0, want)));
        }
    }
}

TEST_CASE("terminating 2F0 values") {
    CHECK_THAT(hyp2f0_terminating(0u, 5u, 2.7), WithinAbs(1.0, 0.0));
    CHECK_THAT(hyp2f0_terminating(1u, 1u, 0.35), WithinAbs(1.35, 1e-15));
    CHECK_THAT(hyp2f0_terminating(2u, 2u, 1.0), WithinAbs(7.0, 1e-14));  // 1 + 4 + 2
    // complex argument
    std::complex<double> s(0.4, -0.3);
    std::complex<double> v = hyp2f0_terminating(1u, 2u, s);
    CHECK(std::abs(v - (1.0 + 2.0 * s)) < 1e-14);
}

TEST_CASE("laguerre basics and the charlier-laguerre relation") {
    CHECK_THAT(laguerre(0, 1.3, 0.8), WithinAbs(1.0, 0.0));
    CHECK_THAT(laguerre(1, 1.3, 0.8), WithinAbs(1.0 + 1.3 - 0.8, 1e-14));
    // c_n^mu(x) = (-mu)^{-n} n! L_n^{x-n}(mu) at (n, mu, x) = (3, 0.4, 5)
    const unsigned n = 3;
    const double mu = 0.4, x = 5.0;
    double lhs = charlier(n, mu, x);
    double rhs = std::pow(-mu, -static_cast<double>(n)) * std::exp(log_factorial(n)) *
                 laguerre(n, x - n, mu);
    CHECK_THAT(lhs, WithinAbs(rhs, 1e-10 * std::abs(rhs)));
}

TEST_CASE("poisson weights") {
    CHECK_THAT(poisson_weight(0.8, 0), WithinAbs(std::exp(-0.8), 1e-15));
    CHECK_THAT(poisson_weight(1.0, 2), WithinAbs(std::exp(-1.0) / 2.0, 1e-15));
    double sum = 0.0;
    for (unsigned k = 0; k < 80; ++k) sum += poisson_weight(3.5, k);
    CHECK_THAT(sum, WithinAbs(1.0, 1e-14));
}

TEST_CASE("hermite kernel integrals evaluate to laguerre closed forms") {
    // int H_m(x) H_n(x) e^{-(x-y)^2} dx = sqrt(pi) 2^n m! y^{n-m} L_m^{n-m}(-2y^2)
    const QuadRule rule = gauss_hermite_total(80);
    for (double y : {0.3, 1.0}) {
        for (unsigned n = 0; n <= 6; ++n) {
            for (unsigned m = 0; m <= n; ++m) {
                double got = 0.0;
                for (std::size_t j = 0; j < rule.x.size(); ++j) {
                    double u = rule.x[j];  // u = x - y
                    got += rule.w[j] * std::exp(-u * u) * hermite(m, u + y) * hermite(n, u + y);
                }
                double want = std::sqrt(kPi) * std::pow(2.0, n) * std::exp(log_factorial(m)) *
                              std::pow(y, static_cast<double>(n) - m) *
                              laguerre(m, static_cast<double>(n) - m, -2.0 * y * y);
                REQUIRE_THAT(got, WithinRel(want, 1e-8));
            }
        }
    }
    // two-shift form at (y, z) = (0.3, 0.7)
    const double y = 0.3, z = 0.7;
    for (unsigned n = 0; n <= 6; ++n) {
        for (unsigned m = 0; m <= n; ++m) {
            double got = 0.0;
            for (std::size_t j = 0; j < rule.x.size(); ++j) {
                double u = rule.x[j];
                got += rule.w[j] * std::exp(-u * u) * hermite(m, u + y) * hermite(n, u + z);
            }
            double want = std::sqrt(kPi) * std::pow(2.0, n) * std::exp(log_factorial(m)) *
                          std::pow(z, static_cast<double>(n) - m) *
                          laguerre(m, static_cast<double>(n) - m, -2.0 * y * z);
            REQUIRE_THAT(got, WithinRel(want, 1e-8));
        }
    }
}
