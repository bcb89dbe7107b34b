#pragma once

// Test-only reference paths kept independent of the implementation code they
// check: alternate closed forms of the kernels, direct Charlier-based matrix
// elements, the singular-integrand coefficient formulas, and quadrature
// helpers with the oscillation-aware node policy.

#include <cmath>
#include <complex>
#include <functional>

#include "oscprop/coeffs.hpp"
#include "oscprop/drive.hpp"
#include "oscprop/numerics.hpp"
#include "oscprop/specfun.hpp"

namespace oracles {

using oscprop::kPi;
using C = std::complex<double>;

inline C ipow(long p) {
    switch (((p % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// Composite quadrature on [a, b] with node count from the window policy:
// a 40-node base plus 10 nodes per phase period, floored at 8 nodes per
// unit length for non-oscillatory but structured integrands.
template <class F>
auto window_integrate(F&& f, double a, double b, double phase_range) -> decltype(f(a)) {
    const int n = static_cast<int>(
        std::ceil(std::max(40.0 + 10.0 * phase_range / (2.0 * kPi), 8.0 * (b - a))));
    return oscprop::composite_gauss(f, a, b, n);
}

// Eigenrelation helper: integrates kernel(x, y) Psi_n(y) over the window
// |y| <= 8 + sqrt(2n+1) with the phase range estimated from the kernel's
// quadratic phase gradient (peak |dphi/dy| * window length).
template <class K>
C kernel_against_state(K&& kernel, unsigned n, double x, double peak_phase_gradient) {
    const double L = 8.0 + std::sqrt(2.0 * n + 1.0);
    const double phase_range = (peak_phase_gradient + std::sqrt(2.0 * n + 1.0)) * 2.0 * L;
    return window_integrate(
        [&](double y) { return kernel(x, y) * oscprop::osc_wavefunction(n, y); }, -L, L,
        phase_range);
}

// t_mn(beta) assembled directly from the Charlier polynomial (log-space
// prefactor); independent of the amplitudes module's product-sum path.
inline C t_mn_ref(double beta, unsigned m, unsigned n) {
    using oscprop::log_factorial;
    if (beta == 0.0) return m == n ? C{1.0, 0.0} : C{0.0, 0.0};
    const double logmag = (m + n) * std::log(std::abs(beta) / std::sqrt(2.0)) -
                          0.5 * (log_factorial(m) + log_factorial(n)) - 0.25 * beta * beta;
    const double sign = (beta < 0.0 && ((m + n) % 2)) ? -1.0 : 1.0;
    return ipow(m + n) * sign * std::exp(logmag) *
           oscprop::charlier(m, 0.5 * beta * beta, static_cast<double>(n));
}

// Special-drive amplitude matrix entry in the single-sum Charlier form, with
// beta(t) = 2 sqrt(2 mu) sin(t/2).
inline C cnm_special_ref(double omega, double mu, double t, unsigned n, unsigned m) {
    using oscprop::log_factorial;
    const double beta = 2.0 * std::sqrt(2.0 * mu) * std::sin(0.5 * t);
    const C phase = std::polar(1.0, -(mu * std::sin(t) + (0.5 * omega - mu) * t)) *
                    std::polar(1.0, -((omega - 1.0) * n + 0.5 * (n + m)) * t);
    if (beta == 0.0) return n == m ? phase : C{};
    const double logmag = (n + m) * std::log(std::abs(beta) / std::sqrt(2.0)) -
                          0.5 * (log_factorial(n) + log_factorial(m)) - 0.25 * beta * beta;
    const double sign = (beta < 0.0 && ((n + m) % 2)) ? -1.0 : 1.0;
    return phase * ipow(-(static_cast<long>(n) + static_cast<long>(m))) * sign *
           std::exp(logmag) * oscprop::charlier(n, 0.5 * beta * beta, static_cast<double>(m));
}

// Special kernel in the fully expanded trigonometric form (the alternate of
// the product form used by the implementation).
inline C special_kernel_g_expanded(double t, double omega, double mu, double x, double y) {
    const C i(0.0, 1.0);
    const double s_om = std::sin(omega * t);
    const double D = std::cos(omega * t) - std::cos((omega - 1.0) * t);
    const C pref = std::polar(1.0, 0.5 * (omega * t - 0.5 * kPi)) / std::sqrt(2.0 * kPi * s_om);
    const C e1 = std::exp(
        ((x * x + y * y) * s_om - (x * x - y * y) * std::sin((omega - 1.0) * t)) / (2.0 * i * D));
    const double kt = (x + y) * std::sin(0.5 * omega * t) * std::cos(0.5 * (omega - 1.0) * t) -
                      (x - y) * std::cos(0.5 * omega * t) * std::sin(0.5 * (omega - 1.0) * t) -
                      std::sqrt(2.0 * mu) * std::sin(0.5 * t) * D;
    const C e2 = std::exp(i * (kt * kt / (s_om * D)));
    return pref * e1 * e2;
}

// Diffusion kernel in the fully expanded two-parameter Mehler-product form.
inline double heat_kernel_expanded(double t, double kappa, double eps, double x, double y) {
    const double r1 = std::exp(-t * (2.0 * kappa - 0.5));
    const double r2 = std::exp(-0.5 * t);
    const double g = 2.0 * eps * std::sinh(0.5 * t);
    const double d1 = 1.0 - r1 * r1, d2 = 1.0 - r2 * r2, d12 = 1.0 - r1 * r1 * r2 * r2;
    const double e1 = -((d12) * (x * x + y * y) + (r1 * r1 - r2 * r2) * (x * x - y * y)) /
                      (2.0 * d1 * d2);
    const double num = d1 * d2 * g - (r1 + r2) * (1.0 - r1 * r2) * (x + y) -
                       (r1 - r2) * (1.0 + r1 * r2) * (x - y);
    const double e2 = num * num / (4.0 * d1 * d2 * d12);
    return std::exp(e1 + e2) / std::sqrt(kPi * d12);
}

// b(t) from the textbook integrand (w a(s) - g(s)) / sin ws with the first
// panel starting at s = 1e-6; a(s) is re-quadrated per outer node.
inline double fho7_b_ref(const oscprop::DriveSpec& drive, double t) {
    const double om = drive.omega0;
    auto a_of = [&](double s) {
        return oscprop::integrate_adaptive(
                   [&](double u) {
                       return drive.f(u) * std::sin(om * u) + drive.g(u) * std::cos(om * u);
                   },
                   0.0, s, 1e-13, 20000, "fho7 inner") /
               std::sin(om * s);
    };
    return oscprop::integrate_adaptive(
        [&](double s) { return (om * a_of(s) - drive.g(s)) / std::sin(om * s); }, 1e-6, t, 1e-11,
        20000, "fho7 outer");
}

// Right side of the extended addition formula at complex s.
inline C heis6a_rhs(double b1, double b2, C s, unsigned m, unsigned n) {
    using oscprop::log_factorial;
    const C lam = 0.5 * (b1 * b1 + b2 * b2 + b1 * b2 * (s + 1.0 / s));
    const C A = b1 + b2 * s, B = b2 + b1 * s;
    C val = ipow(m + n) * std::exp(-(b1 * b1 + b2 * b2 + 2.0 * b1 * b2 * s) / 4.0);
    val *= std::exp(-0.5 * ((m + n) * std::log(2.0) + log_factorial(m) + log_factorial(n)));
    C powm{1.0, 0.0}, pown{1.0, 0.0};
    for (unsigned k = 0; k < m; ++k) powm *= A;
    for (unsigned k = 0; k < n; ++k) pown *= B;
    return val * powm * pown * oscprop::hyp2f0_terminating(m, n, -1.0 / lam);
}

// Diffusion special-case amplitude entry (single 2F0 form).
inline double cnm_diffusion_special_ref(double kappa, double eps, double t, unsigned n,
                                        unsigned m) {
    using oscprop::log_factorial;
    const double q = 1.0 - std::exp(-t);
    const double sign = ((static_cast<long>(n) - static_cast<long>(m)) % 2 != 0) ? -1.0 : 1.0;
    const double logmag = (n + m) * (std::log(eps) + std::log(q)) -
                          0.5 * ((n + m) * std::log(2.0) + log_factorial(n) + log_factorial(m)) -
                          0.5 * eps * eps * q - ((2.0 * kappa - 1.0) * n + kappa - 0.5 * eps * eps) * t;
    const double arg = 2.0 * std::exp(-t) / (eps * eps * q * q);
    return sign * std::exp(logmag) * oscprop::hyp2f0_terminating(n, m, arg);
}

}  // namespace oracles
