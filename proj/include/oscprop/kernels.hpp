#pragma once

// Closed-form integral kernels: the Mehler (Poisson) kernel K_r, the
// generalized Fourier kernel K_tau, the special forced-oscillator kernel
// G_t, the three-parameter kernel L_t and the diffusion kernel H_t.
// Core evaluators are templated on the coordinate type so test oracles can
// follow rotated complex contours through the same code path.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "oscprop/numerics.hpp"

namespace oscprop {

namespace detail {

inline void require_window(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}

}  // namespace detail

// K_r(x,y) = (pi(1-r^2))^{-1/2} exp([4xyr - (x^2+y^2)(1+r^2)] / [2(1-r^2)]).
template <class T>
T mehler_kernel_t(double r, T x, T y) {
    detail::require_window(std::abs(r) < 1.0, "mehler_kernel: requires |r| < 1");
    const double d = 1.0 - r * r;
    return std::exp((4.0 * x * y * r - (x * x + y * y) * (1.0 + r * r)) / (2.0 * d)) /
           std::sqrt(kPi * d);
}

inline double mehler_kernel(double r, double x, double y) { return mehler_kernel_t(r, x, y); }

// K_tau(x,y) = e^{i(pi/2-tau)/2} (2 pi sin tau)^{-1/2}
//              exp(i [2xy - (x^2+y^2) cos tau] / [2 sin tau]),  0 < tau < pi.
// Negative tau evaluates the inversion kernel K_{-tau} = conj(K_tau); for
// complex coordinates (rotated contours) the analytic continuation conjugates
// the arguments as well.
inline std::complex<double> gen_fourier_kernel(double tau, std::complex<double> x,
                                               std::complex<double> y) {
    detail::require_window(tau != 0.0 && std::abs(tau) < kPi,
                           "gen_fourier_kernel: requires 0 < |tau| < pi");
    if (tau < 0.0)
        return std::conj(gen_fourier_kernel(-tau, std::conj(x), std::conj(y)));
    const double s = std::sin(tau), c = std::cos(tau);
    const std::complex<double> pref =
        std::polar(1.0, 0.5 * (kPi / 2.0 - tau)) / std::sqrt(2.0 * kPi * s);
    return pref * std::exp(std::complex<double>(0.0, 1.0) *
                           ((2.0 * x * y - (x * x + y * y) * c) / (2.0 * s)));
}

inline std::complex<double> gen_fourier_kernel(double tau, double x, double y) {
    return gen_fourier_kernel(tau, std::complex<double>(x), std::complex<double>(y));
}

inline void require_caustic_free(double t, double omega) {
    detail::require_window(omega * t > 0.0 && omega * t < kPi && t > 0.0 && t < 2.0 * kPi,
                           "kernel window: requires 0 < omega*t < pi and 0 < t < 2*pi");
}

// Special forced kernel G_t(x,y) via the product form
//   conj(K_{omega t}) * exp(sin((omega-1/2)t) sin(t/2) beta^2 / (2i sin omega t))
//                     * exp((x sin(t/2) + y sin((omega-1/2)t)) beta / (i sin omega t)),
// beta = 2 sqrt(2 mu) sin(t/2). Valid on the caustic-free window only.
inline std::complex<double> special_kernel_g(double t, double omega, double mu, double x,
                                             double y) {
    require_caustic_free(t, omega);
    detail::require_window(mu >= 0.0, "special_kernel_g: requires mu >= 0");
    const double beta = 2.0 * std::sqrt(2.0 * mu) * std::sin(0.5 * t);
    const double s_om = std::sin(omega * t);
    const double s_half = std::sin(0.5 * t);
    const double s_shift = std::sin((omega - 0.5) * t);
    const std::complex<double> inv_i(0.0, -1.0);  // 1/i
    std::complex<double> val = std::conj(gen_fourier_kernel(omega * t, x, y));
    val *= std::exp(inv_i * (s_shift * s_half * beta * beta / (2.0 * s_om)));
    val *= std::exp(inv_i * ((x * s_half + y * s_shift) * beta / s_om));
    return val;
}

// Three-parameter kernel L_t(x,y) (reduces to K_{omega t} at eps = 0).
inline std::complex<double> l_kernel(double t, double omega, double eps, double x, double y) {
    require_caustic_free(t, omega);
    const double s_om = std::sin(omega * t);
    const double s_half = std::sin(0.5 * t);
    const double s_shift = std::sin((omega - 0.5) * t);
    const std::complex<double> i(0.0, 1.0);
    std::complex<double> val = gen_fourier_kernel(omega * t, x, y);
    val *= std::exp(i * (s_shift * s_half * s_half * s_half * eps * eps / (2.0 * s_om)));
    val *= std::exp(i * ((x * s_half + y * s_shift) * s_half * eps / s_om));
    return val;
}

// Diffusion kernel H_t(x,y) in Mehler form, with r1 = e^{-t(2k-1/2)},
// r2 = e^{-t/2}, gamma = 2 eps sinh(t/2); strictly positive for t > 0.
inline double heat_kernel(double t, double kappa, double eps, double x, double y) {
    detail::require_window(t > 0.0, "heat_kernel: requires t > 0");
    detail::require_window(kappa > 0.0, "heat_kernel: requires kappa > 0");
    const double r1 = std::exp(-t * (2.0 * kappa - 0.5));
    const double r2 = std::exp(-0.5 * t);
    const double gamma = 2.0 * eps * std::sinh(0.5 * t);
    const double lin = -((r1 + r2) / (1.0 + r1 * r2) * (x + y) +
                         (r1 - r2) / (1.0 - r1 * r2) * (x - y)) * 0.5 * gamma;
    const double quad =
        (1.0 - r1 * r1) * (1.0 - r2 * r2) / (1.0 - r1 * r1 * r2 * r2) * 0.25 * gamma * gamma;
    return std::exp(lin + quad) * mehler_kernel(r1 * r2, x, y);
}

enum class KernelKind { mehler, gen_fourier, special_g, l_kernel, heat };

// Tagged parameter set for one kernel; used by the CLI tabulator.
struct KernelSpec {
    KernelKind kind = KernelKind::mehler;
    double r = 0.0;       // mehler
    double tau = 0.0;     // gen_fourier
    double t = 0.0;       // special_g / l_kernel / heat
    double omega = 1.0;   // special_g / l_kernel
    double mu = 0.0;      // special_g
    double eps = 0.0;     // l_kernel / heat
    double kappa = 1.0;   // heat

    bool real_valued() const { return kind == KernelKind::mehler || kind == KernelKind::heat; }

    std::complex<double> evaluate(double x, double y) const {
        switch (kind) {
            case KernelKind::mehler: return mehler_kernel(r, x, y);
            case KernelKind::gen_fourier: return gen_fourier_kernel(tau, x, y);
            case KernelKind::special_g: return special_kernel_g(t, omega, mu, x, y);
            case KernelKind::l_kernel: return oscprop::l_kernel(t, omega, eps, x, y);
            case KernelKind::heat: return heat_kernel(t, kappa, eps, x, y);
        }
        throw std::logic_error("KernelSpec: unknown kind");
    }
};

}  // namespace oscprop
