#pragma once

// Independent verification machinery: a Crank-Nicolson finite-difference
// solver for the forced-oscillator Schrodinger equation and its diffusion
// analog, plus brute-force kernel-composition utilities (dense quadrature on
// decaying integrands, contour-rotated quadrature for Fresnel-type ones, and
// the double momentum integral behind the 3D Landau propagator).

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "oscprop/cauchy_types.hpp"
#include "oscprop/coeffs.hpp"
#include "oscprop/drive.hpp"
#include "oscprop/numerics.hpp"
#include "oscprop/params.hpp"
#include "oscprop/propagators.hpp"

namespace oscprop {

enum class Equation { schrodinger, diffusion };
enum class Boundary { dirichlet_zero };

struct FDConfig {
    double dx = 1.0 / 64.0;
    double dt = 1.0 / 2048.0;  // target step; the actual step divides t_final exactly
    double x_min = -12.0;
    double x_max = 12.0;
    Boundary boundary = Boundary::dirichlet_zero;

    void validate() const {
        if (!(dx > 0.0) || !(dt > 0.0)) throw std::invalid_argument("FDConfig: dx, dt > 0");
        if (!(x_max > x_min)) throw std::invalid_argument("FDConfig: empty span");
    }
};

// Second-order Crank-Nicolson evolution of
//   schrodinger:  psi_t = -i [ (w(t)/2)(-D2 + x^2) - f(t) x ] psi + g(t) D1 psi
//   diffusion:    u_t   = [ kappa (D2 - x^2) + f(t) x ] u - g(t) D1 u
// with centered differences (the g D1 term stays inside the implicit
// operator) and drive coefficients frozen at the half step. Dirichlet-zero
// rows pin the boundary; the grid must be wide enough that edge magnitudes
// stay below the comparison tolerance.
inline SampledWave crank_nicolson_evolve(Equation eq, const DriveSpec& drive, double kappa,
                                         const FDConfig& config, const SampledWave& initial,
                                         double t_final) {
    config.validate();
    initial.validate();
    if (!(t_final > 0.0)) throw std::invalid_argument("crank_nicolson_evolve: t_final > 0");

    const double span = config.x_max - config.x_min;
    const double n_real = span / config.dx;
    if (std::abs(n_real - std::lround(n_real)) > 1e-9)
        throw std::invalid_argument("crank_nicolson_evolve: dx must divide the span");
    const std::size_t n = static_cast<std::size_t>(std::lround(n_real)) + 1;
    const long steps = std::max(1L, std::lround(t_final / config.dt));
    const double dt = t_final / static_cast<double>(steps);

    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = config.x_min + config.dx * static_cast<double>(i);

    // resample initial data onto the oracle grid
    UniformInterpolant<std::complex<double>> interp(initial.x_min, initial.dx(), initial.values);
    std::vector<std::complex<double>> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = (xs[i] >= initial.x_min && xs[i] <= initial.x_max) ? interp(xs[i])
                                                                  : std::complex<double>{};

    using C = std::complex<double>;
    const double inv_dx2 = 1.0 / (config.dx * config.dx);
    std::vector<C> low(n - 1), dia(n), up(n - 1), rhs(n);

    for (long step = 0; step < steps; ++step) {
        const double tm = (static_cast<double>(step) + 0.5) * dt;
        const double fv = drive.f(tm), gv = drive.g(tm);
        C a_dia_base, a_off, a_drift_up, a_drift_dn;
        std::vector<C> a_dia(n);
        if (eq == Equation::schrodinger) {
            const double om = drive.omega(tm);
            const C mi(0.0, -1.0);
            for (std::size_t i = 0; i < n; ++i)
                a_dia[i] = mi * (0.5 * om * (2.0 * inv_dx2 + xs[i] * xs[i]) - fv * xs[i]);
            a_off = mi * (-0.5 * om * inv_dx2);
            a_drift_up = C(gv / (2.0 * config.dx), 0.0);
            a_drift_dn = C(-gv / (2.0 * config.dx), 0.0);
        } else {
            for (std::size_t i = 0; i < n; ++i)
                a_dia[i] = C(kappa * (-2.0 * inv_dx2 - xs[i] * xs[i]) + fv * xs[i], 0.0);
            a_off = C(kappa * inv_dx2, 0.0);
            a_drift_up = C(-gv / (2.0 * config.dx), 0.0);
            a_drift_dn = C(gv / (2.0 * config.dx), 0.0);
        }
        const C up_c = a_off + a_drift_up;  // coupling to i+1
        const C dn_c = a_off + a_drift_dn;  // coupling to i-1
        const C half(0.5 * dt, 0.0);

        // rhs = (I + dt/2 A) w
        rhs[0] = C{};
        rhs[n - 1] = C{};
        for (std::size_t i = 1; i + 1 < n; ++i)
            rhs[i] = w[i] + half * (a_dia[i] * w[i] + up_c * w[i + 1] + dn_c * w[i - 1]);

        // lhs = (I - dt/2 A), Dirichlet identity rows at both ends
        for (std::size_t i = 0; i < n; ++i) dia[i] = 1.0 - half * a_dia[i];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            up[i] = -half * up_c;
            low[i] = -half * dn_c;
        }
        dia[0] = C(1.0, 0.0);
        up[0] = C{};
        dia[n - 1] = C(1.0, 0.0);
        low[n - 2] = C{};

        solve_tridiagonal(low, dia, up, rhs);
        w.swap(rhs);
    }

    SampledWave out;
    out.x_min = config.x_min;
    out.x_max = config.x_max;
    out.values = std::move(w);
    return out;
}

// int A(x,z) B(z,y) dz by dense composite Gauss-Legendre on [a, b]; for
// integrands that decay on the real line.
template <class KA, class KB>
std::complex<double> brute_force_compose(KA&& A, KB&& B, double x, double y, double a, double b,
                                         int n_nodes = 4096) {
    return composite_gauss([&](double z) { return A(x, z) * B(z, y); }, a, b, n_nodes);
}

// Same composition for kernels of pure Fresnel type: the product behaves as
// exp(i(c2 z^2 + b1 z)) at large |z|, so the contour is rotated through the
// stationary point. A and B must accept a complex middle coordinate.
template <class KA, class KB>
std::complex<double> brute_force_compose_fresnel(KA&& A, KB&& B, double x, double y, double c2,
                                                 double b1, int n_nodes = 768) {
    return fresnel_line_integral(
        [&](std::complex<double> z) { return A(x, z) * B(z, y); }, c2, b1, n_nodes);
}

// The 3D Landau propagator as the double Fourier momentum integral over
// (p_x, p_z). Both one-dimensional integrals are Fresnel-type and evaluated
// on rotated contours; the p_x integrand carries the full y0(p_x) shift
// through the transverse propagator.
inline std::complex<double> landau_brute_force(const LandauParams& p, const TimeFunction& F,
                                               double t, double t0, const Vec3& r,
                                               const Vec3& rho, int n_nodes = 1536) {
    const std::complex<double> i(0.0, 1.0);
    LandauPropagator prop(p, F, t, t0);
    const double dt = t - t0;
    const double omH = p.omega_h();
    const double e = p.charge_sign;
    const double int_f =
        integrate_adaptive(F, t0, t, 1e-12, 20000, "landau_brute_force.intF");

    // p_z leg: (1/2 pi hbar) int exp(i((z-zeta) p - p^2 dt / 2m)/hbar) dp
    const double x = r[0], y = r[1], z = r[2];
    const double xi = rho[0], eta = rho[1], zeta = rho[2];
    auto fz = [&](std::complex<double> pz) {
        return std::exp(i * (((z - zeta) * pz - pz * pz * dt / (2.0 * p.mass)) / p.hbar)) /
               (2.0 * kPi * p.hbar);
    };
    const std::complex<double> iz =
        fresnel_line_integral(fz, -dt / (2.0 * p.mass * p.hbar), (z - zeta) / p.hbar, n_nodes);

    // p_x leg: plane-wave factor, the electric part of the action, and the
    // transverse propagator at the p-dependent guiding-center shift y0(p)
    auto fx = [&](std::complex<double> px) {
        const std::complex<double> y0 = -p.light_speed * px / (e * p.H_field);
        return std::exp(i * ((x - xi) * px / p.hbar)) *
               std::exp(-i * (p.light_speed * px * int_f / (p.hbar * e * p.H_field))) *
               prop.transverse(y - y0, eta - y0) / (2.0 * kPi * p.hbar);
    };
    const double c2 = -std::tan(0.5 * omH * dt) / (p.mass * p.hbar * omH);
    const double h = 1e-6;
    const std::complex<double> f0 = fx({0.0, 0.0});
    const std::complex<double> logder = (fx({h, 0.0}) - fx({-h, 0.0})) / (2.0 * h * f0);
    const std::complex<double> ix = fresnel_line_integral(fx, c2, logder.imag(), n_nodes);

    // constant part of the action phase e^{-iS/hbar}: the spin-field term
    const std::complex<double> spin_phase =
        std::exp(i * (p.mu_mag * p.sigma * p.H_field * dt / (p.hbar * p.spin_s)));
    return spin_phase * iz * ix;
}

}  // namespace oscprop
