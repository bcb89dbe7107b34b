#pragma once

// Drive-dependent phase coefficients a, b, c (plus d, S for the Landau
// problem) for the four problem variants: constant frequency, time-dependent
// frequency, Landau (physical units) and diffusion. All variants share the
// same scheme: a cumulative panel integration of the raw integral A(s) on a
// dense grid, a cubic-spline cache of a(s) = A(s)/sin(...) for the nested
// c-integral, and adaptive quadrature (abs tol 1e-11) for the single
// integrals. b uses the non-singular integrated-by-parts form where one
// exists; otherwise the removable 1/sin(h) origin is patched by Richardson
// extrapolation below s = 1e-4.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "oscprop/drive.hpp"
#include "oscprop/numerics.hpp"
#include "oscprop/params.hpp"

namespace oscprop {

struct PropagatorCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;  // Landau variant only
    double S = 0.0;  // Landau variant only
    double t = 0.0;
    double t0 = 0.0;
};

struct TdfreqCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double tau = 0.0;  // rescaled time, integral of omega
    double t = 0.0;
};

namespace detail {

inline constexpr int kCacheIntervals = 2048;
inline constexpr double kCoeffTol = 1e-11;
inline constexpr double kOriginCut = 1e-4;

// Cumulative integral of `f` on [t0, t] at kCacheIntervals+1 uniform nodes.
inline std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                               double t0, double t,
                                               std::vector<double>& nodes) {
    const int m = kCacheIntervals;
    const QuadRule& rule = gauss_legendre(15);
    nodes.resize(m + 1);
    std::vector<double> acc(m + 1);
    acc[0] = 0.0;
    for (int i = 0; i <= m; ++i) nodes[i] = t0 + (t - t0) * i / m;
    for (int i = 0; i < m; ++i)
        acc[i + 1] = acc[i] + gauss_panel(f, nodes[i], nodes[i + 1], rule);
    return acc;
}

// Integrate an integrand with a removable singularity flattened at the left
// endpoint: Richardson-extrapolated limit + trapezoid patch on [s0, s0+cut],
// adaptive quadrature beyond.
inline double integrate_with_removable_origin(const std::function<double(double)>& integrand,
                                              double s0, double t, const std::string& label) {
    const double cut = std::min(kOriginCut, 0.125 * (t - s0));
    const double i_cut = integrand(s0 + cut);
    const double limit = 2.0 * integrand(s0 + 0.5 * cut) - i_cut;
    double patch = 0.5 * cut * (limit + i_cut);
    return patch + integrate_adaptive(integrand, s0 + cut, t, kCoeffTol, 20000, label);
}

}  // namespace detail

// Coefficients for the constant-frequency forced oscillator:
//   a(t) = (1/sin wt) int_0^t (f sin ws + g cos ws) ds
//   b(t) = -(1/sin wt) int_0^t (f(s) sin w(s-t) + g(s) cos w(s-t)) ds
//   c(t) = (1/2) sin wt cos wt a(t)^2 + int_0^t A(s)(-f cos ws + g sin ws) ds
// with A(s) the raw a-integral. The b form is the integrated-by-parts one;
// the textbook (w a - g)/sin ws integrand is 0/0 at the origin.
inline PropagatorCoefficients compute_coeffs(const DriveSpec& drive, double t) {
    if (drive.time_dependent_omega())
        throw std::invalid_argument("compute_coeffs: use compute_coeffs_tdfreq for omega(t)");
    const double om = drive.omega0;
    if (!(om * t > 0.0 && om * t < kPi))
        throw std::domain_error("compute_coeffs: requires 0 < omega*t < pi");

    const double s_t = std::sin(om * t);
    std::vector<double> nodes;
    auto raw = [&](double s) { return drive.f(s) * std::sin(om * s) + drive.g(s) * std::cos(om * s); };
    std::vector<double> acc = detail::cumulative_integral(raw, 0.0, t, nodes);
    CubicSpline<double> a_raw(nodes, acc);  // spline of A(s)

    PropagatorCoefficients k;
    k.t = t;
    k.a = acc.back() / s_t;
    k.b = -integrate_adaptive(
              [&](double s) {
                  return drive.f(s) * std::sin(om * (s - t)) + drive.g(s) * std::cos(om * (s - t));
              },
              0.0, t, detail::kCoeffTol, 20000, "coeffs.b") /
          s_t;
    k.c = 0.5 * s_t * std::cos(om * t) * k.a * k.a +
          integrate_adaptive(
              [&](double s) {
                  return a_raw(s) * (-drive.f(s) * std::cos(om * s) + drive.g(s) * std::sin(om * s));
              },
              0.0, t, detail::kCoeffTol, 20000, "coeffs.c");
    return k;
}

// Time-dependent frequency. tau(t) = int_0^t omega and the inner a(tau(s))
// are cached as splines on the dense grid, so the nested b and c integrals
// cost a single adaptive pass each.
inline TdfreqCoefficients compute_coeffs_tdfreq(const DriveSpec& drive, double t) {
    if (!drive.time_dependent_omega())
        throw std::invalid_argument("compute_coeffs_tdfreq: drive must carry omega(t)");
    if (!(t > 0.0)) throw std::domain_error("compute_coeffs_tdfreq: requires t > 0");

    std::vector<double> nodes;
    std::vector<double> tau_acc =
        detail::cumulative_integral([&](double s) { return drive.omega(s); }, 0.0, t, nodes);
    CubicSpline<double> tau_s(nodes, tau_acc);
    const double tau_t = tau_acc.back();
    if (!(tau_t > 0.0 && tau_t < kPi))
        throw std::domain_error("compute_coeffs_tdfreq: requires 0 < tau(t) < pi");

    std::vector<double> nodes2;
    auto raw = [&](double s) {
        const double ts = tau_s(s);
        return drive.f(s) * std::sin(ts) + drive.g(s) * std::cos(ts);
    };
    std::vector<double> acc = detail::cumulative_integral(raw, 0.0, t, nodes2);
    std::vector<double> a_vals(acc.size());
    a_vals[0] = drive.g(0.0) / drive.omega(0.0);  // removable limit at s = 0
    for (std::size_t i = 1; i < acc.size(); ++i) a_vals[i] = acc[i] / std::sin(tau_s(nodes2[i]));
    CubicSpline<double> a_s(nodes2, a_vals);

    TdfreqCoefficients k;
    k.t = t;
    k.tau = tau_t;
    k.a = acc.back() / std::sin(tau_t);
    k.b = detail::integrate_with_removable_origin(
        [&](double s) { return (drive.omega(s) * a_s(s) - drive.g(s)) / std::sin(tau_s(s)); }, 0.0,
        t, "tdfreq.b");
    k.c = integrate_adaptive(
        [&](double s) {
            const double as = a_s(s);
            return drive.g(s) * as - 0.5 * drive.omega(s) * as * as;
        },
        0.0, t, detail::kCoeffTol, 20000, "tdfreq.c");
    return k;
}

// Landau coefficients (physical units, drive F(t) along y):
//   a(t,t0) = (1/(hbar sin wH dt)) int F(s) sin wH(s-t0) ds,   b(t,t0) = -a(t0,t),
//   c(t,t0) = -(hbar/2m) int a(s,t0)^2 ds,
//   d(t,t0) = (c/(e H sin wH dt)) int F(s)[sin wH(s-t0) - sin wH(s-t) - sin wH dt] ds,
//   S(t,t0) = (pz^2/2m - mu sigma H / s)(t-t0) + (c px/(e H)) int F.
inline PropagatorCoefficients compute_coeffs_landau(const LandauParams& p,
                                                    const TimeFunction& F, double t, double t0) {
    p.validate();
    const double omH = p.omega_h();
    const double dt = t - t0;
    if (!(omH * dt > 0.0 && omH * dt < kPi))
        throw std::domain_error("compute_coeffs_landau: requires 0 < omega_H (t-t0) < pi");
    const double s_t = std::sin(omH * dt);
    const double e = p.charge_sign;

    std::vector<double> nodes;
    auto raw = [&](double s) { return F(s) * std::sin(omH * (s - t0)); };
    std::vector<double> acc = detail::cumulative_integral(raw, t0, t, nodes);
    std::vector<double> a_vals(acc.size());
    a_vals[0] = 0.0;
    for (std::size_t i = 1; i < acc.size(); ++i)
        a_vals[i] = acc[i] / (p.hbar * std::sin(omH * (nodes[i] - t0)));
    CubicSpline<double> a_s(nodes, a_vals);

    PropagatorCoefficients k;
    k.t = t;
    k.t0 = t0;
    k.a = acc.back() / (p.hbar * s_t);
    k.b = -integrate_adaptive([&](double s) { return F(s) * std::sin(omH * (s - t)); }, t0, t,
                              detail::kCoeffTol, 20000, "landau.b") /
          (p.hbar * s_t);
    k.c = -(p.hbar / (2.0 * p.mass)) *
          integrate_adaptive([&](double s) { return a_s(s) * a_s(s); }, t0, t, detail::kCoeffTol,
                             20000, "landau.c");
    k.d = (p.light_speed / (e * p.H_field * s_t)) *
          integrate_adaptive(
              [&](double s) {
                  return F(s) * (std::sin(omH * (s - t0)) - std::sin(omH * (s - t)) - s_t);
              },
              t0, t, detail::kCoeffTol, 20000, "landau.d");
    const double intF =
        integrate_adaptive(F, t0, t, detail::kCoeffTol, 20000, "landau.S");
    k.S = (p.p_z * p.p_z / (2.0 * p.mass) - p.mu_mag * p.sigma * p.H_field / p.spin_s) * dt +
          p.light_speed * p.p_x / (e * p.H_field) * intF;
    return k;
}

// Diffusion coefficients:
//   a(t) = (1/sinh 2kt) int_0^t (f sinh 2ks + g cosh 2ks) ds
//   b(t) = int_0^t (2k a(s) - g(s)) / sinh 2ks ds   (removable origin patched)
//   c(t) = int_0^t (k a(s)^2 - g(s) a(s)) ds
inline PropagatorCoefficients compute_coeffs_diffusion(double kappa, const TimeFunction& f,
                                                       const TimeFunction& g, double t) {
    if (!(kappa > 0.0)) throw std::domain_error("compute_coeffs_diffusion: requires kappa > 0");
    if (!(t > 0.0)) throw std::domain_error("compute_coeffs_diffusion: requires t > 0");

    std::vector<double> nodes;
    auto raw = [&](double s) {
        return f(s) * std::sinh(2.0 * kappa * s) + g(s) * std::cosh(2.0 * kappa * s);
    };
    std::vector<double> acc = detail::cumulative_integral(raw, 0.0, t, nodes);
    std::vector<double> a_vals(acc.size());
    a_vals[0] = g(0.0) / (2.0 * kappa);  // removable limit at s = 0
    for (std::size_t i = 1; i < acc.size(); ++i)
        a_vals[i] = acc[i] / std::sinh(2.0 * kappa * nodes[i]);
    CubicSpline<double> a_s(nodes, a_vals);

    PropagatorCoefficients k;
    k.t = t;
    k.a = acc.back() / std::sinh(2.0 * kappa * t);
    k.b = detail::integrate_with_removable_origin(
        [&](double s) { return (2.0 * kappa * a_s(s) - g(s)) / std::sinh(2.0 * kappa * s); }, 0.0,
        t, "diffusion.b");
    k.c = integrate_adaptive(
        [&](double s) {
            const double as = a_s(s);
            return kappa * as * as - g(s) * as;
        },
        0.0, t, detail::kCoeffTol, 20000, "diffusion.c");
    return k;
}

}  // namespace oscprop
