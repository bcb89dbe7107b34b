#pragma once

// Assembled Green functions: simple/forced oscillator, physical units with
// free and constant-field limits, time-dependent frequency, the 3D Landau
// crossed-fields propagator, and the diffusion Green function.
//
// Branch convention used throughout: sqrt(i sigma) = e^{i pi/4} sqrt(sigma)
// for sigma > 0, so every 1/sqrt(2 pi i sin ...) prefactor carries e^{-i pi/4}.
// All evaluation is restricted to the first caustic-free window.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "oscprop/coeffs.hpp"
#include "oscprop/drive.hpp"
#include "oscprop/kernels.hpp"
#include "oscprop/params.hpp"

namespace oscprop {

using Vec3 = std::array<double, 3>;  // (x, y, z)

namespace detail {

inline const std::complex<double> kInvSqrtI = std::polar(1.0, -kPi / 4.0);  // 1/sqrt(i)

}  // namespace detail

// Simple-oscillator kernel G0(x,y,t) = (2 pi i sin wt)^{-1/2}
//   exp(i [(x^2+y^2) cos wt - 2xy] / (2 sin wt)), valid for 0 < wt < pi.
// Templated on the coordinate type for contour-shifted compositions.
template <class T>
std::complex<double> sho_propagator_t(double omega, double t, T x, T y) {
    if (!(omega * t > 0.0 && omega * t < kPi))
        throw std::domain_error("sho_propagator: requires 0 < omega*t < pi (caustic window)");
    const double s = std::sin(omega * t), c = std::cos(omega * t);
    const std::complex<double> i(0.0, 1.0);
    return detail::kInvSqrtI / std::sqrt(2.0 * kPi * s) *
           std::exp(i * (((x * x + y * y) * c - 2.0 * x * y) / (2.0 * s)));
}

inline std::complex<double> sho_propagator(double omega, double t, double x, double y) {
    return sho_propagator_t(omega, t, x, y);
}

// Forced-oscillator propagator G = G0 e^{i(ax + by + c)} with the phase
// coefficients precomputed once per (drive, t); evaluation is then cheap
// enough for quadrature over (x, y) grids.
class ForcedPropagator {
public:
    ForcedPropagator(const DriveSpec& drive, double t)
        : omega_(drive.omega0), t_(t), k_(compute_coeffs(drive, t)) {}

    std::complex<double> operator()(double x, double y) const {
        const std::complex<double> i(0.0, 1.0);
        return sho_propagator(omega_, t_, x, y) * std::exp(i * (k_.a * x + k_.b * y + k_.c));
    }

    const PropagatorCoefficients& coefficients() const { return k_; }
    double omega() const { return omega_; }
    double t() const { return t_; }

private:
    double omega_, t_;
    PropagatorCoefficients k_;
};

inline std::complex<double> forced_propagator(const DriveSpec& drive, double t, double x,
                                              double y) {
    return ForcedPropagator(drive, t)(x, y);
}

// Time-dependent frequency: the constant-frequency kernel in the rescaled
// time tau(t) = int_0^t omega, dressed with the tdfreq coefficients.
class TdfreqPropagator {
public:
    TdfreqPropagator(const DriveSpec& drive, double t) : k_(compute_coeffs_tdfreq(drive, t)) {}

    std::complex<double> operator()(double x, double y) const {
        const std::complex<double> i(0.0, 1.0);
        return sho_propagator(1.0, k_.tau, x, y) * std::exp(i * (k_.a * x + k_.b * y + k_.c));
    }

    const TdfreqCoefficients& coefficients() const { return k_; }

private:
    TdfreqCoefficients k_;
};

inline std::complex<double> tdfreq_propagator(const DriveSpec& drive, double t, double x,
                                              double y) {
    return TdfreqPropagator(drive, t)(x, y);
}

namespace detail {

inline bool nearly_constant(const TimeFunction& fn, double t0, double t, double* value) {
    const int samples = 7;
    double v0 = fn(t0);
    double scale = std::abs(v0) + 1.0;
    for (int i = 1; i < samples; ++i) {
        double v = fn(t0 + (t - t0) * i / (samples - 1));
        if (std::abs(v - v0) > 1e-10 * scale) return false;
    }
    *value = v0;
    return true;
}

}  // namespace detail

// Physical-units propagator. For omega > 0 the evaluation rescales to the
// dimensionless core (xi = sqrt(m w / hbar) x, f = F / sqrt(hbar w m),
// g = sqrt(m w / hbar) G) and applies the kernel-density Jacobian
// sqrt(m w / hbar) exactly once. omega = 0 dispatches to the free-particle
// or constant-field closed forms.
class PhysicalPropagator {
public:
    PhysicalPropagator(const PhysicalParams& params, double t, double t0)
        : p_(params), t_(t), t0_(t0) {
        p_.validate();
        const double dt = t - t0;
        if (p_.omega > 0.0) {
            if (!(p_.omega * dt > 0.0 && p_.omega * dt < kPi))
                throw std::domain_error(
                    "physical_propagator: requires 0 < omega*(t-t0) < pi (caustic window)");
            lambda_ = std::sqrt(p_.mass * p_.omega / p_.hbar);
            const double hbar = p_.hbar, mass = p_.mass, omega = p_.omega;
            const double lam = lambda_;
            TimeFunction F = p_.F, G = p_.Gvel;
            DriveSpec dimless(
                [F, hbar, mass, omega, t0](double s) {
                    return F(t0 + s) / std::sqrt(hbar * omega * mass);
                },
                [G, lam, t0](double s) { return lam * G(t0 + s); }, omega);
            k_ = compute_coeffs(dimless, dt);
        } else {
            if (!(dt > 0.0)) throw std::domain_error("physical_propagator: requires t > t0");
            double gval = 0.0;
            if (!detail::nearly_constant(p_.Gvel, t0, t, &gval) || gval != 0.0)
                throw std::invalid_argument(
                    "physical_propagator: omega = 0 supports G identically 0 only");
            if (!detail::nearly_constant(p_.F, t0, t, &const_force_))
                throw std::invalid_argument(
                    "physical_propagator: omega = 0 requires constant F (no closed form)");
        }
    }

    std::complex<double> operator()(double x, double y) const {
        const std::complex<double> i(0.0, 1.0);
        const double dt = t_ - t0_;
        if (p_.omega > 0.0) {
            const double xi = lambda_ * x, eta = lambda_ * y;
            return lambda_ * sho_propagator(p_.omega, dt, xi, eta) *
                   std::exp(i * (k_.a * xi + k_.b * eta + k_.c));
        }
        // free particle, with the constant-field phase when F != 0
        std::complex<double> g0 = detail::kInvSqrtI *
                                  std::sqrt(p_.mass / (2.0 * kPi * p_.hbar * dt)) *
                                  std::exp(i * (p_.mass * (x - y) * (x - y) / (2.0 * p_.hbar * dt)));
        if (const_force_ != 0.0) {
            const double F = const_force_;
            g0 *= std::exp(i * (F * (x + y) * dt / (2.0 * p_.hbar) -
                                F * F * dt * dt * dt / (24.0 * p_.hbar * p_.mass)));
        }
        return g0;
    }

    const PropagatorCoefficients& coefficients() const { return k_; }

private:
    PhysicalParams p_;
    double t_, t0_;
    double lambda_ = 0.0;
    double const_force_ = 0.0;
    PropagatorCoefficients k_;
};

inline std::complex<double> physical_propagator(const PhysicalParams& params, double t, double t0,
                                                double x, double y) {
    return PhysicalPropagator(params, t, t0)(x, y);
}

// 3D Landau propagator, factorized as G0(z - zeta) * G_H * G_F: free motion
// along the magnetic field, transverse motion in the field, and the electric
// field contribution e^{i W_F / hbar}.
class LandauPropagator {
public:
    LandauPropagator(const LandauParams& params, const TimeFunction& F, double t, double t0)
        : p_(params), t_(t), t0_(t0), k_(compute_coeffs_landau(params, F, t, t0)) {}

    // free-particle factor along z
    std::complex<double> free_z(double z) const {
        const std::complex<double> i(0.0, 1.0);
        const double dt = t_ - t0_;
        return detail::kInvSqrtI * std::sqrt(p_.mass / (2.0 * kPi * p_.hbar * dt)) *
               std::exp(i * (p_.mass * z * z / (2.0 * p_.hbar * dt)));
    }

    // transverse factor G_H: motion in the plane perpendicular to the field
    // with no electric force
    std::complex<double> gh(double x, double xi, double y, double eta) const {
        const std::complex<double> i(0.0, 1.0);
        const double dt = t_ - t0_;
        const double th2 = 0.5 * p_.omega_h() * dt;
        const double cs = p_.charge_sign;
        const std::complex<double> pref =
            std::exp(i * (p_.mu_mag * p_.sigma * p_.H_field * dt / (p_.hbar * p_.spin_s))) *
            (p_.mass * p_.omega_h() / (4.0 * kPi * p_.hbar * std::sin(th2))) * (-i);
        const double dx = x - xi, dy = y - eta;
        return pref * std::exp(i * (p_.mass * p_.omega_h() / (4.0 * p_.hbar) *
                                    ((dx * dx + dy * dy) / std::tan(th2) -
                                     2.0 * cs * dx * (y + eta))));
    }

    // electric-field factor G_F = e^{i W_F / hbar}
    std::complex<double> gf(double x, double xi, double y, double eta) const {
        const std::complex<double> i(0.0, 1.0);
        const double dt = t_ - t0_;
        const double th2 = 0.5 * p_.omega_h() * dt;
        const double cs = p_.charge_sign;
        const double wf = p_.hbar * (k_.a * y + k_.b * eta + k_.c) +
                          0.25 * p_.mass * p_.omega_h() * k_.d *
                              ((k_.d + 2.0 * (x - xi)) / std::tan(th2) - 2.0 * cs * (y + eta));
        return std::exp(i * (wf / p_.hbar));
    }

    std::complex<double> operator()(const Vec3& r, const Vec3& rho) const {
        return free_z(r[2] - rho[2]) * gh(r[0], rho[0], r[1], rho[1]) *
               gf(r[0], rho[0], r[1], rho[1]);
    }

    // 1D transverse propagator (used by the brute-force momentum integral);
    // accepts complex, y0-shifted coordinates.
    template <class T>
    std::complex<double> transverse(T y, T eta) const {
        const std::complex<double> i(0.0, 1.0);
        const double dt = t_ - t0_;
        const double th = p_.omega_h() * dt;
        const std::complex<double> pref =
            detail::kInvSqrtI *
            std::sqrt(p_.mass * p_.omega_h() / (2.0 * kPi * p_.hbar * std::sin(th)));
        return pref *
               std::exp(i * (p_.mass * p_.omega_h() / (2.0 * p_.hbar * std::sin(th)) *
                             ((y * y + eta * eta) * std::cos(th) - 2.0 * y * eta))) *
               std::exp(i * (k_.a * y + k_.b * eta + k_.c));
    }

    const PropagatorCoefficients& coefficients() const { return k_; }
    const LandauParams& params() const { return p_; }
    double t() const { return t_; }
    double t0() const { return t0_; }

private:
    LandauParams p_;
    double t_, t0_;
    PropagatorCoefficients k_;
};

inline std::complex<double> landau_propagator(const LandauParams& params, const TimeFunction& F,
                                              double t, double t0, const Vec3& r,
                                              const Vec3& rho) {
    return LandauPropagator(params, F, t, t0)(r, rho);
}

// Gauge transformation to the symmetric gauge: G_H picks up the phases
// e^{i e f(x,y)/(hbar c)} ... e^{-i e f(xi,eta)/(hbar c)} with f(x,y) = xyH/2.
inline std::complex<double> gauge_transform_landau(const LandauParams& p,
                                                   std::complex<double> gh_value, double x,
                                                   double xi, double y, double eta) {
    const std::complex<double> i(0.0, 1.0);
    const double e = p.charge_sign;
    const double scale = e * p.H_field / (2.0 * p.hbar * p.light_speed);
    return std::exp(i * (scale * x * y)) * gh_value * std::exp(-i * (scale * xi * eta));
}

// Diffusion Green function H = H0 e^{ax + by + c} with
// H0 = sqrt(r) K_r(x, y), r = e^{-2 kappa t}; strictly positive.
class DiffusionGreen {
public:
    DiffusionGreen(double kappa, const TimeFunction& f, const TimeFunction& g, double t)
        : kappa_(kappa), t_(t), k_(compute_coeffs_diffusion(kappa, f, g, t)) {}

    double operator()(double x, double y) const {
        const double r = std::exp(-2.0 * kappa_ * t_);
        return std::sqrt(r) * mehler_kernel(r, x, y) * std::exp(k_.a * x + k_.b * y + k_.c);
    }

    const PropagatorCoefficients& coefficients() const { return k_; }

private:
    double kappa_, t_;
    PropagatorCoefficients k_;
};

inline double diffusion_green(double kappa, const TimeFunction& f, const TimeFunction& g,
                              double t, double x, double y) {
    return DiffusionGreen(kappa, f, g, t)(x, y);
}

// One sampled propagator value with its evaluation context.
enum class PropagatorVariant { sho, forced, tdfreq, physical, landau, diffusion };

struct GreenFunctionSample {
    std::complex<double> value;
    double x = 0.0, y = 0.0;
    double t = 0.0, t0 = 0.0;
    PropagatorVariant variant = PropagatorVariant::sho;
};

}  // namespace oscprop
