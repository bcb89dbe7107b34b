#pragma once

// External forcing of the oscillator: dipole force f(t), velocity coupling
// g(t) and the frequency, either a positive constant or a positive function
// of time. Function handles must be callable from multiple threads.

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>

namespace oscprop {

using TimeFunction = std::function<double(double)>;

struct DriveSpec {
    TimeFunction f;      // dipole force, dimensionless
    TimeFunction g;      // velocity coupling, dimensionless
    double omega0 = 1.0;
    TimeFunction omega_fn;  // set only for time-dependent frequency

    DriveSpec() : f(zero), g(zero) {}
    DriveSpec(TimeFunction f_, TimeFunction g_, double omega)
        : f(std::move(f_)), g(std::move(g_)), omega0(omega) {
        if (!(omega > 0.0)) throw std::domain_error("DriveSpec: omega must be positive");
    }
    DriveSpec(TimeFunction f_, TimeFunction g_, TimeFunction omega)
        : f(std::move(f_)), g(std::move(g_)), omega_fn(std::move(omega)) {}

    bool time_dependent_omega() const { return static_cast<bool>(omega_fn); }
    double omega(double t) const { return omega_fn ? omega_fn(t) : omega0; }

    static double zero(double) { return 0.0; }
};

// Build the (f, g) pair from the complex coupling delta(t) = (-f + ig)/sqrt(2).
inline DriveSpec drive_from_delta(std::function<std::complex<double>(double)> delta,
                                  double omega) {
    auto d = std::make_shared<std::function<std::complex<double>(double)>>(std::move(delta));
    TimeFunction f = [d](double t) { return -std::sqrt(2.0) * (*d)(t).real(); };
    TimeFunction g = [d](double t) { return std::sqrt(2.0) * (*d)(t).imag(); };
    return DriveSpec(std::move(f), std::move(g), omega);
}

}  // namespace oscprop
