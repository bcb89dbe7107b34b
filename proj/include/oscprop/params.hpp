#pragma once

// Physical-units parameter sets for the dimensional propagators.

#include <cmath>
#include <stdexcept>

#include "oscprop/drive.hpp"

namespace oscprop {

// Oscillator in physical units: H = p^2/2m + m w^2 x^2/2 - F(t) x - G(t) p.
// omega = 0 is permitted only for the free / constant-field closed forms.
struct PhysicalParams {
    double hbar = 1.0;
    double mass = 1.0;
    double omega = 1.0;
    TimeFunction F = DriveSpec::zero;     // external force
    TimeFunction Gvel = DriveSpec::zero;  // velocity coupling

    void validate() const {
        if (!(hbar > 0.0) || !(mass > 0.0))
            throw std::domain_error("PhysicalParams: hbar and mass must be positive");
        if (omega < 0.0) throw std::domain_error("PhysicalParams: omega must be >= 0");
    }
};

// Charged spinning particle in a uniform magnetic field H e_z with a
// perpendicular, time-dependent electric force F(t) e_y. The charge
// magnitude is normalized to 1 (absorbed into H_field), so e = charge_sign,
// omega_H = H/(m c) and y0 = -c p_x / (e H).
struct LandauParams {
    double hbar = 1.0;
    double mass = 1.0;
    double light_speed = 1.0;
    double charge_sign = 1.0;  // e/|e|
    double H_field = 1.0;      // magnetic field magnitude, > 0
    double mu_mag = 0.0;       // magnetic moment magnitude
    double spin_s = 0.5;       // spin, positive half-integer
    double sigma = 0.5;        // spin projection, in {-s, ..., s}
    double p_x = 0.0;
    double p_z = 0.0;

    double omega_h() const { return H_field / (mass * light_speed); }
    double y0() const { return -light_speed * p_x / (charge_sign * H_field); }

    void validate() const {
        if (!(hbar > 0.0) || !(mass > 0.0) || !(light_speed > 0.0) || !(H_field > 0.0))
            throw std::domain_error("LandauParams: hbar, mass, c, H must be positive");
        if (charge_sign != 1.0 && charge_sign != -1.0)
            throw std::domain_error("LandauParams: charge_sign must be +1 or -1");
        if (!(spin_s > 0.0) || std::abs(sigma) > spin_s + 1e-12)
            throw std::domain_error("LandauParams: need s > 0 and |sigma| <= s");
    }
};

}  // namespace oscprop
