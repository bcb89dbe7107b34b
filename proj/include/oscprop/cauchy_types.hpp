#pragma once

// State containers shared by the Cauchy engine and the finite-difference
// oracle: complex waves on uniform grids and truncated coefficient vectors
// in the oscillator eigenbasis.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oscprop {

struct GridSpec {
    double x_min = -12.0;
    double x_max = 12.0;
    int n_points = 769;
};

// Complex-valued function sampled on a uniform grid (endpoints included).
// Diffusion states are carried in the real part.
struct SampledWave {
    double x_min = -12.0;
    double x_max = 12.0;
    std::vector<std::complex<double>> values;

    std::size_t n_points() const { return values.size(); }
    double dx() const { return (x_max - x_min) / (static_cast<double>(values.size()) - 1.0); }
    double x(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }

    void validate() const {
        if (values.size() < 16)
            throw std::invalid_argument("SampledWave: need at least 16 grid points");
        if (!(x_max > x_min)) throw std::invalid_argument("SampledWave: empty grid span");
    }

    double edge_magnitude() const {
        return std::max(std::abs(values.front()), std::abs(values.back()));
    }

    // trapezoid L2 norm; spectrally accurate for well-supported smooth waves
    double l2_norm() const {
        double s = 0.5 * (std::norm(values.front()) + std::norm(values.back()));
        for (std::size_t i = 1; i + 1 < values.size(); ++i) s += std::norm(values[i]);
        return std::sqrt(s * dx());
    }

    static SampledWave zeros(const GridSpec& g) {
        SampledWave w;
        w.x_min = g.x_min;
        w.x_max = g.x_max;
        w.values.assign(static_cast<std::size_t>(g.n_points), {});
        return w;
    }

    static SampledWave sample(const GridSpec& g,
                              const std::function<std::complex<double>(double)>& fn) {
        SampledWave w = zeros(g);
        for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] = fn(w.x(i));
        return w;
    }
};

inline double l2_distance(const SampledWave& a, const SampledWave& b) {
    if (a.values.size() != b.values.size())
        throw std::invalid_argument("l2_distance: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
    return std::sqrt(s * a.dx());
}

// Truncated coefficient vector {c_n} in the oscillator eigenbasis.
struct SpectralState {
    std::vector<std::complex<double>> coefficients;
    double parseval_defect = 0.0;

    unsigned truncation() const { return static_cast<unsigned>(coefficients.size()) - 1; }
    double norm_sq() const {
        double s = 0.0;
        for (auto& c : coefficients) s += std::norm(c);
        return s;
    }
};

}  // namespace oscprop
