#pragma once

// Initial-value solvers: kernel quadrature over sampled waves and spectral
// propagation via amplitude matrices, plus the projection/synthesis pair
// between the two representations.

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oscprop/amplitudes.hpp"
#include "oscprop/cauchy_types.hpp"
#include "oscprop/coeffs.hpp"
#include "oscprop/kernels.hpp"
#include "oscprop/numerics.hpp"
#include "oscprop/propagators.hpp"
#include "oscprop/specfun.hpp"

namespace oscprop {

// ---------------------------------------------------------------------------
// integral propagation

// psi(x, t) = int K(x, y) psi0(y) dy for every output grid point, by
// composite Gauss-Legendre over the input grid. The node budget resolves the
// kernel's fastest local phase (max_phase_gradient, rad per unit y) with >=
// 10 nodes per period, with a floor of 8 nodes per unit length for smooth
// kernels; narrow diffusion kernels pass their width through
// min_feature_size.
template <class Kernel>
SampledWave propagate_integral(Kernel&& kernel, const SampledWave& initial,
                               double max_phase_gradient, double min_feature_size = 1.0,
                               std::vector<std::string>* warnings = nullptr) {
    initial.validate();
    if (initial.edge_magnitude() > 1e-8 && warnings)
        warnings->push_back("support-leak: initial wave magnitude exceeds 1e-8 at grid edge");

    const double len = initial.x_max - initial.x_min;
    const double feature = std::max(1e-6, std::min(1.0, min_feature_size));
    long nodes = std::lround(std::max({256.0, 8.0 * len / feature,
                                       10.0 * max_phase_gradient * len / (2.0 * kPi)}));
    if (nodes > 4'000'000)
        throw std::invalid_argument(
            "propagate_integral: oscillation budget exceeds 4e6 nodes; reduce the grid span "
            "or increase t away from the near-delta regime");

    const int panels = static_cast<int>((nodes + 15) / 16);
    const QuadRule& rule = gauss_legendre(16);
    UniformInterpolant<std::complex<double>> interp(initial.x_min, initial.dx(), initial.values);

    std::vector<double> ys;
    std::vector<std::complex<double>> wpsi;  // weight * psi0 at each node
    ys.reserve(16 * panels);
    wpsi.reserve(16 * panels);
    for (int p = 0; p < panels; ++p) {
        const double a = initial.x_min + len * p / panels;
        const double b = initial.x_min + len * (p + 1) / panels;
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int j = 0; j < 16; ++j) {
            const double y = c + h * rule.x[j];
            ys.push_back(y);
            wpsi.push_back(h * rule.w[j] * interp(y));
        }
    }

    SampledWave out = initial;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double x = out.x(i);
        std::complex<double> acc{};
        for (std::size_t j = 0; j < ys.size(); ++j) acc += kernel(x, ys[j]) * wpsi[j];
        out.values[i] = acc;
    }
    return out;
}

// Variant faces: each wrapper estimates the kernel's phase gradient over the
// wave's grid and binds the time-dependent pieces once.

inline SampledWave propagate_sho(double omega, double t, const SampledWave& w,
                                 std::vector<std::string>* warnings = nullptr) {
    const double X = std::max(std::abs(w.x_min), std::abs(w.x_max));
    const double k_max = 2.0 * X / std::abs(std::sin(omega * t));
    return propagate_integral([&](double x, double y) { return sho_propagator(omega, t, x, y); },
                              w, k_max, 1.0, warnings);
}

inline SampledWave propagate_forced(const DriveSpec& drive, double t, const SampledWave& w,
                                    std::vector<std::string>* warnings = nullptr) {
    ForcedPropagator prop(drive, t);
    const double X = std::max(std::abs(w.x_min), std::abs(w.x_max));
    const double k_max = 2.0 * X / std::abs(std::sin(drive.omega0 * t)) +
                         std::abs(prop.coefficients().b);
    return propagate_integral(prop, w, k_max, 1.0, warnings);
}

// Integral form of the special-drive solution: the extra scalar phase
// multiplies the special kernel G_t.
inline SampledWave propagate_special(double omega, double mu, double t, const SampledWave& w,
                                     std::vector<std::string>* warnings = nullptr) {
    const std::complex<double> phase =
        std::polar(1.0, -(mu * std::sin(t) + (0.5 * omega - mu) * t));
    const double X = std::max(std::abs(w.x_min), std::abs(w.x_max));
    const double beta = 2.0 * std::sqrt(2.0 * mu) * std::abs(std::sin(0.5 * t));
    const double k_max = (2.0 * X + 2.0 * beta) / std::abs(std::sin(omega * t));
    return propagate_integral(
        [&](double x, double y) { return phase * special_kernel_g(t, omega, mu, x, y); }, w,
        k_max, 1.0, warnings);
}

inline SampledWave propagate_tdfreq(const DriveSpec& drive, double t, const SampledWave& w,
                                    std::vector<std::string>* warnings = nullptr) {
    TdfreqPropagator prop(drive, t);
    const double X = std::max(std::abs(w.x_min), std::abs(w.x_max));
    const double k_max =
        2.0 * X / std::abs(std::sin(prop.coefficients().tau)) + std::abs(prop.coefficients().b);
    return propagate_integral(prop, w, k_max, 1.0, warnings);
}

inline SampledWave propagate_diffusion(double kappa, const TimeFunction& f, const TimeFunction& g,
                                       double t, const SampledWave& w,
                                       std::vector<std::string>* warnings = nullptr) {
    DiffusionGreen green(kappa, f, g, t);
    const double r = std::exp(-2.0 * kappa * t);
    const double width = std::sqrt(std::max(1e-12, (1.0 - r * r) / (1.0 + r * r)));
    SampledWave out = propagate_integral(
        [&](double x, double y) { return std::complex<double>(green(x, y), 0.0); }, w, 0.0,
        width, warnings);
    return out;
}

inline SampledWave propagate_physical(const PhysicalParams& params, double t, double t0,
                                      const SampledWave& w,
                                      std::vector<std::string>* warnings = nullptr) {
    PhysicalPropagator prop(params, t, t0);
    const double X = std::max(std::abs(w.x_min), std::abs(w.x_max));
    double k_max;
    if (params.omega > 0.0) {
        const double lam = std::sqrt(params.mass * params.omega / params.hbar);
        k_max = 2.0 * lam * lam * X / std::abs(std::sin(params.omega * (t - t0)));
    } else {
        k_max = 2.0 * params.mass * X / (params.hbar * (t - t0));
    }
    return propagate_integral(prop, w, k_max, 1.0, warnings);
}

// ---------------------------------------------------------------------------
// spectral propagation

inline SpectralState propagate_spectral(const AmplitudeMatrix& M, const SpectralState& initial) {
    if (initial.coefficients.size() != M.N + 1)
        throw std::invalid_argument("propagate_spectral: truncation mismatch");
    SpectralState out;
    out.coefficients.assign(M.N + 1, {});
    for (unsigned n = 0; n <= M.N; ++n) {
        std::complex<double> acc{};
        for (unsigned m = 0; m <= M.N; ++m) acc += M.at(n, m) * initial.coefficients[m];
        out.coefficients[n] = acc;
    }
    return out;
}

// c_m = int Psi_m(y) psi0(y) dy by Gauss-Hermite-weighted quadrature; for a
// sampled wave the integrand values come from 8-point Lagrange interpolation
// on its grid and nodes outside the grid are dropped (the support invariant
// makes them negligible).
inline SpectralState project(const SampledWave& wave, unsigned N) {
    wave.validate();
    const int K = std::max<int>(2 * N + 32, 64);
    const QuadRule rule = gauss_hermite_total(K);
    UniformInterpolant<std::complex<double>> interp(wave.x_min, wave.dx(), wave.values);

    SpectralState out;
    out.coefficients.assign(N + 1, {});
    std::vector<double> psi_n;
    for (int j = 0; j < K; ++j) {
        const double y = rule.x[j];
        if (y < wave.x_min || y > wave.x_max) continue;
        const std::complex<double> wv = rule.w[j] * interp(y);
        osc_wavefunctions(N, y, psi_n);
        for (unsigned mIdx = 0; mIdx <= N; ++mIdx) out.coefficients[mIdx] += psi_n[mIdx] * wv;
    }
    double csum = 0.0;
    for (auto& c : out.coefficients) csum += std::norm(c);
    const double wnorm = wave.l2_norm();
    out.parseval_defect = std::abs(csum - wnorm * wnorm);
    return out;
}

// Analytic-initial-data overload (no grid clipping or interpolation).
inline SpectralState project(const std::function<std::complex<double>(double)>& psi0, unsigned N,
                             int nodes = 0) {
    const int K = nodes > 0 ? nodes : std::max<int>(2 * N + 32, 64);
    const QuadRule rule = gauss_hermite_total(K);
    SpectralState out;
    out.coefficients.assign(N + 1, {});
    std::vector<double> psi_n;
    double wave_norm_sq = 0.0;
    for (int j = 0; j < K; ++j) {
        const double y = rule.x[j];
        const std::complex<double> wv = rule.w[j] * psi0(y);
        wave_norm_sq += (rule.w[j] * std::norm(psi0(y)));
        osc_wavefunctions(N, y, psi_n);
        for (unsigned mIdx = 0; mIdx <= N; ++mIdx) out.coefficients[mIdx] += psi_n[mIdx] * wv;
    }
    double csum = 0.0;
    for (auto& c : out.coefficients) csum += std::norm(c);
    out.parseval_defect = std::abs(csum - wave_norm_sq);
    return out;
}

// psi(x) = sum c_n Psi_n(x) on the grid.
inline SampledWave synthesize(const SpectralState& state, const GridSpec& grid) {
    SampledWave out = SampledWave::zeros(grid);
    const unsigned N = static_cast<unsigned>(state.coefficients.size()) - 1;
    std::vector<double> psi_n;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        osc_wavefunctions(N, out.x(i), psi_n);
        std::complex<double> acc{};
        for (unsigned n = 0; n <= N; ++n) acc += state.coefficients[n] * psi_n[n];
        out.values[i] = acc;
    }
    return out;
}

// <H0> = sum omega (n + 1/2) |c_n|^2 (normalized), the oscillator part of the
// energy in dimensionless units.
inline double energy_expectation(const SpectralState& state, double omega = 1.0) {
    double e = 0.0, nrm = 0.0;
    for (std::size_t n = 0; n < state.coefficients.size(); ++n) {
        const double p = std::norm(state.coefficients[n]);
        e += omega * (n + 0.5) * p;
        nrm += p;
    }
    return nrm > 0.0 ? e / nrm : 0.0;
}

}  // namespace oscprop
