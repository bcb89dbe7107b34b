#pragma once

// Charlier-polynomial transition amplitudes: Heisenberg-Weyl matrix elements
// T_mn / t_mn and the c_nm amplitude matrices for the general forced,
// Landau and diffusion problems.
//
// Every entry combines factorially large and small factors, so the common
// evaluator keeps magnitudes in log space and phases separately. The
// prefactor^n * Charlier product is summed in the regularized form
//   sum_k (-n)_k (-m)_k A^{n-k} B^{m-k} kappa^k / k!,
// which stays finite for A, B -> 0 (the t -> t0 identity limit).

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "oscprop/coeffs.hpp"
#include "oscprop/drive.hpp"
#include "oscprop/params.hpp"
#include "oscprop/specfun.hpp"

namespace oscprop {

namespace detail {

struct ScaledComplex {
    std::complex<double> mantissa{0.0, 0.0};
    double log_scale = 0.0;

    std::complex<double> value() const { return mantissa * std::exp(log_scale); }
};

// sum_k (-n)_k (-m)_k A^{n-k} B^{m-k} kappa^k / k!, magnitudes in log space.
inline ScaledComplex charlier_product_sum(unsigned n, unsigned m, std::complex<double> A,
                                          std::complex<double> B, std::complex<double> kappa) {
    const unsigned kmax = std::min(n, m);
    const double lA = std::abs(A) > 0.0 ? std::log(std::abs(A)) : 0.0;
    const double lB = std::abs(B) > 0.0 ? std::log(std::abs(B)) : 0.0;
    const double lK = std::abs(kappa) > 0.0 ? std::log(std::abs(kappa)) : 0.0;
    const double aA = std::arg(A), aB = std::arg(B), aK = std::arg(kappa);

    std::vector<double> L(kmax + 1);
    std::vector<double> th(kmax + 1);
    std::vector<bool> live(kmax + 1, true);
    double Lmax = -std::numeric_limits<double>::infinity();
    for (unsigned k = 0; k <= kmax; ++k) {
        const unsigned pn = n - k, pm = m - k;
        if ((pn > 0 && A == 0.0) || (pm > 0 && B == 0.0) || (k > 0 && kappa == 0.0)) {
            live[k] = false;
            continue;
        }
        L[k] = log_factorial(n) - log_factorial(pn) + log_factorial(m) - log_factorial(pm) -
               log_factorial(k) + pn * lA + pm * lB + k * lK;
        th[k] = pn * aA + pm * aB + k * aK;
        Lmax = std::max(Lmax, L[k]);
    }
    ScaledComplex out;
    if (!std::isfinite(Lmax)) return out;  // every term vanished
    out.log_scale = Lmax;
    for (unsigned k = 0; k <= kmax; ++k)
        if (live[k]) out.mantissa += std::exp(L[k] - Lmax) * std::polar(1.0, th[k]);
    return out;
}

inline std::complex<double> ipow(long p) {
    switch (((p % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace detail

// Matrix element of the Heisenberg-Weyl representation in the oscillator
// basis: T_mn(a,b,g) = i^{m-n} (m! n!)^{-1/2} e^{i(g - ab/2)} e^{-nu/2}
//   ((ia+b)/sqrt2)^m ((ia-b)/sqrt2)^n c_m^nu(n),  nu = (a^2+b^2)/2.
inline std::complex<double> matrix_element_T(double alpha, double beta, double gamma, unsigned m,
                                             unsigned n) {
    const std::complex<double> i(0.0, 1.0);
    const double nu = 0.5 * (alpha * alpha + beta * beta);
    const std::complex<double> A = (i * alpha + beta) / std::sqrt(2.0);
    const std::complex<double> B = (i * alpha - beta) / std::sqrt(2.0);
    detail::ScaledComplex ps = detail::charlier_product_sum(m, n, A, B, {1.0, 0.0});
    const double logmag =
        ps.log_scale - 0.5 * nu - 0.5 * (log_factorial(m) + log_factorial(n));
    return detail::ipow(static_cast<long>(m) - static_cast<long>(n)) *
           std::polar(1.0, gamma - 0.5 * alpha * beta) * ps.mantissa * std::exp(logmag);
}

// Special case t_mn(beta) = T_mn(0, beta, 0).
inline std::complex<double> t_matrix_element(double beta, unsigned m, unsigned n) {
    return matrix_element_T(0.0, beta, 0.0, m, n);
}

enum class AmplitudeVariant { general, landau, diffusion };

// Truncated transition-amplitude matrix c_nm, 0 <= n, m <= N.
struct AmplitudeMatrix {
    std::vector<std::complex<double>> entries;  // row-major, (N+1) x (N+1)
    unsigned N = 0;
    double t = 0.0;
    double t0 = 0.0;
    AmplitudeVariant variant = AmplitudeVariant::general;
    double tail_bound = 0.0;  // estimated truncated column mass

    std::complex<double> at(unsigned n, unsigned m) const { return entries[n * (N + 1) + m]; }
    std::complex<double>& at(unsigned n, unsigned m) { return entries[n * (N + 1) + m]; }

    double column_norm_sq(unsigned m) const {
        double s = 0.0;
        for (unsigned n = 0; n <= N; ++n) s += std::norm(at(n, m));
        return s;
    }
};

namespace detail {

// c_nm for the oscillator-type problems:
//   pref * i^{n+m} (2^{n+m} n! m!)^{-1/2} (a+bz)^n (b+az)^m c_m^{chi^2/2}(n)
// with z on the unit circle and chi^2 = |a+bz|^2.
inline void fill_oscillator_cnm(AmplitudeMatrix& M, double a, double b, double theta,
                                std::complex<double> pref_phase) {
    const std::complex<double> z = std::polar(1.0, -theta);
    const double chi_sq = a * a + b * b + 2.0 * a * b * std::cos(theta);
    const std::complex<double> A = a + b * z;
    const std::complex<double> B = b + a * z;
    const std::complex<double> kap = -2.0 * z;
    const double ln2 = std::log(2.0);
    for (unsigned n = 0; n <= M.N; ++n) {
        for (unsigned m = 0; m <= M.N; ++m) {
            ScaledComplex ps = charlier_product_sum(n, m, A, B, kap);
            const double logmag = ps.log_scale - 0.25 * chi_sq -
                                  0.5 * ((n + m) * ln2 + log_factorial(n) + log_factorial(m));
            M.at(n, m) = pref_phase * ipow(n + m) * ps.mantissa * std::exp(logmag);
        }
    }
}

inline double unitary_tail_bound(const AmplitudeMatrix& M) {
    double worst = 0.0;
    for (unsigned m = 0; m <= M.N; ++m)
        worst = std::max(worst, 1.0 - M.column_norm_sq(m));
    return std::max(worst, 0.0);
}

}  // namespace detail

// Smallest truncation N whose Poisson-envelope column tail drops below tol.
inline unsigned suggest_truncation(double chi_sq, double tol = 1e-12) {
    const double mu = 0.5 * chi_sq;
    if (mu <= 0.0) return 8;
    double tail = 1.0;
    unsigned n = 0;
    while (tail > tol && n < 4096) {
        tail -= poisson_weight(mu, n);
        ++n;
    }
    return n + 8;
}

// Amplitude matrix for the general forced oscillator (constant frequency).
inline AmplitudeMatrix cnm_general(const DriveSpec& drive, double t, unsigned N) {
    if (N > 128) throw std::invalid_argument("cnm_general: truncation limited to N <= 128");
    PropagatorCoefficients k = compute_coeffs(drive, t);
    const double om = drive.omega0;
    AmplitudeMatrix M;
    M.N = N;
    M.t = t;
    M.variant = AmplitudeVariant::general;
    M.entries.assign((N + 1) * (N + 1), {});
    const std::complex<double> pref =
        std::polar(1.0, k.c - 0.5 * (om * t - k.a * k.b * std::sin(om * t)));
    detail::fill_oscillator_cnm(M, k.a, k.b, om * t, pref);
    M.tail_bound = detail::unitary_tail_bound(M);
    return M;
}

// Amplitude matrix between Landau levels.
inline AmplitudeMatrix cnm_landau(const LandauParams& p, const TimeFunction& F, double t,
                                  double t0, unsigned N) {
    if (N > 128) throw std::invalid_argument("cnm_landau: truncation limited to N <= 128");
    PropagatorCoefficients k = compute_coeffs_landau(p, F, t, t0);
    const double theta = p.omega_h() * (t - t0);
    AmplitudeMatrix M;
    M.N = N;
    M.t = t;
    M.t0 = t0;
    M.variant = AmplitudeVariant::landau;
    M.entries.assign((N + 1) * (N + 1), {});
    const std::complex<double> pref =
        std::polar(1.0, k.c - 0.5 * (theta - k.a * k.b * std::sin(theta)));
    detail::fill_oscillator_cnm(M, k.a, k.b, theta, pref);
    M.tail_bound = detail::unitary_tail_bound(M);
    return M;
}

// Ground-state transition probabilities |c_n0|^2 = e^{-mu} mu^n / n!,
// mu = (a^2 + b^2 + 2ab cos wH(t-t0)) / 2.
inline double transition_prob_ground(const LandauParams& p, const TimeFunction& F, double t,
                                     double t0, unsigned n) {
    PropagatorCoefficients k = compute_coeffs_landau(p, F, t, t0);
    const double theta = p.omega_h() * (t - t0);
    const double mu =
        0.5 * (k.a * k.a + k.b * k.b + 2.0 * k.a * k.b * std::cos(theta));
    if (mu <= 0.0) return n == 0 ? 1.0 : 0.0;
    return poisson_weight(mu, n);
}

// Amplitude matrix for the diffusion-type equation; entries are real.
// The exponent is assembled as c - kt + (a^2+b^2)/4 + (ab/2) e^{-2kt} to
// avoid the cancellation between lambda^2/4 and (ab/2) sinh 2kt at large t.
inline AmplitudeMatrix cnm_diffusion(double kappa, const TimeFunction& f, const TimeFunction& g,
                                     double t, unsigned N) {
    if (N > 128) throw std::invalid_argument("cnm_diffusion: truncation limited to N <= 128");
    PropagatorCoefficients k = compute_coeffs_diffusion(kappa, f, g, t);
    const double r = std::exp(-2.0 * kappa * t);
    AmplitudeMatrix M;
    M.N = N;
    M.t = t;
    M.variant = AmplitudeVariant::diffusion;
    M.entries.assign((N + 1) * (N + 1), {});
    const double exponent =
        k.c - kappa * t + 0.25 * (k.a * k.a + k.b * k.b) + 0.5 * k.a * k.b * r;
    const std::complex<double> A(k.a + k.b * r, 0.0), B(k.b + k.a * r, 0.0);
    const std::complex<double> kap(2.0 * r, 0.0);
    const double ln2 = std::log(2.0);
    for (unsigned n = 0; n <= N; ++n) {
        for (unsigned m = 0; m <= N; ++m) {
            detail::ScaledComplex ps = detail::charlier_product_sum(n, m, A, B, kap);
            const double logmag = ps.log_scale + exponent -
                                  0.5 * ((n + m) * ln2 + log_factorial(n) + log_factorial(m));
            M.at(n, m) = ps.mantissa * std::exp(logmag);
        }
    }
    // geometric estimate of the truncated column mass from the last two rows
    double worst = 0.0;
    for (unsigned m = 0; m <= N; ++m) {
        const double last = std::abs(M.at(N, m)), prev = std::abs(M.at(N - 1, m));
        if (last == 0.0) continue;
        const double rho = prev > 0.0 ? std::min(0.99, (last * last) / (prev * prev)) : 0.5;
        worst = std::max(worst, last * last * rho / (1.0 - rho));
    }
    M.tail_bound = worst;
    return M;
}

}  // namespace oscprop
