#pragma once

// Hermite polynomials, oscillator wavefunctions, Charlier polynomials,
// terminating 2F0 sums, generalized Laguerre polynomials, Poisson weights.
// All evaluations are pure functions; safe to call concurrently.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "oscprop/numerics.hpp"

namespace oscprop {

inline double log_factorial(unsigned n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// Physicists' Hermite polynomial H_n(x) by upward three-term recurrence
// H_{n+1} = 2x H_n - 2n H_{n-1}. Raw values overflow near n ~ 150 for
// moderate x; such results are flagged instead of returned.
inline double hermite(unsigned n, double x) {
    double hm1 = 0.0, h = 1.0;
    for (unsigned k = 0; k < n; ++k) {
        double hp1 = 2.0 * x * h - 2.0 * k * hm1;
        hm1 = h;
        h = hp1;
    }
    if (!std::isfinite(h))
        throw std::overflow_error(
            "hermite: H_n(x) exceeds double range; use osc_wavefunction for large n");
    return h;
}

// Orthonormal oscillator wavefunctions Psi_0..Psi_nmax at x:
//   Psi_n(x) = (2^n n! sqrt(pi))^{-1/2} e^{-x^2/2} H_n(x),
// evaluated by recurrence directly on the weighted, normalized functions so
// nothing overflows for n <= 512, |x| <= 30 (values simply underflow to 0
// far outside the classically allowed region).
inline void osc_wavefunctions(unsigned n_max, double x, std::vector<double>& out) {
    out.resize(n_max + 1);
    const double pim4 = 0.7511255444649425;  // pi^(-1/4)
    out[0] = pim4 * std::exp(-0.5 * x * x);
    if (n_max == 0) return;
    out[1] = x * std::sqrt(2.0) * out[0];
    for (unsigned n = 1; n < n_max; ++n)
        out[n + 1] = x * std::sqrt(2.0 / (n + 1.0)) * out[n] -
                     std::sqrt(static_cast<double>(n) / (n + 1.0)) * out[n - 1];
}

inline std::vector<double> osc_wavefunctions(unsigned n_max, double x) {
    std::vector<double> out;
    osc_wavefunctions(n_max, x, out);
    return out;
}

inline double osc_wavefunction(unsigned n, double x) {
    std::vector<double> tmp;
    osc_wavefunctions(n, x, tmp);
    return tmp[n];
}

// Stateless evaluator for the oscillator basis up to a fixed highest index.
struct OscillatorBasis {
    unsigned n_max = 0;
    static constexpr double x_cut = 30.0;  // finite results guaranteed within |x| <= x_cut
    static constexpr unsigned n_limit = 512;

    std::vector<double> values(double x) const { return osc_wavefunctions(n_max, x); }
};

// Charlier polynomial c_n^mu(x), upward recurrence from c_0 = 1,
// c_1 = 1 - x/mu using mu c_{n+1} = (n + mu - x) c_n - n c_{n-1}.
inline double charlier(unsigned n, double mu, double x) {
    if (!(mu > 0.0)) throw std::domain_error("charlier: requires mu > 0");
    double pm1 = 0.0, p = 1.0;
    for (unsigned k = 0; k < n; ++k) {
        double pp1 = ((k + mu - x) * p - k * pm1) / mu;
        pm1 = p;
        p = pp1;
    }
    return p;
}

struct CharlierParams {
    double mu;      // Poisson parameter, > 0 (orthogonality additionally needs mu < 1)
    unsigned n;     // degree
    double x;       // argument; integer in all uses here

    double eval() const { return charlier(n, mu, x); }
};

// Terminating hypergeometric sum 2F0(-n, -m; s) = sum_k (-n)_k (-m)_k s^k / k!,
// summed in ascending k with compensated accumulation.
template <class T>
T hyp2f0_terminating(unsigned n, unsigned m, T s) {
    T sum{}, comp{}, term{1.0};
    const unsigned kmax = std::min(n, m);
    for (unsigned k = 0;; ++k) {
        T y = term - comp;
        T t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (k == kmax) break;
        term *= (static_cast<double>(k) - static_cast<double>(n)) *
                (static_cast<double>(k) - static_cast<double>(m)) * s / (k + 1.0);
    }
    return sum;
}

// Generalized Laguerre polynomial L_n^alpha(x), three-term recurrence in n.
inline double laguerre(unsigned n, double alpha, double x) {
    double lm1 = 0.0, l = 1.0;
    for (unsigned k = 0; k < n; ++k) {
        double lp1 = ((2.0 * k + 1.0 + alpha - x) * l - (k + alpha) * lm1) / (k + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

// Poisson weight e^{-mu} mu^k / k!, computed in log space.
inline double poisson_weight(double mu, unsigned k) {
    if (!(mu > 0.0)) throw std::domain_error("poisson_weight: requires mu > 0");
    return std::exp(-mu + k * std::log(mu) - log_factorial(k));
}

}  // namespace oscprop
