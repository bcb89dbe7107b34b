#pragma once

// Shared numerical kernels: Gauss-Legendre / Gauss-Hermite rules, adaptive
// quadrature with an embedded-rule error estimate, uniform-grid polynomial
// interpolation, cubic splines, tridiagonal solves and a contour-rotated
// integral for Fresnel-type (imaginary-quadratic-phase) integrands.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <mutex>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace oscprop {

inline constexpr double kPi = 3.14159265358979323846;

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& label, double achieved, double requested)
        : std::runtime_error("quadrature did not converge for '" + label +
                             "': error estimate " + std::to_string(achieved) +
                             " > tolerance " + std::to_string(requested)),
          label_(label) {}
    const std::string& label() const { return label_; }

private:
    std::string label_;
};

struct QuadRule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

// Gauss-Legendre nodes/weights by Newton iteration on the Legendre recurrence.
inline QuadRule gauss_legendre(int n) {
    static std::mutex mtx;
    static std::map<int, QuadRule> cache;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    QuadRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        rule.x[i] = -z;
        rule.x[n - 1 - i] = z;
        rule.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.w[n - 1 - i] = rule.w[i];
    }
    std::lock_guard<std::mutex> lock(mtx);
    cache[n] = rule;
    return rule;
}

// Gauss-Hermite nodes with *total* weights W_i = w_i * exp(x_i^2), suited to
// integrating plain functions with Gaussian decay: int f ~ sum W_i f(x_i).
// The Newton iteration runs on the weighted orthonormal functions so no
// intermediate overflows occur even for large n.
inline QuadRule gauss_hermite_total(int n) {
    static std::mutex mtx;
    static std::map<int, QuadRule> cache;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    QuadRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const double pim4 = 0.7511255444649425;  // pi^(-1/4)
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * rule.x[n - 1];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * rule.x[n - 2];
        } else {
            z = 2.0 * z - rule.x[n - i + 1];
        }
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            // weighted functions: psi_j = e^{-z^2/2} H_j(z) / sqrt(2^j j! sqrt(pi))
            double p1 = pim4 * std::exp(-0.5 * z * z);
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2 - z * p1;  // d/dz of weighted function
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        // at a root, derivative reduces to sqrt(2n) * psi_{n-1}(z)
        rule.x[n - 1 - i] = z;
        rule.x[i] = -z;
        rule.w[n - 1 - i] = 2.0 / (pp * pp);
        rule.w[i] = rule.w[n - 1 - i];
    }
    std::lock_guard<std::mutex> lock(mtx);
    cache[n] = rule;
    return rule;
}

// Fixed-order Gauss panel on [a, b].
template <class F>
auto gauss_panel(F&& f, double a, double b, const QuadRule& rule) -> decltype(f(a)) {
    using R = decltype(f(a));
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    R sum{};
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        sum += rule.w[i] * f(c + h * rule.x[i]);
    return h * sum;
}

// Composite Gauss-Legendre with a fixed total node budget (16-point panels).
template <class F>
auto composite_gauss(F&& f, double a, double b, int n_nodes) -> decltype(f(a)) {
    using R = decltype(f(a));
    const QuadRule& rule = gauss_legendre(16);
    int panels = std::max(1, (n_nodes + 15) / 16);
    R sum{};
    for (int p = 0; p < panels; ++p) {
        double pa = a + (b - a) * p / panels;
        double pb = a + (b - a) * (p + 1) / panels;
        sum += gauss_panel(f, pa, pb, rule);
    }
    return sum;
}

namespace detail {

template <class T>
double norm_of(const T& v) {
    return std::abs(v);
}

}  // namespace detail

// Adaptive quadrature with an embedded GL7/GL15 pair. Bisects the interval
// with the worst error estimate until the summed estimate meets
// max(abs_tol, 1e-14 * |I|), or throws QuadratureError naming the integral.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-11,
                        int max_subdiv = 20000, const std::string& label = "integral")
    -> decltype(f(a)) {
    using R = decltype(f(a));
    const QuadRule& lo = gauss_legendre(7);
    const QuadRule& hi = gauss_legendre(15);

    struct Interval {
        double a, b, err;
        R val;
        bool operator<(const Interval& o) const { return err < o.err; }
    };

    auto eval = [&](double ia, double ib) {
        R v_hi = gauss_panel(f, ia, ib, hi);
        R v_lo = gauss_panel(f, ia, ib, lo);
        return Interval{ia, ib, detail::norm_of(v_hi - v_lo), v_hi};
    };

    std::priority_queue<Interval> heap;
    R total{};
    double total_err = 0.0;
    const int init = 8;
    for (int p = 0; p < init; ++p) {
        Interval iv = eval(a + (b - a) * p / init, a + (b - a) * (p + 1) / init);
        total += iv.val;
        total_err += iv.err;
        heap.push(iv);
    }

    int splits = 0;
    while (total_err > std::max(abs_tol, 1e-14 * detail::norm_of(total))) {
        if (splits >= max_subdiv || heap.empty())
            throw QuadratureError(label, total_err, abs_tol);
        Interval worst = heap.top();
        heap.pop();
        total -= worst.val;
        total_err -= worst.err;
        double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            throw QuadratureError(label, total_err, abs_tol);
        for (Interval iv : {eval(worst.a, mid), eval(mid, worst.b)}) {
            total += iv.val;
            total_err += iv.err;
            heap.push(iv);
        }
        ++splits;
    }
    return total;
}

// Thomas algorithm for tridiagonal systems; diag/rhs are overwritten.
template <class T>
void solve_tridiagonal(std::vector<T>& lower, std::vector<T>& diag,
                       std::vector<T>& upper, std::vector<T>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        T m = lower[i - 1] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

// Cubic spline with not-a-knot end conditions (natural optional); nodes may
// be non-uniform but must be strictly increasing.
template <class T>
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> xs, std::vector<T> ys, bool not_a_knot = true)
        : x_(std::move(xs)), y_(std::move(ys)) {
        const std::size_t n = x_.size();
        if (n < 4 || y_.size() != n)
            throw std::invalid_argument("CubicSpline: need >= 4 matching nodes");
        std::vector<double> h(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            if (h[i] <= 0.0) throw std::invalid_argument("CubicSpline: nodes must increase");
        }
        // interior system in the second derivatives sigma_1 .. sigma_{n-2};
        // the end values are pinned (natural) or eliminated through the
        // third-derivative continuity at x_1 and x_{n-2} (not-a-knot) and
        // recovered afterwards
        const std::size_t ni = n - 2;
        std::vector<T> low(ni - 1, T{}), up(ni - 1, T{}), dia(ni, T{}), r(ni, T{});
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (i >= 2) low[i - 2] = T{h[i - 1]};
            dia[i - 1] = T{2.0 * (h[i - 1] + h[i])};
            if (i <= ni - 1) up[i - 1] = T{h[i]};
            r[i - 1] = 6.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
        }
        double q0 = 0.0, qm = 0.0;
        if (not_a_knot) {
            // sigma_0 = (1 + h0/h1) sigma_1 - (h0/h1) sigma_2 and mirrored
            q0 = h[0] / h[1];
            dia[0] = T{2.0 * (h[0] + h[1]) + h[0] * (1.0 + q0)};
            if (ni > 1) up[0] = T{h[1] - h[0] * q0};
            qm = h[n - 2] / h[n - 3];
            dia[ni - 1] = T{2.0 * (h[n - 3] + h[n - 2]) + h[n - 2] * (1.0 + qm)};
            if (ni > 1) low[ni - 2] = T{h[n - 3] - h[n - 2] * qm};
        }
        solve_tridiagonal(low, dia, up, r);
        m2_.assign(n, T{});
        for (std::size_t i = 0; i < ni; ++i) m2_[i + 1] = r[i];
        if (not_a_knot) {
            m2_[0] = (1.0 + q0) * m2_[1] - q0 * m2_[2];
            m2_[n - 1] = (1.0 + qm) * m2_[n - 2] - qm * m2_[n - 3];
        }
    }

    T operator()(double xq) const {
        std::size_t i = locate(xq);
        double h = x_[i + 1] - x_[i];
        double A = (x_[i + 1] - xq) / h, B = (xq - x_[i]) / h;
        return A * y_[i] + B * y_[i + 1] +
               ((A * A * A - A) * m2_[i] + (B * B * B - B) * m2_[i + 1]) * (h * h) / 6.0;
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    std::size_t locate(double xq) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), xq);
        std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        return std::min(i, x_.size() - 2);
    }
    std::vector<double> x_;
    std::vector<T> y_;
    std::vector<T> m2_;
};

// 8-point sliding Lagrange interpolation on a uniform grid; accuracy O(h^8)
// for smooth data, which the kernel-quadrature and projection paths rely on.
template <class T>
class UniformInterpolant {
public:
    UniformInterpolant() = default;
    UniformInterpolant(double x0, double dx, std::vector<T> values)
        : x0_(x0), dx_(dx), v_(std::move(values)) {
        if (v_.size() < 8) throw std::invalid_argument("UniformInterpolant: need >= 8 samples");
    }

    T operator()(double xq) const {
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v_.size());
        std::ptrdiff_t j = static_cast<std::ptrdiff_t>(std::floor((xq - x0_) / dx_)) - 3;
        j = std::clamp<std::ptrdiff_t>(j, 0, n - 8);
        double xs[8];
        for (int k = 0; k < 8; ++k) xs[k] = x0_ + dx_ * (j + k);
        T out{};
        for (int k = 0; k < 8; ++k) {
            double lk = 1.0;
            for (int l = 0; l < 8; ++l)
                if (l != k) lk *= (xq - xs[l]) / (xs[k] - xs[l]);
            out += lk * v_[j + k];
        }
        return out;
    }

    double x_min() const { return x0_; }
    double x_max() const { return x0_ + dx_ * (v_.size() - 1); }

private:
    double x0_ = 0.0, dx_ = 1.0;
    std::vector<T> v_;
};

// Line integral over the whole real axis of an entire function whose tail
// behaviour is exp(i(c2 z^2 + b1 z)) with real c2 != 0, b1: the contour is
// rotated by +-pi/4 through the stationary point so the integrand becomes a
// decaying Gaussian. f must accept complex arguments.
template <class F>
std::complex<double> fresnel_line_integral(F&& f, double c2, double b1, int n_nodes = 640,
                                           double halfwidth_sigmas = 9.0) {
    if (c2 == 0.0) throw std::invalid_argument("fresnel_line_integral: c2 must be nonzero");
    const double zstar = -b1 / (2.0 * c2);
    const std::complex<double> rot =
        (c2 > 0) ? std::polar(1.0, kPi / 4.0) : std::polar(1.0, -kPi / 4.0);
    const double L = halfwidth_sigmas / std::sqrt(std::abs(c2));
    auto g = [&](double u) { return f(zstar + rot * u); };
    return rot * composite_gauss(g, -L, L, n_nodes);
}

// Chunked parallel map; fn(i) must be safe to call concurrently.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const int nt = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t i = t; i < n; i += nt) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace oscprop
