#pragma once

// Aberth-Ehrlich simultaneous root iteration, generic over the real type so the same code runs
// in double and in boost cpp_bin_float at 106 and 212 bits.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace gpnorm::detail {

using Real106 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<106, boost::multiprecision::digit_base_2>, boost::multiprecision::et_off>;
using Real212 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<212, boost::multiprecision::digit_base_2>, boost::multiprecision::et_off>;

template <class T>
double to_double(const T& x) {
    if constexpr (std::is_same_v<T, double>) {
        return x;
    } else {
        return x.template convert_to<double>();
    }
}

template <class T>
struct Cx {
    T re{0};
    T im{0};

    Cx() = default;
    Cx(T r, T i = T(0)) : re(std::move(r)), im(std::move(i)) {}

    friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cx operator*(const Cx& a, const Cx& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cx operator*(const T& s, const Cx& a) { return {s * a.re, s * a.im}; }
    friend Cx operator/(const Cx& a, const Cx& b) {
        // Smith's algorithm
        using std::abs;
        if (abs(b.re) >= abs(b.im)) {
            T r = b.im / b.re;
            T den = b.re + b.im * r;
            return {(a.re + a.im * r) / den, (a.im - a.re * r) / den};
        }
        T r = b.re / b.im;
        T den = b.re * r + b.im;
        return {(a.re * r + a.im) / den, (a.im * r - a.re) / den};
    }
    Cx conj() const { return {re, -im}; }
};

template <class T>
T abs(const Cx<T>& z) {
    using std::abs;
    using std::sqrt;
    T a = abs(z.re), b = abs(z.im);
    if (a < b) std::swap(a, b);
    if (a == 0) return T(0);
    T r = b / a;
    return a * sqrt(T(1) + r * r);
}

template <class T>
struct Evaluation {
    Cx<T> value;       // p(z)
    Cx<T> newton;      // p(z) / p'(z)
    T error_bound;     // bound on the rounding error of value
    bool newton_ok;    // false when p'(z) vanished numerically
};

// p(z), p(z)/p'(z) and a running-error bound. Uses the reversed polynomial when |z| > 1.
template <class T>
Evaluation<T> evaluate(const std::vector<Cx<T>>& c, const Cx<T>& z) {
    const std::size_t d = c.size() - 1;
    const T eps = std::numeric_limits<T>::epsilon();
    const T az = abs(z);
    Evaluation<T> out;
    if (az <= T(1)) {
        Cx<T> p = c[d], dp{};
        T mag = abs(c[d]);
        for (std::size_t k = d; k-- > 0;) {
            dp = dp * z + p;
            p = p * z + c[k];
            mag = mag * az + abs(c[k]);
        }
        out.value = p;
        out.error_bound = T(4 * (d + 1)) * eps * mag;
        out.newton_ok = !(dp.re == 0 && dp.im == 0);
        if (out.newton_ok) out.newton = p / dp;
        return out;
    }
    // q(y) = y^d p(1/y); p/p' = 1 / (y (d - y q'(y)/q(y)))
    const Cx<T> y = Cx<T>(T(1)) / z;
    const T ay = T(1) / az;
    Cx<T> q = c[0], dq{};
    T mag = abs(c[0]);
    for (std::size_t k = 1; k <= d; ++k) {
        dq = dq * y + q;
        q = q * y + c[k];
        mag = mag * ay + abs(c[k]);
    }
    // p(z) = z^d q(y)
    Cx<T> zd(T(1));
    T azd(1);
    for (std::size_t k = 0; k < d; ++k) {
        zd = zd * z;
        azd *= az;
    }
    out.value = zd * q;
    out.error_bound = T(4 * (d + 1)) * eps * mag * azd;
    if (q.re == 0 && q.im == 0) {
        out.newton = Cx<T>{};
        out.newton_ok = true;
        return out;
    }
    const Cx<T> denom = y * (Cx<T>(T(d)) - y * dq / q);
    out.newton_ok = !(denom.re == 0 && denom.im == 0);
    if (out.newton_ok) out.newton = Cx<T>(T(1)) / denom;
    return out;
}

template <class T>
struct AberthResult {
    std::vector<Cx<T>> roots;
    std::vector<T> radii;
    bool converged = false;
    bool isolated = false;
    int iterations = 0;
};

// Equiangular start on the circle of radius 1 + max|c_k| / |c_d| with a fixed angular offset.
template <class T>
std::vector<Cx<T>> initial_points(const std::vector<Cx<T>>& c) {
    const std::size_t d = c.size() - 1;
    T m(0);
    for (std::size_t k = 0; k < d; ++k) m = std::max(m, abs(c[k]));
    const T radius = T(1) + m / abs(c[d]);
    std::vector<Cx<T>> z(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double angle = 2.0 * std::numbers::pi * (static_cast<double>(i) + 0.25) / static_cast<double>(d) + 0.4;
        z[i] = Cx<T>(radius * T(std::cos(angle)), radius * T(std::sin(angle)));
    }
    return z;
}

template <class T>
AberthResult<T> aberth(const std::vector<Cx<T>>& c, std::vector<Cx<T>> z, int max_iterations) {
    using std::abs;
    const std::size_t d = c.size() - 1;
    const T eps = std::numeric_limits<T>::epsilon();
    AberthResult<T> out;
    std::vector<bool> done(d, false);
    std::size_t remaining = d;
    int it = 0;
    for (; it < max_iterations && remaining > 0; ++it) {
        for (std::size_t i = 0; i < d; ++i) {
            if (done[i]) continue;
            const auto ev = evaluate(c, z[i]);
            const T az = abs(z[i]);
            if (abs(ev.value) <= ev.error_bound) {
                done[i] = true;
                --remaining;
                continue;
            }
            if (!ev.newton_ok) {
                // Nudge off a critical point.
                z[i] = z[i] + Cx<T>(T(1e-3) * (T(1) + az), T(1e-3) * (T(1) + az));
                continue;
            }
            Cx<T> sum{};
            for (std::size_t j = 0; j < d; ++j) {
                if (j != i) sum = sum + Cx<T>(T(1)) / (z[i] - z[j]);
            }
            const Cx<T> denom = Cx<T>(T(1)) - ev.newton * sum;
            const Cx<T> w = (denom.re == 0 && denom.im == 0) ? ev.newton : ev.newton / denom;
            z[i] = z[i] - w;
            if (abs(w) <= T(2) * eps * abs(z[i])) {
                done[i] = true;
                --remaining;
            }
        }
    }
    out.iterations = it;
    out.converged = remaining == 0;

    // Inclusion disks from the Weierstrass corrections: D(z_i, d |p(z_i)| / |c_d prod_{j!=i}(z_i - z_j)|).
    out.radii.assign(d, T(0));
    for (std::size_t i = 0; i < d; ++i) {
        const auto ev = evaluate(c, z[i]);
        Cx<T> prod = c[d];
        for (std::size_t j = 0; j < d; ++j) {
            if (j != i) prod = prod * (z[i] - z[j]);
        }
        const T den = abs(prod);
        if (den == 0) {
            out.radii[i] = std::numeric_limits<T>::infinity();
        } else {
            out.radii[i] = T(d) * (abs(ev.value) + ev.error_bound) / den;
            // account for rounding of the center itself
            out.radii[i] += T(4) * eps * abs(z[i]);
        }
    }
    out.isolated = true;
    for (std::size_t i = 0; i < d && out.isolated; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            if (!(abs(z[i] - z[j]) > out.radii[i] + out.radii[j])) {
                out.isolated = false;
                break;
            }
        }
    }
    out.roots = std::move(z);
    return out;
}

}  // namespace gpnorm::detail
