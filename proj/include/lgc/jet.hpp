#pragma once

#include <lgc/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <vector>

namespace lgc {

/// Truncated power series in (t - center) with real coefficients.
///
/// A jet of order N stores coefficients c_0..c_N.  Binary arithmetic
/// requires equal centers and truncates to the smaller order; the result
/// order is always the exactly achievable one, never padded.
class Jet {
public:
    Jet() : center_(0.0), c_(1, 0.0) {}

    Jet(double center, std::vector<double> coeffs) : center_(center), c_(std::move(coeffs)) {
        if (c_.empty()) throw ShapeError("Jet: empty coefficient list");
        for (double v : c_)
            if (!std::isfinite(v)) throw ShapeError("Jet: nonfinite coefficient");
    }

    static Jet constant(double value, int order = 0, double center = 0.0) {
        std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
        c[0] = value;
        return Jet(center, std::move(c));
    }

    /// The identity jet t |-> t expanded at `center`, truncated to `order`.
    static Jet variable(double center, int order) {
        if (order < 1) throw ShapeError("Jet::variable: order must be >= 1");
        std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
        c[0] = center;
        c[1] = 1.0;
        return Jet(center, std::move(c));
    }

    double center() const { return center_; }
    int order() const { return static_cast<int>(c_.size()) - 1; }
    double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
    double& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
    const std::vector<double>& coeffs() const { return c_; }

    double eval(double t) const {
        double dt = t - center_, acc = 0.0;
        for (int k = order(); k >= 0; --k) acc = acc * dt + c_[static_cast<std::size_t>(k)];
        return acc;
    }

    Jet truncated(int new_order) const {
        if (new_order < 0) throw ShapeError("Jet::truncated: negative order");
        std::vector<double> c(c_.begin(), c_.begin() + std::min<std::size_t>(c_.size(), new_order + 1));
        c.resize(static_cast<std::size_t>(new_order) + 1, 0.0);
        return Jet(center_, std::move(c));
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (double v : c_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    double center_;
    std::vector<double> c_;
};

namespace detail {
inline void require_same_center(const Jet& a, const Jet& b) {
    if (a.center() != b.center()) throw ShapeError("jet arithmetic: center mismatch");
}
} // namespace detail

inline Jet operator+(const Jet& a, const Jet& b) {
    detail::require_same_center(a, b);
    int n = std::min(a.order(), b.order());
    std::vector<double> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = a[k] + b[k];
    return Jet(a.center(), std::move(c));
}

inline Jet operator-(const Jet& a, const Jet& b) {
    detail::require_same_center(a, b);
    int n = std::min(a.order(), b.order());
    std::vector<double> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = a[k] - b[k];
    return Jet(a.center(), std::move(c));
}

inline Jet operator-(const Jet& a) {
    std::vector<double> c(a.coeffs());
    for (double& v : c) v = -v;
    return Jet(a.center(), std::move(c));
}

/// Cauchy product truncated to the smaller operand order.
inline Jet operator*(const Jet& a, const Jet& b) {
    detail::require_same_center(a, b);
    int n = std::min(a.order(), b.order());
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k)
        for (int j = 0; j <= k; ++j) c[static_cast<std::size_t>(k)] += a[j] * b[k - j];
    return Jet(a.center(), std::move(c));
}

inline Jet operator*(double s, const Jet& a) {
    std::vector<double> c(a.coeffs());
    for (double& v : c) v *= s;
    return Jet(a.center(), std::move(c));
}
inline Jet operator*(const Jet& a, double s) { return s * a; }

/// d/dt, dropping one order.
inline Jet derive(const Jet& a) {
    if (a.order() < 1) throw ShapeError("jet derive: order 0 input");
    std::vector<double> c(static_cast<std::size_t>(a.order()));
    for (int k = 1; k <= a.order(); ++k) c[static_cast<std::size_t>(k - 1)] = k * a[k];
    return Jet(a.center(), std::move(c));
}

/// Multiplicative inverse to jet order; requires c_0 != 0.
inline Jet invert(const Jet& a) {
    if (a[0] == 0.0) throw ShapeError("jet invert: zero constant term");
    int n = a.order();
    std::vector<double> b(static_cast<std::size_t>(n) + 1, 0.0);
    b[0] = 1.0 / a[0];
    for (int k = 1; k <= n; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += a[j] * b[static_cast<std::size_t>(k - j)];
        b[static_cast<std::size_t>(k)] = -s * b[0];
    }
    return Jet(a.center(), std::move(b));
}

/// Square root to jet order; requires c_0 > 0.
inline Jet sqrt(const Jet& a) {
    if (a[0] <= 0.0) throw ShapeError("jet sqrt: constant term must be positive");
    int n = a.order();
    std::vector<double> b(static_cast<std::size_t>(n) + 1, 0.0);
    b[0] = std::sqrt(a[0]);
    for (int k = 1; k <= n; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k - 1; ++j) s += b[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(k - j)];
        b[static_cast<std::size_t>(k)] = (a[k] - s) / (2.0 * b[0]);
    }
    return Jet(a.center(), std::move(b));
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * invert(b); }

/// Re-expand around a new center inside the trust interval (Taylor shift).
inline Jet shifted(const Jet& a, double new_center) {
    int n = a.order();
    double d = new_center - a.center();
    std::vector<double> c(a.coeffs());
    // repeated synthetic division by (t - d)
    for (int i = 0; i <= n - 1; ++i)
        for (int k = n - 1; k >= i; --k) c[static_cast<std::size_t>(k)] += d * c[static_cast<std::size_t>(k) + 1];
    return Jet(new_center, std::move(c));
}

inline std::ostream& operator<<(std::ostream& os, const Jet& a) {
    os << "jet@" << a.center() << "[";
    for (int k = 0; k <= a.order(); ++k) os << (k ? ", " : "") << a[k];
    return os << "]";
}

} // namespace lgc
