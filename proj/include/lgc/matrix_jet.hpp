#pragma once

#include <lgc/jet.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <utility>
#include <vector>

namespace lgc {

/// Matrix with truncated-power-series entries, stored as one coefficient
/// matrix per order.  All entries share the center and order.
class MatrixJet {
public:
    MatrixJet() : center_(0.0), coef_(1, Eigen::MatrixXd::Zero(0, 0)) {}

    MatrixJet(double center, std::vector<Eigen::MatrixXd> coef) : center_(center), coef_(std::move(coef)) {
        if (coef_.empty()) throw ShapeError("MatrixJet: empty coefficient list");
        for (const auto& m : coef_) {
            if (m.rows() != coef_[0].rows() || m.cols() != coef_[0].cols())
                throw ShapeError("MatrixJet: ragged coefficient shapes");
            if (!m.allFinite()) throw ShapeError("MatrixJet: nonfinite coefficient");
        }
    }

    static MatrixJet zero(Eigen::Index rows, Eigen::Index cols, int order, double center) {
        return MatrixJet(center,
                         std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(order) + 1,
                                                      Eigen::MatrixXd::Zero(rows, cols)));
    }

    static MatrixJet constant(const Eigen::MatrixXd& m, int order, double center) {
        MatrixJet r = zero(m.rows(), m.cols(), order, center);
        r.coef_[0] = m;
        return r;
    }

    static MatrixJet identity(Eigen::Index n, int order, double center) {
        return constant(Eigen::MatrixXd::Identity(n, n), order, center);
    }

    double center() const { return center_; }
    int order() const { return static_cast<int>(coef_.size()) - 1; }
    Eigen::Index rows() const { return coef_[0].rows(); }
    Eigen::Index cols() const { return coef_[0].cols(); }

    const Eigen::MatrixXd& coeff(int k) const { return coef_[static_cast<std::size_t>(k)]; }
    Eigen::MatrixXd& coeff(int k) { return coef_[static_cast<std::size_t>(k)]; }

    Jet entry(Eigen::Index i, Eigen::Index j) const {
        std::vector<double> c(coef_.size());
        for (std::size_t k = 0; k < coef_.size(); ++k) c[k] = coef_[k](i, j);
        return Jet(center_, std::move(c));
    }

    void set_entry(Eigen::Index i, Eigen::Index j, const Jet& v) {
        if (v.center() != center_) throw ShapeError("MatrixJet::set_entry: center mismatch");
        for (int k = 0; k <= order(); ++k) coef_[static_cast<std::size_t>(k)](i, j) = k <= v.order() ? v[k] : 0.0;
    }

    Eigen::MatrixXd eval(double t) const {
        double dt = t - center_;
        Eigen::MatrixXd acc = coef_.back();
        for (int k = order() - 1; k >= 0; --k) acc = coef_[static_cast<std::size_t>(k)] + dt * acc;
        return acc;
    }

    MatrixJet truncated(int new_order) const {
        if (new_order < 0) throw ShapeError("MatrixJet::truncated: negative order");
        std::vector<Eigen::MatrixXd> c(coef_.begin(),
                                       coef_.begin() + std::min<std::size_t>(coef_.size(), new_order + 1));
        c.resize(static_cast<std::size_t>(new_order) + 1, Eigen::MatrixXd::Zero(rows(), cols()));
        return MatrixJet(center_, std::move(c));
    }

    MatrixJet block(Eigen::Index i0, Eigen::Index j0, Eigen::Index r, Eigen::Index c) const {
        std::vector<Eigen::MatrixXd> out(coef_.size());
        for (std::size_t k = 0; k < coef_.size(); ++k) out[k] = coef_[k].block(i0, j0, r, c);
        return MatrixJet(center_, std::move(out));
    }

    MatrixJet col(Eigen::Index j) const { return block(0, j, rows(), 1); }

    MatrixJet transpose() const {
        std::vector<Eigen::MatrixXd> out(coef_.size());
        for (std::size_t k = 0; k < coef_.size(); ++k) out[k] = coef_[k].transpose();
        return MatrixJet(center_, std::move(out));
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& c : coef_)
            if (c.size() > 0) m = std::max(m, c.cwiseAbs().maxCoeff());
        return m;
    }

private:
    double center_;
    std::vector<Eigen::MatrixXd> coef_;
};

namespace detail {
inline void require_same_center(const MatrixJet& a, const MatrixJet& b) {
    if (a.center() != b.center()) throw ShapeError("matrix jet arithmetic: center mismatch");
}
} // namespace detail

inline MatrixJet operator+(const MatrixJet& a, const MatrixJet& b) {
    detail::require_same_center(a, b);
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix jet add: shape mismatch");
    int n = std::min(a.order(), b.order());
    std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = a.coeff(k) + b.coeff(k);
    return MatrixJet(a.center(), std::move(c));
}

inline MatrixJet operator-(const MatrixJet& a, const MatrixJet& b) {
    detail::require_same_center(a, b);
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix jet sub: shape mismatch");
    int n = std::min(a.order(), b.order());
    std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = a.coeff(k) - b.coeff(k);
    return MatrixJet(a.center(), std::move(c));
}

inline MatrixJet operator-(const MatrixJet& a) {
    std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(a.order()) + 1);
    for (int k = 0; k <= a.order(); ++k) c[static_cast<std::size_t>(k)] = -a.coeff(k);
    return MatrixJet(a.center(), std::move(c));
}

/// Cauchy product truncated to the smaller operand order.
inline MatrixJet operator*(const MatrixJet& a, const MatrixJet& b) {
    detail::require_same_center(a, b);
    if (a.cols() != b.rows()) throw ShapeError("matrix jet matmul: shape mismatch");
    int n = std::min(a.order(), b.order());
    std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(n) + 1, Eigen::MatrixXd::Zero(a.rows(), b.cols()));
    for (int k = 0; k <= n; ++k)
        for (int j = 0; j <= k; ++j) c[static_cast<std::size_t>(k)] += a.coeff(j) * b.coeff(k - j);
    return MatrixJet(a.center(), std::move(c));
}

// Constant factors are exact: they do not reduce the jet order.
inline MatrixJet operator*(const Eigen::MatrixXd& m, const MatrixJet& a) {
    if (m.cols() != a.rows()) throw ShapeError("matrix jet matmul: shape mismatch");
    std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(a.order()) + 1);
    for (int k = 0; k <= a.order(); ++k) c[static_cast<std::size_t>(k)] = m * a.coeff(k);
    return MatrixJet(a.center(), std::move(c));
}

inline MatrixJet operator*(const MatrixJet& a, const Eigen::MatrixXd& m) {
    if (a.cols() != m.rows()) throw ShapeError("matrix jet matmul: shape mismatch");
    std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(a.order()) + 1);
    for (int k = 0; k <= a.order(); ++k) c[static_cast<std::size_t>(k)] = a.coeff(k) * m;
    return MatrixJet(a.center(), std::move(c));
}

inline MatrixJet operator*(double s, const MatrixJet& a) {
    std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(a.order()) + 1);
    for (int k = 0; k <= a.order(); ++k) c[static_cast<std::size_t>(k)] = s * a.coeff(k);
    return MatrixJet(a.center(), std::move(c));
}

inline MatrixJet operator*(const MatrixJet& a, const Jet& s) {
    if (s.center() != a.center()) throw ShapeError("matrix jet scale: center mismatch");
    int n = std::min(a.order(), s.order());
    std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(n) + 1, Eigen::MatrixXd::Zero(a.rows(), a.cols()));
    for (int k = 0; k <= n; ++k)
        for (int j = 0; j <= k; ++j) c[static_cast<std::size_t>(k)] += s[j] * a.coeff(k - j);
    return MatrixJet(a.center(), std::move(c));
}

inline MatrixJet derive(const MatrixJet& a) {
    if (a.order() < 1) throw ShapeError("matrix jet derive: order 0 input");
    std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(a.order()));
    for (int k = 1; k <= a.order(); ++k) c[static_cast<std::size_t>(k - 1)] = double(k) * a.coeff(k);
    return MatrixJet(a.center(), std::move(c));
}

inline MatrixJet derive(const MatrixJet& a, int times) {
    MatrixJet r = a;
    for (int i = 0; i < times; ++i) r = derive(r);
    return r;
}

inline MatrixJet hcat(const MatrixJet& a, const MatrixJet& b) {
    detail::require_same_center(a, b);
    if (a.rows() != b.rows()) throw ShapeError("matrix jet hcat: row mismatch");
    int n = std::min(a.order(), b.order());
    std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(n) + 1, Eigen::MatrixXd(a.rows(), a.cols() + b.cols()));
    for (int k = 0; k <= n; ++k) {
        c[static_cast<std::size_t>(k)].leftCols(a.cols()) = a.coeff(k);
        c[static_cast<std::size_t>(k)].rightCols(b.cols()) = b.coeff(k);
    }
    return MatrixJet(a.center(), std::move(c));
}

inline MatrixJet shifted(const MatrixJet& a, double new_center) {
    int n = a.order();
    double d = new_center - a.center();
    std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = a.coeff(k);
    for (int i = 0; i <= n - 1; ++i)
        for (int k = n - 1; k >= i; --k) c[static_cast<std::size_t>(k)] += d * c[static_cast<std::size_t>(k) + 1];
    return MatrixJet(new_center, std::move(c));
}

/// Solve U'(t) = A(t) U(t), U(t0) = U0 term by term.  The result carries
/// order(A) + 1: one antiderivative above the data.
inline MatrixJet ode_solve(const MatrixJet& A, const Eigen::MatrixXd& U0) {
    if (A.rows() != A.cols()) throw ShapeError("ode_solve: A must be square");
    if (U0.rows() != A.cols()) throw ShapeError("ode_solve: U0 shape mismatch");
    int n = A.order() + 1;
    std::vector<Eigen::MatrixXd> u(static_cast<std::size_t>(n) + 1, Eigen::MatrixXd::Zero(U0.rows(), U0.cols()));
    u[0] = U0;
    for (int k = 0; k < n; ++k) {
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(U0.rows(), U0.cols());
        for (int j = 0; j <= std::min(k, A.order()); ++j) s += A.coeff(j) * u[static_cast<std::size_t>(k - j)];
        u[static_cast<std::size_t>(k) + 1] = s / double(k + 1);
    }
    return MatrixJet(A.center(), std::move(u));
}

/// Solve X'(t) = X(t) A(t), X(t0) = X0 (frame form of the structural equation).
inline MatrixJet ode_solve_right(const MatrixJet& A, const Eigen::MatrixXd& X0) {
    MatrixJet y = ode_solve(A.transpose(), X0.transpose());
    return y.transpose();
}

} // namespace lgc
