#pragma once

#include <lgc/linalg.hpp>

#include <cstdint>
#include <random>
#include <vector>

namespace lgc {

/// Standard symplectic R^{2n}: omega(x, y) = x^T Omega y with
/// Omega = [[0, I], [-I, 0]].
struct SymplecticSpace {
    int n = 0;

    explicit SymplecticSpace(int half_dim = 0) : n(half_dim) {
        if (half_dim < 0) throw ShapeError("SymplecticSpace: negative dimension");
    }

    Eigen::Index dim() const { return 2 * static_cast<Eigen::Index>(n); }

    Eigen::MatrixXd omega() const {
        Eigen::MatrixXd o = Eigen::MatrixXd::Zero(dim(), dim());
        o.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
        o.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
        return o;
    }
};

inline Eigen::MatrixXd omega_pairing(const SymplecticSpace& sp, const Eigen::MatrixXd& v1,
                                     const Eigen::MatrixXd& v2) {
    if (v1.rows() != sp.dim() || v2.rows() != sp.dim()) throw ShapeError("omega_pairing: dimension mismatch");
    return v1.transpose() * sp.omega() * v2;
}

/// Pairing of two tuples of jet vectors: entry (i,j) = omega(v1_i, v2_j).
inline MatrixJet omega_pairing(const SymplecticSpace& sp, const MatrixJet& v1, const MatrixJet& v2) {
    if (v1.rows() != sp.dim() || v2.rows() != sp.dim()) throw ShapeError("omega_pairing: dimension mismatch");
    return v1.transpose() * (sp.omega() * v2);
}

/// A constant subspace given by an independent-column basis.
struct Subspace {
    Eigen::Index ambient_dim = 0;
    Eigen::MatrixXd basis; // ambient_dim x k
    double rank_tol = 1e-9;

    Subspace() = default;
    Subspace(Eigen::MatrixXd b, double tol = 1e-9) : ambient_dim(b.rows()), basis(std::move(b)), rank_tol(tol) {
        if (basis.cols() > 0 && numeric_rank(basis, rank_tol) != basis.cols())
            throw ShapeError("Subspace: basis columns not independent at tolerance");
    }

    Eigen::Index dim() const { return basis.cols(); }

    /// Orthogonal projector onto the subspace (used for span comparison).
    Eigen::MatrixXd projector() const {
        if (basis.cols() == 0) return Eigen::MatrixXd::Zero(ambient_dim, ambient_dim);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(ambient_dim, basis.cols());
        return q * q.transpose();
    }

    bool same_span(const Subspace& other, double tol = 1e-8) const {
        if (ambient_dim != other.ambient_dim || dim() != other.dim()) return false;
        return (projector() - other.projector()).cwiseAbs().maxCoeff() <= tol;
    }

    bool contains(const Eigen::VectorXd& v, double tol = 1e-8) const {
        double scale = std::max(1.0, v.norm());
        return (projector() * v - v).norm() <= tol * scale;
    }
};

inline Eigen::MatrixXd kernel_of(const Eigen::MatrixXd& m, double rank_tol) {
    if (m.cols() == 0) return Eigen::MatrixXd::Identity(0, 0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    int r = numeric_rank(m, rank_tol);
    return svd.matrixV().rightCols(m.cols() - r);
}

/// Skew-orthogonal complement L^< = { v : omega(v, l) = 0 for all l in L }.
inline Subspace skew_complement(const SymplecticSpace& sp, const Subspace& L) {
    if (L.dim() == 0)
        return Subspace(Eigen::MatrixXd::Identity(sp.dim(), sp.dim()), L.rank_tol);
    Eigen::MatrixXd m = L.basis.transpose() * sp.omega(); // k x 2n, kernel = complement
    return Subspace(kernel_of(m, L.rank_tol), L.rank_tol);
}

/// Jet-valued skew complement of a moving subspace given by a basis jet.
inline KernelResult skew_complement_jet(const SymplecticSpace& sp, const MatrixJet& basis, double rank_tol) {
    return kernel_basis(basis.transpose() * sp.omega(), rank_tol);
}

inline Subspace subspace_sum(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim != b.ambient_dim) throw ShapeError("subspace_sum: ambient mismatch");
    Eigen::MatrixXd cat(a.ambient_dim, a.dim() + b.dim());
    cat << a.basis, b.basis;
    int r = numeric_rank(cat, a.rank_tol);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(cat);
    auto perm = qr.colsPermutation().indices();
    Eigen::MatrixXd out(a.ambient_dim, r);
    for (int i = 0; i < r; ++i) out.col(i) = cat.col(perm(i));
    return Subspace(std::move(out), a.rank_tol);
}

inline Subspace subspace_intersection(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim != b.ambient_dim) throw ShapeError("subspace_intersection: ambient mismatch");
    if (a.dim() == 0 || b.dim() == 0) return Subspace(Eigen::MatrixXd::Zero(a.ambient_dim, 0), a.rank_tol);
    Eigen::MatrixXd cat(a.ambient_dim, a.dim() + b.dim());
    cat << a.basis, -b.basis;
    Eigen::MatrixXd k = kernel_of(cat, a.rank_tol);
    return Subspace(a.basis * k.topRows(a.dim()), a.rank_tol);
}

/// Darboux check for tuples of jet vectors indexed the same way on both
/// sides: omega(E,E) = omega(F,F) = 0 and omega(F_i, E_j) = delta_ij, at
/// every retained jet order.
inline bool is_darboux(const SymplecticSpace& sp, const std::vector<MatrixJet>& E, const std::vector<MatrixJet>& F,
                       double tol, double* max_violation = nullptr) {
    if (E.size() != F.size()) throw ShapeError("is_darboux: tuple size mismatch");
    double worst = 0.0;
    double scale = 0.0;
    for (const auto& e : E) scale = std::max(scale, e.max_abs_coeff());
    for (const auto& f : F) scale = std::max(scale, f.max_abs_coeff());
    scale = std::max(1.0, scale * scale);
    for (std::size_t i = 0; i < E.size(); ++i) {
        for (std::size_t j = 0; j < E.size(); ++j) {
            MatrixJet ee = omega_pairing(sp, E[i], E[j]);
            MatrixJet ff = omega_pairing(sp, F[i], F[j]);
            MatrixJet fe = omega_pairing(sp, F[i], E[j]);
            if (i == j) fe.coeff(0) -= Eigen::MatrixXd::Identity(fe.rows(), fe.cols());
            worst = std::max({worst, ee.max_abs_coeff() / scale, ff.max_abs_coeff() / scale,
                              fe.max_abs_coeff() / scale});
        }
    }
    if (max_violation) *max_violation = worst;
    return worst <= tol;
}

/// Deterministic gaussian stream: Box-Muller over explicit 53-bit uniforms,
/// so output does not depend on the standard library's distribution details.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double gaussian() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 1e-300);
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_ = true;
        return r * std::cos(a);
    }

    Eigen::MatrixXd gaussian_matrix(Eigen::Index r, Eigen::Index c) {
        Eigen::MatrixXd m(r, c);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j) m(i, j) = gaussian();
        return m;
    }

private:
    std::mt19937_64 eng_;
    bool have_ = false;
    double spare_ = 0.0;
};

/// Random symplectic matrix: product of exponentials of random Hamiltonian
/// matrices A (i.e. Omega A symmetric), so S^T Omega S = Omega to roundoff.
inline Eigen::MatrixXd random_symplectic(int n, std::uint64_t seed) {
    SymplecticSpace sp(n);
    RandomStream rng(seed);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(sp.dim(), sp.dim());
    Eigen::MatrixXd omega = sp.omega();
    for (int rep = 0; rep < 3; ++rep) {
        Eigen::MatrixXd m = rng.gaussian_matrix(sp.dim(), sp.dim());
        m = 0.5 * (m + m.transpose());
        Eigen::MatrixXd a = -omega * m * 0.35; // Omega^{-1} = -Omega
        // scaling-and-squaring Taylor exponential
        int sq = 4;
        Eigen::MatrixXd x = a / std::pow(2.0, sq);
        Eigen::MatrixXd e = Eigen::MatrixXd::Identity(sp.dim(), sp.dim());
        Eigen::MatrixXd term = e;
        for (int k = 1; k <= 16; ++k) {
            term = term * x / double(k);
            e += term;
        }
        for (int k = 0; k < sq; ++k) e = e * e;
        s = s * e;
    }
    return s;
}

} // namespace lgc
