#pragma once

#include <lgc/matrix_jet.hpp>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <vector>

namespace lgc {

/// Shared numeric knobs.  rank_tol is the relative singular-value threshold
/// (paper assumes constant flag dimensions; the tolerance is how violations
/// are detected).  residual_tol gates the jet-order consistency checks.
struct Tolerances {
    double rank_tol = 1e-9;
    double residual_tol = 1e-7;
    double check_tol = 1e-8;
};

inline int numeric_rank(const Eigen::MatrixXd& m, double rank_tol) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rank_tol * s(0)) ++r;
    return r;
}

namespace detail {

/// Indices of `count` rows of m whose submatrix is well conditioned,
/// chosen by column-pivoted QR of the transpose.
inline std::vector<Eigen::Index> pick_rows(const Eigen::MatrixXd& m, int count) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m.transpose());
    auto perm = qr.colsPermutation().indices();
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) rows[static_cast<std::size_t>(i)] = perm(i);
    return rows;
}

inline std::vector<Eigen::Index> pick_pivot_cols(const Eigen::MatrixXd& m, int count) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    auto perm = qr.colsPermutation().indices();
    std::vector<Eigen::Index> cols(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) cols[static_cast<std::size_t>(i)] = perm(i);
    return cols;
}

inline MatrixJet select_rows(const MatrixJet& a, const std::vector<Eigen::Index>& rows) {
    std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(a.order()) + 1,
                                   Eigen::MatrixXd(static_cast<Eigen::Index>(rows.size()), a.cols()));
    for (int k = 0; k <= a.order(); ++k)
        for (std::size_t i = 0; i < rows.size(); ++i)
            c[static_cast<std::size_t>(k)].row(static_cast<Eigen::Index>(i)) = a.coeff(k).row(rows[i]);
    return MatrixJet(a.center(), std::move(c));
}

inline MatrixJet select_cols(const MatrixJet& a, const std::vector<Eigen::Index>& cols) {
    std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(a.order()) + 1,
                                   Eigen::MatrixXd(a.rows(), static_cast<Eigen::Index>(cols.size())));
    for (int k = 0; k <= a.order(); ++k)
        for (std::size_t j = 0; j < cols.size(); ++j)
            c[static_cast<std::size_t>(k)].col(static_cast<Eigen::Index>(j)) = a.coeff(k).col(cols[j]);
    return MatrixJet(a.center(), std::move(c));
}

} // namespace detail

/// Solve A(t) X(t) = B(t) for square A with invertible constant term,
/// term by term through the LU of A_0.
inline MatrixJet lu_solve_jet(const MatrixJet& A, const MatrixJet& B) {
    detail::require_same_center(A, B);
    if (A.rows() != A.cols() || A.rows() != B.rows()) throw ShapeError("lu_solve_jet: shape mismatch");
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A.coeff(0));
    int n = std::min(A.order(), B.order());
    std::vector<Eigen::MatrixXd> x(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        Eigen::MatrixXd rhs = B.coeff(k);
        for (int j = 1; j <= k; ++j) rhs -= A.coeff(j) * x[static_cast<std::size_t>(k - j)];
        x[static_cast<std::size_t>(k)] = lu.solve(rhs);
    }
    return MatrixJet(A.center(), std::move(x));
}

inline MatrixJet inverse_jet(const MatrixJet& A) {
    return lu_solve_jet(A, MatrixJet::identity(A.rows(), A.order(), A.center()));
}

/// Coordinates of the columns of V in the (full-column-rank) basis B:
/// the X with B X = V, solved through well-conditioned rows of B_0.
/// residual measures how far V actually is from span(B) at every order.
struct CoordsResult {
    MatrixJet coords;
    double residual = 0.0; // relative to |B| |coords| + |V|
};

inline CoordsResult coords_in_basis(const MatrixJet& B, const MatrixJet& V) {
    detail::require_same_center(B, V);
    if (B.rows() != V.rows()) throw ShapeError("coords_in_basis: row mismatch");
    if (B.cols() == 0) {
        CoordsResult r{MatrixJet::zero(0, V.cols(), std::min(B.order(), V.order()), B.center()), 0.0};
        r.residual = V.max_abs_coeff();
        double scale = std::max(1e-300, V.max_abs_coeff());
        r.residual /= scale;
        return r;
    }
    auto rows = detail::pick_rows(B.coeff(0), static_cast<int>(B.cols()));
    MatrixJet x = lu_solve_jet(detail::select_rows(B, rows), detail::select_rows(V, rows));
    MatrixJet res = B * x - V;
    double scale = std::max({1e-300, B.max_abs_coeff() * std::max(1.0, x.max_abs_coeff()), V.max_abs_coeff()});
    return CoordsResult{std::move(x), res.max_abs_coeff() / scale};
}

/// Constant-rank column-space basis of a matrix jet: pivot columns are chosen
/// on the constant term, then every rejected column is checked to lie in the
/// span at all retained orders.  A large residual means the rank of the jet
/// is not constant across orders.
struct SpanResult {
    MatrixJet basis;
    std::vector<Eigen::Index> pivots;
    double residual = 0.0;
};

inline SpanResult column_space_basis(const MatrixJet& G, double rank_tol) {
    int r = numeric_rank(G.coeff(0), rank_tol);
    SpanResult out;
    out.pivots = detail::pick_pivot_cols(G.coeff(0), r);
    out.basis = detail::select_cols(G, out.pivots);
    if (r == 0) {
        out.basis = MatrixJet::zero(G.rows(), 0, G.order(), G.center());
        out.residual = G.max_abs_coeff() / std::max(1e-300, G.max_abs_coeff());
        if (G.max_abs_coeff() == 0.0) out.residual = 0.0;
        return out;
    }
    if (r < G.cols()) {
        std::vector<Eigen::Index> rest;
        std::vector<bool> used(static_cast<std::size_t>(G.cols()), false);
        for (auto p : out.pivots) used[static_cast<std::size_t>(p)] = true;
        for (Eigen::Index j = 0; j < G.cols(); ++j)
            if (!used[static_cast<std::size_t>(j)]) rest.push_back(j);
        out.residual = coords_in_basis(out.basis, detail::select_cols(G, rest)).residual;
    }
    return out;
}

/// Constant-rank right-kernel basis of a matrix jet, solved through pivot
/// rows/columns of the constant term; residual = |M K| relative, which
/// detects rank jumps across jet orders.
struct KernelResult {
    MatrixJet basis;
    double residual = 0.0;
};

inline KernelResult kernel_basis(const MatrixJet& M, double rank_tol) {
    int r = numeric_rank(M.coeff(0), rank_tol);
    Eigen::Index nullity = M.cols() - r;
    KernelResult out;
    if (nullity == 0) {
        out.basis = MatrixJet::zero(M.cols(), 0, M.order(), M.center());
        return out;
    }
    if (r == 0) {
        out.basis = MatrixJet::constant(Eigen::MatrixXd::Identity(M.cols(), M.cols()), M.order(), M.center());
        double sc = M.max_abs_coeff();
        out.residual = sc > 0 ? 1.0 : 0.0; // nonzero M with full kernel claim
        if (sc == 0.0) out.residual = 0.0;
        return out;
    }
    auto piv = detail::pick_pivot_cols(M.coeff(0), r);
    std::vector<bool> used(static_cast<std::size_t>(M.cols()), false);
    for (auto p : piv) used[static_cast<std::size_t>(p)] = true;
    std::vector<Eigen::Index> free;
    for (Eigen::Index j = 0; j < M.cols(); ++j)
        if (!used[static_cast<std::size_t>(j)]) free.push_back(j);

    MatrixJet mp = detail::select_cols(M, piv);
    auto rows = detail::pick_rows(mp.coeff(0), r);
    MatrixJet A = detail::select_rows(mp, rows);
    MatrixJet rhs = detail::select_rows(detail::select_cols(M, free), rows);
    MatrixJet xp = lu_solve_jet(A, -rhs); // pivot coordinates of each free column

    MatrixJet K = MatrixJet::zero(M.cols(), nullity, xp.order(), M.center());
    for (int k = 0; k <= xp.order(); ++k) {
        for (std::size_t j = 0; j < free.size(); ++j) {
            for (std::size_t i = 0; i < piv.size(); ++i)
                K.coeff(k)(piv[i], static_cast<Eigen::Index>(j)) = xp.coeff(k)(static_cast<Eigen::Index>(i),
                                                                               static_cast<Eigen::Index>(j));
            if (k == 0) K.coeff(0)(free[j], static_cast<Eigen::Index>(j)) = 1.0;
        }
    }
    double scale = std::max(1e-300, M.max_abs_coeff() * std::max(1.0, K.max_abs_coeff()));
    out.residual = (M * K).max_abs_coeff() / scale;
    out.basis = std::move(K);
    return out;
}

} // namespace lgc
