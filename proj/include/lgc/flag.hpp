#pragma once

#include <lgc/curve.hpp>
#include <lgc/diagram.hpp>

#include <Eigen/Eigenvalues>

#include <optional>
#include <utility>
#include <vector>

namespace lgc {

enum class Monotonicity { nondecreasing, nonincreasing, indefinite };

inline const char* to_string(Monotonicity m) {
    switch (m) {
        case Monotonicity::nondecreasing: return "nondecreasing";
        case Monotonicity::nonincreasing: return "nonincreasing";
        default: return "indefinite";
    }
}

struct FlagReport {
    YoungDiagram young;
    ReducedDiagram reduced;
    std::vector<int> extension_dims;   // dim Lambda^{(i)}, i = 0..p1
    std::vector<int> contraction_dims; // dim Lambda_{(i)}, i = 0..p1
    Monotonicity monotonicity = Monotonicity::indefinite;
    bool condition_g = false;
    std::vector<std::pair<int, int>> inertia; // (r_i^+, r_i^-) per level
    double trust_radius = 0.0;
};

/// Flag analysis plus the subspace jets the normalization stage reuses.
struct FlagData {
    FlagReport report;
    std::vector<MatrixJet> extensions;   // basis jets of Lambda^{(i)}
    std::vector<MatrixJet> contractions; // basis jets of Lambda_{(i)}
    MatrixJet velocity;                  // omega(frame', frame)
};

namespace detail {

/// Column span of [B, B', ..., B^{(k)}] as a constant-rank basis jet.
inline MatrixJet subspace_extension(const MatrixJet& B, int k, const Tolerances& tol, const char* stage) {
    if (B.cols() == 0) return B;
    if (B.order() < k)
        throw AnalyzabilityError(stage, "insufficient jet order for extension: requires order >= " +
                                            std::to_string(k) + " above this subspace");
    MatrixJet cat = B;
    MatrixJet d = B;
    for (int i = 1; i <= k; ++i) {
        d = derive(d);
        cat = hcat(cat.truncated(d.order()), d);
    }
    SpanResult span = column_space_basis(cat, tol.rank_tol);
    if (span.residual > tol.residual_tol)
        throw AnalyzabilityError(stage, "rank of the extension varies across the retained jet orders");
    return span.basis;
}

/// One contraction step of a moving subspace: vectors B c with B' c still
/// inside the span.
inline MatrixJet contraction_step(const MatrixJet& B, const Tolerances& tol, const char* stage) {
    if (B.cols() == 0) return B;
    if (B.order() < 1) throw AnalyzabilityError(stage, "insufficient jet order for contraction step");
    MatrixJet d = derive(B);
    MatrixJet cat = hcat(B.truncated(d.order()), d);
    KernelResult ker = kernel_basis(cat, tol.rank_tol);
    if (ker.residual > tol.residual_tol)
        throw AnalyzabilityError(stage, "kernel rank not constant across jet orders");
    if (ker.basis.cols() == 0) return MatrixJet::zero(B.rows(), 0, ker.basis.order(), B.center());
    MatrixJet c = ker.basis.block(B.cols(), 0, B.cols(), ker.basis.cols());
    SpanResult out = column_space_basis(B.truncated(c.order()) * c, tol.rank_tol);
    if (out.residual > tol.residual_tol)
        throw AnalyzabilityError(stage, "kernel rank not constant across jet orders");
    return out.basis;
}

} // namespace detail

/// i-th extension Lambda^{(i)}: span of derivatives up to order i.
inline MatrixJet extension(const CurveJet& lam, int i, const Tolerances& tol = {}) {
    if (i < 0) throw ShapeError("extension: negative order");
    if (lam.order() < i)
        throw AnalyzabilityError("extension",
                                 "insufficient jet order: extension " + std::to_string(i) +
                                     " requires order >= " + std::to_string(i));
    return detail::subspace_extension(lam.frame, i, tol, "extension");
}

/// i-th contraction Lambda_{(i)}, computed by the kernel recursion
/// (Lambda_{(i)})_{(1)} = Lambda_{(i+1)} starting from the velocity kernel.
inline MatrixJet contraction(const CurveJet& lam, int i, const Tolerances& tol = {}) {
    if (i < 0) throw ShapeError("contraction: negative order");
    if (lam.order() < 2 * i + 1)
        throw AnalyzabilityError("contraction",
                                 "insufficient jet order: contraction " + std::to_string(i) +
                                     " requires order >= " + std::to_string(2 * i + 1));
    MatrixJet b = lam.frame;
    for (int s = 0; s < i; ++s) b = detail::contraction_step(b, tol, "contraction");
    return b;
}

namespace detail {

inline std::pair<int, std::pair<int, int>> form_rank_inertia(const Eigen::MatrixXd& q, double rel_tol) {
    if (q.rows() == 0) return {0, {0, 0}};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (q + q.transpose()));
    const auto& ev = es.eigenvalues();
    double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    int pos = 0, neg = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > rel_tol * scale) ++pos;
        else if (ev(i) < -rel_tol * scale) ++neg;
    }
    return {pos + neg, {pos, neg}};
}

/// Sample radius within which the truncated velocity form is trusted:
/// a coefficient-decay bound on the jet.
inline double trust_radius(const MatrixJet& m) {
    double a0 = std::max(m.coeff(0).size() > 0 ? m.coeff(0).cwiseAbs().maxCoeff() : 0.0, 1e-12);
    double r = 1.0;
    for (int k = 1; k <= m.order(); ++k) {
        double ak = m.coeff(k).size() > 0 ? m.coeff(k).cwiseAbs().maxCoeff() : 0.0;
        if (ak <= 0.0) continue;
        r = std::min(r, std::pow(a0 / ak, 1.0 / k));
    }
    return 0.5 * r;
}

inline Monotonicity classify_velocity(const MatrixJet& m, double trust, double rel_tol) {
    bool can_nondec = true, can_noninc = true;
    const double samples[5] = {0.0, -trust, -0.5 * trust, 0.5 * trust, trust};
    for (double s : samples) {
        Eigen::MatrixXd q = m.eval(m.center() + s);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (q + q.transpose()));
        const auto& ev = es.eigenvalues();
        double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            if (ev(i) < -rel_tol * scale) can_nondec = false;
            if (ev(i) > rel_tol * scale) can_noninc = false;
        }
    }
    if (can_nondec && !can_noninc) return Monotonicity::nondecreasing;
    if (can_noninc && !can_nondec) return Monotonicity::nonincreasing;
    if (can_nondec && can_noninc) return Monotonicity::indefinite; // zero form; rejected earlier
    return Monotonicity::indefinite;
}

} // namespace detail

/// Full flag analysis.  Throws when the curve stabilizes strictly below W
/// (reduce_ambient applies), when ranks jump across jet orders, or when the
/// jet order is too small.
inline FlagData analyze_flag(const CurveJet& lam, const Tolerances& tol = {}) {
    const int n = lam.space.n;
    FlagData data;
    data.velocity = velocity_form(lam);

    if (detail::form_rank_inertia(data.velocity.coeff(0), tol.rank_tol).first == 0)
        throw AnalyzabilityError("flag", "zero velocity: the curve is constant to first order");

    // extensions until the ambient space is exhausted
    data.extensions.push_back(lam.frame);
    data.report.extension_dims.push_back(n);
    int p = 0;
    while (data.report.extension_dims.back() < 2 * n) {
        if (lam.order() < p + 1)
            throw AnalyzabilityError("flag", "insufficient jet order: flag analysis requires order >= " +
                                                 std::to_string(2 * (p + 1) + 1));
        MatrixJet next = detail::subspace_extension(lam.frame, p + 1, tol, "flag");
        int dim = static_cast<int>(next.cols());
        if (dim == data.report.extension_dims.back())
            throw AnalyzabilityError("flag",
                                     "the extensions stabilize strictly below the ambient space; "
                                     "apply reduce_ambient first");
        data.extensions.push_back(std::move(next));
        data.report.extension_dims.push_back(dim);
        ++p;
    }

    // Young diagram: column i has dim Lambda^{(i)} - dim Lambda^{(i-1)} boxes
    std::vector<int> col_boxes;
    for (int i = 1; i <= p; ++i)
        col_boxes.push_back(data.report.extension_dims[static_cast<std::size_t>(i)] -
                            data.report.extension_dims[static_cast<std::size_t>(i) - 1]);
    for (std::size_t i = 1; i < col_boxes.size(); ++i)
        if (col_boxes[i] > col_boxes[i - 1])
            throw AnalyzabilityError("flag", "extension dimension increments increase: flag is not constant");
    std::vector<int> row_lengths;
    for (int row = 0; row < col_boxes[0]; ++row) {
        int len = 0;
        for (int c : col_boxes)
            if (c > row) ++len;
        row_lengths.push_back(len);
    }
    data.report.young = YoungDiagram(row_lengths);
    data.report.reduced = reduce_diagram(data.report.young);

    if (lam.order() < 2 * p + 1)
        throw AnalyzabilityError("flag", "insufficient jet order: flag analysis requires order >= " +
                                             std::to_string(2 * p + 1));

    // contractions by the kernel recursion
    data.contractions.push_back(lam.frame);
    data.report.contraction_dims.push_back(n);
    for (int i = 1; i <= p; ++i) {
        MatrixJet next = detail::contraction_step(data.contractions.back(), tol, "flag");
        data.contractions.push_back(next);
        data.report.contraction_dims.push_back(static_cast<int>(next.cols()));
        int expect = 2 * n - data.report.extension_dims[static_cast<std::size_t>(i)];
        if (data.report.contraction_dims.back() != expect)
            throw AnalyzabilityError("flag", "contraction dimension disagrees with the skew-dual extension");
    }

    data.report.trust_radius = detail::trust_radius(data.velocity);
    data.report.monotonicity = detail::classify_velocity(data.velocity, data.report.trust_radius, tol.check_tol);

    // condition (G) and inertia indices from the restricted velocity form
    const ReducedDiagram& delta = data.report.reduced;
    const int d = delta.level_count();
    Eigen::MatrixXd m0 = data.velocity.coeff(0);
    int cum = 0;
    int prev_pos = 0, prev_neg = 0;
    data.report.condition_g = true;
    for (int i = 1; i <= d; ++i) {
        cum += delta.r(i);
        const MatrixJet& base = data.contractions[static_cast<std::size_t>(delta.p(i)) - 1];
        MatrixJet sub = detail::subspace_extension(base, delta.p(i) - 1, tol, "flag");
        CoordsResult coords = coords_in_basis(lam.frame, sub);
        if (coords.residual > tol.residual_tol)
            throw AnalyzabilityError("flag", "restricted subspace does not lie inside the curve");
        Eigen::MatrixXd c0 = coords.coords.coeff(0);
        Eigen::MatrixXd q = c0.transpose() * m0 * c0;
        auto [rank, pn] = detail::form_rank_inertia(q, tol.rank_tol);
        if (rank != cum && i < d) data.report.condition_g = false;
        if (rank != cum && i == d)
            throw AnalyzabilityError("flag", "velocity rank mismatch on the top restricted subspace");
        data.report.inertia.emplace_back(pn.first - prev_pos, pn.second - prev_neg);
        prev_pos = pn.first;
        prev_neg = pn.second;
    }
    if (data.report.condition_g) {
        for (int i = 1; i <= d; ++i) {
            auto [rp, rn] = data.report.inertia[static_cast<std::size_t>(i) - 1];
            if (rp + rn != delta.r(i))
                throw AnalyzabilityError("flag", "inertia increments disagree with the level sizes");
            if (data.report.monotonicity == Monotonicity::nondecreasing && rn != 0)
                throw AnalyzabilityError("flag", "negative inertia on a nondecreasing curve");
        }
    }
    return data;
}

/// Flag report of a curve (the Young-diagram operation of the interface).
inline FlagReport young_diagram(const CurveJet& lam, const Tolerances& tol = {}) {
    return analyze_flag(lam, tol).report;
}

/// Quotient by V^< when the extensions stabilize at V strictly below W
/// (identity when they already fill the ambient space).
inline CurveJet reduce_ambient(const CurveJet& lam, const Tolerances& tol = {}) {
    const int n = lam.space.n;
    MatrixJet ext = lam.frame;
    int prev = n;
    int i = 0;
    while (true) {
        if (static_cast<int>(ext.cols()) == 2 * n) return lam;
        if (lam.order() < i + 1)
            throw AnalyzabilityError("reduce-ambient", "insufficient jet order to detect stabilization");
        MatrixJet next = detail::subspace_extension(lam.frame, i + 1, tol, "reduce-ambient");
        if (static_cast<int>(next.cols()) == prev) break;
        prev = static_cast<int>(next.cols());
        ext = std::move(next);
        ++i;
    }
    // V = stabilized extension; must be constant in t
    Eigen::MatrixXd v0_raw = ext.coeff(0);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(v0_raw);
    Eigen::MatrixXd v0 = qr.householderQ() * Eigen::MatrixXd::Identity(2 * n, ext.cols());
    CoordsResult cst = coords_in_basis(MatrixJet::constant(v0, ext.order(), ext.center()), ext);
    if (cst.residual > tol.residual_tol)
        throw AnalyzabilityError("reduce-ambient", "stabilized extension is not constant in t");

    const Eigen::Index m = ext.cols();
    SymplecticSpace sp = lam.space;
    Eigen::MatrixXd k = kernel_of(v0.transpose() * sp.omega(), tol.rank_tol); // V^< basis, dim 2n - m
    // complement of V^< inside V
    Eigen::MatrixXd cat(2 * n, k.cols() + m);
    cat << k, v0;
    auto piv = detail::pick_pivot_cols(cat, static_cast<int>(m));
    std::vector<Eigen::Index> compl_cols;
    for (auto c : piv)
        if (c >= k.cols()) compl_cols.push_back(c - k.cols());
    Eigen::MatrixXd c(2 * n, static_cast<Eigen::Index>(compl_cols.size()));
    for (std::size_t j = 0; j < compl_cols.size(); ++j) c.col(static_cast<Eigen::Index>(j)) = v0.col(compl_cols[j]);
    const Eigen::Index h = m - n; // new half-dimension
    if (c.cols() != 2 * h) throw AnalyzabilityError("reduce-ambient", "complement dimension mismatch");

    // symplectic Gram-Schmidt on the complement
    std::vector<Eigen::VectorXd> pool;
    for (Eigen::Index j = 0; j < c.cols(); ++j) pool.push_back(c.col(j));
    Eigen::MatrixXd us(2 * n, h), vs(2 * n, h);
    Eigen::MatrixXd omega = sp.omega();
    for (Eigen::Index pair = 0; pair < h; ++pair) {
        Eigen::VectorXd u = pool.front();
        pool.erase(pool.begin());
        std::size_t best = 0;
        double bestv = 0.0;
        for (std::size_t j = 0; j < pool.size(); ++j) {
            double w = std::abs(u.transpose() * omega * pool[j]);
            if (w > bestv) {
                bestv = w;
                best = j;
            }
        }
        if (bestv <= tol.rank_tol) throw AnalyzabilityError("reduce-ambient", "degenerate induced form");
        Eigen::VectorXd v = pool[best] / (u.transpose() * omega * pool[best]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
        for (auto& w : pool) {
            double gwv = (w.transpose() * omega * v).value();
            double gwu = (w.transpose() * omega * u).value();
            w = w - gwv * u + gwu * v;
        }
        us.col(pair) = u;
        vs.col(pair) = v;
    }
    Eigen::MatrixXd basis(2 * n, 2 * h + k.cols());
    basis << us, vs, k;
    CoordsResult y = coords_in_basis(MatrixJet::constant(basis, lam.order(), lam.center()), lam.frame);
    if (y.residual > tol.residual_tol)
        throw AnalyzabilityError("reduce-ambient", "curve does not lie inside the stabilized extension");
    MatrixJet qcoords = y.coords.block(0, 0, 2 * h, lam.space.n);
    SpanResult reduced = column_space_basis(qcoords, tol.rank_tol);
    if (reduced.residual > tol.residual_tol || reduced.basis.cols() != h)
        throw AnalyzabilityError("reduce-ambient", "quotient frame rank mismatch");
    return CurveJet(SymplecticSpace(static_cast<int>(h)), reduced.basis);
}

} // namespace lgc
