#pragma once

#include <lgc/symplectic.hpp>

namespace lgc {

/// A germ of a curve in the Lagrange Grassmannian: a 2n x n frame jet whose
/// column span is Lambda(t).  Isotropy must hold at every retained order.
struct CurveJet {
    SymplecticSpace space;
    MatrixJet frame;

    CurveJet() = default;

    CurveJet(SymplecticSpace sp, MatrixJet f, double rank_tol = 1e-9, double iso_tol = 1e-8)
        : space(sp), frame(std::move(f)) {
        if (frame.rows() != space.dim() || frame.cols() != space.n)
            throw ShapeError("CurveJet: frame must be 2n x n");
        if (numeric_rank(frame.coeff(0), rank_tol) != space.n)
            throw AnalyzabilityError("curve-validation", "frame constant term is rank deficient");
        double scale = std::max(1.0, frame.max_abs_coeff());
        MatrixJet iso = omega_pairing(space, frame, frame);
        if (iso.max_abs_coeff() > iso_tol * scale * scale)
            throw AnalyzabilityError("curve-validation", "frame is not Lagrangian at all retained jet orders");
    }

    double center() const { return frame.center(); }
    int order() const { return frame.order(); }

    CurveJet transformed(const Eigen::MatrixXd& s) const { return CurveJet(space, s * frame); }

    CurveJet time_reversed() const {
        MatrixJet f = frame;
        for (int k = 1; k <= f.order(); k += 2) f.coeff(k) = -f.coeff(k);
        return CurveJet(space, std::move(f));
    }

    CurveJet recentered(double new_center) const { return CurveJet(space, shifted(frame, new_center)); }
};

/// Velocity quadratic form in frame coordinates: omega(frame', frame),
/// symmetric for Lagrangian curves.
inline MatrixJet velocity_form(const CurveJet& lam, double sym_tol = 1e-8) {
    MatrixJet m = omega_pairing(lam.space, derive(lam.frame), lam.frame);
    double scale = std::max(1.0, m.max_abs_coeff());
    if ((m - m.transpose()).max_abs_coeff() > sym_tol * scale)
        throw AnalyzabilityError("velocity-form", "velocity form is not symmetric (non-Lagrangian input)");
    return m;
}

} // namespace lgc
