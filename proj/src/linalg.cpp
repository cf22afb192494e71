#include "rcmoves/linalg.hpp"

#include "rcmoves/error.hpp"

#include <cmath>

namespace rcmoves {

void require_finite(const Matrix& m, const std::string& what) {
    if (!m.allFinite()) {
        throw ValidationError(what + ": non-finite entry");
    }
}

void require_finite(const Vector& v, const std::string& what) {
    if (!v.allFinite()) {
        throw ValidationError(what + ": non-finite entry");
    }
}

Vector matvec(const Matrix& a, const Vector& v) {
    if (a.cols() != v.size()) {
        throw ValidationError("matvec: dimension mismatch (" + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + " vs vector of length " +
                              std::to_string(v.size()) + ")");
    }
    require_finite(a, "matvec: matrix");
    require_finite(v, "matvec: vector");
    return a * v;
}

Matrix ridge_solve(const Matrix& x, const Matrix& y, double lambda) {
    if (x.rows() < 1) {
        throw ValidationError("ridge_solve: empty design matrix");
    }
    if (x.rows() != y.rows()) {
        throw ValidationError("ridge_solve: X and Y row counts differ (" +
                              std::to_string(x.rows()) + " vs " + std::to_string(y.rows()) + ")");
    }
    if (lambda < 0.0) {
        throw ValidationError("ridge_solve: lambda must be >= 0");
    }
    require_finite(x, "ridge_solve: X");
    require_finite(y, "ridge_solve: Y");

    const Eigen::Index n = x.cols();
    Matrix gram = Matrix::Zero(n, n);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
    gram = gram.selfadjointView<Eigen::Lower>();
    gram.diagonal().array() += lambda;
    const Matrix xty = x.transpose() * y;

    Matrix wt;  // N x M
    bool ok = false;
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() == Eigen::Success) {
        wt = llt.solve(xty);
        // Cholesky silently "succeeds" on some near-singular systems; accept
        // the solution only if it actually satisfies the normal equations.
        const double ref = xty.norm();
        const double resid = (gram * wt - xty).norm();
        ok = wt.allFinite() && resid <= 1e-8 * (ref > 0.0 ? ref : 1.0);
    }
    if (!ok) {
        // Rank-revealing path: minimum-norm least squares on the augmented
        // system [X; sqrt(lambda) I].
        if (lambda > 0.0) {
            Matrix aug(x.rows() + n, n);
            aug.topRows(x.rows()) = x;
            aug.bottomRows(n) = std::sqrt(lambda) * Matrix::Identity(n, n);
            Matrix yext = Matrix::Zero(aug.rows(), y.cols());
            yext.topRows(y.rows()) = y;
            wt = Eigen::CompleteOrthogonalDecomposition<Matrix>(aug).solve(yext);
        } else {
            wt = Eigen::CompleteOrthogonalDecomposition<Matrix>(x).solve(y);
        }
    }
    if (!wt.allFinite()) {
        throw NumericalError("ridge_solve: singular system produced non-finite solution");
    }
    return wt.transpose();
}

SymEig sym_eig(const Matrix& s) {
    if (s.rows() != s.cols()) {
        throw ValidationError("sym_eig: matrix not square");
    }
    require_finite(s, "sym_eig: matrix");
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale) {
        throw ValidationError("sym_eig: matrix not symmetric (max asymmetry " +
                              std::to_string(asym) + ")");
    }

    const Matrix sym = 0.5 * (s + s.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("sym_eig: eigensolver failed to converge");
    }

    // Eigen returns ascending order; flip to descending.
    const Eigen::Index n = s.rows();
    SymEig out;
    out.values = solver.eigenvalues().reverse();
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    return out;
}

double spectral_radius(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw ValidationError("spectral_radius: matrix not square");
    }
    require_finite(a, "spectral_radius: matrix");
    if (a.rows() == 0) {
        return 0.0;
    }
    Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("spectral_radius: eigensolver failed to converge");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double nrmse(const Matrix& pred, const Matrix& target) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
        throw ValidationError("nrmse: shape mismatch");
    }
    if (target.size() == 0) {
        throw ValidationError("nrmse: empty input");
    }
    const Matrix centered = target.rowwise() - target.colwise().mean();
    const double denom = centered.squaredNorm();
    if (denom <= 0.0) {
        throw ValidationError("nrmse: target has zero variance");
    }
    return std::sqrt((pred - target).squaredNorm() / denom);
}

}  // namespace rcmoves
