#pragma once

#include <Eigen/Dense>

#include <string>

namespace rcmoves {

// Dense row-major-convention matrices; row-major layout is honored at every
// serialization boundary. All numerically delicate routines live behind the
// functions below so the rest of the code never touches a decomposition.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Throws ValidationError if any entry is NaN or infinite.
void require_finite(const Matrix& m, const std::string& what);
void require_finite(const Vector& v, const std::string& what);

// Standard matrix-vector product with dimension checking.
Vector matvec(const Matrix& a, const Vector& v);

// Minimizes ||X W^T - Y||^2 + lambda ||W||^2 and returns W (M x N for
// X: L x N, Y: L x M), i.e. W^T = (X^T X + lambda I)^-1 X^T Y.
// lambda > 0 is solved by Cholesky on the normal equations; lambda = 0
// falls back to a rank-revealing decomposition of X when the normal
// equations are singular or ill-conditioned, yielding the minimum-norm
// least-squares solution.
Matrix ridge_solve(const Matrix& x, const Matrix& y, double lambda);

struct SymEig {
    Vector values;   // descending
    Matrix vectors;  // column i pairs with values[i]; orthonormal
};

// Eigendecomposition of a symmetric matrix (symmetry checked to 1e-10).
SymEig sym_eig(const Matrix& s);

// Largest absolute eigenvalue of a square matrix.
double spectral_radius(const Matrix& a);

// Root-mean-square error of pred vs target, normalized by the target's
// centered standard deviation (pooled over all columns). 1.0 matches a
// mean predictor.
double nrmse(const Matrix& pred, const Matrix& target);

}  // namespace rcmoves
