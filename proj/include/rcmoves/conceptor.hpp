#pragma once

#include "rcmoves/esn.hpp"
#include "rcmoves/linalg.hpp"

#include <cstdint>
#include <string>

namespace rcmoves {

// Symmetric PSD matrix with spectrum in [0, 1) characterizing the ellipsoid
// of reservoir states of one pattern. The eigendecomposition is cached so
// aperture rescaling and the quota are O(N).
struct Conceptor {
    Matrix c;             // N x N
    Vector eigenvalues;   // descending, in [0, 1)
    Matrix eigenvectors;  // columns pair with eigenvalues
    double aperture = 1.0;
    std::string source;        // cluster id or "whole-game"
    std::int64_t n_states = 0;

    Eigen::Index dim() const { return c.rows(); }
};

// State correlation matrix R = (1/L) sum x(n) x(n)^T.
Matrix correlation(const StateSeries& series);
Matrix correlation(const Matrix& states);

// C = R (R + aperture^-2 I)^-1: shares R's eigenvectors, with eigenvalues
// s_i / (s_i + aperture^-2). R must be PSD (eigenvalues >= -1e-8; small
// negative roundoff is clipped to zero).
Conceptor compute_conceptor(const Matrix& r, double aperture, const std::string& source = "",
                            std::int64_t n_states = 0);

// Changes the aperture by the factor gamma without access to R: eigenvalues
// map to s / (s + gamma^-2 (1 - s)), identical to recomputing with
// aperture * gamma. gamma = 1 is the identity.
Conceptor rescale_aperture(const Conceptor& c, double gamma);

// Mean eigenvalue trace(C)/N, a scalar summary of how many state-space
// directions the conceptor admits.
double quota(const Conceptor& c);

}  // namespace rcmoves
