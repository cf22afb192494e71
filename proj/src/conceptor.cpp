#include "rcmoves/conceptor.hpp"

#include "rcmoves/error.hpp"

#include <cmath>

namespace rcmoves {

Matrix correlation(const StateSeries& series) {
    return correlation(series.states);
}

Matrix correlation(const Matrix& states) {
    if (states.rows() < 1) {
        throw ValidationError("correlation: empty state collection");
    }
    require_finite(states, "correlation: states");
    const Eigen::Index n = states.cols();
    Matrix r = Matrix::Zero(n, n);
    r.selfadjointView<Eigen::Lower>().rankUpdate(states.transpose(),
                                                 1.0 / static_cast<double>(states.rows()));
    return r.selfadjointView<Eigen::Lower>();
}

Conceptor compute_conceptor(const Matrix& r, double aperture, const std::string& source,
                            std::int64_t n_states) {
    if (!(aperture > 0.0)) {
        throw ValidationError("compute_conceptor: aperture must be positive");
    }
    SymEig eig = sym_eig(r);
    if (eig.values.size() > 0 && eig.values.minCoeff() < -1e-8) {
        throw ValidationError("compute_conceptor: R is not PSD (min eigenvalue " +
                              std::to_string(eig.values.minCoeff()) + ")");
    }

    const double inv_sq = 1.0 / (aperture * aperture);
    Conceptor c;
    c.aperture = aperture;
    c.source = source;
    c.n_states = n_states;
    c.eigenvalues.resize(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        const double s = std::max(0.0, eig.values(i));  // clip PSD roundoff
        c.eigenvalues(i) = s / (s + inv_sq);
    }
    c.eigenvectors = std::move(eig.vectors);
    c.c = c.eigenvectors * c.eigenvalues.asDiagonal() * c.eigenvectors.transpose();
    c.c = 0.5 * (c.c + c.c.transpose().eval());  // exact symmetry after roundoff
    return c;
}

Conceptor rescale_aperture(const Conceptor& c, double gamma) {
    if (!(gamma > 0.0)) {
        throw ValidationError("rescale_aperture: gamma must be positive");
    }
    const double inv_sq = 1.0 / (gamma * gamma);
    Conceptor out;
    out.aperture = c.aperture * gamma;
    out.source = c.source;
    out.n_states = c.n_states;
    out.eigenvalues.resize(c.eigenvalues.size());
    for (Eigen::Index i = 0; i < c.eigenvalues.size(); ++i) {
        const double sigma = c.eigenvalues(i);
        if (sigma >= 1.0 && std::isfinite(gamma)) {
            throw ValidationError("rescale_aperture: eigenvalue 1 cannot be rescaled");
        }
        out.eigenvalues(i) = sigma / (sigma + inv_sq * (1.0 - sigma));
    }
    out.eigenvectors = c.eigenvectors;
    out.c = out.eigenvectors * out.eigenvalues.asDiagonal() * out.eigenvectors.transpose();
    out.c = 0.5 * (out.c + out.c.transpose().eval());
    return out;
}

double quota(const Conceptor& c) {
    if (c.dim() == 0) {
        return 0.0;
    }
    return c.c.trace() / static_cast<double>(c.dim());
}

}  // namespace rcmoves
