#pragma once

#include "rcmoves/linalg.hpp"

#include <cstdint>
#include <vector>

namespace rcmoves {

struct ClusterModel {
    int k = 0;
    Matrix centroids;             // k x N
    std::vector<int> labels;      // per input row, in [0, k)
    double inertia = 0.0;         // total squared distance to assigned centroids
    double bic = 0.0;             // NaN when undefined (L <= k)
    std::vector<double> iteration_inertia;  // after each assignment step
};

// Lloyd iterations from k-means++ seeding until the assignment reaches a
// fixpoint or max_iter rounds. Ties go to the lowest cluster index; a cluster
// that empties is repaired by promoting the point farthest from its centroid.
// Deterministic given (points, k, seed, max_iter).
ClusterModel kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iter = 100);

// Lloyd from a caller-supplied centroid set (warm start, no reseeding).
ClusterModel kmeans_from(const Matrix& points, const Matrix& initial_centroids,
                         int max_iter = 100);

// Spherical-Gaussian identical-variance BIC, higher is better:
//   sigma^2 = SS / (d (L - k))
//   loglik  = sum_j R_j log(R_j/L) - (L d / 2) log(2 pi sigma^2) - d (L - k)/2
//   bic     = loglik - (k (d + 1) / 2) log L
double bic_score(const ClusterModel& model, const Matrix& points);

// X-means: starts at k = 2 and alternates improve-structure (try a 2-way
// split of each cluster, keep it when the split's local BIC beats the
// unsplit score on that cluster's own points) with improve-params (global
// Lloyd re-convergence), for at most max_improve_iters rounds or until no
// split is accepted. k never exceeds k_max.
ClusterModel xmeans(const Matrix& points, int k_max, int max_improve_iters, std::uint64_t seed);

}  // namespace rcmoves
