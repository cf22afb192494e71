#include "rcmoves/clustering.hpp"

#include "rcmoves/error.hpp"
#include "rcmoves/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rcmoves {

namespace {

// Nearest centroid per point; ties resolved toward the lowest index by the
// strict less-than comparison. Returns true if any label changed.
bool assign_labels(const Matrix& points, const Matrix& centroids, std::vector<int>& labels) {
    const Eigen::Index l = points.rows();
    const Eigen::Index k = centroids.rows();
    const Matrix cross = points * centroids.transpose();  // L x k
    const Vector c_norm = centroids.rowwise().squaredNorm();

    bool changed = false;
    for (Eigen::Index i = 0; i < l; ++i) {
        int best = 0;
        double best_score = c_norm(0) - 2.0 * cross(i, 0);
        for (Eigen::Index j = 1; j < k; ++j) {
            const double score = c_norm(j) - 2.0 * cross(i, j);
            if (score < best_score) {
                best_score = score;
                best = static_cast<int>(j);
            }
        }
        if (labels[static_cast<std::size_t>(i)] != best) {
            labels[static_cast<std::size_t>(i)] = best;
            changed = true;
        }
    }
    return changed;
}

double compute_inertia(const Matrix& points, const Matrix& centroids,
                       const std::vector<int>& labels) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        total += (points.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
    }
    return total;
}

// Mean update with empty-cluster repair: an empty cluster's centroid becomes
// the point currently farthest from its own centroid (each repair consumes
// that point so several empties pick distinct points).
void update_centroids(const Matrix& points, std::vector<int>& labels, Matrix& centroids) {
    const Eigen::Index k = centroids.rows();
    Matrix sums = Matrix::Zero(k, points.cols());
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const int c = labels[static_cast<std::size_t>(i)];
        sums.row(c) += points.row(i);
        ++counts[static_cast<std::size_t>(c)];
    }

    std::vector<int> empties;
    for (Eigen::Index j = 0; j < k; ++j) {
        if (counts[static_cast<std::size_t>(j)] > 0) {
            centroids.row(j) = sums.row(j) / static_cast<double>(counts[static_cast<std::size_t>(j)]);
        } else {
            empties.push_back(static_cast<int>(j));
        }
    }
    if (empties.empty()) {
        return;
    }

    std::vector<double> dist(static_cast<std::size_t>(points.rows()));
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        dist[static_cast<std::size_t>(i)] =
            (points.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
    }
    for (int j : empties) {
        Eigen::Index farthest = 0;
        for (Eigen::Index i = 1; i < points.rows(); ++i) {
            if (dist[static_cast<std::size_t>(i)] > dist[static_cast<std::size_t>(farthest)]) {
                farthest = i;
            }
        }
        centroids.row(j) = points.row(farthest);
        dist[static_cast<std::size_t>(farthest)] = -1.0;  // consumed
    }
}

Matrix kmeanspp_seed(const Matrix& points, int k, Rng& rng) {
    const Eigen::Index l = points.rows();
    Matrix centroids(k, points.cols());
    centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(l))));

    Vector mindist(l);
    for (Eigen::Index i = 0; i < l; ++i) {
        mindist(i) = (points.row(i) - centroids.row(0)).squaredNorm();
    }
    for (int j = 1; j < k; ++j) {
        const double total = mindist.sum();
        Eigen::Index pick = 0;
        if (total > 0.0) {
            const double r = rng.next_double() * total;
            double cum = 0.0;
            pick = l - 1;
            for (Eigen::Index i = 0; i < l; ++i) {
                cum += mindist(i);
                if (cum > r) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(l)));
        }
        centroids.row(j) = points.row(pick);
        for (Eigen::Index i = 0; i < l; ++i) {
            mindist(i) = std::min(mindist(i), (points.row(i) - centroids.row(j)).squaredNorm());
        }
    }
    return centroids;
}

ClusterModel lloyd(const Matrix& points, Matrix centroids, int max_iter) {
    ClusterModel model;
    model.k = static_cast<int>(centroids.rows());
    model.labels.assign(static_cast<std::size_t>(points.rows()), 0);

    assign_labels(points, centroids, model.labels);
    model.iteration_inertia.push_back(compute_inertia(points, centroids, model.labels));
    for (int iter = 0; iter < max_iter; ++iter) {
        update_centroids(points, model.labels, centroids);
        const bool changed = assign_labels(points, centroids, model.labels);
        model.iteration_inertia.push_back(compute_inertia(points, centroids, model.labels));
        if (!changed) {
            break;
        }
    }
    model.centroids = std::move(centroids);
    model.inertia = model.iteration_inertia.back();
    model.bic = (points.rows() > model.k) ? bic_score(model, points)
                                          : std::numeric_limits<double>::quiet_NaN();
    return model;
}

}  // namespace

ClusterModel kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iter) {
    if (k < 1) {
        throw ValidationError("kmeans: k must be >= 1");
    }
    if (points.rows() < k) {
        throw ValidationError("kmeans: k = " + std::to_string(k) + " exceeds point count " +
                              std::to_string(points.rows()));
    }
    if (max_iter < 1) {
        throw ValidationError("kmeans: max_iter must be >= 1");
    }
    require_finite(points, "kmeans: points");
    Rng rng(seed);
    return lloyd(points, kmeanspp_seed(points, k, rng), max_iter);
}

ClusterModel kmeans_from(const Matrix& points, const Matrix& initial_centroids, int max_iter) {
    if (initial_centroids.rows() < 1 || initial_centroids.rows() > points.rows()) {
        throw ValidationError("kmeans_from: centroid count out of range");
    }
    if (initial_centroids.cols() != points.cols()) {
        throw ValidationError("kmeans_from: centroid dimension mismatch");
    }
    require_finite(points, "kmeans_from: points");
    require_finite(initial_centroids, "kmeans_from: centroids");
    return lloyd(points, initial_centroids, max_iter);
}

double bic_score(const ClusterModel& model, const Matrix& points) {
    const Eigen::Index l = points.rows();
    const double d = static_cast<double>(points.cols());
    if (l <= model.k) {
        throw ValidationError("bic_score: need more points than clusters");
    }
    if (model.labels.size() != static_cast<std::size_t>(l)) {
        throw ValidationError("bic_score: model does not fit points");
    }

    std::vector<std::int64_t> counts(static_cast<std::size_t>(model.k), 0);
    double ss = 0.0;
    for (Eigen::Index i = 0; i < l; ++i) {
        const int c = model.labels[static_cast<std::size_t>(i)];
        if (c < 0 || c >= model.k) {
            throw ValidationError("bic_score: label out of range");
        }
        ++counts[static_cast<std::size_t>(c)];
        ss += (points.row(i) - model.centroids.row(c)).squaredNorm();
    }

    const double ln = static_cast<double>(l);
    const double free_dof = d * static_cast<double>(l - model.k);
    // Guard against an exact fit; keeps comparisons finite and split-averse.
    const double sigma2 = std::max(ss / std::max(free_dof, 1.0), 1e-30);

    double loglik = -0.5 * ln * d * std::log(2.0 * std::numbers::pi * sigma2) - 0.5 * free_dof;
    for (std::int64_t r : counts) {
        if (r > 0) {
            loglik += static_cast<double>(r) * std::log(static_cast<double>(r) / ln);
        }
    }
    const double penalty = static_cast<double>(model.k) * (d + 1.0);
    return loglik - 0.5 * penalty * std::log(ln);
}

ClusterModel xmeans(const Matrix& points, int k_max, int max_improve_iters, std::uint64_t seed) {
    if (k_max < 2) {
        throw ValidationError("xmeans: k_max must be >= 2");
    }
    if (points.rows() < 2) {
        throw ValidationError("xmeans: need at least 2 points");
    }
    if (max_improve_iters < 0) {
        throw ValidationError("xmeans: max_improve_iters must be >= 0");
    }

    constexpr int kLloydMaxIter = 100;
    constexpr Eigen::Index kMinSplitSize = 4;  // need >2 points per BIC model
    ClusterModel model = kmeans(points, 2, derive_seed(seed, 0, 0), kLloydMaxIter);

    for (int round = 1; round <= max_improve_iters; ++round) {
        std::vector<Matrix> next_centroids;
        int planned_k = model.k;
        bool any_split = false;

        for (int j = 0; j < model.k; ++j) {
            std::vector<Eigen::Index> member_rows;
            for (Eigen::Index i = 0; i < points.rows(); ++i) {
                if (model.labels[static_cast<std::size_t>(i)] == j) {
                    member_rows.push_back(i);
                }
            }
            Matrix members(static_cast<Eigen::Index>(member_rows.size()), points.cols());
            for (std::size_t m = 0; m < member_rows.size(); ++m) {
                members.row(static_cast<Eigen::Index>(m)) = points.row(member_rows[m]);
            }

            bool split = false;
            if (planned_k < k_max && members.rows() >= kMinSplitSize) {
                ClusterModel parent;
                parent.k = 1;
                parent.centroids = members.colwise().mean();
                parent.labels.assign(static_cast<std::size_t>(members.rows()), 0);
                const double bic_one = bic_score(parent, members);

                ClusterModel child = kmeans(members, 2,
                                            derive_seed(seed, static_cast<std::uint64_t>(round),
                                                        static_cast<std::uint64_t>(j)),
                                            kLloydMaxIter);
                if (child.k == 2 && bic_score(child, members) > bic_one) {
                    next_centroids.push_back(child.centroids);
                    ++planned_k;
                    any_split = true;
                    split = true;
                }
            }
            if (!split) {
                next_centroids.push_back(model.centroids.row(j));
            }
        }

        if (!any_split) {
            break;
        }
        Matrix seeds(planned_k, points.cols());
        Eigen::Index row = 0;
        for (const Matrix& block : next_centroids) {
            seeds.middleRows(row, block.rows()) = block;
            row += block.rows();
        }
        model = kmeans_from(points, seeds, kLloydMaxIter);
    }
    return model;
}

}  // namespace rcmoves
