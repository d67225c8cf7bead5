#pragma once

#include "mixdist/dataset.hpp"
#include "mixdist/distance.hpp"

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

namespace mixdist {

/// Largest-k eigenpairs of a symmetric matrix together with its full spectrum.
struct TopEigen {
    Eigen::VectorXd spectrum; // all eigenvalues, non-increasing
    Eigen::VectorXd values;   // the k largest, non-increasing
    Eigen::MatrixXd vectors;  // n x k, orthonormal, largest-magnitude loading positive
};

/// Householder tridiagonalization, implicit QR for the spectrum, then inverse
/// iteration on the tridiagonal matrix for the k leading eigenvectors.
TopEigen top_eigenpairs(const Eigen::Ref<const Eigen::MatrixXd>& s, int k);

/// Classical (Torgerson) MDS solution.
struct Configuration {
    Eigen::MatrixXd coords;     // n x k, centred columns
    Eigen::VectorXd eigenvalues; // the k leading eigenvalues of -1/2 J D^2 J
    Eigen::VectorXd spectrum;    // every eigenvalue, non-increasing
    int positive_used = 0;       // columns backed by a positive eigenvalue
    bool padded = false;         // fewer than k positive eigenvalues: zero columns appended
    double negative_mass = 0.0;  // sum of |lambda| over negative eigenvalues
};

/// Double-centres -1/2 D o D, keeps the k leading positive eigenvalues and
/// scales their eigenvectors by sqrt(lambda). Negative eigenvalues are dropped
/// and reported through negative_mass.
Configuration classical_mds(const Eigen::Ref<const Eigen::MatrixXd>& d, int k);

/// Alienation sqrt(1 - c^2), with c the congruence coefficient of the upper
/// triangles of two distance matrices. Invariant to scaling either argument.
double alienation(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b);

enum class ImportanceMetric { mean_abs_diff, alienation };

std::string_view to_string(ImportanceMetric metric);
ImportanceMetric parse_importance_metric(std::string_view name);

struct ImportanceReport {
    ImportanceMetric metric = ImportanceMetric::mean_abs_diff;
    std::vector<std::string> variables;
    Eigen::VectorXd absolute;
    Eigen::VectorXd relative; // absolute / sum(absolute)
};

/// Leave-one-variable-out effect on the distance matrix: mean over ordered
/// pairs of |D_full - D_without_j|. Separable additive methods drop the
/// variable's weighted term; other methods are refitted on the reduced data.
ImportanceReport loo_distance_importance(const MixedDataset& data, const DistanceMethod& method);

/// Leave-one-variable-out effect on a k-dimensional classical MDS solution:
/// alienation between the Euclidean distances of MDS(D_full) and MDS(D_without_j).
ImportanceReport loo_mds_importance(const MixedDataset& data, const DistanceMethod& method, int k = 2);

/// Both reports from a single pass over the leave-one-out distance matrices.
struct LooImportance {
    ImportanceReport distance;
    ImportanceReport mds;
};

LooImportance loo_importance(const MixedDataset& data, const DistanceMethod& method, int k = 2);

} // namespace mixdist
