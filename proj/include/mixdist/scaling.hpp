#pragma once

#include <Eigen/Dense>

#include <string_view>

namespace mixdist {

enum class Scaling { sd, range, robust_range, pc };

std::string_view to_string(Scaling kind);
Scaling parse_scaling(std::string_view name);

/// Per-column affine transform f(x) = (x - center) / scale and its output.
struct ScaledColumn {
    Eigen::VectorXd values;
    double center = 0.0;
    double scale = 1.0;
};

/// z-scores with the population standard deviation (divisor n).
ScaledColumn sd_scale(const Eigen::Ref<const Eigen::VectorXd>& x);
/// (x - min) / (max - min).
ScaledColumn range_scale(const Eigen::Ref<const Eigen::VectorXd>& x);
/// (x - median) / (Q75 - Q25).
ScaledColumn robust_range_scale(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Sample quantile by linear interpolation between order statistics at
/// 1-based position 1 + (n - 1) * prob.
double quantile(const Eigen::Ref<const Eigen::VectorXd>& x, double prob);

/// Population covariance (1/n) Xc' Xc of the column-centred matrix.
Eigen::MatrixXd covariance(const Eigen::Ref<const Eigen::MatrixXd>& x);

struct SymmetricEigen {
    Eigen::VectorXd values;  // non-increasing
    Eigen::MatrixXd vectors; // orthonormal columns, largest-magnitude loading positive
    int sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Converged once the
/// off-diagonal Frobenius mass drops below 1e-12 times the diagonal mass;
/// throws Error after max_sweeps sweeps without convergence.
SymmetricEigen sym_eig(const Eigen::Ref<const Eigen::MatrixXd>& s, int max_sweeps = 100);

/// Flips eigenvector columns so that each column's largest-magnitude entry is
/// positive (first such entry on ties).
void normalize_signs(Eigen::Ref<Eigen::MatrixXd> vectors);

/// Principal-coordinate scaling X* = Xc V Lambda^{-1/2}. The block is rotated,
/// never truncated.
struct PcScaled {
    Eigen::MatrixXd scores;      // X*, n x p
    Eigen::VectorXd mean;        // column means removed before rotation
    Eigen::VectorXd eigenvalues; // Lambda, non-increasing
    Eigen::MatrixXd eigenvectors;
    Eigen::MatrixXd rotation;    // V Lambda^{-1/2}
};

/// Throws Error when the smallest covariance eigenvalue is at most
/// 1e-10 times the largest.
PcScaled pc_scale(const Eigen::Ref<const Eigen::MatrixXd>& x);

/// A numeric block transformed by one scaling kind. For the per-column kinds
/// center/scale hold the fitted parameters and rotation is empty.
struct ScaledNumericBlock {
    Eigen::MatrixXd matrix;
    Scaling kind = Scaling::sd;
    Eigen::VectorXd center;
    Eigen::VectorXd scale;
    Eigen::MatrixXd rotation;
};

ScaledNumericBlock scale_block(const Eigen::Ref<const Eigen::MatrixXd>& x, Scaling kind);

} // namespace mixdist
