#pragma once

#include "mixdist/dataset.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string_view>

namespace mixdist {

/// Category dissimilarity matrices are plain q x q Eigen matrices: symmetric,
/// zero diagonal, nonnegative off-diagonal.
enum class Dissimilarity {
    matching,
    eskin,
    of,
    iof,
    indicator_plain,
    indicator_hl,
    indicator_sd,
    indicator_cds,
    kl_assoc,
    tvd_assoc,
};

std::string_view to_string(Dissimilarity kind);
Dissimilarity parse_dissimilarity(std::string_view name);
bool is_association_based(Dissimilarity kind);

enum class AssocKernel { kl, tvd };

inline constexpr double default_kl_epsilon = 1e-5;
inline constexpr double default_hl_phi = 0.5;

/// True when delta is square, symmetric, has zero diagonal and nonnegative
/// off-diagonal entries (within tol).
bool is_category_dissimilarity(const Eigen::Ref<const Eigen::MatrixXd>& delta, double tol = 0.0);

/// 11' - I.
Eigen::MatrixXd matching(int q);
/// (2 / q^2) (11' - I).
Eigen::MatrixXd eskin(int q);
/// Occurrence frequency: ln(p_a) ln(p_b) off the diagonal.
Eigen::MatrixXd of_dissim(const Eigen::Ref<const Eigen::VectorXd>& p);
/// Inverse occurrence frequency: ln(n p_a) ln(n p_b) off the diagonal; needs n p_a >= 1.
Eigen::MatrixXd iof_dissim(const Eigen::Ref<const Eigen::VectorXd>& p, double n);
/// Manhattan distance between raw indicator rows: 2 (11' - I).
Eigen::MatrixXd indicator_plain(int q);

/// Hennig-Liao indicator scaling factor eta = sqrt(phi T / B) with
/// T = n(n+1)/2, W = sum n_a(n_a+1)/2 and B = T - W. Counts may be fractional
/// (expected counts).
double hl_factor(const Eigen::Ref<const Eigen::VectorXd>& counts, double phi = default_hl_phi);
/// 2 eta (11' - I).
Eigen::MatrixXd indicator_hl(int q, double eta);
/// Manhattan distance between sd-scaled indicator rows:
/// sqrt(1/q) (s_a^{-1/2} + s_b^{-1/2}) with s_a = p_a (1 - p_a).
Eigen::MatrixXd indicator_sd(const Eigen::Ref<const Eigen::VectorXd>& p);
/// Category dissimilarity scaling: (1/q) (s_a s_b)^{-1/2} off the diagonal.
Eigen::MatrixXd indicator_cds(const Eigen::Ref<const Eigen::VectorXd>& p);

/// R = (Zj' Zj)^{-1} Zj' Zk: row a is the distribution of variable k among
/// the observations in category a of variable j.
Eigen::MatrixXd conditional_rows(const Eigen::Ref<const Eigen::MatrixXd>& zj,
                                 const Eigen::Ref<const Eigen::MatrixXd>& zk);

/// Symmetric Kullback-Leibler divergence (base 2) between rows of R. A zero
/// entry used inside a log ratio is replaced by epsilon; a term whose
/// multiplier is zero contributes nothing.
Eigen::MatrixXd kl_dissim(const Eigen::Ref<const Eigen::MatrixXd>& r, double epsilon = default_kl_epsilon);
/// Total variation distance 1/2 ||r_a - r_b||_1 between rows of R.
Eigen::MatrixXd tvd_dissim(const Eigen::Ref<const Eigen::MatrixXd>& r);

/// Unweighted mean over every other categorical variable k of
/// kernel(conditional_rows(Z_j, Z_k)). Numeric columns are ignored.
Eigen::MatrixXd aggregate_assoc(const MixedDataset& data, std::size_t j, AssocKernel kernel,
                                double epsilon = default_kl_epsilon);

} // namespace mixdist
