#pragma once

#include "mixdist/dissimilarity.hpp"
#include "mixdist/rng.hpp"
#include "mixdist/scaling.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mixdist {

/// Expected |X_i - X_l| for a scaled uniform variable: sd sqrt(12)/3,
/// range 1/3, robust range 2/3. Throws for pc.
double uniform_mean(Scaling kind);

/// Expected |X_i - X_l| for a scaled normal variable: sd 2/sqrt(pi), robust
/// range sqrt(1/pi)/z_0.75. Range scaling depends on the sample extremes and
/// has no n-free closed form: returns nullopt.
std::optional<double> normal_mean(Scaling kind);

/// Standard normal quantile (Acklam's rational approximation followed by one
/// Halley refinement step).
double standard_normal_quantile(double prob);

/// E[d] = p' Delta p.
double cat_expected(const Eigen::Ref<const Eigen::VectorXd>& p, const Eigen::Ref<const Eigen::MatrixXd>& delta);

struct EtaLimits {
    double large_n;    // sqrt(phi q / (q - 1))
    double n_equals_q; // sqrt(phi (q + 1) / (q - 1))
};

EtaLimits eta_limits(int q, double phi = default_hl_phi);

/// Category dissimilarity of `kind` for a single variable with proportions p,
/// sample size n (used by IOF and by the Hennig-Liao counts n p). The
/// association-based kinds use the perfect-dependence construction: two
/// variables with identical margins and a diagonal joint table, so R = I.
Eigen::MatrixXd dissimilarity_for_profile(Dissimilarity kind, const Eigen::Ref<const Eigen::VectorXd>& p, double n,
                                          double phi = default_hl_phi, double kl_epsilon = default_kl_epsilon);

struct UniformProfileRow {
    Dissimilarity kind;
    std::string label;
    double multiple_of_matching; // Delta = c (11' - I) under uniform p
    double expected;
};

/// Expected distances for every category dissimilarity under uniform p with q
/// categories. Hennig-Liao uses the large-n limit of eta; IOF uses n.
std::vector<UniformProfileRow> uniform_profile_table(int q, double n = 160.0, double phi = default_hl_phi,
                              double kl_epsilon = default_kl_epsilon);

/// The Kullback-Leibler constant printed with the uniform-probability table,
/// 5 log2(10). The symmetric-sum formula with epsilon = 1e-5 gives twice this
/// value per off-diagonal entry.
double printed_kl_kappa();

const std::vector<double>& skew_grid();

struct SkewPoint {
    double p1;
    double expected;
};

/// p_1 from the grid, the remaining mass spread evenly over the other q - 1
/// categories; evaluates p' Delta p along the grid.
std::vector<SkewPoint> skew_profile(int q, Dissimilarity kind, std::span<const double> p1_grid, double n = 160.0,
                                    double phi = default_hl_phi, double kl_epsilon = default_kl_epsilon);

/// Distributions of the numeric scaling experiment.
enum class Distribution { normal, uniform, skewed, bimodal };

std::string_view to_string(Distribution dist);

/// Draws n values. skewed: chi-square with 1/2 degree of freedom (Gamma with
/// shape 1/4, scale 2). bimodal: n/2 skewed draws clipped at 10 and n - n/2
/// draws of 10 minus a skewed draw, clipped at 0.
Eigen::VectorXd sample_distribution(Distribution dist, Eigen::Index n, Rng& rng);

struct ScalingMeanCell {
    Distribution distribution;
    Eigen::Index n;
    int replications;
    double sd;
    double range;
    double robust_range;
};

/// Monte-Carlo mean over replications of the mean ordered-pair distance of a
/// scaled sample, per scaling kind.
ScalingMeanCell scaling_mean_cell(Distribution dist, Eigen::Index n, int replications, std::uint64_t seed);

std::vector<ScalingMeanCell> scaling_mean_table(std::span<const Eigen::Index> sizes, int replications, std::uint64_t seed);

} // namespace mixdist
