#pragma once

#include "mixdist/dataset.hpp"
#include "mixdist/dissimilarity.hpp"
#include "mixdist/scaling.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mixdist {

enum class WeightMode { none, empirical, theoretical };

std::string_view to_string(WeightMode mode);
WeightMode parse_weight_mode(std::string_view name);

/// Population distribution declared for a numeric variable. Only needed by
/// theoretical weights, which take the closed-form mean distance.
enum class NumericDistribution { unspecified, uniform, normal };

NumericDistribution parse_distribution(std::string_view name);

/// Per-variable recipe for the additive mixed distance
///   d(x_i, x_l) = sum_j w_j delta_j(x_i, x_l).
/// Overrides are keyed by column name so a config survives dropping columns.
struct DistanceConfig {
    Scaling numeric_scaling = Scaling::sd;
    Dissimilarity categorical_dissimilarity = Dissimilarity::matching;
    std::map<std::string, Scaling> scaling_overrides;
    std::map<std::string, Dissimilarity> dissimilarity_overrides;
    std::map<std::string, NumericDistribution> distributions;

    WeightMode weights = WeightMode::none;
    /// Explicit per-variable weights (missing names get 1). Incompatible with
    /// empirical or theoretical weights.
    std::optional<std::map<std::string, double>> fixed_weights;

    double hl_phi = default_hl_phi;
    double kl_epsilon = default_kl_epsilon;

    Scaling scaling_for(const std::string& name) const;
    Dissimilarity dissimilarity_for(const std::string& name) const;

    /// Throws Error on inconsistent settings for this dataset: pc scaling must
    /// cover the whole numeric block, fixed weights exclude weight modes, and
    /// override names must exist.
    void validate(const MixedDataset& data) const;
};

/// One additive term: the unweighted per-pair dissimilarity of a variable
/// (or of a rotated principal component under pc scaling).
struct Contribution {
    std::string name;
    bool numeric = true;
    std::string kind;
    double weight = 1.0;
    double raw_mean = 0.0; // mean over ordered pairs of the unweighted term
    Eigen::MatrixXd matrix; // empty unless contributions were kept
};

struct DistanceMatrix {
    Eigen::MatrixXd values;
    bool additive = true;
    std::vector<Contribution> terms;
};

/// Mean over ordered pairs i != l, i.e. off-diagonal sum / (n (n - 1)).
double mean_pair_distance(const Eigen::Ref<const Eigen::MatrixXd>& d);

/// |f_i - f_l| for a scaled column.
Eigen::MatrixXd numeric_contrib(const Eigen::Ref<const Eigen::VectorXd>& f);

/// D_j = Z Delta Z'.
Eigen::MatrixXd categorical_contrib(const Eigen::Ref<const Eigen::MatrixXd>& z,
                                    const Eigen::Ref<const Eigen::MatrixXd>& delta);

/// Euclidean distances between the rows of x.
Eigen::MatrixXd pairwise_euclidean(const Eigen::Ref<const Eigen::MatrixXd>& x);

/// Dissimilarity kind actually applied to column j. An association-based kind
/// falls back to simple matching when j is the only categorical variable,
/// since there is no other variable to associate with.
Dissimilarity effective_dissimilarity(const MixedDataset& data, std::size_t j, const DistanceConfig& config);

/// Category dissimilarity of column j under the config (proportions, counts
/// and associations are estimated from the data).
Eigen::MatrixXd category_dissimilarity(const MixedDataset& data, std::size_t j, const DistanceConfig& config);

/// Weight per additive term, in the order the terms appear in mixed_distance.
std::vector<double> commensurable_weights(const MixedDataset& data, const DistanceConfig& config);

/// General additive mixed distance. Contribution matrices are retained in the
/// result when keep_contributions is set.
DistanceMatrix mixed_distance(const MixedDataset& data, const DistanceConfig& config, bool keep_contributions = false);

/// Range-scaled numerics plus simple matching, all weights 1.
DistanceMatrix gower_distance(const MixedDataset& data, bool keep_contributions = false);
/// sd-scaled numerics plus Hennig-Liao indicator dissimilarity, Manhattan, weights 1.
DistanceMatrix hl_additive(const MixedDataset& data, double phi = default_hl_phi, bool keep_contributions = false);
/// One-hot encode categoricals, sd-scale every column (indicators included), Euclidean.
DistanceMatrix naive_euclidean(const MixedDataset& data);
/// sd-scaled numerics, indicator blocks multiplied by eta_j, Euclidean.
DistanceMatrix hl_euclidean(const MixedDataset& data, double phi = default_hl_phi);

/// The eight benchmark variants.
enum class Variant {
    numerical,
    naive,
    hennig_liao,
    hennig_liao_additive,
    gower,
    unbiased_independent,
    unbiased_standardized,
    unbiased_dependent,
};

const std::vector<Variant>& all_variants();
std::string_view to_string(Variant variant);
std::string_view short_label(Variant variant);
Variant parse_variant(std::string_view name);

/// A distance recipe: a named variant or a custom additive config.
class DistanceMethod {
public:
    DistanceMethod(Variant variant);
    DistanceMethod(DistanceConfig config);

    DistanceMatrix compute(const MixedDataset& data, bool keep_contributions = false) const;

    bool additive() const;
    /// Additive and every term depends on its own variable only, so removing a
    /// variable removes exactly its weighted term.
    bool separable() const;
    std::string label() const;

    const std::optional<Variant>& variant() const { return variant_; }
    /// Additive recipe behind this method; throws for the Euclidean variants.
    DistanceConfig config() const;

private:
    std::optional<Variant> variant_;
    DistanceConfig config_;
};

} // namespace mixdist
