#pragma once

#include "mixdist/analysis.hpp"
#include "mixdist/dataset.hpp"
#include "mixdist/distance.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace mixdist {

/// A planted low-dimensional structure and its noisy p-dimensional expansion:
/// observed = truth * loadings + noise.
struct SimInstance {
    Eigen::MatrixXd truth;    // n x 2, orthogonal columns
    Eigen::MatrixXd loadings; // 2 x p, uniform on [-2, 2]
    Eigen::MatrixXd noise;    // n x p, normal with sd sigma
    Eigen::MatrixXd observed; // n x p
    std::uint64_t seed = 0;
};

/// Draws an n x 2 uniform[-2, 2] matrix, orthogonalizes its columns
/// (Gram-Schmidt, each column rescaled to the norm of its draw), expands with
/// a random 2 x p loading matrix and adds N(0, sigma^2) noise.
SimInstance generate_instance(Eigen::Index n, Eigen::Index p, std::uint64_t seed, double sigma = 0.03);

/// Dataset from the observed matrix. categories[j] = 0 keeps column j numeric,
/// otherwise column j is discretized into that many equal-width intervals
/// (unobserved intervals are dropped). Columns are named x1..xp.
MixedDataset to_dataset(const SimInstance& instance, const std::vector<int>& categories);

struct Summary {
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

/// Sample summary (population sd, quartiles by linear interpolation).
Summary summarize(const std::vector<double>& values);

struct EffectsParams {
    int replications = 100;
    Eigen::Index n = 500;
    std::vector<int> categories = {2, 3, 5, 9, 0, 0}; // per column, 0 = numeric
    int mds_dimension = 2;
    std::uint64_t seed = 1;
    std::vector<Variant> variants = all_variants();
};

struct EffectsRecord {
    int replication;
    Variant variant;
    std::string variable;
    ImportanceMetric metric;
    double absolute;
    double relative;
};

/// Leave-one-variable-out distance and MDS effects per replication and
/// variant. The numerical variant runs on the undiscretized data.
std::vector<EffectsRecord> run_variable_effects(const EffectsParams& params);

struct RetrievalParams {
    int replications = 100;
    Eigen::Index n = 500;
    Eigen::Index p = 6;
    int categorical_columns = 3;
    std::vector<int> category_counts = {2, 3, 5, 9};
    int mds_dimension = 2;
    std::uint64_t seed = 1;
    std::vector<Variant> variants = all_variants();
};

struct RetrievalRecord {
    int replication;
    int q;
    Variant variant;
    double alienation;
};

/// Alienation between the 2-D classical MDS solution of each variant and the
/// planted configuration. The same instance is reused across q for a given
/// replication; the first categorical_columns columns are discretized.
std::vector<RetrievalRecord> run_retrieval(const RetrievalParams& params);

} // namespace mixdist
