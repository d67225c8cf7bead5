#include "mixdist/simulation.hpp"

#include "mixdist/error.hpp"
#include "mixdist/parallel.hpp"
#include "mixdist/rng.hpp"
#include "mixdist/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace mixdist {

namespace {

constexpr std::uint64_t instance_stream = 0x51;

} // namespace

SimInstance generate_instance(Eigen::Index n, Eigen::Index p, std::uint64_t seed, double sigma)
{
    if (p < 2 || n <= p)
        throw Error("generate_instance needs n > p >= 2");
    Rng rng(seed);
    std::uniform_real_distribution<double> uniform(-2.0, 2.0);
    std::normal_distribution<double> normal(0.0, sigma);

    SimInstance out;
    out.seed = seed;
    Eigen::MatrixXd draw(n, 2);
    for (Eigen::Index c = 0; c < 2; ++c)
        for (Eigen::Index i = 0; i < n; ++i)
            draw(i, c) = uniform(rng);

    out.truth.resize(n, 2);
    const Eigen::VectorXd first = draw.col(0).normalized();
    Eigen::VectorXd second = draw.col(1) - first.dot(draw.col(1)) * first;
    second -= first.dot(second) * first;
    second.normalize();
    out.truth.col(0) = first * draw.col(0).norm();
    out.truth.col(1) = second * draw.col(1).norm();

    out.loadings.resize(2, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index c = 0; c < 2; ++c)
            out.loadings(c, j) = uniform(rng);

    out.noise.resize(n, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            out.noise(i, j) = normal(rng);

    out.observed = out.truth * out.loadings + out.noise;
    return out;
}

MixedDataset to_dataset(const SimInstance& instance, const std::vector<int>& categories)
{
    const Eigen::Index p = instance.observed.cols();
    if (static_cast<Eigen::Index>(categories.size()) != p)
        throw Error("to_dataset needs one category count per observed column");
    std::vector<Column> columns;
    for (Eigen::Index j = 0; j < p; ++j) {
        NumericColumn numeric{"x" + std::to_string(j + 1), instance.observed.col(j)};
        const int q = categories[static_cast<std::size_t>(j)];
        if (q == 0)
            columns.emplace_back(std::move(numeric));
        else
            columns.emplace_back(drop_unused_levels(discretize(numeric, q)));
    }
    return MixedDataset(std::move(columns));
}

Summary summarize(const std::vector<double>& values)
{
    if (values.empty())
        throw Error("cannot summarize an empty sample");
    const Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
    Summary s;
    s.count = values.size();
    s.mean = v.mean();
    s.sd = std::sqrt((v.array() - s.mean).square().mean());
    s.min = v.minCoeff();
    s.max = v.maxCoeff();
    s.q1 = quantile(v, 0.25);
    s.median = quantile(v, 0.5);
    s.q3 = quantile(v, 0.75);
    return s;
}

std::vector<EffectsRecord> run_variable_effects(const EffectsParams& params)
{
    if (params.replications < 1)
        throw Error("run_variable_effects needs at least one replication");
    const auto p = static_cast<Eigen::Index>(params.categories.size());
    std::vector<std::vector<EffectsRecord>> per_rep(static_cast<std::size_t>(params.replications));

    parallel_for(per_rep.size(), [&](std::size_t r) {
        const SimInstance instance = generate_instance(params.n, p, derive_seed(params.seed, instance_stream, r));
        const MixedDataset mixed = to_dataset(instance, params.categories);
        const MixedDataset numeric = to_dataset(instance, std::vector<int>(params.categories.size(), 0));
        auto& records = per_rep[r];
        for (Variant variant : params.variants) {
            const MixedDataset& data = variant == Variant::numerical ? numeric : mixed;
            const LooImportance loo = loo_importance(data, DistanceMethod(variant), params.mds_dimension);
            for (const ImportanceReport* report : {&loo.distance, &loo.mds})
                for (std::size_t j = 0; j < report->variables.size(); ++j)
                    records.push_back({static_cast<int>(r), variant, report->variables[j], report->metric,
                                       report->absolute(static_cast<Eigen::Index>(j)),
                                       report->relative(static_cast<Eigen::Index>(j))});
        }
    });

    std::vector<EffectsRecord> out;
    for (auto& records : per_rep)
        out.insert(out.end(), records.begin(), records.end());
    return out;
}

std::vector<RetrievalRecord> run_retrieval(const RetrievalParams& params)
{
    if (params.replications < 1)
        throw Error("run_retrieval needs at least one replication");
    if (params.categorical_columns < 0 || params.categorical_columns > params.p)
        throw Error("run_retrieval: categorical column count outside [0, p]");
    std::vector<std::vector<RetrievalRecord>> per_rep(static_cast<std::size_t>(params.replications));

    parallel_for(per_rep.size(), [&](std::size_t r) {
        const SimInstance instance = generate_instance(params.n, params.p, derive_seed(params.seed, instance_stream, r));
        const Eigen::MatrixXd truth_distances = pairwise_euclidean(instance.truth);
        const auto retrieved = [&](Variant variant, const MixedDataset& data) {
            const Eigen::MatrixXd d = DistanceMethod(variant).compute(data).values;
            const Configuration layout = classical_mds(d, params.mds_dimension);
            return alienation(pairwise_euclidean(layout.coords), truth_distances);
        };
        // The undiscretized data do not depend on q, so the numerical variant is solved once.
        std::optional<double> numerical;
        auto& records = per_rep[r];
        for (int q : params.category_counts) {
            std::vector<int> categories(static_cast<std::size_t>(params.p), 0);
            std::fill_n(categories.begin(), params.categorical_columns, q);
            const MixedDataset mixed = to_dataset(instance, categories);
            for (Variant variant : params.variants) {
                double value = 0.0;
                if (variant == Variant::numerical) {
                    if (!numerical)
                        numerical = retrieved(variant, to_dataset(instance, std::vector<int>(
                                                                                static_cast<std::size_t>(params.p), 0)));
                    value = *numerical;
                } else {
                    value = retrieved(variant, mixed);
                }
                records.push_back({static_cast<int>(r), q, variant, value});
            }
        }
    });

    std::vector<RetrievalRecord> out;
    for (auto& records : per_rep)
        out.insert(out.end(), records.begin(), records.end());
    return out;
}

} // namespace mixdist
