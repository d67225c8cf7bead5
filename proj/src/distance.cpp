#include "mixdist/distance.hpp"

#include "mixdist/error.hpp"
#include "mixdist/expected.hpp"
#include "mixdist/parallel.hpp"

#include <cmath>
#include <set>

namespace mixdist {

namespace {

// One additive term before weighting. Numeric terms hold a scaled column,
// categorical terms hold codes, proportions and the dissimilarity matrix.
struct Term {
    std::string name;
    bool numeric = true;
    std::string kind;
    Eigen::VectorXd scaled;
    const CategoricalColumn* column = nullptr;
    Eigen::VectorXd p;
    Eigen::MatrixXd delta;
    NumericDistribution distribution = NumericDistribution::unspecified;
    Scaling scaling = Scaling::sd;
};

bool uses_pc(const MixedDataset& data, const DistanceConfig& config)
{
    for (std::size_t j : data.numeric_indices())
        if (config.scaling_for(data.name(j)) == Scaling::pc)
            return true;
    return false;
}

std::vector<Term> build_terms(const MixedDataset& data, const DistanceConfig& config)
{
    config.validate(data);
    std::vector<Term> terms;
    const auto numeric = data.numeric_indices();

    if (!numeric.empty() && uses_pc(data, config)) {
        const PcScaled pc = pc_scale(data.numeric_block());
        bool all_normal = true;
        for (std::size_t j : numeric) {
            const auto it = config.distributions.find(data.name(j));
            all_normal = all_normal && it != config.distributions.end() && it->second == NumericDistribution::normal;
        }
        for (Eigen::Index k = 0; k < pc.scores.cols(); ++k) {
            Term t;
            t.name = "PC" + std::to_string(k + 1);
            t.kind = "pc";
            t.scaling = Scaling::pc;
            t.scaled = pc.scores.col(k);
            t.distribution = all_normal ? NumericDistribution::normal : NumericDistribution::unspecified;
            terms.push_back(std::move(t));
        }
    }

    for (std::size_t j = 0; j < data.cols(); ++j) {
        const std::string& name = data.name(j);
        if (data.is_numeric(j)) {
            const Scaling kind = config.scaling_for(name);
            if (kind == Scaling::pc)
                continue;
            Term t;
            t.name = name;
            t.kind = std::string(to_string(kind));
            t.scaling = kind;
            const auto& x = data.numeric(j).values;
            t.scaled = kind == Scaling::sd      ? sd_scale(x).values
                       : kind == Scaling::range ? range_scale(x).values
                                                : robust_range_scale(x).values;
            if (const auto it = config.distributions.find(name); it != config.distributions.end())
                t.distribution = it->second;
            terms.push_back(std::move(t));
        } else {
            Term t;
            t.name = name;
            t.numeric = false;
            t.kind = std::string(to_string(effective_dissimilarity(data, j, config)));
            t.column = &data.categorical(j);
            t.p = proportions(*t.column, ZeroCounts::allow);
            t.delta = category_dissimilarity(data, j, config);
            terms.push_back(std::move(t));
        }
    }
    return terms;
}

Eigen::MatrixXd term_matrix(const Term& t)
{
    if (t.numeric)
        return numeric_contrib(t.scaled);
    return categorical_contrib(indicator(*t.column), t.delta);
}

double theoretical_weight(const Term& t)
{
    double expected = 0.0;
    if (t.numeric) {
        if (t.distribution == NumericDistribution::uniform) {
            expected = uniform_mean(t.scaling);
        } else if (t.distribution == NumericDistribution::normal) {
            const auto value = normal_mean(t.scaling);
            if (!value)
                throw Error("no closed-form mean distance for '" + t.name + "' (" + t.kind + " scaling, normal)");
            expected = *value;
        } else {
            throw Error("theoretical weights need a declared distribution for numeric variable '" + t.name + "'");
        }
    } else {
        expected = cat_expected(t.p, t.delta);
    }
    if (!(expected > 0.0))
        throw Error("expected distance of '" + t.name + "' is zero; cannot weight it");
    return 1.0 / expected;
}

double term_weight(const Term& t, double raw_mean, const DistanceConfig& config)
{
    switch (config.weights) {
    case WeightMode::none:
        if (config.fixed_weights) {
            const auto it = config.fixed_weights->find(t.name);
            return it == config.fixed_weights->end() ? 1.0 : it->second;
        }
        return 1.0;
    case WeightMode::empirical:
        if (!(raw_mean > 0.0))
            throw Error("mean pair distance of '" + t.name + "' is zero; cannot weight it");
        return 1.0 / raw_mean;
    case WeightMode::theoretical:
        return theoretical_weight(t);
    }
    return 1.0;
}

Eigen::VectorXd z_scores_or_throw(const Eigen::VectorXd& x, const std::string& what)
{
    try {
        return sd_scale(x).values;
    } catch (const Error&) {
        throw Error("cannot standardize " + what + ": zero variance");
    }
}

} // namespace

std::string_view to_string(WeightMode mode)
{
    switch (mode) {
    case WeightMode::none: return "none";
    case WeightMode::empirical: return "empirical";
    case WeightMode::theoretical: return "theoretical";
    }
    return "?";
}

WeightMode parse_weight_mode(std::string_view name)
{
    if (name == "none") return WeightMode::none;
    if (name == "empirical") return WeightMode::empirical;
    if (name == "theoretical") return WeightMode::theoretical;
    throw Error("unknown weight mode '" + std::string(name) + "' (expected none, empirical or theoretical)");
}

NumericDistribution parse_distribution(std::string_view name)
{
    if (name == "uniform") return NumericDistribution::uniform;
    if (name == "normal") return NumericDistribution::normal;
    if (name == "unspecified") return NumericDistribution::unspecified;
    throw Error("unknown distribution '" + std::string(name) + "' (expected uniform or normal)");
}

Scaling DistanceConfig::scaling_for(const std::string& name) const
{
    const auto it = scaling_overrides.find(name);
    return it == scaling_overrides.end() ? numeric_scaling : it->second;
}

Dissimilarity DistanceConfig::dissimilarity_for(const std::string& name) const
{
    const auto it = dissimilarity_overrides.find(name);
    return it == dissimilarity_overrides.end() ? categorical_dissimilarity : it->second;
}

void DistanceConfig::validate(const MixedDataset& data) const
{
    if (fixed_weights && weights != WeightMode::none)
        throw Error("fixed weights cannot be combined with " + std::string(to_string(weights)) + " weights");
    std::set<std::string> numeric_names, categorical_names;
    for (std::size_t j = 0; j < data.cols(); ++j)
        (data.is_numeric(j) ? numeric_names : categorical_names).insert(data.name(j));
    for (const auto& [name, kind] : scaling_overrides)
        if (!numeric_names.count(name))
            throw Error("scaling override for '" + name + "', which is not a numeric column");
    for (const auto& [name, kind] : dissimilarity_overrides)
        if (!categorical_names.count(name))
            throw Error("dissimilarity override for '" + name + "', which is not a categorical column");
    int pc_count = 0;
    for (const auto& name : numeric_names)
        pc_count += scaling_for(name) == Scaling::pc;
    if (pc_count != 0 && pc_count != static_cast<int>(numeric_names.size()))
        throw Error("pc scaling applies to the whole numeric block; it cannot be mixed with other scalings");
}

double mean_pair_distance(const Eigen::Ref<const Eigen::MatrixXd>& d)
{
    const Eigen::Index n = d.rows();
    if (n < 2 || d.cols() != n)
        throw Error("mean_pair_distance needs a square matrix with at least two rows");
    // Neumaier-compensated summation: the result stays accurate to a few ulps
    // for any n, which commensurability checks rely on.
    double sum = 0.0, carry = 0.0;
    for (Eigen::Index l = 0; l < n; ++l) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == l)
                continue;
            const double v = d(i, l);
            const double t = sum + v;
            carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
            sum = t;
        }
    }
    return (sum + carry) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

Eigen::MatrixXd numeric_contrib(const Eigen::Ref<const Eigen::VectorXd>& f)
{
    const Eigen::Index n = f.size();
    Eigen::MatrixXd d(n, n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t col) {
        const auto l = static_cast<Eigen::Index>(col);
        d.col(l) = (f.array() - f(l)).abs();
    });
    return d;
}

Eigen::MatrixXd categorical_contrib(const Eigen::Ref<const Eigen::MatrixXd>& z, const Eigen::Ref<const Eigen::MatrixXd>& delta)
{
    if (z.cols() != delta.rows() || delta.rows() != delta.cols())
        throw Error("categorical_contrib: indicator and dissimilarity shapes do not conform");
    return z * delta * z.transpose();
}

Eigen::MatrixXd pairwise_euclidean(const Eigen::Ref<const Eigen::MatrixXd>& x)
{
    const Eigen::Index n = x.rows();
    const Eigen::MatrixXd xt = x.transpose();
    Eigen::MatrixXd d(n, n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t col) {
        const auto l = static_cast<Eigen::Index>(col);
        for (Eigen::Index i = 0; i < n; ++i)
            d(i, l) = (xt.col(i) - xt.col(l)).norm();
    });
    return d;
}

Dissimilarity effective_dissimilarity(const MixedDataset& data, std::size_t j, const DistanceConfig& config)
{
    const Dissimilarity kind = config.dissimilarity_for(data.name(j));
    if (is_association_based(kind) && data.categorical_indices().size() < 2)
        return Dissimilarity::matching;
    return kind;
}

Eigen::MatrixXd category_dissimilarity(const MixedDataset& data, std::size_t j, const DistanceConfig& config)
{
    const auto& col = data.categorical(j);
    const Dissimilarity kind = effective_dissimilarity(data, j, config);
    const int q = col.q();
    switch (kind) {
    case Dissimilarity::matching: return matching(q);
    case Dissimilarity::eskin: return eskin(q);
    case Dissimilarity::indicator_plain: return indicator_plain(q);
    case Dissimilarity::of: return of_dissim(proportions(col));
    case Dissimilarity::iof: return iof_dissim(proportions(col), static_cast<double>(data.rows()));
    case Dissimilarity::indicator_hl: return indicator_hl(q, hl_factor(category_counts(col), config.hl_phi));
    case Dissimilarity::indicator_sd: return indicator_sd(proportions(col));
    case Dissimilarity::indicator_cds: return indicator_cds(proportions(col));
    case Dissimilarity::kl_assoc: return aggregate_assoc(data, j, AssocKernel::kl, config.kl_epsilon);
    case Dissimilarity::tvd_assoc: return aggregate_assoc(data, j, AssocKernel::tvd, config.kl_epsilon);
    }
    throw Error("unknown dissimilarity kind");
}

std::vector<double> commensurable_weights(const MixedDataset& data, const DistanceConfig& config)
{
    const auto terms = build_terms(data, config);
    std::vector<double> weights;
    weights.reserve(terms.size());
    for (const auto& t : terms) {
        const double raw_mean = config.weights == WeightMode::empirical ? mean_pair_distance(term_matrix(t)) : 0.0;
        weights.push_back(term_weight(t, raw_mean, config));
    }
    return weights;
}

DistanceMatrix mixed_distance(const MixedDataset& data, const DistanceConfig& config, bool keep_contributions)
{
    const auto terms = build_terms(data, config);
    DistanceMatrix out;
    out.additive = true;
    out.values = Eigen::MatrixXd::Zero(data.rows(), data.rows());
    for (const auto& t : terms) {
        Eigen::MatrixXd m = term_matrix(t);
        Contribution c;
        c.name = t.name;
        c.numeric = t.numeric;
        c.kind = t.kind;
        c.raw_mean = mean_pair_distance(m);
        c.weight = term_weight(t, c.raw_mean, config);
        out.values += c.weight * m;
        if (keep_contributions)
            c.matrix = std::move(m);
        out.terms.push_back(std::move(c));
    }
    return out;
}

DistanceMatrix gower_distance(const MixedDataset& data, bool keep_contributions)
{
    DistanceConfig config;
    config.numeric_scaling = Scaling::range;
    config.categorical_dissimilarity = Dissimilarity::matching;
    return mixed_distance(data, config, keep_contributions);
}

DistanceMatrix hl_additive(const MixedDataset& data, double phi, bool keep_contributions)
{
    DistanceConfig config;
    config.numeric_scaling = Scaling::sd;
    config.categorical_dissimilarity = Dissimilarity::indicator_hl;
    config.hl_phi = phi;
    return mixed_distance(data, config, keep_contributions);
}

namespace {

// Squared Euclidean contribution of a categorical variable whose indicator
// columns are multiplied by factor[a]: rows with levels a != b differ by
// factor[a] in column a and factor[b] in column b. Building it through the
// indicator product keeps the result independent of how levels are labelled.
Eigen::MatrixXd squared_indicator_contrib(const CategoricalColumn& col, const Eigen::VectorXd& factor)
{
    const Eigen::VectorXd sq = factor.cwiseAbs2();
    Eigen::MatrixXd delta = sq.replicate(1, sq.size()) + sq.transpose().replicate(sq.size(), 1);
    delta.diagonal().setZero();
    return categorical_contrib(indicator(col), delta);
}

DistanceMatrix root_of_sum(const std::vector<Eigen::MatrixXd>& squared, std::vector<Contribution> terms)
{
    Eigen::MatrixXd total = squared.front();
    for (std::size_t k = 1; k < squared.size(); ++k)
        total += squared[k];
    return {total.cwiseSqrt(), false, std::move(terms)};
}

} // namespace

DistanceMatrix naive_euclidean(const MixedDataset& data)
{
    std::vector<Eigen::MatrixXd> squared;
    std::vector<Contribution> terms;
    for (std::size_t j = 0; j < data.cols(); ++j) {
        if (data.is_numeric(j)) {
            squared.push_back(numeric_contrib(z_scores_or_throw(data.numeric(j).values, "column '" + data.name(j) + "'"))
                                  .cwiseAbs2());
        } else {
            const auto& col = data.categorical(j);
            const Eigen::VectorXd p = proportions(col, ZeroCounts::allow);
            Eigen::VectorXd inv_sd(p.size());
            for (Eigen::Index a = 0; a < p.size(); ++a) {
                const double var = p(a) * (1.0 - p(a));
                if (!(var > 0.0))
                    throw Error("indicator of level '" + col.levels[static_cast<std::size_t>(a)] + "' in '" +
                                col.name + "' has zero variance");
                inv_sd(a) = 1.0 / std::sqrt(var);
            }
            squared.push_back(squared_indicator_contrib(col, inv_sd));
        }
        terms.push_back({data.name(j), data.is_numeric(j), "naive", 1.0, 0.0, {}});
    }
    return root_of_sum(squared, std::move(terms));
}

DistanceMatrix hl_euclidean(const MixedDataset& data, double phi)
{
    std::vector<Eigen::MatrixXd> squared;
    std::vector<Contribution> terms;
    for (std::size_t j = 0; j < data.cols(); ++j) {
        double weight = 1.0;
        if (data.is_numeric(j)) {
            squared.push_back(numeric_contrib(z_scores_or_throw(data.numeric(j).values, "column '" + data.name(j) + "'"))
                                  .cwiseAbs2());
        } else {
            const auto& col = data.categorical(j);
            weight = hl_factor(category_counts(col), phi);
            squared.push_back(squared_indicator_contrib(col, Eigen::VectorXd::Constant(col.q(), weight)));
        }
        terms.push_back({data.name(j), data.is_numeric(j), "hennig_liao", weight, 0.0, {}});
    }
    return root_of_sum(squared, std::move(terms));
}

const std::vector<Variant>& all_variants()
{
    static const std::vector<Variant> variants = {
        Variant::numerical,         Variant::naive,
        Variant::hennig_liao,       Variant::hennig_liao_additive,
        Variant::gower,             Variant::unbiased_independent,
        Variant::unbiased_standardized, Variant::unbiased_dependent,
    };
    return variants;
}

std::string_view to_string(Variant variant)
{
    switch (variant) {
    case Variant::numerical: return "numerical";
    case Variant::naive: return "naive";
    case Variant::hennig_liao: return "hennig_liao";
    case Variant::hennig_liao_additive: return "hennig_liao_additive";
    case Variant::gower: return "gower";
    case Variant::unbiased_independent: return "unbiased_independent";
    case Variant::unbiased_standardized: return "unbiased_standardized";
    case Variant::unbiased_dependent: return "unbiased_dependent";
    }
    return "?";
}

std::string_view short_label(Variant variant)
{
    switch (variant) {
    case Variant::numerical: return "Num";
    case Variant::naive: return "Naive";
    case Variant::hennig_liao: return "HL";
    case Variant::hennig_liao_additive: return "HLa";
    case Variant::gower: return "G";
    case Variant::unbiased_independent: return "Uind";
    case Variant::unbiased_standardized: return "Ustd";
    case Variant::unbiased_dependent: return "Udep";
    }
    return "?";
}

Variant parse_variant(std::string_view name)
{
    for (Variant v : all_variants())
        if (to_string(v) == name || short_label(v) == name)
            return v;
    std::string message = "unknown variant '" + std::string(name) + "'; presets:";
    for (Variant v : all_variants())
        message += " " + std::string(to_string(v));
    throw Error(message);
}

DistanceMethod::DistanceMethod(Variant variant) : variant_(variant) {}

DistanceMethod::DistanceMethod(DistanceConfig config) : config_(std::move(config)) {}

DistanceConfig DistanceMethod::config() const
{
    if (!variant_)
        return config_;
    DistanceConfig c;
    switch (*variant_) {
    case Variant::numerical:
    case Variant::unbiased_independent:
        c.numeric_scaling = Scaling::sd;
        c.categorical_dissimilarity = Dissimilarity::matching;
        c.weights = WeightMode::empirical;
        break;
    case Variant::unbiased_standardized:
        c.numeric_scaling = Scaling::sd;
        c.categorical_dissimilarity = Dissimilarity::indicator_cds;
        c.weights = WeightMode::empirical;
        break;
    case Variant::unbiased_dependent:
        c.numeric_scaling = Scaling::pc;
        c.categorical_dissimilarity = Dissimilarity::tvd_assoc;
        c.weights = WeightMode::empirical;
        break;
    case Variant::gower:
        c.numeric_scaling = Scaling::range;
        c.categorical_dissimilarity = Dissimilarity::matching;
        break;
    case Variant::hennig_liao_additive:
        c.numeric_scaling = Scaling::sd;
        c.categorical_dissimilarity = Dissimilarity::indicator_hl;
        break;
    case Variant::naive:
    case Variant::hennig_liao:
        throw Error("variant '" + std::string(to_string(*variant_)) + "' is not additive and has no DistanceConfig");
    }
    return c;
}

bool DistanceMethod::additive() const
{
    return !variant_ || (*variant_ != Variant::naive && *variant_ != Variant::hennig_liao);
}

bool DistanceMethod::separable() const
{
    if (!additive())
        return false;
    const DistanceConfig c = config();
    if (c.numeric_scaling == Scaling::pc || is_association_based(c.categorical_dissimilarity))
        return false;
    for (const auto& [name, kind] : c.scaling_overrides)
        if (kind == Scaling::pc)
            return false;
    for (const auto& [name, kind] : c.dissimilarity_overrides)
        if (is_association_based(kind))
            return false;
    return true;
}

std::string DistanceMethod::label() const
{
    return variant_ ? std::string(to_string(*variant_)) : std::string("custom");
}

DistanceMatrix DistanceMethod::compute(const MixedDataset& data, bool keep_contributions) const
{
    if (variant_) {
        switch (*variant_) {
        case Variant::naive: return naive_euclidean(data);
        case Variant::hennig_liao: return hl_euclidean(data);
        case Variant::numerical:
            if (!data.categorical_indices().empty())
                throw Error("the numerical variant needs an all-numeric dataset");
            break;
        default: break;
        }
    }
    return mixed_distance(data, config(), keep_contributions);
}

} // namespace mixdist
