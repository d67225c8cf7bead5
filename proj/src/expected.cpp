#include "mixdist/expected.hpp"

#include "mixdist/error.hpp"
#include "mixdist/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace mixdist {

namespace {

// Mean of |x_i - x_l| over ordered pairs i != l, via the sorted-order identity
// sum_{i<l} |x_i - x_l| = sum_k (2k - n + 1) x_(k).
double mean_abs_difference(const Eigen::VectorXd& x)
{
    std::vector<double> sorted(x.data(), x.data() + x.size());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k)
        sum += (2.0 * static_cast<double>(k) - n + 1.0) * sorted[k];
    return 2.0 * sum / (n * (n - 1.0));
}

double chi_square_half(Rng& rng)
{
    std::gamma_distribution<double> gamma(0.25, 2.0);
    return gamma(rng);
}

} // namespace

double uniform_mean(Scaling kind)
{
    switch (kind) {
    case Scaling::sd: return std::sqrt(12.0) / 3.0;
    case Scaling::range: return 1.0 / 3.0;
    case Scaling::robust_range: return 2.0 / 3.0;
    case Scaling::pc: break;
    }
    throw Error("no closed-form uniform mean distance for pc scaling");
}

double standard_normal_quantile(double prob)
{
    if (!(prob > 0.0 && prob < 1.0))
        throw Error("normal quantile probability must lie in (0, 1)");
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double low = 0.02425;

    double x = 0.0;
    if (prob < low || prob > 1.0 - low) {
        const double tail = prob < low ? prob : 1.0 - prob;
        const double q = std::sqrt(-2.0 * std::log(tail));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
        if (prob > 1.0 - low)
            x = -x;
    } else {
        const double q = prob - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    // Halley step against the exact CDF.
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - prob;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

std::optional<double> normal_mean(Scaling kind)
{
    switch (kind) {
    case Scaling::sd: return 2.0 / std::sqrt(std::numbers::pi);
    case Scaling::robust_range: return std::sqrt(1.0 / std::numbers::pi) / standard_normal_quantile(0.75);
    case Scaling::pc: return 2.0 / std::sqrt(std::numbers::pi); // standardized principal coordinates are N(0, 1)
    case Scaling::range: break;
    }
    return std::nullopt;
}

double cat_expected(const Eigen::Ref<const Eigen::VectorXd>& p, const Eigen::Ref<const Eigen::MatrixXd>& delta)
{
    if (delta.rows() != p.size() || delta.cols() != p.size())
        throw Error("cat_expected: proportions and dissimilarity sizes differ");
    return p.dot(delta * p);
}

EtaLimits eta_limits(int q, double phi)
{
    if (q < 2)
        throw Error("eta limits need q >= 2");
    const double qd = q;
    return {std::sqrt(phi * (qd / (qd - 1.0))), std::sqrt(phi * ((qd + 1.0) / (qd - 1.0)))};
}

Eigen::MatrixXd dissimilarity_for_profile(Dissimilarity kind, const Eigen::Ref<const Eigen::VectorXd>& p, double n,
                                          double phi, double kl_epsilon)
{
    const int q = static_cast<int>(p.size());
    switch (kind) {
    case Dissimilarity::matching: return matching(q);
    case Dissimilarity::eskin: return eskin(q);
    case Dissimilarity::of: return of_dissim(p);
    case Dissimilarity::iof: return iof_dissim(p, n);
    case Dissimilarity::indicator_plain: return indicator_plain(q);
    case Dissimilarity::indicator_hl: return indicator_hl(q, hl_factor(n * p, phi));
    case Dissimilarity::indicator_sd: return indicator_sd(p);
    case Dissimilarity::indicator_cds: return indicator_cds(p);
    case Dissimilarity::tvd_assoc: return tvd_dissim(Eigen::MatrixXd::Identity(q, q));
    case Dissimilarity::kl_assoc: return kl_dissim(Eigen::MatrixXd::Identity(q, q), kl_epsilon);
    }
    throw Error("unknown dissimilarity kind");
}

std::vector<UniformProfileRow> uniform_profile_table(int q, double n, double phi, double kl_epsilon)
{
    if (q < 2)
        throw Error("uniform_profile_table needs q >= 2");
    const Eigen::VectorXd p = Eigen::VectorXd::Constant(q, 1.0 / q);
    const std::vector<std::pair<Dissimilarity, const char*>> rows = {
        {Dissimilarity::matching, "Matching"},
        {Dissimilarity::eskin, "Eskin"},
        {Dissimilarity::of, "Occurrence frequency"},
        {Dissimilarity::iof, "Inverse occurrence frequency"},
        {Dissimilarity::indicator_plain, "Indicator (no scaling)"},
        {Dissimilarity::indicator_hl, "Indicator (Hennig-Liao scaling)"},
        {Dissimilarity::indicator_sd, "Indicator (st. dev. scaling)"},
        {Dissimilarity::indicator_cds, "Indicator (cat. dissim. scaling)"},
        {Dissimilarity::tvd_assoc, "Total variance"},
        {Dissimilarity::kl_assoc, "Kullback-Leibler"},
    };
    std::vector<UniformProfileRow> out;
    for (const auto& [kind, label] : rows) {
        const Eigen::MatrixXd delta = kind == Dissimilarity::indicator_hl
                                          ? indicator_hl(q, eta_limits(q, phi).large_n)
                                          : dissimilarity_for_profile(kind, p, n, phi, kl_epsilon);
        out.push_back({kind, label, delta(0, 1), cat_expected(p, delta)});
    }
    return out;
}

double printed_kl_kappa()
{
    return 5.0 * std::log2(10.0);
}

const std::vector<double>& skew_grid()
{
    static const std::vector<double> grid = {0.05, 0.1, 0.2, 0.33, 0.5, 0.66, 0.8, 0.9, 0.95};
    return grid;
}

std::vector<SkewPoint> skew_profile(int q, Dissimilarity kind, std::span<const double> p1_grid, double n, double phi,
                                    double kl_epsilon)
{
    if (q < 2)
        throw Error("skew profile needs q >= 2");
    std::vector<SkewPoint> out;
    out.reserve(p1_grid.size());
    for (double p1 : p1_grid) {
        if (!(p1 > 0.0 && p1 < 1.0))
            throw Error("skew profile p1 must lie in (0, 1)");
        Eigen::VectorXd p = Eigen::VectorXd::Constant(q, (1.0 - p1) / (q - 1));
        p(0) = p1;
        out.push_back({p1, cat_expected(p, dissimilarity_for_profile(kind, p, n, phi, kl_epsilon))});
    }
    return out;
}

std::string_view to_string(Distribution dist)
{
    switch (dist) {
    case Distribution::normal: return "Normal";
    case Distribution::uniform: return "Uniform";
    case Distribution::skewed: return "Skewed";
    case Distribution::bimodal: return "Bimodal";
    }
    return "?";
}

Eigen::VectorXd sample_distribution(Distribution dist, Eigen::Index n, Rng& rng)
{
    Eigen::VectorXd x(n);
    switch (dist) {
    case Distribution::normal: {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Eigen::Index i = 0; i < n; ++i)
            x(i) = normal(rng);
        break;
    }
    case Distribution::uniform: {
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        for (Eigen::Index i = 0; i < n; ++i)
            x(i) = uniform(rng);
        break;
    }
    case Distribution::skewed:
        for (Eigen::Index i = 0; i < n; ++i)
            x(i) = chi_square_half(rng);
        break;
    case Distribution::bimodal: {
        const Eigen::Index half = n / 2;
        for (Eigen::Index i = 0; i < half; ++i)
            x(i) = std::min(chi_square_half(rng), 10.0);
        for (Eigen::Index i = half; i < n; ++i)
            x(i) = std::max(10.0 - chi_square_half(rng), 0.0);
        break;
    }
    }
    return x;
}

ScalingMeanCell scaling_mean_cell(Distribution dist, Eigen::Index n, int replications, std::uint64_t seed)
{
    if (n < 2 || replications < 1)
        throw Error("scaling_mean_table needs n >= 2 and at least one replication");
    std::vector<Eigen::Vector3d> per_rep(static_cast<std::size_t>(replications));
    const auto stream = static_cast<std::uint64_t>(dist) * 1000003ULL + static_cast<std::uint64_t>(n);
    parallel_for(per_rep.size(), [&](std::size_t r) {
        Rng rng(derive_seed(seed, stream, r));
        const Eigen::VectorXd x = sample_distribution(dist, n, rng);
        per_rep[r] = {mean_abs_difference(sd_scale(x).values), mean_abs_difference(range_scale(x).values),
                      mean_abs_difference(robust_range_scale(x).values)};
    });
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    for (const auto& v : per_rep)
        sum += v;
    sum /= static_cast<double>(replications);
    return {dist, n, replications, sum(0), sum(1), sum(2)};
}

std::vector<ScalingMeanCell> scaling_mean_table(std::span<const Eigen::Index> sizes, int replications, std::uint64_t seed)
{
    std::vector<ScalingMeanCell> out;
    for (auto dist : {Distribution::normal, Distribution::uniform, Distribution::skewed, Distribution::bimodal})
        for (auto n : sizes)
            out.push_back(scaling_mean_cell(dist, n, replications, seed));
    return out;
}

} // namespace mixdist
