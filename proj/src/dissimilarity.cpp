#include "mixdist/dissimilarity.hpp"

#include "mixdist/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace mixdist {

namespace {

void require_q(int q)
{
    if (q < 2)
        throw Error("a categorical variable needs at least two categories");
}

void require_open_unit(const Eigen::Ref<const Eigen::VectorXd>& p, const char* what)
{
    require_q(static_cast<int>(p.size()));
    for (Eigen::Index a = 0; a < p.size(); ++a)
        if (!(p(a) > 0.0 && p(a) < 1.0))
            throw Error(std::string(what) + " needs every proportion strictly inside (0, 1)");
}

// Off-diagonal outer product u_a u_b with a zero diagonal.
Eigen::MatrixXd hollow_outer(const Eigen::VectorXd& u)
{
    Eigen::MatrixXd delta = u * u.transpose();
    delta.diagonal().setZero();
    return delta;
}

// Sums in ascending order so the result does not depend on how the columns
// of R are labelled.
double ordered_sum(std::vector<double>& terms)
{
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms)
        sum += t;
    return sum;
}

} // namespace

std::string_view to_string(Dissimilarity kind)
{
    switch (kind) {
    case Dissimilarity::matching: return "matching";
    case Dissimilarity::eskin: return "eskin";
    case Dissimilarity::of: return "of";
    case Dissimilarity::iof: return "iof";
    case Dissimilarity::indicator_plain: return "indicator_plain";
    case Dissimilarity::indicator_hl: return "indicator_hl";
    case Dissimilarity::indicator_sd: return "indicator_sd";
    case Dissimilarity::indicator_cds: return "indicator_cds";
    case Dissimilarity::kl_assoc: return "kl_assoc";
    case Dissimilarity::tvd_assoc: return "tvd_assoc";
    }
    return "?";
}

Dissimilarity parse_dissimilarity(std::string_view name)
{
    for (auto kind : {Dissimilarity::matching, Dissimilarity::eskin, Dissimilarity::of, Dissimilarity::iof,
                      Dissimilarity::indicator_plain, Dissimilarity::indicator_hl, Dissimilarity::indicator_sd,
                      Dissimilarity::indicator_cds, Dissimilarity::kl_assoc, Dissimilarity::tvd_assoc})
        if (to_string(kind) == name)
            return kind;
    throw Error("unknown category dissimilarity '" + std::string(name) + "'");
}

bool is_association_based(Dissimilarity kind)
{
    return kind == Dissimilarity::kl_assoc || kind == Dissimilarity::tvd_assoc;
}

bool is_category_dissimilarity(const Eigen::Ref<const Eigen::MatrixXd>& delta, double tol)
{
    if (delta.rows() != delta.cols())
        return false;
    if (!delta.allFinite())
        return false;
    if ((delta - delta.transpose()).cwiseAbs().maxCoeff() > tol)
        return false;
    if (delta.diagonal().cwiseAbs().maxCoeff() > tol)
        return false;
    return delta.minCoeff() >= -tol;
}

Eigen::MatrixXd matching(int q)
{
    require_q(q);
    Eigen::MatrixXd delta = Eigen::MatrixXd::Ones(q, q);
    delta.diagonal().setZero();
    return delta;
}

Eigen::MatrixXd eskin(int q)
{
    return (2.0 / (static_cast<double>(q) * q)) * matching(q);
}

Eigen::MatrixXd of_dissim(const Eigen::Ref<const Eigen::VectorXd>& p)
{
    require_q(static_cast<int>(p.size()));
    if (!(p.minCoeff() > 0.0))
        throw Error("occurrence frequency dissimilarity needs every proportion > 0");
    return hollow_outer(p.array().log().matrix());
}

Eigen::MatrixXd iof_dissim(const Eigen::Ref<const Eigen::VectorXd>& p, double n)
{
    require_q(static_cast<int>(p.size()));
    const Eigen::VectorXd np = n * p;
    if (!(np.minCoeff() >= 1.0))
        throw Error("inverse occurrence frequency dissimilarity needs n * p_a >= 1 for every category");
    return hollow_outer(np.array().log().matrix());
}

Eigen::MatrixXd indicator_plain(int q)
{
    return 2.0 * matching(q);
}

double hl_factor(const Eigen::Ref<const Eigen::VectorXd>& counts, double phi)
{
    if (!(phi > 0.0))
        throw Error("Hennig-Liao phi must be positive");
    if (counts.size() == 0 || counts.minCoeff() < 0.0)
        throw Error("Hennig-Liao factor needs nonnegative category counts");
    const double n = counts.sum();
    const double total = n * (n + 1.0) / 2.0;
    const double within = (counts.array() * (counts.array() + 1.0)).sum() / 2.0;
    const double between = total - within;
    if (!(between > 0.0))
        throw Error("Hennig-Liao factor needs at least two nonempty categories");
    const double ratio = total / between;
    return std::sqrt(phi * ratio);
}

Eigen::MatrixXd indicator_hl(int q, double eta)
{
    if (!(eta > 0.0))
        throw Error("Hennig-Liao eta must be positive");
    return 2.0 * eta * matching(q);
}

Eigen::MatrixXd indicator_sd(const Eigen::Ref<const Eigen::VectorXd>& p)
{
    require_open_unit(p, "indicator sd scaling");
    const double q = static_cast<double>(p.size());
    const Eigen::ArrayXd inv_root = (p.array() * (1.0 - p.array())).rsqrt();
    Eigen::MatrixXd delta = std::sqrt(1.0 / q) * (inv_root.matrix().replicate(1, p.size()) +
                                                  inv_root.matrix().transpose().replicate(p.size(), 1));
    delta.diagonal().setZero();
    return delta;
}

Eigen::MatrixXd indicator_cds(const Eigen::Ref<const Eigen::VectorXd>& p)
{
    require_open_unit(p, "indicator category dissimilarity scaling");
    const double q = static_cast<double>(p.size());
    const Eigen::VectorXd inv_root = (p.array() * (1.0 - p.array())).rsqrt().matrix();
    return hollow_outer(inv_root) / q;
}

Eigen::MatrixXd conditional_rows(const Eigen::Ref<const Eigen::MatrixXd>& zj, const Eigen::Ref<const Eigen::MatrixXd>& zk)
{
    if (zj.rows() != zk.rows())
        throw Error("conditional_rows needs indicator matrices with the same number of rows");
    const Eigen::MatrixXd joint = zj.transpose() * zk;
    const Eigen::VectorXd counts = zj.colwise().sum().transpose();
    if (!(counts.minCoeff() > 0.0))
        throw Error("conditional_rows needs every category of the conditioning variable to be observed");
    return counts.cwiseInverse().asDiagonal() * joint;
}

Eigen::MatrixXd kl_dissim(const Eigen::Ref<const Eigen::MatrixXd>& r, double epsilon)
{
    if (!(epsilon > 0.0))
        throw Error("Kullback-Leibler epsilon must be positive");
    const Eigen::Index q = r.rows();
    auto term = [epsilon](double num, double den) {
        if (num == 0.0)
            return 0.0;
        return num * std::log2(num / (den == 0.0 ? epsilon : den));
    };
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(q, q);
    std::vector<double> terms(static_cast<std::size_t>(r.cols()));
    for (Eigen::Index a = 0; a < q; ++a) {
        for (Eigen::Index b = a + 1; b < q; ++b) {
            for (Eigen::Index l = 0; l < r.cols(); ++l)
                terms[static_cast<std::size_t>(l)] = term(r(a, l), r(b, l)) + term(r(b, l), r(a, l));
            delta(a, b) = delta(b, a) = ordered_sum(terms);
        }
    }
    return delta;
}

Eigen::MatrixXd tvd_dissim(const Eigen::Ref<const Eigen::MatrixXd>& r)
{
    const Eigen::Index q = r.rows();
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(q, q);
    std::vector<double> terms(static_cast<std::size_t>(r.cols()));
    for (Eigen::Index a = 0; a < q; ++a) {
        for (Eigen::Index b = a + 1; b < q; ++b) {
            for (Eigen::Index l = 0; l < r.cols(); ++l)
                terms[static_cast<std::size_t>(l)] = std::abs(r(a, l) - r(b, l));
            delta(a, b) = delta(b, a) = 0.5 * ordered_sum(terms);
        }
    }
    return delta;
}

Eigen::MatrixXd aggregate_assoc(const MixedDataset& data, std::size_t j, AssocKernel kernel, double epsilon)
{
    const auto& target = data.categorical(j);
    const auto others = data.categorical_indices();
    if (others.size() < 2)
        throw Error("association-based dissimilarity for '" + target.name + "' needs at least two categorical variables");
    const Eigen::MatrixXd zj = indicator(target);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(target.q(), target.q());
    int pairs = 0;
    for (std::size_t k : others) {
        if (k == j)
            continue;
        const Eigen::MatrixXd r = conditional_rows(zj, indicator(data.categorical(k)));
        sum += kernel == AssocKernel::kl ? kl_dissim(r, epsilon) : tvd_dissim(r);
        ++pairs;
    }
    return sum / static_cast<double>(pairs);
}

} // namespace mixdist
