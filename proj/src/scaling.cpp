#include "mixdist/scaling.hpp"

#include "mixdist/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace mixdist {

std::string_view to_string(Scaling kind)
{
    switch (kind) {
    case Scaling::sd: return "sd";
    case Scaling::range: return "range";
    case Scaling::robust_range: return "robust_range";
    case Scaling::pc: return "pc";
    }
    return "?";
}

Scaling parse_scaling(std::string_view name)
{
    if (name == "sd") return Scaling::sd;
    if (name == "range") return Scaling::range;
    if (name == "robust_range" || name == "robust") return Scaling::robust_range;
    if (name == "pc") return Scaling::pc;
    throw Error("unknown scaling '" + std::string(name) + "' (expected sd, range, robust_range or pc)");
}

ScaledColumn sd_scale(const Eigen::Ref<const Eigen::VectorXd>& x)
{
    if (x.size() < 2)
        throw Error("sd scaling needs at least two values");
    const double mean = x.mean();
    const double sd = std::sqrt((x.array() - mean).square().mean());
    if (!(sd > 1e-14 * x.cwiseAbs().maxCoeff()))
        throw Error("sd scaling of a zero-variance column");
    return {(x.array() - mean) / sd, mean, sd};
}

ScaledColumn range_scale(const Eigen::Ref<const Eigen::VectorXd>& x)
{
    if (x.size() < 2)
        throw Error("range scaling needs at least two values");
    const double lo = x.minCoeff();
    const double hi = x.maxCoeff();
    if (!(hi > lo))
        throw Error("range scaling of a zero-range column");
    return {(x.array() - lo) / (hi - lo), lo, hi - lo};
}

double quantile(const Eigen::Ref<const Eigen::VectorXd>& x, double prob)
{
    if (x.size() == 0)
        throw Error("quantile of an empty column");
    if (prob < 0.0 || prob > 1.0)
        throw Error("quantile probability outside [0, 1]");
    std::vector<double> sorted(x.data(), x.data() + x.size());
    std::sort(sorted.begin(), sorted.end());
    const double h = static_cast<double>(sorted.size() - 1) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size())
        return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

ScaledColumn robust_range_scale(const Eigen::Ref<const Eigen::VectorXd>& x)
{
    if (x.size() < 2)
        throw Error("robust range scaling needs at least two values");
    const double median = quantile(x, 0.5);
    const double iqr = quantile(x, 0.75) - quantile(x, 0.25);
    if (!(iqr > 0.0))
        throw Error("robust range scaling of a column with zero interquartile range");
    return {(x.array() - median) / iqr, median, iqr};
}

Eigen::MatrixXd covariance(const Eigen::Ref<const Eigen::MatrixXd>& x)
{
    if (x.rows() < 2)
        throw Error("covariance needs at least two rows");
    const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    Eigen::MatrixXd s = (centered.transpose() * centered) / static_cast<double>(x.rows());
    return (s + s.transpose()) / 2.0;
}

void normalize_signs(Eigen::Ref<Eigen::MatrixXd> vectors)
{
    for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
        Eigen::Index arg = 0;
        vectors.col(k).cwiseAbs().maxCoeff(&arg);
        if (vectors(arg, k) < 0.0)
            vectors.col(k) = -vectors.col(k);
    }
}

SymmetricEigen sym_eig(const Eigen::Ref<const Eigen::MatrixXd>& s, int max_sweeps)
{
    const Eigen::Index p = s.rows();
    if (s.cols() != p)
        throw Error("sym_eig needs a square matrix");
    const double magnitude = std::max(1.0, s.cwiseAbs().maxCoeff());
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * magnitude)
        throw Error("sym_eig needs a symmetric matrix");

    Eigen::MatrixXd a = (s + s.transpose()) / 2.0;
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(p, p);

    auto off_mass = [&] {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < p; ++j)
            for (Eigen::Index i = 0; i < p; ++i)
                if (i != j)
                    sum += a(i, j) * a(i, j);
        return std::sqrt(sum);
    };

    int sweeps = 0;
    while (true) {
        const double diag_mass = a.diagonal().norm();
        const double off = off_mass();
        if (off == 0.0 || off < 1e-12 * diag_mass)
            break;
        if (sweeps == max_sweeps)
            throw Error("sym_eig did not converge within " + std::to_string(max_sweeps) + " sweeps");
        ++sweeps;
        for (Eigen::Index i = 0; i + 1 < p; ++i) {
            for (Eigen::Index j = i + 1; j < p; ++j) {
                const double aij = a(i, j);
                if (aij == 0.0)
                    continue;
                // Rotation annihilating a(i, j); t is the smaller root of t^2 + 2 theta t - 1 = 0.
                const double theta = (a(j, j) - a(i, i)) / (2.0 * aij);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (Eigen::Index k = 0; k < p; ++k) {
                    const double aki = a(k, i);
                    const double akj = a(k, j);
                    a(k, i) = c * aki - sn * akj;
                    a(k, j) = sn * aki + c * akj;
                }
                for (Eigen::Index k = 0; k < p; ++k) {
                    const double aik = a(i, k);
                    const double ajk = a(j, k);
                    a(i, k) = c * aik - sn * ajk;
                    a(j, k) = sn * aik + c * ajk;
                }
                for (Eigen::Index k = 0; k < p; ++k) {
                    const double vki = v(k, i);
                    const double vkj = v(k, j);
                    v(k, i) = c * vki - sn * vkj;
                    v(k, j) = sn * vki + c * vkj;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
    for (Eigen::Index k = 0; k < p; ++k)
        order[static_cast<std::size_t>(k)] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index l, Eigen::Index r) { return a(l, l) > a(r, r); });

    SymmetricEigen out;
    out.values.resize(p);
    out.vectors.resize(p, p);
    out.sweeps = sweeps;
    for (Eigen::Index k = 0; k < p; ++k) {
        const auto src = order[static_cast<std::size_t>(k)];
        out.values(k) = a(src, src);
        out.vectors.col(k) = v.col(src);
    }
    normalize_signs(out.vectors);
    return out;
}

PcScaled pc_scale(const Eigen::Ref<const Eigen::MatrixXd>& x)
{
    if (x.cols() == 0)
        throw Error("pc scaling of an empty block");
    const Eigen::MatrixXd s = covariance(x);
    auto eig = sym_eig(s);
    const double largest = eig.values(0);
    if (!(largest > 0.0) || eig.values(eig.values.size() - 1) <= 1e-10 * largest)
        throw Error("pc scaling needs a full-rank covariance matrix");

    PcScaled out;
    out.mean = x.colwise().mean().transpose();
    out.eigenvalues = eig.values;
    out.eigenvectors = eig.vectors;
    out.rotation = eig.vectors * eig.values.cwiseSqrt().cwiseInverse().asDiagonal();
    out.scores = (x.rowwise() - out.mean.transpose()) * out.rotation;
    return out;
}

ScaledNumericBlock scale_block(const Eigen::Ref<const Eigen::MatrixXd>& x, Scaling kind)
{
    ScaledNumericBlock out;
    out.kind = kind;
    if (kind == Scaling::pc) {
        auto pc = pc_scale(x);
        out.matrix = std::move(pc.scores);
        out.center = std::move(pc.mean);
        out.rotation = std::move(pc.rotation);
        return out;
    }
    out.matrix.resize(x.rows(), x.cols());
    out.center.resize(x.cols());
    out.scale.resize(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        ScaledColumn col = kind == Scaling::sd      ? sd_scale(x.col(j))
                           : kind == Scaling::range ? range_scale(x.col(j))
                                                    : robust_range_scale(x.col(j));
        out.matrix.col(j) = col.values;
        out.center(j) = col.center;
        out.scale(j) = col.scale;
    }
    return out;
}

} // namespace mixdist
