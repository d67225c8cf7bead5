#include "mixdist/analysis.hpp"

#include "mixdist/error.hpp"
#include "mixdist/parallel.hpp"
#include "mixdist/scaling.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <limits>

namespace mixdist {

namespace {

// LU factorization with partial pivoting of a shifted symmetric tridiagonal
// matrix T - sigma I. U carries up to two superdiagonals after row swaps.
class ShiftedTridiagonalLu {
public:
    ShiftedTridiagonalLu(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, double sigma, double tiny)
        : n_(diag.size()), u0_(n_), u1_(n_), u2_(n_), mult_(n_), swapped_(static_cast<std::size_t>(n_), false)
    {
        u1_.setZero();
        u2_.setZero();
        mult_.setZero();
        double carried_diag = diag(0) - sigma;
        double carried_super = n_ > 1 ? sub(0) : 0.0;
        for (Eigen::Index i = 0; i + 1 < n_; ++i) {
            const double below = sub(i);
            const double next_diag = diag(i + 1) - sigma;
            const double next_super = i + 2 < n_ ? sub(i + 1) : 0.0;
            if (std::abs(carried_diag) >= std::abs(below)) {
                if (carried_diag == 0.0)
                    carried_diag = tiny;
                const double m = below / carried_diag;
                u0_(i) = carried_diag;
                u1_(i) = carried_super;
                mult_(i) = m;
                carried_diag = next_diag - m * carried_super;
                carried_super = next_super;
            } else {
                const double m = carried_diag / below;
                u0_(i) = below;
                u1_(i) = next_diag;
                u2_(i) = next_super;
                mult_(i) = m;
                swapped_[static_cast<std::size_t>(i)] = true;
                const double d = carried_super - m * next_diag;
                carried_super = -m * next_super;
                carried_diag = d;
            }
        }
        u0_(n_ - 1) = carried_diag == 0.0 ? tiny : carried_diag;
    }

    Eigen::VectorXd solve(Eigen::VectorXd y) const
    {
        for (Eigen::Index i = 0; i + 1 < n_; ++i) {
            if (swapped_[static_cast<std::size_t>(i)])
                std::swap(y(i), y(i + 1));
            y(i + 1) -= mult_(i) * y(i);
        }
        Eigen::VectorXd x(n_);
        for (Eigen::Index i = n_ - 1; i >= 0; --i) {
            double v = y(i);
            if (i + 1 < n_)
                v -= u1_(i) * x(i + 1);
            if (i + 2 < n_)
                v -= u2_(i) * x(i + 2);
            x(i) = v / u0_(i);
        }
        return x;
    }

private:
    Eigen::Index n_;
    Eigen::VectorXd u0_, u1_, u2_, mult_;
    std::vector<bool> swapped_;
};

Eigen::VectorXd start_vector(Eigen::Index n, std::uint64_t salt)
{
    // Fixed pseudo-random start so the iteration is deterministic.
    Eigen::VectorXd x(n);
    std::uint64_t state = 0x2545F4914F6CDD1DULL ^ (salt * 0x9E3779B97F4A7C15ULL);
    for (Eigen::Index i = 0; i < n; ++i) {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        x(i) = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
    }
    return x.normalized();
}

Eigen::VectorXd tridiagonal_times(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, const Eigen::VectorXd& x)
{
    Eigen::VectorXd y = diag.cwiseProduct(x);
    const Eigen::Index n = x.size();
    if (n > 1) {
        y.head(n - 1) += sub.cwiseProduct(x.tail(n - 1));
        y.tail(n - 1) += sub.cwiseProduct(x.head(n - 1));
    }
    return y;
}

Eigen::VectorXd upper_triangle(const Eigen::Ref<const Eigen::MatrixXd>& d)
{
    const Eigen::Index n = d.rows();
    Eigen::VectorXd v(n * (n - 1) / 2);
    Eigen::Index k = 0;
    for (Eigen::Index l = 1; l < n; ++l)
        for (Eigen::Index i = 0; i < l; ++i)
            v(k++) = d(i, l);
    return v;
}

} // namespace

TopEigen top_eigenpairs(const Eigen::Ref<const Eigen::MatrixXd>& s, int k)
{
    const Eigen::Index n = s.rows();
    if (s.cols() != n || n == 0)
        throw Error("top_eigenpairs needs a non-empty square matrix");
    if (k < 1 || k > n)
        throw Error("top_eigenpairs: k must lie in [1, n]");

    TopEigen out;
    if (n == 1) {
        out.spectrum = s.col(0);
        out.values = s.col(0);
        out.vectors = Eigen::MatrixXd::Ones(1, 1);
        return out;
    }

    const Eigen::Tridiagonalization<Eigen::MatrixXd> tri(s);
    const Eigen::VectorXd diag = tri.diagonal();
    const Eigen::VectorXd sub = tri.subDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> values_only;
    values_only.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (values_only.info() != Eigen::Success)
        throw Error("tridiagonal QR iteration did not converge");
    out.spectrum = values_only.eigenvalues().reverse();
    out.values = out.spectrum.head(k);

    double norm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double row = std::abs(diag(i));
        if (i > 0)
            row += std::abs(sub(i - 1));
        if (i + 1 < n)
            row += std::abs(sub(i));
        norm = std::max(norm, row);
    }
    const double eps = std::numeric_limits<double>::epsilon();
    const double tiny = std::max(norm, 1.0) * eps;

    Eigen::MatrixXd tvecs(n, k);
    for (int m = 0; m < k; ++m) {
        const double lambda = out.values(m);
        const ShiftedTridiagonalLu lu(diag, sub, lambda, tiny);
        Eigen::VectorXd x = start_vector(n, static_cast<std::uint64_t>(m) + 1);
        for (int iter = 0; iter < 10; ++iter) {
            x = lu.solve(x);
            for (int pass = 0; pass < 2; ++pass)
                for (int prev = 0; prev < m; ++prev)
                    x -= tvecs.col(prev).dot(x) * tvecs.col(prev);
            const double len = x.norm();
            if (!(len > 0.0) || !std::isfinite(len))
                x = start_vector(n, static_cast<std::uint64_t>(m) + 101 + iter);
            else
                x /= len;
            const double residual = (tridiagonal_times(diag, sub, x) - lambda * x).norm();
            if (iter >= 1 && residual <= 1e-13 * std::max(norm, 1e-300))
                break;
        }
        tvecs.col(m) = x;
    }

    out.vectors = tri.matrixQ() * tvecs;
    for (int m = 0; m < k; ++m)
        out.vectors.col(m).normalize();
    normalize_signs(out.vectors);
    return out;
}

Configuration classical_mds(const Eigen::Ref<const Eigen::MatrixXd>& d, int k)
{
    const Eigen::Index n = d.rows();
    if (d.cols() != n || n < 2)
        throw Error("classical_mds needs a square distance matrix with at least two rows");
    if (k < 1 || k > n)
        throw Error("classical_mds: target dimension must lie in [1, n]");
    const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
    if ((d - d.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw Error("classical_mds needs a symmetric distance matrix");
    if (d.diagonal().cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw Error("classical_mds needs a zero diagonal");

    const Eigen::MatrixXd sq = d.cwiseProduct(d);
    const Eigen::VectorXd row_mean = sq.rowwise().mean();
    const double grand_mean = row_mean.mean();
    Eigen::MatrixXd b = sq.colwise() - row_mean;
    b.rowwise() -= row_mean.transpose();
    b.array() += grand_mean;
    b *= -0.5;
    b = (b + b.transpose()).eval() / 2.0;

    const TopEigen eig = top_eigenpairs(b, k);

    Configuration out;
    out.spectrum = eig.spectrum;
    out.eigenvalues = eig.values;
    out.coords = Eigen::MatrixXd::Zero(n, k);
    // Eigenvalues at rounding level are treated as zero.
    const double cutoff = 1e-12 * std::max(std::abs(eig.spectrum(0)), 1e-300);
    for (int m = 0; m < k; ++m) {
        if (eig.values(m) > cutoff) {
            out.coords.col(m) = eig.vectors.col(m) * std::sqrt(eig.values(m));
            ++out.positive_used;
        }
    }
    out.padded = out.positive_used < k;
    for (Eigen::Index i = 0; i < eig.spectrum.size(); ++i)
        if (eig.spectrum(i) < -cutoff)
            out.negative_mass += -eig.spectrum(i);
    return out;
}

double alienation(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
        throw Error("alienation needs two square matrices of the same size");
    if (a.rows() < 2)
        throw Error("alienation needs at least two rows");
    const Eigen::VectorXd u = upper_triangle(a);
    const Eigen::VectorXd v = upper_triangle(b);
    const double nu = u.norm();
    const double nv = v.norm();
    if (!(nu > 0.0) || !(nv > 0.0))
        throw Error("alienation is undefined for a zero distance matrix");
    const Eigen::VectorXd uh = u / nu;
    const Eigen::VectorXd vh = v / nv;
    // 1 - c^2 = (1 - c)(1 + c) = |u - v|^2 |u + v|^2 / 4 for unit vectors; avoids cancellation near c = 1.
    const double value = 0.5 * (uh - vh).norm() * (uh + vh).norm();
    return std::min(1.0, std::max(0.0, value));
}

std::string_view to_string(ImportanceMetric metric)
{
    return metric == ImportanceMetric::mean_abs_diff ? "mean_abs_diff" : "alienation";
}

ImportanceMetric parse_importance_metric(std::string_view name)
{
    if (name == "mean_abs_diff") return ImportanceMetric::mean_abs_diff;
    if (name == "alienation") return ImportanceMetric::alienation;
    throw Error("unknown importance metric '" + std::string(name) + "' (expected mean_abs_diff or alienation)");
}

namespace {

ImportanceReport make_report(ImportanceMetric metric, const MixedDataset& data, Eigen::VectorXd absolute)
{
    ImportanceReport report;
    report.metric = metric;
    for (std::size_t j = 0; j < data.cols(); ++j)
        report.variables.push_back(data.name(j));
    const double total = absolute.sum();
    if (!(total > 0.0))
        throw Error("every leave-one-out effect is zero; relative importance is undefined");
    report.relative = absolute / total;
    report.absolute = std::move(absolute);
    return report;
}

template <typename Visit>
void for_each_reduced(const MixedDataset& data, const DistanceMethod& method, const DistanceMatrix& full, Visit&& visit)
{
    parallel_for(data.cols(), [&](std::size_t j) {
        if (method.separable()) {
            const Contribution& term = full.terms.at(j);
            visit(j, Eigen::MatrixXd(full.values - term.weight * term.matrix));
        } else {
            visit(j, method.compute(data.without(j)).values);
        }
    });
}

void require_two_variables(const MixedDataset& data)
{
    if (data.cols() < 2)
        throw Error("leave-one-variable-out importance needs at least two variables");
}

} // namespace

ImportanceReport loo_distance_importance(const MixedDataset& data, const DistanceMethod& method)
{
    require_two_variables(data);
    const DistanceMatrix full = method.compute(data, method.separable());
    Eigen::VectorXd absolute(static_cast<Eigen::Index>(data.cols()));
    for_each_reduced(data, method, full, [&](std::size_t j, const Eigen::MatrixXd& reduced) {
        absolute(static_cast<Eigen::Index>(j)) = mean_pair_distance((full.values - reduced).cwiseAbs());
    });
    return make_report(ImportanceMetric::mean_abs_diff, data, std::move(absolute));
}

ImportanceReport loo_mds_importance(const MixedDataset& data, const DistanceMethod& method, int k)
{
    return loo_importance(data, method, k).mds;
}

LooImportance loo_importance(const MixedDataset& data, const DistanceMethod& method, int k)
{
    require_two_variables(data);
    const DistanceMatrix full = method.compute(data, method.separable());
    const Eigen::MatrixXd full_layout = pairwise_euclidean(classical_mds(full.values, k).coords);
    const auto p = static_cast<Eigen::Index>(data.cols());
    Eigen::VectorXd distance_effect(p), mds_effect(p);
    for_each_reduced(data, method, full, [&](std::size_t j, const Eigen::MatrixXd& reduced) {
        const auto idx = static_cast<Eigen::Index>(j);
        distance_effect(idx) = mean_pair_distance((full.values - reduced).cwiseAbs());
        mds_effect(idx) = alienation(full_layout, pairwise_euclidean(classical_mds(reduced, k).coords));
    });
    return {make_report(ImportanceMetric::mean_abs_diff, data, std::move(distance_effect)),
            make_report(ImportanceMetric::alienation, data, std::move(mds_effect))};
}

} // namespace mixdist
