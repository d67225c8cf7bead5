#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace mixdist;

namespace {

Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index n)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = normal(rng);
    return 0.5 * (a + a.transpose());
}

Eigen::MatrixXd correlated_block(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd z(n, p), mix(p, p);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < p; ++j)
            z(i, j) = normal(rng);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j)
            mix(i, j) = normal(rng);
    return z * mix + Eigen::RowVectorXd::LinSpaced(p, 1.0, 5.0).replicate(n, 1);
}

} // namespace

TEST_CASE("sd scaling uses the population standard deviation")
{
    const Eigen::Vector4d x(1, 2, 3, 4);
    const auto s = sd_scale(x);
    CHECK(s.center == 2.5);
    CHECK(s.scale == doctest::Approx(std::sqrt(1.25)));
    CHECK(s.values.mean() == doctest::Approx(0.0));
    CHECK(s.values.squaredNorm() / 4.0 == doctest::Approx(1.0));
    CHECK_THROWS_AS(sd_scale(Eigen::Vector3d::Constant(7.0)), Error);
}

TEST_CASE("range scaling maps onto the unit interval")
{
    const auto s = range_scale(Eigen::Vector3d(2, 4, 6));
    CHECK(s.values == Eigen::Vector3d(0.0, 0.5, 1.0));
    CHECK(s.center == 2.0);
    CHECK(s.scale == 4.0);
    CHECK_THROWS_AS(range_scale(Eigen::Vector2d(3, 3)), Error);
}

TEST_CASE("quantiles interpolate at position 1 + (n - 1) p")
{
    const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(10, 10.0, 1.0);
    CHECK(quantile(x, 0.0) == 1.0);
    CHECK(quantile(x, 1.0) == 10.0);
    CHECK(quantile(x, 0.25) == doctest::Approx(3.25));
    CHECK(quantile(x, 0.5) == doctest::Approx(5.5));
    CHECK(quantile(Eigen::Vector3d(5, 1, 3), 0.5) == 3.0);
    CHECK_THROWS_AS(quantile(x, 1.5), Error);
}

TEST_CASE("robust range scaling centres on the median and divides by the IQR")
{
    const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(9, 1.0, 9.0);
    const auto s = robust_range_scale(x);
    CHECK(s.center == 5.0);
    CHECK(s.scale == doctest::Approx(4.0));
    CHECK(s.values(0) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(robust_range_scale((Eigen::VectorXd(5) << 1, 2, 2, 2, 3).finished()), Error);
}

TEST_CASE("Jacobi eigensolver agrees with a reference solver")
{
    std::mt19937_64 rng(11);
    for (Eigen::Index n : {1, 2, 3, 7, 20}) {
        const Eigen::MatrixXd s = random_symmetric(rng, n);
        const auto mine = sym_eig(s);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(s);
        const Eigen::VectorXd ref_values = ref.eigenvalues().reverse();
        Eigen::MatrixXd ref_vectors = ref.eigenvectors().rowwise().reverse();
        normalize_signs(ref_vectors);
        CHECK(testing::max_abs_diff(mine.values, ref_values) < 1e-10);
        CHECK(testing::max_abs_diff(mine.vectors, ref_vectors) < 1e-8);
        const Eigen::MatrixXd rebuilt = mine.vectors * mine.values.asDiagonal() * mine.vectors.transpose();
        CHECK(testing::max_abs_diff(rebuilt, s) < 1e-10);
        CHECK(testing::max_abs_diff(mine.vectors.transpose() * mine.vectors, Eigen::MatrixXd::Identity(n, n)) < 1e-12);
    }
}

TEST_CASE("Jacobi eigensolver on a hand example and failure modes")
{
    const Eigen::Matrix2d s{{2.0, 1.0}, {1.0, 2.0}};
    const auto e = sym_eig(s);
    CHECK(e.values(0) == doctest::Approx(3.0));
    CHECK(e.values(1) == doctest::Approx(1.0));
    CHECK(e.vectors(0, 0) == doctest::Approx(std::sqrt(0.5)));
    CHECK(e.vectors(1, 0) == doctest::Approx(std::sqrt(0.5)));
    CHECK_THROWS_AS(sym_eig(Eigen::Matrix2d{{1.0, 2.0}, {0.0, 1.0}}), Error);
    std::mt19937_64 rng(3);
    CHECK_THROWS_AS(sym_eig(random_symmetric(rng, 30), 1), Error);
}

TEST_CASE("sign convention makes the largest-magnitude loading positive")
{
    Eigen::MatrixXd v{{0.2, 0.6}, {-0.9, -0.8}};
    normalize_signs(v);
    CHECK(v(1, 0) == 0.9);
    CHECK(v(1, 1) == 0.8);
    CHECK(v(0, 1) == -0.6);
}

TEST_CASE("principal-coordinate scaling whitens the block")
{
    std::mt19937_64 rng(5);
    const Eigen::MatrixXd x = correlated_block(rng, 200, 4);
    const auto pc = pc_scale(x);
    CHECK(testing::max_abs_diff(covariance(pc.scores), Eigen::MatrixXd::Identity(4, 4)) < 1e-10);
    const Eigen::MatrixXd centred = x.rowwise() - pc.mean.transpose();
    CHECK(testing::max_abs_diff(centred * pc.rotation, pc.scores) < 1e-12);
    for (Eigen::Index k = 0; k < 4; ++k) {
        Eigen::Index arg = 0;
        pc.eigenvectors.col(k).cwiseAbs().maxCoeff(&arg);
        CHECK(pc.eigenvectors(arg, k) > 0.0);
    }
}

TEST_CASE("principal-coordinate scaling invariances")
{
    std::mt19937_64 rng(8);
    const Eigen::MatrixXd x = correlated_block(rng, 120, 3);
    const auto base = pc_scale(x);
    const auto scaled = pc_scale(1000.0 * x);
    CHECK(testing::max_abs_diff(base.scores, scaled.scores) < 1e-10);

    const Eigen::Vector3d units(100.0, 0.1, 3.0);
    const auto per_column = pc_scale(x * units.asDiagonal());
    CHECK(testing::max_abs_diff(pairwise_euclidean(base.scores), pairwise_euclidean(per_column.scores)) < 1e-9);
}

TEST_CASE("principal-coordinate scaling rejects rank-deficient blocks")
{
    std::mt19937_64 rng(2);
    Eigen::MatrixXd x = correlated_block(rng, 50, 3);
    x.col(2) = 2.0 * x.col(0) - x.col(1);
    CHECK_THROWS_AS(pc_scale(x), Error);
}

TEST_CASE("block scaling dispatches on the kind")
{
    std::mt19937_64 rng(4);
    const Eigen::MatrixXd x = correlated_block(rng, 40, 2);
    const auto sd = scale_block(x, Scaling::sd);
    CHECK(testing::max_abs_diff(sd.matrix.col(1), sd_scale(x.col(1)).values) == 0.0);
    const auto range = scale_block(x, Scaling::range);
    CHECK(range.matrix.maxCoeff() == doctest::Approx(1.0));
    const auto pc = scale_block(x, Scaling::pc);
    CHECK(pc.rotation.rows() == 2);
    CHECK(parse_scaling("robust_range") == Scaling::robust_range);
    CHECK(to_string(Scaling::pc) == "pc");
    CHECK_THROWS_AS(parse_scaling("zscore"), Error);
}
