#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace mixdist;

namespace {

Eigen::MatrixXd random_points(std::mt19937_64& rng, Eigen::Index n, Eigen::Index dims)
{
    std::uniform_real_distribution<double> uniform(-2.0, 2.0);
    Eigen::MatrixXd x(n, dims);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < dims; ++k)
            x(i, k) = uniform(rng);
    return x;
}

} // namespace

TEST_CASE("leading eigenpairs match a reference solver")
{
    std::mt19937_64 rng(12);
    for (Eigen::Index n : {3, 10, 60}) {
        const Eigen::MatrixXd a = random_points(rng, n, n);
        const Eigen::MatrixXd s = a + a.transpose();
        const int k = 3;
        const TopEigen top = top_eigenpairs(s, k);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(s);
        const Eigen::VectorXd values = ref.eigenvalues().reverse();
        CHECK(testing::max_abs_diff(top.spectrum, values) < 1e-10);
        CHECK(testing::max_abs_diff(top.values, values.head(k)) < 1e-10);
        Eigen::MatrixXd vectors = ref.eigenvectors().rowwise().reverse().leftCols(k);
        normalize_signs(vectors);
        CHECK(testing::max_abs_diff(top.vectors, vectors) < 1e-8);
        CHECK(testing::max_abs_diff(s * top.vectors, top.vectors * top.values.asDiagonal()) < 1e-9);
    }
    CHECK_THROWS_AS(top_eigenpairs(Eigen::Matrix3d::Identity(), 4), Error);
}

TEST_CASE("classical MDS recovers a unit square")
{
    const Eigen::MatrixXd square{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    const Eigen::MatrixXd d = pairwise_euclidean(square);
    const Configuration layout = classical_mds(d, 2);
    CHECK(testing::max_abs_diff(pairwise_euclidean(layout.coords), d) < 1e-12);
    CHECK(layout.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(layout.eigenvalues(1) == doctest::Approx(1.0));
    CHECK(layout.coords.colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    CHECK(layout.negative_mass < 1e-12);
    CHECK_FALSE(layout.padded);
}

TEST_CASE("classical MDS recovers planted configurations")
{
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 3; ++rep) {
        const Eigen::MatrixXd x = random_points(rng, 150, 3);
        const Eigen::MatrixXd d = pairwise_euclidean(x);
        const Configuration layout = classical_mds(d, 3);
        const Eigen::MatrixXd rebuilt = pairwise_euclidean(layout.coords);
        CHECK((rebuilt - d).norm() / d.norm() < 1e-8);
        CHECK(alienation(rebuilt, d) < 1e-6);
    }
}

TEST_CASE("classical MDS reports negative eigenvalues and pads missing dimensions")
{
    std::mt19937_64 rng(4);
    const Eigen::MatrixXd x = random_points(rng, 30, 3);
    Eigen::MatrixXd manhattan(30, 30);
    for (int i = 0; i < 30; ++i)
        for (int l = 0; l < 30; ++l)
            manhattan(i, l) = (x.row(i) - x.row(l)).cwiseAbs().sum();
    const Configuration layout = classical_mds(manhattan, 2);
    CHECK(layout.negative_mass > 0.0);
    CHECK(layout.spectrum.minCoeff() < 0.0);

    const Eigen::MatrixXd line{{0.0}, {1.0}, {3.0}};
    const Configuration padded = classical_mds(pairwise_euclidean(line), 2);
    CHECK(padded.padded);
    CHECK(padded.positive_used == 1);
    CHECK(padded.coords.col(1).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(classical_mds(Eigen::Matrix2d{{0.0, 1.0}, {2.0, 0.0}}, 1), Error);
    CHECK_THROWS_AS(classical_mds(Eigen::Matrix2d{{1.0, 1.0}, {1.0, 0.0}}, 1), Error);
}

TEST_CASE("alienation properties")
{
    std::mt19937_64 rng(8);
    const Eigen::MatrixXd a = pairwise_euclidean(random_points(rng, 25, 2));
    const Eigen::MatrixXd b = pairwise_euclidean(random_points(rng, 25, 2));
    const double ab = alienation(a, b);
    CHECK(ab > 0.0);
    CHECK(ab <= 1.0);
    CHECK(ab == doctest::Approx(alienation(b, a)).epsilon(1e-14));
    CHECK(alienation(a, 7.5 * a) < 1e-15);
    CHECK(alienation(3.0 * a, b) == doctest::Approx(ab).epsilon(1e-12));

    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, 3), e = Eigen::MatrixXd::Zero(3, 3);
    c(0, 1) = c(1, 0) = 1.0;
    e(1, 2) = e(2, 1) = 1.0;
    CHECK(alienation(c, e) == doctest::Approx(1.0));
    CHECK_THROWS_AS(alienation(Eigen::Matrix2d::Zero(), a.topLeftCorner(2, 2)), Error);
}

TEST_CASE("separable leave-one-out equals refitting")
{
    std::mt19937_64 rng(15);
    const auto data = testing::random_mixed(rng, 40, 2, 3);
    for (Variant v : {Variant::unbiased_independent, Variant::gower, Variant::hennig_liao_additive}) {
        const DistanceMethod method(v);
        REQUIRE(method.separable());
        const ImportanceReport report = loo_distance_importance(data, method);
        const Eigen::MatrixXd full = method.compute(data).values;
        for (std::size_t j = 0; j < data.cols(); ++j) {
            const Eigen::MatrixXd reduced = method.compute(data.without(j)).values;
            CHECK(report.absolute(static_cast<Eigen::Index>(j)) ==
                  doctest::Approx(mean_pair_distance((full - reduced).cwiseAbs())).epsilon(1e-12));
        }
    }
}

TEST_CASE("importance reports")
{
    std::mt19937_64 rng(19);
    const auto data = testing::random_mixed(rng, 50, 2, 3);
    for (Variant v : {Variant::naive, Variant::hennig_liao, Variant::unbiased_independent, Variant::unbiased_dependent}) {
        const LooImportance loo = loo_importance(data, DistanceMethod(v), 2);
        CHECK(loo.distance.relative.sum() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(loo.mds.relative.sum() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(loo.distance.variables.size() == data.cols());
        CHECK(loo.mds.metric == ImportanceMetric::alienation);
        CHECK(loo.mds.absolute.maxCoeff() <= 1.0);
        const ImportanceReport alone = loo_mds_importance(data, DistanceMethod(v), 2);
        CHECK(alone.absolute == loo.mds.absolute);
    }

    const auto ind = loo_distance_importance(data, DistanceMethod(Variant::unbiased_independent));
    CHECK(ind.absolute.isApprox(Eigen::VectorXd::Ones(5), 1e-12));

    DistanceConfig base;
    DistanceConfig tripled;
    tripled.fixed_weights = std::map<std::string, double>{};
    for (std::size_t j = 0; j < data.cols(); ++j)
        (*tripled.fixed_weights)[data.name(j)] = 3.0;
    const auto r1 = loo_distance_importance(data, DistanceMethod(base));
    const auto r3 = loo_distance_importance(data, DistanceMethod(tripled));
    CHECK(testing::max_abs_diff(r1.relative, r3.relative) < 1e-14);
    CHECK(testing::max_abs_diff(3.0 * r1.absolute, r3.absolute) < 1e-12);

    CHECK_THROWS_AS(loo_distance_importance(data.without(0).without(0).without(0).without(0),
                                            DistanceMethod(Variant::gower)),
                    Error);
    CHECK(parse_importance_metric("alienation") == ImportanceMetric::alienation);
    CHECK_THROWS_AS(parse_importance_metric("stress"), Error);
}
