#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include <cmath>
#include <numbers>

using namespace mixdist;

TEST_CASE("uniform closed forms")
{
    CHECK(uniform_mean(Scaling::sd) == std::sqrt(12.0) / 3.0);
    CHECK(uniform_mean(Scaling::range) == 1.0 / 3.0);
    CHECK(uniform_mean(Scaling::robust_range) == 2.0 / 3.0);
    CHECK_THROWS_AS(uniform_mean(Scaling::pc), Error);
}

TEST_CASE("normal quantile and closed forms")
{
    CHECK(standard_normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(standard_normal_quantile(0.75) - 0.6744897501960817) < 1e-14);
    CHECK(std::abs(standard_normal_quantile(0.975) - 1.959963984540054) < 1e-13);
    CHECK(std::abs(standard_normal_quantile(0.001) + 3.090232306167814) < 1e-12);
    CHECK_THROWS_AS(standard_normal_quantile(1.0), Error);

    CHECK(std::abs(*normal_mean(Scaling::sd) - 2.0 / std::sqrt(std::numbers::pi)) < 1e-15);
    CHECK(std::abs(*normal_mean(Scaling::robust_range) - std::sqrt(1.0 / std::numbers::pi) / 0.6744897501960817) <
          1e-13);
    CHECK_FALSE(normal_mean(Scaling::range).has_value());
}

TEST_CASE("closed forms agree with large samples")
{
    Rng rng(77);
    const auto u = sample_distribution(Distribution::uniform, 20000, rng);
    const auto v = sample_distribution(Distribution::normal, 20000, rng);
    const auto mean_of = [](const Eigen::VectorXd& x) { return mean_pair_distance(numeric_contrib(x)); };
    CHECK(mean_of(sd_scale(u).values) == doctest::Approx(uniform_mean(Scaling::sd)).epsilon(0.01));
    CHECK(mean_of(robust_range_scale(u).values) == doctest::Approx(uniform_mean(Scaling::robust_range)).epsilon(0.01));
    CHECK(mean_of(sd_scale(v).values) == doctest::Approx(*normal_mean(Scaling::sd)).epsilon(0.01));
}

TEST_CASE("expected distance is p' Delta p")
{
    const Eigen::Vector3d p(0.5, 0.3, 0.2);
    CHECK(cat_expected(p, matching(3)) == doctest::Approx(1.0 - p.squaredNorm()));
    CHECK(cat_expected(p, Eigen::Matrix3d::Zero()) == 0.0);
}

TEST_CASE("uniform-probability table")
{
    const auto rows2 = uniform_profile_table(2);
    const auto rows5 = uniform_profile_table(5);
    REQUIRE(rows2.size() == 10);
    const auto find = [](const std::vector<UniformProfileRow>& rows, Dissimilarity kind) {
        for (const auto& r : rows)
            if (r.kind == kind)
                return r;
        FAIL("row missing");
        return rows.front();
    };
    CHECK(find(rows2, Dissimilarity::matching).expected == doctest::Approx(0.5));
    CHECK(find(rows5, Dissimilarity::eskin).expected == doctest::Approx(0.064));
    CHECK(find(rows5, Dissimilarity::indicator_cds).expected == doctest::Approx(1.0));
    CHECK(find(rows5, Dissimilarity::indicator_hl).expected == doctest::Approx(0.8 * 2.0 * std::sqrt(0.5 * 5.0 / 4.0)));
    CHECK(find(rows2, Dissimilarity::iof).expected == doctest::Approx(0.5 * std::pow(std::log(80.0), 2)));
    CHECK(find(rows2, Dissimilarity::kl_assoc).multiple_of_matching == doctest::Approx(2.0 * printed_kl_kappa()));
    for (const auto& r : rows5)
        CHECK(r.expected == doctest::Approx(0.8 * r.multiple_of_matching));
}

TEST_CASE("Hennig-Liao limits")
{
    const auto limits = eta_limits(4, 0.5);
    CHECK(limits.large_n == doctest::Approx(std::sqrt(0.5 * 4.0 / 3.0)));
    CHECK(limits.n_equals_q == doctest::Approx(std::sqrt(0.5 * 5.0 / 3.0)));
}

TEST_CASE("skewed-probability profiles")
{
    const auto& grid = skew_grid();
    CHECK(grid.size() == 9);
    for (int q : {2, 5}) {
        const auto profile = skew_profile(q, Dissimilarity::matching, grid);
        REQUIRE(profile.size() == grid.size());
        for (const auto& pt : profile) {
            const double rest = (1.0 - pt.p1) / (q - 1);
            CHECK(pt.expected == doctest::Approx(1.0 - pt.p1 * pt.p1 - (q - 1) * rest * rest));
        }
    }
    const double half = 0.5;
    const auto at_uniform = skew_profile(2, Dissimilarity::indicator_cds, std::span<const double>(&half, 1));
    CHECK(at_uniform[0].expected == doctest::Approx(1.0));
    const auto tvd = skew_profile(3, Dissimilarity::tvd_assoc, grid);
    for (const auto& pt : tvd) {
        const double rest = (1.0 - pt.p1) / 2.0;
        CHECK(pt.expected == doctest::Approx(1.0 - pt.p1 * pt.p1 - 2.0 * rest * rest));
    }
}

TEST_CASE("sampled distributions")
{
    Rng a(5), b(5);
    const auto x = sample_distribution(Distribution::bimodal, 101, a);
    CHECK(x == sample_distribution(Distribution::bimodal, 101, b));
    CHECK(x.minCoeff() >= 0.0);
    CHECK(x.maxCoeff() <= 10.0);
    CHECK(x.head(50).mean() < 2.0);
    CHECK(x.tail(51).mean() > 8.0);
    const auto s = sample_distribution(Distribution::skewed, 4000, a);
    CHECK(s.minCoeff() >= 0.0);
    CHECK(s.mean() == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("Monte-Carlo scaling table is reproducible and near its targets")
{
    const auto cell = scaling_mean_cell(Distribution::uniform, 500, 20, 3);
    CHECK(cell.sd == doctest::Approx(1.1547).epsilon(0.02));
    CHECK(cell.range == doctest::Approx(0.333).epsilon(0.02));
    CHECK(cell.robust_range == doctest::Approx(0.667).epsilon(0.03));
    const auto again = scaling_mean_cell(Distribution::uniform, 500, 20, 3);
    CHECK(cell.sd == again.sd);
    const std::vector<Eigen::Index> sizes = {100, 500};
    const auto all = scaling_mean_table(sizes, 5, 1);
    CHECK(all.size() == 8);
}
