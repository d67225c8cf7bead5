#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include <sstream>

using namespace mixdist;

namespace {

MixedDataset parse(const std::string& text, const Schema& schema)
{
    std::istringstream in(text);
    return parse_csv(in, schema);
}

std::string error_of(const std::string& text, const Schema& schema)
{
    try {
        parse(text, schema);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

const Schema two_col = {{"age", ColumnType::numeric}, {"club", ColumnType::categorical}};

} // namespace

TEST_CASE("csv columns follow schema order and code levels by first appearance")
{
    const auto data = parse("club,age,unused\n\"B, FC\",21,x\nA,30.5,y\n\"B, FC\",-2e1,z\n", two_col);
    REQUIRE(data.rows() == 3);
    REQUIRE(data.cols() == 2);
    CHECK(data.name(0) == "age");
    CHECK(data.is_numeric(0));
    CHECK(data.numeric(0).values(1) == doctest::Approx(30.5));
    CHECK(data.numeric(0).values(2) == -20.0);
    const auto& club = data.categorical(1);
    CHECK(club.q() == 2);
    CHECK(club.levels[0] == "B, FC");
    CHECK(club.levels[1] == "A");
    CHECK(club.codes == std::vector<int>{0, 1, 0});
}

TEST_CASE("csv errors carry actionable messages")
{
    CHECK(error_of("age,team\n1,a\n2,b\n", two_col).find("'club' not found") != std::string::npos);
    CHECK(error_of("age,club\n1,a\n,b\n", two_col).find("missing value at row 2") != std::string::npos);
    const auto bad = error_of("age,club\n1,a\n2x,b\n", two_col);
    CHECK(bad.find("row 2") != std::string::npos);
    CHECK(bad.find("'age'") != std::string::npos);
    CHECK(error_of("age,club\n1,a,3\n2,b\n", two_col).find("fields") != std::string::npos);
    CHECK(error_of("age,club\n1,a\n", two_col).find("at least two") != std::string::npos);
    CHECK(error_of("age,club\n1,a\n2,a\n", two_col).find("q=1") != std::string::npos);
    CHECK(error_of("", two_col).find("header") != std::string::npos);
}

TEST_CASE("dataset constructor validates its columns")
{
    const NumericColumn x{"x", Eigen::Vector3d(1, 2, 3)};
    CHECK_THROWS_AS(MixedDataset({x, NumericColumn{"y", Eigen::Vector2d(1, 2)}}), Error);
    CHECK_THROWS_AS(MixedDataset({NumericColumn{"x", Eigen::VectorXd::Ones(1)}}), Error);
    CHECK_THROWS_AS(MixedDataset({x, CategoricalColumn{"c", {0, 0, 0}, {"a"}}}), Error);
    CHECK_THROWS_AS(MixedDataset({x, CategoricalColumn{"c", {0, 2, 1}, {"a", "b"}}}), Error);
    CHECK_THROWS_AS(MixedDataset(std::vector<Column>{}), Error);
}

TEST_CASE("column access, removal and replacement")
{
    const MixedDataset data({NumericColumn{"x", Eigen::Vector3d(1, 2, 3)},
                             CategoricalColumn::from_codes("c", {0, 1, 1}, 2),
                             NumericColumn{"y", Eigen::Vector3d(4, 5, 6)}});
    CHECK(data.numeric_indices() == std::vector<std::size_t>{0, 2});
    CHECK(data.categorical_indices() == std::vector<std::size_t>{1});
    const Eigen::MatrixXd block = data.numeric_block();
    CHECK(block.cols() == 2);
    CHECK(block(2, 1) == 6.0);
    CHECK_THROWS_AS(data.numeric(1), Error);
    CHECK_THROWS_AS(data.categorical(0), Error);

    const MixedDataset reduced = data.without(1);
    CHECK(reduced.cols() == 2);
    CHECK(reduced.name(1) == "y");
    const MixedDataset swapped = data.with_column(0, CategoricalColumn::from_codes("x", {1, 0, 1}, 2));
    CHECK_FALSE(swapped.is_numeric(0));
    CHECK_THROWS_AS(data.without(5), Error);
}

TEST_CASE("indicator matrix, counts and proportions")
{
    const auto col = CategoricalColumn::from_codes("c", {2, 0, 2, 1, 2}, 4);
    const Eigen::MatrixXd z = indicator(col);
    CHECK(z.rows() == 5);
    CHECK(z.cols() == 4);
    CHECK(z.rowwise().sum().isApprox(Eigen::VectorXd::Ones(5)));
    CHECK(z(0, 2) == 1.0);
    CHECK(category_counts(col) == Eigen::Vector4d(1, 1, 3, 0));
    CHECK_THROWS_AS(proportions(col), Error);
    CHECK(proportions(col, ZeroCounts::allow) == Eigen::Vector4d(0.2, 0.2, 0.6, 0.0));
}

TEST_CASE("equal-width discretization and unused level removal")
{
    const NumericColumn x{"x", (Eigen::VectorXd(5) << 0.0, 1.0, 2.0, 3.0, 4.0).finished()};
    const auto two = discretize(x, 2);
    CHECK(two.codes == std::vector<int>{0, 0, 1, 1, 1});
    const auto four = discretize(x, 4);
    CHECK(four.codes == std::vector<int>{0, 1, 2, 3, 3});

    const NumericColumn gap{"g", (Eigen::VectorXd(4) << 0.0, 0.1, 9.9, 10.0).finished()};
    const auto sparse = discretize(gap, 5);
    CHECK(sparse.q() == 5);
    const auto dense = drop_unused_levels(sparse);
    CHECK(dense.q() == 2);
    CHECK(dense.codes == std::vector<int>{0, 0, 1, 1});
    CHECK(dense.levels == std::vector<std::string>{"0", "4"});

    CHECK_THROWS_AS(discretize(NumericColumn{"k", Eigen::Vector3d::Constant(2.0)}, 3), Error);
    CHECK_THROWS_AS(discretize(x, 1), Error);
}
