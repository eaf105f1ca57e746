#include <catch2/catch_amalgamated.hpp>

#include "oig/generators.hpp"
#include "oig/label_space.hpp"
#include "test_support.hpp"

using namespace oig;

namespace
{
    std::vector<std::vector<Rational>> matrix(std::initializer_list<std::initializer_list<int>> rows)
    {
        std::vector<std::vector<Rational>> result;
        for (const auto & row : rows)
            result.emplace_back(row.begin(), row.end());
        return result;
    }
}

TEST_CASE("a valid metric space is accepted and queryable")
{
    auto space = LabelSpace::make({"a", "b", "c"}, matrix({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}), LossKind::metric);
    CHECK(space->size() == 3);
    CHECK(space->kind() == LossKind::metric);
    CHECK(space->loss(0, 2) == Rational(2));
    CHECK(space->loss("a", "c") == Rational(2));
    CHECK(space->label(1) == "b");
    CHECK(space->index_of("c") == 2);
    CHECK_THROWS_AS(space->index_of("d"), Error);
    CHECK(space->validate().ok);
}

TEST_CASE("axiom violations are reported with the first witness")
{
    SECTION("empty label list")
    {
        auto report = validate_space_data({}, {}, LossKind::metric);
        CHECK(report.axiom == "shape");
    }
    SECTION("label cap")
    {
        std::vector<std::string> labels;
        for (int i = 0; i < 65; ++i)
            labels.push_back("l" + std::to_string(i));
        std::vector<std::vector<Rational>> loss(65, std::vector<Rational>(65, 1));
        for (int i = 0; i < 65; ++i)
            loss[i][i] = 0;
        CHECK(validate_space_data(labels, loss, LossKind::metric).axiom == "label-cap");
    }
    SECTION("ragged matrix")
    {
        auto report = validate_space_data({"a", "b"}, {{Rational(0)}, {Rational(1), Rational(0)}}, LossKind::metric);
        CHECK(report.axiom == "shape");
        CHECK(report.indices == std::vector<int>{0});
    }
    SECTION("duplicate label names")
    {
        auto report = validate_space_data({"a", "a"}, matrix({{0, 1}, {1, 0}}), LossKind::metric);
        CHECK(report.axiom == "duplicate-label");
        CHECK(report.indices == std::vector<int>{0, 1});
    }
    SECTION("negative entry")
    {
        auto report = validate_space_data({"a", "b"}, matrix({{0, -1}, {1, 0}}), LossKind::general);
        CHECK(report.axiom == "nonnegativity");
    }
    SECTION("nonzero diagonal")
    {
        auto report = validate_space_data({"a", "b"}, matrix({{1, 1}, {1, 0}}), LossKind::general);
        CHECK(report.axiom == "zero-diagonal");
        CHECK(report.indices == std::vector<int>{0});
    }
    SECTION("zero-one pattern")
    {
        auto report = validate_space_data({"a", "b"}, matrix({{0, 2}, {1, 0}}), LossKind::zero_one);
        CHECK(report.axiom == "zero-one-pattern");
    }
    SECTION("asymmetry under the metric kind")
    {
        auto report = validate_space_data({"a", "b"}, matrix({{0, 1}, {2, 0}}), LossKind::metric);
        CHECK(report.axiom == "symmetry");
        CHECK(report.indices == std::vector<int>{0, 1});
    }
    SECTION("zero distance between distinct labels")
    {
        auto report = validate_space_data({"a", "b"}, matrix({{0, 0}, {0, 0}}), LossKind::metric);
        CHECK(report.axiom == "positivity");
    }
    SECTION("triangle violation names the first (i, j, l) witness")
    {
        auto report =
            validate_space_data({"a", "b", "c"}, matrix({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}), LossKind::metric);
        CHECK(report.axiom == "triangle");
        CHECK(report.indices == std::vector<int>{0, 1, 2});
    }
    SECTION("the general kind skips the metric axioms")
    {
        auto report = validate_space_data({"a", "b"}, matrix({{0, 1}, {2, 0}}), LossKind::general);
        CHECK(report.ok);
    }
}

TEST_CASE("construction rejects invalid spaces loudly")
{
    CHECK_THROWS_AS(LabelSpace::make({"a", "b"}, matrix({{0, 1}, {2, 0}}), LossKind::metric), Error);
    CHECK_THROWS_AS(LabelSpace::make({"a"}, matrix({{1}}), LossKind::metric), Error);
}

TEST_CASE("randomly generated metric spaces validate, and injected violations are caught")
{
    Rng root(314);
    for (int trial = 0; trial < 50; ++trial) {
        Rng rng = root.derive(trial);
        int size = 2 + rng.below_int(4);
        auto space = random_metric_space(rng, size);
        REQUIRE(space->validate().ok);

        // Break one axiom and check the report names a real violation.
        auto loss = space->loss_matrix();
        int a = rng.below_int(size);
        int b = rng.below_int(size);
        ValidationReport report;
        if (trial % 2 == 0 && a != b) {
            loss[a][b] += 1; // break symmetry
            report = validate_space_data(space->labels(), loss, LossKind::metric);
            CHECK(! report.ok);
            CHECK((report.axiom == "symmetry" || report.axiom == "triangle"));
        }
        else {
            loss[a][a] = 1; // break the diagonal
            report = validate_space_data(space->labels(), loss, LossKind::metric);
            CHECK(! report.ok);
            CHECK(report.axiom == "zero-diagonal");
        }
        if (! report.ok && report.axiom == "symmetry") {
            REQUIRE(report.indices.size() == 2);
            CHECK(loss[report.indices[0]][report.indices[1]] != loss[report.indices[1]][report.indices[0]]);
        }
        if (! report.ok && report.axiom == "triangle") {
            REQUIRE(report.indices.size() == 3);
            auto [i, j, l] = std::tuple(report.indices[0], report.indices[1], report.indices[2]);
            CHECK(loss[i][l] > loss[i][j] + loss[j][l]);
        }
    }
}

TEST_CASE("scaled losses share one denominator")
{
    auto space = LabelSpace::make(
        {"a", "b", "c"},
        {{Rational(0), Rational(1, 2), Rational(1, 3)},
         {Rational(1, 2), Rational(0), Rational(1, 2)},
         {Rational(1, 3), Rational(1, 2), Rational(0)}},
        LossKind::metric);
    auto scaled = make_scaled(*space);
    CHECK(scaled.denominator == 6);
    CHECK(scaled.at(0, 1) == 3);
    CHECK(scaled.at(0, 2) == 2);
    CHECK(rational_over(scaled.at(0, 1), 1, scaled.denominator) == Rational(1, 2));
}

TEST_CASE("oversized scaled denominators are rejected")
{
    // Pairwise-coprime denominators drive the common denominator past 10^12.
    std::vector<long> dens{999'983, 999'979, 1'000'003};
    std::vector<std::vector<Rational>> loss(3, std::vector<Rational>(3, 0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j)
                loss[i][j] = Rational(1, dens[(i + j) % 3]);
    auto space = LabelSpace::make({"a", "b", "c"}, loss, LossKind::general);
    CHECK_THROWS_AS(make_scaled(*space), Error);
}
