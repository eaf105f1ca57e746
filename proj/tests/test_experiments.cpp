#include <catch2/catch_amalgamated.hpp>

#include "oig/counterexample.hpp"
#include "oig/experiments.hpp"
#include "test_support.hpp"

using namespace oig;
using test::fig1_table;

TEST_CASE("the core family is generated with the pinned geometry")
{
    auto instance = generate_counterexample({2, true, 2});
    const auto & space = *instance.space;
    REQUIRE(space.labels() == std::vector<std::string>{"r1", "r2", "s{1}", "s{2}", "s{1,2}"});

    CHECK(space.loss(0, 1) == Rational(2)); // core to core
    CHECK(space.loss(0, 2) == Rational(1)); // core to a cover containing it
    CHECK(space.loss(0, 3) == Rational(2)); // core to a cover missing it
    CHECK(space.loss(2, 3) == Rational(1)); // cover to cover
    CHECK(space.loss(2, 4) == Rational(1));
    CHECK(space.loss(1, 4) == Rational(1));
    CHECK(space.validate().ok);

    REQUIRE(instance.table.n == 2);
    std::vector<std::vector<int>> expected{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    CHECK(instance.table.rows == expected);

    auto trimmed = generate_counterexample({2, false, 1});
    CHECK(trimmed.space->labels() == std::vector<std::string>{"r1", "r2", "s{1}", "s{2}"});
    CHECK(trimmed.table.rows == std::vector<std::vector<int>>{{0}, {1}});

    CHECK_THROWS_AS(generate_counterexample({1, true, 1}), Error);
    CHECK_THROWS_AS(generate_counterexample({6, true, 1}), Error);
    CHECK_THROWS_AS(generate_counterexample({3, true, 0}), Error);
    CHECK_THROWS_AS(generate_counterexample({3, true, 5}), Error);
}

TEST_CASE("dropping the full cover doubles the optimal error for every core count")
{
    for (int m = 2; m <= 5; ++m) {
        auto with = generate_counterexample({m, true, 1});
        auto without = generate_counterexample({m, false, 1});
        CHECK(brute_force_minimax(build_problem(with.table)).value == Rational(1));
        CHECK(brute_force_minimax(build_problem(without.table)).value == Rational(2));
    }
}

TEST_CASE("the column sweep reproduces the three-row table cell by cell")
{
    auto report = compactness_sweep(fig1_table());
    CHECK(report.kind == LossKind::zero_one);
    CHECK(report.solver == "matching");
    CHECK(report.headline_full_xi == Rational(1, 3));
    CHECK(report.headline_ratio == Rational(1));
    CHECK(report.monotone_ok);
    CHECK(! report.truncated);
    CHECK(report.solves == 27);

    REQUIRE(report.cells.size() == 7);
    std::vector<std::vector<int>> columns{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    std::vector<int> solves{3, 3, 1, 7, 3, 3, 7};
    for (size_t i = 0; i < report.cells.size(); ++i) {
        const auto & cell = report.cells[i];
        CHECK(cell.columns == columns[i]);
        CHECK(cell.solves == solves[i]);
        CHECK(cell.complete);
        CHECK(cell.ratio == Rational(1));
        CHECK(cell.max_subset_xi == cell.full_xi);
        CHECK(cell.proper_max_xi <= cell.full_xi);
    }
    CHECK(report.cells.back().full_xi == Rational(1, 3));
}

TEST_CASE("the sweep is all zeros for a single behavior")
{
    auto report = compactness_sweep(single_row_family_table(3));
    CHECK(report.headline_full_xi == Rational(0));
    CHECK(report.headline_ratio == Rational(1));
    for (const auto & cell : report.cells) {
        CHECK(cell.full_xi == Rational(0));
        CHECK(cell.ratio == Rational(1));
    }
}

TEST_CASE("metric sweeps stay within the factor-two envelope")
{
    auto instance = generate_counterexample({2, true, 2});
    auto report = compactness_sweep(instance.table);
    CHECK(report.kind == LossKind::metric);
    CHECK(report.solver == "brute");
    CHECK(report.monotone_ok); // ratios all stayed at exactly one
    for (const auto & cell : report.cells) {
        CHECK(cell.ratio >= Rational(1));
        CHECK(cell.ratio <= Rational(2));
    }
}

TEST_CASE("a tiny solve budget cuts subsets but keeps every cell's headline")
{
    SweepOptions options;
    options.max_solves = 5;
    auto report = compactness_sweep(fig1_table(), options);
    CHECK(report.truncated);
    REQUIRE(report.cells.size() == 7); // all cells still present
    CHECK(report.headline_full_xi == Rational(1, 3));
    std::uint64_t fulls = report.cells.size();
    CHECK(report.solves - fulls <= 5); // only subset solves are budgeted
    for (const auto & cell : report.cells)
        CHECK(cell.solves >= 1);
}

TEST_CASE("held-out error concentrates below the transductive rate")
{
    auto report = pac_bridge_check(fig1_table(), 3, 1500, 99);
    CHECK(report.xi_n == Rational(1, 3));
    CHECK(report.holds);
    CHECK(report.trials == 1500);
    CHECK(report.distinct_multisets == 10); // multisets of size 3 over 3 columns
    REQUIRE(report.row_means.size() == 3);
    CHECK(report.row_means[report.worst_row] == report.estimate);
    CHECK(report.estimate <= report.xi_n);

    auto again = pac_bridge_check(fig1_table(), 3, 1500, 99);
    CHECK(again.estimate == report.estimate);
    CHECK(again.worst_row == report.worst_row);
}

TEST_CASE("held-out error is exactly zero for a single behavior")
{
    auto report = pac_bridge_check(single_row_family_table(2), 2, 50, 1);
    CHECK(report.xi_n == Rational(0));
    CHECK(report.estimate == Rational(0));
    CHECK(report.standard_error == 0.0);
    CHECK(report.holds);
}

TEST_CASE("the sample size may differ from the table width")
{
    auto report = pac_bridge_check(fig1_table(), 2, 400, 5);
    CHECK(report.n == 2);
    CHECK(report.holds);
    CHECK(report.distinct_multisets >= 1);
    CHECK(report.distinct_multisets <= 6);

    CHECK_THROWS_AS(pac_bridge_check(fig1_table(), 0, 10, 1), Error);
    CHECK_THROWS_AS(pac_bridge_check(fig1_table(), 2, 0, 1), Error);
}

TEST_CASE("the star family needs one datapoint per unit of precision")
{
    std::vector<Rational> epsilons{Rational(1), Rational(1, 2), Rational(1, 3), Rational(1, 5)};
    auto report = sample_complexity_curve("star", star_family_table, epsilons, 1, 6);
    CHECK(report.solver == "matching");
    REQUIRE(report.xi.size() == 6);
    for (int i = 0; i < 6; ++i)
        CHECK(report.xi[i] == Rational(1, i + 1));
    REQUIRE(report.points.size() == 4);
    CHECK(report.points[0].m == 1);
    CHECK(report.points[1].m == 2);
    CHECK(report.points[2].m == 3);
    CHECK(report.points[3].m == 5);
    for (const auto & point : report.points)
        CHECK(point.reachable);
}

TEST_CASE("a single behavior is learnable immediately, even at zero error")
{
    std::vector<Rational> epsilons{Rational(0), Rational(1, 2)};
    auto report = sample_complexity_curve("single-row", single_row_family_table, epsilons, 1, 4);
    for (const auto & point : report.points) {
        CHECK(point.reachable);
        CHECK(point.m == 1);
    }
}

TEST_CASE("the uncovered core family is unlearnable below error two on one datapoint")
{
    auto family = [](int n) { return counterexample_family_table(n, 2, false); };
    std::vector<Rational> epsilons{Rational(2), Rational(1, 2)};
    auto report = sample_complexity_curve("counterexample", family, epsilons, 1, 1);
    CHECK(report.xi == std::vector<Rational>{Rational(2)});
    CHECK(report.points[0].reachable);
    CHECK(report.points[0].m == 1);
    CHECK(! report.points[1].reachable);
    CHECK(report.points[1].m == -1);

    CHECK_THROWS_AS(sample_complexity_curve("bad", star_family_table, epsilons, 2, 1), Error);
}

TEST_CASE("two datapoints let the uncovered pair be answered at error one")
{
    // With two cores, predicting the core opposite to the visible coordinate
    // is exactly wrong on one coordinate and exactly right on the other, so
    // the optimum drops from 2 at n = 1 to 1 at n = 2.
    auto family = [](int n) { return counterexample_family_table(n, 2, false); };
    std::vector<Rational> epsilons{Rational(1), Rational(1, 2)};
    auto report = sample_complexity_curve("counterexample", family, epsilons, 1, 2);
    CHECK(report.xi == std::vector<Rational>{Rational(2), Rational(1)});
    CHECK(report.points[0].reachable);
    CHECK(report.points[0].m == 2);
    CHECK(! report.points[1].reachable);
}

TEST_CASE("the gap search reports reproducible, sane ratios")
{
    auto report = agnostic_gap_search(8, 7);
    CHECK(report.seed == 7);
    CHECK(report.instances == 8);
    CHECK(report.top.size() <= 5);
    CHECK(! report.note.empty());
    for (const auto & instance : report.top) {
        CHECK(instance.agnostic >= instance.realizable);
        if (instance.finite_ratio)
            CHECK(instance.ratio >= Rational(1));
    }

    auto again = agnostic_gap_search(8, 7);
    REQUIRE(again.top.size() == report.top.size());
    for (size_t i = 0; i < report.top.size(); ++i) {
        CHECK(again.top[i].stream == report.top[i].stream);
        CHECK(again.top[i].agnostic == report.top[i].agnostic);
    }

    CHECK_THROWS_AS(agnostic_gap_search(0, 1), Error);
}
