#include <catch2/catch_amalgamated.hpp>

#include "oig/assignment.hpp"
#include "test_support.hpp"

using namespace oig;
using oig::test::fig1_table;

TEST_CASE("the three-row binary table yields exactly seven variables in encounter order")
{
    auto problem = build_problem(fig1_table());
    REQUIRE(problem.variable_count() == 7);

    std::vector<std::string> expected{
        "(?,0,0)", "(0,?,0)", "(0,0,?)", "(1,?,0)", "(1,0,?)", "(?,1,0)", "(0,1,?)"};
    for (int v = 0; v < 7; ++v)
        CHECK(pattern_string(problem, v) == expected[v]);

    REQUIRE(problem.dependence.size() == 3);
    CHECK(problem.dependence[0] == std::vector<int>{0, 1, 2});
    CHECK(problem.dependence[1] == std::vector<int>{0, 3, 4});
    CHECK(problem.dependence[2] == std::vector<int>{5, 1, 6});
}

TEST_CASE("dependence is consistent: the holed row equals the variable's pattern")
{
    auto problem = build_problem(fig1_table());
    for (int r = 0; r < problem.row_count(); ++r)
        for (int i = 0; i < problem.n(); ++i) {
            const auto & pattern = problem.variables[problem.dependence[r][i]];
            CHECK(pattern.hole == i);
            for (int j = 0; j < problem.n(); ++j)
                if (j != i)
                    CHECK(pattern.values[j] == problem.table.rows[r][j]);
        }
}

TEST_CASE("deduplication agrees with the string-keyed oracle on random tables")
{
    Rng root(99);
    for (int trial = 0; trial < 80; ++trial) {
        Rng rng = root.derive(trial);
        int n = 1 + rng.below_int(4);
        int labels = 2 + rng.below_int(2);
        auto table = random_table(rng, trial % 2 ? LabelSpacePtr(zero_one_space(labels))
                                                 : random_metric_space(rng, labels), n, 6);
        auto problem = build_problem(table);
        auto expected = test::naive_patterns(table);
        REQUIRE(problem.variable_count() == static_cast<int>(expected.size()));
        std::vector<std::string> got;
        for (int v = 0; v < problem.variable_count(); ++v)
            got.push_back(test::pattern_key(problem.variables[v].values, problem.variables[v].hole));
        CHECK(got == expected);
    }
}

TEST_CASE("evaluation averages per-coordinate losses exactly")
{
    auto table = fig1_table();
    auto problem = build_problem(table);

    LearnerAssignment zeros;
    zeros.choice.assign(7, 0);
    auto eval = evaluate(problem, zeros);
    CHECK(eval.per_row == std::vector<Rational>{Rational(0), Rational(1, 3), Rational(1, 3)});
    CHECK(eval.worst == Rational(1, 3));
    CHECK(eval.worst_row == 1);

    LearnerAssignment mixed;
    mixed.choice = {1, 0, 0, 0, 0, 0, 0}; // answer 1 on the shared pattern (?,0,0)
    auto eval2 = evaluate(problem, mixed);
    CHECK(eval2.per_row == std::vector<Rational>{Rational(1, 3), Rational(0), Rational(1, 3)});
}

TEST_CASE("partial assignments are rejected by name")
{
    auto problem = build_problem(fig1_table());
    LearnerAssignment partial;
    partial.choice.assign(7, 0);
    partial.choice[3] = LearnerAssignment::unassigned;
    CHECK_THROWS_WITH(require_total(problem, partial), Catch::Matchers::ContainsSubstring("(1,?,0)"));
}

TEST_CASE("apportionments validate shape and exact totals")
{
    Apportionment good;
    good.total = Rational(1, 2);
    good.entries = {Rational(1, 4), Rational(1, 4), Rational(0)};
    CHECK_NOTHROW(require_valid(good, 3));

    Apportionment wrong_total = good;
    wrong_total.total = Rational(1, 3);
    CHECK_THROWS_AS(require_valid(wrong_total, 3), Error);

    Apportionment negative = good;
    negative.entries[2] = Rational(-1, 8);
    negative.entries[0] = Rational(3, 8);
    CHECK_THROWS_AS(require_valid(negative, 3), Error);

    Apportionment short_list = good;
    short_list.entries.pop_back();
    CHECK_THROWS_AS(require_valid(short_list, 3), Error);
}

TEST_CASE("apportioned evaluation checks the per-coordinate budgets")
{
    auto table = fig1_table();
    auto problem = build_problem(table);
    LearnerAssignment zeros;
    zeros.choice.assign(7, 0);

    // Under the all-zeros learner row 1 = (1,0,0) errs only at coordinate 0
    // and row 2 = (0,1,0) only at coordinate 1; budgets concentrated on those
    // coordinates are satisfied, flat ones are not.
    std::vector<Apportionment> budgets(3);
    for (auto & budget : budgets) {
        budget.total = Rational(1, 3);
        budget.entries = {Rational(1, 3), Rational(0), Rational(0)};
    }
    budgets[2].entries = {Rational(0), Rational(1, 3), Rational(0)};
    auto report = evaluate_apportioned(problem, zeros, budgets);
    CHECK(report.satisfied);
    CHECK(report.row_ok == std::vector<bool>{true, true, true});

    for (auto & budget : budgets)
        budget.entries = {Rational(1, 9), Rational(1, 9), Rational(1, 9)};
    auto flat = evaluate_apportioned(problem, zeros, budgets);
    CHECK(! flat.satisfied);
    CHECK(! flat.row_ok[1]);       // loss 1/3 at coordinate 0 exceeds 1/9
    CHECK(! flat.coordinate_ok[1][0]);
    CHECK(flat.coordinate_ok[1][1]);
}
