#pragma once

#include <string>
#include <vector>

#include "oig/agnostic.hpp"
#include "oig/experiments.hpp"
#include "oig/generators.hpp"
#include "oig/json_io.hpp"

namespace oig
{
    // Exact-arithmetic invariant suites over a seeded instance corpus. The
    // same corpus backs the CLI `props` command, the unit tests, and the
    // acceptance run.

    struct PropertyOutcome
    {
        std::string name;
        int cases = 0;
        int failures = 0;
        bool passed = false;
        std::string detail;
    };

    struct PropertySuiteReport
    {
        std::uint64_t seed = 0;
        int cases = 0;
        std::vector<PropertyOutcome> outcomes;
        bool all_passed = false;
    };

    namespace detail
    {
        inline BehaviorTable property_table(Rng & rng, bool zero_one, int max_n, int max_labels, int max_rows)
        {
            int n = 1 + rng.below_int(max_n);
            int labels = 2 + rng.below_int(max_labels - 1);
            auto space = zero_one ? zero_one_space(labels) : random_metric_space(rng, labels);
            return random_table(rng, std::move(space), n, max_rows);
        }

        // Deleting a row never increases the optimum: the remaining rows keep
        // their variables, so any learner for the larger table still works.
        inline PropertyOutcome deletion_monotonicity_suite(Rng root, int cases)
        {
            PropertyOutcome outcome;
            outcome.name = "monotone-under-row-deletion";
            for (int c = 0; c < cases; ++c) {
                Rng rng = root.derive(c);
                bool zero_one = c % 2 == 0;
                auto table = property_table(rng, zero_one, zero_one ? 4 : 3, 3, zero_one ? 6 : 3);
                ++outcome.cases;
                Rational full = exact_value(table, {});
                if (table.row_count() < 2)
                    continue;
                for (int drop = 0; drop < table.row_count(); ++drop) {
                    std::vector<std::vector<int>> rows;
                    for (int r = 0; r < table.row_count(); ++r)
                        if (r != drop)
                            rows.push_back(table.rows[r]);
                    Rational reduced = exact_value(make_table(table.space, table.n, rows), {});
                    if (reduced > full) {
                        ++outcome.failures;
                        if (outcome.detail.empty())
                            outcome.detail = "stream " + std::to_string(c) + ": dropping row " +
                                std::to_string(drop) + " raised the optimum from " + format_rational(full) +
                                " to " + format_rational(reduced);
                        break;
                    }
                }
            }
            outcome.passed = outcome.failures == 0;
            return outcome;
        }

        // With the class itself as the comparator set, every realizable
        // behavior appears with offset zero, so the agnostic optimum cannot
        // be smaller than the realizable one.
        inline PropertyOutcome agnostic_dominates_suite(Rng root, int cases)
        {
            PropertyOutcome outcome;
            outcome.name = "agnostic-at-least-realizable";
            for (int c = 0; c < cases; ++c) {
                Rng rng = root.derive(c);
                auto table = property_table(rng, c % 2 == 0, 2, 3, 3);
                ++outcome.cases;
                Rational realizable = brute_force_minimax(build_problem(table)).value;
                Rational agnostic = agnostic_minimax(make_agnostic(table), true).value;
                if (agnostic < realizable) {
                    ++outcome.failures;
                    if (outcome.detail.empty())
                        outcome.detail = "stream " + std::to_string(c) + ": agnostic " +
                            format_rational(agnostic) + " below realizable " + format_rational(realizable);
                }
            }
            outcome.passed = outcome.failures == 0;
            return outcome;
        }

        // Local search is an upper bound on the exact optimum, and on these
        // small instances it should also attain it nearly always.
        inline PropertyOutcome local_dominates_suite(Rng root, int cases)
        {
            PropertyOutcome outcome;
            outcome.name = "local-at-least-brute";
            int equal = 0;
            for (int c = 0; c < cases; ++c) {
                Rng rng = root.derive(c);
                auto table = property_table(rng, c % 2 == 0, 3, 3, 4);
                ++outcome.cases;
                auto problem = build_problem(table);
                Rational brute = brute_force_minimax(problem).value;
                LocalSearchOptions local_options;
                local_options.seed = root.derive(1'000'000 + c).next();
                Rational local = local_search_minimax(problem, local_options).value;
                if (local < brute) {
                    ++outcome.failures;
                    if (outcome.detail.empty())
                        outcome.detail = "stream " + std::to_string(c) + ": local " + format_rational(local) +
                            " below brute " + format_rational(brute);
                }
                else if (local == brute)
                    ++equal;
            }
            if (outcome.failures == 0 && equal * 100 < outcome.cases * 95) {
                ++outcome.failures;
                outcome.detail = "local search matched the exact optimum on only " + std::to_string(equal) +
                    " of " + std::to_string(outcome.cases) + " cases (needs 95%)";
            }
            if (outcome.detail.empty())
                outcome.detail = "matched the exact optimum on " + std::to_string(equal) + " of " +
                    std::to_string(outcome.cases) + " cases";
            outcome.passed = outcome.failures == 0;
            return outcome;
        }
    }

    inline PropertySuiteReport run_property_suites(std::uint64_t seed = 2026, int cases = 60)
    {
        if (cases < 1)
            throw Error("need at least one case per suite");
        PropertySuiteReport report;
        report.seed = seed;
        report.cases = cases;
        Rng root(seed);
        report.outcomes.push_back(detail::deletion_monotonicity_suite(root.derive(1), cases));
        report.outcomes.push_back(detail::agnostic_dominates_suite(root.derive(2), cases));
        report.outcomes.push_back(detail::local_dominates_suite(root.derive(3), cases));
        report.all_passed = true;
        for (const auto & outcome : report.outcomes)
            report.all_passed = report.all_passed && outcome.passed;
        return report;
    }

    inline Json property_report_to_json(const PropertySuiteReport & report)
    {
        Json outcomes = Json::array();
        for (const auto & outcome : report.outcomes)
            outcomes.push_back(Json{
                {"name", outcome.name},
                {"cases", outcome.cases},
                {"failures", outcome.failures},
                {"passed", outcome.passed},
                {"detail", outcome.detail},
            });
        return Json{
            {"version", version},
            {"seed", report.seed},
            {"cases", report.cases},
            {"suites", std::move(outcomes)},
            {"all_passed", report.all_passed},
        };
    }
}
