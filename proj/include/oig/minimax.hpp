#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "oig/assignment.hpp"
#include "oig/parallel.hpp"
#include "oig/rng.hpp"

namespace oig
{
    struct SolveOptions
    {
        std::uint64_t budget = 20'000'000;     // leaf evaluations allowed for exhaustive search
        bool restrict_to_table_labels = false; // restrict candidates to labels occurring in the table
    };

    struct LocalSearchOptions
    {
        int restarts = 8;
        std::uint64_t seed = 1;
        bool restrict_to_table_labels = false;
    };

    struct MinimaxResult
    {
        Rational value;
        LearnerAssignment learner;
        std::uint64_t evaluations = 0;
        bool exact = true;
    };

    namespace detail
    {
        // The solver-facing view of an assignment problem: integer losses over
        // a common denominator, rows as (variable, true label) terms (possibly
        // restricted to a subset of positions), per-row offsets to subtract,
        // and the candidate label list shared by all variables.
        struct CoreInstance
        {
            std::vector<int> candidates;
            ScaledLoss scaled;
            std::int64_t divisor = 1;
            std::vector<std::int64_t> offsets;
            std::vector<std::vector<std::pair<int, int>>> variable_terms; // active variable -> (row, truth)
            std::vector<int> problem_of_active;
            std::vector<int> active_of_problem;
            int rows = 0;

            int active_count() const { return static_cast<int>(problem_of_active.size()); }
        };

        inline CoreInstance build_core(
            const AssignmentProblem & problem,
            std::vector<int> candidates,
            const std::vector<bool> & active_positions, // empty = all positions
            std::int64_t divisor,
            std::vector<std::int64_t> offsets = {})
        {
            CoreInstance core;
            core.candidates = std::move(candidates);
            core.scaled = make_scaled(*problem.table.space);
            core.divisor = divisor;
            core.rows = problem.row_count();
            core.offsets = std::move(offsets);
            if (core.offsets.empty())
                core.offsets.assign(core.rows, 0);

            core.active_of_problem.assign(problem.variable_count(), -1);
            std::vector<std::vector<std::pair<int, int>>> terms_by_problem_variable(problem.variable_count());
            for (int r = 0; r < core.rows; ++r)
                for (int i = 0; i < problem.n(); ++i) {
                    if (! active_positions.empty() && ! active_positions[i])
                        continue;
                    terms_by_problem_variable[problem.dependence[r][i]].emplace_back(r, problem.table.rows[r][i]);
                }
            for (int v = 0; v < problem.variable_count(); ++v) {
                if (terms_by_problem_variable[v].empty())
                    continue;
                core.active_of_problem[v] = core.active_count();
                core.problem_of_active.push_back(v);
                core.variable_terms.push_back(std::move(terms_by_problem_variable[v]));
            }
            return core;
        }

        struct CoreResult
        {
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            std::vector<int> labels; // per active variable
            std::uint64_t evaluations = 0;
        };

        // Exhaustive lexicographic DFS with strict-improvement updates, so the
        // reported optimum is the lexicographically first one. Partial row
        // sums only grow (losses are nonnegative), giving the pruning bound.
        inline CoreResult brute_force_core(const CoreInstance & core)
        {
            const int active = core.active_count();
            const int label_count = static_cast<int>(core.candidates.size());

            std::vector<std::int64_t> row_value(core.rows);
            std::int64_t base = std::numeric_limits<std::int64_t>::min();
            for (int r = 0; r < core.rows; ++r) {
                row_value[r] = -core.offsets[r];
                base = std::max(base, row_value[r]);
            }

            CoreResult result;
            std::vector<int> current(active, 0);
            std::vector<std::int64_t> bound_stack(active + 1);
            bound_stack[0] = base;

            std::function<void(int)> descend = [&](int depth) {
                if (bound_stack[depth] >= result.best && result.best != std::numeric_limits<std::int64_t>::max())
                    return;
                if (depth == active) {
                    ++result.evaluations;
                    if (result.best == std::numeric_limits<std::int64_t>::max() || bound_stack[depth] < result.best) {
                        result.best = bound_stack[depth];
                        result.labels = current;
                    }
                    return;
                }
                for (int c = 0; c < label_count; ++c) {
                    int label = core.candidates[c];
                    std::int64_t bound = bound_stack[depth];
                    for (const auto & [row, truth] : core.variable_terms[depth]) {
                        row_value[row] += core.scaled.at(truth, label);
                        bound = std::max(bound, row_value[row]);
                    }
                    current[depth] = label;
                    bound_stack[depth + 1] = bound;
                    descend(depth + 1);
                    for (const auto & [row, truth] : core.variable_terms[depth])
                        row_value[row] -= core.scaled.at(truth, label);
                }
            };
            descend(0);
            return result;
        }

        // Descending sorted profile of row values; comparing profiles
        // lexicographically refines "compare the max".
        inline std::vector<std::int64_t> profile_of(const std::vector<std::int64_t> & row_value)
        {
            std::vector<std::int64_t> profile = row_value;
            std::sort(profile.begin(), profile.end(), std::greater<>());
            return profile;
        }

        struct LocalOutcome
        {
            std::vector<std::int64_t> profile;
            std::vector<int> labels;
            std::uint64_t evaluations = 0;
        };

        // Coordinate descent over one restart: sweep the variables in order,
        // accepting any relabeling that strictly lowers the sorted profile.
        inline LocalOutcome local_descent(const CoreInstance & core, Rng rng)
        {
            const int active = core.active_count();
            const int label_count = static_cast<int>(core.candidates.size());

            LocalOutcome outcome;
            outcome.labels.resize(active);
            for (int a = 0; a < active; ++a)
                outcome.labels[a] = core.candidates[rng.below_int(label_count)];

            std::vector<std::int64_t> row_value(core.rows);
            for (int r = 0; r < core.rows; ++r)
                row_value[r] = -core.offsets[r];
            for (int a = 0; a < active; ++a)
                for (const auto & [row, truth] : core.variable_terms[a])
                    row_value[row] += core.scaled.at(truth, outcome.labels[a]);
            outcome.profile = profile_of(row_value);

            bool changed = true;
            while (changed) {
                changed = false;
                for (int a = 0; a < active; ++a) {
                    for (int c = 0; c < label_count; ++c) {
                        int label = core.candidates[c];
                        if (label == outcome.labels[a])
                            continue;
                        ++outcome.evaluations;
                        for (const auto & [row, truth] : core.variable_terms[a])
                            row_value[row] += core.scaled.at(truth, label) - core.scaled.at(truth, outcome.labels[a]);
                        auto candidate_profile = profile_of(row_value);
                        if (candidate_profile < outcome.profile) {
                            outcome.profile = std::move(candidate_profile);
                            outcome.labels[a] = label;
                            changed = true;
                        }
                        else {
                            for (const auto & [row, truth] : core.variable_terms[a])
                                row_value[row] -= core.scaled.at(truth, label) - core.scaled.at(truth, outcome.labels[a]);
                        }
                    }
                }
            }
            return outcome;
        }

        // Restarts run independently (possibly concurrently) and merge by
        // (profile, labels) lexicographic order, which is schedule-independent.
        inline CoreResult local_search_core(const CoreInstance & core, int restarts, std::uint64_t seed)
        {
            Rng root(seed);
            std::vector<LocalOutcome> outcomes(restarts);
            std::vector<Rng> streams;
            for (int s = 0; s < restarts; ++s)
                streams.push_back(root.derive(s));
            parallel_for(restarts, [&](std::size_t s) {
                outcomes[s] = local_descent(core, streams[s]);
            });

            int best = 0;
            CoreResult result;
            for (int s = 1; s < restarts; ++s) {
                if (outcomes[s].profile < outcomes[best].profile ||
                    (outcomes[s].profile == outcomes[best].profile && outcomes[s].labels < outcomes[best].labels))
                    best = s;
            }
            for (const auto & outcome : outcomes)
                result.evaluations += outcome.evaluations;
            result.best = outcomes[best].profile.empty() ? 0 : outcomes[best].profile.front();
            result.labels = outcomes[best].labels;
            return result;
        }

        inline std::vector<int> candidate_labels(const AssignmentProblem & problem, bool restrict)
        {
            if (restrict)
                return table_label_set(problem.table);
            std::vector<int> all(problem.table.space->size());
            for (int i = 0; i < static_cast<int>(all.size()); ++i)
                all[i] = i;
            return all;
        }

        // |candidates|^active as a big integer, compared against the budget.
        inline void require_within_budget(std::size_t candidates, int active, std::uint64_t budget)
        {
            BigInt total = 1;
            for (int i = 0; i < active; ++i) {
                total *= static_cast<std::int64_t>(candidates);
                if (total > budget)
                    throw BudgetError("exhaustive search needs " + std::to_string(candidates) + "^" +
                        std::to_string(active) + " evaluations, over the budget of " + std::to_string(budget) +
                        "; use local_search_minimax");
            }
        }

        inline MinimaxResult finish(
            const AssignmentProblem & problem, const CoreInstance & core, const CoreResult & solved, bool exact)
        {
            MinimaxResult result;
            result.value = rational_over(solved.best, core.divisor, core.scaled.denominator);
            result.evaluations = solved.evaluations;
            result.exact = exact;
            result.learner.choice.assign(problem.variable_count(), core.candidates.front());
            for (int a = 0; a < core.active_count(); ++a)
                result.learner.choice[core.problem_of_active[a]] = solved.labels[a];
            return result;
        }
    }

    // Global minimum of the worst-case error over all total assignments.
    inline MinimaxResult brute_force_minimax(const AssignmentProblem & problem, const SolveOptions & options = {})
    {
        auto candidates = detail::candidate_labels(problem, options.restrict_to_table_labels);
        auto core = detail::build_core(problem, std::move(candidates), {}, problem.n());
        detail::require_within_budget(core.candidates.size(), core.active_count(), options.budget);
        return detail::finish(problem, core, detail::brute_force_core(core), true);
    }

    // Heuristic upper bound: seeded random restarts of coordinate descent with
    // sorted-profile acceptance. Always >= the exact optimum; reproducible.
    inline MinimaxResult local_search_minimax(const AssignmentProblem & problem, const LocalSearchOptions & options = {})
    {
        if (problem.table.space->kind() == LossKind::general)
            throw Error("local search supports metric and zero-one losses; use brute force for general losses");
        if (options.restarts < 1)
            throw Error("local search needs at least one restart");
        auto candidates = detail::candidate_labels(problem, options.restrict_to_table_labels);
        auto core = detail::build_core(problem, std::move(candidates), {}, problem.n());
        return detail::finish(problem, core, detail::local_search_core(core, options.restarts, options.seed), false);
    }

    // Exhaustive solve over a subset of positions, dividing by `divisor`
    // instead of n. Used for samples with repeated datapoints, where only the
    // positions carrying a unique datapoint contribute error.
    inline MinimaxResult brute_force_masked(
        const AssignmentProblem & problem,
        const std::vector<bool> & active_positions,
        int divisor,
        const SolveOptions & options = {})
    {
        if (static_cast<int>(active_positions.size()) != problem.n())
            throw Error("need one activity flag per column");
        if (divisor < 1)
            throw Error("divisor must be positive");
        auto candidates = detail::candidate_labels(problem, options.restrict_to_table_labels);
        auto core = detail::build_core(problem, std::move(candidates), active_positions, divisor);
        detail::require_within_budget(core.candidates.size(), core.active_count(), options.budget);
        return detail::finish(problem, core, detail::brute_force_core(core), true);
    }
}
