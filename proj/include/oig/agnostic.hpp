#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "oig/behavior_table.hpp"
#include "oig/minimax.hpp"

namespace oig
{
    // Agnostic variant: the adversary may present any behavior in the full
    // product space, and the learner is charged only for its regret against
    // the best comparator row from the class.
    struct AgnosticProblem
    {
        LabelSpacePtr space;
        int n = 0;
        std::vector<std::vector<int>> class_rows;

        int label_count() const { return space->size(); }
    };

    inline AgnosticProblem make_agnostic(const BehaviorTable & table)
    {
        return AgnosticProblem{table.space, table.n, table.rows};
    }

    // Index of the one-hole pattern (hole, values) in the full product space:
    // hole-major, then the known values in row-major mixed radix.
    inline int pattern_index(int n, int k, int hole, const std::vector<int> & values)
    {
        int index = 0;
        for (int i = 0; i < n; ++i) {
            if (i == hole)
                continue;
            index = index * k + values[i];
        }
        int block = 1;
        for (int i = 0; i < n - 1; ++i)
            block *= k;
        return hole * block + index;
    }

    inline PartialBehavior pattern_of_index(int n, int k, int index)
    {
        int block = 1;
        for (int i = 0; i < n - 1; ++i)
            block *= k;
        PartialBehavior pattern;
        pattern.hole = index / block;
        int rest = index % block;
        pattern.values.assign(n, 0);
        for (int i = n - 1; i >= 0; --i) {
            if (i == pattern.hole)
                continue;
            pattern.values[i] = rest % k;
            rest /= k;
        }
        pattern.values[pattern.hole] = PartialBehavior::hole_marker;
        return pattern;
    }

    namespace detail
    {
        inline void require_agnostic_size(const AgnosticProblem & problem)
        {
            if (problem.n < 1)
                throw Error("agnostic problems need n >= 1");
            if (problem.class_rows.empty())
                throw Error("agnostic problems need at least one class row");
            BigInt rows = 1;
            for (int i = 0; i < problem.n; ++i)
                rows *= problem.label_count();
            if (rows > 1'000'000)
                throw BudgetError("agnostic row space exceeds 10^6 behaviors");
        }

        // Scaled best-comparator loss against the behavior `row`.
        inline std::int64_t scaled_offset(
            const AgnosticProblem & problem, const ScaledLoss & scaled, const std::vector<int> & row)
        {
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            for (const auto & comparator : problem.class_rows) {
                std::int64_t total = 0;
                for (int i = 0; i < problem.n; ++i)
                    total += scaled.at(comparator[i], row[i]);
                best = std::min(best, total);
            }
            return best;
        }

        inline bool advance_odometer(std::vector<int> & row, int k)
        {
            for (int i = static_cast<int>(row.size()) - 1; i >= 0; --i) {
                if (++row[i] < k)
                    return true;
                row[i] = 0;
            }
            return false;
        }
    }

    inline Rational agnostic_offset(const AgnosticProblem & problem, const std::vector<int> & row)
    {
        if (static_cast<int>(row.size()) != problem.n)
            throw Error("behavior length must match n");
        auto scaled = make_scaled(*problem.space);
        return rational_over(detail::scaled_offset(problem, scaled, row), problem.n, scaled.denominator);
    }

    struct AgnosticResult
    {
        Rational value;
        std::vector<int> pattern_choice; // label per one-hole pattern of the full product space
        std::uint64_t evaluations = 0;
        bool exact = true;
    };

    namespace detail
    {
        // Exhaustive search over assignments to every one-hole pattern. The
        // behaviors are streamed per leaf with early abort; nothing scaling
        // with the row space is materialized.
        inline AgnosticResult agnostic_exact(const AgnosticProblem & problem, const SolveOptions & options)
        {
            const int n = problem.n;
            const int k = problem.label_count();
            auto scaled = make_scaled(*problem.space);

            int block = 1;
            for (int i = 0; i < n - 1; ++i)
                block *= k;
            const int variables = n * block;
            require_within_budget(static_cast<std::size_t>(k), variables, options.budget);

            AgnosticResult result;
            std::vector<int> choice(variables, 0);
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            std::vector<int> best_choice;

            auto leaf_value = [&]() {
                std::int64_t worst = std::numeric_limits<std::int64_t>::min();
                std::vector<int> row(n, 0);
                do {
                    std::int64_t total = 0;
                    for (int i = 0; i < n; ++i)
                        total += scaled.at(row[i], choice[pattern_index(n, k, i, row)]);
                    total -= scaled_offset(problem, scaled, row);
                    worst = std::max(worst, total);
                    if (best != std::numeric_limits<std::int64_t>::max() && worst >= best)
                        return worst; // cannot beat the incumbent; abort the stream
                } while (advance_odometer(row, k));
                return worst;
            };

            std::function<void(int)> descend = [&](int depth) {
                if (depth == variables) {
                    ++result.evaluations;
                    std::int64_t value = leaf_value();
                    if (best == std::numeric_limits<std::int64_t>::max() || value < best) {
                        best = value;
                        best_choice = choice;
                    }
                    return;
                }
                for (int label = 0; label < k; ++label) {
                    choice[depth] = label;
                    descend(depth + 1);
                }
            };
            descend(0);

            result.value = rational_over(best, n, scaled.denominator);
            result.pattern_choice = std::move(best_choice);
            result.exact = true;
            return result;
        }

        // Materialized variant for local search: every behavior becomes a row
        // of a core instance whose offset is its best-comparator loss.
        inline CoreInstance agnostic_core(const AgnosticProblem & problem)
        {
            const int n = problem.n;
            const int k = problem.label_count();
            auto scaled = make_scaled(*problem.space);

            int block = 1;
            for (int i = 0; i < n - 1; ++i)
                block *= k;
            const int variables = n * block;

            CoreInstance core;
            core.candidates.resize(k);
            for (int label = 0; label < k; ++label)
                core.candidates[label] = label;
            core.scaled = scaled;
            core.divisor = n;
            core.variable_terms.resize(variables);
            core.problem_of_active.resize(variables);
            core.active_of_problem.resize(variables);
            for (int v = 0; v < variables; ++v) {
                core.problem_of_active[v] = v;
                core.active_of_problem[v] = v;
            }

            std::vector<int> row(n, 0);
            int row_id = 0;
            do {
                core.offsets.push_back(scaled_offset(problem, scaled, row));
                for (int i = 0; i < n; ++i)
                    core.variable_terms[pattern_index(n, k, i, row)].emplace_back(row_id, row[i]);
                ++row_id;
            } while (advance_odometer(row, k));
            core.rows = row_id;
            return core;
        }
    }

    inline AgnosticResult agnostic_minimax(
        const AgnosticProblem & problem,
        bool exact,
        const SolveOptions & options = {},
        const LocalSearchOptions & local_options = {})
    {
        detail::require_agnostic_size(problem);
        for (const auto & row : problem.class_rows)
            if (static_cast<int>(row.size()) != problem.n)
                throw Error("class rows must have length n");
        if (exact)
            return detail::agnostic_exact(problem, options);

        if (problem.space->kind() == LossKind::general)
            throw Error("local search supports metric and zero-one losses; use brute force for general losses");
        auto core = detail::agnostic_core(problem);
        auto solved = detail::local_search_core(core, local_options.restarts, local_options.seed);
        AgnosticResult result;
        result.value = rational_over(solved.best, core.divisor, core.scaled.denominator);
        result.pattern_choice = solved.labels;
        result.evaluations = solved.evaluations;
        result.exact = false;
        return result;
    }
}
