#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "oig/behavior_table.hpp"

namespace oig
{
    // A row with exactly one entry removed: values[hole] == hole_marker.
    struct PartialBehavior
    {
        static constexpr int hole_marker = -1;

        std::vector<int> values;
        int hole = 0;
    };

    // The variable-assignment system of a behavior table: variables are the
    // deduplicated one-hole projections of rows, dependence[r][i] is the
    // variable obtained from row r by holing position i, and targets carry an
    // optional per-row error target (all zero by default; only the matching
    // feasibility queries consume them).
    struct AssignmentProblem
    {
        BehaviorTable table;
        std::vector<PartialBehavior> variables;
        std::vector<std::vector<int>> dependence;
        std::vector<Rational> targets;

        int variable_count() const { return static_cast<int>(variables.size()); }
        int row_count() const { return table.row_count(); }
        int n() const { return table.n; }
    };

    // A learner: a total choice of label per variable.
    struct LearnerAssignment
    {
        static constexpr int unassigned = -1;

        std::vector<int> choice;
    };

    inline AssignmentProblem build_problem(const BehaviorTable & table)
    {
        AssignmentProblem problem;
        problem.table = table;

        // Variables are keyed by the holed value vector (the marker encodes
        // the hole position), in first-encounter order: row-major, hole 0..n-1.
        std::map<std::vector<int>, int> ids;
        for (const auto & row : table.rows) {
            std::vector<int> deps;
            deps.reserve(table.n);
            std::vector<int> pattern = row;
            for (int i = 0; i < table.n; ++i) {
                int saved = pattern[i];
                pattern[i] = PartialBehavior::hole_marker;
                auto [it, inserted] = ids.emplace(pattern, problem.variable_count());
                if (inserted)
                    problem.variables.push_back(PartialBehavior{pattern, i});
                deps.push_back(it->second);
                pattern[i] = saved;
            }
            problem.dependence.push_back(std::move(deps));
        }

        problem.targets.assign(table.rows.size(), Rational(0));
        return problem;
    }

    // Human- and JSON-facing form of a variable, e.g. ("?", "0", "1").
    inline std::vector<std::string> pattern_labels(const AssignmentProblem & problem, int variable)
    {
        const auto & partial = problem.variables.at(variable);
        std::vector<std::string> out;
        out.reserve(partial.values.size());
        for (int value : partial.values)
            out.push_back(value == PartialBehavior::hole_marker ? "?" : problem.table.space->label(value));
        return out;
    }

    inline std::string pattern_string(const AssignmentProblem & problem, int variable)
    {
        std::string out = "(";
        bool first = true;
        for (const auto & piece : pattern_labels(problem, variable)) {
            if (! first)
                out += ",";
            out += piece;
            first = false;
        }
        return out + ")";
    }

    inline void require_total(const AssignmentProblem & problem, const LearnerAssignment & learner)
    {
        if (static_cast<int>(learner.choice.size()) != problem.variable_count())
            throw Error("learner assigns " + std::to_string(learner.choice.size()) + " variables, problem has " +
                std::to_string(problem.variable_count()));
        for (int v = 0; v < problem.variable_count(); ++v) {
            int label = learner.choice[v];
            if (label == LearnerAssignment::unassigned)
                throw Error("learner leaves variable " + pattern_string(problem, v) + " unassigned");
            if (label < 0 || label >= problem.table.space->size())
                throw Error("learner assigns variable " + pattern_string(problem, v) + " an unknown label index " +
                    std::to_string(label));
        }
    }

    struct Evaluation
    {
        std::vector<Rational> per_row;
        Rational worst;
        int worst_row = 0;
    };

    // Per-row error (1/n) * sum_i loss(row[i], choice(dependence[r][i])), and
    // the worst row. Exact rationals throughout.
    inline Evaluation evaluate(const AssignmentProblem & problem, const LearnerAssignment & learner)
    {
        require_total(problem, learner);
        const auto & space = *problem.table.space;
        const int n = problem.n();

        Evaluation result;
        result.per_row.reserve(problem.row_count());
        for (int r = 0; r < problem.row_count(); ++r) {
            Rational sum = 0;
            for (int i = 0; i < n; ++i)
                sum += space.loss(problem.table.rows[r][i], learner.choice[problem.dependence[r][i]]);
            sum /= n;
            if (r == 0 || sum > result.worst) {
                result.worst = sum;
                result.worst_row = r;
            }
            result.per_row.push_back(std::move(sum));
        }
        return result;
    }

    // A nonnegative per-coordinate error budget summing exactly to total.
    struct Apportionment
    {
        Rational total;
        std::vector<Rational> entries;
    };

    inline void require_valid(const Apportionment & apportionment, int n)
    {
        if (static_cast<int>(apportionment.entries.size()) != n)
            throw Error("apportionment has " + std::to_string(apportionment.entries.size()) +
                " entries, expected " + std::to_string(n));
        Rational sum = 0;
        for (const auto & entry : apportionment.entries) {
            if (entry < 0)
                throw Error("apportionment entry is negative");
            sum += entry;
        }
        if (sum != apportionment.total)
            throw Error("apportionment entries sum to " + format_rational(sum) + ", not " +
                format_rational(apportionment.total));
    }

    struct ApportionedReport
    {
        bool satisfied = true;
        std::vector<std::vector<bool>> coordinate_ok; // [row][coordinate]
        std::vector<bool> row_ok;
    };

    // Checks, per row and coordinate, that (1/n) * loss(row[i], choice) stays
    // within the row's apportionment entry.
    inline ApportionedReport evaluate_apportioned(
        const AssignmentProblem & problem,
        const LearnerAssignment & learner,
        const std::vector<Apportionment> & apportionments)
    {
        require_total(problem, learner);
        if (static_cast<int>(apportionments.size()) != problem.row_count())
            throw Error("need one apportionment per row: got " + std::to_string(apportionments.size()) +
                " for " + std::to_string(problem.row_count()) + " rows");
        const int n = problem.n();
        for (const auto & apportionment : apportionments)
            require_valid(apportionment, n);

        const auto & space = *problem.table.space;
        ApportionedReport report;
        for (int r = 0; r < problem.row_count(); ++r) {
            std::vector<bool> coords(n, true);
            bool row_fine = true;
            for (int i = 0; i < n; ++i) {
                Rational contribution = space.loss(problem.table.rows[r][i], learner.choice[problem.dependence[r][i]]);
                contribution /= n;
                if (contribution > apportionments[r].entries[i]) {
                    coords[i] = false;
                    row_fine = false;
                    report.satisfied = false;
                }
            }
            report.coordinate_ok.push_back(std::move(coords));
            report.row_ok.push_back(row_fine);
        }
        return report;
    }
}
