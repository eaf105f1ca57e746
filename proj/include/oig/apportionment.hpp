#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "oig/minimax.hpp"

namespace oig
{
    // Splits a per-row error budget of `alpha` across the coordinates of each
    // row: the coordinate's share is its loss against the witness assignment,
    // plus an equal split of the row's leftover slack. Sums are exact.
    inline std::vector<Apportionment> derive_apportionments(
        const AssignmentProblem & problem, const LearnerAssignment & witness, const Rational & alpha)
    {
        require_total(problem, witness);
        auto evaluation = evaluate(problem, witness);
        const auto & space = *problem.table.space;
        const int n = problem.n();

        std::vector<Apportionment> result;
        result.reserve(problem.row_count());
        for (int r = 0; r < problem.row_count(); ++r) {
            if (evaluation.per_row[r] > alpha)
                throw Error("witness error " + format_rational(evaluation.per_row[r]) + " on row " +
                    std::to_string(r) + " exceeds the budget " + format_rational(alpha));
            Rational slack = (alpha - evaluation.per_row[r]) / n;
            Apportionment apportionment;
            apportionment.total = alpha;
            apportionment.entries.resize(n);
            for (int i = 0; i < n; ++i) {
                int witness_label = witness.choice[problem.dependence[r][i]];
                apportionment.entries[i] = Rational(space.loss(problem.table.rows[r][i], witness_label)) / n + slack;
            }
            require_valid(apportionment, n);
            result.push_back(std::move(apportionment));
        }
        return result;
    }

    // For each variable, picks the dependent row whose budget at the hole is
    // within the tolerance window of the minimum (ties by ascending row
    // index) and assigns that row's completion.
    //
    // The window is delta/(3n) on the normalized budgets, i.e. delta/3 on the
    // raw per-coordinate distances: the factor-two argument spends the
    // tolerance once per coordinate, so the per-coordinate window must absorb
    // the 1/n normalization for the row-level bound to come out to
    // 2*total + delta/3.
    inline LearnerAssignment two_factor_learner(
        const AssignmentProblem & problem, const std::vector<Apportionment> & apportionments, const Rational & delta)
    {
        if (static_cast<int>(apportionments.size()) != problem.row_count())
            throw Error("need one apportionment per row");
        if (delta < 0)
            throw Error("delta must be nonnegative");
        const int n = problem.n();
        for (const auto & apportionment : apportionments)
            require_valid(apportionment, n);

        Rational window = delta / (3 * n);
        LearnerAssignment learner;
        learner.choice.assign(problem.variable_count(), LearnerAssignment::unassigned);
        for (int variable = 0; variable < problem.variable_count(); ++variable) {
            int hole = problem.variables[variable].hole;
            Rational minimum;
            bool seen = false;
            for (int r = 0; r < problem.row_count(); ++r) {
                if (problem.dependence[r][hole] != variable)
                    continue;
                if (! seen || apportionments[r].entries[hole] < minimum) {
                    minimum = apportionments[r].entries[hole];
                    seen = true;
                }
            }
            if (! seen)
                throw Error("variable " + pattern_string(problem, variable) + " has no dependent row");
            for (int r = 0; r < problem.row_count(); ++r) {
                if (problem.dependence[r][hole] != variable)
                    continue;
                if (apportionments[r].entries[hole] <= minimum + window) {
                    learner.choice[variable] = problem.table.rows[r][hole];
                    break;
                }
            }
        }
        require_total(problem, learner);
        return learner;
    }

    struct PerRowFactor
    {
        Rational error;
        Rational slack; // bound - error
    };

    struct FactorTwoReport
    {
        Rational epsilon;
        Rational delta;
        Rational realized;
        Rational bound; // 2*epsilon + delta
        bool holds = false;
        std::vector<PerRowFactor> per_row;
        LearnerAssignment learner;
        LearnerAssignment witness;
        bool witness_exact = true;
    };

    struct FactorTwoOptions
    {
        SolveOptions solve;
        LocalSearchOptions local;
    };

    namespace detail
    {
        inline std::pair<MinimaxResult, bool> factor_two_witness(
            const AssignmentProblem & problem, const FactorTwoOptions & options)
        {
            try {
                return {brute_force_minimax(problem, options.solve), true};
            }
            catch (const BudgetError &) {
                return {local_search_minimax(problem, options.local), false};
            }
        }

        inline FactorTwoReport verify_factor_two_with_witness(
            const AssignmentProblem & problem,
            const LearnerAssignment & witness,
            bool witness_exact,
            const Rational & epsilon,
            const Rational & delta)
        {
            if (problem.table.space->kind() == LossKind::general)
                throw Error("the factor-two learner needs a metric loss");
            if (delta <= 0)
                throw Error("delta must be positive");
            if (epsilon < 0)
                throw Error("epsilon must be nonnegative");

            const auto & space = *problem.table.space;
            const int n = problem.n();
            Rational alpha = epsilon + delta / 3;
            auto apportionments = derive_apportionments(problem, witness, alpha);
            auto learner = two_factor_learner(problem, apportionments, delta);

            // The guarantee rests on one triangle step per variable: the label
            // taken from the chosen row stays within the combined budgets of
            // the chosen and every other dependent row.
            for (int variable = 0; variable < problem.variable_count(); ++variable) {
                int hole = problem.variables[variable].hole;
                int chosen = learner.choice[variable];
                Rational chosen_budget;
                bool found = false;
                for (int r = 0; r < problem.row_count(); ++r) {
                    if (problem.dependence[r][hole] != variable)
                        continue;
                    if (problem.table.rows[r][hole] == chosen && ! found) {
                        // the selection rule picks the first qualifying row,
                        // so take the least budget among rows completing to
                        // the chosen label
                        chosen_budget = apportionments[r].entries[hole];
                        found = true;
                    }
                    else if (problem.table.rows[r][hole] == chosen) {
                        chosen_budget = std::min(chosen_budget, apportionments[r].entries[hole]);
                    }
                }
                if (! found)
                    throw Error("learner assigned a label outside the completions of variable " +
                        pattern_string(problem, variable));
                for (int r = 0; r < problem.row_count(); ++r) {
                    if (problem.dependence[r][hole] != variable)
                        continue;
                    Rational allowed = (chosen_budget + apportionments[r].entries[hole]) * n;
                    if (Rational(space.loss(chosen, problem.table.rows[r][hole])) > allowed)
                        throw Error("triangle budget violated at variable " + pattern_string(problem, variable) +
                            " against row " + std::to_string(r));
                }
            }

            FactorTwoReport report;
            report.epsilon = epsilon;
            report.delta = delta;
            report.bound = 2 * epsilon + delta;
            report.learner = learner;
            report.witness = witness;
            report.witness_exact = witness_exact;

            auto evaluation = evaluate(problem, learner);
            report.realized = evaluation.worst;
            report.per_row.resize(problem.row_count());
            for (int r = 0; r < problem.row_count(); ++r) {
                report.per_row[r].error = evaluation.per_row[r];
                report.per_row[r].slack = report.bound - evaluation.per_row[r];
                if (evaluation.per_row[r] > report.bound)
                    throw Error("factor-two bound " + format_rational(report.bound) + " violated on row " +
                        std::to_string(r) + " with error " + format_rational(evaluation.per_row[r]));
            }
            report.holds = true;
            return report;
        }
    }

    // Checks the end-to-end guarantee: from any witness with worst-case error
    // at most epsilon, the apportionment learner realizes at most
    // 2*epsilon + delta. Violations throw; the returned report always holds.
    inline FactorTwoReport verify_factor_two(
        const AssignmentProblem & problem,
        const Rational & epsilon,
        const Rational & delta,
        const FactorTwoOptions & options = {})
    {
        auto [witness, exact] = detail::factor_two_witness(problem, options);
        return detail::verify_factor_two_with_witness(problem, witness.learner, exact, epsilon, delta);
    }

    // Variant that reads epsilon off the witness itself.
    inline FactorTwoReport verify_factor_two(
        const AssignmentProblem & problem, const Rational & delta, const FactorTwoOptions & options = {})
    {
        auto [witness, exact] = detail::factor_two_witness(problem, options);
        auto evaluation = evaluate(problem, witness.learner);
        return detail::verify_factor_two_with_witness(problem, witness.learner, exact, evaluation.worst, delta);
    }
}
