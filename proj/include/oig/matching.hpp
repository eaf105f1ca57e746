#pragma once

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oig/assignment.hpp"

namespace oig
{
    // Bipartite graph between variable nodes (left) and function nodes
    // (right); edges are adjacency lists from the left side.
    struct BipartiteGraph
    {
        int left = 0;
        int right = 0;
        std::vector<std::vector<int>> edges;
    };

    inline void require_valid(const BipartiteGraph & graph)
    {
        if (graph.left < 0 || graph.right < 0)
            throw Error("graph has negative node counts");
        if (static_cast<int>(graph.edges.size()) != graph.left)
            throw Error("graph has " + std::to_string(graph.edges.size()) + " adjacency lists for " +
                std::to_string(graph.left) + " left nodes");
        for (const auto & adjacent : graph.edges)
            for (int r : adjacent)
                if (r < 0 || r >= graph.right)
                    throw Error("edge endpoint " + std::to_string(r) + " out of range");
    }

    // The assignment system as a graph: variables on the left, rows on the
    // right. Every right node has degree exactly n (one variable per hole).
    inline BipartiteGraph to_graph(const AssignmentProblem & problem)
    {
        BipartiteGraph graph;
        graph.left = problem.variable_count();
        graph.right = problem.row_count();
        graph.edges.resize(graph.left);
        for (int r = 0; r < problem.row_count(); ++r)
            for (int variable : problem.dependence[r])
                graph.edges[variable].push_back(r);
        for (auto & adjacent : graph.edges)
            std::sort(adjacent.begin(), adjacent.end());
        return graph;
    }

    struct MatchingResult
    {
        bool matched = false;
        std::vector<int> matching;    // right node -> left partner, -1 when uncovered
        std::vector<int> certificate; // right subset with |N| < |subset| when not matched
    };

    struct DeficiencyResult
    {
        int value = 0;
        std::vector<int> witness;
    };

    namespace detail
    {
        struct MatchingCore
        {
            std::vector<int> match_left;  // left -> right, -1 free
            std::vector<int> match_right; // right -> left, -1 free
            int uncovered = 0;
        };

        // Hopcroft-Karp layering, matching the right side into the left.
        inline MatchingCore max_matching(const BipartiteGraph & graph)
        {
            require_valid(graph);
            std::vector<std::vector<int>> right_adj(graph.right);
            for (int l = 0; l < graph.left; ++l) {
                std::vector<int> adjacent = graph.edges[l];
                std::sort(adjacent.begin(), adjacent.end());
                adjacent.erase(std::unique(adjacent.begin(), adjacent.end()), adjacent.end());
                for (int r : adjacent)
                    right_adj[r].push_back(l);
            }

            MatchingCore core;
            core.match_left.assign(graph.left, -1);
            core.match_right.assign(graph.right, -1);

            constexpr int infinity = -2;
            std::vector<int> layer(graph.right);

            auto bfs = [&]() {
                std::queue<int> frontier;
                for (int r = 0; r < graph.right; ++r) {
                    if (core.match_right[r] == -1) {
                        layer[r] = 0;
                        frontier.push(r);
                    }
                    else
                        layer[r] = infinity;
                }
                bool found_free_left = false;
                while (! frontier.empty()) {
                    int r = frontier.front();
                    frontier.pop();
                    for (int l : right_adj[r]) {
                        int partner = core.match_left[l];
                        if (partner == -1)
                            found_free_left = true;
                        else if (layer[partner] == infinity) {
                            layer[partner] = layer[r] + 1;
                            frontier.push(partner);
                        }
                    }
                }
                return found_free_left;
            };

            std::function<bool(int)> dfs = [&](int r) {
                for (int l : right_adj[r]) {
                    int partner = core.match_left[l];
                    if (partner == -1 || (layer[partner] == layer[r] + 1 && dfs(partner))) {
                        core.match_left[l] = r;
                        core.match_right[r] = l;
                        return true;
                    }
                }
                layer[r] = infinity;
                return false;
            };

            while (bfs())
                for (int r = 0; r < graph.right; ++r)
                    if (core.match_right[r] == -1 && layer[r] == 0)
                        dfs(r);

            for (int r = 0; r < graph.right; ++r)
                if (core.match_right[r] == -1)
                    ++core.uncovered;
            return core;
        }

        // Right nodes reachable from the uncovered ones by alternating paths
        // (any edge rightward, matching edges leftward). This set Z satisfies
        // |N(Z)| = |Z| - uncovered, so it maximizes |R'| - |N(R')|.
        inline std::vector<int> alternating_witness(const BipartiteGraph & graph, const MatchingCore & core)
        {
            std::vector<std::vector<int>> right_adj(graph.right);
            for (int l = 0; l < graph.left; ++l)
                for (int r : graph.edges[l])
                    right_adj[r].push_back(l);

            std::vector<bool> seen_right(graph.right, false), seen_left(graph.left, false);
            std::queue<int> frontier;
            for (int r = 0; r < graph.right; ++r)
                if (core.match_right[r] == -1) {
                    seen_right[r] = true;
                    frontier.push(r);
                }
            while (! frontier.empty()) {
                int r = frontier.front();
                frontier.pop();
                for (int l : right_adj[r]) {
                    if (seen_left[l])
                        continue;
                    seen_left[l] = true;
                    int partner = core.match_left[l];
                    if (partner != -1 && ! seen_right[partner]) {
                        seen_right[partner] = true;
                        frontier.push(partner);
                    }
                }
            }

            std::vector<int> witness;
            for (int r = 0; r < graph.right; ++r)
                if (seen_right[r])
                    witness.push_back(r);
            return witness;
        }

        inline int neighborhood_size(const BipartiteGraph & graph, const std::vector<int> & rights)
        {
            std::set<int> rows(rights.begin(), rights.end());
            std::set<int> lefts;
            for (int l = 0; l < graph.left; ++l)
                for (int r : graph.edges[l])
                    if (rows.count(r)) {
                        lefts.insert(l);
                        break;
                    }
            return static_cast<int>(lefts.size());
        }
    }

    // A matching covering every right node, or a Hall-violating right subset.
    inline MatchingResult r_matching(const BipartiteGraph & graph)
    {
        auto core = detail::max_matching(graph);
        MatchingResult result;
        result.matching = core.match_right;
        result.matched = (core.uncovered == 0);
        if (! result.matched) {
            result.certificate = detail::alternating_witness(graph, core);
            if (detail::neighborhood_size(graph, result.certificate) >= static_cast<int>(result.certificate.size()))
                throw Error("internal error: matching certificate does not violate the neighborhood condition");
        }
        return result;
    }

    // max over right subsets R' of |R'| - |N(R')|, with a witnessing subset.
    inline DeficiencyResult deficiency(const BipartiteGraph & graph)
    {
        auto core = detail::max_matching(graph);
        DeficiencyResult result;
        result.value = core.uncovered;
        if (core.uncovered > 0) {
            result.witness = detail::alternating_witness(graph, core);
            int neighbors = detail::neighborhood_size(graph, result.witness);
            if (static_cast<int>(result.witness.size()) - neighbors != core.uncovered)
                throw Error("internal error: deficiency witness does not attain the deficiency");
        }
        return result;
    }

    struct PruneReport
    {
        BipartiteGraph graph;
        std::vector<int> removed_left;
        std::vector<std::pair<int, std::vector<int>>> kept_blocks; // left node -> its blocking set
    };

    // Degree pruning, run literally: a blocking set is a right subset R' with
    // |N(R')| = |R'|. Left nodes covered by no blocking set are removed one
    // per round (highest index first, recomputing each round); every survivor
    // then keeps only its edges into the first blocking set containing it,
    // ordered by (size, lexicographic). Matchability is preserved throughout.
    inline PruneReport prune_degrees(const BipartiteGraph & graph, int max_right = 16)
    {
        require_valid(graph);
        if (graph.right > max_right)
            throw Error("blocking-set enumeration supports at most " + std::to_string(max_right) +
                " right nodes, graph has " + std::to_string(graph.right));
        if (deficiency(graph).value != 0)
            throw Error("input graph deficient: no right-covering matching exists");

        const int rights = graph.right;
        std::vector<std::set<int>> adjacent(graph.left);
        for (int l = 0; l < graph.left; ++l)
            adjacent[l] = std::set<int>(graph.edges[l].begin(), graph.edges[l].end());
        std::vector<bool> alive(graph.left, true), trimmed(graph.left, false);

        // Masks in (popcount, value) order, so "first blocking set" means
        // smallest, then lexicographically least row subset.
        std::vector<unsigned> mask_order;
        for (unsigned mask = 1; mask < (1u << rights); ++mask)
            mask_order.push_back(mask);
        std::stable_sort(mask_order.begin(), mask_order.end(),
            [](unsigned a, unsigned b) { return __builtin_popcount(a) < __builtin_popcount(b); });

        auto neighbors_of_mask = [&](unsigned mask) {
            std::vector<int> lefts;
            for (int l = 0; l < graph.left; ++l) {
                if (! alive[l])
                    continue;
                for (int r : adjacent[l])
                    if (mask & (1u << r)) {
                        lefts.push_back(l);
                        break;
                    }
            }
            return lefts;
        };

        auto covered_lefts = [&]() {
            std::vector<bool> covered(graph.left, false);
            for (unsigned mask : mask_order) {
                auto lefts = neighbors_of_mask(mask);
                if (static_cast<int>(lefts.size()) == __builtin_popcount(mask))
                    for (int l : lefts)
                        covered[l] = true;
            }
            return covered;
        };

        PruneReport report;
        for (;;) {
            auto covered = covered_lefts();
            int candidate = -1;
            for (int l = 0; l < graph.left; ++l)
                if (alive[l] && ! covered[l])
                    candidate = l;
            if (candidate >= 0) {
                alive[candidate] = false;
                adjacent[candidate].clear();
                report.removed_left.push_back(candidate);
                continue;
            }

            int untrimmed = -1;
            for (int l = 0; l < graph.left && untrimmed == -1; ++l)
                if (alive[l] && ! trimmed[l])
                    untrimmed = l;
            if (untrimmed == -1)
                break;

            bool assigned = false;
            for (unsigned mask : mask_order) {
                auto lefts = neighbors_of_mask(mask);
                if (static_cast<int>(lefts.size()) != __builtin_popcount(mask))
                    continue;
                if (std::find(lefts.begin(), lefts.end(), untrimmed) == lefts.end())
                    continue;
                std::set<int> keep;
                std::vector<int> block;
                for (int r = 0; r < rights; ++r)
                    if (mask & (1u << r)) {
                        block.push_back(r);
                        if (adjacent[untrimmed].count(r))
                            keep.insert(r);
                    }
                adjacent[untrimmed] = std::move(keep);
                trimmed[untrimmed] = true;
                report.kept_blocks.emplace_back(untrimmed, std::move(block));
                assigned = true;
                break;
            }
            if (! assigned)
                throw Error("internal error: surviving left node lies in no blocking set");
        }

        std::sort(report.removed_left.begin(), report.removed_left.end());
        report.graph.left = graph.left;
        report.graph.right = graph.right;
        report.graph.edges.resize(graph.left);
        for (int l = 0; l < graph.left; ++l)
            report.graph.edges[l] = std::vector<int>(adjacent[l].begin(), adjacent[l].end());
        if (deficiency(report.graph).value != 0)
            throw Error("internal error: pruning broke matchability");
        return report;
    }

    struct IndegreeFeasibility
    {
        bool feasible = false;
        std::vector<int> variable_to_row; // -1 when the variable is unused
        std::vector<int> witness_rows;    // infeasible: rows whose total demand exceeds |N|
        int witness_neighbors = 0;
    };

    // Can each variable be assigned to at most one dependent row so that every
    // row r receives at least demands[r] assignments? This is the d-fold
    // splitting construction run as a demand flow instead of literal copies.
    inline IndegreeFeasibility feasible_indegrees(const AssignmentProblem & problem, const std::vector<int> & demands)
    {
        if (static_cast<int>(demands.size()) != problem.row_count())
            throw Error("need one demand per row");
        for (int r = 0; r < problem.row_count(); ++r)
            if (demands[r] < 0 || demands[r] > problem.n())
                throw Error("demand for row " + std::to_string(r) + " out of range [0, n]");

        IndegreeFeasibility result;
        result.variable_to_row.assign(problem.variable_count(), -1);
        std::vector<bool> visited(problem.variable_count());

        std::function<bool(int)> augment = [&](int row) {
            for (int variable : problem.dependence[row]) {
                if (visited[variable])
                    continue;
                visited[variable] = true;
                if (result.variable_to_row[variable] == -1 || augment(result.variable_to_row[variable])) {
                    result.variable_to_row[variable] = row;
                    return true;
                }
            }
            return false;
        };

        for (int row = 0; row < problem.row_count(); ++row) {
            for (int unit = 0; unit < demands[row]; ++unit) {
                std::fill(visited.begin(), visited.end(), false);
                if (augment(row))
                    continue;

                // Alternating closure from the starved row: every adjacent
                // variable is taken by a row inside the closure, so the rows
                // reached demand more than their joint neighborhood can give.
                std::vector<bool> seen_row(problem.row_count(), false), seen_var(problem.variable_count(), false);
                std::queue<int> frontier;
                seen_row[row] = true;
                frontier.push(row);
                int neighbors = 0;
                while (! frontier.empty()) {
                    int z = frontier.front();
                    frontier.pop();
                    for (int variable : problem.dependence[z]) {
                        if (seen_var[variable])
                            continue;
                        seen_var[variable] = true;
                        ++neighbors;
                        int owner = result.variable_to_row[variable];
                        if (owner == -1)
                            throw Error("internal error: free variable adjacent to a starved row");
                        if (! seen_row[owner]) {
                            seen_row[owner] = true;
                            frontier.push(owner);
                        }
                    }
                }
                result.feasible = false;
                result.witness_neighbors = neighbors;
                long total_demand = 0;
                for (int r = 0; r < problem.row_count(); ++r)
                    if (seen_row[r]) {
                        result.witness_rows.push_back(r);
                        total_demand += demands[r];
                    }
                if (total_demand <= neighbors)
                    throw Error("internal error: infeasibility witness does not exceed its neighborhood");
                return result;
            }
        }
        result.feasible = true;
        return result;
    }

    // Demand from an error target: d = floor(n * (1 - epsilon)), clamped.
    inline int demand_floor(int n, const Rational & epsilon)
    {
        Rational value = Rational(n) * (Rational(1) - epsilon);
        BigInt num = numerator(value), den = denominator(value);
        BigInt quotient = num / den;
        if (num < 0 && quotient * den != num)
            --quotient;
        if (quotient < 0)
            return 0;
        if (quotient > n)
            return n;
        return quotient.convert_to<int>();
    }

    // Is worst-case error <= epsilon achievable? (Uniform target.)
    inline IndegreeFeasibility feasible_error(const AssignmentProblem & problem, const Rational & epsilon)
    {
        std::vector<int> demands(problem.row_count(), demand_floor(problem.n(), epsilon));
        return feasible_indegrees(problem, demands);
    }

    // Same, with the problem's per-row targets as the error bounds.
    inline IndegreeFeasibility feasible_targets(const AssignmentProblem & problem)
    {
        std::vector<int> demands(problem.row_count());
        for (int r = 0; r < problem.row_count(); ++r)
            demands[r] = demand_floor(problem.n(), problem.targets[r]);
        return feasible_indegrees(problem, demands);
    }

    struct ZeroOneSolution
    {
        Rational epsilon;
        int d_star = 0;
        LearnerAssignment learner;
        std::vector<int> witness_rows; // why d* + 1 is infeasible; empty when d* = n
        int witness_neighbors = 0;
    };

    // Exact optimal error for zero-one losses: the largest d such that every
    // row can receive indegree >= d gives epsilon* = 1 - d/n. The returned
    // learner follows its assignment (unused variables get the first label)
    // and realizes epsilon* exactly.
    inline ZeroOneSolution optimal_zero_one(const AssignmentProblem & problem)
    {
        if (problem.table.space->kind() != LossKind::zero_one)
            throw Error("optimal_zero_one requires a zero-one label space");

        const int n = problem.n();
        auto feasible_at = [&](int d) {
            return feasible_indegrees(problem, std::vector<int>(problem.row_count(), d));
        };

        // Feasibility is monotone in d, so binary search applies; the final
        // probes below re-assert both endpoints.
        int lo = 0, hi = n + 1;
        while (hi - lo > 1) {
            int mid = lo + (hi - lo) / 2;
            if (feasible_at(mid).feasible)
                lo = mid;
            else
                hi = mid;
        }

        auto at_best = feasible_at(lo);
        if (! at_best.feasible)
            throw Error("internal error: indegree feasibility is not monotone in d");

        ZeroOneSolution solution;
        solution.d_star = lo;
        solution.epsilon = Rational(n - lo, n);
        if (lo < n) {
            auto beyond = feasible_at(lo + 1);
            if (beyond.feasible)
                throw Error("internal error: indegree feasibility is not monotone in d");
            solution.witness_rows = beyond.witness_rows;
            solution.witness_neighbors = beyond.witness_neighbors;
        }

        solution.learner.choice.assign(problem.variable_count(), 0);
        for (int v = 0; v < problem.variable_count(); ++v) {
            int row = at_best.variable_to_row[v];
            if (row != -1)
                solution.learner.choice[v] = problem.table.rows[row][problem.variables[v].hole];
        }

        if (evaluate(problem, solution.learner).worst != solution.epsilon)
            throw Error("internal error: matching learner does not realize the optimum");
        return solution;
    }
}
