#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oig/agnostic.hpp"
#include "oig/apportionment.hpp"
#include "oig/counterexample.hpp"
#include "oig/experiments.hpp"
#include "oig/matching.hpp"
#include "oig/version.hpp"

namespace oig
{
    using Json = nlohmann::json;

    // Rationals travel as canonical strings ("p" or "p/q", reduced); plain
    // JSON integers are accepted on input. Floats are not, to keep round
    // trips bit-exact.
    inline Json rational_to_json(const Rational & value)
    {
        return format_rational(value);
    }

    inline Rational rational_from_json(const Json & value)
    {
        if (value.is_number_integer())
            return Rational(value.get<long long>());
        if (value.is_number_unsigned())
            return Rational(value.get<unsigned long long>());
        if (value.is_string())
            return parse_rational(value.get<std::string>());
        throw Error("expected a rational as an integer or a string like \"2/3\"");
    }

    namespace detail
    {
        inline const Json & field(const Json & object, const char * name)
        {
            if (! object.is_object() || ! object.contains(name))
                throw Error(std::string("missing field \"") + name + "\"");
            return object.at(name);
        }

        inline Json load_json_file(const std::filesystem::path & path)
        {
            std::ifstream in(path);
            if (! in)
                throw Error("cannot open " + path.string());
            Json parsed;
            try {
                in >> parsed;
            }
            catch (const Json::exception & e) {
                throw Error("cannot parse " + path.string() + ": " + e.what());
            }
            return parsed;
        }
    }

    inline Json space_to_json(const LabelSpace & space)
    {
        Json loss = Json::array();
        for (int a = 0; a < space.size(); ++a) {
            Json row = Json::array();
            for (int b = 0; b < space.size(); ++b)
                row.push_back(rational_to_json(space.loss(a, b)));
            loss.push_back(std::move(row));
        }
        return Json{{"labels", space.labels()}, {"kind", to_string(space.kind())}, {"loss", std::move(loss)}};
    }

    inline LabelSpacePtr space_from_json(const Json & object)
    {
        auto labels = detail::field(object, "labels").get<std::vector<std::string>>();
        auto kind = loss_kind_from_string(detail::field(object, "kind").get<std::string>());
        const auto & loss_json = detail::field(object, "loss");
        if (! loss_json.is_array())
            throw Error("\"loss\" must be an array of arrays");
        std::vector<std::vector<Rational>> loss;
        for (const auto & row_json : loss_json) {
            std::vector<Rational> row;
            for (const auto & cell : row_json)
                row.push_back(rational_from_json(cell));
            loss.push_back(std::move(row));
        }
        return LabelSpace::make(std::move(labels), std::move(loss), kind);
    }

    inline Json table_to_json(const BehaviorTable & table)
    {
        Json rows = Json::array();
        for (const auto & row : table.rows) {
            Json named = Json::array();
            for (int value : row)
                named.push_back(table.space->label(value));
            rows.push_back(std::move(named));
        }
        return Json{{"space", space_to_json(*table.space)}, {"n", table.n}, {"rows", std::move(rows)}};
    }

    // The "space" member may be the space object itself or {"file": path},
    // resolved against base_dir.
    inline BehaviorTable table_from_json(const Json & object, const std::filesystem::path & base_dir = ".")
    {
        const auto & space_json = detail::field(object, "space");
        LabelSpacePtr space;
        if (space_json.is_object() && space_json.contains("file")) {
            std::filesystem::path path = space_json.at("file").get<std::string>();
            if (path.is_relative())
                path = base_dir / path;
            space = space_from_json(detail::load_json_file(path));
        }
        else
            space = space_from_json(space_json);

        int n = detail::field(object, "n").get<int>();
        const auto & rows_json = detail::field(object, "rows");
        if (! rows_json.is_array())
            throw Error("\"rows\" must be an array of rows");

        std::vector<std::vector<int>> rows;
        for (const auto & row_json : rows_json) {
            std::vector<int> row;
            for (const auto & cell : row_json) {
                if (cell.is_string())
                    row.push_back(space->index_of(cell.get<std::string>()));
                else if (cell.is_number_integer() || cell.is_number_unsigned())
                    row.push_back(cell.get<int>());
                else
                    throw Error("row entries must be label names or indices");
            }
            rows.push_back(std::move(row));
        }
        return make_table(std::move(space), n, rows);
    }

    // Graphs travel as edge pairs; in memory they are left adjacency lists.
    inline Json graph_to_json(const BipartiteGraph & graph)
    {
        Json edges = Json::array();
        for (int l = 0; l < graph.left; ++l)
            for (int r : graph.edges[l])
                edges.push_back(Json::array({l, r}));
        return Json{{"left", graph.left}, {"right", graph.right}, {"edges", std::move(edges)}};
    }

    inline BipartiteGraph graph_from_json(const Json & object)
    {
        BipartiteGraph graph;
        graph.left = detail::field(object, "left").get<int>();
        graph.right = detail::field(object, "right").get<int>();
        if (graph.left < 0)
            throw Error("graph has negative node counts");
        graph.edges.resize(graph.left);
        for (const auto & edge : detail::field(object, "edges")) {
            if (! edge.is_array() || edge.size() != 2)
                throw Error("edges must be [left, right] pairs");
            int l = edge.at(0).get<int>();
            int r = edge.at(1).get<int>();
            if (l < 0 || l >= graph.left)
                throw Error("edge endpoint " + std::to_string(l) + " out of range");
            graph.edges[l].push_back(r);
        }
        for (auto & adjacent : graph.edges) {
            std::sort(adjacent.begin(), adjacent.end());
            adjacent.erase(std::unique(adjacent.begin(), adjacent.end()), adjacent.end());
        }
        require_valid(graph);
        return graph;
    }

    inline Json pattern_to_json(const AssignmentProblem & problem, int variable)
    {
        Json pattern = Json::array();
        const auto & partial = problem.variables[variable];
        for (int i = 0; i < problem.n(); ++i) {
            if (i == partial.hole)
                pattern.push_back("?");
            else
                pattern.push_back(problem.table.space->label(partial.values[i]));
        }
        return pattern;
    }

    inline Json learner_to_json(const AssignmentProblem & problem, const LearnerAssignment & learner)
    {
        Json assignments = Json::array();
        for (int v = 0; v < problem.variable_count(); ++v) {
            Json entry{{"pattern", pattern_to_json(problem, v)}};
            if (learner.choice[v] == LearnerAssignment::unassigned)
                entry["label"] = nullptr;
            else
                entry["label"] = problem.table.space->label(learner.choice[v]);
            assignments.push_back(std::move(entry));
        }
        return Json{{"assignments", std::move(assignments)}};
    }

    inline LearnerAssignment learner_from_json(const AssignmentProblem & problem, const Json & object)
    {
        LearnerAssignment learner;
        learner.choice.assign(problem.variable_count(), LearnerAssignment::unassigned);
        for (const auto & entry : detail::field(object, "assignments")) {
            const auto & pattern_json = detail::field(entry, "pattern");
            if (static_cast<int>(pattern_json.size()) != problem.n())
                throw Error("pattern length must match n");
            PartialBehavior partial;
            partial.hole = -1;
            partial.values.assign(problem.n(), 0);
            for (int i = 0; i < problem.n(); ++i) {
                std::string name = pattern_json.at(i).get<std::string>();
                if (name == "?") {
                    if (partial.hole >= 0)
                        throw Error("pattern has more than one hole");
                    partial.hole = i;
                    partial.values[i] = PartialBehavior::hole_marker;
                }
                else
                    partial.values[i] = problem.table.space->index_of(name);
            }
            if (partial.hole < 0)
                throw Error("pattern has no hole");

            int variable = -1;
            for (int v = 0; v < problem.variable_count(); ++v)
                if (problem.variables[v].hole == partial.hole && problem.variables[v].values == partial.values) {
                    variable = v;
                    break;
                }
            if (variable < 0)
                throw Error("pattern does not occur in the table");
            const auto & label_json = detail::field(entry, "label");
            if (! label_json.is_null())
                learner.choice[variable] = problem.table.space->index_of(label_json.get<std::string>());
        }
        return learner;
    }

    inline Json zero_one_to_json(const AssignmentProblem & problem, const ZeroOneSolution & solution)
    {
        Json certificates{{"witness_rows", solution.witness_rows}, {"witness_neighbors", solution.witness_neighbors}};
        return Json{
            {"epsilon", rational_to_json(solution.epsilon)},
            {"d_star", solution.d_star},
            {"learner", learner_to_json(problem, solution.learner)},
            {"certificates", std::move(certificates)},
        };
    }

    inline Json evaluation_to_json(const Evaluation & evaluation)
    {
        Json per_row = Json::array();
        for (const auto & value : evaluation.per_row)
            per_row.push_back(rational_to_json(value));
        return Json{
            {"per_row", std::move(per_row)},
            {"worst", rational_to_json(evaluation.worst)},
            {"worst_row", evaluation.worst_row},
        };
    }

    inline Json minimax_to_json(const AssignmentProblem & problem, const MinimaxResult & result)
    {
        return Json{
            {"value", rational_to_json(result.value)},
            {"exact", result.exact},
            {"evaluations", result.evaluations},
            {"learner", learner_to_json(problem, result.learner)},
        };
    }

    inline Json agnostic_to_json(const AgnosticProblem & problem, const AgnosticResult & result)
    {
        Json patterns = Json::array();
        for (int index = 0; index < static_cast<int>(result.pattern_choice.size()); ++index) {
            auto partial = pattern_of_index(problem.n, problem.label_count(), index);
            Json pattern = Json::array();
            for (int i = 0; i < problem.n; ++i)
                pattern.push_back(i == partial.hole ? "?" : problem.space->label(partial.values[i]));
            patterns.push_back(Json{
                {"pattern", std::move(pattern)},
                {"label", problem.space->label(result.pattern_choice[index])},
            });
        }
        return Json{
            {"value", rational_to_json(result.value)},
            {"exact", result.exact},
            {"evaluations", result.evaluations},
            {"assignments", std::move(patterns)},
        };
    }

    inline Json factor_two_to_json(const AssignmentProblem & problem, const FactorTwoReport & report)
    {
        Json per_row = Json::array();
        for (const auto & row : report.per_row)
            per_row.push_back(Json{
                {"error", rational_to_json(row.error)},
                {"slack", rational_to_json(row.slack)},
            });
        return Json{
            {"epsilon", rational_to_json(report.epsilon)},
            {"delta", rational_to_json(report.delta)},
            {"realized", rational_to_json(report.realized)},
            {"bound", rational_to_json(report.bound)},
            {"holds", report.holds},
            {"per_row", std::move(per_row)},
            {"learner", learner_to_json(problem, report.learner)},
            {"witness", learner_to_json(problem, report.witness)},
            {"witness_exact", report.witness_exact},
        };
    }

    inline Json validation_to_json(const ValidationReport & report)
    {
        return Json{
            {"ok", report.ok},
            {"axiom", report.axiom},
            {"indices", report.indices},
            {"message", report.message},
        };
    }

    inline Json prune_to_json(const PruneReport & report)
    {
        Json kept = Json::array();
        for (const auto & [left, rows] : report.kept_blocks)
            kept.push_back(Json{{"left", left}, {"rows", rows}});
        return Json{
            {"graph", graph_to_json(report.graph)},
            {"removed_left", report.removed_left},
            {"kept_blocks", std::move(kept)},
        };
    }

    inline Json sweep_to_json(const SweepReport & report)
    {
        Json cells = Json::array();
        for (const auto & cell : report.cells)
            cells.push_back(Json{
                {"columns", cell.columns},
                {"full_xi", rational_to_json(cell.full_xi)},
                {"max_subset_xi", rational_to_json(cell.max_subset_xi)},
                {"proper_max_xi", rational_to_json(cell.proper_max_xi)},
                {"ratio", rational_to_json(cell.ratio)},
                {"projected_rows", cell.projected_rows},
                {"solves", cell.solves},
                {"complete", cell.complete},
            });
        return Json{
            {"version", version},
            {"kind", to_string(report.kind)},
            {"headline_full_xi", rational_to_json(report.headline_full_xi)},
            {"headline_ratio", rational_to_json(report.headline_ratio)},
            {"cells", std::move(cells)},
            {"solves", report.solves},
            {"truncated", report.truncated},
            {"monotone_ok", report.monotone_ok},
            {"solver", report.solver},
        };
    }

    inline Json pac_to_json(const PacReport & report)
    {
        Json means = Json::array();
        for (const auto & mean : report.row_means)
            means.push_back(rational_to_json(mean));
        return Json{
            {"version", version},
            {"n", report.n},
            {"trials", report.trials},
            {"seed", report.seed},
            {"xi_n", rational_to_json(report.xi_n)},
            {"estimate", rational_to_json(report.estimate)},
            {"worst_row", report.worst_row},
            {"standard_error", report.standard_error},
            {"bound", report.bound},
            {"holds", report.holds},
            {"row_means", std::move(means)},
            {"row_stderr", report.row_stderr},
            {"distinct_multisets", report.distinct_multisets},
        };
    }

    inline Json curve_to_json(const CurveReport & report)
    {
        Json xi = Json::array();
        for (const auto & value : report.xi)
            xi.push_back(rational_to_json(value));
        Json points = Json::array();
        for (const auto & point : report.points) {
            Json entry{{"epsilon", rational_to_json(point.epsilon)}, {"reachable", point.reachable}};
            if (point.reachable)
                entry["m"] = point.m;
            else
                entry["m"] = nullptr;
            points.push_back(std::move(entry));
        }
        return Json{
            {"version", version},
            {"family", report.family},
            {"n_min", report.n_min},
            {"n_max", report.n_max},
            {"xi", std::move(xi)},
            {"points", std::move(points)},
            {"solver", report.solver},
        };
    }

    inline Json gap_search_to_json(const GapSearchReport & report)
    {
        Json top = Json::array();
        for (const auto & instance : report.top) {
            Json entry{
                {"stream", instance.stream},
                {"n", instance.n},
                {"labels", instance.labels},
                {"rows", instance.rows},
                {"realizable", rational_to_json(instance.realizable)},
                {"agnostic", rational_to_json(instance.agnostic)},
            };
            if (instance.finite_ratio)
                entry["ratio"] = rational_to_json(instance.ratio);
            else
                entry["ratio"] = "infinite";
            top.push_back(std::move(entry));
        }
        return Json{
            {"version", version},
            {"seed", report.seed},
            {"instances", report.instances},
            {"top", std::move(top)},
            {"infinite_count", report.infinite_count},
            {"note", report.note},
        };
    }

    inline Json counterexample_to_json(const CounterexampleSpec & spec, const CounterexampleInstance & instance)
    {
        return Json{
            {"version", version},
            {"m", spec.m},
            {"include_full_cover", spec.include_full_cover},
            {"k", spec.k},
            {"table", table_to_json(instance.table)},
        };
    }

    struct SolveRequest
    {
        BehaviorTable table;
        std::string mode = "realizable";
        std::string solver = "auto";
        std::uint64_t seed = 1;
        std::uint64_t budget = SolveOptions{}.budget;
    };

    // The "table" member may be the table object itself or {"file": path},
    // resolved against base_dir; a referenced table resolves its own space
    // reference against its location.
    inline SolveRequest parse_solve_request(const Json & object, const std::filesystem::path & base_dir = ".")
    {
        const auto & table_json = detail::field(object, "table");
        BehaviorTable table = [&] {
            if (table_json.is_object() && table_json.contains("file") && ! table_json.contains("rows")) {
                std::filesystem::path path = table_json.at("file").get<std::string>();
                if (path.is_relative())
                    path = base_dir / path;
                return table_from_json(detail::load_json_file(path), path.parent_path());
            }
            return table_from_json(table_json, base_dir);
        }();
        SolveRequest request{std::move(table)};
        if (object.contains("mode"))
            request.mode = object.at("mode").get<std::string>();
        if (request.mode != "realizable" && request.mode != "agnostic")
            throw Error("mode must be \"realizable\" or \"agnostic\"");
        if (object.contains("solver"))
            request.solver = object.at("solver").get<std::string>();
        if (request.solver != "auto" && request.solver != "matching" && request.solver != "brute" &&
            request.solver != "local")
            throw Error("solver must be \"auto\", \"matching\", \"brute\", or \"local\"");
        if (object.contains("seed"))
            request.seed = object.at("seed").get<std::uint64_t>();
        if (object.contains("budget"))
            request.budget = object.at("budget").get<std::uint64_t>();
        return request;
    }
}
