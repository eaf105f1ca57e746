// Command-line front end: exact and heuristic transductive-error solvers,
// instance generators, and the experiment harnesses, all emitting JSON
// reports. Exit code 0 means every asserted inequality held.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oig/json_io.hpp"
#include "oig/property_suites.hpp"

namespace
{
    std::uint64_t parse_budget_text(const std::string & text)
    {
        try {
            std::size_t used = 0;
            unsigned long long value = std::stoull(text, &used);
            if (used != text.size())
                throw std::invalid_argument(text);
            return value;
        }
        catch (const std::exception &) {
            throw oig::Error("cannot parse budget \"" + text + "\"");
        }
    }

    // Flag > environment > built-in default.
    std::uint64_t default_budget()
    {
        if (const char * env = std::getenv("OIG_BUDGET"))
            return parse_budget_text(env);
        return oig::SolveOptions{}.budget;
    }

    void emit(const oig::Json & report, const std::string & out_path)
    {
        std::string text = report.dump(2) + "\n";
        if (out_path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(out_path);
        if (! out)
            throw oig::Error("cannot write " + out_path);
        out << text;
    }

    void emit_csv(const std::vector<std::vector<std::string>> & rows, const std::string & path)
    {
        std::ofstream out(path);
        if (! out)
            throw oig::Error("cannot write " + path);
        for (const auto & row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << row[i];
            out << "\n";
        }
    }

    oig::BehaviorTable load_table(const std::string & path)
    {
        std::filesystem::path file(path);
        return oig::table_from_json(oig::detail::load_json_file(file), file.parent_path());
    }

    oig::Json solve_realizable(const oig::SolveRequest & request)
    {
        auto problem = oig::build_problem(request.table);
        oig::SolveOptions solve_options;
        solve_options.budget = request.budget;
        oig::LocalSearchOptions local_options;
        local_options.seed = request.seed;

        std::string solver = request.solver;
        if (solver == "auto")
            solver = request.table.space->kind() == oig::LossKind::zero_one ? "matching" : "brute";

        oig::Json report{
            {"version", oig::version},
            {"mode", "realizable"},
            {"seed", request.seed},
            {"budget", request.budget},
        };
        if (solver == "matching") {
            auto solution = oig::optimal_zero_one(problem);
            report.update(oig::zero_one_to_json(problem, solution));
            report["value"] = oig::rational_to_json(solution.epsilon);
            report["exact"] = true;
        }
        else if (solver == "brute") {
            oig::MinimaxResult result;
            try {
                result = oig::brute_force_minimax(problem, solve_options);
            }
            catch (const oig::BudgetError &) {
                if (request.solver != "auto")
                    throw;
                solver = "local";
                result = oig::local_search_minimax(problem, local_options);
            }
            report.update(oig::minimax_to_json(problem, result));
        }
        else if (solver == "local")
            report.update(oig::minimax_to_json(problem, oig::local_search_minimax(problem, local_options)));
        else
            throw oig::Error("solver \"" + solver + "\" does not apply to realizable mode");
        report["solver"] = solver;
        return report;
    }

    oig::Json solve_agnostic(const oig::SolveRequest & request)
    {
        auto problem = oig::make_agnostic(request.table);
        oig::SolveOptions solve_options;
        solve_options.budget = request.budget;
        oig::LocalSearchOptions local_options;
        local_options.seed = request.seed;

        std::string solver = request.solver == "auto" ? "brute" : request.solver;
        if (solver == "matching")
            throw oig::Error("the matching solver does not apply to agnostic mode");

        oig::AgnosticResult result;
        if (solver == "brute") {
            try {
                result = oig::agnostic_minimax(problem, true, solve_options, local_options);
            }
            catch (const oig::BudgetError &) {
                if (request.solver != "auto")
                    throw;
                solver = "local";
                result = oig::agnostic_minimax(problem, false, solve_options, local_options);
            }
        }
        else
            result = oig::agnostic_minimax(problem, false, solve_options, local_options);

        oig::Json report{
            {"version", oig::version},
            {"mode", "agnostic"},
            {"solver", solver},
            {"seed", request.seed},
            {"budget", request.budget},
        };
        report.update(oig::agnostic_to_json(problem, result));
        return report;
    }
}

int main(int argc, char ** argv)
{
    CLI::App app{"exact optimal transductive error rates for finite hypothesis classes"};
    app.require_subcommand(1);
    int exit_code = 0;

    std::string out_path;
    app.add_option("--out", out_path, "write the JSON report here instead of stdout");

    std::uint64_t budget = 0;
    try {
        budget = default_budget();
    }
    catch (const oig::Error & e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    // ---- solve ----
    auto * solve_cmd = app.add_subcommand("solve", "optimal error of a behavior table");
    std::string solve_request_path, solve_table_path, solve_mode = "realizable", solve_solver = "auto";
    std::uint64_t solve_seed = 1, solve_budget = budget;
    solve_cmd->add_option("request", solve_request_path, "solve-request JSON file");
    solve_cmd->add_option("--table", solve_table_path, "behavior-table JSON file");
    solve_cmd->add_option("--mode", solve_mode, "realizable or agnostic")->capture_default_str();
    solve_cmd->add_option("--solver", solve_solver, "auto, matching, brute, or local")->capture_default_str();
    solve_cmd->add_option("--seed", solve_seed, "random seed for local search")->capture_default_str();
    solve_cmd->add_option("--budget", solve_budget, "evaluation budget for exhaustive search")->capture_default_str();
    solve_cmd->callback([&] {
        oig::SolveRequest request;
        if (! solve_request_path.empty() && ! solve_table_path.empty())
            throw oig::Error("pass either a request file or --table, not both");
        if (! solve_request_path.empty()) {
            std::filesystem::path file(solve_request_path);
            request = oig::parse_solve_request(oig::detail::load_json_file(file), file.parent_path());
        }
        else if (! solve_table_path.empty()) {
            request.table = load_table(solve_table_path);
            request.mode = solve_mode;
            request.solver = solve_solver;
            request.seed = solve_seed;
            request.budget = solve_budget;
            if (request.mode != "realizable" && request.mode != "agnostic")
                throw oig::Error("mode must be \"realizable\" or \"agnostic\"");
            if (request.solver != "auto" && request.solver != "matching" && request.solver != "brute" &&
                request.solver != "local")
                throw oig::Error("solver must be \"auto\", \"matching\", \"brute\", or \"local\"");
        }
        else
            throw oig::Error("pass a request file or --table");
        emit(request.mode == "agnostic" ? solve_agnostic(request) : solve_realizable(request), out_path);
    });

    // ---- validate ----
    auto * validate_cmd = app.add_subcommand("validate", "check label-space axioms (and table shape)");
    std::string validate_path;
    validate_cmd->add_option("file", validate_path, "label-space or behavior-table JSON file")->required();
    validate_cmd->callback([&] {
        std::filesystem::path file(validate_path);
        oig::Json document = oig::detail::load_json_file(file);
        oig::Json report;
        bool ok = false;
        if (document.contains("space") || document.contains("rows")) {
            try {
                auto table = oig::table_from_json(document, file.parent_path());
                report = oig::Json{{"ok", true}, {"what", "behavior table"}, {"n", table.n},
                    {"rows", table.row_count()}, {"labels", table.space->size()}};
                ok = true;
            }
            catch (const oig::Error & e) {
                report = oig::Json{{"ok", false}, {"what", "behavior table"}, {"message", e.what()}};
            }
        }
        else {
            auto labels = oig::detail::field(document, "labels").get<std::vector<std::string>>();
            auto kind = oig::loss_kind_from_string(oig::detail::field(document, "kind").get<std::string>());
            std::vector<std::vector<oig::Rational>> loss;
            for (const auto & row_json : oig::detail::field(document, "loss")) {
                std::vector<oig::Rational> row;
                for (const auto & cell : row_json)
                    row.push_back(oig::rational_from_json(cell));
                loss.push_back(std::move(row));
            }
            auto validation = oig::validate_space_data(labels, loss, kind);
            report = oig::validation_to_json(validation);
            report["what"] = "label space";
            ok = validation.ok;
        }
        emit(report, out_path);
        if (! ok)
            exit_code = 1;
    });

    // ---- counterexample ----
    auto * counter_cmd = app.add_subcommand("counterexample", "proper-vs-improper gap instance");
    int counter_m = 3, counter_k = 1;
    bool counter_cover = true, counter_solve = false;
    counter_cmd->add_option("--m", counter_m, "number of core labels (2..5)")->capture_default_str();
    counter_cmd->add_flag("--cover,!--no-cover", counter_cover, "include the all-core cover label")
        ->capture_default_str();
    counter_cmd->add_option("--k", counter_k, "number of free positions (1..4)")->capture_default_str();
    counter_cmd->add_flag("--solve", counter_solve, "also compute the optimal error");
    counter_cmd->callback([&] {
        oig::CounterexampleSpec spec{counter_m, counter_cover, counter_k};
        auto instance = oig::generate_counterexample(spec);
        oig::Json report = oig::counterexample_to_json(spec, instance);
        if (counter_solve) {
            auto problem = oig::build_problem(instance.table);
            oig::SolveOptions options;
            options.budget = budget;
            auto result = oig::brute_force_minimax(problem, options);
            report["xi"] = oig::rational_to_json(result.value);
            report["learner"] = oig::learner_to_json(problem, result.learner);
        }
        emit(report, out_path);
    });

    // ---- sweep ----
    auto * sweep_cmd = app.add_subcommand("sweep", "optimum of every projection vs. the full table");
    std::string sweep_table_path, sweep_csv;
    std::uint64_t sweep_max_solves = 200'000;
    sweep_cmd->add_option("--table", sweep_table_path, "behavior-table JSON file")->required();
    sweep_cmd->add_option("--max-solves", sweep_max_solves, "cap on exact solves")->capture_default_str();
    sweep_cmd->add_option("--csv", sweep_csv, "also write per-cell results as CSV");
    sweep_cmd->callback([&] {
        oig::SweepOptions options;
        options.max_solves = sweep_max_solves;
        options.solve.budget = budget;
        auto report = oig::compactness_sweep(load_table(sweep_table_path), options);
        emit(oig::sweep_to_json(report), out_path);
        if (! sweep_csv.empty()) {
            std::vector<std::vector<std::string>> rows{{"columns", "full_xi", "max_subset_xi", "ratio"}};
            for (const auto & cell : report.cells) {
                std::string columns;
                for (int c : cell.columns)
                    columns += (columns.empty() ? "" : " ") + std::to_string(c);
                rows.push_back({columns, oig::format_rational(cell.full_xi),
                    oig::format_rational(cell.max_subset_xi), oig::format_rational(cell.ratio)});
            }
            emit_csv(rows, sweep_csv);
        }
    });

    // ---- pac-check ----
    auto * pac_cmd = app.add_subcommand("pac-check", "Monte Carlo leave-one-out error vs. the exact optimum");
    std::string pac_table_path, pac_csv;
    int pac_n = 0, pac_trials = 10'000;
    std::uint64_t pac_seed = 1;
    pac_cmd->add_option("--table", pac_table_path, "behavior-table JSON file")->required();
    pac_cmd->add_option("--n", pac_n, "sample size (defaults to the table's n)");
    pac_cmd->add_option("--trials", pac_trials, "Monte Carlo trials")->capture_default_str();
    pac_cmd->add_option("--seed", pac_seed, "random seed")->capture_default_str();
    pac_cmd->add_option("--csv", pac_csv, "also write per-row means as CSV");
    pac_cmd->callback([&] {
        auto table = load_table(pac_table_path);
        int n = pac_n > 0 ? pac_n : table.n;
        oig::SolveOptions options;
        options.budget = budget;
        auto report = oig::pac_bridge_check(table, n, pac_trials, pac_seed, options);
        emit(oig::pac_to_json(report), out_path);
        if (! pac_csv.empty()) {
            std::vector<std::vector<std::string>> rows{{"row", "mean", "stderr"}};
            for (int r = 0; r < static_cast<int>(report.row_means.size()); ++r)
                rows.push_back({std::to_string(r), oig::format_rational(report.row_means[r]),
                    std::to_string(report.row_stderr[r])});
            emit_csv(rows, pac_csv);
        }
    });

    // ---- curve ----
    auto * curve_cmd = app.add_subcommand("curve", "sample-complexity curve over a scanned range");
    std::string curve_family = "star", curve_eps = "1/2,1/3,1/4", curve_csv;
    int curve_n_min = 1, curve_n_max = 6, curve_m = 3;
    bool curve_cover = false;
    curve_cmd->add_option("--family", curve_family, "star, single-row, or counterexample")->capture_default_str();
    curve_cmd->add_option("--eps", curve_eps, "comma-separated rationals")->capture_default_str();
    curve_cmd->add_option("--n-min", curve_n_min, "first n scanned")->capture_default_str();
    curve_cmd->add_option("--n-max", curve_n_max, "last n scanned")->capture_default_str();
    curve_cmd->add_option("--m", curve_m, "counterexample family: core labels")->capture_default_str();
    curve_cmd->add_flag("--cover,!--no-cover", curve_cover, "counterexample family: include the all-core cover")
        ->capture_default_str();
    curve_cmd->add_option("--csv", curve_csv, "also write the points as CSV");
    curve_cmd->callback([&] {
        std::vector<oig::Rational> epsilons;
        std::string item;
        std::stringstream stream(curve_eps);
        while (std::getline(stream, item, ','))
            epsilons.push_back(oig::parse_rational(item));
        oig::TableFamily family;
        if (curve_family == "star")
            family = oig::star_family_table;
        else if (curve_family == "single-row")
            family = oig::single_row_family_table;
        else if (curve_family == "counterexample")
            family = [&](int n) { return oig::counterexample_family_table(n, curve_m, curve_cover); };
        else
            throw oig::Error("unknown family \"" + curve_family + "\"");
        oig::SolveOptions options;
        options.budget = budget;
        auto report = oig::sample_complexity_curve(curve_family, family, epsilons, curve_n_min, curve_n_max, options);
        emit(oig::curve_to_json(report), out_path);
        if (! curve_csv.empty()) {
            std::vector<std::vector<std::string>> rows{{"epsilon", "m"}};
            for (const auto & point : report.points)
                rows.push_back({oig::format_rational(point.epsilon),
                    point.reachable ? std::to_string(point.m) : "unreachable"});
            emit_csv(rows, curve_csv);
        }
    });

    // ---- match ----
    auto * match_cmd = app.add_subcommand("match", "right-covering matching / deficiency of a bipartite graph");
    std::string match_graph_path;
    bool match_prune = false;
    match_cmd->add_option("--graph", match_graph_path, "bipartite-graph JSON file")->required();
    match_cmd->add_flag("--prune", match_prune, "also minimize degrees while preserving coverage");
    match_cmd->callback([&] {
        auto graph = oig::graph_from_json(oig::detail::load_json_file(match_graph_path));
        auto matching = oig::r_matching(graph);
        auto gap = oig::deficiency(graph);
        oig::Json report{
            {"version", oig::version},
            {"matched", matching.matched},
            {"matching", matching.matching},
            {"certificate", matching.certificate},
            {"deficiency", gap.value},
            {"witness", gap.witness},
        };
        if (match_prune) {
            if (matching.matched) {
                auto pruned = oig::prune_degrees(graph);
                report["prune"] = oig::prune_to_json(pruned);
            }
            else
                report["prune"] = oig::Json{
                    {"applicable", false}, {"reason", "no right-covering matching exists; nothing to prune"}};
        }
        emit(report, out_path);
    });

    // ---- verify ----
    auto * verify_cmd = app.add_subcommand("verify", "factor-two apportionment guarantee on a table");
    std::string verify_table_path, verify_delta = "1/100", verify_epsilon;
    std::uint64_t verify_seed = 1;
    verify_cmd->add_option("--table", verify_table_path, "behavior-table JSON file")->required();
    verify_cmd->add_option("--delta", verify_delta, "additive slack (rational)")->capture_default_str();
    verify_cmd->add_option("--epsilon", verify_epsilon, "error level (defaults to the witness's own error)");
    verify_cmd->add_option("--seed", verify_seed, "seed for the local-search fallback")->capture_default_str();
    verify_cmd->callback([&] {
        auto table = load_table(verify_table_path);
        auto problem = oig::build_problem(table);
        oig::FactorTwoOptions options;
        options.solve.budget = budget;
        options.local.seed = verify_seed;
        oig::Rational delta = oig::parse_rational(verify_delta);
        oig::FactorTwoReport report = verify_epsilon.empty()
            ? oig::verify_factor_two(problem, delta, options)
            : oig::verify_factor_two(problem, oig::parse_rational(verify_epsilon), delta, options);
        oig::Json out = oig::factor_two_to_json(problem, report);
        out["version"] = oig::version;
        out["seed"] = verify_seed;
        out["budget"] = budget;
        emit(out, out_path);
    });

    // ---- gap-search ----
    auto * gap_cmd = app.add_subcommand("gap-search", "search small instances for agnostic-over-realizable gaps");
    int gap_instances = 50;
    std::uint64_t gap_seed = 1;
    gap_cmd->add_option("--instances", gap_instances, "instances to draw")->capture_default_str();
    gap_cmd->add_option("--seed", gap_seed, "random seed")->capture_default_str();
    gap_cmd->callback([&] {
        oig::SolveOptions options;
        options.budget = budget;
        emit(oig::gap_search_to_json(oig::agnostic_gap_search(gap_instances, gap_seed, options)), out_path);
    });

    // ---- props ----
    auto * props_cmd = app.add_subcommand("props", "run the exact-arithmetic property suites");
    std::uint64_t props_seed = 2026;
    int props_cases = 60;
    props_cmd->add_option("--seed", props_seed, "corpus seed")->capture_default_str();
    props_cmd->add_option("--cases", props_cases, "cases per suite")->capture_default_str();
    props_cmd->callback([&] {
        auto report = oig::run_property_suites(props_seed, props_cases);
        emit(oig::property_report_to_json(report), out_path);
        if (! report.all_passed)
            exit_code = 1;
    });

    // Let global options like --out appear after the subcommand name.
    for (auto * sub : app.get_subcommands([](const CLI::App *) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        return app.exit(e);
    }
    catch (const oig::Error & e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    catch (const std::exception & e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}
