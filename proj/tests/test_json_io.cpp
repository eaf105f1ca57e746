#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "oig/counterexample.hpp"
#include "oig/json_io.hpp"
#include "test_support.hpp"

using namespace oig;
using test::fig1_table;

namespace
{
    struct TempDir
    {
        std::filesystem::path path;

        TempDir()
        {
            path = std::filesystem::temp_directory_path() / ("oig-test-" + std::to_string(std::rand()));
            std::filesystem::create_directories(path);
        }

        ~TempDir() { std::filesystem::remove_all(path); }

        std::filesystem::path write(const std::string & name, const Json & object) const
        {
            auto file = path / name;
            std::ofstream out(file);
            out << object.dump(2);
            return file;
        }
    };
}

TEST_CASE("rationals travel as canonical strings")
{
    CHECK(rational_to_json(Rational(2, 3)) == Json("2/3"));
    CHECK(rational_to_json(Rational(-4, 6)) == Json("-2/3"));
    CHECK(rational_to_json(Rational(5)) == Json("5"));

    CHECK(rational_from_json(Json("2/3")) == Rational(2, 3));
    CHECK(rational_from_json(Json(7)) == Rational(7));
    CHECK(rational_from_json(Json(-2)) == Rational(-2));
    CHECK_THROWS_AS(rational_from_json(Json(0.5)), Error);
    CHECK_THROWS_AS(rational_from_json(Json("1/0")), Error);
    CHECK_THROWS_AS(rational_from_json(Json::array()), Error);
}

TEST_CASE("label spaces round-trip bit for bit")
{
    auto instance = generate_counterexample({3, true, 1});
    auto json = space_to_json(*instance.space);
    CHECK(json.at("kind") == "metric");
    auto back = space_from_json(json);
    CHECK(back->labels() == instance.space->labels());
    CHECK(back->kind() == instance.space->kind());
    for (int a = 0; a < back->size(); ++a)
        for (int b = 0; b < back->size(); ++b)
            CHECK(back->loss(a, b) == instance.space->loss(a, b));

    auto zero_one = space_to_json(*test::binary_space());
    CHECK(zero_one.at("kind") == "zero-one");
    CHECK(space_from_json(zero_one)->kind() == LossKind::zero_one);
}

TEST_CASE("tables serialize rows by label name and accept both forms back")
{
    auto table = fig1_table();
    auto json = table_to_json(table);
    CHECK(json.at("n") == 3);
    CHECK(json.at("rows").at(1) == Json::array({"1", "0", "0"}));

    auto back = table_from_json(json);
    CHECK(back.n == table.n);
    CHECK(back.rows == table.rows);

    json["rows"] = Json::array({Json::array({0, 0, 0}), Json::array({"1", 0, "0"})});
    auto mixed = table_from_json(json);
    CHECK(mixed.rows == std::vector<std::vector<int>>{{0, 0, 0}, {1, 0, 0}});

    json["rows"] = Json::array({Json::array({true, false, false})});
    CHECK_THROWS_AS(table_from_json(json), Error);
}

TEST_CASE("a table may pull its space from a separate file")
{
    TempDir dir;
    dir.write("space.json", space_to_json(*test::binary_space()));
    Json table_json{
        {"space", Json{{"file", "space.json"}}},
        {"n", 2},
        {"rows", Json::array({Json::array({"0", "1"})})},
    };
    auto file = dir.write("table.json", table_json);

    auto table = table_from_json(table_json, dir.path);
    CHECK(table.n == 2);
    CHECK(table.rows == std::vector<std::vector<int>>{{0, 1}});

    Json missing{{"space", Json{{"file", "absent.json"}}}, {"n", 1}, {"rows", Json::array()}};
    CHECK_THROWS_AS(table_from_json(missing, dir.path), Error);
    (void)file;
}

TEST_CASE("graphs travel as edge pairs and come back deduplicated")
{
    BipartiteGraph graph;
    graph.left = 3;
    graph.right = 2;
    graph.edges = {{0, 1}, {}, {1}};

    auto json = graph_to_json(graph);
    CHECK(json.at("left") == 3);
    CHECK(json.at("right") == 2);
    CHECK(json.at("edges") == Json::array({Json::array({0, 0}), Json::array({0, 1}), Json::array({2, 1})}));

    auto back = graph_from_json(json);
    CHECK(back.edges == graph.edges);

    Json duplicated{{"left", 2}, {"right", 2}, {"edges", Json::array({Json::array({0, 1}), Json::array({0, 1})})}};
    CHECK(graph_from_json(duplicated).edges == std::vector<std::vector<int>>{{1}, {}});

    Json out_of_range{{"left", 2}, {"right", 2}, {"edges", Json::array({Json::array({0, 5})})}};
    CHECK_THROWS_AS(graph_from_json(out_of_range), Error);
}

TEST_CASE("learners round-trip through named patterns")
{
    auto problem = build_problem(fig1_table());
    auto solved = optimal_zero_one(problem);
    auto json = learner_to_json(problem, solved.learner);
    REQUIRE(json.at("assignments").size() == 7);
    CHECK(json.at("assignments").at(0).at("pattern") == Json::array({"?", "0", "0"}));

    auto back = learner_from_json(problem, json);
    CHECK(back.choice == solved.learner.choice);

    SECTION("an absent pattern is rejected")
    {
        json["assignments"][0]["pattern"] = Json::array({"?", "1", "1"});
        CHECK_THROWS_WITH(learner_from_json(problem, json), Catch::Matchers::ContainsSubstring("does not occur"));
    }
    SECTION("a pattern must have exactly one hole")
    {
        json["assignments"][0]["pattern"] = Json::array({"0", "0", "0"});
        CHECK_THROWS_WITH(learner_from_json(problem, json), Catch::Matchers::ContainsSubstring("no hole"));
        json["assignments"][0]["pattern"] = Json::array({"?", "?", "0"});
        CHECK_THROWS_WITH(learner_from_json(problem, json), Catch::Matchers::ContainsSubstring("more than one hole"));
    }
    SECTION("a null label leaves the variable unassigned")
    {
        json["assignments"][2]["label"] = nullptr;
        auto partial = learner_from_json(problem, json);
        CHECK(partial.choice[2] == LearnerAssignment::unassigned);
    }
}

TEST_CASE("solution reports carry their inputs and certificates")
{
    auto problem = build_problem(fig1_table());
    auto zero_one = optimal_zero_one(problem);
    auto json = zero_one_to_json(problem, zero_one);
    CHECK(json.at("epsilon") == "1/3");
    CHECK(json.at("d_star") == 2);
    CHECK(json.contains("certificates"));
    CHECK(json.at("learner").at("assignments").size() == 7);

    auto minimax = brute_force_minimax(problem);
    auto solve_json = minimax_to_json(problem, minimax);
    CHECK(solve_json.at("value") == "1/3");
    CHECK(solve_json.at("exact") == true);

    auto evaluation = evaluate(problem, minimax.learner);
    auto eval_json = evaluation_to_json(evaluation);
    CHECK(eval_json.at("worst") == "1/3");
    REQUIRE(eval_json.at("per_row").size() == 3);
}

TEST_CASE("solve requests apply defaults and reject unknown enums")
{
    Json request{{"table", table_to_json(fig1_table())}};
    auto parsed = parse_solve_request(request);
    CHECK(parsed.mode == "realizable");
    CHECK(parsed.solver == "auto");
    CHECK(parsed.seed == 1);
    CHECK(parsed.budget == SolveOptions{}.budget);
    CHECK(parsed.table.rows == fig1_table().rows);

    request["mode"] = "agnostic";
    request["solver"] = "local";
    request["seed"] = 99;
    request["budget"] = 1234;
    parsed = parse_solve_request(request);
    CHECK(parsed.mode == "agnostic");
    CHECK(parsed.solver == "local");
    CHECK(parsed.seed == 99);
    CHECK(parsed.budget == 1234);

    request["mode"] = "transductive";
    CHECK_THROWS_AS(parse_solve_request(request), Error);
    request["mode"] = "realizable";
    request["solver"] = "simplex";
    CHECK_THROWS_AS(parse_solve_request(request), Error);
}

TEST_CASE("a solve request may pull its table from a separate file")
{
    TempDir dir;
    dir.write("table.json", table_to_json(fig1_table()));
    Json request{{"table", Json{{"file", "table.json"}}}, {"mode", "agnostic"}};
    auto parsed = parse_solve_request(request, dir.path);
    CHECK(parsed.mode == "agnostic");
    CHECK(parsed.table.rows == fig1_table().rows);

    Json missing{{"table", Json{{"file", "absent.json"}}}};
    CHECK_THROWS_AS(parse_solve_request(missing, dir.path), Error);
}

TEST_CASE("experiment reports embed the library version")
{
    auto sweep = compactness_sweep(fig1_table());
    CHECK(sweep_to_json(sweep).contains("version"));

    CounterexampleSpec spec{2, true, 1};
    auto instance = generate_counterexample(spec);
    auto json = counterexample_to_json(spec, instance);
    CHECK(json.contains("version"));
    CHECK(json.at("m") == 2);
    CHECK(json.at("include_full_cover") == true);
}
