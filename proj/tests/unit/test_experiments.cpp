#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "helpers.hpp"
#include "imitanet/errors.hpp"
#include "imitanet/experiments.hpp"
#include "imitanet/io.hpp"

using namespace imitanet;
using namespace imitanet::test;

TEST_CASE("game JSON round trip") {
  auto inst = random_instance(15, 21);
  auto j = game_to_json(inst.game, inst.x0);
  CHECK(j["n"] == 15);
  for (const auto& e : j["edges"]) {
    CHECK(e[0].get<int>() >= 1);
    CHECK(e[0].get<int>() < e[1].get<int>());
  }
  auto doc = game_from_json(j);
  CHECK(doc.game.graph() == inst.game.graph());
  CHECK(doc.game.payoffs() == inst.game.payoffs());
  CHECK(doc.state == inst.x0);

  auto path = std::filesystem::temp_directory_path() / "imitanet_io_test.json";
  write_game_file(path.string(), inst.game);
  auto back = read_game_file(path.string());
  CHECK_FALSE(back.state.has_value());
  CHECK(back.game.payoffs() == inst.game.payoffs());
  std::filesystem::remove(path);

  CHECK_THROWS_AS(game_from_json(nlohmann::json::parse(R"({"n":2,"edges":[[0,1]],"payoffs":[[1,0,0,1],[1,0,0,1]]})")),
                  ArgumentError);
  CHECK_THROWS_AS(game_from_json(nlohmann::json::parse(R"({"n":2,"edges":[[1,2]],"payoffs":[[1,0,0,1]]})")),
                  ArgumentError);
  CHECK_THROWS_AS(state_from_json(nlohmann::json::parse(R"(["A","C"])")), ArgumentError);
}

TEST_CASE("trajectory lines are 1-based") {
  Trajectory t;
  t.events.push_back({4, 0, Strategy::B, Strategy::A});
  std::ostringstream os;
  write_trajectory_jsonl(os, t);
  CHECK(os.str() == "{\"agent\":1,\"from\":\"B\",\"t\":4,\"to\":\"A\"}\n");
}

TEST_CASE("config validation") {
  auto cfg = ExperimentConfig::defaults("size_sweep");
  CHECK_NOTHROW(cfg.validate());
  cfg.instances = 0;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg = ExperimentConfig::defaults("size_sweep");
  cfg.policies = {"magic"};
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg = ExperimentConfig::defaults("size_sweep");
  cfg.v_values.clear();
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  CHECK_THROWS_AS(ExperimentConfig::defaults("fig9"), ArgumentError);

  auto round = config_from_json(config_to_json(ExperimentConfig::defaults("connectivity")));
  CHECK(config_to_json(round) == config_to_json(ExperimentConfig::defaults("connectivity")));
  auto partial = config_from_json(nlohmann::json::parse(R"({"experiment":"variance","instances":3})"));
  CHECK(partial.instances == 3);
  CHECK(partial.v_values == ExperimentConfig::defaults("variance").v_values);
}

TEST_CASE("size sweep rows") {
  ExperimentConfig cfg = ExperimentConfig::defaults("size_sweep");
  cfg.n_values = {10, 20, 40};
  cfg.instances = 4;
  auto res = run_experiment(cfg);
  CHECK(res.rows.size() == 3 * 4 * 6);
  CHECK(res.instances.size() == 3 * 4);
  for (const auto& row : res.rows) {
    CHECK(row.error.empty());
    CHECK(row.mean_incentive == row.total_cost / static_cast<double>(row.n));
    CHECK(row.num_A == row.n);
    CHECK(row.wall_time == 0.0);
  }

  std::ostringstream a, b;
  write_csv(a, res.rows);
  write_csv(b, run_experiment(cfg, Execution::Serial).rows);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("experiment,instance_seed,n,radius,p,v,policy,total_cost,"
                      "mean_incentive,num_A,iterations,wall_time,error\n", 0) == 0);

  std::istringstream in(a.str());
  auto back = read_csv(in);
  REQUIRE(back.size() == res.rows.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    CHECK(back[k].total_cost == res.rows[k].total_cost);
    CHECK(back[k].policy == res.rows[k].policy);
    CHECK(back[k].instance_seed == res.rows[k].instance_seed);
  }
}

TEST_CASE("opt dominates on every row") {
  ExperimentConfig cfg = ExperimentConfig::defaults("connectivity");
  cfg.deg_exp_values = {3, 6};
  cfg.n_values = {12};
  cfg.instances = 5;
  auto res = run_experiment(cfg);
  for (std::size_t k = 0; k < res.rows.size(); k += cfg.policies.size()) {
    double opt = -1;
    for (std::size_t q = k; q < k + cfg.policies.size(); ++q)
      if (res.rows[q].policy == "opt") opt = res.rows[q].total_cost;
    REQUIRE(opt >= 0);
    for (std::size_t q = k; q < k + cfg.policies.size(); ++q)
      CHECK(opt <= res.rows[q].total_cost);
  }
}

TEST_CASE("uniform rows cost n times the uniform reward") {
  ExperimentConfig cfg = ExperimentConfig::defaults("uniform_vs_targeted");
  cfg.n_values = {15};
  cfg.instances = 3;
  auto res = run_experiment(cfg);
  for (const auto& row : res.rows) {
    if (row.policy != "uniform") continue;
    CHECK(row.mean_incentive == row.total_cost / 15.0);
  }
}

TEST_CASE("summaries") {
  ResultRow r;
  r.experiment = "size_sweep";
  r.policy = "ipro";
  r.n = 10;
  r.total_cost = 0.5;
  r.mean_incentive = 0.05;
  auto one = summarize({r});
  REQUIRE(one.size() == 1);
  CHECK(one[0].mean == 0.05);
  CHECK(one[0].count == 1);

  ResultRow bad = r;
  bad.error = "generation failed";
  ResultRow r2 = r;
  r2.mean_incentive = 0.15;
  auto mixed = summarize({r, bad, r2});
  CHECK(mixed[0].count == 2);
  CHECK(mixed[0].excluded == 1);
  CHECK(mixed[0].mean == doctest::Approx(0.1));
  CHECK(mixed[0].std_error == doctest::Approx(0.05));
  CHECK_THROWS_AS(summarize({}), ArgumentError);

  std::ostringstream os;
  write_summary_csv(os, mixed);
  CHECK(os.str().find("size_sweep") != std::string::npos);
  CHECK(format_summary_text(mixed).find("ipro") != std::string::npos);
  CHECK(policy_rank("uniform") < policy_rank("ipro"));
  CHECK(policy_rank("ipro") < policy_rank("opt"));
}
