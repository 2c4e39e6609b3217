// imitanet: simulate imitation dynamics on networks and compute reward
// interventions that drive them to all-A.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "imitanet/dynamics.hpp"
#include "imitanet/errors.hpp"
#include "imitanet/experiments.hpp"
#include "imitanet/io.hpp"
#include "imitanet/netgen.hpp"
#include "imitanet/parallel.hpp"
#include "imitanet/targeted_control.hpp"
#include "imitanet/uniform_control.hpp"
#include "imitanet/verify.hpp"

namespace fs = std::filesystem;
using namespace imitanet;
using nlohmann::json;

namespace {

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path);
  out << text;
}

// Game plus initial state. --pre-relax replaces the state by the equilibrium
// reached under RandomUniform(seed).
struct LoadedGame {
  NetworkGame game;
  StrategyState x0;
};

LoadedGame load_game(const std::string& path, bool pre_relax, std::uint64_t seed) {
  GameDocument doc = read_game_file(path);
  if (!doc.state) throw ArgumentError(path + ": game file has no \"state\"");
  StrategyState x0 = *doc.state;
  if (pre_relax) {
    const auto n = static_cast<std::uint64_t>(doc.game.size());
    Trajectory t = simulate(imitation_rule(), doc.game, x0, RandomUniform{seed},
                            10000 * n * n + 1000);
    if (!t.converged) throw PreconditionError("--pre-relax did not reach an equilibrium");
    x0 = t.final_state;
  }
  return {std::move(doc.game), std::move(x0)};
}

RewardVector load_rewards(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  json j;
  in >> j;
  if (j.is_object()) j = j.at("rewards");
  auto r = RewardVector(j.get<std::vector<double>>());
  if (r.size() != n) throw ArgumentError("reward vector length does not match n");
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();

  CLI::App app{"Imitation dynamics on networks and payoff-incentive control"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate geometric random games with an initial equilibrium");
  std::size_t gen_n = 20;
  std::optional<double> gen_deg, gen_radius;
  double gen_p = 1.0, gen_v = 0.5;
  std::uint64_t gen_seed = 1;
  std::size_t gen_count = 1;
  std::string gen_out_dir = ".", gen_prefix = "game";
  bool gen_connected = false;
  gen->add_option("--n", gen_n, "Agent count")->check(CLI::PositiveNumber);
  auto* deg_opt = gen->add_option("--deg-exp", gen_deg, "Expected mean degree");
  gen->add_option("--radius", gen_radius, "Connection radius")->excludes(deg_opt);
  gen->add_option("--p", gen_p, "Coordination level (>= 1)");
  gen->add_option("--v", gen_v, "Payoff variance in [0,1]");
  gen->add_option("--seed", gen_seed, "Base seed");
  gen->add_option("--count", gen_count, "Number of games")->check(CLI::PositiveNumber);
  gen->add_option("--out-dir", gen_out_dir, "Output directory");
  gen->add_option("--prefix", gen_prefix, "File name prefix");
  gen->add_flag("--require-connected", gen_connected, "Resample graphs until connected");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate imitation dynamics; JSON lines per switch");
  std::string sim_game, sim_rewards, sim_out, sim_sequence = "random";
  std::optional<double> sim_uniform;
  std::uint64_t sim_seed = 1, sim_max = 1000000;
  sim->add_option("--game", sim_game, "Game JSON with state")->required();
  sim->add_option("--sequence", sim_sequence, "random | roundrobin")
      ->check(CLI::IsMember({"random", "roundrobin"}));
  sim->add_option("--seed", sim_seed, "Activation seed");
  sim->add_option("--max-activations", sim_max, "Activation budget");
  auto* rew_opt = sim->add_option("--rewards", sim_rewards, "JSON reward vector file");
  sim->add_option("--uniform-reward", sim_uniform, "Uniform reward r0")->excludes(rew_opt);
  sim->add_option("--out", sim_out, "Output path (default stdout)");

  // uniform
  auto* uni = app.add_subcommand("uniform", "Optimal uniform reward r0*");
  std::string uni_game, uni_out;
  bool uni_pre = false;
  std::uint64_t uni_seed = 1;
  uni->add_option("--game", uni_game, "Game JSON with state")->required();
  uni->add_flag("--pre-relax", uni_pre, "Relax the state to an equilibrium first");
  uni->add_option("--seed", uni_seed, "Seed for --pre-relax");
  uni->add_option("--out", uni_out, "Output path (default stdout)");

  // target
  auto* tgt = app.add_subcommand("target", "Targeted (optionally budgeted) reward vector");
  std::string tgt_game, tgt_out, tgt_policy = "ipro";
  double tgt_alpha = 1.0, tgt_beta = 1.0, tgt_eps = kDefaultEpsilon;
  std::optional<double> tgt_budget;
  std::uint64_t tgt_seed = 1;
  bool tgt_pre = false;
  tgt->add_option("--game", tgt_game, "Game JSON with state")->required();
  tgt->add_option("--policy", tgt_policy, "rand|deg|ime|ipo|iro|ipro|opt")
      ->check(CLI::IsMember({"rand", "deg", "ime", "ipo", "iro", "ipro", "opt"}));
  tgt->add_option("--alpha", tgt_alpha, "IPRO potential exponent");
  tgt->add_option("--beta", tgt_beta, "IPRO reward exponent");
  tgt->add_option("--budget", tgt_budget, "Budget rho");
  tgt->add_option("--epsilon", tgt_eps, "Increment above the infimum reward");
  tgt->add_option("--seed", tgt_seed, "Seed for rand and --pre-relax");
  tgt->add_flag("--pre-relax", tgt_pre, "Relax the state to an equilibrium first");
  tgt->add_option("--out", tgt_out, "Output path (default stdout)");

  // verify
  auto* ver = app.add_subcommand("verify", "Property suites; exit 1 on any violation");
  std::string ver_suite = "all", ver_out;
  SuiteConfig ver_cfg;
  ver->add_option("--suite", ver_suite, "acoord|monotone|unique|candidates|all")
      ->check(CLI::IsMember({"acoord", "monotone", "unique", "candidates", "all"}));
  ver->add_option("--instances", ver_cfg.instances, "Random instances per suite");
  ver->add_option("--seed", ver_cfg.seed, "Base seed");
  ver->add_option("--sequences", ver_cfg.sequences, "Activation sequences per instance");
  ver->add_option("--out", ver_out, "Output path (default stdout)");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run an experiment sweep; writes CSV");
  std::string exp_config, exp_id = "size_sweep", exp_out, exp_meta;
  std::vector<std::size_t> exp_n;
  std::vector<double> exp_deg, exp_radius, exp_p, exp_v;
  std::vector<std::string> exp_policies;
  std::optional<std::size_t> exp_instances;
  std::optional<std::uint64_t> exp_seed;
  std::optional<double> exp_eps, exp_alpha, exp_beta, exp_timeout;
  bool exp_timing = false, exp_connected = false;
  exp->add_option("--config", exp_config, "JSON config file (flags override)");
  exp->add_option("--id", exp_id, "uniform_vs_targeted|size_sweep|connectivity|variance|table1");
  exp->add_option("--n", exp_n, "Agent counts");
  exp->add_option("--deg-exp", exp_deg, "Expected mean degrees");
  exp->add_option("--radius", exp_radius, "Radii (override --deg-exp)");
  exp->add_option("--p", exp_p, "Coordination levels");
  exp->add_option("--v", exp_v, "Payoff variances");
  exp->add_option("--instances", exp_instances, "Instances per grid point");
  exp->add_option("--policies", exp_policies, "uniform rand deg iro ipo ime ipro opt");
  exp->add_option("--seed", exp_seed, "Base seed");
  exp->add_option("--epsilon", exp_eps, "Reward increment epsilon");
  exp->add_option("--alpha", exp_alpha, "IPRO alpha");
  exp->add_option("--beta", exp_beta, "IPRO beta");
  exp->add_option("--timeout", exp_timeout, "Per-instance seconds for opt");
  exp->add_flag("--timing", exp_timing, "Record wall_time (output no longer reproducible)");
  exp->add_flag("--require-connected", exp_connected, "Only connected graphs");
  exp->add_option("--out", exp_out, "CSV path (default stdout)");
  exp->add_option("--meta", exp_meta, "Instance metadata JSON path");

  // summarize
  auto* sum = app.add_subcommand("summarize", "Mean +- SE per experiment and policy");
  std::vector<std::string> sum_in;
  std::string sum_out;
  sum->add_option("--in", sum_in, "Result CSV files")->required();
  sum->add_option("--out", sum_out, "Summary CSV path (text table goes to stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      const double radius =
          gen_radius ? *gen_radius : radius_for_mean_degree(gen_n, gen_deg.value_or(4.0));
      fs::create_directories(gen_out_dir);
      for (std::size_t k = 0; k < gen_count; ++k) {
        const Instance inst = generate_instance(
            {gen_n, radius, gen_p, gen_v, gen_connected}, derive_seed(gen_seed, k));
        char name[64];
        std::snprintf(name, sizeof name, "_%04zu.json", k);
        const fs::path path = fs::path(gen_out_dir) / (gen_prefix + name);
        write_game_file(path.string(), inst.game, inst.x0);
        std::cout << path.string() << '\n';
      }
      return 0;
    }

    if (*sim) {
      GameDocument doc = read_game_file(sim_game);
      if (!doc.state) throw ArgumentError("game file has no \"state\"");
      NetworkGame game = doc.game;
      if (!sim_rewards.empty()) {
        game = apply_rewards(game, load_rewards(sim_rewards, game.size()));
      } else if (sim_uniform) {
        game = apply_rewards(game, RewardVector::uniform(game.size(), *sim_uniform));
      }
      ActivationSequence seq = RoundRobin{};
      if (sim_sequence == "random") seq = RandomUniform{sim_seed};
      const Trajectory t = simulate(imitation_rule(), game, *doc.state, seq, sim_max);
      std::ostringstream os;
      write_trajectory_jsonl(os, t);
      emit(sim_out, os.str());
      if (!t.converged) std::cerr << "warning: no equilibrium within budget\n";
      return 0;
    }

    if (*uni) {
      const LoadedGame g = load_game(uni_game, uni_pre, uni_seed);
      const UniformSolution sol = solve_uniform(g.game, g.x0);
      json out = {{"r0_star", sol.r0_star},
                  {"candidates", sol.candidates},
                  {"simulations", sol.simulations}};
      emit(uni_out, out.dump() + "\n");
      return 0;
    }

    if (*tgt) {
      const LoadedGame g = load_game(tgt_game, tgt_pre, tgt_seed);
      ControlOutcome outcome;
      if (tgt_policy == "opt") {
        if (tgt_budget) throw ArgumentError("--budget is not supported with --policy opt");
        outcome = exhaustive_optimal(g.game, g.x0, tgt_eps);
      } else {
        const auto policy = TargetingPolicy::parse(tgt_policy, tgt_alpha, tgt_beta, tgt_seed);
        outcome = tgt_budget ? budgeted_control(g.game, g.x0, policy, *tgt_budget, tgt_eps)
                             : targeted_control(g.game, g.x0, policy, tgt_eps);
      }
      emit(tgt_out, outcome_to_json(outcome).dump() + "\n");
      return 0;
    }

    if (*ver) {
      const auto reports = run_suites(ver_suite, ver_cfg);
      json arr = json::array();
      bool ok = true;
      for (const auto& r : reports) {
        arr.push_back(report_to_json(r));
        ok = ok && r.passed();
      }
      json out = {{"suite", ver_suite}, {"seed", ver_cfg.seed}, {"passed", ok},
                  {"reports", arr}};
      emit(ver_out, out.dump(2) + "\n");
      return ok ? 0 : 1;
    }

    if (*exp) {
      ExperimentConfig cfg;
      if (!exp_config.empty()) {
        std::ifstream in(exp_config);
        if (!in) throw ArgumentError("cannot open " + exp_config);
        json j;
        in >> j;
        cfg = config_from_json(j);
      } else {
        cfg = ExperimentConfig::defaults(exp_id);
      }
      if (!exp_n.empty()) cfg.n_values = exp_n;
      if (!exp_deg.empty()) cfg.deg_exp_values = exp_deg;
      if (!exp_radius.empty()) cfg.radius_values = exp_radius;
      if (!exp_p.empty()) cfg.p_values = exp_p;
      if (!exp_v.empty()) cfg.v_values = exp_v;
      if (!exp_policies.empty()) cfg.policies = exp_policies;
      if (exp_instances) cfg.instances = *exp_instances;
      if (exp_seed) cfg.seed = *exp_seed;
      if (exp_eps) cfg.epsilon = *exp_eps;
      if (exp_alpha) cfg.alpha = *exp_alpha;
      if (exp_beta) cfg.beta = *exp_beta;
      if (exp_timeout) cfg.timeout_seconds = *exp_timeout;
      if (exp_timing) cfg.timing = true;
      if (exp_connected) cfg.require_connected = true;
      cfg.validate();

      const ExperimentResult result = run_experiment(cfg);
      std::ostringstream os;
      write_csv(os, result.rows);
      emit(exp_out, os.str());
      if (!exp_meta.empty()) {
        json meta = {{"config", config_to_json(cfg)},
                     {"instances", instances_to_json(result.instances)}};
        emit(exp_meta, meta.dump(2) + "\n");
      }
      return 0;
    }

    if (*sum) {
      std::vector<ResultRow> rows;
      for (const auto& path : sum_in) {
        std::ifstream in(path);
        if (!in) throw ArgumentError("cannot open " + path);
        auto part = read_csv(in);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      const auto cells = summarize(rows);
      if (!sum_out.empty()) {
        std::ostringstream os;
        write_summary_csv(os, cells);
        emit(sum_out, os.str());
      }
      std::cout << format_summary_text(cells);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
