// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles/oracles.hpp"
#include "imitanet/errors.hpp"
#include "imitanet/netgen.hpp"
#include "imitanet/parallel.hpp"
#include "imitanet/targeted_control.hpp"
#include "imitanet/uniform_control.hpp"
#include "imitanet/verify.hpp"

#ifndef IMITANET_CLI
#error "IMITANET_CLI must name the command-line binary"
#endif

using namespace imitanet;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Instance make(std::size_t n, double deg_exp, double v, std::uint64_t seed) {
  return generate_instance({n, radius_for_mean_degree(n, deg_exp), 1.0, v, false},
                           seed);
}

struct Stat {
  double sum = 0.0;
  double sumsq = 0.0;
  std::size_t count = 0;

  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++count;
  }
  double mean() const { return sum / static_cast<double>(count); }
  double std_error() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double var = (sumsq - static_cast<double>(count) * m * m) /
                       static_cast<double>(count - 1);
    return std::sqrt(std::max(0.0, var) / static_cast<double>(count));
  }
};

const std::vector<std::string> kHeuristics{"rand", "deg", "iro", "ipo", "ime", "ipro"};

TargetingPolicy policy_for(const std::string& name, std::uint64_t seed) {
  return TargetingPolicy::parse(name, 1.0, 1.0, derive_seed(seed, 0x72616e64));
}

// 1. A-monotonicity and unique convergence under random rewards.
Verdict theory_suite() {
  SuiteConfig cfg;
  cfg.instances = 200;
  cfg.seed = 101;
  cfg.n_min = 5;
  cfg.n_max = 30;
  cfg.deg_exp = 4.0;
  cfg.sequences = 20;
  auto mono = run_monotone_suite(cfg);
  auto uniq = run_unique_suite(cfg);
  const std::size_t bad = mono.violations.size() + uniq.violations.size();
  std::string detail = std::to_string(mono.instances) + " instances x " +
                       std::to_string(cfg.sequences) + " sequences, " +
                       std::to_string(mono.violations.size()) + " A->B/settle, " +
                       std::to_string(uniq.violations.size()) + " uniqueness violations";
  if (bad) {
    const auto& v = mono.violations.empty() ? uniq.violations[0] : mono.violations[0];
    detail += "; first: seed " + std::to_string(v.seed) + " " + v.witness;
  }
  return {bad == 0, detail};
}

// 2. Exhaustive A-coordination on every connected graph up to four agents.
Verdict definition_exhaustive() {
  SuiteConfig cfg;
  cfg.seed = 202;
  cfg.exhaustive_max_n = 4;
  cfg.exhaustive_draws = 20;
  auto r = run_acoord_exhaustive_suite(cfg);
  return {r.passed(), std::to_string(r.instances) + " games, " +
                          std::to_string(r.violations.size()) + " violations"};
}

// 3. Binary search against the linear-scan oracle on 15-agent instances.
Verdict uniform_correctness() {
  constexpr double kProbe = 1e-6;
  struct Row {
    bool oracle_ok, member, above_ok, below_ok;
    double r0;
  };
  auto rows = map_indices<Row>(100, [](std::size_t k) {
    auto inst = make(15, 4.0, 0.5, derive_seed(303, k));
    const double r0 = optimal_uniform_reward(inst.game, inst.x0);
    Row row{};
    row.r0 = r0;
    row.oracle_ok = r0 == oracle::brute_force_uniform_reward(inst.game, inst.x0);
    row.member = candidate_rewards(inst.game, inst.x0).contains(r0);
    row.above_ok = succeeds_all_A(inst.game, inst.x0, r0 + kProbe);
    row.below_ok = r0 == 0.0 ||
                   !succeeds_all_A(inst.game, inst.x0, std::max(0.0, r0 - kProbe));
    return row;
  }, Execution::Parallel);
  std::size_t mismatch = 0, outside = 0, above = 0, below = 0, positive = 0;
  for (const auto& r : rows) {
    mismatch += !r.oracle_ok;
    outside += !r.member;
    above += !r.above_ok;
    below += !r.below_ok;
    positive += r.r0 > 0.0;
  }
  return {mismatch + outside + above + below == 0,
          "100 instances (" + std::to_string(positive) + " with r0*>0): " +
              std::to_string(mismatch) + " oracle mismatches, " +
              std::to_string(outside) + " outside candidates, " +
              std::to_string(above) + " failures at r0*+1e-6, " +
              std::to_string(below) + " successes at r0*-1e-6"};
}

// 4. IPRO against the exhaustive optimum on 12-agent instances.
Verdict ipro_near_optimal() {
  struct Row {
    double opt = 0.0;
    std::map<std::string, double> cost;
    bool timed_out = false;
  };
  auto rows = map_indices<Row>(200, [](std::size_t k) {
    const std::uint64_t seed = derive_seed(404, k);
    auto inst = make(12, 3.0 + static_cast<double>(k % 6), 0.5, seed);
    Row row;
    for (const auto& h : kHeuristics)
      row.cost[h] = targeted_control(inst.game, inst.x0, policy_for(h, seed),
                                     kDefaultEpsilon, Execution::Serial)
                        .total_cost;
    ExhaustiveOptions opts;
    opts.deadline = std::chrono::steady_clock::now() + std::chrono::seconds(60);
    try {
      row.opt = exhaustive_optimal(inst.game, inst.x0, kDefaultEpsilon, opts).total_cost;
    } catch (const SearchBudgetExceeded&) {
      row.timed_out = true;
    }
    return row;
  }, Execution::Parallel);

  Stat opt, ipro;
  std::size_t dominated = 0, timeouts = 0;
  for (const auto& r : rows) {
    if (r.timed_out) {
      ++timeouts;
      continue;
    }
    opt.add(r.opt);
    ipro.add(r.cost.at("ipro"));
    for (const auto& [name, c] : r.cost) dominated += r.opt > c;
  }
  const double ratio = ipro.mean() / opt.mean();
  return {timeouts == 0 && dominated == 0 && ratio <= 1.05,
          "mean ipro/opt = " + fmt("%.4f", ratio) + " (limit 1.05), " +
              std::to_string(dominated) + " rows with a heuristic below opt, " +
              std::to_string(timeouts) + " timeouts"};
}

// 5. Heuristic ordering on 20-agent instances at the connectivity and
// variance sweep settings.
Verdict heuristic_ordering() {
  const std::vector<double> degs{2, 3, 4, 5, 6, 7, 8, 9, 10};
  const std::vector<double> vars{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  auto rows = map_indices<std::map<std::string, double>>(300, [&](std::size_t k) {
    const std::uint64_t seed = derive_seed(505, k);
    const bool connectivity = k % 2 == 0;
    const std::size_t slot = k / 2;
    auto inst = connectivity ? make(20, degs[slot % degs.size()], 0.5, seed)
                             : make(20, 4.0, vars[slot % vars.size()], seed);
    std::map<std::string, double> cost;
    for (const auto& h : kHeuristics)
      cost[h] = targeted_control(inst.game, inst.x0, policy_for(h, seed),
                                 kDefaultEpsilon, Execution::Serial)
                    .total_cost / 20.0;
    return cost;
  }, Execution::Parallel);

  std::map<std::string, Stat> s;
  for (const auto& r : rows)
    for (const auto& [h, c] : r) s[h].add(c);
  const double rand = s["rand"].mean(), ipo = s["ipo"].mean(), ipro = s["ipro"].mean();
  const double mid = std::max({s["ime"].mean(), s["iro"].mean(), s["deg"].mean()});
  bool best = true;
  for (const auto& h : kHeuristics) best = best && ipro <= s[h].mean();
  const bool separated = rand - 2 * s["rand"].std_error() > ipro + 2 * s["ipro"].std_error();
  std::string means;
  for (const auto& h : kHeuristics) means += " " + h + "=" + fmt("%.4f", s[h].mean());
  return {rand > ipo && ipo > mid && mid >= ipro && best && separated,
          "means" + means + "; rand>ipo>max(ime,iro,deg)>=ipro " +
              (rand > ipo && ipo > mid && mid >= ipro ? "holds" : "broken") +
              "; rand/ipro 2SE intervals " + (separated ? "disjoint" : "overlap") +
              " (se rand " + fmt("%.4f", s["rand"].std_error()) + ", ipro " +
              fmt("%.4f", s["ipro"].std_error()) + ")"};
}

// 6. Targeted beats uniform per agent.
Verdict uniform_vs_targeted() {
  bool pass = true;
  std::string detail;
  for (std::size_t n : {20u, 40u}) {
    auto rows = map_indices<std::pair<double, double>>(100, [n](std::size_t k) {
      auto inst = make(n, 4.0, 0.5, derive_seed(606 + n, k));
      const double dn = static_cast<double>(n);
      return std::pair{optimal_uniform_reward(inst.game, inst.x0),
                       targeted_control(inst.game, inst.x0, TargetingPolicy::ipro(),
                                        kDefaultEpsilon, Execution::Serial)
                               .total_cost / dn};
    }, Execution::Parallel);
    Stat uni, tgt;
    for (const auto& [u, t] : rows) {
      uni.add(u);
      tgt.add(t);
    }
    pass = pass && tgt.mean() < uni.mean();
    detail += (detail.empty() ? "" : "; ") + std::string("n=") + std::to_string(n) +
              " uniform " + fmt("%.4f", uni.mean()) + " vs ipro " + fmt("%.4f", tgt.mean());
  }
  return {pass, detail};
}

// 7. num_A is non-decreasing in the budget and complete at the full cost.
Verdict budget_monotonicity() {
  auto bad = map_indices<std::size_t>(100, [](std::size_t k) {
    auto inst = make(20, 4.0, 0.5, derive_seed(707, k));
    const auto full = targeted_control(inst.game, inst.x0, TargetingPolicy::ipro(),
                                       kDefaultEpsilon, Execution::Serial);
    const double T = full.total_cost;
    std::size_t violations = 0, last = 0;
    for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      auto b = budgeted_control(inst.game, inst.x0, TargetingPolicy::ipro(), frac * T,
                                kDefaultEpsilon, Execution::Serial);
      violations += b.num_A < last;
      last = b.num_A;
    }
    violations += last != 20;
    return violations;
  }, Execution::Parallel);
  std::size_t total = 0;
  for (auto v : bad) total += v;
  return {total == 0, "100 instances x 5 budgets, " + std::to_string(total) + " violations"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs `args` with every "{out}" replaced by a fresh directory; returns the
// exit code and the concatenated bytes of every file written there.
std::pair<int, std::string> run_cli(const std::string& args, const fs::path& out) {
  fs::remove_all(out);
  fs::create_directories(out);
  std::string cmd = std::string("\"") + IMITANET_CLI + "\" " + args;
  for (std::size_t p; (p = cmd.find("{out}")) != std::string::npos;)
    cmd.replace(p, 5, out.string());
  cmd += " > \"" + (out / "stdout").string() + "\" 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(out))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string bytes;
  for (const auto& f : files) bytes += fs::relative(f, out).string() + "\n" + slurp(f);
  // Paths echoed back name the scratch directory, which differs per run.
  for (std::size_t p; (p = bytes.find(out.string())) != std::string::npos;)
    bytes.replace(p, out.string().size(), "{out}");
  return {rc, bytes};
}

// 8. Every subcommand reproduces its output byte for byte.
Verdict determinism() {
  const fs::path root = fs::temp_directory_path() / "imitanet_acceptance";
  fs::remove_all(root);
  fs::create_directories(root / "fixture");
  const std::string game = (root / "fixture" / "game_0000.json").string();
  const std::string csv = (root / "fixture" / "rows.csv").string();
  int setup = std::system(("\"" + std::string(IMITANET_CLI) + "\" gen --n 12 --deg-exp 4 --seed 8 --count 1 " +
               "--out-dir \"" + (root / "fixture").string() + "\" > /dev/null")
                  .c_str());
  setup |= std::system(("\"" + std::string(IMITANET_CLI) + "\" experiment --id size_sweep --n 10 " +
               "--instances 3 --seed 8 --out \"" + csv + "\" > /dev/null")
                  .c_str());
  if (setup != 0) return {false, "could not build the CLI fixtures"};

  const std::vector<std::string> commands{
      "gen --n 15 --deg-exp 4 --seed 3 --count 3 --out-dir {out}",
      "gen --n 15 --radius 0.3 --p 1.5 --v 0.8 --seed 3 --count 2 --out-dir {out} --require-connected",
      "simulate --game " + game + " --sequence random --seed 5 --uniform-reward 0.05",
      "simulate --game " + game + " --sequence roundrobin --uniform-reward 0.2",
      "uniform --game " + game,
      "target --game " + game + " --policy ipro",
      "target --game " + game + " --policy rand --seed 11",
      "target --game " + game + " --policy deg --budget 0.3",
      "target --game " + game + " --policy opt",
      "verify --suite all --instances 5 --seed 4",
      "experiment --id size_sweep --n 10 12 --instances 3 --seed 6 --out {out}/rows.csv --meta {out}/meta.json",
      "experiment --id connectivity --n 10 --deg-exp 3 5 --instances 2 --seed 6",
      "experiment --id uniform_vs_targeted --n 12 --instances 3 --seed 6",
      "summarize --in " + csv + " --out {out}/summary.csv",
  };
  std::size_t mismatched = 0, failed = 0;
  std::string first_bad;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    auto a = run_cli(commands[k], root / ("a" + std::to_string(k)));
    auto b = run_cli(commands[k], root / ("b" + std::to_string(k)));
    const bool ok = a.first == 0 && b.first == 0;
    failed += !ok;
    mismatched += a.second != b.second;
    if ((!ok || a.second != b.second) && first_bad.empty()) first_bad = commands[k];
  }
  fs::remove_all(root);
  std::string detail = std::to_string(commands.size()) + " commands run twice, " +
                       std::to_string(mismatched) + " byte mismatches, " +
                       std::to_string(failed) + " non-zero exits";
  if (!first_bad.empty()) detail += "; first: " + first_bad;
  return {mismatched == 0 && failed == 0, detail};
}

}  // namespace

int main() {
  configure_threads_from_env();
  struct Criterion {
    std::string name;
    std::function<Verdict()> run;
    double limit_seconds;
  };
  constexpr double kNoLimit = 1e18;
  const std::vector<Criterion> criteria{
      {"theory suite (monotone, unique, <= n switches)", theory_suite, 60},
      {"A-coordination exhaustive, n <= 4", definition_exhaustive, 60},
      {"uniform reward = oracle, in candidates, +-1e-6 split", uniform_correctness, 120},
      {"IPRO within 5% of optimum, opt dominates", ipro_near_optimal, 600},
      {"heuristic ordering", heuristic_ordering, kNoLimit},
      {"targeted cheaper than uniform", uniform_vs_targeted, kNoLimit},
      {"budget monotonicity", budget_monotonicity, kNoLimit},
      {"CLI determinism", determinism, kNoLimit},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > criteria[k].limit_seconds) {
      v.pass = false;
      v.detail += "; over the " + fmt("%.0f", criteria[k].limit_seconds) + "s limit";
    }
    failures += !v.pass;
    std::printf("%s criterion %zu: %s -- %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].name.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures;
}
