#include "imitanet/verify.hpp"

#include <algorithm>
#include <sstream>

#include "imitanet/errors.hpp"
#include "imitanet/netgen.hpp"
#include "imitanet/uniform_control.hpp"

namespace imitanet {

namespace {

// Checks the two implications for every agent; appends one violation per
// failing agent.
void check_pair(const UpdateRule& rule, const NetworkGame& game,
                const StrategyState& y, const StrategyState& z,
                std::uint64_t seed, PropertyReport& report) {
  for (AgentId i = 0; i < game.size(); ++i) {
    const RuleOutcome fy = rule.evaluate(game, y, i);
    if (fy == RuleOutcome::OnlyB) continue;
    const RuleOutcome fz = rule.evaluate(game, z, i);
    const bool ok = fy == RuleOutcome::OnlyA ? fz == RuleOutcome::OnlyA
                                             : fz != RuleOutcome::OnlyB;
    if (!ok) {
      std::ostringstream w;
      w << "y=" << y.to_string() << " z=" << z.to_string() << " agent="
        << i + 1 << " f(y)=" << to_string(fy) << " f(z)=" << to_string(fz);
      report.violations.push_back({seed, w.str()});
    }
  }
}

struct SuiteInstance {
  Instance inst;
  Rng rng;
};

SuiteInstance make_suite_instance(const SuiteConfig& cfg, std::size_t n,
                                  std::uint64_t seed) {
  Rng meta(seed);
  if (n == 0) {
    n = cfg.n_min + meta.uniform_index(cfg.n_max - cfg.n_min + 1);
  }
  InstanceSpec spec{n, radius_for_mean_degree(n, cfg.deg_exp), cfg.p, cfg.v,
                    false};
  Instance inst = generate_instance(spec, meta.next());
  return {std::move(inst), Rng(meta.next())};
}

PropertyReport run_instances(
    const std::string& name, std::size_t count, Execution exec,
    const std::function<PropertyReport(std::size_t)>& body) {
  auto reports = map_indices<PropertyReport>(count, body, exec);
  PropertyReport total{name, 0, {}};
  for (const auto& r : reports) total.merge(r);
  return total;
}

std::vector<AgentId> switched_agents(const std::vector<SwitchEvent>& events) {
  std::vector<AgentId> out;
  for (const auto& e : events) out.push_back(e.agent);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

void PropertyReport::merge(const PropertyReport& other) {
  instances += other.instances;
  violations.insert(violations.end(), other.violations.begin(),
                    other.violations.end());
}

nlohmann::json report_to_json(const PropertyReport& report) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& viol : report.violations) {
    v.push_back({{"seed", viol.seed}, {"witness", viol.witness}});
  }
  return {{"property", report.property},
          {"instances", report.instances},
          {"violations", v},
          {"passed", report.passed()}};
}

PropertyReport check_a_coordinating(const UpdateRule& rule,
                                    const NetworkGame& game,
                                    std::size_t samples, Rng& rng,
                                    std::uint64_t seed) {
  PropertyReport report{"a_coordinating", 1, {}};
  const std::size_t n = game.size();
  for (std::size_t s = 0; s < samples; ++s) {
    StrategyState y(n, Strategy::A);
    for (AgentId i = 0; i < n; ++i) {
      if (rng.bernoulli(0.5)) y.set(i, Strategy::B);
    }
    StrategyState z = y;
    const double flip = rng.uniform01();
    for (AgentId i = 0; i < n; ++i) {
      if (y[i] == Strategy::B && rng.bernoulli(flip)) z.set(i, Strategy::A);
    }
    check_pair(rule, game, y, z, seed, report);
  }
  return report;
}

PropertyReport check_a_coordinating_exhaustive(const UpdateRule& rule,
                                               const NetworkGame& game,
                                               std::uint64_t seed) {
  const std::size_t n = game.size();
  if (n > 12) throw ArgumentError("exhaustive A-coordination check needs n <= 12");
  PropertyReport report{"a_coordinating_exhaustive", 1, {}};
  const std::uint32_t full = (1u << n) - 1;
  // Bit set = agent plays A.
  auto decode = [n](std::uint32_t mask) {
    StrategyState x(n, Strategy::B);
    for (AgentId i = 0; i < n; ++i) {
      if (mask & (1u << i)) x.set(i, Strategy::A);
    }
    return x;
  };
  for (std::uint32_t ymask = 0; ymask <= full; ++ymask) {
    const StrategyState y = decode(ymask);
    const std::uint32_t free = full & ~ymask;
    // Every superset of ymask, including ymask itself.
    for (std::uint32_t add = free;; add = (add - 1) & free) {
      check_pair(rule, game, y, decode(ymask | add), seed, report);
      if (add == 0) break;
    }
  }
  return report;
}

PropertyReport check_a_monotone(const NetworkGame& game,
                                const StrategyState& x0,
                                const RewardVector& rewards,
                                std::size_t sequences, Rng& rng,
                                std::uint64_t seed) {
  require_equilibrium(game, x0);
  PropertyReport report{"a_monotone", 1, {}};
  const NetworkGame rewarded = apply_rewards(game, rewards);
  const std::size_t n = game.size();
  const std::uint64_t budget = 1000 * static_cast<std::uint64_t>(n) * n + 1000;
  for (std::size_t s = 0; s < sequences; ++s) {
    const std::uint64_t seq_seed = rng.next();
    const Trajectory traj = simulate(imitation_rule(), rewarded, x0,
                                     RandomUniform{seq_seed}, budget);
    for (const auto& e : traj.events) {
      if (e.from == Strategy::A) {
        std::ostringstream w;
        w << "sequence seed " << seq_seed << ": agent " << e.agent + 1
          << " switched A->B at t=" << e.t;
        report.violations.push_back({seed, w.str()});
      }
    }
    if (!traj.converged) {
      report.violations.push_back(
          {seed, "sequence seed " + std::to_string(seq_seed) +
                     ": no equilibrium within activation budget"});
    }
  }
  return report;
}

PropertyReport check_unique_convergence(const NetworkGame& game,
                                        const StrategyState& x0,
                                        const RewardVector& rewards,
                                        std::size_t sequences, Rng& rng,
                                        std::uint64_t seed) {
  require_equilibrium(game, x0);
  PropertyReport report{"unique_convergence", 1, {}};
  const NetworkGame rewarded = apply_rewards(game, rewards);
  const std::size_t n = game.size();
  const std::uint64_t budget = 1000 * static_cast<std::uint64_t>(n) * n + 1000;

  struct Run {
    std::string label;
    StrategyState final_state;
    std::vector<AgentId> switched;
    std::size_t switches;
    bool converged;
  };
  std::vector<Run> runs;
  for (std::size_t s = 0; s < sequences; ++s) {
    const std::uint64_t seq_seed = rng.next();
    Trajectory t = simulate(imitation_rule(), rewarded, x0,
                            RandomUniform{seq_seed}, budget);
    runs.push_back({"random(" + std::to_string(seq_seed) + ")", t.final_state,
                    switched_agents(t.events), t.events.size(), t.converged});
  }
  {
    Trajectory t = simulate(imitation_rule(), rewarded, x0, RoundRobin{}, budget);
    runs.push_back({"round_robin", t.final_state, switched_agents(t.events),
                    t.events.size(), t.converged});
  }
  try {
    Relaxation r = relax_traced(imitation_rule(), rewarded, x0);
    runs.push_back({"switchers_only", r.state, switched_agents(r.events),
                    r.events.size(), true});
  } catch (const NonConvergenceError& e) {
    report.violations.push_back({seed, std::string("switchers_only: ") + e.what()});
  }

  for (const auto& run : runs) {
    if (!run.converged) {
      report.violations.push_back({seed, run.label + ": did not converge"});
    }
    if (run.switches > n) {
      report.violations.push_back(
          {seed, run.label + ": " + std::to_string(run.switches) +
                     " switches exceeds n=" + std::to_string(n)});
    }
    if (run.final_state != runs.front().final_state ||
        run.switched != runs.front().switched) {
      report.violations.push_back(
          {seed, run.label + " reached " + run.final_state.to_string() +
                     " but " + runs.front().label + " reached " +
                     runs.front().final_state.to_string()});
    }
  }
  return report;
}

PropertyReport check_candidate_membership(const NetworkGame& game,
                                          const StrategyState& x0,
                                          std::uint64_t seed) {
  PropertyReport report{"candidate_membership", 1, {}};
  const UniformSolution sol = solve_uniform(game, x0);
  const CandidateRewards cands = candidate_rewards(game, x0);
  const double r_star = sol.r0_star;
  if (!cands.contains(r_star)) {
    std::ostringstream w;
    w.precision(17);
    w << "r0*=" << r_star << " not in candidate set";
    report.violations.push_back({seed, w.str()});
  }

  const auto& v = cands.values;
  double min_gap = 1.0;
  for (std::size_t k = 1; k < v.size(); ++k) min_gap = std::min(min_gap, v[k] - v[k - 1]);
  const double delta = std::min(1e-7, min_gap / 4.0);

  std::vector<double> probes;
  for (double c : v) {
    if (c < 0.0) continue;
    for (double p : {c - delta, c, c + delta}) {
      if (p >= 0.0) probes.push_back(p);
    }
  }
  probes.push_back(v.back() + 1.0);
  for (double p : probes) {
    if (p == r_star) continue;
    const bool ok = succeeds_all_A(game, x0, p);
    if (ok != (p > r_star)) {
      std::ostringstream w;
      w.precision(17);
      w << "reward " << p << (ok ? " succeeds below" : " fails above")
        << " r0*=" << r_star;
      report.violations.push_back({seed, w.str()});
    }
  }
  return report;
}

std::vector<Graph> connected_graphs(std::size_t n) {
  std::vector<Edge> all;
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = i + 1; j < n; ++j) all.emplace_back(i, j);
  }
  if (all.size() > 20) throw ArgumentError("connected_graphs: n too large");
  std::vector<Graph> out;
  for (std::uint32_t mask = 0; mask < (1u << all.size()); ++mask) {
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < all.size(); ++k) {
      if (mask & (1u << k)) edges.push_back(all[k]);
    }
    Graph g = Graph::from_edges(n, edges);
    if (g.component_count() == 1) out.push_back(std::move(g));
  }
  return out;
}

PayoffMatrix random_coordinating_matrix(Rng& rng) {
  auto row = [&rng](double& diag, double& off) {
    double u = rng.uniform(-1.0, 2.0);
    double w = rng.uniform(-1.0, 2.0);
    while (u == w) w = rng.uniform(-1.0, 2.0);
    diag = std::max(u, w);
    off = std::min(u, w);
  };
  PayoffMatrix pm;
  row(pm.a, pm.b);
  row(pm.d, pm.c);
  return pm;
}

RewardVector random_rewards(std::size_t n, Rng& rng) {
  const double scale = rng.uniform(0.0, 2.0);
  std::vector<double> r(n, 0.0);
  for (auto& ri : r) {
    if (rng.bernoulli(0.5)) ri = scale * rng.uniform01();
  }
  return RewardVector(std::move(r));
}

PropertyReport run_acoord_sampled_suite(const SuiteConfig& cfg, Execution exec) {
  return run_instances("a_coordinating", cfg.instances, exec, [&](std::size_t k) {
    const std::uint64_t seed = derive_seed(cfg.seed, k);
    auto si = make_suite_instance(cfg, 0, seed);
    auto r = check_a_coordinating(imitation_rule(), si.inst.game,
                                  cfg.pair_samples, si.rng, seed);
    return r;
  });
}

PropertyReport run_acoord_exhaustive_suite(const SuiteConfig& cfg,
                                           Execution exec) {
  struct Job {
    std::size_t n;
    std::size_t graph;
    std::size_t draw;
  };
  std::vector<std::vector<Graph>> graphs;
  std::vector<Job> jobs;
  for (std::size_t n = 1; n <= cfg.exhaustive_max_n; ++n) {
    graphs.push_back(connected_graphs(n));
    for (std::size_t g = 0; g < graphs.back().size(); ++g) {
      for (std::size_t d = 0; d < cfg.exhaustive_draws; ++d) jobs.push_back({n, g, d});
    }
  }
  return run_instances(
      "a_coordinating_exhaustive", jobs.size(), exec, [&](std::size_t k) {
        const Job& job = jobs[k];
        const std::uint64_t seed = derive_seed(cfg.seed, k);
        Rng rng(seed);
        std::vector<PayoffMatrix> payoffs(job.n);
        for (auto& pm : payoffs) pm = random_coordinating_matrix(rng);
        NetworkGame game(graphs[job.n - 1][job.graph], std::move(payoffs));
        return check_a_coordinating_exhaustive(imitation_rule(), game, seed);
      });
}

PropertyReport run_monotone_suite(const SuiteConfig& cfg, Execution exec) {
  return run_instances("a_monotone", cfg.instances, exec, [&](std::size_t k) {
    const std::uint64_t seed = derive_seed(cfg.seed, k);
    auto si = make_suite_instance(cfg, 0, seed);
    const RewardVector r = random_rewards(si.inst.game.size(), si.rng);
    return check_a_monotone(si.inst.game, si.inst.x0, r, cfg.sequences, si.rng,
                            seed);
  });
}

PropertyReport run_unique_suite(const SuiteConfig& cfg, Execution exec) {
  return run_instances("unique_convergence", cfg.instances, exec,
                       [&](std::size_t k) {
                         const std::uint64_t seed = derive_seed(cfg.seed, k);
                         auto si = make_suite_instance(cfg, 0, seed);
                         const RewardVector r =
                             random_rewards(si.inst.game.size(), si.rng);
                         return check_unique_convergence(
                             si.inst.game, si.inst.x0, r, cfg.sequences,
                             si.rng, seed);
                       });
}

PropertyReport run_candidates_suite(const SuiteConfig& cfg, Execution exec) {
  return run_instances("candidate_membership", cfg.instances, exec,
                       [&](std::size_t k) {
                         const std::uint64_t seed = derive_seed(cfg.seed, k);
                         auto si = make_suite_instance(cfg, cfg.candidate_n, seed);
                         return check_candidate_membership(si.inst.game,
                                                           si.inst.x0, seed);
                       });
}

std::vector<PropertyReport> run_suites(const std::string& suite,
                                       const SuiteConfig& cfg, Execution exec) {
  std::vector<PropertyReport> out;
  const bool all = suite == "all";
  if (all || suite == "acoord") {
    out.push_back(run_acoord_sampled_suite(cfg, exec));
    out.push_back(run_acoord_exhaustive_suite(cfg, exec));
  }
  if (all || suite == "monotone") out.push_back(run_monotone_suite(cfg, exec));
  if (all || suite == "unique") out.push_back(run_unique_suite(cfg, exec));
  if (all || suite == "candidates") out.push_back(run_candidates_suite(cfg, exec));
  if (out.empty()) throw ArgumentError("unknown suite '" + suite + "'");
  return out;
}

}  // namespace imitanet
