#include "imitanet/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>

#include "imitanet/errors.hpp"
#include "imitanet/netgen.hpp"
#include "imitanet/targeted_control.hpp"
#include "imitanet/uniform_control.hpp"

namespace imitanet {

namespace {

const std::vector<std::string> kExperiments{
    "uniform_vs_targeted", "size_sweep", "connectivity", "variance", "table1"};
const std::vector<std::string> kPolicyOrder{"uniform", "rand", "deg", "iro",
                                            "ipo",     "ime",  "ipro", "opt"};
const std::vector<std::string> kCsvColumns{
    "experiment", "instance_seed",  "n",     "radius",     "p",
    "v",          "policy",         "total_cost", "mean_incentive",
    "num_A",      "iterations",     "wall_time",  "error"};

struct GridPoint {
  std::size_t n;
  double radius;
  double p;
  double v;
};

std::vector<GridPoint> grid(const ExperimentConfig& cfg) {
  std::vector<GridPoint> out;
  for (std::size_t n : cfg.n_values) {
    std::vector<double> radii = cfg.radius_values;
    if (radii.empty()) {
      for (double d : cfg.deg_exp_values) radii.push_back(radius_for_mean_degree(n, d));
    }
    for (double r : radii) {
      for (double p : cfg.p_values) {
        for (double v : cfg.v_values) out.push_back({n, r, p, v});
      }
    }
  }
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

std::vector<ResultRow> run_instance(const ExperimentConfig& cfg,
                                    const GridPoint& pt, std::uint64_t seed,
                                    InstanceMeta& meta) {
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  meta = {cfg.experiment, seed, pt.n, pt.radius, 0, 0};

  auto base_row = [&](const std::string& policy) {
    ResultRow row;
    row.experiment = cfg.experiment;
    row.instance_seed = seed;
    row.n = pt.n;
    row.radius = pt.radius;
    row.p = pt.p;
    row.v = pt.v;
    row.policy = policy;
    return row;
  };

  std::optional<Instance> inst;
  std::string gen_error;
  try {
    inst = generate_instance({pt.n, pt.radius, pt.p, pt.v, cfg.require_connected},
                             seed);
    meta.components = inst->components;
    meta.initial_A = inst->x0.count(Strategy::A);
  } catch (const std::exception& e) {
    gen_error = std::string("generation: ") + e.what();
  }

  std::vector<ResultRow> rows;
  for (const auto& policy : cfg.policies) {
    ResultRow row = base_row(policy);
    if (!inst) {
      row.error = gen_error;
      rows.push_back(row);
      continue;
    }
    const auto t0 = Clock::now();
    try {
      if (policy == "uniform") {
        const UniformSolution sol = solve_uniform(inst->game, inst->x0);
        row.total_cost = static_cast<double>(pt.n) * sol.r0_star;
        row.num_A = pt.n;
        row.iterations = sol.simulations;
      } else {
        ControlOutcome out;
        if (policy == "opt") {
          ExhaustiveOptions opts;
          opts.deadline = started + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(cfg.timeout_seconds));
          out = exhaustive_optimal(inst->game, inst->x0, cfg.epsilon, opts);
        } else {
          const auto tp = TargetingPolicy::parse(policy, cfg.alpha, cfg.beta,
                                                 derive_seed(seed, 0x72616e64));
          out = targeted_control(inst->game, inst->x0, tp, cfg.epsilon,
                                 Execution::Serial);
        }
        row.total_cost = out.total_cost;
        row.num_A = out.num_A;
        row.iterations = out.iterations;
      }
      row.mean_incentive = row.total_cost / static_cast<double>(pt.n);
    } catch (const SearchBudgetExceeded&) {
      row.error = "timeout";
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    if (cfg.timing) {
      row.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
    }
    rows.push_back(row);
  }

  // The exhaustive optimum must never lose to a heuristic on its instance.
  const auto opt = std::find_if(rows.begin(), rows.end(), [](const ResultRow& r) {
    return r.policy == "opt" && r.error.empty();
  });
  if (opt != rows.end()) {
    for (const auto& r : rows) {
      if (r.policy == "opt" || r.policy == "uniform" || !r.error.empty()) continue;
      if (opt->total_cost > r.total_cost) {
        throw InternalError("exhaustive optimum " + fmt(opt->total_cost) +
                            " exceeds " + r.policy + " cost " +
                            fmt(r.total_cost) + " on instance " +
                            std::to_string(seed));
      }
    }
  }
  return rows;
}

ExperimentResult run_single(const ExperimentConfig& cfg, Execution exec) {
  const auto points = grid(cfg);
  const std::size_t total = points.size() * cfg.instances;
  std::vector<InstanceMeta> meta(total);
  auto per_instance = map_indices<std::vector<ResultRow>>(
      total,
      [&](std::size_t k) {
        return run_instance(cfg, points[k / cfg.instances],
                            derive_seed(cfg.seed, k), meta[k]);
      },
      exec);
  ExperimentResult out;
  out.instances = std::move(meta);
  for (auto& rows : per_instance) {
    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
  }
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults(const std::string& experiment) {
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  const std::vector<std::string> heuristics{"rand", "deg", "iro",
                                            "ipo",  "ime", "ipro"};
  if (experiment == "uniform_vs_targeted") {
    cfg.policies = {"uniform", "ipro"};
  } else if (experiment == "size_sweep") {
    cfg.policies = heuristics;
  } else if (experiment == "connectivity") {
    cfg.n_values = {20};
    cfg.deg_exp_values = {2, 3, 4, 5, 6, 7, 8, 9, 10};
    cfg.instances = 50;
    cfg.policies = heuristics;
    cfg.policies.push_back("opt");
  } else if (experiment == "variance") {
    cfg.n_values = {20};
    cfg.v_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    cfg.instances = 50;
    cfg.policies = heuristics;
    cfg.policies.push_back("opt");
  } else if (experiment == "table1") {
    cfg.policies = heuristics;
    cfg.policies.push_back("opt");
    cfg.instances = 50;
  } else {
    throw ArgumentError("unknown experiment '" + experiment + "'");
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  if (std::find(kExperiments.begin(), kExperiments.end(), experiment) ==
      kExperiments.end()) {
    throw ArgumentError("unknown experiment '" + experiment + "'");
  }
  if (instances == 0) throw ArgumentError("instance count must be >= 1");
  if (n_values.empty() || p_values.empty() || v_values.empty() ||
      policies.empty() || (deg_exp_values.empty() && radius_values.empty())) {
    throw ArgumentError("experiment parameter lists must be nonempty");
  }
  for (const auto& p : policies) {
    if (std::find(kPolicyOrder.begin(), kPolicyOrder.end(), p) ==
        kPolicyOrder.end()) {
      throw ArgumentError("unknown policy '" + p + "'");
    }
  }
  for (std::size_t n : n_values) {
    if (n < 2) throw ArgumentError("n must be >= 2");
  }
  if (!(epsilon > 0.0)) throw ArgumentError("epsilon must be positive");
  if (!(timeout_seconds > 0.0)) throw ArgumentError("timeout must be positive");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  try {
    ExperimentConfig cfg =
        ExperimentConfig::defaults(j.value("experiment", std::string("size_sweep")));
    if (j.contains("n")) cfg.n_values = j.at("n").get<std::vector<std::size_t>>();
    if (j.contains("deg_exp")) {
      cfg.deg_exp_values = j.at("deg_exp").get<std::vector<double>>();
    }
    if (j.contains("radius")) cfg.radius_values = j.at("radius").get<std::vector<double>>();
    if (j.contains("p")) cfg.p_values = j.at("p").get<std::vector<double>>();
    if (j.contains("v")) cfg.v_values = j.at("v").get<std::vector<double>>();
    if (j.contains("instances")) cfg.instances = j.at("instances").get<std::size_t>();
    if (j.contains("policies")) {
      cfg.policies = j.at("policies").get<std::vector<std::string>>();
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.beta = j.value("beta", cfg.beta);
    cfg.timeout_seconds = j.value("timeout", cfg.timeout_seconds);
    cfg.timing = j.value("timing", cfg.timing);
    cfg.require_connected = j.value("require_connected", cfg.require_connected);
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed experiment config: ") + e.what());
  }
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  return {{"experiment", cfg.experiment}, {"n", cfg.n_values},
          {"deg_exp", cfg.deg_exp_values}, {"radius", cfg.radius_values},
          {"p", cfg.p_values},             {"v", cfg.v_values},
          {"instances", cfg.instances},    {"policies", cfg.policies},
          {"seed", cfg.seed},              {"epsilon", cfg.epsilon},
          {"alpha", cfg.alpha},            {"beta", cfg.beta},
          {"timeout", cfg.timeout_seconds}, {"timing", cfg.timing},
          {"require_connected", cfg.require_connected}};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, Execution exec) {
  cfg.validate();
  if (cfg.experiment != "table1") return run_single(cfg, exec);

  // The three comparison studies, sharing instances/seed/policies/epsilon.
  ExperimentResult out;
  std::uint64_t part = 0;
  for (const char* id : {"size_sweep", "connectivity", "variance"}) {
    ExperimentConfig sub = ExperimentConfig::defaults(id);
    sub.instances = cfg.instances;
    sub.policies = cfg.policies;
    sub.seed = derive_seed(cfg.seed, part++);
    sub.epsilon = cfg.epsilon;
    sub.alpha = cfg.alpha;
    sub.beta = cfg.beta;
    sub.timeout_seconds = cfg.timeout_seconds;
    sub.timing = cfg.timing;
    sub.require_connected = cfg.require_connected;
    if (std::string(id) == "size_sweep") {
      // Exhaustive search is impractical at the larger sizes.
      std::erase(sub.policies, std::string("opt"));
    }
    ExperimentResult r = run_single(sub, exec);
    out.rows.insert(out.rows.end(), r.rows.begin(), r.rows.end());
    out.instances.insert(out.instances.end(), r.instances.begin(),
                         r.instances.end());
  }
  return out;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  for (std::size_t k = 0; k < kCsvColumns.size(); ++k) {
    os << (k ? "," : "") << kCsvColumns[k];
  }
  os << '\n';
  for (const auto& r : rows) {
    os << csv_escape(r.experiment) << ',' << r.instance_seed << ',' << r.n
       << ',' << fmt(r.radius) << ',' << fmt(r.p) << ',' << fmt(r.v) << ','
       << csv_escape(r.policy) << ',' << fmt(r.total_cost) << ','
       << fmt(r.mean_incentive) << ',' << r.num_A << ',' << r.iterations << ','
       << fmt(r.wall_time) << ',' << csv_escape(r.error) << '\n';
  }
}

std::vector<ResultRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ArgumentError("empty CSV");
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t k = 0; k < header.size(); ++k) col[header[k]] = k;
  for (const auto& name : kCsvColumns) {
    if (!col.count(name)) throw ArgumentError("CSV is missing column '" + name + "'");
  }
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw ArgumentError("CSV line " + std::to_string(line_no) +
                          " has the wrong number of fields");
    }
    try {
      ResultRow r;
      r.experiment = f[col["experiment"]];
      r.instance_seed = std::stoull(f[col["instance_seed"]]);
      r.n = std::stoull(f[col["n"]]);
      r.radius = std::stod(f[col["radius"]]);
      r.p = std::stod(f[col["p"]]);
      r.v = std::stod(f[col["v"]]);
      r.policy = f[col["policy"]];
      r.total_cost = std::stod(f[col["total_cost"]]);
      r.mean_incentive = std::stod(f[col["mean_incentive"]]);
      r.num_A = std::stoull(f[col["num_A"]]);
      r.iterations = std::stoull(f[col["iterations"]]);
      r.wall_time = std::stod(f[col["wall_time"]]);
      r.error = f[col["error"]];
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ArgumentError("CSV line " + std::to_string(line_no) +
                          " has a malformed number");
    }
  }
  return rows;
}

nlohmann::json instances_to_json(const std::vector<InstanceMeta>& meta) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : meta) {
    arr.push_back({{"experiment", m.experiment},
                   {"instance_seed", m.instance_seed},
                   {"n", m.n},
                   {"radius", m.radius},
                   {"components", m.components},
                   {"initial_A", m.initial_A}});
  }
  return arr;
}

int policy_rank(const std::string& policy) {
  const auto it = std::find(kPolicyOrder.begin(), kPolicyOrder.end(), policy);
  return it == kPolicyOrder.end() ? static_cast<int>(kPolicyOrder.size())
                                  : static_cast<int>(it - kPolicyOrder.begin());
}

std::vector<SummaryCell> summarize(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw ArgumentError("nothing to summarize");
  std::vector<std::string> experiments;
  for (const auto& r : rows) {
    if (std::find(experiments.begin(), experiments.end(), r.experiment) ==
        experiments.end()) {
      experiments.push_back(r.experiment);
    }
  }
  struct Acc {
    std::vector<double> values;
    std::size_t excluded = 0;
  };
  std::map<std::pair<std::size_t, std::pair<int, std::string>>, Acc> groups;
  for (const auto& r : rows) {
    const auto e = static_cast<std::size_t>(
        std::find(experiments.begin(), experiments.end(), r.experiment) -
        experiments.begin());
    Acc& acc = groups[{e, {policy_rank(r.policy), r.policy}}];
    if (r.error.empty()) {
      acc.values.push_back(r.mean_incentive);
    } else {
      ++acc.excluded;
    }
  }
  std::vector<SummaryCell> cells;
  for (const auto& [key, acc] : groups) {
    SummaryCell c;
    c.experiment = experiments[key.first];
    c.policy = key.second.second;
    c.count = acc.values.size();
    c.excluded = acc.excluded;
    if (c.count > 0) {
      double sum = 0.0;
      for (double x : acc.values) sum += x;
      c.mean = sum / static_cast<double>(c.count);
    }
    if (c.count > 1) {
      double ss = 0.0;
      for (double x : acc.values) ss += (x - c.mean) * (x - c.mean);
      const double sd = std::sqrt(ss / static_cast<double>(c.count - 1));
      c.std_error = sd / std::sqrt(static_cast<double>(c.count));
    }
    cells.push_back(c);
  }
  return cells;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryCell>& cells) {
  os << "experiment,policy,count,excluded,mean,std_error\n";
  for (const auto& c : cells) {
    os << csv_escape(c.experiment) << ',' << csv_escape(c.policy) << ','
       << c.count << ',' << c.excluded << ',' << fmt(c.mean) << ','
       << fmt(c.std_error) << '\n';
  }
}

std::string format_summary_text(const std::vector<SummaryCell>& cells) {
  std::vector<std::string> experiments;
  std::vector<std::string> policies;
  for (const auto& c : cells) {
    if (std::find(experiments.begin(), experiments.end(), c.experiment) ==
        experiments.end()) {
      experiments.push_back(c.experiment);
    }
    if (std::find(policies.begin(), policies.end(), c.policy) == policies.end()) {
      policies.push_back(c.policy);
    }
  }
  std::stable_sort(policies.begin(), policies.end(),
                   [](const std::string& a, const std::string& b) {
                     return policy_rank(a) < policy_rank(b);
                   });
  constexpr int kWidth = 22;
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-10s", "policy");
  os << buf;
  for (const auto& e : experiments) {
    std::snprintf(buf, sizeof buf, "%*s", kWidth, e.c_str());
    os << buf;
  }
  os << '\n';
  for (const auto& p : policies) {
    std::snprintf(buf, sizeof buf, "%-10s", p.c_str());
    os << buf;
    for (const auto& e : experiments) {
      const auto it = std::find_if(cells.begin(), cells.end(), [&](const SummaryCell& c) {
        return c.experiment == e && c.policy == p;
      });
      if (it == cells.end() || it->count == 0) {
        std::snprintf(buf, sizeof buf, "%*s", kWidth, "--");
      } else {
        char cell[48];
        std::snprintf(cell, sizeof cell, "%.4f +- %.4f", it->mean, it->std_error);
        std::snprintf(buf, sizeof buf, "%*s", kWidth, cell);
      }
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace imitanet
