#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "adint/attack_graph.hpp"
#include "adint/budget_fpt.hpp"
#include "adint/generator.hpp"
#include "adint/greedy.hpp"
#include "adint/json_io.hpp"
#include "adint/oracle.hpp"
#include "adint/split_fpt.hpp"
#include "adint/tree_dp.hpp"

namespace adint {

enum class Algo { kOracle, kGreedy, kBudgetFpt, kSplitFpt, kDp };

inline constexpr double kOptTolerance = 1e-6;

inline std::optional<Algo> parse_algo(const std::string& name) {
  if (name == "oracle") return Algo::kOracle;
  if (name == "greedy") return Algo::kGreedy;
  if (name == "budgetfpt") return Algo::kBudgetFpt;
  if (name == "splitfpt") return Algo::kSplitFpt;
  if (name == "dp") return Algo::kDp;
  return std::nullopt;
}

inline std::string algo_name(Algo a) {
  switch (a) {
    case Algo::kOracle: return "oracle";
    case Algo::kGreedy: return "greedy";
    case Algo::kBudgetFpt: return "budgetfpt";
    case Algo::kSplitFpt: return "splitfpt";
    case Algo::kDp: return "dp";
  }
  return "?";
}

inline bool is_exact(Algo a) { return a != Algo::kGreedy; }

struct SolveOptions {
  bool greedy_spend_leftover = true;
  bool budget_prune = true;
};

struct SolveOutcome {
  Solution solution;
  // Solver-specific counters (branch stats, width, strategies, ...).
  Json stats = Json::object();
};

inline SolveOutcome solve(const AttackGraph& g, Algo algo, std::size_t budget,
                          const SuccessFunction& f, const SolveOptions& options = {}) {
  SolveOutcome out;
  switch (algo) {
    case Algo::kOracle:
      out.solution = brute_force(g, budget, f);
      break;
    case Algo::kGreedy:
      out.solution = greedy(g, budget, f, {options.greedy_spend_leftover});
      break;
    case Algo::kBudgetFpt: {
      auto r = budget_fpt(g, budget, f, {options.budget_prune});
      out.solution = r.solution;
      out.stats["combinations_explored"] = r.stats.combinations_explored;
      out.stats["bound"] = r.stats.bound;
      break;
    }
    case Algo::kSplitFpt: {
      auto r = split_fpt(g, budget, f);
      out.solution = r.solution;
      out.stats["strategies_evaluated"] = r.strategies_evaluated;
      break;
    }
    case Algo::kDp: {
      auto r = dp_solve(g, budget, f);
      out.solution = r.solution;
      out.stats["width"] = r.width;
      out.stats["subproblems"] = r.subproblems;
      break;
    }
  }
  return out;
}

struct ExperimentSpec {
  // Exactly one source: a fixed graph or generator parameters.
  std::optional<AttackGraph> graph;
  std::optional<GenParams> generator;
  std::vector<Algo> algos;
  std::size_t budget = 0;
  // Resample this many entries per trial (fixed graph source) or override
  // GenParams::s.
  std::optional<std::size_t> entries;
  // Re-mark blockable edges per trial with this probability.
  std::optional<double> p_b;
  // Share of blockable edges given a substitute route; 0 disables.
  double substitutable = 0.0;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  double f_base = 0.95;
  bool timing = true;
  std::size_t jobs = 1;
  SolveOptions solve_options;
};

struct AlgoRun {
  Algo algo = Algo::kGreedy;
  bool ok = false;
  double rate = 0.0;
  double seconds = 0.0;
  BlockSet blocks;
  std::string error;
};

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::vector<AlgoRun> runs;
};

struct AlgoSummary {
  Algo algo = Algo::kGreedy;
  double mean_rate = 0.0;
  double mean_seconds = 0.0;
  std::size_t completed = 0;
  std::size_t failures = 0;
  // Trials within kOptTolerance of the best exact solver; set only when an
  // exact solver is part of the run.
  std::optional<std::size_t> opt;
  // Trials strictly better than every other algorithm; set only without an
  // exact solver.
  std::optional<std::size_t> wins;
};

struct ExperimentReport {
  std::vector<TrialResult> trials;
  std::vector<AlgoSummary> summary;
};

inline void check_spec(const ExperimentSpec& spec) {
  if (spec.graph.has_value() == spec.generator.has_value())
    throw InvalidInput("experiment needs exactly one graph source");
  if (spec.trials < 1) throw InvalidInput("trials must be at least 1");
  if (spec.algos.empty()) throw InvalidInput("no algorithms requested");
}

// Instance for one trial: fresh generator draw, or the fixed graph with
// entries and blockable flags optionally resampled.
inline AttackGraph trial_instance(const ExperimentSpec& spec, std::uint64_t seed) {
  AttackGraph g;
  if (spec.generator) {
    GenParams p = *spec.generator;
    p.seed = seed;
    if (spec.entries) p.s = *spec.entries;
    if (spec.p_b) p.p_b = *spec.p_b;
    g = gen_tree_like(p);
  } else {
    g = *spec.graph;
    if (spec.entries) {
      Rng rng(seed);
      std::vector<NodeId> pool;
      for (NodeId v = 0; v < g.node_count(); ++v)
        if (v != g.da()) pool.push_back(v);
      if (*spec.entries > pool.size()) throw InvalidInput("more entries requested than nodes");
      for (std::size_t i = 0; i < *spec.entries; ++i)
        std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
      std::vector<char> entry(g.node_count(), 0);
      for (std::size_t i = 0; i < *spec.entries; ++i) entry[pool[i]] = 1;
      std::vector<Edge> edges(g.edges().begin(), g.edges().end());
      g = AttackGraph(std::move(entry), std::move(edges), g.da(), g.labels());
    }
    if (spec.p_b) g = mark_blockable(g, *spec.p_b, seed ^ 0x9E3779B97F4A7C15ULL);
  }
  if (spec.substitutable > 0.0) g = add_substitutable(g, seed ^ 0x5DEECE66DULL, spec.substitutable);
  return g;
}

inline TrialResult run_trial(const ExperimentSpec& spec, std::size_t trial) {
  TrialResult result;
  result.trial = trial;
  result.seed = spec.seed + trial;
  const SuccessFunction f{spec.f_base};
  AttackGraph g;
  std::string setup_error;
  try {
    g = trial_instance(spec, result.seed);
  } catch (const std::exception& e) {
    setup_error = e.what();
  }
  for (Algo algo : spec.algos) {
    AlgoRun run;
    run.algo = algo;
    if (!setup_error.empty()) {
      run.error = setup_error;
      result.runs.push_back(run);
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
      auto outcome = solve(g, algo, spec.budget, f, spec.solve_options);
      run.ok = true;
      run.rate = outcome.solution.rate;
      run.blocks = outcome.solution.blocks;
    } catch (const std::exception& e) {
      run.error = e.what();
    }
    if (spec.timing)
      run.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.runs.push_back(std::move(run));
  }
  return result;
}

inline std::vector<AlgoSummary> summarize(const ExperimentSpec& spec,
                                          const std::vector<TrialResult>& trials) {
  const bool have_exact = std::any_of(spec.algos.begin(), spec.algos.end(), is_exact);
  std::vector<AlgoSummary> summary(spec.algos.size());
  for (std::size_t a = 0; a < spec.algos.size(); ++a) {
    summary[a].algo = spec.algos[a];
    if (have_exact) summary[a].opt = 0;
    else summary[a].wins = 0;
  }
  for (const TrialResult& t : trials) {
    double exact = std::numeric_limits<double>::infinity();
    for (const AlgoRun& r : t.runs)
      if (r.ok && is_exact(r.algo)) exact = std::min(exact, r.rate);
    for (std::size_t a = 0; a < t.runs.size(); ++a) {
      const AlgoRun& r = t.runs[a];
      AlgoSummary& s = summary[a];
      if (!r.ok) {
        ++s.failures;
        continue;
      }
      ++s.completed;
      s.mean_rate += r.rate;
      s.mean_seconds += r.seconds;
      if (s.opt && std::isfinite(exact) && std::abs(r.rate - exact) <= kOptTolerance) ++*s.opt;
      if (s.wins) {
        bool beats_all = t.runs.size() > 1;
        for (std::size_t b = 0; b < t.runs.size(); ++b)
          if (b != a && t.runs[b].ok && !(r.rate < t.runs[b].rate - kOptTolerance))
            beats_all = false;
        if (beats_all) ++*s.wins;
      }
    }
  }
  for (AlgoSummary& s : summary) {
    if (s.completed == 0) continue;
    s.mean_rate /= static_cast<double>(s.completed);
    s.mean_seconds /= static_cast<double>(s.completed);
  }
  return summary;
}

// Runs every trial (optionally on several threads) and aggregates the
// Success Rate, Time, #Opt and #Win columns. Output order follows the trial
// index regardless of scheduling.
inline ExperimentReport run_experiment(const ExperimentSpec& spec) {
  check_spec(spec);
  ExperimentReport report;
  report.trials.resize(spec.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < spec.trials; i = next++) report.trials[i] = run_trial(spec, i);
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(spec.jobs, spec.trials));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  report.summary = summarize(spec, report.trials);
  return report;
}

inline Json report_to_json(const ExperimentReport& report) {
  Json doc;
  Json trials = Json::array();
  for (const TrialResult& t : report.trials) {
    Json runs = Json::array();
    for (const AlgoRun& r : t.runs) {
      Json run{{"algo", algo_name(r.algo)}, {"ok", r.ok}};
      if (r.ok) {
        run["rate"] = r.rate;
        run["time_s"] = r.seconds;
        run["blocked"] = r.blocks.ids();
      } else {
        run["error"] = r.error;
      }
      runs.push_back(std::move(run));
    }
    trials.push_back(Json{{"trial", t.trial}, {"seed", t.seed}, {"results", std::move(runs)}});
  }
  doc["trials"] = std::move(trials);
  Json summary = Json::array();
  for (const AlgoSummary& s : report.summary) {
    Json row{{"algo", algo_name(s.algo)},
             {"success_rate", s.mean_rate},
             {"time_s", s.mean_seconds},
             {"completed", s.completed},
             {"failures", s.failures}};
    if (s.opt) row["opt"] = *s.opt;
    if (s.wins) row["win"] = *s.wins;
    summary.push_back(std::move(row));
  }
  doc["summary"] = std::move(summary);
  return doc;
}

inline std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "algo,success_rate,time_s,opt,win,completed,failures\n";
  out.precision(6);
  out << std::fixed;
  for (const AlgoSummary& s : report.summary) {
    out << algo_name(s.algo) << ',' << s.mean_rate << ',' << s.mean_seconds << ',';
    if (s.opt) out << *s.opt;
    out << ',';
    if (s.wins) out << *s.wins;
    out << ',' << s.completed << ',' << s.failures << '\n';
  }
  return out.str();
}

}  // namespace adint
