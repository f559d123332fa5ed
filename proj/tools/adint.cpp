// adint: command-line front end for the interdiction solvers.
//
// Exit codes: 0 success, 1 infeasible instance or enumeration guard hit,
// 2 precondition failure (invalid input, cyclic graph where a DAG is needed).

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "adint/experiment.hpp"

using namespace adint;

namespace {

constexpr int kExitGuard = 1;
constexpr int kExitPrecondition = 2;

void emit(const Json& doc, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << doc.dump(2) << '\n';
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

// Loads a graph and rejects it unless it is a valid instance. With `prune`,
// nodes that cannot reach da are stripped first.
AttackGraph load_instance(const std::string& path, bool prune) {
  AttackGraph g = load_graph(path);
  if (prune && g.construction_problems().empty() && g.da() < g.node_count()) {
    const NodeId da = g.da();
    g = preprocess(g, std::span<const NodeId>(&da, 1)).graph;
  }
  auto problems = validate(g);
  if (!problems.empty()) {
    std::string msg = path + " is not a valid instance:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw InvalidInput(msg);
  }
  return g;
}

std::vector<NodeId> resolve_labels(const AttackGraph& g, const std::vector<Label>& labels) {
  std::vector<NodeId> out;
  for (Label l : labels) {
    auto v = g.find(l);
    if (!v) throw InvalidInput("unknown node " + std::to_string(l));
    out.push_back(*v);
  }
  return out;
}

// Edge ids of `reduced` translated to ids of `original` by endpoint labels.
std::vector<EdgeId> translate_edges(const AttackGraph& original, const AttackGraph& reduced,
                                    const BlockSet& blocks) {
  std::map<std::pair<Label, Label>, EdgeId> index;
  for (EdgeId e = 0; e < original.edge_count(); ++e)
    index.emplace(std::pair(original.label(original.edge(e).src),
                            original.label(original.edge(e).dst)),
                  e);
  std::vector<EdgeId> out;
  for (EdgeId e : blocks)
    out.push_back(index.at({reduced.label(reduced.edge(e).src), reduced.label(reduced.edge(e).dst)}));
  std::sort(out.begin(), out.end());
  return out;
}

Json distances_json(const AttackGraph& g, const Evaluation& ev) {
  Json out = Json::object();
  for (const auto& [v, d] : ev.per_entry_distance) out[std::to_string(g.label(v))] = distance_to_json(d);
  return out;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  GenParams params;
  bool cyclic = false;
  double substitutable = 0.0;
  std::size_t dead_nodes = 0;
  std::size_t clique_nodes = 0;
  std::string clique_links;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  AttackGraph g;
  if (a.clique_nodes > 0) {
    std::vector<std::pair<std::size_t, std::size_t>> links;
    std::stringstream in(a.clique_links);
    std::string item;
    while (std::getline(in, item, ',')) {
      auto dash = item.find('-');
      if (dash == std::string::npos) throw InvalidInput("link must look like i-j: " + item);
      links.emplace_back(std::stoul(item.substr(0, dash)), std::stoul(item.substr(dash + 1)));
    }
    g = gen_clique_reduction(a.clique_nodes, links);
  } else {
    GenParams p = a.params;
    p.dag = !a.cyclic;
    g = gen_tree_like(p);
    if (a.substitutable > 0.0) g = add_substitutable(g, p.seed ^ 0x5DEECE66DULL, a.substitutable);
    if (a.dead_nodes > 0) g = add_dead_region(g, a.dead_nodes, p.seed ^ 0xD1B54A32D192ED03ULL);
  }
  emit(graph_to_json(g), a.out);
  return 0;
}

struct SolveArgs {
  std::string graph;
  std::string algo = "greedy";
  std::size_t budget = 0;
  double f_base = 0.95;
  bool stats = false;
  bool prune = false;
  bool no_spend = false;
  bool no_prune_branches = false;
  std::vector<Label> remove;
};

int run_solve(const SolveArgs& a) {
  auto algo = parse_algo(a.algo);
  if (!algo) throw InvalidInput("unknown algorithm " + a.algo);
  const AttackGraph original = load_instance(a.graph, a.prune);
  AttackGraph g = original;
  if (!a.remove.empty()) g = remove_nodes(original, resolve_labels(original, a.remove)).graph;

  const SuccessFunction f{a.f_base};
  SolveOptions options;
  options.greedy_spend_leftover = !a.no_spend;
  options.budget_prune = !a.no_prune_branches;
  const auto start = std::chrono::steady_clock::now();
  SolveOutcome outcome = solve(g, *algo, a.budget, f, options);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Json doc;
  doc["algo"] = a.algo;
  doc["budget"] = a.budget;
  doc["rate"] = outcome.solution.rate;
  doc["blocked"] = translate_edges(original, g, outcome.solution.blocks);
  if (!a.remove.empty()) doc["rate_on_original"] = evaluate_rate(original, BlockSet(doc["blocked"].get<std::vector<EdgeId>>()), f);
  if (a.stats) {
    outcome.stats["time_s"] = seconds;
    outcome.stats["nodes"] = g.node_count();
    outcome.stats["edges"] = g.edge_count();
    doc["stats"] = outcome.stats;
  }
  std::cout << doc.dump(2) << '\n';
  return 0;
}

int run_evaluate(const std::string& path, const std::vector<EdgeId>& blocked, double f_base,
                 bool prune) {
  const AttackGraph g = load_instance(path, prune);
  const BlockSet blocks(blocked);
  const Evaluation ev = evaluate(g, blocks, SuccessFunction{f_base});
  Json doc;
  doc["rate"] = ev.expected_success_rate;
  doc["distances"] = distances_json(g, ev);
  std::cout << doc.dump(2) << '\n';
  return 0;
}

// {"strategy": {"<splitting label>": route index | -1}, "budget": int}
// -> {"valid": bool, "rate": float, "blocked": [edge indices]}
Json answer_strategy(const StrategySpace& space, const Json& request, double f_base) {
  const AttackGraph& g = space.graph();
  AttackerStrategy s{std::vector<int>(space.splitting().size(), kNoRoute)};
  std::vector<char> given(s.choice.size(), 0);
  for (const auto& [key, value] : request.at("strategy").items()) {
    Label label = 0;
    try {
      label = std::stoll(key);
    } catch (const std::exception&) {
      throw InvalidInput("strategy key is not a node id: " + key);
    }
    auto v = g.find(label);
    const long i = v ? space.index_of(*v) : -1;
    if (i < 0) throw InvalidInput("node " + key + " is not a splitting node");
    s.choice[i] = value.get<int>();
    given[i] = 1;
  }
  for (std::size_t i = 0; i < given.size(); ++i)
    if (!given[i])
      throw InvalidInput("strategy misses splitting node " +
                         std::to_string(g.label(space.splitting()[i])));
  const long long budget = request.at("budget").get<long long>();
  if (budget < 0) throw InvalidInput("budget must be non-negative");
  const StrategyEvaluation ev =
      eval_strategy(space, s, static_cast<std::size_t>(budget), SuccessFunction{f_base});
  return Json{{"valid", ev.valid}, {"rate", ev.solution.rate}, {"blocked", ev.solution.blocks.ids()}};
}

// One request from stdin, or with `stream` one request per line until EOF
// (errors are reported in-line so a long-lived pipe survives bad requests).
int run_eval_strategy(const std::string& path, double f_base, bool stream) {
  const AttackGraph g = load_instance(path, false);
  const StrategySpace space(g);
  if (!stream) {
    Json request;
    try {
      request = Json::parse(std::cin);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput(std::string("malformed request: ") + e.what());
    }
    try {
      std::cout << answer_strategy(space, request, f_base).dump() << '\n';
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput(std::string("malformed request: ") + e.what());
    }
    return 0;
  }
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json reply;
    try {
      reply = answer_strategy(space, Json::parse(line), f_base);
    } catch (const std::exception& e) {
      reply = Json{{"error", e.what()}};
    }
    std::cout << reply.dump() << std::endl;
  }
  return 0;
}

int run_condense(const std::string& path, const std::string& out) {
  const AttackGraph g = load_instance(path, false);
  emit(condensed_to_json(g, condense(g)), out);
  return 0;
}

int run_stats(const std::string& path, bool prune) {
  const AttackGraph g = load_instance(path, prune);
  Json doc;
  doc["n"] = g.node_count();
  doc["m"] = g.edge_count();
  doc["s"] = g.entry_count();
  doc["blockable"] = g.blockable_count();
  doc["l"] = max_attack_path_length(g);
  doc["h"] = feedback_edge_count(g);
  doc["t"] = splitting_nodes(g).size();
  doc["d"] = max_out_degree(g);
  doc["acyclic"] = is_acyclic(g);
  if (is_acyclic(g))
    doc["w"] = eliminate_decompose(g).width;
  else
    doc["w"] = nullptr;
  std::cout << doc.dump(2) << '\n';
  return 0;
}

struct ExperimentArgs {
  std::string graph;
  GenParams params;
  bool use_generator = false;
  std::vector<std::string> algos;
  std::size_t budget = 0;
  std::optional<std::size_t> entries;
  std::optional<double> p_b;
  double substitutable = 0.0;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  double f_base = 0.95;
  std::size_t jobs = 1;
  bool deterministic = false;
  bool prune = false;
  std::string csv;
  std::string json;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentSpec spec;
  if (!a.graph.empty()) spec.graph = load_instance(a.graph, a.prune);
  if (a.use_generator) spec.generator = a.params;
  for (const auto& name : a.algos) {
    auto algo = parse_algo(name);
    if (!algo) throw InvalidInput("unknown algorithm " + name);
    spec.algos.push_back(*algo);
  }
  spec.budget = a.budget;
  spec.entries = a.entries;
  spec.p_b = a.p_b;
  spec.substitutable = a.substitutable;
  spec.trials = a.trials;
  spec.seed = a.seed;
  spec.f_base = a.f_base;
  spec.jobs = a.jobs;
  spec.timing = !a.deterministic;

  const ExperimentReport report = run_experiment(spec);
  const std::string csv = report_to_csv(report);
  if (!a.csv.empty()) write_text(csv, a.csv);
  if (!a.json.empty()) emit(report_to_json(report), a.json);
  std::cout << csv;
  return 0;
}

void add_gen_options(CLI::App* cmd, GenParams& p, bool with_seed_and_entries) {
  cmd->add_option("--n", p.n, "Node count")->check(CLI::PositiveNumber);
  cmd->add_option("--h", p.h, "Feedback edges beyond a tree");
  cmd->add_option("--max-depth", p.max_depth, "Maximum depth below da")->check(CLI::PositiveNumber);
  cmd->add_flag("--uniform-entries", p.uniform_entries, "Sample entries among all nodes");
  if (with_seed_and_entries) {
    cmd->add_option("--entries", p.s, "Entry node count");
    cmd->add_option("--pb", p.p_b, "Blockable probability per node")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--seed", p.seed, "Generator seed")->required();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shortest-path edge interdiction on attack graphs"};
  app.require_subcommand(1);
  // --h is the feedback-edge count, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a synthetic instance");
  add_gen_options(generate, gen.params, true);
  generate->add_flag("--cyclic", gen.cyclic, "Allow feedback edges that close directed cycles");
  generate->add_option("--substitutable", gen.substitutable,
                       "Share of blockable edges given a substitute route")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--dead-nodes", gen.dead_nodes, "Append nodes that cannot reach da");
  generate->add_option("--clique-nodes", gen.clique_nodes,
                       "Build the clique-reduction instance on this many nodes");
  generate->add_option("--clique-links", gen.clique_links, "Undirected links as i-j,i-j,...");
  generate->add_option("-o,--output", gen.out, "Output file (stdout if omitted)");

  SolveArgs sol;
  auto* solve_cmd = app.add_subcommand("solve", "Choose edges to block");
  solve_cmd->add_option("graph", sol.graph, "Graph JSON")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--algo", sol.algo, "oracle | greedy | budgetfpt | splitfpt | dp")
      ->check(CLI::IsMember({"oracle", "greedy", "budgetfpt", "splitfpt", "dp"}));
  solve_cmd->add_option("--budget", sol.budget, "Number of edges to block")->required();
  solve_cmd->add_option("--f-base", sol.f_base, "Success function base")
      ->check(CLI::Range(0.0, 1.0));
  solve_cmd->add_flag("--stats", sol.stats, "Include solver counters and timing");
  solve_cmd->add_flag("--prune", sol.prune, "Drop nodes that cannot reach da first");
  solve_cmd->add_flag("--no-spend", sol.no_spend, "Greedy stops once no block helps");
  solve_cmd->add_flag("--no-branch-prune", sol.no_prune_branches,
                      "BudgetFPT explores the full branching tree");
  solve_cmd->add_option("--remove-nodes", sol.remove, "Node ids deleted before solving")
      ->delimiter(',');

  std::string eval_graph;
  std::vector<EdgeId> eval_blocked;
  double eval_base = 0.95;
  bool eval_prune = false;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Expected success rate of a block set");
  evaluate_cmd->add_option("graph", eval_graph, "Graph JSON")->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--blocked", eval_blocked, "Edge indices to block")->delimiter(',');
  evaluate_cmd->add_option("--f-base", eval_base, "Success function base")
      ->check(CLI::Range(0.0, 1.0));
  evaluate_cmd->add_flag("--prune", eval_prune, "Drop nodes that cannot reach da first");

  std::string strat_graph;
  double strat_base = 0.95;
  bool strat_stream = false;
  auto* strategy_cmd =
      app.add_subcommand("eval-strategy", "Defence induced by an attacker strategy read from stdin");
  strategy_cmd->add_option("graph", strat_graph, "Graph JSON")->required()->check(CLI::ExistingFile);
  strategy_cmd->add_option("--f-base", strat_base, "Success function base")
      ->check(CLI::Range(0.0, 1.0));
  strategy_cmd->add_flag("--stream", strat_stream, "Answer one JSON request per input line");

  std::string cond_graph;
  std::string cond_out;
  auto* condense_cmd = app.add_subcommand("condense", "Export the condensed graph");
  condense_cmd->add_option("graph", cond_graph, "Graph JSON")->required()->check(CLI::ExistingFile);
  condense_cmd->add_option("-o,--output", cond_out, "Output file (stdout if omitted)");

  std::string stats_graph;
  bool stats_prune = false;
  auto* stats_cmd = app.add_subcommand("stats", "Structural parameters n m s l h t d w");
  stats_cmd->add_option("graph", stats_graph, "Graph JSON")->required()->check(CLI::ExistingFile);
  stats_cmd->add_flag("--prune", stats_prune, "Drop nodes that cannot reach da first");

  ExperimentArgs exp;
  exp.params.n = 30;
  auto* experiment_cmd = app.add_subcommand("experiment", "Repeated trials with summary tables");
  experiment_cmd->add_option("--graph", exp.graph, "Fixed graph JSON")->check(CLI::ExistingFile);
  auto* gen_flag = experiment_cmd->add_flag("--generate", exp.use_generator,
                                            "Draw a fresh generated graph per trial");
  add_gen_options(experiment_cmd, exp.params, false);
  experiment_cmd->add_flag("--prune", exp.prune, "Drop nodes that cannot reach da first");
  experiment_cmd->add_option("--algo", exp.algos, "Algorithms to compare")
      ->required()
      ->delimiter(',')
      ->check(CLI::IsMember({"oracle", "greedy", "budgetfpt", "splitfpt", "dp"}));
  experiment_cmd->add_option("--budget", exp.budget, "Number of edges to block")->required();
  experiment_cmd->add_option("--entries", exp.entries, "Entry nodes sampled per trial");
  experiment_cmd->add_option("--pb", exp.p_b, "Blockable probability, re-marked per trial")
      ->check(CLI::Range(0.0, 1.0));
  experiment_cmd->add_option("--substitutable", exp.substitutable,
                             "Substitute-route share added per trial")
      ->check(CLI::Range(0.0, 1.0));
  experiment_cmd->add_option("--trials", exp.trials, "Trial count")->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--seed", exp.seed, "Seed of trial 0; trial i uses seed + i");
  experiment_cmd->add_option("--f-base", exp.f_base, "Success function base")
      ->check(CLI::Range(0.0, 1.0));
  experiment_cmd->add_option("--jobs", exp.jobs, "Worker threads")->check(CLI::PositiveNumber);
  experiment_cmd->add_flag("--deterministic", exp.deterministic,
                           "Omit wall-clock times so reruns are byte-identical");
  experiment_cmd->add_option("--csv", exp.csv, "Write the summary table here");
  experiment_cmd->add_option("--json", exp.json, "Write per-trial results here");
  gen_flag->excludes(experiment_cmd->get_option("--graph"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitPrecondition;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*solve_cmd) return run_solve(sol);
    if (*evaluate_cmd) return run_evaluate(eval_graph, eval_blocked, eval_base, eval_prune);
    if (*strategy_cmd) return run_eval_strategy(strat_graph, strat_base, strat_stream);
    if (*condense_cmd) return run_condense(cond_graph, cond_out);
    if (*stats_cmd) return run_stats(stats_graph, stats_prune);
    if (*experiment_cmd) return run_experiment_cmd(exp);
  } catch (const Infeasible& e) {
    std::cerr << e.what() << '\n';
    return kExitGuard;
  } catch (const TooLarge& e) {
    std::cerr << e.what() << '\n';
    return kExitGuard;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  }
  return 0;
}
