#include "cogcn/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <iostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>
#include <json.hpp>

#include "cogcn/errors.hpp"

namespace cogcn {
namespace {

using nlohmann::json;

const char* ablation_name(const TrainConfig& c) {
  if (c.ablation_no_cluster) return "no-cluster";
  if (c.ablation_no_outlier) return "no-outlier";
  return "none";
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

PartitionReport decompose(const AppGraph& graph, const DecomposeOptions& options,
                          TrainState* state_out) {
  const TrainingProblem problem =
      TrainingProblem::make(graph.adjacency, graph.attributes, options.config.symmetrize);
  TrainState state = fit(problem, options.config);

  PartitionReport report;
  report.clusters.resize(static_cast<std::size_t>(options.config.clusters));
  for (std::size_t i = 0; i < state.assignment.size(); ++i)
    report.clusters[static_cast<std::size_t>(state.assignment[i])].push_back(graph.node_names[i]);

  for (const auto& r : rank_outliers(state.o_s, state.o_a, options.top_outliers))
    report.outliers.push_back({graph.node_names[static_cast<std::size_t>(r.node)], r});

  report.metrics = evaluate_partition(graph.adjacency, Partition{state.assignment, options.config.clusters});
  if (!state.loss_history.empty()) report.final_loss = state.loss_history.back();
  report.num_entrypoints = graph.entrypoint_names.size();
  report.num_edges = static_cast<std::size_t>(graph.adjacency.sum());
  report.feature_dim = graph.feature_dim();
  if (state_out) *state_out = std::move(state);
  return report;
}

std::string report_to_json(const PartitionReport& report, const DecomposeOptions& options) {
  const TrainConfig& c = options.config;
  json doc;
  doc["schema_version"] = kReportSchemaVersion;

  doc["clusters"] = json::array();
  for (std::size_t k = 0; k < report.clusters.size(); ++k)
    doc["clusters"].push_back({{"id", k}, {"size", report.clusters[k].size()}, {"classes", report.clusters[k]}});

  doc["outliers"] = json::array();
  for (const auto& o : report.outliers) {
    doc["outliers"].push_back({{"rank", o.score.combined_rank},
                               {"class", o.name},
                               {"kind", to_string(o.score.kind)},
                               {"structural_score", o.score.structural_score},
                               {"attribute_score", o.score.attribute_score},
                               {"structural_rank", o.score.structural_rank},
                               {"attribute_rank", o.score.attribute_rank}});
  }

  json per = json::array();
  for (std::size_t k = 0; k < report.metrics.per_cluster.size(); ++k) {
    const auto& s = report.metrics.per_cluster[k];
    per.push_back({{"id", k},
                   {"size", s.size},
                   {"intra_edges", s.intra_edges},
                   {"published_interfaces", s.published_interfaces}});
  }
  doc["metrics"] = {{"modularity", report.metrics.modularity},
                    {"structural_modularity", report.metrics.structural_modularity},
                    {"one_minus_ned", report.metrics.one_minus_ned},
                    {"ifn", report.metrics.ifn},
                    {"per_cluster", per}};

  doc["config"] = {{"input", options.input.string()},
                   {"clusters", c.clusters},
                   {"hidden_dim", c.hidden_dim},
                   {"embedding_dim", c.embed_dim},
                   {"alpha", {c.weights.alpha1, c.weights.alpha2, c.weights.alpha3}},
                   {"pretrain_iters", c.pretrain_iters},
                   {"iters", c.main_iters},
                   {"seed", c.seed},
                   {"symmetrize", c.symmetrize},
                   {"ablation", ablation_name(c)},
                   {"top_outliers", options.top_outliers},
                   {"adam",
                    {{"learning_rate", c.adam.base_lr},
                     {"decay_rate", c.adam.decay_rate},
                     {"decay_every", c.adam.decay_every},
                     {"beta1", c.adam.beta1},
                     {"beta2", c.adam.beta2},
                     {"epsilon", c.adam.epsilon}}}};

  doc["graph"] = {{"classes", std::accumulate(report.clusters.begin(), report.clusters.end(), std::size_t{0},
                                              [](std::size_t acc, const auto& v) { return acc + v.size(); })},
                  {"entrypoints", report.num_entrypoints},
                  {"edges", report.num_edges},
                  {"feature_dim", report.feature_dim},
                  {"pruned_classes", report.pruned_classes}};

  if (report.final_loss) {
    const auto& r = *report.final_loss;
    doc["final_loss"] = {{"iteration", r.iteration},
                         {"L_str", r.components.structural},
                         {"L_att", r.components.attribute},
                         {"L_clus", r.components.clustering},
                         {"total", r.total}};
  } else {
    doc["final_loss"] = nullptr;
  }
  doc["loss_history_path"] = options.loss_csv ? json(options.loss_csv->string()) : json(nullptr);
  return doc.dump(2) + "\n";
}

std::string export_dot(const PartitionReport& report, const AppGraph& graph) {
  std::unordered_map<std::string, std::size_t> cluster_of;
  for (std::size_t k = 0; k < report.clusters.size(); ++k)
    for (const auto& name : report.clusters[k]) cluster_of[name] = k;
  std::unordered_map<std::string, int> outlier_rank;
  for (const auto& o : report.outliers) outlier_rank[o.name] = o.score.combined_rank;

  std::ostringstream out;
  out << "digraph monolith {\n  compound=true;\n  node [shape=box];\n";
  for (std::size_t k = 0; k < report.clusters.size(); ++k) {
    out << "  subgraph cluster_" << k << " {\n    label=\"service " << k << "\";\n";
    for (const auto& name : report.clusters[k]) {
      out << "    " << dot_quote(name);
      if (auto it = outlier_rank.find(name); it != outlier_rank.end())
        out << " [outlier=true, shape=doubleoctagon, color=red, xlabel=\"outlier " << it->second << "\"]";
      out << ";\n";
    }
    for (Eigen::Index i = 0; i < graph.num_nodes(); ++i) {
      const auto& from = graph.node_names[static_cast<std::size_t>(i)];
      if (cluster_of.at(from) != k) continue;
      for (Eigen::Index j = 0; j < graph.num_nodes(); ++j) {
        const auto& to = graph.node_names[static_cast<std::size_t>(j)];
        if (graph.adjacency(i, j) != 0.0 && cluster_of.at(to) == k)
          out << "    " << dot_quote(from) << " -> " << dot_quote(to) << ";\n";
      }
    }
    out << "  }\n";
  }
  for (Eigen::Index i = 0; i < graph.num_nodes(); ++i) {
    const auto& from = graph.node_names[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < graph.num_nodes(); ++j) {
      const auto& to = graph.node_names[static_cast<std::size_t>(j)];
      if (graph.adjacency(i, j) != 0.0 && cluster_of.at(from) != cluster_of.at(to))
        out << "  " << dot_quote(from) << " -> " << dot_quote(to) << " [style=dashed, color=gray40];\n";
    }
  }
  out << "}\n";
  return out.str();
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Partition a monolith class graph into candidate microservices and rank refactor outliers"};
  DecomposeOptions opts;
  TrainConfig& cfg = opts.config;
  std::string input, output, dot, loss_csv, ablation = "none";
  std::vector<double> alpha{cfg.weights.alpha1, cfg.weights.alpha2, cfg.weights.alpha3};

  app.add_option("--input", input, "Monolith JSON document")->required();
  app.add_option("--clusters", cfg.clusters, "Number of microservices K")->required();
  app.add_option("--embedding-dim", cfg.embed_dim, "Embedding width")->capture_default_str();
  app.add_option("--hidden-dim", cfg.hidden_dim, "Hidden layer width")->capture_default_str();
  app.add_option("--alpha", alpha, "Loss weights a1,a2,a3")->delimiter(',')->expected(3);
  app.add_option("--pretrain-iters", cfg.pretrain_iters, "Pretraining iterations")->capture_default_str();
  app.add_option("--iters", cfg.main_iters, "Alternating-minimization iterations")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--symmetrize", cfg.symmetrize, "Symmetrize the call graph (on|off)")->capture_default_str();
  app.add_option("--top-outliers", opts.top_outliers, "Outliers to report")->capture_default_str();
  app.add_option("--ablation", ablation, "none|no-cluster|no-outlier")
      ->check(CLI::IsMember({"none", "no-cluster", "no-outlier"}));
  app.add_option("--learning-rate", cfg.adam.base_lr, "Initial ADAM learning rate")->capture_default_str();
  app.add_option("--output", output, "Report path (stdout if omitted)");
  app.add_option("--dot", dot, "Write a Graphviz rendering here");
  app.add_option("--loss-csv", loss_csv, "Write per-iteration losses here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 4;
  }

  opts.input = input;
  cfg.weights = {alpha[0], alpha[1], alpha[2]};
  cfg.ablation_no_cluster = ablation == "no-cluster";
  cfg.ablation_no_outlier = ablation == "no-outlier";
  if (!output.empty()) opts.output = output;
  if (!dot.empty()) opts.dot = dot;
  if (!loss_csv.empty()) opts.loss_csv = loss_csv;

  RawMonolith raw;
  AppGraph graph;
  try {
    raw = parse_monolith(opts.input);
    graph = build_app_graph(raw);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const EmptyGraphError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    cfg.validate(graph.num_nodes());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }

  PartitionReport report;
  TrainState state;
  try {
    report = decompose(graph, opts, &state);
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  {
    const std::set<std::string> kept(graph.node_names.begin(), graph.node_names.end());
    for (const auto& c : raw.classes)
      if (!kept.contains(c)) report.pruned_classes.push_back(c);
  }

  try {
    const std::string text = report_to_json(report, opts);
    if (opts.output) {
      write_file(*opts.output, text);
    } else {
      std::cout << text;
    }
    if (opts.dot) write_file(*opts.dot, export_dot(report, graph));
    if (opts.loss_csv) {
      std::ostringstream csv;
      write_loss_csv(csv, state.loss_history);
      write_file(*opts.loss_csv, csv.str());
    }
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace cogcn
