#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cogcn/graph_ingest.hpp"
#include "cogcn/metrics.hpp"
#include "cogcn/trainer.hpp"

namespace cogcn {

inline constexpr int kReportSchemaVersion = 1;

struct DecomposeOptions {
  std::filesystem::path input;
  TrainConfig config;
  std::size_t top_outliers = 5;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> dot;
  std::optional<std::filesystem::path> loss_csv;
};

struct NamedOutlier {
  std::string name;
  RankedOutlier score;
};

struct PartitionReport {
  std::vector<std::vector<std::string>> clusters;  // cluster id -> member classes
  std::vector<NamedOutlier> outliers;
  MetricsReport metrics;
  std::vector<std::string> pruned_classes;
  std::optional<IterationRecord> final_loss;
  std::size_t num_entrypoints = 0;
  std::size_t num_edges = 0;
  Eigen::Index feature_dim = 0;
};

/// Trains on `graph` and assembles the report. Propagates DivergenceError
/// and std::invalid_argument (bad config) from the trainer.
PartitionReport decompose(const AppGraph& graph, const DecomposeOptions& options,
                          TrainState* state_out = nullptr);

/// Report as JSON text (keys sorted, two-space indent, trailing newline).
std::string report_to_json(const PartitionReport& report, const DecomposeOptions& options);

/// Graphviz rendering: one cluster subgraph per service, cross-service
/// edges dashed at top level, top outliers drawn as red double octagons.
std::string export_dot(const PartitionReport& report, const AppGraph& graph);

/// Full command-line pipeline. Exit codes: 0 success, 2 invalid input file,
/// 3 divergence, 4 invalid flags or flag combination.
int run_cli(int argc, const char* const* argv);

}  // namespace cogcn
