#pragma once

#include <cstdint>
#include <vector>

#include "cogcn/graph_ingest.hpp"
#include "cogcn/numkit.hpp"

namespace cogcn {

/// Planted block model with injected outliers.
struct PlantedSpec {
  int blocks = 4;
  int nodes_per_block = 15;
  double p_in = 0.3;
  double p_out = 0.02;
  int n_struct_outliers = 3;
  int n_attr_outliers = 3;
  int attr_dim_per_block = 5;
  /// Upper bound of the uniform noise added to every attribute entry.
  double attr_noise = 0.05;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on an unusable spec.
  void validate() const;
  int num_nodes() const { return blocks * nodes_per_block; }
};

struct PlantedGraph {
  DenseMatrix adjacency;   // symmetric binary, zero diagonal
  DenseMatrix attributes;  // |V| x (blocks * attr_dim_per_block), row-normalized
  std::vector<int> labels;         // planted block per node
  std::vector<int> pattern_block;  // block whose attribute pattern the node carries
  std::vector<int> struct_outliers;
  std::vector<int> attr_outliers;

  bool is_outlier(int node) const;
  /// Same graph in the ingest schema. Each block's attribute pattern becomes
  /// attr_dim_per_block pseudo-entrypoints whose traces are the nodes carrying
  /// that pattern; each undirected edge becomes one call from lower to higher
  /// index.
  RawMonolith to_monolith() const;
};

/// Regular nodes link with p_in inside their block and p_out across blocks.
/// Structural outliers link to every other node with p_in regardless of
/// block. Attribute outliers take another block's attribute pattern.
PlantedGraph planted_graph(const PlantedSpec& spec);

/// Size knobs for a synthetic monolith shaped like a real application.
struct MonolithShape {
  int classes = 111;
  int entrypoints = 203;
  int modules = 8;
  double p_in = 0.15;
  double p_out = 0.01;
  double cross_trace_prob = 0.02;
  std::uint64_t seed = 0;
};

/// A random monolith with modular call structure, traces mostly confined to
/// one module, and a few inheritance pairs. Every class is traced.
RawMonolith synthetic_monolith(const MonolithShape& shape);

/// Adjusted Rand index from the pair-counting contingency table. Throws
/// std::invalid_argument on a length mismatch.
double adjusted_rand_index(const std::vector<int>& labels_a, const std::vector<int>& labels_b);

}  // namespace cogcn
