#pragma once

#include <vector>

#include "cogcn/numkit.hpp"

namespace cogcn {

/// Flat cluster assignment; ids lie in [0, clusters). Empty clusters are
/// allowed and still count toward K.
struct Partition {
  std::vector<int> assignment;
  int clusters = 0;

  /// Throws std::invalid_argument on a size mismatch or out-of-range id.
  void validate(Eigen::Index num_nodes) const;
  std::vector<int> sizes() const;
};

struct ClusterStats {
  int size = 0;
  int intra_edges = 0;           // u_k on the symmetrized graph
  int published_interfaces = 0;  // ifn_k on the directed graph
};

struct MetricsReport {
  double modularity = 0.0;
  double structural_modularity = 0.0;
  double one_minus_ned = 0.0;
  double ifn = 0.0;
  std::vector<ClusterStats> per_cluster;
};

/// Newman modularity on max(A, Aᵀ). An edgeless graph scores 0.
double modularity(const DenseMatrix& adjacency, const Partition& partition);

/// Mean cohesion u_k / N_k² minus mean pairwise coupling σ / (2 N_k1 N_k2),
/// on max(A, Aᵀ). Empty clusters contribute zero to both sums.
double structural_modularity(const DenseMatrix& adjacency, const Partition& partition);

/// 1 − (nodes in clusters whose size lies in [lower, upper]) / |V|.
double one_minus_ned(const Partition& partition, int lower = 5, int upper = 20);

/// Number of classes per cluster referenced by a class from another cluster.
std::vector<int> published_interfaces(const DenseMatrix& directed_adjacency, const Partition& partition);
/// Mean of published_interfaces over all K clusters.
double ifn(const DenseMatrix& directed_adjacency, const Partition& partition);

MetricsReport evaluate_partition(const DenseMatrix& directed_adjacency, const Partition& partition);

}  // namespace cogcn
