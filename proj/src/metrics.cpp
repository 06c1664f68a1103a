#include "cogcn/metrics.hpp"

#include <stdexcept>
#include <string>

#include "cogcn/errors.hpp"
#include "cogcn/graph_ingest.hpp"

namespace cogcn {
namespace {

void check_square(const DenseMatrix& a, const Partition& p) {
  if (a.rows() != a.cols()) throw ShapeError("adjacency must be square");
  p.validate(a.rows());
}

// Per-cluster intra edge counts and the K x K inter-cluster edge count matrix
// on the undirected reading of `a`. Each undirected edge is counted once.
void count_edges(const DenseMatrix& a, const Partition& p, std::vector<int>& intra,
                 std::vector<std::vector<int>>& between) {
  const DenseMatrix s = symmetrize(a);
  const auto k = static_cast<std::size_t>(p.clusters);
  intra.assign(k, 0);
  between.assign(k, std::vector<int>(k, 0));
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < s.cols(); ++j) {
      if (s(i, j) == 0.0) continue;
      const auto ci = static_cast<std::size_t>(p.assignment[static_cast<std::size_t>(i)]);
      const auto cj = static_cast<std::size_t>(p.assignment[static_cast<std::size_t>(j)]);
      if (ci == cj) {
        ++intra[ci];
      } else {
        ++between[ci][cj];
        ++between[cj][ci];
      }
    }
  }
}

}  // namespace

void Partition::validate(Eigen::Index num_nodes) const {
  if (static_cast<Eigen::Index>(assignment.size()) != num_nodes)
    throw std::invalid_argument("partition covers " + std::to_string(assignment.size()) +
                                " nodes, graph has " + std::to_string(num_nodes));
  if (clusters < 1) throw std::invalid_argument("partition needs at least one cluster");
  for (int c : assignment) {
    if (c < 0 || c >= clusters) throw std::invalid_argument("cluster id out of range");
  }
}

std::vector<int> Partition::sizes() const {
  std::vector<int> n(static_cast<std::size_t>(clusters), 0);
  for (int c : assignment) ++n[static_cast<std::size_t>(c)];
  return n;
}

double modularity(const DenseMatrix& adjacency, const Partition& partition) {
  check_square(adjacency, partition);
  const DenseMatrix s = symmetrize(adjacency);
  const double two_m = s.sum() - s.diagonal().sum();
  if (two_m <= 0.0) return 0.0;

  const auto k = static_cast<std::size_t>(partition.clusters);
  std::vector<double> intra_stubs(k, 0.0), degree(k, 0.0);
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const auto ci = static_cast<std::size_t>(partition.assignment[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      if (i == j || s(i, j) == 0.0) continue;
      degree[ci] += s(i, j);
      if (partition.assignment[static_cast<std::size_t>(j)] == static_cast<int>(ci)) intra_stubs[ci] += s(i, j);
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) q += intra_stubs[c] / two_m - (degree[c] / two_m) * (degree[c] / two_m);
  return q;
}

double structural_modularity(const DenseMatrix& adjacency, const Partition& partition) {
  check_square(adjacency, partition);
  std::vector<int> intra;
  std::vector<std::vector<int>> between;
  count_edges(adjacency, partition, intra, between);
  const std::vector<int> n = partition.sizes();
  const int k = partition.clusters;

  double cohesion = 0.0;
  for (int c = 0; c < k; ++c) {
    const double nc = n[static_cast<std::size_t>(c)];
    if (nc > 0) cohesion += intra[static_cast<std::size_t>(c)] / (nc * nc);
  }
  cohesion /= k;
  if (k == 1) return cohesion;

  double coupling = 0.0;
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (a == b) continue;
      const double na = n[static_cast<std::size_t>(a)], nb = n[static_cast<std::size_t>(b)];
      if (na == 0 || nb == 0) continue;
      coupling += between[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] / (2.0 * na * nb);
    }
  }
  coupling /= k * (k - 1) / 2.0;
  return cohesion - coupling;
}

double one_minus_ned(const Partition& partition, int lower, int upper) {
  const std::size_t total = partition.assignment.size();
  if (total == 0) return 0.0;
  int non_extreme = 0;
  for (int size : partition.sizes()) {
    if (size >= lower && size <= upper) non_extreme += size;
  }
  return static_cast<double>(total - static_cast<std::size_t>(non_extreme)) / static_cast<double>(total);
}

std::vector<int> published_interfaces(const DenseMatrix& directed_adjacency,
                                      const Partition& partition) {
  check_square(directed_adjacency, partition);
  std::vector<int> count(static_cast<std::size_t>(partition.clusters), 0);
  for (Eigen::Index j = 0; j < directed_adjacency.cols(); ++j) {
    const int cj = partition.assignment[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < directed_adjacency.rows(); ++i) {
      if (directed_adjacency(i, j) != 0.0 && partition.assignment[static_cast<std::size_t>(i)] != cj) {
        ++count[static_cast<std::size_t>(cj)];
        break;
      }
    }
  }
  return count;
}

double ifn(const DenseMatrix& directed_adjacency, const Partition& partition) {
  const std::vector<int> per = published_interfaces(directed_adjacency, partition);
  double sum = 0.0;
  for (int v : per) sum += v;
  return sum / partition.clusters;
}

MetricsReport evaluate_partition(const DenseMatrix& directed_adjacency, const Partition& partition) {
  MetricsReport r;
  r.modularity = modularity(directed_adjacency, partition);
  r.structural_modularity = structural_modularity(directed_adjacency, partition);
  r.one_minus_ned = one_minus_ned(partition);
  r.ifn = ifn(directed_adjacency, partition);

  std::vector<int> intra;
  std::vector<std::vector<int>> between;
  count_edges(directed_adjacency, partition, intra, between);
  const std::vector<int> sizes = partition.sizes();
  const std::vector<int> pub = published_interfaces(directed_adjacency, partition);
  for (std::size_t c = 0; c < sizes.size(); ++c) r.per_cluster.push_back({sizes[c], intra[c], pub[c]});
  return r;
}

}  // namespace cogcn
