#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cogcn/gcn.hpp"
#include "cogcn/numkit.hpp"

namespace cogcn {

struct AdamSettings {
  double base_lr = 0.01;
  double decay_rate = 0.95;
  std::uint64_t decay_every = 100;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  AdamState make_state(std::span<const DenseMatrix> params) const;
};

struct TrainConfig {
  int clusters = 0;
  int hidden_dim = 64;
  int embed_dim = 32;
  int pretrain_iters = 250;
  int main_iters = 500;
  LossWeights weights;
  std::uint64_t seed = 0;
  bool symmetrize = true;
  /// Clustering weight forced to 0; clusters come from k-means++ on the final Z.
  bool ablation_no_cluster = false;
  /// Reconstruction rows weighted uniformly instead of by log(1/O).
  bool ablation_no_outlier = false;
  AdamSettings adam;

  /// Throws std::invalid_argument when the config cannot run on |V| nodes.
  void validate(Eigen::Index num_nodes) const;
};

struct IterationRecord {
  int iteration = 0;
  LossComponents components;
  double total = 0.0;
};

struct TrainState {
  ModelParams params;
  DenseMatrix z;
  DenseMatrix x_hat;
  DenseVector o_s;
  DenseVector o_a;
  std::vector<int> assignment;  // flattened one-hot M
  DenseMatrix centers;          // K x F'
  int clusters = 0;
  std::vector<IterationRecord> pretrain_history;
  std::vector<IterationRecord> loss_history;

  /// M as an explicit |V| x K one-hot matrix.
  DenseMatrix assignment_matrix() const;
};

/// The fixed inputs of one training run.
struct TrainingProblem {
  DenseMatrix adjacency;  // directed, binary
  DenseMatrix attributes;
  DenseMatrix a_hat;      // propagation matrix
  DenseMatrix a_target;   // structure reconstruction target

  static TrainingProblem make(const DenseMatrix& adjacency, const DenseMatrix& attributes,
                              bool symmetrize);
  Eigen::Index num_nodes() const { return adjacency.rows(); }
};

/// Per-iteration view handed to a fit() observer after the ADAM step.
struct IterationSnapshot {
  int iteration;
  const DenseVector& o_s;
  const DenseVector& o_a;
  const std::vector<int>& assignment;
  const DenseMatrix& centers;
  const IterationRecord& record;
};
using IterationObserver = std::function<void(const IterationSnapshot&)>;

/// Uniform outlier scores, Glorot weights, then pretrain_iters ADAM steps on
/// the two reconstruction terms. Throws DivergenceError on a non-finite loss.
TrainState pretrain(const TrainingProblem& problem, const TrainConfig& config);

/// k-means++ seeding followed by Lloyd rounds (at most 100) until the
/// assignment is stable. Throws std::invalid_argument if K is not in [1, |V|].
struct Clustering {
  std::vector<int> assignment;
  DenseMatrix centers;
};
Clustering kmeanspp_init(const DenseMatrix& z, int clusters, std::uint64_t seed);

/// Residuals normalized to sum to one, floored at kOutlierFloor and
/// renormalized. All-zero residuals give uniform scores.
DenseVector normalize_outlier_scores(const DenseVector& residuals);
inline constexpr double kOutlierFloor = 1e-12;

DenseVector update_outliers_structural(const DenseMatrix& a_target, const DenseMatrix& z);
DenseVector update_outliers_attribute(const DenseMatrix& x, const DenseMatrix& x_hat);

/// Nearest center per row of Z; ties go to the lowest cluster index.
std::vector<int> update_assignments(const DenseMatrix& z, const DenseMatrix& centers);

/// Member means. An empty cluster takes the point farthest from its own
/// center among clusters with more than one member, and that point is moved
/// into it (so `assignment` may change).
DenseMatrix update_centers(const DenseMatrix& z, std::vector<int>& assignment, int clusters);

/// Pretraining, k-means++ initialization, then main_iters rounds of: outlier
/// update, cluster update, one ADAM step on the joint loss.
TrainState fit(const TrainingProblem& problem, const TrainConfig& config,
               const IterationObserver& observer = {});

enum class OutlierKind { kStructural, kAttribute, kBoth };
const char* to_string(OutlierKind kind);

struct RankedOutlier {
  int node = 0;
  OutlierKind kind = OutlierKind::kBoth;
  double structural_score = 0.0;
  double attribute_score = 0.0;
  int structural_rank = 0;  // 1-based position in the O_s list
  int attribute_rank = 0;
  int combined_rank = 0;
};

/// Merges the two descending score lists by each node's best rank. Ties go
/// to the larger O_s + O_a, then the lower node index.
std::vector<RankedOutlier> rank_outliers(const DenseVector& o_s, const DenseVector& o_a,
                                         std::size_t top_n);

/// CSV with header iteration,L_str,L_att,L_clus,total.
void write_loss_csv(std::ostream& out, const std::vector<IterationRecord>& history);

}  // namespace cogcn
