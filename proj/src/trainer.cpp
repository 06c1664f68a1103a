#include "cogcn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "cogcn/errors.hpp"
#include "cogcn/graph_ingest.hpp"

namespace cogcn {
namespace {

constexpr int kMaxLloydRounds = 100;

std::array<DenseMatrix, 4> copy_params(const ModelParams& p) { return {p.w0, p.w1, p.w2, p.w3}; }

void apply_adam(ModelParams& params, const ParamGradients& grads, AdamState& state) {
  std::array<DenseMatrix, 4> ps = copy_params(params);
  const std::array<DenseMatrix, 4> gs = {grads.w0, grads.w1, grads.w2, grads.w3};
  adam_step(ps, gs, state);
  params.w0 = std::move(ps[0]);
  params.w1 = std::move(ps[1]);
  params.w2 = std::move(ps[2]);
  params.w3 = std::move(ps[3]);
}

DenseVector row_weights(const DenseVector& scores, bool uniform) {
  if (uniform) return DenseVector::Ones(scores.size());
  return outlier_log_weights(scores);
}

bool finite(const LossComponents& c, double total) {
  return std::isfinite(c.structural) && std::isfinite(c.attribute) && std::isfinite(c.clustering) &&
         std::isfinite(total);
}

}  // namespace

AdamState AdamSettings::make_state(std::span<const DenseMatrix> params) const {
  AdamState s = AdamState::for_params(params);
  s.base_lr = base_lr;
  s.decay_rate = decay_rate;
  s.decay_every = decay_every;
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.epsilon = epsilon;
  return s;
}

void TrainConfig::validate(Eigen::Index num_nodes) const {
  if (clusters < 1 || clusters > num_nodes)
    throw std::invalid_argument("cluster count must be in [1, " + std::to_string(num_nodes) + "]");
  if (hidden_dim < 1 || embed_dim < 1) throw std::invalid_argument("layer widths must be positive");
  if (pretrain_iters < 0 || main_iters < 0)
    throw std::invalid_argument("iteration counts must be non-negative");
  if (weights.alpha1 < 0 || weights.alpha2 < 0 || weights.alpha3 < 0)
    throw std::invalid_argument("loss weights must be non-negative");
  if (weights.alpha1 + weights.alpha2 + weights.alpha3 <= 0)
    throw std::invalid_argument("at least one loss weight must be positive");
  if (ablation_no_cluster && weights.alpha1 + weights.alpha2 <= 0)
    throw std::invalid_argument("no-cluster ablation leaves no positive loss weight");
  if (!(adam.base_lr > 0) || !(adam.decay_rate > 0 && adam.decay_rate <= 1) || adam.decay_every == 0)
    throw std::invalid_argument("invalid ADAM schedule");
}

DenseMatrix TrainState::assignment_matrix() const {
  DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(assignment.size()), clusters);
  for (std::size_t i = 0; i < assignment.size(); ++i) m(static_cast<Eigen::Index>(i), assignment[i]) = 1.0;
  return m;
}

TrainingProblem TrainingProblem::make(const DenseMatrix& adjacency, const DenseMatrix& attributes,
                                      bool symmetrize_graph) {
  if (adjacency.rows() != adjacency.cols() || attributes.rows() != adjacency.rows())
    throw ShapeError("TrainingProblem: adjacency and attributes disagree on |V|");
  TrainingProblem p;
  p.adjacency = adjacency;
  p.attributes = attributes;
  p.a_hat = normalize_adjacency(adjacency, symmetrize_graph);
  p.a_target = symmetrize_graph ? symmetrize(adjacency) : adjacency;
  return p;
}

TrainState pretrain(const TrainingProblem& problem, const TrainConfig& config) {
  const Eigen::Index n = problem.num_nodes();
  config.validate(n);

  TrainState state;
  state.clusters = config.clusters;
  state.o_s = DenseVector::Constant(n, 1.0 / static_cast<double>(n));
  state.o_a = state.o_s;
  state.params = ModelParams::glorot(problem.attributes.cols(), config.hidden_dim, config.embed_dim,
                                     config.seed);

  LossWeights w = config.weights;
  w.alpha3 = 0.0;
  const ObjectiveTerms terms{problem.a_hat,
                            problem.attributes,
                            problem.a_target,
                            row_weights(state.o_s, config.ablation_no_outlier),
                            row_weights(state.o_a, config.ablation_no_outlier),
                            nullptr,
                            nullptr,
                            w};

  const auto initial = copy_params(state.params);
  AdamState adam = config.adam.make_state(initial);
  for (int it = 0; it < config.pretrain_iters; ++it) {
    const ForwardCache cache = forward(problem.a_hat, problem.attributes, state.params);
    IterationRecord rec{it + 1, evaluate_components(terms, cache), 0.0};
    rec.total = total_loss(rec.components, w);
    if (!finite(rec.components, rec.total)) throw DivergenceError("pretraining", rec.iteration);
    state.pretrain_history.push_back(rec);
    apply_adam(state.params, grad_params(terms, state.params, cache), adam);
  }

  const ForwardCache cache = forward(problem.a_hat, problem.attributes, state.params);
  state.z = cache.z;
  state.x_hat = cache.x_hat;
  return state;
}

std::vector<int> update_assignments(const DenseMatrix& z, const DenseMatrix& centers) {
  if (centers.rows() < 1 || centers.cols() != z.cols())
    throw ShapeError("update_assignments: centers must be K x F'");
  std::vector<int> out(static_cast<std::size_t>(z.rows()));
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    int best = 0;
    double best_d = (z.row(i) - centers.row(0)).squaredNorm();
    for (Eigen::Index k = 1; k < centers.rows(); ++k) {
      const double d = (z.row(i) - centers.row(k)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(k);
      }
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

DenseMatrix update_centers(const DenseMatrix& z, std::vector<int>& assignment, int clusters) {
  if (static_cast<Eigen::Index>(assignment.size()) != z.rows())
    throw ShapeError("update_centers: assignment length must equal |V|");
  DenseMatrix c = DenseMatrix::Zero(clusters, z.cols());
  std::vector<int> count(static_cast<std::size_t>(clusters), 0);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const int k = assignment[i];
    if (k < 0 || k >= clusters) throw std::invalid_argument("update_centers: cluster id out of range");
    c.row(k) += z.row(static_cast<Eigen::Index>(i));
    ++count[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k < clusters; ++k) {
    if (count[static_cast<std::size_t>(k)] > 0) c.row(k) /= count[static_cast<std::size_t>(k)];
  }

  for (int k = 0; k < clusters; ++k) {
    if (count[static_cast<std::size_t>(k)] > 0) continue;
    int pick = -1;
    double pick_d = -1.0;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      const int owner = assignment[i];
      if (count[static_cast<std::size_t>(owner)] < 2) continue;
      const double d = (z.row(static_cast<Eigen::Index>(i)) - c.row(owner)).squaredNorm();
      if (d > pick_d) {
        pick_d = d;
        pick = static_cast<int>(i);
      }
    }
    if (pick < 0) break;  // fewer points than clusters
    --count[static_cast<std::size_t>(assignment[static_cast<std::size_t>(pick)])];
    assignment[static_cast<std::size_t>(pick)] = k;
    count[static_cast<std::size_t>(k)] = 1;
    c.row(k) = z.row(pick);
  }
  return c;
}

Clustering kmeanspp_init(const DenseMatrix& z, int clusters, std::uint64_t seed) {
  const Eigen::Index n = z.rows();
  if (clusters < 1 || clusters > n)
    throw std::invalid_argument("kmeanspp_init: K must be in [1, " + std::to_string(n) + "]");

  Rng rng(seed);
  std::vector<Eigen::Index> chosen{static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::size_t>(n)))};
  DenseVector nearest(n);
  for (Eigen::Index i = 0; i < n; ++i) nearest(i) = (z.row(i) - z.row(chosen[0])).squaredNorm();

  while (static_cast<int>(chosen.size()) < clusters) {
    const double total = nearest.sum();
    Eigen::Index next = -1;
    if (total > 0.0) {
      const double target = rng.uniform01() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (nearest(i) <= 0.0) continue;
        acc += nearest(i);
        next = i;
        if (acc > target) break;
      }
    } else {
      // Every remaining point coincides with a chosen center.
      std::vector<Eigen::Index> free;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) free.push_back(i);
      }
      next = free[rng.uniform_index(free.size())];
    }
    chosen.push_back(next);
    for (Eigen::Index i = 0; i < n; ++i)
      nearest(i) = std::min(nearest(i), (z.row(i) - z.row(next)).squaredNorm());
  }

  Clustering out;
  out.centers.resize(clusters, z.cols());
  for (int k = 0; k < clusters; ++k) out.centers.row(k) = z.row(chosen[static_cast<std::size_t>(k)]);
  out.assignment = update_assignments(z, out.centers);
  for (int round = 0; round < kMaxLloydRounds; ++round) {
    out.centers = update_centers(z, out.assignment, clusters);
    std::vector<int> next = update_assignments(z, out.centers);
    if (next == out.assignment) break;
    out.assignment = std::move(next);
  }
  return out;
}

DenseVector normalize_outlier_scores(const DenseVector& residuals) {
  const Eigen::Index n = residuals.size();
  const double total = residuals.sum();
  if (!(total > 0.0)) return DenseVector::Constant(n, 1.0 / static_cast<double>(n));
  DenseVector o = (residuals / total).cwiseMax(kOutlierFloor);
  return o / o.sum();
}

DenseVector update_outliers_structural(const DenseMatrix& a_target, const DenseMatrix& z) {
  return normalize_outlier_scores(structural_residuals(a_target, z));
}

DenseVector update_outliers_attribute(const DenseMatrix& x, const DenseMatrix& x_hat) {
  return normalize_outlier_scores(attribute_residuals(x, x_hat));
}

TrainState fit(const TrainingProblem& problem, const TrainConfig& config,
               const IterationObserver& observer) {
  TrainState state = pretrain(problem, config);
  {
    Clustering init = kmeanspp_init(state.z, config.clusters, mix_seed(config.seed, 101));
    state.assignment = std::move(init.assignment);
    state.centers = std::move(init.centers);
  }

  LossWeights w = config.weights;
  if (config.ablation_no_cluster) w.alpha3 = 0.0;

  const auto initial = copy_params(state.params);
  AdamState adam = config.adam.make_state(initial);
  for (int it = 0; it < config.main_iters; ++it) {
    const ForwardCache cache = forward(problem.a_hat, problem.attributes, state.params);

    state.o_s = update_outliers_structural(problem.a_target, cache.z);
    state.o_a = update_outliers_attribute(problem.attributes, cache.x_hat);

    state.assignment = update_assignments(cache.z, state.centers);
    state.centers = update_centers(cache.z, state.assignment, config.clusters);

    const ObjectiveTerms terms{problem.a_hat,
                              problem.attributes,
                              problem.a_target,
                              row_weights(state.o_s, config.ablation_no_outlier),
                              row_weights(state.o_a, config.ablation_no_outlier),
                              &state.assignment,
                              &state.centers,
                              w};
    IterationRecord rec{it + 1, evaluate_components(terms, cache), 0.0};
    rec.total = total_loss(rec.components, w);
    if (!finite(rec.components, rec.total)) throw DivergenceError("training", rec.iteration);
    state.loss_history.push_back(rec);
    apply_adam(state.params, grad_params(terms, state.params, cache), adam);

    if (observer)
      observer({rec.iteration, state.o_s, state.o_a, state.assignment, state.centers,
                state.loss_history.back()});
  }

  const ForwardCache cache = forward(problem.a_hat, problem.attributes, state.params);
  state.z = cache.z;
  state.x_hat = cache.x_hat;
  if (!state.z.allFinite() || !state.x_hat.allFinite())
    throw DivergenceError("training", static_cast<std::size_t>(config.main_iters));

  if (config.ablation_no_cluster) {
    Clustering post = kmeanspp_init(state.z, config.clusters, mix_seed(config.seed, 202));
    state.assignment = std::move(post.assignment);
    state.centers = std::move(post.centers);
  }
  return state;
}

const char* to_string(OutlierKind kind) {
  switch (kind) {
    case OutlierKind::kStructural: return "structural";
    case OutlierKind::kAttribute: return "attribute";
    case OutlierKind::kBoth: return "both";
  }
  return "unknown";
}

std::vector<RankedOutlier> rank_outliers(const DenseVector& o_s, const DenseVector& o_a,
                                         std::size_t top_n) {
  if (o_s.size() != o_a.size()) throw ShapeError("rank_outliers: score vectors differ in length");
  const auto n = static_cast<std::size_t>(o_s.size());

  auto ranks_of = [n](const DenseVector& s) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return s(a) > s(b); });
    std::vector<int> rank(n);
    for (std::size_t pos = 0; pos < n; ++pos) rank[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos + 1);
    return rank;
  };
  const std::vector<int> rs = ranks_of(o_s), ra = ranks_of(o_a);

  std::vector<RankedOutlier> all(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = all[i];
    r.node = static_cast<int>(i);
    r.structural_score = o_s(static_cast<Eigen::Index>(i));
    r.attribute_score = o_a(static_cast<Eigen::Index>(i));
    r.structural_rank = rs[i];
    r.attribute_rank = ra[i];
    r.kind = rs[i] < ra[i] ? OutlierKind::kStructural
             : ra[i] < rs[i] ? OutlierKind::kAttribute
                             : OutlierKind::kBoth;
  }
  std::sort(all.begin(), all.end(), [](const RankedOutlier& a, const RankedOutlier& b) {
    const int ba = std::min(a.structural_rank, a.attribute_rank);
    const int bb = std::min(b.structural_rank, b.attribute_rank);
    if (ba != bb) return ba < bb;
    const double sa = a.structural_score + a.attribute_score;
    const double sb = b.structural_score + b.attribute_score;
    if (sa != sb) return sa > sb;
    return a.node < b.node;
  });
  all.resize(std::min(top_n, n));
  for (std::size_t i = 0; i < all.size(); ++i) all[i].combined_rank = static_cast<int>(i + 1);
  return all;
}

void write_loss_csv(std::ostream& out, const std::vector<IterationRecord>& history) {
  out << "iteration,L_str,L_att,L_clus,total\n";
  out << std::setprecision(17);
  for (const auto& r : history) {
    out << r.iteration << ',' << r.components.structural << ',' << r.components.attribute << ','
        << r.components.clustering << ',' << r.total << '\n';
  }
}

}  // namespace cogcn
