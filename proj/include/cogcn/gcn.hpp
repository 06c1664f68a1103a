#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cogcn/numkit.hpp"

namespace cogcn {

/// Encoder W0 (F x H), W1 (H x F'); decoder W2 (F' x H), W3 (H x F).
struct ModelParams {
  DenseMatrix w0, w1, w2, w3;

  /// Glorot-initialized weights; each matrix draws from its own sub-seed.
  static ModelParams glorot(Eigen::Index feature_dim, Eigen::Index hidden_dim,
                            Eigen::Index embed_dim, std::uint64_t seed);

  std::array<DenseMatrix*, 4> all() { return {&w0, &w1, &w2, &w3}; }
  std::array<const DenseMatrix*, 4> all() const { return {&w0, &w1, &w2, &w3}; }
};

struct ForwardCache {
  DenseMatrix agg_x;    // Â X
  DenseMatrix pre0;     // Â X W0
  DenseMatrix hidden0;  // ReLU(pre0)
  DenseMatrix agg_h0;   // Â hidden0
  DenseMatrix pre1;     // Â hidden0 W1
  DenseMatrix z;        // ReLU(pre1)
  DenseMatrix agg_z;    // Â Z
  DenseMatrix pre2;
  DenseMatrix hidden2;
  DenseMatrix agg_h2;
  DenseMatrix pre3;
  DenseMatrix x_hat;
};

struct LossWeights {
  double alpha1 = 0.1;  // structure reconstruction
  double alpha2 = 0.1;  // attribute reconstruction
  double alpha3 = 0.8;  // clustering
};

struct LossComponents {
  double structural = 0.0;
  double attribute = 0.0;
  double clustering = 0.0;
};

/// Z = ReLU(Â ReLU(Â X W0) W1). The returned cache holds only encoder entries.
ForwardCache encode(const DenseMatrix& a_hat, const DenseMatrix& x, const ModelParams& params);

/// X̂ = ReLU(Â ReLU(Â Z W2) W3); fills the decoder entries of `cache`.
DenseMatrix decode(const DenseMatrix& a_hat, const DenseMatrix& z, const ModelParams& params,
                   ForwardCache* cache = nullptr);

/// encode followed by decode.
ForwardCache forward(const DenseMatrix& a_hat, const DenseMatrix& x, const ModelParams& params);

/// Per-row loss weights log(1/O_i). Throws std::domain_error if any O_i <= 0.
DenseVector outlier_log_weights(const DenseVector& scores);

/// Row-wise squared residuals ‖A_i: − (Z Zᵀ)_i:‖².
DenseVector structural_residuals(const DenseMatrix& a_target, const DenseMatrix& z);
/// Row-wise squared residuals ‖X_i: − X̂_i:‖².
DenseVector attribute_residuals(const DenseMatrix& x, const DenseMatrix& x_hat);

double loss_str(const DenseMatrix& a_target, const DenseMatrix& z, const DenseVector& o_s);
double loss_att(const DenseMatrix& x, const DenseMatrix& x_hat, const DenseVector& o_a);

/// Σ_i ‖Z_i − C_{assignment_i}‖². Throws std::invalid_argument on an
/// out-of-range cluster id.
double loss_clus(const DenseMatrix& z, const std::vector<int>& assignment, const DenseMatrix& centers);

/// Overload on a one-hot matrix; throws std::invalid_argument unless each
/// row holds exactly one 1 and zeros elsewhere.
double loss_clus(const DenseMatrix& z, const DenseMatrix& m, const DenseMatrix& centers);

double total_loss(const LossComponents& c, const LossWeights& w);

/// Everything that is held fixed while the network weights are optimized.
/// The row weights are log(1/O) normally, or all ones when the outlier
/// discount is disabled.
struct ObjectiveTerms {
  const DenseMatrix& a_hat;
  const DenseMatrix& x;
  const DenseMatrix& a_target;
  DenseVector struct_row_weights;
  DenseVector attr_row_weights;
  const std::vector<int>* assignment = nullptr;  // null: no clustering term
  const DenseMatrix* centers = nullptr;
  LossWeights weights;
};

LossComponents evaluate_components(const ObjectiveTerms& terms, const ForwardCache& cache);
double evaluate_total(const ObjectiveTerms& terms, const ModelParams& params);

struct ParamGradients {
  DenseMatrix w0, w1, w2, w3;
  std::array<const DenseMatrix*, 4> all() const { return {&w0, &w1, &w2, &w3}; }
};

/// Exact gradient of the weighted objective w.r.t. W0..W3 by reverse-mode
/// differentiation. `cache` must come from forward() on the same params.
ParamGradients grad_params(const ObjectiveTerms& terms, const ModelParams& params,
                           const ForwardCache& cache);

}  // namespace cogcn
