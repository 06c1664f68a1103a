#pragma once

// Central-difference check of grad_params on randomly generated instances.
// Shared by the gcn unit tests and the acceptance suite.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cogcn/gcn.hpp"
#include "cogcn/graph_ingest.hpp"
#include "test_util.hpp"

namespace cogcn::testing {

struct RandomInstance {
  DenseMatrix a_hat, x, a_target, centers;
  DenseVector o_s, o_a;
  std::vector<int> assignment;
  ModelParams params;
};

inline RandomInstance make_random_instance(Eigen::Index nodes, Eigen::Index features, Eigen::Index hidden,
                                           Eigen::Index embed, int clusters, std::uint64_t seed) {
  Rng rng(seed);
  RandomInstance r;
  const DenseMatrix a = random_adjacency(nodes, 0.4, rng);
  r.a_hat = normalize_adjacency(a, true);
  r.a_target = symmetrize(a);
  r.x = random_matrix(nodes, features, rng, 0.0, 1.0);
  r.o_s = random_simplex(nodes, rng);
  r.o_a = random_simplex(nodes, rng);
  r.centers = random_matrix(clusters, embed, rng, 0.0, 1.0);
  for (Eigen::Index i = 0; i < nodes; ++i) r.assignment.push_back(static_cast<int>(rng.uniform_index(clusters)));
  // Skewed positive so most ReLUs are active and the gradient is non-trivial.
  r.params = {random_matrix(features, hidden, rng, -0.25, 0.5), random_matrix(hidden, embed, rng, -0.25, 0.5),
              random_matrix(embed, hidden, rng, -0.25, 0.5), random_matrix(hidden, features, rng, -0.25, 0.5)};
  return r;
}

inline ObjectiveTerms terms_for(const RandomInstance& r, const LossWeights& w) {
  return {r.a_hat, r.x, r.a_target, outlier_log_weights(r.o_s), outlier_log_weights(r.o_a),
          &r.assignment, &r.centers, w};
}

struct GradientCheck {
  double max_relative_error = 0.0;
  int checked = 0;
  int skipped_at_kinks = 0;
  int nonzero = 0;  // checked entries with a non-zero analytic gradient
};

/// Relative error |a - n| / max(|a|, |n|, floor). The floor keeps entries
/// whose true gradient is ~0 from being judged on round-off alone.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

inline bool same_activation_pattern(const ForwardCache& a, const ForwardCache& b) {
  return relu_mask(a.pre0) == relu_mask(b.pre0) && relu_mask(a.pre1) == relu_mask(b.pre1) &&
         relu_mask(a.pre2) == relu_mask(b.pre2) && relu_mask(a.pre3) == relu_mask(b.pre3);
}

/// Compares grad_params against finite_diff_grad for all four matrices.
/// Entries whose ±h probes change any ReLU pattern sit on a kink and are
/// skipped.
inline GradientCheck check_gradients(const RandomInstance& r, const LossWeights& w, double h = 1e-5) {
  const ObjectiveTerms terms = terms_for(r, w);
  const ForwardCache cache = forward(r.a_hat, r.x, r.params);
  const ParamGradients analytic = grad_params(terms, r.params, cache);

  GradientCheck out;
  for (int k = 0; k < 4; ++k) {
    ModelParams probe = r.params;
    DenseMatrix& slot = *probe.all()[static_cast<std::size_t>(k)];
    const DenseMatrix base = slot;
    auto loss_at = [&](const DenseMatrix& wk) {
      slot = wk;
      return evaluate_total(terms, probe);
    };
    const DenseMatrix numeric = finite_diff_grad(loss_at, base, h);
    const DenseMatrix& ana = *analytic.all()[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < base.rows(); ++i) {
      for (Eigen::Index j = 0; j < base.cols(); ++j) {
        slot = base;
        slot(i, j) = base(i, j) + h;
        const ForwardCache up = forward(r.a_hat, r.x, probe);
        slot(i, j) = base(i, j) - h;
        const ForwardCache down = forward(r.a_hat, r.x, probe);
        slot = base;
        if (!same_activation_pattern(up, cache) || !same_activation_pattern(down, cache)) {
          ++out.skipped_at_kinks;
          continue;
        }
        ++out.checked;
        if (ana(i, j) != 0.0) ++out.nonzero;
        out.max_relative_error = std::max(out.max_relative_error, relative_error(ana(i, j), numeric(i, j)));
      }
    }
  }
  return out;
}

}  // namespace cogcn::testing
