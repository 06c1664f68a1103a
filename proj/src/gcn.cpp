#include "cogcn/gcn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cogcn/errors.hpp"

namespace cogcn {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ShapeError(what);
}

}  // namespace

ModelParams ModelParams::glorot(Eigen::Index feature_dim, Eigen::Index hidden_dim,
                                Eigen::Index embed_dim, std::uint64_t seed) {
  return {glorot_init(feature_dim, hidden_dim, mix_seed(seed, 0)),
          glorot_init(hidden_dim, embed_dim, mix_seed(seed, 1)),
          glorot_init(embed_dim, hidden_dim, mix_seed(seed, 2)),
          glorot_init(hidden_dim, feature_dim, mix_seed(seed, 3))};
}

ForwardCache encode(const DenseMatrix& a_hat, const DenseMatrix& x, const ModelParams& params) {
  require(a_hat.rows() == a_hat.cols(), "encode: Â must be square");
  require(x.rows() == a_hat.rows(), "encode: X rows must match Â");
  require(params.w0.rows() == x.cols(), "encode: W0 rows must equal feature width");
  require(params.w1.rows() == params.w0.cols(), "encode: W1 rows must equal W0 cols");

  ForwardCache c;
  c.agg_x = a_hat * x;
  c.pre0 = c.agg_x * params.w0;
  c.hidden0 = relu(c.pre0);
  c.agg_h0 = a_hat * c.hidden0;
  c.pre1 = c.agg_h0 * params.w1;
  c.z = relu(c.pre1);
  return c;
}

DenseMatrix decode(const DenseMatrix& a_hat, const DenseMatrix& z, const ModelParams& params,
                   ForwardCache* cache) {
  require(z.rows() == a_hat.rows(), "decode: Z rows must match Â");
  require(params.w2.rows() == z.cols(), "decode: W2 rows must equal embedding width");
  require(params.w3.rows() == params.w2.cols(), "decode: W3 rows must equal W2 cols");

  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c.agg_z = a_hat * z;
  c.pre2 = c.agg_z * params.w2;
  c.hidden2 = relu(c.pre2);
  c.agg_h2 = a_hat * c.hidden2;
  c.pre3 = c.agg_h2 * params.w3;
  c.x_hat = relu(c.pre3);
  return c.x_hat;
}

ForwardCache forward(const DenseMatrix& a_hat, const DenseMatrix& x, const ModelParams& params) {
  ForwardCache c = encode(a_hat, x, params);
  require(params.w3.cols() == x.cols(), "forward: W3 cols must equal feature width");
  decode(a_hat, c.z, params, &c);
  return c;
}

DenseVector outlier_log_weights(const DenseVector& scores) {
  DenseVector w(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    if (!(scores(i) > 0.0))
      throw std::domain_error("outlier score at node " + std::to_string(i) + " is not positive");
    w(i) = -std::log(scores(i));
  }
  return w;
}

DenseVector structural_residuals(const DenseMatrix& a_target, const DenseMatrix& z) {
  require(a_target.rows() == z.rows() && a_target.cols() == z.rows(),
          "structural_residuals: A must be |V| x |V| matching Z");
  const DenseMatrix r = a_target - z * z.transpose();
  return r.rowwise().squaredNorm();
}

DenseVector attribute_residuals(const DenseMatrix& x, const DenseMatrix& x_hat) {
  require(x.rows() == x_hat.rows() && x.cols() == x_hat.cols(),
          "attribute_residuals: X and X̂ shapes differ");
  return (x - x_hat).rowwise().squaredNorm();
}

double loss_str(const DenseMatrix& a_target, const DenseMatrix& z, const DenseVector& o_s) {
  return outlier_log_weights(o_s).dot(structural_residuals(a_target, z));
}

double loss_att(const DenseMatrix& x, const DenseMatrix& x_hat, const DenseVector& o_a) {
  return outlier_log_weights(o_a).dot(attribute_residuals(x, x_hat));
}

double loss_clus(const DenseMatrix& z, const std::vector<int>& assignment,
                 const DenseMatrix& centers) {
  require(static_cast<Eigen::Index>(assignment.size()) == z.rows(),
          "loss_clus: assignment length must equal |V|");
  require(centers.cols() == z.cols(), "loss_clus: center width must equal embedding width");
  double total = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const int k = assignment[static_cast<std::size_t>(i)];
    if (k < 0 || k >= centers.rows())
      throw std::invalid_argument("loss_clus: cluster id out of range at node " + std::to_string(i));
    total += (z.row(i) - centers.row(k)).squaredNorm();
  }
  return total;
}

double loss_clus(const DenseMatrix& z, const DenseMatrix& m, const DenseMatrix& centers) {
  require(m.rows() == z.rows() && m.cols() == centers.rows(),
          "loss_clus: M must be |V| x K");
  std::vector<int> assignment(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    int hot = -1;
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (m(i, k) == 1.0 && hot < 0) {
        hot = static_cast<int>(k);
      } else if (m(i, k) != 0.0) {
        hot = -2;
        break;
      }
    }
    if (hot < 0) throw std::invalid_argument("loss_clus: row " + std::to_string(i) + " of M is not one-hot");
    assignment[static_cast<std::size_t>(i)] = hot;
  }
  return loss_clus(z, assignment, centers);
}

double total_loss(const LossComponents& c, const LossWeights& w) {
  return w.alpha1 * c.structural + w.alpha2 * c.attribute + w.alpha3 * c.clustering;
}

LossComponents evaluate_components(const ObjectiveTerms& terms, const ForwardCache& cache) {
  LossComponents c;
  c.structural = terms.struct_row_weights.dot(structural_residuals(terms.a_target, cache.z));
  c.attribute = terms.attr_row_weights.dot(attribute_residuals(terms.x, cache.x_hat));
  if (terms.assignment && terms.centers)
    c.clustering = loss_clus(cache.z, *terms.assignment, *terms.centers);
  return c;
}

double evaluate_total(const ObjectiveTerms& terms, const ModelParams& params) {
  return total_loss(evaluate_components(terms, forward(terms.a_hat, terms.x, params)),
                    terms.weights);
}

ParamGradients grad_params(const ObjectiveTerms& terms, const ModelParams& params,
                           const ForwardCache& cache) {
  const DenseMatrix& a_hat = terms.a_hat;
  const DenseMatrix& z = cache.z;
  const LossWeights& w = terms.weights;
  const DenseMatrix a_hat_t = a_hat.transpose();

  // Attribute term: dL/dX̂ = -2 α2 diag(w_a) (X - X̂).
  DenseMatrix d_xhat = -2.0 * w.alpha2 * (terms.attr_row_weights.asDiagonal() * (terms.x - cache.x_hat));

  ParamGradients g;
  DenseMatrix d_pre3 = d_xhat.cwiseProduct(relu_mask(cache.pre3));
  g.w3 = cache.agg_h2.transpose() * d_pre3;
  DenseMatrix d_pre2 = (a_hat_t * d_pre3 * params.w3.transpose()).cwiseProduct(relu_mask(cache.pre2));
  g.w2 = cache.agg_z.transpose() * d_pre2;
  DenseMatrix d_z = a_hat_t * d_pre2 * params.w2.transpose();

  // Structural term: with S = Z Zᵀ and G = dL/dS = -2 α1 diag(w_s) (A - S),
  // dL/dZ = (G + Gᵀ) Z.
  if (w.alpha1 != 0.0) {
    const DenseMatrix gs = -2.0 * w.alpha1 *
                           (terms.struct_row_weights.asDiagonal() * (terms.a_target - z * z.transpose()));
    d_z += (gs + gs.transpose()) * z;
  }

  if (terms.assignment && terms.centers && w.alpha3 != 0.0) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      const int k = (*terms.assignment)[static_cast<std::size_t>(i)];
      d_z.row(i) += 2.0 * w.alpha3 * (z.row(i) - terms.centers->row(k));
    }
  }

  DenseMatrix d_pre1 = d_z.cwiseProduct(relu_mask(cache.pre1));
  g.w1 = cache.agg_h0.transpose() * d_pre1;
  DenseMatrix d_pre0 = (a_hat_t * d_pre1 * params.w1.transpose()).cwiseProduct(relu_mask(cache.pre0));
  g.w0 = cache.agg_x.transpose() * d_pre0;
  return g;
}

}  // namespace cogcn
