#include "cogcn/numkit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cogcn/errors.hpp"

namespace cogcn {

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % bound);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

DenseMatrix relu(const DenseMatrix& m) { return m.cwiseMax(0.0); }

DenseMatrix relu_mask(const DenseMatrix& m) {
  return (m.array() > 0.0).cast<double>().matrix();
}

DenseMatrix glorot_init(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  if (rows <= 0 || cols <= 0) throw ShapeError("glorot_init: dimensions must be positive");
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Rng rng(seed);
  DenseMatrix w(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = rng.uniform(-limit, limit);
  return w;
}

AdamState AdamState::for_params(std::span<const DenseMatrix> params) {
  AdamState s;
  for (const auto& p : params) {
    s.first_moment.push_back(DenseMatrix::Zero(p.rows(), p.cols()));
    s.second_moment.push_back(DenseMatrix::Zero(p.rows(), p.cols()));
  }
  return s;
}

double AdamState::effective_lr() const {
  const auto decays = static_cast<double>(step_count / decay_every);
  return base_lr * std::pow(decay_rate, decays);
}

void adam_step(std::span<DenseMatrix> params, std::span<const DenseMatrix> grads,
               AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size() ||
      params.size() != state.second_moment.size())
    throw ShapeError("adam_step: parameter/gradient/moment counts differ");
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto r = params[k].rows(), c = params[k].cols();
    if (grads[k].rows() != r || grads[k].cols() != c || state.first_moment[k].rows() != r ||
        state.first_moment[k].cols() != c || state.second_moment[k].rows() != r ||
        state.second_moment[k].cols() != c)
      throw ShapeError("adam_step: shape mismatch for parameter " + std::to_string(k));
  }

  const double lr = state.effective_lr();
  const double t = static_cast<double>(state.step_count + 1);
  const double bc1 = 1.0 - std::pow(state.beta1, t);
  const double bc2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& m = state.first_moment[k];
    auto& v = state.second_moment[k];
    m = state.beta1 * m + (1.0 - state.beta1) * grads[k];
    v = state.beta2 * v + (1.0 - state.beta2) * grads[k].cwiseProduct(grads[k]);
    params[k].array() -=
        lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + state.epsilon);
  }
  ++state.step_count;
}

DenseMatrix finite_diff_grad(const std::function<double(const DenseMatrix&)>& loss_fn,
                             const DenseMatrix& at, double h) {
  DenseMatrix grad(at.rows(), at.cols());
  DenseMatrix probe = at;
  for (Eigen::Index i = 0; i < at.rows(); ++i) {
    for (Eigen::Index j = 0; j < at.cols(); ++j) {
      const double orig = probe(i, j);
      probe(i, j) = orig + h;
      const double up = loss_fn(probe);
      probe(i, j) = orig - h;
      const double down = loss_fn(probe);
      probe(i, j) = orig;
      if (!std::isfinite(up) || !std::isfinite(down))
        throw std::domain_error("finite_diff_grad: non-finite loss");
      grad(i, j) = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

}  // namespace cogcn
