#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cogcn {

/// Row-major dense matrix of doubles. All matrix-valued quantities in the
/// model (adjacency, attributes, embeddings, weights) use this type.
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using DenseVector = Eigen::VectorXd;

/// Seedable generator with a fixed, portable output sequence.
///
/// The engine is std::mt19937_64, whose output is fully specified by the
/// C++ standard. The standard distributions are implementation-defined, so
/// the conversions to doubles and bounded integers are done here:
///   uniform01()      = (x >> 11) * 2^-53
///   uniform_index(n) = x mod n, rejecting x >= floor(2^64 / n) * n
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform01();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent sub-seeds from one seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

DenseMatrix relu(const DenseMatrix& m);
/// 1 where m > 0, else 0 (subgradient at exactly zero is 0).
DenseMatrix relu_mask(const DenseMatrix& m);

/// Glorot/Xavier uniform: entries in [-sqrt(6/(rows+cols)), sqrt(6/(rows+cols))].
DenseMatrix glorot_init(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

struct AdamState {
  std::vector<DenseMatrix> first_moment;
  std::vector<DenseMatrix> second_moment;
  std::uint64_t step_count = 0;
  double base_lr = 0.01;
  double decay_rate = 0.95;
  std::uint64_t decay_every = 100;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  /// Zeroed moments shaped like `params`.
  static AdamState for_params(std::span<const DenseMatrix> params);
  /// base_lr * decay_rate^floor(step_count / decay_every), for the next step.
  double effective_lr() const;
};

/// One bias-corrected ADAM update of every matrix in `params`.
/// Throws ShapeError if grads or moments do not match params.
void adam_step(std::span<DenseMatrix> params, std::span<const DenseMatrix> grads,
               AdamState& state);

/// Central differences (f(x+h) - f(x-h)) / 2h for every entry of `at`.
/// Throws std::domain_error if the loss is non-finite at any probe.
DenseMatrix finite_diff_grad(const std::function<double(const DenseMatrix&)>& loss_fn,
                             const DenseMatrix& at, double h = 1e-5);

}  // namespace cogcn
