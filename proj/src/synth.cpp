#include "cogcn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cogcn {
namespace {

std::string class_name(int block, int index) {
  return "b" + std::to_string(block) + ".Class" + std::to_string(index);
}

double choose2(double n) { return n * (n - 1.0) / 2.0; }

}  // namespace

void PlantedSpec::validate() const {
  if (blocks < 1 || nodes_per_block < 1 || attr_dim_per_block < 1)
    throw std::invalid_argument("planted spec: sizes must be positive");
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0))
    throw std::invalid_argument("planted spec: need 0 <= p_out < p_in <= 1");
  if (n_struct_outliers < 0 || n_attr_outliers < 0 || n_struct_outliers > num_nodes() ||
      n_attr_outliers > num_nodes())
    throw std::invalid_argument("planted spec: outlier counts out of range");
  if (attr_noise < 0.0) throw std::invalid_argument("planted spec: negative noise");
}

bool PlantedGraph::is_outlier(int node) const {
  return std::find(struct_outliers.begin(), struct_outliers.end(), node) != struct_outliers.end() ||
         std::find(attr_outliers.begin(), attr_outliers.end(), node) != attr_outliers.end();
}

PlantedGraph planted_graph(const PlantedSpec& spec) {
  spec.validate();
  const int n = spec.num_nodes();
  Rng rng(spec.seed);

  PlantedGraph g;
  g.labels.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g.labels[static_cast<std::size_t>(i)] = i / spec.nodes_per_block;

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);
  for (int t = 0; t < spec.n_struct_outliers; ++t) g.struct_outliers.push_back(order[static_cast<std::size_t>(t)]);
  for (int t = 0; t < spec.n_attr_outliers; ++t)
    g.attr_outliers.push_back(order[static_cast<std::size_t>((spec.n_struct_outliers + t) % n)]);
  std::sort(g.struct_outliers.begin(), g.struct_outliers.end());
  std::sort(g.attr_outliers.begin(), g.attr_outliers.end());

  std::vector<bool> structural(static_cast<std::size_t>(n), false);
  for (int v : g.struct_outliers) structural[static_cast<std::size_t>(v)] = true;

  g.adjacency = DenseMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool same = g.labels[static_cast<std::size_t>(i)] == g.labels[static_cast<std::size_t>(j)];
      const bool rewired = structural[static_cast<std::size_t>(i)] || structural[static_cast<std::size_t>(j)];
      const double p = (same || rewired) ? spec.p_in : spec.p_out;
      if (rng.bernoulli(p)) g.adjacency(i, j) = g.adjacency(j, i) = 1.0;
    }
  }

  g.pattern_block = g.labels;
  for (int v : g.attr_outliers) {
    if (spec.blocks < 2) break;
    const int own = g.labels[static_cast<std::size_t>(v)];
    const int shift = 1 + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(spec.blocks - 1)));
    g.pattern_block[static_cast<std::size_t>(v)] = (own + shift) % spec.blocks;
  }

  const int d = spec.attr_dim_per_block;
  g.attributes = DenseMatrix::Zero(n, spec.blocks * d);
  for (int i = 0; i < n; ++i) {
    const int pb = g.pattern_block[static_cast<std::size_t>(i)];
    for (int c = 0; c < g.attributes.cols(); ++c) {
      const double base = (c / d == pb) ? 1.0 : 0.0;
      g.attributes(i, c) = base + rng.uniform(0.0, spec.attr_noise);
    }
  }
  g.attributes = row_normalize(g.attributes);
  return g;
}

RawMonolith PlantedGraph::to_monolith() const {
  const int n = static_cast<int>(labels.size());
  const int blocks = static_cast<int>(attributes.cols()) > 0
                         ? *std::max_element(labels.begin(), labels.end()) + 1
                         : 1;
  const int d = static_cast<int>(attributes.cols()) / blocks;

  RawMonolith raw;
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(class_name(labels[static_cast<std::size_t>(i)], i));
  raw.classes = names;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (adjacency(i, j) != 0.0 || adjacency(j, i) != 0.0)
        raw.calls.emplace_back(names[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(j)]);
  for (int b = 0; b < blocks; ++b) {
    for (int t = 0; t < d; ++t) {
      auto& trace = raw.entrypoint_traces["ep" + std::to_string(b) + "_" + std::to_string(t)];
      for (int i = 0; i < n; ++i)
        if (pattern_block[static_cast<std::size_t>(i)] == b) trace.insert(names[static_cast<std::size_t>(i)]);
    }
  }
  return raw;
}

RawMonolith synthetic_monolith(const MonolithShape& shape) {
  if (shape.classes < 1 || shape.entrypoints < 1 || shape.modules < 1 || shape.modules > shape.classes)
    throw std::invalid_argument("synthetic_monolith: invalid shape");
  Rng rng(shape.seed);
  const int n = shape.classes;
  auto module_of = [&](int i) { return static_cast<int>(static_cast<long>(i) * shape.modules / n); };

  RawMonolith raw;
  for (int i = 0; i < n; ++i) raw.classes.push_back(class_name(module_of(i), i));

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double p = module_of(i) == module_of(j) ? shape.p_in : shape.p_out;
      if (rng.bernoulli(p)) raw.calls.emplace_back(raw.classes[static_cast<std::size_t>(i)],
                                                   raw.classes[static_cast<std::size_t>(j)]);
    }
  }
  // A few subclasses per module, each pointing at the module's first class.
  for (int i = 0; i < n; ++i) {
    const int base = static_cast<int>(std::ceil(static_cast<double>(module_of(i)) * n / shape.modules));
    if (i != base && module_of(base) == module_of(i) && rng.bernoulli(0.1))
      raw.inheritance.emplace_back(raw.classes[static_cast<std::size_t>(i)],
                                   raw.classes[static_cast<std::size_t>(base)]);
  }

  std::vector<bool> covered(static_cast<std::size_t>(n), false);
  std::vector<std::string> ep_names;
  std::vector<int> ep_module;
  const int width = static_cast<int>(std::to_string(shape.entrypoints).size());
  for (int e = 0; e < shape.entrypoints; ++e) {
    std::string idx = std::to_string(e);
    idx.insert(0, static_cast<std::size_t>(width) - idx.size(), '0');
    const int m = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(shape.modules)));
    ep_names.push_back("api" + idx);
    ep_module.push_back(m);
    auto& trace = raw.entrypoint_traces[ep_names.back()];
    for (int i = 0; i < n; ++i) {
      const double p = module_of(i) == m ? 0.4 : shape.cross_trace_prob;
      if (rng.bernoulli(p)) {
        trace.insert(raw.classes[static_cast<std::size_t>(i)]);
        covered[static_cast<std::size_t>(i)] = true;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (covered[static_cast<std::size_t>(i)]) continue;
    std::vector<int> same;
    for (int e = 0; e < shape.entrypoints; ++e)
      if (ep_module[static_cast<std::size_t>(e)] == module_of(i)) same.push_back(e);
    const int e = same.empty() ? static_cast<int>(rng.uniform_index(static_cast<std::size_t>(shape.entrypoints)))
                               : same[rng.uniform_index(same.size())];
    raw.entrypoint_traces[ep_names[static_cast<std::size_t>(e)]].insert(raw.classes[static_cast<std::size_t>(i)]);
  }
  return raw;
}

double adjusted_rand_index(const std::vector<int>& labels_a, const std::vector<int>& labels_b) {
  if (labels_a.size() != labels_b.size())
    throw std::invalid_argument("adjusted_rand_index: labelings differ in length");
  const double n = static_cast<double>(labels_a.size());
  if (labels_a.size() < 2) return 1.0;

  std::map<std::pair<int, int>, double> cells;
  std::map<int, double> rows, cols;
  for (std::size_t i = 0; i < labels_a.size(); ++i) {
    cells[{labels_a[i], labels_b[i]}] += 1.0;
    rows[labels_a[i]] += 1.0;
    cols[labels_b[i]] += 1.0;
  }
  double index = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [_, c] : cells) index += choose2(c);
  for (const auto& [_, c] : rows) sum_a += choose2(c);
  for (const auto& [_, c] : cols) sum_b += choose2(c);
  const double expected = sum_a * sum_b / choose2(n);
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;  // both labelings trivial and identical
  return (index - expected) / (max_index - expected);
}

}  // namespace cogcn
