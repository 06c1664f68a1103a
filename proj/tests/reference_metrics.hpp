#pragma once

#include <vector>

#include "cogcn/graph_ingest.hpp"

namespace cogcn::testing {

// Textbook double loop over all node pairs.
inline double reference_modularity(const DenseMatrix& directed, const std::vector<int>& c) {
  const DenseMatrix a = symmetrize(directed);
  const Eigen::Index n = a.rows();
  std::vector<double> k(static_cast<std::size_t>(n), 0.0);
  double two_m = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) k[static_cast<std::size_t>(i)] += a(i, j), two_m += a(i, j);
  if (two_m == 0) return 0;
  double q = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (c[static_cast<std::size_t>(i)] == c[static_cast<std::size_t>(j)])
        q += a(i, j) - k[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(j)] / two_m;
  return q / two_m;
}

}  // namespace cogcn::testing
