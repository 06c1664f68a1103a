#include "cogcn/synth.hpp"

#include <stdexcept>

#include <gtest/gtest.h>

#include "cogcn/graph_ingest.hpp"

namespace cogcn {
namespace {

TEST(PlantedGraphTest, NoCrossEdgesWithoutOutliers) {
  PlantedSpec spec;
  spec.p_out = 0.0;
  spec.n_struct_outliers = spec.n_attr_outliers = 0;
  const PlantedGraph g = planted_graph(spec);
  for (int i = 0; i < spec.num_nodes(); ++i)
    for (int j = 0; j < spec.num_nodes(); ++j)
      if (g.labels[static_cast<std::size_t>(i)] != g.labels[static_cast<std::size_t>(j)]) EXPECT_EQ(g.adjacency(i, j), 0.0);
}

TEST(PlantedGraphTest, AllStructuralOutliersLinkUniformly) {
  PlantedSpec spec;
  spec.blocks = 2;
  spec.nodes_per_block = 20;
  spec.n_struct_outliers = 40;
  spec.n_attr_outliers = 0;
  spec.seed = 3;
  const PlantedGraph g = planted_graph(spec);
  EXPECT_EQ(g.struct_outliers.size(), 40u);
  // Every pair uses p_in, so intra and cross densities agree.
  double intra = 0, cross = 0;
  for (int i = 0; i < 40; ++i)
    for (int j = i + 1; j < 40; ++j) (i / 20 == j / 20 ? intra : cross) += g.adjacency(i, j);
  EXPECT_NEAR(intra / 380.0, 0.3, 0.07);
  EXPECT_NEAR(cross / 400.0, 0.3, 0.07);
}

TEST(PlantedGraphTest, IntraEdgeFractionMatchesExpectation) {
  double observed = 0, expected = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    PlantedSpec spec;
    spec.seed = seed;
    const PlantedGraph g = planted_graph(spec);
    const int n = spec.num_nodes();
    double intra = 0, total = 0, e_intra = 0, e_total = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const bool same = g.labels[static_cast<std::size_t>(i)] == g.labels[static_cast<std::size_t>(j)];
        const bool rewired = std::count(g.struct_outliers.begin(), g.struct_outliers.end(), i) ||
                             std::count(g.struct_outliers.begin(), g.struct_outliers.end(), j);
        const double p = (same || rewired) ? spec.p_in : spec.p_out;
        e_total += p;
        total += g.adjacency(i, j);
        if (same) {
          e_intra += p;
          intra += g.adjacency(i, j);
        }
      }
    }
    observed += intra / total;
    expected += e_intra / e_total;
  }
  EXPECT_NEAR(observed / 10, expected / 10, 0.05);
}

TEST(PlantedGraphTest, ShapesAndDeterminism) {
  PlantedSpec spec;
  spec.seed = 5;
  const PlantedGraph a = planted_graph(spec), b = planted_graph(spec);
  EXPECT_EQ(a.adjacency, b.adjacency);
  EXPECT_EQ(a.attributes, b.attributes);
  EXPECT_EQ(a.struct_outliers, b.struct_outliers);
  EXPECT_EQ(a.attributes.rows(), 60);
  EXPECT_EQ(a.attributes.cols(), 4 * spec.attr_dim_per_block);
  EXPECT_EQ(a.adjacency, a.adjacency.transpose());
  EXPECT_EQ(a.adjacency.diagonal().sum(), 0.0);
  for (int i = 0; i < 60; ++i) EXPECT_NEAR(a.attributes.row(i).sum(), 1.0, 1e-12);
  for (int v : a.attr_outliers) EXPECT_NE(a.pattern_block[static_cast<std::size_t>(v)], a.labels[static_cast<std::size_t>(v)]);
  EXPECT_EQ(a.struct_outliers.size() + a.attr_outliers.size(), 6u);
  for (int v : a.struct_outliers)
    EXPECT_EQ(std::count(a.attr_outliers.begin(), a.attr_outliers.end(), v), 0);
}

TEST(PlantedGraphTest, InvalidSpecRejected) {
  PlantedSpec spec;
  spec.p_out = 0.5;
  EXPECT_THROW(planted_graph(spec), std::invalid_argument);
  spec = {};
  spec.n_attr_outliers = 61;
  EXPECT_THROW(planted_graph(spec), std::invalid_argument);
}

TEST(PlantedGraphTest, MonolithExportKeepsStructure) {
  PlantedSpec spec;
  spec.seed = 8;
  const PlantedGraph g = planted_graph(spec);
  const AppGraph app = build_app_graph(parse_monolith_text(monolith_to_json(g.to_monolith())));
  EXPECT_EQ(app.num_nodes(), 60);
  EXPECT_EQ(symmetrize(app.adjacency), g.adjacency);
  EXPECT_EQ(app.entrypoint_names.size(), static_cast<std::size_t>(4 * spec.attr_dim_per_block));
}

TEST(SyntheticMonolithTest, EveryClassTraced) {
  const RawMonolith raw = synthetic_monolith({36, 47, 6, 0.2, 0.01, 0.02, 3});
  EXPECT_EQ(raw.classes.size(), 36u);
  EXPECT_EQ(raw.entrypoint_traces.size(), 47u);
  EXPECT_EQ(prune_untraced(raw).classes.size(), 36u);
  EXPECT_NO_THROW(validate_monolith(raw));
}

TEST(AriTest, KnownValues) {
  const std::vector<int> a{0, 0, 1, 1, 2, 2};
  EXPECT_DOUBLE_EQ(adjusted_rand_index(a, a), 1.0);
  EXPECT_DOUBLE_EQ(adjusted_rand_index(std::vector<int>(6, 0), a), 0.0);
  EXPECT_DOUBLE_EQ(adjusted_rand_index(a, std::vector<int>(6, 4)), 0.0);
  // Contingency {2,1 | 0,1,2}: index 2, row pairs 6, column pairs 3,
  // expected 18/15 -> (2 - 1.2) / (4.5 - 1.2) = 8/33.
  EXPECT_NEAR(adjusted_rand_index({0, 0, 0, 1, 1, 1}, {0, 0, 1, 1, 2, 2}), 8.0 / 33.0, 1e-15);
  EXPECT_THROW(adjusted_rand_index({0, 1}, {0}), std::invalid_argument);
}

TEST(AriTest, SymmetricAndPermutationInvariant) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> a(25), b(25);
    for (auto& v : a) v = static_cast<int>(rng.uniform_index(4));
    for (auto& v : b) v = static_cast<int>(rng.uniform_index(3));
    std::vector<int> relabeled = a;
    for (auto& v : relabeled) v = (v * 7 + 2) % 11;
    EXPECT_NEAR(adjusted_rand_index(a, b), adjusted_rand_index(b, a), 1e-15);
    EXPECT_NEAR(adjusted_rand_index(relabeled, b), adjusted_rand_index(a, b), 1e-15);
  }
}

}  // namespace
}  // namespace cogcn
