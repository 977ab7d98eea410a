#include <gtest/gtest.h>

#include "expanders/random.hpp"
#include "oracles.hpp"

using namespace expanders;

namespace {

void expect_same(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol = 1e-12) {
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), tol);
}

}  // namespace

TEST(GraphCore, LoopsCountOnceTowardsDegree) {
  RegularMultigraph g = build_graph(2, {{0, 0, 2}, {0, 1, 1}, {1, 1, 2}});
  EXPECT_EQ(g.degree(), 3u);
  EXPECT_EQ(g.mult(0, 0), 2u);
  EXPECT_EQ(g.mult(1, 0), 1u);
}

TEST(GraphCore, ParallelEdgesMerge) {
  RegularMultigraph g = build_graph(2, {{0, 1, 1}, {1, 0, 2}});
  EXPECT_EQ(g.mult(0, 1), 3u);
  EXPECT_EQ(g.degree(), 3u);
}

TEST(GraphCore, NonRegularRejected) {
  EXPECT_THROW(build_graph(3, {{0, 1, 1}, {1, 2, 1}}), NonRegular);
  EXPECT_THROW(build_graph(2, {{0, 2, 1}}), InvalidInput);
}

TEST(GraphCore, CycleSpectrumClosedForm) {
  for (std::size_t n : {3, 5, 8, 11}) {
    auto eig = oracle::sorted_eigs(oracle::walk_matrix(cycle(n)));
    std::vector<double> want;
    for (std::size_t k = 0; k < n; ++k) want.push_back(std::cos(2 * M_PI * static_cast<double>(k) / n));
    std::sort(want.begin(), want.end());
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(eig[k], want[k], 1e-12);
  }
}

TEST(GraphCore, NormalizedAdjacencyIsSymmetricStochastic) {
  RegularMultigraph g = random_regular(20, 5, 3);
  auto A = normalized_adjacency(g).matrix();
  EXPECT_LE((A - A.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((A.rowwise().sum().array() - 1).abs().maxCoeff(), 1e-12);
}

TEST(GraphCore, PowerMatchesMatrixPower) {
  RegularMultigraph g = random_regular(12, 3, 1);
  Eigen::MatrixXd E = oracle::mult_matrix(g);
  expect_same(oracle::mult_matrix(graph_power(g, 3)), E * E * E);
  EXPECT_EQ(graph_power(g, 3).degree(), 27u);
}

TEST(GraphCore, CesaroMatchesWeightedPowerSum) {
  RegularMultigraph g = random_regular(10, 4, 2);
  const double d = 4;
  Eigen::MatrixXd E = oracle::mult_matrix(g);
  for (unsigned m : {1u, 2u, 3u, 5u}) {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(10, 10), P = Eigen::MatrixXd::Identity(10, 10);
    for (unsigned t = 0; t < m; ++t) {
      S += std::pow(d, m - 1 - t) * P;
      P = P * E;
    }
    RegularMultigraph c = cesaro_graph(g, m);
    expect_same(oracle::mult_matrix(c), S);
    EXPECT_EQ(c.degree(), static_cast<mult_t>(m * std::pow(d, m - 1)));
    // normalised form equals the matrix average of walk powers
    expect_same(oracle::walk_matrix(c), cesaro_matrix(normalized_adjacency(g), m).matrix(), 1e-12);
  }
}

TEST(GraphCore, CesaroOfOneIsIdentity) {
  RegularMultigraph c = cesaro_graph(cycle(7), 1);
  expect_same(oracle::mult_matrix(c), Eigen::MatrixXd::Identity(7, 7));
}

TEST(GraphCore, EdgeCompletion) {
  RegularMultigraph g = cycle(5);
  // D = 7 = 3*2 + 1: three copies of each edge and one loop per vertex
  RegularMultigraph c = edge_completion(g, 7);
  EXPECT_EQ(c.degree(), 7u);
  expect_same(oracle::mult_matrix(c), 3 * oracle::mult_matrix(g) + Eigen::MatrixXd::Identity(5, 5));
  EXPECT_THROW(edge_completion(g, 1), InvalidInput);
}

TEST(GraphCore, BipartiteDoubleCover) {
  RegularMultigraph g = random_regular(6, 3, 4);
  Eigen::MatrixXd E = oracle::mult_matrix(g), B = Eigen::MatrixXd::Zero(12, 12);
  B.topRightCorner(6, 6) = E;
  B.bottomLeftCorner(6, 6) = E;
  expect_same(oracle::mult_matrix(bipartite_double_graph(g)), B);
  expect_same(bipartite_double(normalized_adjacency(g)).matrix(), B / 3.0);
  EXPECT_TRUE(is_bipartite(bipartite_double_graph(g)));
}

TEST(GraphCore, CollapseFormula) {
  RegularMultigraph b = bipartite_double_graph(random_regular(5, 3, 9));
  Eigen::MatrixXd E = oracle::mult_matrix(b), F = Eigen::MatrixXd::Zero(5, 5);
  for (int u = 0; u < 5; ++u)
    for (int v = 0; v < 5; ++v) F(u, v) = E(u, v + 5) + E(u + 5, v);
  RegularMultigraph c = collapse_bipartite(b);
  expect_same(oracle::mult_matrix(c), F);
  EXPECT_EQ(c.degree(), 6u);
  EXPECT_THROW(collapse_bipartite(cycle(5)), InvalidInput);
  EXPECT_THROW(collapse_bipartite(cycle(6), std::vector<vid_t>{3, 3, 4}), InvalidInput);
}

TEST(GraphCore, HalfSizeMirroredIsRegular) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    RegularMultigraph g = random_regular(8, 3, s);
    RegularMultigraph h = half_size_mirrored(g);
    EXPECT_EQ(h.n(), 4u);
    EXPECT_EQ(h.degree(), 24u);
  }
}

TEST(GraphCore, HalfSizeRequiresBalancedPartition) {
  // C_4, V' = {0,1}: E(z, V') = E(sigma z, V'') = 1 for both z
  RegularMultigraph h = half_size(cycle(4));
  EXPECT_EQ(h.n(), 2u);
  EXPECT_EQ(h.degree(), 8u);
  std::size_t rejected = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    RegularMultigraph g = random_regular(6, 3, s);
    try {
      EXPECT_EQ(half_size(g).degree(), 12u);
    } catch (const NonRegular&) {
      ++rejected;
    }
  }
  EXPECT_GT(rejected, 0u);
}

TEST(GraphCore, ComponentsAndBipartiteness) {
  EXPECT_TRUE(is_bipartite(cycle(6)));
  EXPECT_FALSE(is_bipartite(cycle(7)));
  EXPECT_FALSE(is_connected(identity_graph(3)));
  EXPECT_TRUE(is_connected(complete_with_loops(4)));
  auto d = bfs_distances(cycle(8), 0);
  EXPECT_EQ(d[4], 4u);
  EXPECT_EQ(bfs_distances(identity_graph(2), 0)[1], SIZE_MAX);
}

TEST(GraphCore, TrivialBoundValues) {
  auto t = trivial_poincare_bounds(9, 2, 1);
  EXPECT_DOUBLE_EQ(t.gamma_bound, 162);
  EXPECT_DOUBLE_EQ(t.gamma_plus_bound, 648);
}

TEST(GraphCore, EdgeListRoundTripIsByteExact) {
  RegularMultigraph g = random_regular(17, 5, 11);
  const std::string text = to_edge_list(g);
  EXPECT_EQ(to_edge_list(from_edge_list(text)), text);
  EXPECT_EQ(from_edge_list(text), g);
}

TEST(GraphCore, ParseErrorsCarryLineNumbers) {
  try {
    from_edge_list("3 2\n0 1 1\n1 2\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 3u);
  }
  EXPECT_THROW(from_edge_list("2 1\n0 5 1\n"), ParseError);
  EXPECT_THROW(from_edge_list("2 2\n0 1 1\n"), ParseError);  // declared degree wrong
  EXPECT_THROW(from_edge_list(""), ParseError);
}

TEST(GraphCore, OverflowIsReported) {
  RegularMultigraph g = complete_with_loops(3);
  EXPECT_THROW(graph_power(g, 45), Overflow);
}
