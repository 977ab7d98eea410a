#include <gtest/gtest.h>

#include "expanders/random.hpp"
#include "expanders/spectral.hpp"
#include "oracles.hpp"

using namespace expanders;
using Eigen::MatrixXd;

namespace {

double maxdiff(const MatrixXd& a, const MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

struct Pair {
  RegularMultigraph g1, g2;
};

std::vector<Pair> fixtures() {
  return {{cycle(5), cycle_with_loops(2)},
          {random_regular(6, 3, 1), cycle(3)},
          {random_regular(7, 4, 2), random_regular(4, 2, 3)},
          {build_graph(2, {{0, 0, 1}, {0, 1, 2}, {1, 1, 1}}), complete_with_loops(3)},
          {random_regular(9, 5, 4), random_regular(5, 3, 5)}};
}

}  // namespace

TEST(Products, CloudPermutationIsAnInvolution) {
  for (const auto& [g1, g2] : fixtures())
    for (std::uint64_t s : {0, 1, 2}) {
      auto L = s == 0 ? default_labeling(g1, g2) : random_labeling(g1, g2, s);
      MatrixXd P = oracle::cloud_permutation(g1, L);
      EXPECT_EQ(maxdiff(P * P, MatrixXd::Identity(P.rows(), P.cols())), 0);
      EXPECT_EQ(maxdiff(P, P.transpose()), 0);
    }
}

// Walk matrix of the zigzag product is (I x A2) P (I x A2).
TEST(Products, ZigzagMatchesRotationMapDefinition) {
  for (const auto& [g1, g2] : fixtures())
    for (std::uint64_t s : {0, 7, 8}) {
      auto L = s == 0 ? default_labeling(g1, g2) : random_labeling(g1, g2, s);
      RegularMultigraph z = zigzag(g1, g2, L);
      MatrixXd Bt = oracle::kron(MatrixXd::Identity(g1.n(), g1.n()), oracle::walk_matrix(g2));
      MatrixXd want = Bt * oracle::cloud_permutation(g1, L) * Bt;
      EXPECT_EQ(z.degree(), g2.degree() * g2.degree());
      EXPECT_LE(maxdiff(oracle::walk_matrix(z), want), 1e-12);
    }
}

TEST(Products, ReplacementAndBalancedReplacement) {
  for (const auto& [g1, g2] : fixtures()) {
    auto L = random_labeling(g1, g2, 3);
    const double d2 = static_cast<double>(g2.degree());
    MatrixXd Et = oracle::kron(MatrixXd::Identity(g1.n(), g1.n()), oracle::mult_matrix(g2));
    MatrixXd P = oracle::cloud_permutation(g1, L);
    RegularMultigraph r = replacement(g1, g2, L);
    EXPECT_EQ(r.degree(), g2.degree() + 1);
    EXPECT_LE(maxdiff(oracle::mult_matrix(r), Et + P), 1e-12);
    RegularMultigraph b = balanced_replacement(g1, g2, L);
    EXPECT_EQ(b.degree(), 2 * g2.degree());
    EXPECT_LE(maxdiff(oracle::walk_matrix(b), 0.5 * (Et / d2 + P)), 1e-12);
  }
}

// (1/d1) X^T (I x A2) X with X the exit map.
TEST(Products, DerandomizedSquareMatchesDefinition) {
  for (const auto& [g1, g2] : fixtures()) {
    auto L = random_labeling(g1, g2, 5);
    MatrixXd X = oracle::exit_map(g1, L);
    MatrixXd Bt = oracle::kron(MatrixXd::Identity(g1.n(), g1.n()), oracle::walk_matrix(g2));
    MatrixXd want = X.transpose() * Bt * X / static_cast<double>(g1.degree());
    RegularMultigraph s = derandomized_square(g1, g2, L);
    EXPECT_EQ(s.degree(), g1.degree() * g2.degree());
    EXPECT_LE(maxdiff(oracle::walk_matrix(s), want), 1e-12);
  }
}

TEST(Products, DerandomizedSquareWithCompleteCloudIsTheSquare) {
  RegularMultigraph g1 = random_regular(8, 3, 6);
  RegularMultigraph s = derandomized_square(g1, complete_with_loops(3), default_labeling(g1, complete_with_loops(3)));
  EXPECT_LE(maxdiff(oracle::walk_matrix(s), oracle::walk_matrix(graph_power(g1, 2))), 1e-12);
}

TEST(Products, TensorIsKronecker) {
  RegularMultigraph a = random_regular(5, 3, 1), b = cycle(4);
  EXPECT_LE(maxdiff(oracle::mult_matrix(tensor_graph(a, b)), oracle::kron(oracle::mult_matrix(a), oracle::mult_matrix(b))),
            0);
  EXPECT_LE(maxdiff(tensor(normalized_adjacency(a), normalized_adjacency(b)).matrix(),
                    oracle::kron(oracle::walk_matrix(a), oracle::walk_matrix(b))),
            1e-15);
}

TEST(Products, ZigzagSpectralBound) {
  // lambda(Z) <= lambda1 + lambda2 + lambda2^2
  for (std::uint64_t s = 0; s < 10; ++s) {
    RegularMultigraph g1 = random_expander(20, 4, s), g2 = random_expander(4, 3, s + 50);
    double l1 = lambda_abs(normalized_adjacency(g1)), l2 = lambda_abs(normalized_adjacency(g2));
    double lz = lambda_abs(normalized_adjacency(zigzag(g1, g2, random_labeling(g1, g2, s))));
    EXPECT_LE(lz, l1 + l2 + l2 * l2 + 1e-12);
  }
}

TEST(Products, LabelingValidation) {
  RegularMultigraph g1 = cycle(5), g2 = cycle_with_loops(2);
  auto L = default_labeling(g1, g2);
  L.pi[0][0] = L.pi[0][1];
  EXPECT_THROW(zigzag(g1, g2, L), InvalidInput);
  EXPECT_THROW(default_labeling(g1, cycle(3)), DegreeMismatch);
}

TEST(Products, RandomLabelingIsSeeded) {
  RegularMultigraph g1 = random_regular(10, 4, 1), g2 = cycle(4);
  EXPECT_EQ(zigzag(g1, g2, random_labeling(g1, g2, 9)), zigzag(g1, g2, random_labeling(g1, g2, 9)));
}
