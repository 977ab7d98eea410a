#include <gtest/gtest.h>

#include "expanders/random.hpp"
#include "expanders/spectral.hpp"
#include "oracles.hpp"

using namespace expanders;

TEST(Spectral, CycleLambda) {
  auto r = spectral_report(cycle(5));
  EXPECT_NEAR(r.lambda2, std::cos(2 * M_PI / 5), 1e-12);
  EXPECT_NEAR(r.lambda_abs, std::cos(M_PI / 5), 1e-12);
  EXPECT_NEAR(r.gamma_plus_euclid, 1 / (1 - std::cos(M_PI / 5)), 1e-9);
}

TEST(Spectral, CompleteWithLoopsHasGammaOne) {
  auto r = spectral_report(complete_with_loops(6));
  EXPECT_NEAR(r.lambda_abs, 0, 1e-12);
  EXPECT_NEAR(r.gamma_plus_euclid, 1, 1e-12);
}

TEST(Spectral, BipartiteAndDisconnectedGiveInfinity) {
  EXPECT_TRUE(std::isinf(gamma_plus_euclid(cycle(6))));
  EXPECT_TRUE(std::isfinite(gamma_euclid(cycle(6))));
  EXPECT_TRUE(std::isinf(gamma_euclid(identity_graph(3))));
}

TEST(Spectral, HypercubeEigenvalues) {
  // Q_4 as a Cayley graph: eigenvalues 1 - 2k/4
  std::vector<Edge> es;
  for (vid_t x = 0; x < 16; ++x)
    for (int b = 0; b < 4; ++b)
      if (x < (x ^ (1u << b))) es.push_back({x, static_cast<vid_t>(x ^ (1u << b)), 1});
  auto r = spectral_report(build_graph(16, es));
  EXPECT_NEAR(r.lambda2, 0.5, 1e-12);
  EXPECT_NEAR(r.lambda_min, -1, 1e-12);
}

TEST(Spectral, DenseEigenvaluesMatchReference) {
  RegularMultigraph g = random_regular(30, 5, 7);
  auto got = eigenvalues_dense(normalized_adjacency(g));
  auto want = oracle::sorted_eigs(oracle::walk_matrix(g));
  std::sort(got.begin(), got.end());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
}

TEST(Spectral, LanczosAgreesWithDense) {
  for (std::uint64_t s : {1, 2, 3}) {
    RegularMultigraph g = random_expander(600, 3, s);
    SpectralOptions it;
    it.force_iterative = true;
    it.seed = s;
    auto a = spectral_report(g), b = spectral_report(g, it);
    EXPECT_EQ(b.method, "iterative");
    EXPECT_LE(b.residual, 1e-8);
    EXPECT_NEAR(a.lambda2, b.lambda2, 1e-7);
    EXPECT_NEAR(a.lambda_min, b.lambda_min, 1e-7);
  }
}

TEST(Spectral, ImplicitOperatorAboveThreshold) {
  RegularMultigraph g = random_expander(5000, 4, 3);
  auto r = spectral_report(g);
  EXPECT_EQ(r.method, "iterative");
  // Alon-Boppana: lambda2 >= 2 sqrt(d-1)/d - o(1); Friedman: close to it
  EXPECT_GT(r.lambda2, 0.8);
  EXPECT_LT(r.lambda_abs, 0.95);
}

TEST(Spectral, NormPoincareConversions) {
  EXPECT_NEAR(bound_norm_to_poincare(0.5, 2), 81, 1e-12);
  EXPECT_THROW(bound_norm_to_poincare(1, 2), InvalidInput);
  EXPECT_THROW(bound_norm_to_poincare(0.5, 0.5), InvalidInput);
  EXPECT_DOUBLE_EQ(bound_poincare_to_norm(kInf, 2, 1), 1);
  // In Hilbert space gamma_+ = 1/(1-lambda) sits below both conversions
  for (std::uint64_t s = 0; s < 5; ++s) {
    RegularMultigraph g = random_expander(40, 3, s);
    auto r = spectral_report(g);
    EXPECT_LE(r.gamma_plus_euclid, bound_norm_to_poincare(r.lambda_abs, 2));
    EXPECT_GE(bound_poincare_to_norm(r.gamma_plus_euclid, 2, 1), r.lambda_abs - 1e-12);
  }
}
