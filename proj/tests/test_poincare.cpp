#include <gtest/gtest.h>

#include "expanders/poincare.hpp"
#include "expanders/random.hpp"
#include "expanders/verify.hpp"
#include "oracles.hpp"

using namespace expanders;

namespace {

Eigen::MatrixXd kernel_table(const FiniteMetric& k) { return k.D.array().pow(k.p).matrix(); }

}  // namespace

TEST(Poincare, TriangleTwoPointByHand) {
  // K3, f = 1_{0}, g = 1 - f: 5/9 of all pairs differ against 1/3 along edges
  auto r = gamma_plus_bruteforce(cycle(3), two_point_metric(1));
  EXPECT_FALSE(r.value.infinite);
  EXPECT_EQ(r.value.value, Rational(5, 3));
}

TEST(Poincare, OracleMatchesNaiveEnumeration) {
  std::vector<RegularMultigraph> gs = {cycle(3), cycle(4), cycle_with_loops(3), complete_with_loops(3),
                                       random_regular(4, 3, 2), random_regular(5, 2, 1),
                                       build_graph(2, {{0, 1, 1}, {0, 0, 2}, {1, 1, 2}})};
  for (const auto& g : gs)
    for (double p : {1.0, 2.0})
      for (const auto& K : {two_point_metric(p), three_point_metric(p)}) {
        const double want = oracle::gamma_plus_naive(g, kernel_table(K));
        for (auto m : {OracleMethod::Full, OracleMethod::Separable}) {
          if (m == OracleMethod::Full && g.n() > 4) continue;
          auto got = gamma_plus_bruteforce(g, K, kDefaultCap, m).value.approx();
          if (std::isinf(want)) EXPECT_TRUE(std::isinf(got));
          else EXPECT_NEAR(got, want, 1e-12 * want);
        }
        const double want_plain = oracle::gamma_plus_naive(g, kernel_table(K), false);
        const double got_plain = gamma_bruteforce(g, K).value.approx();
        if (std::isinf(want_plain)) EXPECT_TRUE(std::isinf(got_plain));
        else EXPECT_NEAR(got_plain, want_plain, 1e-12 * want_plain);
      }
}

TEST(Poincare, WitnessAttainsTheValue) {
  RegularMultigraph g = random_regular(5, 3, 4);
  auto K = three_point_metric(2);
  auto r = gamma_plus_bruteforce(g, K);
  Configuration pts = witness_configuration(r);
  EXPECT_NEAR(ratio(normalized_adjacency(g), K, pts), r.value.approx(), 1e-12);
}

TEST(Poincare, BipartiteGraphIsInfinite) {
  auto r = gamma_plus_bruteforce(cycle(4), two_point_metric(1));
  EXPECT_TRUE(r.value.infinite);
  EXPECT_FALSE(gamma_bruteforce(cycle(4), two_point_metric(1)).value.infinite);
}

TEST(Poincare, CapIsEnforced) {
  EXPECT_THROW(gamma_plus_bruteforce(random_regular(12, 3, 1), three_point_metric(1), 1000, OracleMethod::Full),
               CapExceeded);
}

TEST(Poincare, FiniteMetricValidation) {
  Eigen::MatrixXd D(3, 3);
  D << 0, 1, 5, 1, 0, 1, 5, 1, 0;
  EXPECT_THROW(make_finite_metric(D, 1), InvalidInput);
  EXPECT_DOUBLE_EQ(quasimetric_kappa(KernelSpec{two_point_metric(2)}), 1);
  EXPECT_DOUBLE_EQ(quasimetric_kappa(EuclidSq{}), 1);
}

TEST(Poincare, RatioConventions) {
  EXPECT_DOUBLE_EQ(ratio_from_sums(0, 0, 3), 1);
  EXPECT_TRUE(std::isinf(ratio_from_sums(1, 0, 3)));
}

TEST(Poincare, EuclidEigenvectorAttainsGammaPlus) {
  RegularMultigraph g = random_expander(30, 3, 2);
  auto A = normalized_adjacency(g);
  auto ep = eigenpairs_dense(A);
  const Eigen::Index i = std::abs(ep.values[0]) > std::abs(ep.values[28]) ? 0 : 28;
  Configuration c;
  for (Eigen::Index v = 0; v < 30; ++v) {
    c.f.push_back({ep.vectors(v, i)});
    c.g.push_back({ep.values[i] < 0 ? -ep.vectors(v, i) : ep.vectors(v, i)});
  }
  EXPECT_NEAR(ratio(A, EuclidSq{}, c), gamma_plus_euclid(g), 1e-9 * gamma_plus_euclid(g));
}

TEST(Poincare, SearchNeverExceedsExactValue) {
  RegularMultigraph g = random_regular(5, 3, 3);
  auto K = two_point_metric(1);
  auto exact = gamma_plus_bruteforce(g, K).value.approx();
  auto s = gamma_plus_search(normalized_adjacency(g), K, 5000, 1);
  EXPECT_LE(s.lower_bound, exact * (1 + 1e-12));
  EXPECT_NEAR(s.lower_bound, exact, 1e-9 * exact);  // small space: search finds it
}

TEST(Poincare, CotypeWitnessAtMEqualsOne) {
  // A_1 = I: y = x, so the displacement vanishes and the right side is 0
  std::mt19937_64 rng(1);
  StochasticMatrix A = random_stochastic(6, rng);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(6, 3);
  EXPECT_LE((cotype_witness(A, x, 1) - x).cwiseAbs().maxCoeff(), 0);
  auto r = check_cotype(A, x, CotypeParams{2, 2, 1, 1}, 2);
  EXPECT_DOUBLE_EQ(r.displacement, 0);
  EXPECT_DOUBLE_EQ(r.rhs, 0);
  EXPECT_GT(r.edge_term, 0);
}

TEST(Poincare, CotypeHoldsForLargerM) {
  std::mt19937_64 rng(5);
  for (unsigned m = 2; m <= 8; ++m) {
    StochasticMatrix A = random_stochastic(20, rng);
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(20, 5);
    auto r = check_cotype(A, x, CotypeParams{2, 2, 1, m}, 2);
    EXPECT_TRUE(r.holds) << "m=" << m;
    EXPECT_TRUE(r.combined_holds) << "m=" << m;
  }
  EXPECT_THROW(validate(CotypeParams{2, 2, 0.5, 2}), InvalidInput);
}

TEST(Poincare, CalculusSpectralMapping) {
  RegularMultigraph g = random_expander(20, 3, 1);
  auto r = check_calculus_decay(normalized_adjacency(g), 4, CalculusParams{});
  auto direct = gamma_plus_euclid(cesaro_graph(g, 4));
  EXPECT_NEAR(r.gamma_plus_Am, direct, 1e-9 * direct);
  EXPECT_TRUE(r.holds);
}

TEST(Poincare, CalculusIdentityAtMEqualsOne) {
  // gamma_+(A_1) = gamma_+(I) = inf for n >= 2
  RegularMultigraph g = random_expander(10, 3, 1);
  auto r = check_calculus_decay(normalized_adjacency(g), 1, CalculusParams{});
  EXPECT_TRUE(std::isinf(r.gamma_plus_Am));
  EXPECT_FALSE(r.holds);
}

TEST(Poincare, CalculusFiniteTarget) {
  auto r = check_calculus_decay(cycle(3), 2, CalculusParams{}, two_point_metric(1));
  EXPECT_TRUE(r.holds);
}

TEST(Poincare, ShortestPathMetric) {
  auto D = shortest_path_metric(cycle(6));
  EXPECT_DOUBLE_EQ(D(0, 3), 3);
  EXPECT_DOUBLE_EQ(D(1, 5), 2);
  auto I = shortest_path_metric(identity_graph(3));
  EXPECT_DOUBLE_EQ(I(0, 1), 1);  // unreachable: diameter + 1
}

TEST(Poincare, NondecayLowerBoundsAreFinite) {
  auto r = nondecay_experiment(random_expander(64, 3, 1), 2);
  EXPECT_GT(r.lower_bound_G, 1);
  EXPECT_GT(r.lower_bound_At, 1);
  EXPECT_THROW(nondecay_experiment(identity_graph(3), 2), InvalidInput);
}
