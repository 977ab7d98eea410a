#include <gtest/gtest.h>

#include <bit>

#include "expanders/base_graph.hpp"

using namespace expanders;

TEST(BaseGraph, WeightsAtQuarter) {
  // tau = 1/4, n = 4: sigma = (1/4)^4, e(k) = 3^{4-k}
  HeatParams hp = HeatParams::from_tau(1, 4, 4);
  auto e = e_t_n_table(hp);
  const std::vector<BigInt> want = {81, 27, 9, 3, 1};
  EXPECT_EQ(e, want);
  EXPECT_EQ(heat_degree(hp), 256);
  auto b = heat_degree_bounds(hp);
  EXPECT_TRUE(b.lower_ok);
  EXPECT_TRUE(b.upper_ok);
}

TEST(BaseGraph, WeightsMatchRationalFloor) {
  // tau = 1/8, n = 8: 4 tau n = 4, sigma = 7^4 / 8^8
  HeatParams hp = HeatParams::from_tau(1, 8, 8);
  for (std::size_t k = 0; k <= 8; ++k) {
    // floor(tau^k (1-tau)^{8-k} / sigma) = floor(7^{8-k} / 7^4)
    BigInt num = boost::multiprecision::pow(BigInt(7), static_cast<unsigned>(8 - k));
    EXPECT_EQ(e_t_n(hp, k), num / 2401) << "k=" << k;
  }
}

TEST(BaseGraph, FloatingTauAgreesWithRational) {
  // t with e^{-t} = 1/2 describes tau = 1/4 without the rational hint; the
  // floor sits on integers here, so rounding may move an entry down by one
  HeatParams hp = HeatParams::from_t(std::log(2.0), 4);
  auto e = e_t_n_table(hp);
  const std::vector<BigInt> want = {81, 27, 9, 3, 1};
  for (std::size_t k = 0; k <= 4; ++k) {
    EXPECT_LE(e[k], want[k]);
    EXPECT_GE(e[k] + 1, want[k]);
  }
}

TEST(BaseGraph, HeatGraphStructure) {
  HeatParams hp = HeatParams::from_tau(1, 4, 4);
  RegularMultigraph g = heat_graph(hp);
  EXPECT_EQ(g.n(), 16u);
  EXPECT_EQ(g.degree(), 256u);
  // multiplicity depends only on the Hamming distance
  auto e = e_t_n_table(hp);
  for (std::size_t x = 0; x < 16; ++x)
    for (std::size_t y = 0; y < 16; ++y)
      EXPECT_EQ(BigInt(g.mult(x, y)), e[static_cast<std::size_t>(std::popcount(x ^ y))]);
}

TEST(BaseGraph, QuotientByFullSpaceIsTheHeatGraph) {
  HeatParams hp = HeatParams::from_tau(1, 4, 4);
  LinearCode full = make_code(4, {1, 2, 4, 8});
  EXPECT_EQ(quotient_heat_graph(hp, full), heat_graph(hp));
}

TEST(BaseGraph, QuotientByRepetitionCode) {
  HeatParams hp = HeatParams::from_tau(1, 4, 4);
  RegularMultigraph h = quotient_heat_graph(hp, repetition_code(4));
  EXPECT_EQ(h.n(), 2u);
  EXPECT_EQ(h.degree(), 256u);
  // loop: even-weight words, 81 + 6*9 + 1
  EXPECT_EQ(h.mult(0, 0), 136u);
  EXPECT_EQ(h.mult(0, 1), 120u);
}

TEST(BaseGraph, QuotientConservesEdges) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    LinearCode c = random_code(12, 4, 0, s);
    HeatParams hp = HeatParams::from_tau(1, 8, 12);
    RegularMultigraph h = quotient_heat_graph(hp, c);
    EXPECT_EQ(BigInt(h.degree()), heat_degree(hp));
    EXPECT_EQ(total_multiplicity(h) * (BigInt(1) << (12 - 4)), (BigInt(1) << 12) * heat_degree(hp));
  }
  EXPECT_THROW(quotient_heat_graph(HeatParams::from_tau(1, 4, 4), repetition_code(5)), InvalidInput);
}

TEST(BaseGraph, ParameterValidation) {
  EXPECT_THROW(HeatParams::from_tau(1, 2, 4), InvalidInput);
  EXPECT_THROW(HeatParams::from_t(-1, 4), InvalidInput);
  EXPECT_THROW(heat_graph(HeatParams::from_tau(1, 8, 21)), TooLarge);
  EXPECT_THROW(tau_estimates_check(0.05, 100), HypothesisViolation);
}

TEST(BaseGraph, SigmaRecomputable) {
  HeatParams hp = HeatParams::from_tau(1, 4, 4);
  EXPECT_NEAR(static_cast<double>(hp.sigma()), 1.0 / 256, 1e-12 / 256);
  HeatParams ht = HeatParams::from_t(hp.t, 4);
  EXPECT_NEAR(static_cast<double>(ht.sigma()), 1.0 / 256, 1e-12 / 256);
}

TEST(BaseGraph, BinomialSumEstimates) {
  auto r = tau_estimates_check(-std::log1p(-2 * 0.05), 8000);
  EXPECT_TRUE(r.useful1_ok);
  EXPECT_TRUE(r.useful2_ok_all_s);
  EXPECT_GE(r.useful1_lower, 1.0 / 3);
  EXPECT_LE(r.useful1_upper, 1.0);
}

TEST(BaseGraph, HeatMatrixRows) {
  for (std::size_t n : {1, 5, 10}) {
    double s = 0;
    for (word_t y = 0; y < (word_t{1} << n); ++y) s += heat_matrix_entry(0.7, 3 & word_mask(n), y, n);
    EXPECT_NEAR(s, 1, 1e-12);
  }
  EXPECT_DOUBLE_EQ(heat_matrix_entry(0, 5, 5, 3), 1);
}

TEST(BaseGraph, HeatL1RatioMonotoneInN) {
  double prev = 0;
  for (std::size_t n = 10; n <= 60; n += 10) {
    const double r = heat_l1_ratio(n, 1.0) / (2 * (1 - std::pow(2.0, -static_cast<double>(n))));
    EXPECT_GT(r, prev);
    EXPECT_LT(r, 1);
    prev = r;
  }
}
