#include <gtest/gtest.h>

#include "expanders/pipeline.hpp"
#include "expanders/random.hpp"

using namespace expanders;

TEST(Pipeline, RejectsBadParameters) {
  PipelineConfig c;
  c.G0 = cycle(7);  // t d^{2(t-1)} = 8 > 7
  c.t = 2;
  EXPECT_THROW(validate(c), InvalidInput);
  c.G0 = cycle(9);
  EXPECT_NO_THROW(validate(c));
  c.j_max = 0;
  EXPECT_THROW(validate(c), InvalidInput);
}

TEST(Pipeline, InitialIterationShapes) {
  PipelineConfig c;
  c.G0 = cycle(9);
  c.t = 2;
  c.j_max = 3;
  c.spectra = false;
  auto r = initial_iteration(c);
  ASSERT_EQ(r.graphs.size(), 3u);
  const std::size_t sizes[] = {9, 81, 729};
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_EQ(r.graphs[j].n(), sizes[j]);
    EXPECT_EQ(r.graphs[j].degree(), 4u);
  }
  EXPECT_EQ(r.trace.steps.size(), 3u);
  EXPECT_FALSE(r.trace.steps[2].chain_ok.has_value());
}

TEST(Pipeline, InitialIterationChainHolds) {
  PipelineConfig c;
  c.G0 = random_expander(18, 3, 2);
  c.t = 2;
  c.j_max = 2;
  auto r = initial_iteration(c);
  ASSERT_TRUE(r.trace.steps[1].chain_ok.has_value());
  EXPECT_TRUE(*r.trace.steps[1].chain_ok);
  EXPECT_LE(r.trace.steps[1].graph.gamma_plus, r.trace.steps[1].chain_bound);
}

TEST(Pipeline, DefaultCesaroParameters) {
  EXPECT_EQ(M_default(1), 2);
  EXPECT_EQ(M_default(2), 256);
  EXPECT_EQ(M_default(3), BigInt(54) * 54 * 54);
}

TEST(Pipeline, ScheduleBookkeeping) {
  std::vector<Family> fam(3);
  fam[0] = {4, {9, 81, 729}};
  fam[1] = {9, {18, 324, 5832}};
  fam[2].degree = 2;
  const std::map<unsigned, BigInt> ov = {{1, 2}, {2, 2}, {3, 2}};
  Schedule s = main_iteration_bookkeeping(fam, 2, ov);
  EXPECT_TRUE(s.overridden);
  // thresholds 2*16 + 2*9^2 = 194 and 2*16 + 2*2^2 = 40
  EXPECT_EQ(s.j.at(1), 3u);
  EXPECT_EQ(s.j.at(2), 2u);
  EXPECT_EQ(s.start_vertices, 324);
  ASSERT_EQ(s.steps.size(), 1u);
  EXPECT_EQ(s.steps[0].h, 1u);
  EXPECT_EQ(s.steps[0].completion, 729);
  EXPECT_EQ(s.steps[0].degree_after, 32);
  EXPECT_EQ(s.final_vertices, BigInt(324) * 729);
  const std::vector<unsigned> h = {2, 1};
  EXPECT_EQ(s.h, h);
}

TEST(Pipeline, ScheduleInfeasibility) {
  std::vector<Family> fam(2);
  fam[0] = {4, {9, 81}};
  fam[1].degree = 9;
  EXPECT_THROW(main_iteration_bookkeeping(fam, 1, {{2, 2}}), InvalidInput);
  fam[0].sizes = {81, 9};
  EXPECT_THROW(main_iteration_bookkeeping(fam, 1, {{2, 2}}), InvalidInput);
  EXPECT_THROW(main_iteration_bookkeeping(fam, 2), InvalidInput);
}

TEST(Pipeline, ThreeRegularizeShape) {
  RegularMultigraph H = random_expander(20, 4, 3);
  auto r = three_regularize(H);
  EXPECT_EQ(r.graph.n(), 20u * 4 * 9);
  EXPECT_EQ(r.graph.degree(), 3u);
  EXPECT_FALSE(r.completed_to_three);
  auto chain = three_regularize_chain(H, r);
  ASSERT_TRUE(chain.ok.has_value());
  EXPECT_TRUE(*chain.ok);
}

TEST(Pipeline, ThreeRegularizeLowDegree) {
  auto r = three_regularize(cycle(5));
  EXPECT_TRUE(r.completed_to_three);
  EXPECT_EQ(r.graph.n(), 5u * 3 * 9);
  EXPECT_EQ(r.graph.degree(), 3u);
}
