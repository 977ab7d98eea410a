#include <gtest/gtest.h>

#include <bit>
#include <set>
#include <sstream>

#include "expanders/codes.hpp"

using namespace expanders;

namespace {

// Every codeword by explicit span enumeration.
std::vector<word_t> span(const LinearCode& c) {
  std::vector<word_t> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << c.dim()); ++m) {
    word_t w = 0;
    for (std::size_t r = 0; r < c.dim(); ++r)
      if (m >> r & 1) w ^= c.rows[r];
    out.push_back(w);
  }
  return out;
}

std::size_t min_weight_naive(const LinearCode& c) {
  std::size_t best = c.n + 1;
  for (word_t w : span(c))
    if (w) best = std::min<std::size_t>(best, static_cast<std::size_t>(std::popcount(w)));
  return best;
}

}  // namespace

TEST(Codes, Presets) {
  EXPECT_EQ(repetition_code(7).min_distance, 7u);
  EXPECT_EQ(parity_code(6).min_distance, 2u);
  EXPECT_EQ(parity_code(6).dim(), 5u);
  LinearCode h = hamming8_code();
  EXPECT_EQ(h.dim(), 4u);
  EXPECT_EQ(h.min_distance, 4u);
}

TEST(Codes, MinimumDistanceAgreesWithSpanEnumeration) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    LinearCode c = random_code(12, 5, 0, s);
    EXPECT_EQ(min_weight_bruteforce(c), min_weight_naive(c));
    EXPECT_EQ(min_weight_gray(c), min_weight_naive(c));
  }
}

TEST(Codes, RandomCodeRespectsDistance) {
  LinearCode c = random_code(16, 4, 5, 3);
  EXPECT_GE(*c.min_distance, 5u);
  EXPECT_EQ(min_weight_naive(c), *c.min_distance);
  EXPECT_THROW(random_code(8, 7, 4, 1, 200), NotFound);
}

TEST(Codes, DualIsOrthogonalComplement) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    LinearCode c = random_code(10, 4, 0, s);
    LinearCode d = dual(c);
    EXPECT_EQ(d.dim(), 6u);
    for (word_t a : c.rows)
      for (word_t b : d.rows) EXPECT_EQ(std::popcount(a & b) % 2, 0);
    EXPECT_TRUE(same_row_space(dual(d).rows, c.rows));
  }
  EXPECT_TRUE(same_row_space(dual(repetition_code(5)).rows, parity_code(5).rows));
}

TEST(Codes, CosetRepresentatives) {
  // cosets of the dual: one representative per syndrome, 2^dim of them
  LinearCode c = random_code(9, 3, 0, 4);
  LinearCode d = dual(c);
  auto reps = coset_reps(c);
  ASSERT_EQ(reps.size(), 8u);
  std::set<word_t> seen;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    EXPECT_EQ(coset_index(c, reps[i]), i);
    // smallest integer in its coset
    for (word_t u : span(d)) EXPECT_LE(reps[i], reps[i] ^ u);
    seen.insert(reps[i]);
  }
  EXPECT_EQ(seen.size(), 8u);
  // x and x + u share a coset for u in the dual
  for (word_t u : span(d)) EXPECT_EQ(coset_index(c, 0x5a ^ u), coset_index(c, 0x5a));
}

TEST(Codes, FileRoundTrip) {
  LinearCode c = hamming8_code();
  std::ostringstream os;
  write_code(c, os);
  EXPECT_EQ(os.str(), "8 4 4\n11110000\n00111100\n00001111\n01010101\n");
  std::istringstream is(os.str());
  LinearCode r = read_code(is);
  EXPECT_EQ(r.rows, c.rows);
  EXPECT_EQ(r.min_distance, 4u);
}

TEST(Codes, ParseErrors) {
  auto parse = [](const std::string& s) {
    std::istringstream is(s);
    return read_code(is);
  };
  try {
    parse("4 2 1\n1100\n11x0\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 3u);
  }
  EXPECT_THROW(parse("4 2 1\n1100\n"), ParseError);
  EXPECT_THROW(parse("4 2 1\n1100\n1100\n"), ParseError);  // dependent rows
  EXPECT_THROW(parse("4 1 3\n1100\n"), InvalidInput);      // declared distance too high
}

TEST(Codes, RowSpaceUtilities) {
  EXPECT_EQ(rank({0b011, 0b110, 0b101}), 2u);
  EXPECT_TRUE(same_row_space({0b011, 0b110}, {0b101, 0b011}));
  EXPECT_THROW(make_code(4, {0b11, 0b11}), InvalidInput);
}
