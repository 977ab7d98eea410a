#pragma once

#include <bit>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "util.hpp"

namespace expanders {

// Binary words of length n <= 64; bit j holds coordinate j.
using word_t = std::uint64_t;

inline constexpr std::size_t kMaxCodeDim = 24;

struct LinearCode {
  std::size_t n = 0;
  std::vector<word_t> rows;      // generator rows, linearly independent
  std::optional<std::size_t> min_distance;  // verified by enumeration
  std::uint64_t tries = 0;       // rejection-sampling attempts (random_code)

  std::size_t dim() const { return rows.size(); }
  // The asymptotic family requires dimension and distance both >= n/10.
  bool meets_tenth_thresholds() const {
    return 10 * dim() >= n && min_distance && 10 * *min_distance >= n;
  }
};

inline word_t word_mask(std::size_t n) { return n >= 64 ? ~word_t{0} : (word_t{1} << n) - 1; }

// Reduced row echelon form; pivots are the highest set bits, each pivot
// column cleared in every other row. Rows sorted by descending pivot.
inline std::vector<word_t> rref(std::vector<word_t> rows) {
  std::vector<word_t> basis;
  for (word_t r : rows) {
    for (word_t b : basis)
      if (r & (word_t{1} << (63 - std::countl_zero(b)))) r ^= b;
    if (!r) continue;
    const word_t piv = word_t{1} << (63 - std::countl_zero(r));
    for (auto& b : basis)
      if (b & piv) b ^= r;
    basis.push_back(r);
  }
  std::sort(basis.begin(), basis.end(), std::greater<>());
  return basis;
}

inline std::size_t rank(const std::vector<word_t>& rows) { return rref(rows).size(); }

inline bool same_row_space(const std::vector<word_t>& a, const std::vector<word_t>& b) { return rref(a) == rref(b); }

inline LinearCode make_code(std::size_t n, std::vector<word_t> rows) {
  if (n == 0 || n > 64) throw InvalidInput("code length must be in [1,64]");
  for (word_t r : rows)
    if (r & ~word_mask(n)) throw InvalidInput("generator row longer than n");
  if (rank(rows) != rows.size()) throw InvalidInput("generator rows are linearly dependent");
  LinearCode c;
  c.n = n;
  c.rows = std::move(rows);
  return c;
}

// Minimum nonzero weight over all 2^D - 1 codewords, enumerated directly.
inline std::size_t min_weight_bruteforce(const LinearCode& c) {
  const std::size_t D = c.dim();
  if (D == 0) return c.n + 1;  // zero code: no nonzero codeword
  if (D > kMaxCodeDim) throw CapExceeded("code dimension above 24");
  const std::uint64_t total = std::uint64_t{1} << D;
  const unsigned T = std::max(1u, thread_count());
  std::vector<std::size_t> best(T, c.n + 1);
  const std::size_t blocks = T;
  parallel_blocks(
      blocks,
      [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
          std::size_t local = c.n + 1;
          for (std::uint64_t idx = std::max<std::uint64_t>(1, total * k / blocks); idx < total * (k + 1) / blocks; ++idx) {
            word_t w = 0;
            for (std::size_t r = 0; r < D; ++r)
              if (idx >> r & 1) w ^= c.rows[r];
            local = std::min<std::size_t>(local, static_cast<std::size_t>(std::popcount(w)));
          }
          best[k] = local;
        }
      },
      1);
  return *std::min_element(best.begin(), best.end());
}

// Same minimum by Gray-code order: consecutive codewords differ by one row.
inline std::size_t min_weight_gray(const LinearCode& c) {
  const std::size_t D = c.dim();
  if (D == 0) return c.n + 1;
  if (D > kMaxCodeDim) throw CapExceeded("code dimension above 24");
  word_t w = 0;
  std::size_t best = c.n + 1;
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << D); ++i) {
    w ^= c.rows[static_cast<std::size_t>(std::countr_zero(i))];
    best = std::min<std::size_t>(best, static_cast<std::size_t>(std::popcount(w)));
  }
  return best;
}

inline LinearCode verified(LinearCode c) {
  c.min_distance = min_weight_bruteforce(c);
  return c;
}

inline LinearCode repetition_code(std::size_t n) { return verified(make_code(n, {word_mask(n)})); }

// Single parity check: all even-weight words, rows e_i + e_{n-1}.
inline LinearCode parity_code(std::size_t n) {
  if (n < 2) throw InvalidInput("parity code needs n >= 2");
  std::vector<word_t> rows;
  for (std::size_t i = 0; i + 1 < n; ++i) rows.push_back((word_t{1} << i) | (word_t{1} << (n - 1)));
  return verified(make_code(n, rows));
}

// Extended Hamming [8,4,4].
inline LinearCode hamming8_code() {
  const char* g[] = {"11110000", "00111100", "00001111", "01010101"};
  std::vector<word_t> rows;
  for (const char* s : g) {
    word_t w = 0;
    for (std::size_t j = 0; j < 8; ++j)
      if (s[j] == '1') w |= word_t{1} << j;
    rows.push_back(w);
  }
  return verified(make_code(8, rows));
}

inline LinearCode random_code(std::size_t n, std::size_t D, std::size_t min_dist, std::uint64_t seed,
                              std::uint64_t max_tries = 100000) {
  if (n == 0 || n > 64) throw InvalidInput("code length must be in [1,64]");
  if (D > n || D > kMaxCodeDim) throw InvalidInput("random_code needs D <= n and D <= 24");
  std::mt19937_64 rng(seed);
  for (std::uint64_t t = 1; t <= max_tries; ++t) {
    std::vector<word_t> rows(D);
    for (auto& r : rows) r = rng() & word_mask(n);
    if (rank(rows) != D) continue;
    LinearCode c = make_code(n, rows);
    const std::size_t w = min_weight_bruteforce(c);
    if (w >= min_dist) {
      c.min_distance = w;
      c.tries = t;
      return c;
    }
  }
  throw NotFound("no [" + std::to_string(n) + "," + std::to_string(D) + "] code with distance >= " +
                 std::to_string(min_dist) + " in " + std::to_string(max_tries) + " tries");
}

// Null space of the generator: all x with <row, x> = 0 for every row.
inline LinearCode dual(const LinearCode& c) {
  auto R = rref(c.rows);
  word_t pivots = 0;
  for (word_t r : R) pivots |= word_t{1} << (63 - std::countl_zero(r));
  std::vector<word_t> basis;
  for (std::size_t j = 0; j < c.n; ++j) {
    const word_t bit = word_t{1} << j;
    if (pivots & bit) continue;
    // free coordinate j set; each pivot coordinate solves its row equation
    word_t x = bit;
    for (word_t r : R)
      if (r & bit) x |= word_t{1} << (63 - std::countl_zero(r));
    basis.push_back(x);
  }
  return make_code(c.n, basis);
}

inline std::uint64_t coset_index(const LinearCode& c, word_t x) {
  if (x & ~word_mask(c.n)) throw InvalidInput("word longer than the code length");
  std::uint64_t s = 0;
  for (std::size_t r = 0; r < c.dim(); ++r) s |= static_cast<std::uint64_t>(std::popcount(c.rows[r] & x) & 1) << r;
  return s;
}

// Smallest integer encoding in each coset of the dual, indexed by syndrome.
inline std::vector<word_t> coset_reps(const LinearCode& c) {
  const std::size_t D = c.dim();
  if (D > kMaxCodeDim) throw CapExceeded("code dimension above 24");
  // preimage basis: pairs (syndrome, word) reduced on syndrome pivots
  std::vector<std::pair<std::uint64_t, word_t>> pre;
  for (std::size_t j = 0; j < c.n && pre.size() < D; ++j) {
    std::uint64_t s = coset_index(c, word_t{1} << j);
    word_t x = word_t{1} << j;
    for (const auto& [ps, px] : pre)
      if (s & (std::uint64_t{1} << (63 - std::countl_zero(ps)))) {
        s ^= ps;
        x ^= px;
      }
    if (s) {
      pre.push_back({s, x});
      std::sort(pre.begin(), pre.end(), std::greater<>());  // descending pivots
    }
  }
  auto dual_basis = rref(dual(c).rows);
  std::vector<word_t> reps(std::size_t{1} << D);
  for (std::uint64_t target = 0; target < reps.size(); ++target) {
    std::uint64_t s = target;
    word_t x = 0;
    for (const auto& [ps, px] : pre)
      if (s & (std::uint64_t{1} << (63 - std::countl_zero(ps)))) {
        s ^= ps;
        x ^= px;
      }
    // clearing each pivot bit of the reduced dual basis minimises the integer
    for (word_t b : dual_basis)
      if (x & (word_t{1} << (63 - std::countl_zero(b)))) x ^= b;
    reps[target] = x;
  }
  return reps;
}

// "n D min_dist" header, then D rows of n characters '0'/'1' (coordinate j
// is character j). min_dist is re-verified on read.
inline void write_code(const LinearCode& c, std::ostream& os) {
  os << c.n << ' ' << c.dim() << ' ' << (c.min_distance ? *c.min_distance : 0) << '\n';
  for (word_t r : c.rows) {
    for (std::size_t j = 0; j < c.n; ++j) os << ((r >> j & 1) ? '1' : '0');
    os << '\n';
  }
}

inline LinearCode read_code(std::istream& is) {
  std::string line;
  std::size_t ln = 0;
  auto next = [&]() -> bool {
    while (std::getline(is, line)) {
      ++ln;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };
  if (!next()) throw ParseError(ln + 1, "missing header");
  std::istringstream hs(line);
  long long n, D, md;
  std::string extra;
  if (!(hs >> n >> D >> md) || (hs >> extra)) throw ParseError(ln, "header must be 'n D min_dist'");
  if (n < 1 || n > 64 || D < 0 || D > n || md < 0) throw ParseError(ln, "header values out of range");
  std::vector<word_t> rows;
  for (long long r = 0; r < D; ++r) {
    if (!next()) throw ParseError(ln + 1, "missing generator row");
    if (static_cast<long long>(line.size()) != n) throw ParseError(ln, "row length differs from n");
    word_t w = 0;
    for (std::size_t j = 0; j < line.size(); ++j) {
      if (line[j] == '1') w |= word_t{1} << j;
      else if (line[j] != '0') throw ParseError(ln, "row must contain only 0 and 1");
    }
    rows.push_back(w);
  }
  if (next()) throw ParseError(ln, "trailing content after generator rows");
  LinearCode c;
  try {
    c = make_code(static_cast<std::size_t>(n), rows);
  } catch (const InvalidInput& e) {
    throw ParseError(ln, e.what());
  }
  if (c.dim() <= kMaxCodeDim) {
    c = verified(c);
    if (c.dim() > 0 && *c.min_distance < static_cast<std::size_t>(md))
      throw InvalidInput("declared min_dist " + std::to_string(md) + " exceeds verified " +
                         std::to_string(*c.min_distance));
  }
  return c;
}

}  // namespace expanders
