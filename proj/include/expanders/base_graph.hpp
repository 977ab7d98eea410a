#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <bit>
#include <cmath>

#include "codes.hpp"
#include "graph.hpp"

namespace expanders {

using BigInt = boost::multiprecision::cpp_int;
using BF256 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>>;
using BF512 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<512, boost::multiprecision::digit_base_2>>;

// tau = (1 - e^{-t})/2, sigma = tau^{4 tau n} (1 - tau)^{(1 - 4 tau) n}.
// When tau is given as a rational p/q the e(k) values are exact integers.
struct HeatParams {
  double t = 0;
  std::size_t n = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> tau_rational;

  static HeatParams from_t(double t, std::size_t n) {
    if (!(t > 0) || !std::isfinite(t)) throw InvalidInput("t must be positive");
    if (n < 1) throw InvalidInput("n must be positive");
    return {t, n, std::nullopt};
  }
  static HeatParams from_tau(std::uint64_t p, std::uint64_t q, std::size_t n) {
    if (p == 0 || q == 0 || 2 * p >= q) throw InvalidInput("tau must lie in (0, 1/2)");
    if (n < 1) throw InvalidInput("n must be positive");
    const double tau = static_cast<double>(p) / static_cast<double>(q);
    return {-std::log1p(-2 * tau), n, std::make_pair(p, q)};
  }

  template <class F>
  F tau_as() const {
    if (tau_rational) return F(tau_rational->first) / F(tau_rational->second);
    return (F(1) - exp(-F(t))) / 2;
  }
  double tau() const { return static_cast<double>(tau_as<BF256>()); }
  // log sigma; sigma itself underflows doubles at large n
  template <class F>
  F log_sigma_as() const {
    const F tau = tau_as<F>(), N = F(n);
    return 4 * tau * N * log(tau) + (1 - 4 * tau) * N * log1p(-tau);
  }
  BF256 sigma() const { return exp(log_sigma_as<BF256>()); }
  double log_sigma() const { return static_cast<double>(log_sigma_as<BF256>()); }
  // 4 tau n as an exact integer, when tau is rational and it divides out
  std::optional<BigInt> four_tau_n() const {
    if (!tau_rational) return std::nullopt;
    BigInt num = BigInt(4) * tau_rational->first * n;
    if (num % tau_rational->second != 0) return std::nullopt;
    return BigInt(num / tau_rational->second);
  }
};

namespace detail {
template <class F>
BigInt floor_ratio(const HeatParams& hp, std::size_t k) {
  const F tau = hp.tau_as<F>();
  const F e = 4 * tau * F(hp.n) - F(k);
  const F lr = e * log((1 - tau) / tau);  // log r_k
  if (lr < 0) return 0;
  if (lr / log(F(2)) > 200) throw PrecisionFailure("e_t_n value above 2^200 cannot be floored reliably");
  return BigInt(floor(exp(lr)));
}
}  // namespace detail

// floor(tau^k (1-tau)^{n-k} / sigma) = floor(((1-tau)/tau)^{4 tau n - k}).
inline BigInt e_t_n(const HeatParams& hp, std::size_t k) {
  if (k > hp.n) throw InvalidInput("e_t_n needs 0 <= k <= n");
  if (auto N4 = hp.four_tau_n()) {
    if (BigInt(k) > *N4) return 0;  // ratio < 1 since tau < 1/2
    const auto [p, q] = *hp.tau_rational;
    const unsigned e = static_cast<unsigned>(*N4 - k);
    return boost::multiprecision::pow(BigInt(q - p), e) / boost::multiprecision::pow(BigInt(p), e);
  }
  BigInt lo = detail::floor_ratio<BF256>(hp, k), hi = detail::floor_ratio<BF512>(hp, k);
  if (lo != hi) throw PrecisionFailure("floor of e_t_n differs between 256 and 512 bit evaluations");
  return lo;
}

inline std::vector<BigInt> e_t_n_table(const HeatParams& hp) {
  std::vector<BigInt> e(hp.n + 1);
  for (std::size_t k = 0; k <= hp.n; ++k) e[k] = e_t_n(hp, k);
  return e;
}

inline BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// d = sum_k C(n,k) e(k)
inline BigInt heat_degree(const HeatParams& hp) {
  BigInt d = 0;
  for (std::size_t k = 0; k <= hp.n; ++k) d += binomial(hp.n, k) * e_t_n(hp, k);
  return d;
}

struct DegreeBoundsCheck {
  BigInt degree;
  bool lower_ok = false;  // degree >= 1/(3 sigma)
  bool upper_ok = false;  // degree <= 1/sigma
};

inline DegreeBoundsCheck heat_degree_bounds(const HeatParams& hp) {
  DegreeBoundsCheck r;
  r.degree = heat_degree(hp);
  // compare sigma * d against [1/3, 1] in high precision
  const BF512 sd = exp(hp.log_sigma_as<BF512>()) * BF512(r.degree);
  r.lower_ok = sd >= BF512(1) / 3;
  r.upper_ok = sd <= 1;
  if (auto N4 = hp.four_tau_n()) {
    // exact: sigma = p^{N4} (q-p)^{n-N4} / q^n
    const auto [p, q] = *hp.tau_rational;
    const unsigned a = static_cast<unsigned>(*N4), b = static_cast<unsigned>(hp.n - a);
    const BigInt num = boost::multiprecision::pow(BigInt(p), a) * boost::multiprecision::pow(BigInt(q - p), b);
    const BigInt den = boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(hp.n));
    r.lower_ok = 3 * num * r.degree >= den;
    r.upper_ok = num * r.degree <= den;
  }
  return r;
}

namespace detail {
inline std::vector<mult_t> e_table_u64(const HeatParams& hp) {
  std::vector<mult_t> e(hp.n + 1);
  for (std::size_t k = 0; k <= hp.n; ++k) {
    BigInt v = e_t_n(hp, k);
    if (v > std::numeric_limits<mult_t>::max()) throw Overflow("e_t_n exceeds 64-bit multiplicity");
    e[k] = static_cast<mult_t>(v);
  }
  return e;
}
}  // namespace detail

inline constexpr std::size_t kMaxHeatN = 20;

// G on F_2^n: x and y joined e(|x - y|) times.
inline RegularMultigraph heat_graph(const HeatParams& hp) {
  if (hp.n > kMaxHeatN) throw TooLarge("heat_graph needs n <= 20");
  auto e = detail::e_table_u64(hp);
  const std::size_t N = std::size_t{1} << hp.n;
  std::vector<word_t> masks;
  for (word_t w = 0; w < N; ++w)
    if (e[static_cast<std::size_t>(std::popcount(w))] > 0) masks.push_back(w);
  if (static_cast<double>(masks.size()) * static_cast<double>(N) > 4e8) throw TooLarge("heat_graph support too large");
  return build_rows(N, [&](std::size_t x, RowAccumulator& acc) {
    for (word_t w : masks) acc.add(static_cast<std::size_t>(x ^ w), e[static_cast<std::size_t>(std::popcount(w))]);
  });
}

// Quotient by the dual of C: cosets indexed by syndrome, and cosets c1, c2
// joined W[c1 ^ c2] times where W[s] sums e(|z|) over words z of syndrome s.
inline RegularMultigraph quotient_heat_graph(const HeatParams& hp, const LinearCode& c) {
  if (c.n != hp.n) throw InvalidInput("code length differs from n");
  if (hp.n > kMaxHeatN) throw TooLarge("quotient_heat_graph needs n <= 20");
  auto e = detail::e_table_u64(hp);
  const std::size_t M = std::size_t{1} << c.dim();
  std::vector<mult_t> W(M, 0);
  for (word_t z = 0; z < (word_t{1} << hp.n); ++z) {
    const mult_t v = e[static_cast<std::size_t>(std::popcount(z))];
    if (v) W[coset_index(c, z)] = checked_add(W[coset_index(c, z)], v);
  }
  return build_rows(M, [&](std::size_t a, RowAccumulator& acc) {
    for (std::size_t s = 0; s < M; ++s)
      if (W[s]) acc.add(a ^ s, W[s]);
  });
}

// Sum of all multiplicities, each unordered non-loop pair counted twice.
inline BigInt total_multiplicity(const RegularMultigraph& g) { return BigInt(g.n()) * g.degree(); }

// ---------------------------------------------------------------------------
// Binomial-sum estimates at large n, by interval bounds on sigma * C(n,k) e(k)

struct TauEstimates {
  double t = 0;
  std::size_t n = 0;
  double tau = 0;
  double useful1_lower = 0, useful1_upper = 0;  // bounds on sigma * sum_{k <= 4 tau n} C(n,k) e(k)
  double useful2_even = 0, useful2_odd = 0;    // lower bounds on sigma * sum by parity of k
  bool useful1_ok = false;
  bool useful2_ok_all_s = false;
};

inline TauEstimates tau_estimates_check(double t, std::size_t n) {
  if (!(t > 0 && t < 0.25)) throw HypothesisViolation("need t in (0, 1/4)");
  if (n < 8000) throw HypothesisViolation("need n >= 8000");
  HeatParams hp = HeatParams::from_t(t, n);
  const BF256 tau = hp.tau_as<BF256>();
  if (tau < 1 / (3 * sqrt(BF256(n)))) throw HypothesisViolation("need tau >= 1/(3 sqrt n)");
  TauEstimates r;
  r.t = t;
  r.n = n;
  r.tau = static_cast<double>(tau);
  const BF256 N4 = 4 * tau * n;
  const std::size_t kmax = static_cast<std::size_t>(floor(N4));
  const BF256 ls = hp.log_sigma_as<BF256>();
  const BF256 lt = log(tau), l1t = log1p(-tau);
  BF256 logC = 0;  // log C(n,k)
  BF256 up = 0, tail = 0, lo = 0, par[2] = {0, 0};
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) logC += log(BF256(n - k + 1)) - log(BF256(k));
    const BF256 pmf = exp(logC + k * lt + (n - k) * l1t);
    if (k > kmax) {
      tail += pmf;
      continue;
    }
    // C(n,k) floor(r_k) sigma lies in [pmf_k - sigma C(n,k), pmf_k]
    const BF256 slack = exp(logC + ls);
    const BF256 low = pmf > slack ? BF256(pmf - slack) : BF256(0);
    up += pmf;
    lo += low;
    par[k % 2] += low;
  }
  // The upper bound is 1 - tail <= 1; the sum of both parts must reproduce
  // the binomial identity.
  const BF256 margin("1e-50");
  if (abs(up + tail - 1) > margin) throw PrecisionFailure("binomial sum does not reproduce 1");
  r.useful1_lower = static_cast<double>(lo);
  r.useful1_upper = static_cast<double>(1 - tail);
  r.useful1_ok = lo >= BF256(1) / 3 + margin && tail >= 0;
  r.useful2_even = static_cast<double>(par[0]);
  r.useful2_odd = static_cast<double>(par[1]);
  // for s in (4 tau n, n] the terms k = s - 2m with e(k) > 0 are exactly the
  // k <= 4 tau n of the parity of s
  bool ok = true;
  for (int parity = 0; parity < 2; ++parity) {
    bool occurs = false;
    for (std::size_t s = kmax + 1; s <= n && s <= kmax + 2; ++s)
      if (s % 2 == static_cast<std::size_t>(parity)) occurs = true;
    if (occurs && !(par[parity] >= BF256(1) / 18 + margin)) ok = false;
  }
  r.useful2_ok_all_s = ok;
  return r;
}

// ((1-e^{-t})/2)^w ((1+e^{-t})/2)^{n-w}, w = |x - y|
inline double heat_matrix_entry(double t, word_t x, word_t y, std::size_t n) {
  if (n > 64 || ((x | y) & ~word_mask(n))) throw InvalidInput("words longer than n");
  if (t < 0) throw InvalidInput("t must be nonnegative");
  const int w = std::popcount(x ^ y);
  const double a = -std::expm1(-t) / 2, b = (1 + std::exp(-t)) / 2;
  return std::pow(a, w) * std::pow(b, static_cast<double>(n) - w);
}

// sum_m C(n,m) |((1-e^{-t})/2)^m ((1+e^{-t})/2)^{n-m} - 2^{-n}|
inline double heat_l1_ratio(std::size_t n, double t) {
  if (n > 60) throw TooLarge("heat_l1_ratio needs n <= 60");
  if (t < 0) throw InvalidInput("t must be nonnegative");
  const BF256 e = exp(-BF256(t)), a = (1 - e) / 2, b = (1 + e) / 2;
  const BF256 u = pow(BF256(2), -static_cast<int>(n));
  BF256 s = 0;
  for (std::size_t m = 0; m <= n; ++m) {
    BF256 term = pow(a, static_cast<int>(m)) * pow(b, static_cast<int>(n - m)) - u;
    s += BF256(binomial(n, m)) * abs(term);
  }
  return static_cast<double>(s);
}

}  // namespace expanders
