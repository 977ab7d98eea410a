#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numeric>
#include <random>
#include <type_traits>
#include <variant>

#include "graph.hpp"
#include "spectral.hpp"

namespace expanders {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Kernels

struct EuclidSq {};
struct LpPower {
  std::size_t dim = 1;
  double p = 2;  // norm exponent and power
};
struct FiniteMetric {
  Eigen::MatrixXd D;
  double p = 1;
};
struct LogLinf {
  std::size_t dim = 1;
  double p = 2;
};
using KernelSpec = std::variant<EuclidSq, LpPower, FiniteMetric, LogLinf>;
using Point = std::vector<double>;

inline FiniteMetric make_finite_metric(Eigen::MatrixXd D, double p) {
  const auto k = D.rows();
  if (k == 0 || D.cols() != k) throw InvalidInput("distance matrix must be square and nonempty");
  if (!(p > 0)) throw InvalidInput("kernel power must be positive");
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(D(i, i)) > 1e-12) throw InvalidInput("distance matrix needs a zero diagonal");
    for (Eigen::Index j = 0; j < k; ++j) {
      if (D(i, j) < 0 || std::abs(D(i, j) - D(j, i)) > 1e-12) throw InvalidInput("distance matrix not symmetric nonnegative");
      for (Eigen::Index l = 0; l < k; ++l)
        if (D(i, l) > D(i, j) + D(j, l) + 1e-12) throw InvalidInput("distance matrix violates the triangle inequality");
    }
  }
  return {std::move(D), p};
}

inline FiniteMetric two_point_metric(double p) {
  Eigen::MatrixXd D(2, 2);
  D << 0, 1, 1, 0;
  return make_finite_metric(D, p);
}

// Fixed 3-point fixture: D(0,1)=2, D(1,2)=3, D(0,2)=4.
inline FiniteMetric three_point_metric(double p) {
  Eigen::MatrixXd D(3, 3);
  D << 0, 2, 4, 2, 0, 3, 4, 3, 0;
  return make_finite_metric(D, p);
}

// rho = d^p is a 2^kappa quasi-semimetric with kappa = max(p-1, 0).
inline double quasimetric_kappa(const KernelSpec& k) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, EuclidSq>) return 1.0;
        else return std::max(v.p - 1.0, 0.0);
      },
      k);
}

inline double kernel_value(const KernelSpec& k, const Point& x, const Point& y) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, EuclidSq>) {
          double s = 0;
          for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
          return s;
        } else if constexpr (std::is_same_v<T, LpPower>) {
          double s = 0;
          for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i] - y[i]), v.p);
          return s;  // (||x-y||_p)^p
        } else if constexpr (std::is_same_v<T, FiniteMetric>) {
          return std::pow(v.D(static_cast<Eigen::Index>(x[0]), static_cast<Eigen::Index>(y[0])), v.p);
        } else {
          double m = 0;
          for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
          return std::pow(std::log1p(m), v.p);
        }
      },
      k);
}

struct Configuration {
  std::vector<Point> f, g;
};

// (1/n^2) sum K(f_i,g_j) / ((1/n) sum a_ij K(f_i,g_j)); 0/0 = 1, x/0 = inf.
inline double ratio_from_sums(double num, double den, std::size_t n) {
  num /= static_cast<double>(n) * static_cast<double>(n);
  den /= static_cast<double>(n);
  if (den <= 0) return num > 0 ? kInf : 1.0;
  return num / den;
}

inline void check_config(std::size_t n, const Configuration& c) {
  if (c.f.size() != n || c.g.size() != n) throw InvalidInput("configuration size differs from matrix order");
}

inline double ratio(const StochasticMatrix& a, const KernelSpec& k, const Configuration& c) {
  const std::size_t n = a.order();
  check_config(n, c);
  const auto& A = a.matrix();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double kv = kernel_value(k, c.f[i], c.g[j]);
      num += kv;
      den += A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * kv;
    }
  return ratio_from_sums(num, den, n);
}

inline double ratio(const RegularMultigraph& g, const KernelSpec& k, const Configuration& c) {
  const std::size_t n = g.n();
  check_config(n, c);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) num += kernel_value(k, c.f[i], c.g[j]);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& e : g.row(i)) den += static_cast<double>(e.m) * kernel_value(k, c.f[i], c.g[e.v]);
  return ratio_from_sums(num, den / static_cast<double>(g.degree()), n);
}

// ---------------------------------------------------------------------------
// Exact oracle on finite targets

// Extended nonnegative rational: the supremum of a Poincare ratio.
struct ExtRational {
  bool infinite = false;
  Rational value = 1;

  double approx() const { return infinite ? kInf : static_cast<double>(value); }
  std::string str() const { return infinite ? std::string("inf") : value.str(); }
};

// lhs <= factor * rhs with the conventions inf <= inf and x <= inf.
inline bool ext_leq(const ExtRational& lhs, const Rational& factor, const ExtRational& rhs) {
  if (rhs.infinite && factor > 0) return true;
  if (lhs.infinite) return false;
  return lhs.value <= factor * rhs.value;
}

inline ExtRational ext_mul(const ExtRational& a, const ExtRational& b) {
  if (a.infinite || b.infinite) return {true, 0};
  return {false, a.value * b.value};
}

enum class OracleMethod { Auto, Full, Separable };

struct OracleResult {
  ExtRational value;
  std::vector<int> f, g;  // witness maps into the finite target
  std::uint64_t evaluated = 0;
  std::string method;
  bool exact = true;
};

inline constexpr std::uint64_t kDefaultCap = 10'000'000;

namespace detail {

inline std::uint64_t ipow_cap(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (r > UINT64_MAX / std::max<std::uint64_t>(b, 1)) return UINT64_MAX;
    r *= b;
  }
  return r;
}

// Integer weights W (row sums w) and integer kernel table; the Poincare
// ratio of (f,g) is (w/n) * N/D with N = sum K(f_i,g_j), D = sum W_ij K(f_i,g_j).
template <class T>
struct Problem {
  std::size_t n = 0, X = 0;
  std::vector<T> W;  // n*n
  T w = 0;
  std::vector<T> K;  // X*X
};

template <class T>
using Wide = std::conditional_t<std::is_integral_v<T>, __int128, long double>;

template <class T>
struct Frac {
  T num, den;  // den may be 0 only if infinite
};

template <class T>
bool frac_greater(const Frac<T>& a, const Frac<T>& b) {
  return static_cast<Wide<T>>(a.num) * b.den > static_cast<Wide<T>>(b.num) * a.den;
}

inline void decode(std::uint64_t idx, std::size_t X, std::vector<int>& f) {
  for (auto& x : f) {
    x = static_cast<int>(idx % X);
    idx /= X;
  }
}

template <class T>
struct BlockBest {
  bool infinite = false;
  Frac<T> best;
  std::uint64_t fidx = UINT64_MAX;
  std::vector<int> f, g;
};

// Maximises over g for fixed f exactly: sum_j c(g_j) / sum_j e_j(g_j) is a
// ratio of separable sums, so Dinkelbach iteration terminates at the optimum.
template <class T>
BlockBest<T> separable_block(const Problem<T>& P, std::uint64_t b, std::uint64_t e, Frac<T> start) {
  const std::size_t n = P.n, X = P.X;
  BlockBest<T> out;
  out.best = start;
  std::vector<int> f(n), g(n);
  std::vector<T> c(X), E(n * X);
  for (std::uint64_t idx = b; idx < e; ++idx) {
    decode(idx, X, f);
    for (std::size_t x = 0; x < X; ++x) {
      T s = 0;
      for (std::size_t i = 0; i < n; ++i) s += P.K[f[i] * X + x];
      c[x] = s;
    }
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t x = 0; x < X; ++x) {
        T s = 0;
        for (std::size_t i = 0; i < n; ++i) s += P.W[i * n + j] * P.K[f[i] * X + x];
        E[j * X + x] = s;
      }
    // Unbounded ratio: every column can be made edge-free with positive mass.
    {
      bool all = true;
      T N = 0;
      for (std::size_t j = 0; j < n && all; ++j) {
        bool any = false;
        T bestc = 0;
        int arg = 0;
        for (std::size_t x = 0; x < X; ++x)
          if (E[j * X + x] == 0 && (!any || c[x] > bestc)) {
            any = true;
            bestc = c[x];
            arg = static_cast<int>(x);
          }
        all = any;
        g[j] = arg;
        N += bestc;
      }
      if (all && N > 0) {
        out.infinite = true;
        out.fidx = idx;
        out.f = f;
        out.g = g;
        return out;
      }
    }
    Frac<T> lam = out.best;
    bool improved = false;
    while (true) {
      Wide<T> total = 0;
      T Nn = 0, Dd = 0;
      for (std::size_t j = 0; j < n; ++j) {
        Wide<T> bv = 0;
        int arg = -1;
        for (std::size_t x = 0; x < X; ++x) {
          Wide<T> v = static_cast<Wide<T>>(c[x]) * lam.den - static_cast<Wide<T>>(E[j * X + x]) * lam.num;
          if (arg < 0 || v > bv) {
            bv = v;
            arg = static_cast<int>(x);
          }
        }
        g[j] = arg;
        total += bv;
        Nn += c[arg];
        Dd += E[j * X + arg];
      }
      if (!(total > 0) || Dd == 0) break;
      Frac<T> nl{Nn, Dd};
      if (!frac_greater(nl, lam)) break;
      lam = nl;
      improved = true;
      out.g = g;
    }
    if (improved) {
      out.best = lam;
      out.fidx = idx;
      out.f = f;
    }
  }
  return out;
}

template <class T>
BlockBest<T> full_block(const Problem<T>& P, std::uint64_t b, std::uint64_t e, Frac<T> start, bool same) {
  const std::size_t n = P.n, X = P.X;
  BlockBest<T> out;
  out.best = start;
  std::vector<int> f(n), g(n);
  const std::uint64_t G = same ? 1 : ipow_cap(X, n);
  for (std::uint64_t idx = b; idx < e; ++idx) {
    decode(idx, X, f);
    for (std::uint64_t gi = 0; gi < G; ++gi) {
      if (same) g = f;
      else decode(gi, X, g);
      T N = 0, D = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const T k = P.K[f[i] * X + g[j]];
          N += k;
          D += P.W[i * n + j] * k;
        }
      if (D == 0) {
        if (N > 0) {
          out.infinite = true;
          out.fidx = idx;
          out.f = f;
          out.g = g;
          return out;
        }
        continue;
      }
      Frac<T> r{N, D};
      if (frac_greater(r, out.best)) {
        out.best = r;
        out.fidx = idx;
        out.f = f;
        out.g = g;
      }
    }
  }
  return out;
}

template <class T>
OracleResult solve(const Problem<T>& P, bool plus, std::uint64_t cap, OracleMethod method) {
  const std::uint64_t fx = ipow_cap(P.X, P.n);
  const std::uint64_t full = plus ? ipow_cap(fx, 2) : fx;
  if (fx == UINT64_MAX) throw CapExceeded("|X|^n overflows");
  bool use_full;
  if (!plus) use_full = true;
  else if (method == OracleMethod::Full) use_full = true;
  else if (method == OracleMethod::Separable) use_full = false;
  else use_full = full <= cap;
  const std::uint64_t cost = use_full ? full : fx;
  if (cost > cap) throw CapExceeded(std::to_string(cost) + " configurations exceed cap " + std::to_string(cap));

  // ratio 1 (constant maps) is always attained: N/D = n/w
  Frac<T> one{static_cast<T>(P.n), P.w};
  std::vector<BlockBest<T>> blocks;
  std::mutex mu;
  const std::size_t nb = std::max<std::size_t>(1, std::min<std::uint64_t>(fx, 64));
  blocks.resize(nb);
  parallel_blocks(
      nb,
      [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
          std::uint64_t lo = fx * k / nb, hi = fx * (k + 1) / nb;
          blocks[k] = use_full ? full_block(P, lo, hi, one, !plus) : separable_block(P, lo, hi, one);
        }
      },
      1);
  OracleResult r;
  r.method = plus ? (use_full ? "full" : "separable") : "full";
  r.evaluated = cost;
  r.exact = std::is_integral_v<T>;
  BlockBest<T> best;
  best.best = one;
  for (auto& b : blocks) {
    if (b.infinite) {
      if (!best.infinite || b.fidx < best.fidx) best = b;
      continue;
    }
    if (best.infinite) continue;
    if (b.fidx != UINT64_MAX && frac_greater(b.best, best.best)) best = b;
  }
  if (best.fidx == UINT64_MAX) {
    best.f.assign(P.n, 0);
    best.g.assign(P.n, 0);
  }
  r.f = best.f;
  r.g = best.g;
  if (best.infinite) {
    r.value = {true, 0};
  } else if constexpr (std::is_integral_v<T>) {
    // (w/n) * N / D
    r.value = {false, Rational(BigInt(P.w) * BigInt(best.best.num), BigInt(P.n) * BigInt(best.best.den))};
  } else {
    const long double v = static_cast<long double>(P.w) * best.best.num / (static_cast<long double>(P.n) * best.best.den);
    r.value = {false, Rational(static_cast<double>(v))};
  }
  return r;
}

// Kernel table as integers when every value is an integer below 2^31.
inline std::optional<std::vector<std::int64_t>> integral_table(const FiniteMetric& k) {
  const auto X = static_cast<std::size_t>(k.D.rows());
  std::vector<std::int64_t> t(X * X);
  for (std::size_t i = 0; i < X; ++i)
    for (std::size_t j = 0; j < X; ++j) {
      const double v = std::pow(k.D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), k.p);
      if (v != std::floor(v) || v >= 2147483648.0) return std::nullopt;
      t[i * X + j] = static_cast<std::int64_t>(v);
    }
  return t;
}

inline OracleResult run_oracle(const RegularMultigraph& G, const FiniteMetric& k, bool plus, std::uint64_t cap,
                               OracleMethod method) {
  const std::size_t n = G.n(), X = static_cast<std::size_t>(k.D.rows());
  if (auto tab = integral_table(k); tab && G.degree() < (1u << 30)) {
    Problem<std::int64_t> P;
    P.n = n;
    P.X = X;
    P.W.assign(n * n, 0);
    for (std::size_t u = 0; u < n; ++u)
      for (const auto& e : G.row(u)) P.W[u * n + e.v] = static_cast<std::int64_t>(e.m);
    P.w = static_cast<std::int64_t>(G.degree());
    P.K = *tab;
    return solve(P, plus, cap, method);
  }
  Problem<long double> P;
  P.n = n;
  P.X = X;
  P.W.assign(n * n, 0);
  for (std::size_t u = 0; u < n; ++u)
    for (const auto& e : G.row(u)) P.W[u * n + e.v] = static_cast<long double>(e.m);
  P.w = static_cast<long double>(G.degree());
  P.K.resize(X * X);
  for (std::size_t i = 0; i < X; ++i)
    for (std::size_t j = 0; j < X; ++j)
      P.K[i * X + j] = std::pow(static_cast<long double>(k.D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))), k.p);
  return solve(P, plus, cap, method);
}

}  // namespace detail

// Exact gamma_+ over all pairs of maps V -> X. "full" enumerates |X|^{2n}
// pairs; "separable" enumerates |X|^n maps f and solves the g-side exactly.
inline OracleResult gamma_plus_bruteforce(const RegularMultigraph& G, const FiniteMetric& k,
                                          std::uint64_t cap = kDefaultCap, OracleMethod method = OracleMethod::Auto) {
  return detail::run_oracle(G, k, true, cap, method);
}

inline OracleResult gamma_bruteforce(const RegularMultigraph& G, const FiniteMetric& k,
                                     std::uint64_t cap = kDefaultCap) {
  return detail::run_oracle(G, k, false, cap, OracleMethod::Full);
}

// Real-weighted matrices are evaluated in extended precision (not exact).
inline OracleResult gamma_plus_bruteforce(const StochasticMatrix& a, const FiniteMetric& k,
                                          std::uint64_t cap = kDefaultCap, bool plus = true) {
  const std::size_t n = a.order(), X = static_cast<std::size_t>(k.D.rows());
  detail::Problem<long double> P;
  P.n = n;
  P.X = X;
  P.W.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      P.W[i * n + j] = a.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  P.w = 1;
  P.K.resize(X * X);
  for (std::size_t i = 0; i < X; ++i)
    for (std::size_t j = 0; j < X; ++j)
      P.K[i * X + j] = std::pow(static_cast<long double>(k.D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))), k.p);
  return detail::solve(P, plus, cap, OracleMethod::Auto);
}

inline Configuration witness_configuration(const OracleResult& r) {
  Configuration c;
  for (int x : r.f) c.f.push_back({static_cast<double>(x)});
  for (int x : r.g) c.g.push_back({static_cast<double>(x)});
  return c;
}

// ---------------------------------------------------------------------------
// Search-based lower bounds

struct SearchResult {
  double lower_bound = 1;
  Configuration witness;
  std::uint64_t evaluations = 0;
};

inline SearchResult gamma_plus_search(const StochasticMatrix& a, const KernelSpec& k, std::uint64_t budget,
                                      std::uint64_t seed, std::size_t box = 4) {
  const std::size_t n = a.order();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const bool finite = std::holds_alternative<FiniteMetric>(k);
  const bool loglinf = std::holds_alternative<LogLinf>(k);
  const std::size_t X = finite ? static_cast<std::size_t>(std::get<FiniteMetric>(k).D.rows()) : 0;
  std::size_t dim = 1;
  if (auto* lp = std::get_if<LpPower>(&k)) dim = lp->dim;
  if (auto* ll = std::get_if<LogLinf>(&k)) dim = ll->dim;
  std::uniform_int_distribution<int> pick_pt(0, finite ? static_cast<int>(X) - 1 : 0);
  std::uniform_int_distribution<int> pick_box(-static_cast<int>(box), static_cast<int>(box));

  auto random_point = [&]() {
    Point p(dim);
    for (auto& x : p) x = finite ? pick_pt(rng) : loglinf ? pick_box(rng) : gauss(rng);
    return p;
  };
  auto random_config = [&]() {
    Configuration c;
    for (std::size_t i = 0; i < n; ++i) c.f.push_back(random_point());
    for (std::size_t i = 0; i < n; ++i) c.g.push_back(random_point());
    return c;
  };

  SearchResult r;
  r.witness = random_config();
  r.lower_bound = ratio(a, k, r.witness);
  auto consider = [&](const Configuration& c) -> bool {
    if (r.evaluations >= budget) return false;
    ++r.evaluations;
    const double v = ratio(a, k, c);
    if (v > r.lower_bound) {
      r.lower_bound = v;
      r.witness = c;
      return true;
    }
    return false;
  };

  if (std::holds_alternative<EuclidSq>(k) && budget > 0) {
    auto ep = eigenpairs_dense(a);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(ep.values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return std::abs(ep.values[x]) > std::abs(ep.values[y]); });
    for (auto idx : order) {
      Configuration c;
      const double s = ep.values[idx] < 0 ? -1.0 : 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        c.f.push_back({ep.vectors(static_cast<Eigen::Index>(i), idx)});
        c.g.push_back({s * ep.vectors(static_cast<Eigen::Index>(i), idx)});
      }
      if (c.f.front().size() != dim) {
        for (auto& p : c.f) p.resize(dim, 0.0);
        for (auto& p : c.g) p.resize(dim, 0.0);
      }
      consider(c);
    }
  }

  // Local search: single-coordinate moves, strict improvements only.
  Configuration cur = r.witness;
  double curv = r.lower_bound;
  while (r.evaluations < budget) {
    bool improved = false;
    for (std::size_t side = 0; side < 2 && r.evaluations < budget; ++side)
      for (std::size_t i = 0; i < n && r.evaluations < budget; ++i) {
        auto& pts = side == 0 ? cur.f : cur.g;
        const Point old = pts[i];
        std::vector<Point> moves;
        if (finite) {
          for (std::size_t x = 0; x < X; ++x)
            if (static_cast<double>(x) != old[0]) moves.push_back({static_cast<double>(x)});
        } else {
          Point p = old;
          std::uniform_int_distribution<std::size_t> coord(0, dim - 1);
          const std::size_t cdx = coord(rng);
          p[cdx] += loglinf ? (gauss(rng) < 0 ? -1.0 : 1.0) : 0.3 * gauss(rng);
          moves.push_back(p);
        }
        for (const auto& mv : moves) {
          if (r.evaluations >= budget) break;
          pts[i] = mv;
          ++r.evaluations;
          const double v = ratio(a, k, cur);
          if (v > curv) {
            curv = v;
            improved = true;
            if (v > r.lower_bound) {
              r.lower_bound = v;
              r.witness = cur;
            }
            break;
          }
          pts[i] = old;
        }
      }
    if (!improved && r.evaluations < budget) {
      cur = random_config();
      ++r.evaluations;
      curv = ratio(a, k, cur);
      if (curv > r.lower_bound) {
        r.lower_bound = curv;
        r.witness = cur;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Metric Markov cotype

struct CotypeParams {
  double p = 2;
  double q = 2;
  double K_p = 1;
  unsigned m = 1;
};

inline void validate(const CotypeParams& c) {
  if (c.p < 2) throw InvalidInput("cotype needs p >= 2");
  if (!(c.q > 1)) throw InvalidInput("cotype needs q > 1");
  if (c.K_p < 1) throw InvalidInput("cotype needs K_p >= 1");
  if (c.m < 1) throw InvalidInput("cotype needs m >= 1");
}

// Rows of x are points; y = (1/m) sum_{s<m} A^s x.
inline Eigen::MatrixXd cotype_witness(const StochasticMatrix& a, const Eigen::MatrixXd& x, unsigned m) {
  if (m < 1) throw InvalidInput("cotype witness needs m >= 1");
  if (static_cast<std::size_t>(x.rows()) != a.order()) throw InvalidInput("point count differs from matrix order");
  Eigen::MatrixXd y = x, p = x;
  for (unsigned s = 1; s < m; ++s) {
    for (Eigen::Index c = 0; c < p.cols(); ++c) p.col(c) = a.apply(Eigen::VectorXd(p.col(c)));
    y += p;
  }
  return y / static_cast<double>(m);
}

struct CotypeReport {
  double displacement = 0;  // sum ||x_i - y_i||^q
  double edge_term = 0;     // c^q m^{min(1,q/p)} sum a_ij ||y_i - y_j||^q
  double rhs = 0;           // sum A_m(A)_ij ||x_i - x_j||^q
  double slack = 0;         // rhs - max(displacement, edge_term)
  bool holds = false;
  bool has_combined = false;
  double combined_lhs = 0, combined_rhs = 0;
  bool combined_holds = true;
};

inline double cotype_constant(double p, double q, double K_p) {
  const double e = 1.0 - 1.0 / p;
  return std::pow((1.0 - 1.0 / p) * (1.0 - 1.0 / q), e) / (32.0 * std::pow(5.0, e) * K_p);
}

// Target is l_r^dim with r = norm_exponent (rows of x are points).
inline CotypeReport check_cotype(const StochasticMatrix& a, const Eigen::MatrixXd& x, const CotypeParams& prm,
                                 double norm_exponent) {
  validate(prm);
  if (norm_exponent < 1) throw InvalidInput("norm exponent must be >= 1");
  const std::size_t n = a.order();
  auto norm_q = [&](const Eigen::VectorXd& v) {
    const double nr = std::pow(v.array().abs().pow(norm_exponent).sum(), 1.0 / norm_exponent);
    return std::pow(nr, prm.q);
  };
  Eigen::MatrixXd y = cotype_witness(a, x, prm.m);
  const Eigen::MatrixXd& A = a.matrix();
  Eigen::MatrixXd Am = cesaro_matrix(a, prm.m).matrix();
  CotypeReport r;
  double edges = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto I = static_cast<Eigen::Index>(i);
    r.displacement += norm_q(x.row(I) - y.row(I));
    for (std::size_t j = 0; j < n; ++j) {
      const auto J = static_cast<Eigen::Index>(j);
      if (A(I, J) != 0) edges += A(I, J) * norm_q(y.row(I) - y.row(J));
      if (Am(I, J) != 0) r.rhs += Am(I, J) * norm_q(x.row(I) - x.row(J));
    }
  }
  const double mpow = std::pow(static_cast<double>(prm.m), std::min(1.0, prm.q / prm.p));
  r.edge_term = std::pow(cotype_constant(prm.p, prm.q, prm.K_p), prm.q) * mpow * edges;
  r.slack = r.rhs - std::max(r.displacement, r.edge_term);
  r.holds = r.slack >= 0;
  if (prm.q == 2) {
    r.has_combined = true;
    r.combined_lhs = r.displacement + std::pow(static_cast<double>(prm.m), 2.0 / prm.p) * edges;
    r.combined_rhs = std::pow(32.0 * prm.K_p, 2) * r.rhs;
    r.combined_holds = r.combined_lhs <= r.combined_rhs;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Cesaro calculus

struct CalculusParams {
  double C = 32;
  double eps = 1;
  double q = 2;
};

struct CalculusReport {
  double gamma_plus_A = 1;
  double gamma_plus_Am = 1;
  double rhs = 1;
  bool holds = false;
  double exact_ratio = 0;  // gamma_+(A_m) / max{1, gamma_+(A)/m}
};

inline double calculus_rhs(double gamma_plus_A, unsigned m, const CalculusParams& c) {
  return std::pow(45.0 * c.C, c.q) * std::max(1.0, gamma_plus_A / std::pow(static_cast<double>(m), c.eps));
}

// Euclid case through the spectral mapping mu -> (1/m) sum_{t<m} mu^t.
inline CalculusReport check_calculus_decay(const StochasticMatrix& a, unsigned m, const CalculusParams& c) {
  if (m < 1) throw InvalidInput("calculus needs m >= 1");
  auto ev = eigenvalues_dense(a);
  CalculusReport r;
  double la = 0, lam = 0;
  for (std::size_t i = 1; i < ev.size(); ++i) {
    la = std::max(la, std::abs(ev[i]));
    double s = 0, p = 1;
    for (unsigned t = 0; t < m; ++t) {
      s += p;
      p *= ev[i];
    }
    lam = std::max(lam, std::abs(s / m));
  }
  r.gamma_plus_A = gamma_from_lambda(la);
  r.gamma_plus_Am = gamma_from_lambda(lam);
  r.rhs = calculus_rhs(r.gamma_plus_A, m, c);
  r.holds = r.gamma_plus_Am <= r.rhs;
  const double denom = std::max(1.0, r.gamma_plus_A / m);
  r.exact_ratio = r.gamma_plus_Am / denom;
  return r;
}

// Finite target through the exact oracle on the integer Cesaro graph.
inline CalculusReport check_calculus_decay(const RegularMultigraph& g, unsigned m, const CalculusParams& c,
                                           const FiniteMetric& k, std::uint64_t cap = kDefaultCap) {
  CalculusReport r;
  r.gamma_plus_A = gamma_plus_bruteforce(g, k, cap).value.approx();
  r.gamma_plus_Am = gamma_plus_bruteforce(cesaro_graph(g, m), k, cap).value.approx();
  r.rhs = calculus_rhs(r.gamma_plus_A, m, c);
  r.holds = r.gamma_plus_Am <= r.rhs;
  r.exact_ratio = r.gamma_plus_Am / std::max(1.0, r.gamma_plus_A / m);
  return r;
}

// ---------------------------------------------------------------------------
// Frechet embedding and the non-decay experiment

inline std::vector<Point> frechet_embed(const Eigen::MatrixXd& D) {
  make_finite_metric(D, 1.0);
  std::vector<Point> rows;
  for (Eigen::Index u = 0; u < D.rows(); ++u) {
    Point p(static_cast<std::size_t>(D.cols()));
    for (Eigen::Index v = 0; v < D.cols(); ++v) p[static_cast<std::size_t>(v)] = D(u, v);
    rows.push_back(std::move(p));
  }
  return rows;
}

// All-pairs hop distances; pairs in different components get (max finite
// distance + 1), which keeps the triangle inequality (a discrete metric for
// the identity graph).
inline Eigen::MatrixXd shortest_path_metric(const RegularMultigraph& g) {
  const auto n = static_cast<Eigen::Index>(g.n());
  Eigen::MatrixXd D(n, n);
  std::size_t diam = 0;
  std::vector<std::vector<std::size_t>> all(g.n());
  parallel_blocks(g.n(), [&](std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) all[s] = bfs_distances(g, s);
  }, 16);
  for (auto& r : all)
    for (auto x : r)
      if (x != SIZE_MAX) diam = std::max(diam, x);
  for (std::size_t s = 0; s < g.n(); ++s)
    for (std::size_t v = 0; v < g.n(); ++v)
      D(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(v)) =
          static_cast<double>(all[s][v] == SIZE_MAX ? diam + 1 : all[s][v]);
  return D;
}

struct NondecayReport {
  std::size_t n = 0;
  unsigned t = 1;
  mult_t degree = 0;
  double diameter = 0;
  double lower_bound_G = 1;   // ratio of phi on G for rho^2
  double lower_bound_At = 1;  // ratio of phi on A_t(G) for rho^2
  double loglog_sq = 0;       // (log(1 + log n))^2
};

inline NondecayReport nondecay_experiment(const RegularMultigraph& g, unsigned t) {
  if (!is_connected(g)) throw InvalidInput("nondecay_experiment needs a connected graph");
  NondecayReport r;
  r.n = g.n();
  r.t = t;
  r.degree = g.degree();
  RegularMultigraph at = cesaro_graph(g, t);
  Eigen::MatrixXd D = shortest_path_metric(at);
  r.diameter = D.maxCoeff();
  // phi = Frechet rows; rho(phi u, phi v)^2 = log(1 + ||phi u - phi v||_inf)^2
  auto phi = frechet_embed(D);
  const std::size_t n = g.n();
  Eigen::MatrixXd Kmat(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_blocks(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t u = b; u < e; ++u)
      for (std::size_t v = 0; v < n; ++v) {
        double m = 0;
        const double* pu = phi[u].data();
        const double* pv = phi[v].data();
        for (std::size_t w = 0; w < n; ++w) m = std::max(m, std::abs(pu[w] - pv[w]));
        const double l = std::log1p(m);
        Kmat(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = l * l;
      }
  }, 8);
  auto graph_ratio = [&](const RegularMultigraph& h) {
    double num = Kmat.sum(), den = 0;
    for (std::size_t u = 0; u < n; ++u)
      for (const auto& e : h.row(u))
        den += static_cast<double>(e.m) * Kmat(static_cast<Eigen::Index>(u), e.v);
    return ratio_from_sums(num, den / static_cast<double>(h.degree()), n);
  };
  r.lower_bound_G = graph_ratio(g);
  r.lower_bound_At = graph_ratio(at);
  const double ll = std::log1p(std::log(static_cast<double>(n)));
  r.loglog_sq = ll * ll;
  return r;
}

}  // namespace expanders
