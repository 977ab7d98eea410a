#pragma once

#include <chrono>
#include <map>
#include <set>

#include "base_graph.hpp"
#include "codes.hpp"
#include "pipeline.hpp"
#include "poincare.hpp"
#include "products.hpp"
#include "random.hpp"
#include "spectral.hpp"

namespace expanders {

// ---------------------------------------------------------------------------
// Small-graph enumeration

using IntMatrix = std::vector<std::vector<int>>;

inline RegularMultigraph graph_from_matrix(const IntMatrix& M) {
  std::vector<Edge> es;
  for (std::size_t i = 0; i < M.size(); ++i)
    for (std::size_t j = i; j < M.size(); ++j)
      if (M[i][j] > 0) es.push_back({static_cast<vid_t>(i), static_cast<vid_t>(j), static_cast<mult_t>(M[i][j])});
  return build_graph(M.size(), es);
}

inline IntMatrix matrix_from_graph(const RegularMultigraph& g) {
  IntMatrix M(g.n(), std::vector<int>(g.n(), 0));
  for (std::size_t u = 0; u < g.n(); ++u)
    for (const auto& e : g.row(u)) M[u][e.v] = static_cast<int>(e.m);
  return M;
}

// Lexicographically largest lower-triangle sequence over all relabelings.
inline std::vector<int> canonical_code(const IntMatrix& M) {
  const std::size_t n = M.size();
  std::vector<int> best, cur;
  std::vector<std::size_t> perm(n);
  std::vector<char> used(n, 0);
  auto dfs = [&](auto&& self, std::size_t k) -> void {
    if (k == n) {
      if (cur > best) best = cur;
      return;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v]) continue;
      perm[k] = v;
      const std::size_t before = cur.size();
      for (std::size_t j = 0; j <= k; ++j) cur.push_back(M[v][perm[j]]);
      bool prune = false;
      if (!best.empty()) {
        for (std::size_t i = 0; i < cur.size(); ++i) {
          if (cur[i] != best[i]) {
            prune = cur[i] < best[i];
            break;
          }
        }
      }
      if (!prune) {
        used[v] = 1;
        self(self, k + 1);
        used[v] = 0;
      }
      cur.resize(before);
    }
  };
  dfs(dfs, 0);
  return best;
}

// All d-regular multigraphs on n vertices (loops count once), one per
// isomorphism class.
inline std::vector<RegularMultigraph> enumerate_regular(std::size_t n, int d) {
  IntMatrix M(n, std::vector<int>(n, 0));
  std::vector<int> rem(n, d);
  std::set<std::vector<int>> seen;
  std::vector<RegularMultigraph> out;
  // fill entries (i, j >= i) row by row
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> void {
    if (i == n) {
      auto code = canonical_code(M);
      if (seen.insert(code).second) out.push_back(graph_from_matrix(M));
      return;
    }
    if (j == n) {
      if (rem[i] == 0) self(self, i + 1, i + 1);
      return;
    }
    const int cap = (i == j) ? rem[i] : std::min(rem[i], rem[j]);
    for (int v = 0; v <= cap; ++v) {
      M[i][j] = M[j][i] = v;
      rem[i] -= v;
      if (i != j) rem[j] -= v;
      self(self, i, j + 1);
      rem[i] += v;
      if (i != j) rem[j] += v;
    }
    M[i][j] = M[j][i] = 0;
  };
  rec(rec, 0, 0);
  return out;
}

// Bipartite d-regular graphs with sides [0,n) and [n,2n) from n x n integer
// matrices with all line sums d (no isomorphism reduction).
inline std::vector<RegularMultigraph> enumerate_bipartite(std::size_t n, int d) {
  IntMatrix M(n, std::vector<int>(n, 0));
  std::vector<int> col(n, d);
  std::vector<RegularMultigraph> out;
  auto rec = [&](auto&& self, std::size_t i, std::size_t j, int rowrem) -> void {
    if (i == n) {
      std::vector<Edge> es;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (M[a][b]) es.push_back({static_cast<vid_t>(a), static_cast<vid_t>(n + b), static_cast<mult_t>(M[a][b])});
      out.push_back(build_graph(2 * n, es));
      return;
    }
    if (j == n) {
      if (rowrem == 0) self(self, i + 1, 0, d);
      return;
    }
    for (int v = 0; v <= std::min(rowrem, col[j]); ++v) {
      M[i][j] = v;
      col[j] -= v;
      self(self, i, j + 1, rowrem - v);
      col[j] += v;
    }
    M[i][j] = 0;
  };
  rec(rec, 0, 0, d);
  return out;
}

// Relabel vertex u as perm[u].
inline RegularMultigraph relabel(const RegularMultigraph& g, const std::vector<vid_t>& perm) {
  std::vector<Edge> es;
  for (const auto& e : g.edges()) es.push_back({perm[e.u], perm[e.v], e.m});
  return build_graph(g.n(), es);
}

// ---------------------------------------------------------------------------
// Random fixtures

inline std::uint64_t instance_seed(std::uint64_t base, std::uint64_t i) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Convex combination of symmetrised permutation matrices.
inline StochasticMatrix random_stochastic(std::size_t n, std::mt19937_64& rng) {
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  std::uniform_int_distribution<int> kd(1, 4);
  std::uniform_real_distribution<double> wd(0.1, 1.0);
  const int k = kd(rng);
  std::vector<double> w(static_cast<std::size_t>(k));
  double tot = 0;
  for (auto& x : w) tot += (x = wd(rng));
  std::vector<Eigen::Index> p(n);
  for (int s = 0; s < k; ++s) {
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    for (Eigen::Index i = 0; i < N; ++i) {
      A(i, p[static_cast<std::size_t>(i)]) += 0.5 * w[static_cast<std::size_t>(s)] / tot;
      A(p[static_cast<std::size_t>(i)], i) += 0.5 * w[static_cast<std::size_t>(s)] / tot;
    }
  }
  return StochasticMatrix::dense(std::move(A), false);
}

// ---------------------------------------------------------------------------
// Reports

struct Instance {
  std::string id;
  std::string anchor;
  std::uint64_t seed = 0;
  double lhs = 0, rhs = 0, slack = 0;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<Instance> instances;
  std::vector<std::pair<std::string, std::string>> info;  // report-only values
  std::vector<std::string> table_header;
  std::vector<std::vector<std::string>> table;
  double seconds = 0;

  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(instances.begin(), instances.end(), [](const Instance& i) { return !i.pass; }));
  }
  bool pass() const { return failures() == 0; }
  double min_slack() const {
    double m = kInf;
    for (const auto& i : instances) m = std::min(m, i.slack);
    return m;
  }
  std::set<std::string> anchors() const {
    std::set<std::string> s;
    for (const auto& i : instances) s.insert(i.anchor);
    return s;
  }
};

struct VerifySuiteConfig {
  std::string suite;
  std::size_t count = 0;  // 0: suite default
  std::uint64_t seed = 7;
  double tolerance = 1e-9;
  double K_p = 1;         // cotype: p-convexity constant of the target
  bool corrupt = false;   // harness self-test: every check is forced to fail
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "euclid-exact", "products-euclid", "products-oracle", "calculus", "cotype", "prelim-lemmas",
      "trivial-bounds", "base-arith", "heat", "pipeline-toy", "nondecay"};
  return names;
}

inline void validate(const VerifySuiteConfig& c) {
  const auto& n = suite_names();
  if (std::find(n.begin(), n.end(), c.suite) == n.end()) throw InvalidInput("unknown suite '" + c.suite + "'");
  if (!(c.tolerance > 0)) throw InvalidInput("tolerance must be positive");
  if (c.suite == "cotype" && c.K_p < 1) throw InvalidInput("cotype needs K_p >= 1");
}

namespace detail {

inline std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

class Recorder {
 public:
  Recorder(SuiteReport& r, const VerifySuiteConfig& c) : r_(r), c_(c) {}

  // lhs <= rhs up to tol * max(1, |rhs|); inf conventions as extended reals.
  void leq(std::string id, std::string anchor, std::uint64_t seed, double lhs, double rhs, double tol,
           std::string detail = {}) {
    Instance in{std::move(id), std::move(anchor), seed, lhs, rhs, 0, false, std::move(detail)};
    if (c_.corrupt) in.rhs = rhs = std::isinf(lhs) ? -kInf : lhs - 1 - std::abs(lhs);
    if (std::isinf(rhs) && rhs > 0) {
      in.slack = kInf;
      in.pass = true;
    } else if (std::isinf(lhs) && lhs > 0) {
      in.slack = -kInf;
      in.pass = false;
    } else {
      in.slack = rhs - lhs;
      in.pass = lhs <= rhs + tol * std::max(1.0, std::abs(rhs));
    }
    r_.instances.push_back(std::move(in));
  }

  // Exact: lhs <= factor * product(rhs).
  void exact(std::string id, std::string anchor, const ExtRational& lhs, const Rational& factor,
             const std::vector<ExtRational>& rhs, std::string detail = {}) {
    ExtRational prod{false, factor};
    for (const auto& x : rhs) prod = ext_mul(prod, x);
    bool ok = ext_leq(lhs, 1, prod);
    Instance in{std::move(id), std::move(anchor), 0, lhs.approx(), prod.approx(), 0, ok, std::move(detail)};
    in.slack = prod.infinite ? kInf : lhs.infinite ? -kInf : static_cast<double>(prod.value - lhs.value);
    if (c_.corrupt) {
      in.pass = false;
      in.slack = -1;
    }
    r_.instances.push_back(std::move(in));
  }

  void flag(std::string id, std::string anchor, std::uint64_t seed, bool ok, std::string detail = {}) {
    Instance in{std::move(id), std::move(anchor), seed, 0, 0, ok ? 0.0 : -1.0, ok && !c_.corrupt, std::move(detail)};
    if (c_.corrupt) in.slack = -1;
    r_.instances.push_back(std::move(in));
  }

 private:
  SuiteReport& r_;
  const VerifySuiteConfig& c_;
};

inline std::size_t count_or(const VerifySuiteConfig& c, std::size_t def) { return c.count ? c.count : def; }

// ----- euclid-exact
inline void suite_euclid_exact(const VerifySuiteConfig& c, SuiteReport& rep) {
  Recorder rec(rep, c);
  const std::size_t N = count_or(c, 200);
  const std::size_t per = std::max<std::size_t>(1, 10000 / N);
  std::size_t random_configs = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const std::uint64_t s = instance_seed(c.seed, i);
    std::mt19937_64 rng(s);
    std::size_t n = std::uniform_int_distribution<std::size_t>(3, 256)(rng);
    RegularMultigraph g = identity_graph(1);
    if (i % 10 == 0) {
      if (n % 2 == 0) ++n;  // odd cycle: connected and not bipartite
      g = cycle(n);
    } else {
      g = random_expander(n, std::uniform_int_distribution<std::size_t>(3, 8)(rng), s);
    }
    auto A = normalized_adjacency(g);
    auto rep_s = spectral_report(g);
    auto ep = eigenpairs_dense(A);
    // nontrivial extreme eigenvalue: smallest, or second largest
    const Eigen::Index last = ep.values.size() - 1;
    const Eigen::Index idx = std::abs(ep.values[0]) >= std::abs(ep.values[last - 1]) ? 0 : last - 1;
    const double mu = ep.values[idx];
    Configuration cf;
    for (std::size_t v = 0; v < g.n(); ++v) {
      const double x = ep.vectors(static_cast<Eigen::Index>(v), idx);
      cf.f.push_back({x});
      cf.g.push_back({mu < 0 ? -x : x});
    }
    const double gp = rep_s.gamma_plus_euclid;
    const double r = ratio(A, EuclidSq{}, cf);
    const std::string id = "graph" + std::to_string(i) + "(n=" + std::to_string(g.n()) + ",d=" + std::to_string(g.degree()) + ")";
    rec.flag(id + ":closed-form", "euclid-gamma-closed-form", s,
             std::abs(gp - 1.0 / (1.0 - rep_s.lambda_abs)) <= 1e-12 * gp && std::abs(std::abs(mu) - rep_s.lambda_abs) <= 1e-9,
             "lambda_abs=" + fmt(rep_s.lambda_abs));
    rec.flag(id + ":eigenvector", "eigenvector-extremality", s, std::abs(r - gp) <= c.tolerance * gp,
             "ratio=" + fmt(r) + " gamma_plus=" + fmt(gp));
    std::normal_distribution<double> nd;
    double worst = 0;
    for (std::size_t k = 0; k < per; ++k) {
      const std::size_t dim = 1 + k % 3;
      Configuration rc;
      for (std::size_t v = 0; v < g.n(); ++v) {
        Point a(dim), b(dim);
        for (auto& x : a) x = nd(rng);
        for (auto& x : b) x = nd(rng);
        rc.f.push_back(a);
        rc.g.push_back(b);
      }
      worst = std::max(worst, ratio(A, EuclidSq{}, rc));
      ++random_configs;
    }
    rec.leq(id + ":random-configs", "ratio-below-gamma-plus", s, worst, gp, c.tolerance);
  }
  rep.info.push_back({"random_configurations", std::to_string(random_configs)});
}

// ----- products-euclid
inline void suite_products_euclid(const VerifySuiteConfig& c, SuiteReport& rep) {
  Recorder rec(rep, c);
  const std::size_t N = count_or(c, 100);
  for (std::size_t i = 0; i < N; ++i) {
    const std::uint64_t s = instance_seed(c.seed, i);
    std::mt19937_64 rng(s);
    std::size_t n1 = std::uniform_int_distribution<std::size_t>(3, 64)(rng);
    const std::size_t d1 = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    if (d1 == 2 && n1 % 2 == 0) ++n1;  // even 2-regular samples are bipartite
    const std::size_t d2 = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(d1, 3))(rng);
    RegularMultigraph g1 = random_expander(n1, d1, s);
    RegularMultigraph g2 = random_regular(d1, d2, s + 1);
    const double a = gamma_plus_euclid(g1), b = gamma_plus_euclid(g2);
    const std::string id = "pair" + std::to_string(i) + "(n1=" + std::to_string(n1) + ",d1=" + std::to_string(d1) +
                           ",d2=" + std::to_string(d2) + ")";
    for (int lab = 0; lab < 6; ++lab) {
      RotationLabeling L = lab == 0 ? default_labeling(g1, g2) : random_labeling(g1, g2, s + 100 + lab);
      const double z = gamma_plus_euclid(zigzag(g1, g2, L));
      rec.leq(id + ":zigzag:label" + std::to_string(lab), "zigzag-submultiplicativity", s, z, a * b * b, c.tolerance);
      if (lab == 0) {
        const double sq = gamma_plus_euclid(derandomized_square(g1, g2, L));
        rec.leq(id + ":square", "derandomized-square", s, sq, gamma_plus_euclid(graph_power(g1, 2)) * b, c.tolerance);
      }
    }
    rec.leq(id + ":tensor", "tensor-submultiplicativity", s, gamma_plus_euclid(tensor_graph(g1, g2)), a * b, c.tolerance);
  }
}

// ----- products-oracle
struct OracleCache {
  std::map<std::pair<std::string, int>, ExtRational> plus, plain;
  std::vector<FiniteMetric> kernels;
  std::vector<std::string> kernel_names;
  std::vector<double> kappas;
  std::uint64_t calls = 0;

  static std::string key(const RegularMultigraph& g) { return to_edge_list(g); }
  const ExtRational& gp(const RegularMultigraph& g, int k) {
    auto K = std::make_pair(key(g), k);
    auto it = plus.find(K);
    if (it != plus.end()) return it->second;
    ++calls;
    return plus[K] = gamma_plus_bruteforce(g, kernels[static_cast<std::size_t>(k)]).value;
  }
  const ExtRational& gm(const RegularMultigraph& g, int k) {
    auto K = std::make_pair(key(g), k);
    auto it = plain.find(K);
    if (it != plain.end()) return it->second;
    ++calls;
    return plain[K] = gamma_bruteforce(g, kernels[static_cast<std::size_t>(k)]).value;
  }
};

inline OracleCache finite_targets() {
  OracleCache oc;
  for (double p : {1.0, 2.0}) {
    oc.kernels.push_back(two_point_metric(p));
    oc.kernel_names.push_back("2pt^" + fmt(p));
    oc.kappas.push_back(p - 1);
    oc.kernels.push_back(three_point_metric(p));
    oc.kernel_names.push_back("3pt^" + fmt(p));
    oc.kappas.push_back(p - 1);
  }
  return oc;
}

inline std::vector<RegularMultigraph> small_graphs(std::size_t n, int d) { return enumerate_regular(n, d); }

inline void suite_products_oracle(const VerifySuiteConfig& c, SuiteReport& rep) {
  Recorder rec(rep, c);
  OracleCache oc = finite_targets();
  std::size_t pairs = 0;
  for (std::size_t n1 = 1; n1 <= 8; ++n1)
    for (int d1 = 1; n1 * static_cast<std::size_t>(d1) <= 8; ++d1) {
      auto G1s = small_graphs(n1, d1);
      std::vector<int> d2s = {1, 2};
      if (d1 <= 4) d2s.push_back(3);
      for (int d2 : d2s) {
        auto G2s = small_graphs(static_cast<std::size_t>(d1), d2);
        for (std::size_t a = 0; a < G1s.size(); ++a)
          for (std::size_t b = 0; b < G2s.size(); ++b) {
            const auto& g1 = G1s[a];
            const auto& g2 = G2s[b];
            ++pairs;
            RotationLabeling L = default_labeling(g1, g2);
            RegularMultigraph z = zigzag(g1, g2, L), t = tensor_graph(g1, g2), sq = derandomized_square(g1, g2, L);
            RegularMultigraph rp = replacement(g1, g2, L), bp = balanced_replacement(g1, g2, L);
            RegularMultigraph g1sq = graph_power(g1, 2);
            RegularMultigraph zr = zigzag(g1, g2, random_labeling(g1, g2, c.seed + pairs));
            const std::string id = "n1=" + std::to_string(n1) + ",d1=" + std::to_string(d1) + ",d2=" +
                                   std::to_string(d2) + ",G1#" + std::to_string(a) + ",G2#" + std::to_string(b);
            for (int k = 0; k < static_cast<int>(oc.kernels.size()); ++k) {
              const std::string kid = id + "," + oc.kernel_names[static_cast<std::size_t>(k)];
              const ExtRational& x1 = oc.gp(g1, k);
              const ExtRational& x2 = oc.gp(g2, k);
              rec.exact(kid + ":zigzag", "zigzag-submultiplicativity", oc.gp(z, k), 1, {x1, x2, x2});
              rec.exact(kid + ":zigzag-random-label", "zigzag-submultiplicativity", oc.gp(zr, k), 1, {x1, x2, x2});
              rec.exact(kid + ":tensor", "tensor-submultiplicativity", oc.gp(t, k), 1, {x1, x2});
              rec.exact(kid + ":square", "derandomized-square", oc.gp(sq, k), 1, {oc.gp(g1sq, k), x2});
              // metric kernels d^p, p <= 2, are squares of the metric d^{p/2}
              rec.exact(kid + ":replacement", "replacement-metric", oc.gp(rp, k), Rational(3 * (d2 + 1)), {x1, x2, x2});
              rec.exact(kid + ":balanced", "balanced-replacement-metric", oc.gp(bp, k), 6, {x1, x2, x2});
            }
          }
      }
    }
  rep.info.push_back({"graph_pairs", std::to_string(pairs)});
  rep.info.push_back({"oracle_calls", std::to_string(oc.calls)});
}

// ----- calculus
inline void suite_calculus(const VerifySuiteConfig& c, SuiteReport& rep) {
  Recorder rec(rep, c);
  const std::size_t N = count_or(c, 500);
  CalculusParams prm{32, 1, 2};
  double worst_exact = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const std::uint64_t s = instance_seed(c.seed, i);
    std::mt19937_64 rng(s);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 40)(rng);
    const unsigned m = static_cast<unsigned>(1 + i % 16);
    StochasticMatrix A = random_stochastic(n, rng);
    auto r = check_calculus_decay(A, m, prm);
    const std::string id = "inst" + std::to_string(i) + "(n=" + std::to_string(n) + ",m=" + std::to_string(m) + ")";
    rec.leq(id + ":decay", "cesaro-calculus-decay", s, r.gamma_plus_Am, r.rhs, c.tolerance,
            "gamma+(A)=" + fmt(r.gamma_plus_A) + " exact_ratio=" + fmt(r.exact_ratio));
    if (std::isfinite(r.exact_ratio)) worst_exact = std::max(worst_exact, r.exact_ratio);
    // spectral mapping: eig(A_m(A)) = {(1/m) sum_t mu^t}
    auto ev = eigenvalues_dense(A);
    std::vector<double> mapped;
    for (double mu : ev) {
      double sum = 0, p = 1;
      for (unsigned t = 0; t < m; ++t) {
        sum += p;
        p *= mu;
      }
      mapped.push_back(sum / m);
    }
    std::sort(mapped.begin(), mapped.end(), std::greater<>());
    auto direct = eigenvalues_dense(cesaro_matrix(A, m));
    double diff = 0;
    for (std::size_t k = 0; k < mapped.size(); ++k) diff = std::max(diff, std::abs(mapped[k] - direct[k]));
    rec.leq(id + ":spectral-mapping", "cesaro-spectral-mapping", s, diff, 1e-9, 0, "max |diff|=" + fmt(diff));
  }
  rep.info.push_back({"max_finite_exact_ratio", fmt(worst_exact)});
}

// ----- cotype
inline void suite_cotype(const VerifySuiteConfig& c, SuiteReport& rep) {
  Recorder rec(rep, c);
  const std::size_t N2 = count_or(c, 1000), N3 = std::max<std::size_t>(1, N2 / 5);
  auto run = [&](std::size_t count, double p, std::size_t dim, unsigned mmax, std::uint64_t salt) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint64_t s = instance_seed(c.seed + salt, i);
      std::mt19937_64 rng(s);
      const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 50)(rng);
      const unsigned m = static_cast<unsigned>(1 + i % mmax);
      StochasticMatrix A = random_stochastic(n, rng);
      Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
      std::normal_distribution<double> nd;
      for (Eigen::Index a = 0; a < x.rows(); ++a)
        for (Eigen::Index b = 0; b < x.cols(); ++b) x(a, b) = nd(rng);
      CotypeParams prm{p, p, c.K_p, m};
      auto r = check_cotype(A, x, prm, p);
      const std::string id = "p=q=" + fmt(p) + ",inst" + std::to_string(i) + "(n=" + std::to_string(n) +
                             ",m=" + std::to_string(m) + ")";
      rec.leq(id + ":max-form", "cotype-max-form", s, std::max(r.displacement, r.edge_term), r.rhs, c.tolerance,
              "displacement=" + fmt(r.displacement) + " edge=" + fmt(r.edge_term));
      if (r.has_combined)
        rec.leq(id + ":combined", "cotype-combined-form", s, r.combined_lhs, r.combined_rhs, c.tolerance);
    }
  };
  run(N2, 2, 5, 8, 0);
  run(N3, 3, 4, 8, 1);
}

// ----- prelim-lemmas
inline double gamma_e(const RegularMultigraph& g) { return gamma_euclid(g); }
inline double gamma_pe(const RegularMultigraph& g) { return gamma_plus_euclid(g); }

// Partition (first half = V') and sigma making the two-sided construction
// regular, if any: requires E(z, V') = E(sigma z, V'') for all z in V'.
inline std::optional<RegularMultigraph> regular_half_size(const RegularMultigraph& g) {
  const std::size_t N = g.n(), n = N / 2;
  auto M = matrix_from_graph(g);
  for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != n || !(mask & 1)) continue;
    std::vector<vid_t> A, B;
    for (std::size_t v = 0; v < N; ++v) (mask >> v & 1 ? A : B).push_back(static_cast<vid_t>(v));
    auto inside = [&](vid_t z, const std::vector<vid_t>& side) {
      int s = 0;
      for (vid_t w : side) s += M[z][w];
      return s;
    };
    std::vector<vid_t> perm = B;
    std::sort(perm.begin(), perm.end());
    do {
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) ok = inside(A[i], A) == inside(perm[i], B);
      if (!ok) continue;
      // relabel: A[i] -> i, perm[i] -> n + i; sigma is the default shift
      std::vector<vid_t> lab(N);
      for (std::size_t i = 0; i < n; ++i) {
        lab[A[i]] = static_cast<vid_t>(i);
        lab[perm[i]] = static_cast<vid_t>(n + i);
      }
      return half_size(relabel(g, lab));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return std::nullopt;
}

inline void suite_prelim(const VerifySuiteConfig& c, SuiteReport& rep) {
  Recorder rec(rep, c);
  OracleCache oc = finite_targets();
  // 2-point metric, p = 1: a metric, kappa = 0
  const int K = 0;
  const double kappa = 0;
  std::size_t mirrored = 0, literal = 0;
  std::vector<std::pair<std::size_t, int>> shapes = {{1, 1}, {1, 2}, {1, 3}, {1, 4}, {2, 1}, {2, 2}, {2, 3}, {2, 4},
                                                     {3, 1}, {3, 2}, {3, 3}, {4, 1}, {4, 2}, {4, 3}};
  for (auto [n, d] : shapes) {
    auto gs = small_graphs(n, d);
    for (std::size_t a = 0; a < gs.size(); ++a) {
      const auto& g = gs[a];
      const std::string id = "n=" + std::to_string(n) + ",d=" + std::to_string(d) + ",G#" + std::to_string(a);
      // gamma versus gamma_+ through the bipartite double cover
      RegularMultigraph B = bipartite_double_graph(g);
      const ExtRational gpA = oc.gp(g, K), gB = oc.gm(B, K);
      rec.exact(id + ":double-cover-lower", "gamma-plus-vs-double-cover", gB,
                Rational(static_cast<int>(std::pow(2, kappa + 1)) + 1, 2), {gpA});
      rec.exact(id + ":double-cover-upper", "gamma-plus-vs-double-cover", gpA, 2, {gB});
      for (unsigned m = 1; m <= 3; ++m) {
        RegularMultigraph lhs = bipartite_double_graph(cesaro_graph(g, m));
        RegularMultigraph rhs = cesaro_graph(B, m);
        rec.exact(id + ":cesaro-cover,m=" + std::to_string(m), "double-cover-commutes-with-cesaro", oc.gm(lhs, K),
                  Rational(static_cast<int>(std::pow(2, kappa + 2)) + 1), {oc.gm(rhs, K)});
      }
      if (d >= 2)
        for (mult_t D : {mult_t(d), mult_t(d + 1), mult_t(2 * d - 1), mult_t(2 * d), mult_t(2 * d + 1), mult_t(3 * d)}) {
          RegularMultigraph cd = edge_completion(g, D);
          rec.exact(id + ":completion-gamma,D=" + std::to_string(D), "edge-completion", oc.gm(cd, K), 2, {oc.gm(g, K)});
          rec.exact(id + ":completion-gamma+,D=" + std::to_string(D), "edge-completion", oc.gp(cd, K), 2, {gpA});
        }
      if (n % 2 == 0) {
        if (auto h = regular_half_size(g)) {
          ++literal;
          rec.exact(id + ":half-size", "half-size", oc.gp(*h, K), Rational(static_cast<int>(std::pow(2, kappa + 2))),
                    {oc.gm(g, K)});
        }
        ++mirrored;
        rec.exact(id + ":half-size-mirrored", "half-size-mirrored", oc.gp(half_size_mirrored(g), K),
                  Rational(static_cast<int>(std::pow(2, kappa + 3))), {oc.gm(g, K)});
      }
    }
  }
  // collapse of bipartite graphs, sides up to 4
  std::vector<std::pair<std::size_t, int>> bshapes = {{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {4, 1}, {4, 2}};
  for (auto [n, d] : bshapes) {
    auto bs = enumerate_bipartite(n, d);
    for (std::size_t a = 0; a < bs.size(); ++a) {
      const std::string id = "sides=" + std::to_string(n) + ",d=" + std::to_string(d) + ",B#" + std::to_string(a);
      rec.exact(id + ":collapse", "bipartite-collapse", oc.gp(collapse_bipartite(bs[a]), K), 2, {oc.gm(bs[a], K)});
    }
  }
  rep.info.push_back({"half_size_literal_instances", std::to_string(literal)});
  rep.info.push_back({"half_size_mirrored_instances", std::to_string(mirrored)});

  // Euclid, random instances (kappa = 1 for the squared Euclidean distance)
  const std::size_t N = count_or(c, 100);
  for (std::size_t i = 0; i < N; ++i) {
    const std::uint64_t s = instance_seed(c.seed, i);
    std::mt19937_64 rng(s);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 40)(rng);
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    RegularMultigraph g = random_regular(n, d, s);
    const std::string id = "euclid" + std::to_string(i) + "(n=" + std::to_string(n) + ",d=" + std::to_string(d) + ")";
    RegularMultigraph B = bipartite_double_graph(g);
    const double gp = gamma_pe(g), gB = gamma_e(B);
    rec.leq(id + ":double-cover-lower", "gamma-plus-vs-double-cover", s, 2.0 / 5.0 * gB, gp, c.tolerance);
    rec.leq(id + ":double-cover-upper", "gamma-plus-vs-double-cover", s, gp, 2 * gB, c.tolerance);
    const unsigned m = static_cast<unsigned>(1 + i % 6);
    rec.leq(id + ":cesaro-cover,m=" + std::to_string(m), "double-cover-commutes-with-cesaro", s,
            gamma_e(bipartite_double_graph(cesaro_graph(g, m))), 9 * gamma_e(cesaro_graph(B, m)), c.tolerance);
    const mult_t D = d + std::uniform_int_distribution<mult_t>(0, 2 * d)(rng);
    RegularMultigraph cd = edge_completion(g, D);
    rec.leq(id + ":completion-gamma", "edge-completion", s, gamma_e(cd), 2 * gamma_e(g), c.tolerance);
    rec.leq(id + ":completion-gamma+", "edge-completion", s, gamma_pe(cd), 2 * gp, c.tolerance);
    // random bipartite graph from permutation matrices
    RegularMultigraph rb = bipartite_double_graph(random_regular(n, d, s + 7));
    rec.leq(id + ":collapse", "bipartite-collapse", s, gamma_pe(collapse_bipartite(rb)), 2 * gamma_e(rb), c.tolerance);
    if (n % 2 == 0) {
      rec.leq(id + ":half-size-mirrored", "half-size-mirrored", s, gamma_pe(half_size_mirrored(g)), 16 * gamma_e(g),
              c.tolerance);
      if (n <= 8)
        if (auto h = regular_half_size(g))
          rec.leq(id + ":half-size", "half-size", s, gamma_pe(*h), 8 * gamma_e(g), c.tolerance);
    }
  }
}

// ----- trivial-bounds
inline void suite_trivial(const VerifySuiteConfig& c, SuiteReport& rep) {
  Recorder rec(rep, c);
  const std::size_t N = count_or(c, 100);
  for (std::size_t i = 0; i < N; ++i) {
    const std::uint64_t s = instance_seed(c.seed, i);
    std::mt19937_64 rng(s);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 128)(rng);
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    const std::string id = "inst" + std::to_string(i) + "(n=" + std::to_string(n) + ",d=" + std::to_string(d) + ")";
    // connected sample for gamma
    RegularMultigraph g = random_regular(n, d, s);
    for (std::uint64_t k = 1; !is_connected(g); ++k) g = random_regular(n, d, s + k);
    auto tb = trivial_poincare_bounds(static_cast<double>(n), static_cast<double>(d), 1);
    rec.leq(id + ":gamma", "trivial-gamma-bound", s, gamma_e(g), tb.gamma_bound, c.tolerance);
    RegularMultigraph h = random_expander(d == 2 && n % 2 == 0 ? n + 1 : n, d, s + 1000);
    rec.leq(id + ":gamma+", "trivial-gamma-plus-bound", s, gamma_pe(h), tb.gamma_plus_bound, c.tolerance);
  }
  const double c9 = gamma_pe(cycle(9));
  rec.leq("C9", "cycle-constant", 0, c9, 648, 0, "gamma+(C9)=" + fmt(c9));
  rec.leq("C9:trivial", "trivial-gamma-plus-bound", 0, c9, trivial_poincare_bounds(9, 2, 1).gamma_plus_bound, 0);
}

// ----- base-arith
inline void suite_base_arith(const VerifySuiteConfig& c, SuiteReport& rep) {
  Recorder rec(rep, c);
  HeatParams q = HeatParams::from_tau(1, 4, 4);
  auto e = e_t_n_table(q);
  const std::vector<BigInt> want = {81, 27, 9, 3, 1};
  rec.flag("tau=1/4,n=4:e", "heat-weights", 0, e == want);
  const BigInt d = heat_degree(q);
  // sigma = (1/4)^4 exactly
  rec.flag("tau=1/4,n=4:degree", "heat-degree", 0, d == 256, "degree=" + d.str());
  auto hb = heat_degree_bounds(q);
  rec.flag("tau=1/4,n=4:degree-bounds", "heat-degree", 0, hb.lower_ok && hb.upper_ok);
  {
    RegularMultigraph g = heat_graph(q);
    rec.flag("tau=1/4,n=4:graph", "heat-degree", 0, g.degree() == 256 && g.n() == 16);
  }
  // binomial-sum estimates on a 20-point grid
  const std::vector<std::size_t> ns = {8000, 9000, 12000, 16000};
  std::size_t pts = 0;
  for (std::size_t n : ns) {
    const double tmin = 1.0 / (3.0 * std::sqrt(static_cast<double>(n)));
    const double taus[] = {tmin * 1.0001, 0.01, 0.03, 0.06, 0.1};
    for (double tau : taus) {
      const double t = -std::log1p(-2 * tau);
      auto r = tau_estimates_check(t, n);
      ++pts;
      const std::string id = "n=" + std::to_string(n) + ",tau=" + fmt(tau);
      rec.flag(id + ":useful1", "binomial-sum-bounds", 0, r.useful1_ok,
               "sigma*S in [" + fmt(r.useful1_lower) + ", " + fmt(r.useful1_upper) + "]");
      rec.flag(id + ":useful2", "binomial-parity-sums", 0, r.useful2_ok_all_s,
               "even=" + fmt(r.useful2_even) + " odd=" + fmt(r.useful2_odd));
    }
  }
  rep.info.push_back({"grid_points", std::to_string(pts)});
  // quotient conservation
  std::vector<LinearCode> codes;
  for (std::size_t n = 4; n <= 12; ++n) codes.push_back(repetition_code(n));
  codes.push_back(hamming8_code());
  for (std::size_t n : {4, 6, 8}) codes.push_back(parity_code(n));
  for (const auto& code : codes)
    for (auto [p, qq] : {std::pair<std::uint64_t, std::uint64_t>{1, 4}, {1, 8}}) {
      HeatParams hp = HeatParams::from_tau(p, qq, code.n);
      if (!hp.four_tau_n()) continue;
      RegularMultigraph H = quotient_heat_graph(hp, code);
      const BigInt dG = heat_degree(hp);
      const BigInt totalG = (BigInt(1) << code.n) * dG;
      const BigInt totalH = total_multiplicity(H) * (BigInt(1) << (code.n - code.dim()));
      const std::string id = "code(n=" + std::to_string(code.n) + ",D=" + std::to_string(code.dim()) + "),tau=" +
                             std::to_string(p) + "/" + std::to_string(qq);
      rec.flag(id + ":conservation", "quotient-conservation", 0, totalG == totalH && BigInt(H.degree()) == dG,
               "G total=" + totalG.str() + " H total*|dual|=" + totalH.str());
      if (code.n <= 8) {
        RegularMultigraph G = heat_graph(hp);
        rec.flag(id + ":graph-total", "quotient-conservation", 0, total_multiplicity(G) == totalG);
        // multiplicities from coset representatives
        auto reps = coset_reps(code);
        auto dualc = dual(code);
        bool ok = true;
        auto et = e_t_n_table(hp);
        for (std::size_t c1 = 0; c1 < reps.size() && ok; ++c1)
          for (std::size_t c2 = 0; c2 < reps.size() && ok; ++c2) {
            BigInt s = 0;
            for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << dualc.dim()); ++idx) {
              word_t u = 0;
              for (std::size_t r = 0; r < dualc.dim(); ++r)
                if (idx >> r & 1) u ^= dualc.rows[r];
              s += et[static_cast<std::size_t>(std::popcount(reps[c1] ^ reps[c2] ^ u))];
            }
            ok = s == H.mult(c1, c2);
          }
        rec.flag(id + ":coset-sums", "quotient-conservation", 0, ok);
      }
    }
}

// ----- heat
inline void suite_heat(const VerifySuiteConfig& c, SuiteReport& rep) {
  Recorder rec(rep, c);
  std::mt19937_64 rng(c.seed);
  double worst = 0;
  for (std::size_t n = 1; n <= 12; ++n)
    for (int k = 0; k < 4; ++k) {
      const double t = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
      const word_t x = rng() & word_mask(n);
      double s = 0;
      for (word_t y = 0; y < (word_t{1} << n); ++y) s += heat_matrix_entry(t, x, y, n);
      worst = std::max(worst, std::abs(s - 1));
      rec.leq("n=" + std::to_string(n) + ",t=" + fmt(t) + ":row-sum", "heat-row-sums", c.seed, std::abs(s - 1), 1e-12, 0);
    }
  rep.info.push_back({"max_row_sum_error", fmt(worst)});
  const double r = heat_l1_ratio(60, 1.0) / (2.0 * (1.0 - std::pow(2.0, -60)));
  rec.leq("n=60,t=1:l1-ratio", "heat-l1-ratio", 0, 0.95, r, 0, "normalised ratio=" + fmt(r));
  for (std::size_t n : {10, 20, 30, 40, 50, 60})
    rep.info.push_back({"l1_ratio_normalised(n=" + std::to_string(n) + ",t=1)",
                        fmt(heat_l1_ratio(n, 1.0) / (2.0 * (1.0 - std::pow(2.0, -static_cast<double>(n)))))});
}

// ----- pipeline-toy
inline std::vector<std::string> stage_row(const std::string& name, const StageSpectrum& s) {
  return {name, std::to_string(s.vertices), std::to_string(s.degree), s.available ? fmt(s.lambda_abs) : "n/a",
          s.available ? fmt(s.gamma_plus) : "n/a", s.method};
}

inline void suite_pipeline(const VerifySuiteConfig& c, SuiteReport& rep) {
  Recorder rec(rep, c);
  rep.table_header = {"stage", "vertices", "degree", "lambda_abs", "gamma_plus", "method"};
  PipelineConfig cfg;
  cfg.G0 = random_expander(32, 4, c.seed);
  cfg.t = 2;
  cfg.j_max = 3;
  cfg.seed = c.seed;
  auto res = initial_iteration(cfg);
  rep.table.push_back(stage_row("G0", res.trace.g0));
  const std::size_t sizes[] = {32, 1024, 32768};
  for (std::size_t j = 0; j < 3; ++j) {
    const auto& g = res.graphs[j];
    rec.flag("F" + std::to_string(j + 1) + ":shape", "initial-iteration-shape", c.seed,
             g.n() == sizes[j] && g.degree() == 16,
             "n=" + std::to_string(g.n()) + " d=" + std::to_string(g.degree()));
    const auto& st = res.trace.steps[j];
    rep.table.push_back(stage_row("F" + std::to_string(j + 1), st.graph));
    if (j > 0) {
      rep.table.push_back(stage_row("  A_t(F" + std::to_string(j) + ")", *st.cesaro));
      rec.leq("F" + std::to_string(j + 1) + ":chain", "initial-iteration-chain", c.seed, st.graph.gamma_plus,
              st.chain_bound, kChainTolerance);
    }
  }
  auto tr = three_regularize(res.graphs[1]);
  rec.flag("F2*:shape", "three-regularize", c.seed,
           tr.graph.degree() == 3 && tr.graph.n() == 1024 * 16 * 9 && is_connected(tr.graph),
           "n=" + std::to_string(tr.graph.n()));
  SpectralOptions it;
  it.force_iterative = true;
  it.seed = c.seed;
  StageSpectrum s = measure(tr.graph, it);
  rep.table.push_back(stage_row("F2*", s));
  rec.flag("F2*:spectrum", "three-regularize", c.seed, s.available && s.residual <= 1e-8,
           s.available ? "residual=" + fmt(s.residual) : s.error);
  rec.leq("F2*:lambda", "three-regularize", c.seed, s.available ? s.lambda_abs : kInf, 0.9999, 0);
  rep.info.push_back({"F2*_lambda_abs", s.available ? fmt(s.lambda_abs) : "n/a"});

  // main iteration with small Cesaro parameters
  std::vector<Family> fam(3);
  PipelineConfig c1;
  c1.G0 = cycle(9);
  c1.t = 2;
  c1.j_max = 3;
  c1.spectra = false;
  auto f1 = initial_iteration(c1);
  PipelineConfig c2;
  c2.G0 = random_expander(18, 3, c.seed + 1);
  c2.t = 2;
  c2.j_max = 2;
  c2.spectra = false;
  auto f2 = initial_iteration(c2);
  fam[0].degree = 4;
  for (const auto& g : f1.graphs) fam[0].sizes.push_back(g.n());
  fam[1].degree = 9;
  for (const auto& g : f2.graphs) fam[1].sizes.push_back(g.n());
  fam[2].degree = 2;
  std::map<unsigned, BigInt> ov = {{1, 2}, {2, 2}, {3, 2}};
  auto sc = main_iteration_bookkeeping(fam, 2, ov);
  auto supplier = [&](unsigned h, unsigned j) -> RegularMultigraph {
    return h == 1 ? f1.graphs.at(j - 1) : f2.graphs.at(j - 1);
  };
  auto mr = main_iteration_build(sc, supplier, true);
  rec.flag("H2:shape", "main-iteration-shape", c.seed,
           BigInt(mr.H.n()) == sc.final_vertices && mr.H.degree() == 2 * 4 * 4,
           "n=" + std::to_string(mr.H.n()) + " d=" + std::to_string(mr.H.degree()));
  for (const auto& st : mr.trace) {
    rep.table.push_back(stage_row("W_2^" + std::to_string(st.i), st.graph));
    if (st.i > 0) rec.leq("W_2^" + std::to_string(st.i) + ":crude", "main-iteration-crude-bound", c.seed,
                          st.graph.gamma_plus, st.crude_bound, kChainTolerance);
  }
}

// ----- nondecay
inline void suite_nondecay(const VerifySuiteConfig& c, SuiteReport& rep) {
  Recorder rec(rep, c);
  rep.table_header = {"n", "t", "degree(A_t)", "diameter(A_t)", "lower_bound_G", "lower_bound_A_t", "(log(1+log n))^2"};
  for (unsigned t : {2u, 4u}) {
    double prevG = 0, prevA = 0;
    for (std::size_t n = 64; n <= 1024; n *= 2) {
      RegularMultigraph g = random_expander(n, 3, c.seed + n);
      auto r = nondecay_experiment(g, t);
      rep.table.push_back({std::to_string(n), std::to_string(t), std::to_string(cesaro_graph(g, t).degree()),
                           fmt(r.diameter), fmt(r.lower_bound_G), fmt(r.lower_bound_At), fmt(r.loglog_sq)});
      if (n > 64) {
        const std::string id = "t=" + std::to_string(t) + ",n=" + std::to_string(n);
        rec.leq(id + ":monotone-G", "nondecay-monotone", c.seed, prevG, r.lower_bound_G, 0);
        rec.leq(id + ":monotone-A_t", "nondecay-monotone", c.seed, prevA, r.lower_bound_At, 0);
      }
      prevG = r.lower_bound_G;
      prevA = r.lower_bound_At;
    }
  }
}

}  // namespace detail

inline SuiteReport run_verify(const VerifySuiteConfig& cfg) {
  validate(cfg);
  SuiteReport rep;
  rep.suite = cfg.suite;
  const auto t0 = std::chrono::steady_clock::now();
  const std::string& s = cfg.suite;
  if (s == "euclid-exact") detail::suite_euclid_exact(cfg, rep);
  else if (s == "products-euclid") detail::suite_products_euclid(cfg, rep);
  else if (s == "products-oracle") detail::suite_products_oracle(cfg, rep);
  else if (s == "calculus") detail::suite_calculus(cfg, rep);
  else if (s == "cotype") detail::suite_cotype(cfg, rep);
  else if (s == "prelim-lemmas") detail::suite_prelim(cfg, rep);
  else if (s == "trivial-bounds") detail::suite_trivial(cfg, rep);
  else if (s == "base-arith") detail::suite_base_arith(cfg, rep);
  else if (s == "heat") detail::suite_heat(cfg, rep);
  else if (s == "pipeline-toy") detail::suite_pipeline(cfg, rep);
  else if (s == "nondecay") detail::suite_nondecay(cfg, rep);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace expanders
