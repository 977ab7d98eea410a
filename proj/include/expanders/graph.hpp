#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <istream>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "util.hpp"

namespace expanders {

struct Edge {
  vid_t u = 0, v = 0;
  mult_t m = 0;
  bool operator==(const Edge&) const = default;
};

// Finite d-regular multigraph. Rows hold both (u,v) and (v,u); a self loop
// is stored once and contributes its multiplicity to the degree once.
class RegularMultigraph {
 public:
  struct Entry {
    vid_t v = 0;
    mult_t m = 0;
    bool operator==(const Entry&) const = default;
  };

  RegularMultigraph() = default;

  std::size_t n() const { return n_; }
  mult_t degree() const { return d_; }
  std::size_t nnz() const { return entries_.size(); }

  std::span<const Entry> row(std::size_t u) const {
    return {entries_.data() + off_[u], entries_.data() + off_[u + 1]};
  }

  mult_t mult(std::size_t u, std::size_t v) const {
    auto r = row(u);
    auto it = std::lower_bound(r.begin(), r.end(), v,
                               [](const Entry& e, std::size_t x) { return e.v < x; });
    return (it != r.end() && it->v == v) ? it->m : 0;
  }

  // Sorted (u <= v) edge list, the canonical serialized form.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (std::size_t u = 0; u < n_; ++u)
      for (const auto& e : row(u))
        if (e.v >= u) out.push_back({static_cast<vid_t>(u), e.v, e.m});
    return out;
  }

  bool operator==(const RegularMultigraph& o) const {
    return n_ == o.n_ && d_ == o.d_ && off_ == o.off_ && entries_ == o.entries_;
  }

  // Rows must be sorted by neighbour with positive multiplicities; the
  // result is checked for symmetry and regularity.
  static RegularMultigraph from_rows(std::vector<std::vector<Entry>> rows) {
    RegularMultigraph g;
    g.n_ = rows.size();
    if (g.n_ == 0) throw InvalidInput("graph must have at least one vertex");
    g.off_.assign(g.n_ + 1, 0);
    for (std::size_t u = 0; u < g.n_; ++u) g.off_[u + 1] = g.off_[u] + rows[u].size();
    g.entries_.reserve(g.off_.back());
    for (auto& r : rows) {
      g.entries_.insert(g.entries_.end(), r.begin(), r.end());
      std::vector<Entry>().swap(r);
    }
    g.validate();
    return g;
  }

 private:
  void validate() {
    std::optional<mult_t> deg;
    for (std::size_t u = 0; u < n_; ++u) {
      mult_t s = 0;
      auto r = row(u);
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i].v >= n_) throw InvalidInput("neighbour index out of range");
        if (r[i].m == 0) throw InvalidInput("zero multiplicity stored");
        if (i > 0 && r[i - 1].v >= r[i].v) throw InvalidInput("row not strictly sorted");
        s = checked_add(s, r[i].m, "degree");
      }
      if (!deg) {
        deg = s;
      } else if (*deg != s) {
        throw NonRegular("vertex 0 has degree " + std::to_string(*deg) + ", vertex " +
                         std::to_string(u) + " has degree " + std::to_string(s));
      }
    }
    if (*deg == 0) throw NonRegular("degree 0");
    for (std::size_t u = 0; u < n_; ++u)
      for (const auto& e : row(u))
        if (mult(e.v, u) != e.m) throw InvalidInput("multiplicities not symmetric");
    d_ = *deg;
  }

  std::size_t n_ = 0;
  mult_t d_ = 0;
  std::vector<std::size_t> off_;
  std::vector<Entry> entries_;
};

using Row = std::vector<RegularMultigraph::Entry>;

// Dense accumulator for building one row at a time.
class RowAccumulator {
 public:
  explicit RowAccumulator(std::size_t n) : acc_(n, 0) {}
  void add(std::size_t v, mult_t m) {
    if (m == 0) return;
    if (acc_[v] == 0) touched_.push_back(static_cast<vid_t>(v));
    acc_[v] = checked_add(acc_[v], m);
  }
  Row take() {
    std::sort(touched_.begin(), touched_.end());
    Row r;
    r.reserve(touched_.size());
    for (vid_t v : touched_) {
      r.push_back({v, acc_[v]});
      acc_[v] = 0;
    }
    touched_.clear();
    return r;
  }

 private:
  std::vector<mult_t> acc_;
  std::vector<vid_t> touched_;
};

// Builds every row with fn(u, acc) in parallel; output independent of threads.
template <class Fn>
RegularMultigraph build_rows(std::size_t n, Fn&& fn) {
  std::vector<Row> rows(n);
  parallel_blocks(
      n,
      [&](std::size_t b, std::size_t e) {
        RowAccumulator acc(n);
        for (std::size_t u = b; u < e; ++u) {
          fn(u, acc);
          rows[u] = acc.take();
        }
      },
      64);
  return RegularMultigraph::from_rows(std::move(rows));
}

// ---------------------------------------------------------------------------
// StochasticMatrix

class StochasticMatrix {
 public:
  using Op = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

  static StochasticMatrix dense(Eigen::MatrixXd m, bool validate = true) {
    if (m.rows() != m.cols() || m.rows() == 0) throw InvalidInput("matrix must be square");
    if (validate) {
      const Eigen::Index n = m.rows();
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(m.row(i).sum() - 1.0) > 1e-12) throw InvalidInput("row sum differs from 1");
        for (Eigen::Index j = 0; j < n; ++j) {
          if (m(i, j) < 0) throw InvalidInput("negative entry");
          if (std::abs(m(i, j) - m(j, i)) > 1e-12) throw InvalidInput("matrix not symmetric");
        }
      }
    }
    StochasticMatrix s;
    s.n_ = static_cast<std::size_t>(m.rows());
    s.dense_ = std::make_shared<Eigen::MatrixXd>(std::move(m));
    return s;
  }

  static StochasticMatrix implicit(std::size_t n, Op op) {
    StochasticMatrix s;
    s.n_ = n;
    s.op_ = std::move(op);
    return s;
  }

  std::size_t order() const { return n_; }
  bool is_dense() const { return static_cast<bool>(dense_); }

  const Eigen::MatrixXd& matrix() const {
    if (!dense_) throw TooLarge("implicit operator has no dense form");
    return *dense_;
  }

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    if (dense_) {
      y.noalias() = (*dense_) * x;
    } else {
      y.resize(static_cast<Eigen::Index>(n_));
      op_(x, y);
    }
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y;
    apply(x, y);
    return y;
  }

 private:
  std::size_t n_ = 0;
  std::shared_ptr<Eigen::MatrixXd> dense_;
  Op op_;
};

inline constexpr std::size_t kDenseThreshold = 4096;

// ---------------------------------------------------------------------------
// Constructors

inline RegularMultigraph build_graph(std::size_t n, const std::vector<Edge>& edges) {
  if (n == 0) throw InvalidInput("n must be positive");
  std::vector<std::vector<std::pair<vid_t, mult_t>>> raw(n);
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw InvalidInput("edge endpoint out of range");
    if (e.m == 0) throw InvalidInput("multiplicities must be positive");
    raw[e.u].push_back({e.v, e.m});
    if (e.u != e.v) raw[e.v].push_back({e.u, e.m});
  }
  std::vector<Row> rows(n);
  for (std::size_t u = 0; u < n; ++u) {
    auto& r = raw[u];
    std::sort(r.begin(), r.end());
    for (const auto& [v, m] : r) {
      if (!rows[u].empty() && rows[u].back().v == v)
        rows[u].back().m = checked_add(rows[u].back().m, m);
      else
        rows[u].push_back({v, m});
    }
  }
  return RegularMultigraph::from_rows(std::move(rows));
}

// Cayley graph of Z_n with generators +1 and -1.
inline RegularMultigraph cycle(std::size_t n) {
  if (n < 3) throw InvalidInput("cycle needs n >= 3");
  std::vector<Edge> es;
  for (std::size_t i = 0; i < n; ++i)
    es.push_back({static_cast<vid_t>(i), static_cast<vid_t>((i + 1) % n), 1});
  return build_graph(n, es);
}

// C_n with one self loop per vertex. For n in {1,2} the +1/-1 generators
// coincide, giving multiplicity 2 on the single cycle edge or loop.
inline RegularMultigraph cycle_with_loops(std::size_t n) {
  if (n < 1) throw InvalidInput("cycle_with_loops needs n >= 1");
  std::vector<Edge> es;
  for (std::size_t i = 0; i < n; ++i) {
    es.push_back({static_cast<vid_t>(i), static_cast<vid_t>(i), 1});
    if (n >= 3) es.push_back({static_cast<vid_t>(i), static_cast<vid_t>((i + 1) % n), 1});
  }
  if (n == 1) es.push_back({0, 0, 2});
  if (n == 2) es.push_back({0, 1, 2});
  return build_graph(n, es);
}

inline RegularMultigraph identity_graph(std::size_t n) {
  std::vector<Edge> es;
  for (std::size_t i = 0; i < n; ++i) es.push_back({static_cast<vid_t>(i), static_cast<vid_t>(i), 1});
  return build_graph(n, es);
}

// Every ordered pair joined once, loops included; degree n.
inline RegularMultigraph complete_with_loops(std::size_t n) {
  std::vector<Edge> es;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) es.push_back({static_cast<vid_t>(i), static_cast<vid_t>(j), 1});
  return build_graph(n, es);
}

inline Eigen::MatrixXd dense_multiplicities(const RegularMultigraph& g) {
  const auto n = static_cast<Eigen::Index>(g.n());
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t u = 0; u < g.n(); ++u)
    for (const auto& e : g.row(u)) E(static_cast<Eigen::Index>(u), e.v) = static_cast<double>(e.m);
  return E;
}

inline StochasticMatrix normalized_adjacency(const RegularMultigraph& g,
                                             std::size_t dense_threshold = kDenseThreshold) {
  if (g.n() <= dense_threshold)
    return StochasticMatrix::dense(dense_multiplicities(g) / static_cast<double>(g.degree()), false);
  auto gp = std::make_shared<RegularMultigraph>(g);
  return StochasticMatrix::implicit(g.n(), [gp](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    const double inv = 1.0 / static_cast<double>(gp->degree());
    parallel_blocks(gp->n(), [&](std::size_t b, std::size_t e) {
      for (std::size_t u = b; u < e; ++u) {
        double s = 0;
        for (const auto& en : gp->row(u)) s += static_cast<double>(en.m) * x[en.v];
        y[static_cast<Eigen::Index>(u)] = s * inv;
      }
    });
  });
}

// ---------------------------------------------------------------------------
// Transforms

// Integer product E_a * E_b of multiplicity matrices (degrees multiply).
inline RegularMultigraph multiply(const RegularMultigraph& a, const RegularMultigraph& b) {
  if (a.n() != b.n()) throw InvalidInput("order mismatch");
  checked_mul(a.degree(), b.degree(), "degree");
  return build_rows(a.n(), [&](std::size_t u, RowAccumulator& acc) {
    for (const auto& e : a.row(u))
      for (const auto& f : b.row(e.v)) acc.add(f.v, checked_mul(e.m, f.m));
  });
}

inline RegularMultigraph graph_power(const RegularMultigraph& g, unsigned t) {
  if (t < 1) throw InvalidInput("power needs t >= 1");
  checked_pow(g.degree(), t, "degree of graph power");
  RegularMultigraph p = g;
  for (unsigned i = 1; i < t; ++i) p = multiply(p, g);
  return p;
}

// Sum over t < m of d^(m-1-t) E^t, evaluated by Horner's rule.
inline RegularMultigraph cesaro_graph(const RegularMultigraph& g, unsigned m) {
  if (m < 1) throw InvalidInput("cesaro needs m >= 1");
  const mult_t d = g.degree();
  checked_mul(m, checked_pow(d, m - 1), "degree of Cesaro graph");
  RegularMultigraph p = identity_graph(g.n());
  mult_t dk = 1;
  for (unsigned k = 1; k < m; ++k) {
    dk = checked_mul(dk, d);
    const mult_t add = dk;
    const RegularMultigraph& cur = p;
    p = build_rows(g.n(), [&](std::size_t u, RowAccumulator& acc) {
      for (const auto& e : cur.row(u))
        for (const auto& f : g.row(e.v)) acc.add(f.v, checked_mul(e.m, f.m));
      acc.add(u, add);
    });
  }
  return p;
}

inline StochasticMatrix cesaro_matrix(const StochasticMatrix& a, unsigned m) {
  if (m < 1) throw InvalidInput("cesaro needs m >= 1");
  const auto n = static_cast<Eigen::Index>(a.order());
  if (a.is_dense()) {
    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
    for (unsigned t = 1; t < m; ++t) {
      P = P * a.matrix();
      S += P;
    }
    S /= static_cast<double>(m);
    S = 0.5 * (S + S.transpose()).eval();
    return StochasticMatrix::dense(std::move(S), false);
  }
  return StochasticMatrix::implicit(a.order(), [a, m](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    Eigen::VectorXd p = x, q;
    y = x;
    for (unsigned t = 1; t < m; ++t) {
      a.apply(p, q);
      p.swap(q);
      y += p;
    }
    y /= static_cast<double>(m);
  });
}

// D = m*d + r; multiplicities m*E(u,v) + r*[u=v].
inline RegularMultigraph edge_completion(const RegularMultigraph& g, mult_t D) {
  const mult_t d = g.degree();
  if (D < d) throw InvalidInput("edge completion needs D >= d");
  const mult_t m = D / d, r = D % d;
  return build_rows(g.n(), [&](std::size_t u, RowAccumulator& acc) {
    for (const auto& e : g.row(u)) acc.add(e.v, checked_mul(m, e.m));
    acc.add(u, r);
  });
}

inline StochasticMatrix bipartite_double(const StochasticMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.order());
  if (a.is_dense()) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    B.topRightCorner(n, n) = a.matrix();
    B.bottomLeftCorner(n, n) = a.matrix();
    return StochasticMatrix::dense(std::move(B), false);
  }
  return StochasticMatrix::implicit(2 * a.order(), [a, n](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    Eigen::VectorXd lo = a.apply(x.tail(n)), hi = a.apply(x.head(n));
    y.head(n) = lo;
    y.tail(n) = hi;
  });
}

// Graph form of the bipartite double cover: (u, v+n) joined E(u,v) times.
inline RegularMultigraph bipartite_double_graph(const RegularMultigraph& g) {
  const std::size_t n = g.n();
  return build_rows(2 * n, [&](std::size_t x, RowAccumulator& acc) {
    const std::size_t u = x % n, shift = x < n ? n : 0;
    for (const auto& e : g.row(u)) acc.add(e.v + shift, e.m);
  });
}

inline std::vector<vid_t> default_shift(std::size_t half) {
  std::vector<vid_t> s(half);
  for (std::size_t i = 0; i < half; ++i) s[i] = static_cast<vid_t>(i + half);
  return s;
}

inline void check_sigma(const std::vector<vid_t>& sigma, std::size_t half) {
  if (sigma.size() != half) throw InvalidInput("sigma has wrong length");
  std::vector<char> seen(half, 0);
  for (vid_t s : sigma) {
    if (s < half || s >= 2 * half || seen[s - half]) throw InvalidInput("sigma is not a bijection onto the second half");
    seen[s - half] = 1;
  }
}

// B lives on V = [0,n), W = [n,2n); sigma maps V onto W.
// F(u,v) = E(u, sigma v) + E(sigma u, v).
inline RegularMultigraph collapse_bipartite(const RegularMultigraph& b,
                                            std::optional<std::vector<vid_t>> sigma = std::nullopt) {
  if (b.n() % 2 != 0) throw InvalidInput("collapse_bipartite: sides unequal (odd vertex count)");
  const std::size_t n = b.n() / 2;
  std::vector<vid_t> s = sigma ? *sigma : default_shift(n);
  check_sigma(s, n);
  std::vector<vid_t> sinv(n);
  for (std::size_t i = 0; i < n; ++i) sinv[s[i] - n] = static_cast<vid_t>(i);
  for (std::size_t x = 0; x < b.n(); ++x)
    for (const auto& e : b.row(x))
      if ((x < n) == (e.v < n)) throw InvalidInput("collapse_bipartite: input not bipartite with the given sides");
  return build_rows(n, [&](std::size_t u, RowAccumulator& acc) {
    for (const auto& e : b.row(u)) acc.add(sinv[e.v - n], e.m);     // E(u, sigma v)
    for (const auto& e : b.row(s[u])) acc.add(e.v, e.m);            // E(sigma u, v)
  });
}

// Intermediate bipartite graph on V' = [0,n), V'' = [n,2n):
// F(x,y) = E(x,y) + E(x, sigma^-1 y) + d*[y = sigma x], symmetrically extended.
// This is d-regular only when E(z, V') = E(sigma z, V'') for every z in V';
// otherwise NonRegular is raised. half_size_mirrored covers the general case.
inline RegularMultigraph half_size_bipartite(const RegularMultigraph& g, const std::vector<vid_t>& s) {
  const std::size_t n = g.n() / 2;
  std::vector<vid_t> sinv(n);
  for (std::size_t i = 0; i < n; ++i) sinv[s[i] - n] = static_cast<vid_t>(i);
  const mult_t d = g.degree();
  std::vector<Row> rows(2 * n);
  RowAccumulator acc(2 * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (const auto& e : g.row(x)) {
      if (e.v >= n) acc.add(e.v, e.m);   // E(x,y), y in V''
      else acc.add(s[e.v], e.m);         // E(x, sigma^-1 y) with y = sigma z
    }
    acc.add(s[x], d);
    rows[x] = acc.take();
  }
  // Transpose into the V'' rows.
  for (std::size_t x = 0; x < n; ++x)
    for (const auto& e : rows[x]) rows[e.v].push_back({static_cast<vid_t>(x), e.m});
  for (std::size_t y = n; y < 2 * n; ++y) std::sort(rows[y].begin(), rows[y].end(), [](auto& a, auto& b) { return a.v < b.v; });
  return RegularMultigraph::from_rows(std::move(rows));
}

inline RegularMultigraph half_size(const RegularMultigraph& g,
                                   std::optional<std::vector<vid_t>> sigma = std::nullopt) {
  if (g.n() % 2 != 0) throw InvalidInput("half_size needs an even vertex count");
  const std::size_t n = g.n() / 2;
  std::vector<vid_t> s = sigma ? *sigma : default_shift(n);
  check_sigma(s, n);
  return collapse_bipartite(half_size_bipartite(g, s), s);
}

// Regular variant for arbitrary inputs: the bipartite graph adds the mirror
// terms E(sigma x, y) + E(sigma x, sigma^-1 y) + d*[y = sigma x], so it is
// 4d-regular and the collapsed output is 8d-regular.
inline RegularMultigraph half_size_mirrored(const RegularMultigraph& g,
                                            std::optional<std::vector<vid_t>> sigma = std::nullopt) {
  if (g.n() % 2 != 0) throw InvalidInput("half_size needs an even vertex count");
  const std::size_t n = g.n() / 2;
  std::vector<vid_t> s = sigma ? *sigma : default_shift(n);
  check_sigma(s, n);
  std::vector<vid_t> sinv(n);
  for (std::size_t i = 0; i < n; ++i) sinv[s[i] - n] = static_cast<vid_t>(i);
  const mult_t d = g.degree();
  // Map every vertex to its V'' image: phi(z) = sigma z for z in V', identity on V''.
  auto to_w = [&](vid_t z) -> vid_t { return z < n ? s[z] : z; };
  std::vector<Row> rows(2 * n);
  RowAccumulator acc(2 * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (const auto& e : g.row(x)) acc.add(to_w(e.v), e.m);      // E(x,y) + E(x, sigma^-1 y)
    for (const auto& e : g.row(s[x])) acc.add(to_w(e.v), e.m);   // E(sigma x, y) + E(sigma x, sigma^-1 y)
    acc.add(s[x], checked_mul(2, d));
    rows[x] = acc.take();
  }
  for (std::size_t x = 0; x < n; ++x)
    for (const auto& e : rows[x]) rows[e.v].push_back({static_cast<vid_t>(x), e.m});
  for (std::size_t y = n; y < 2 * n; ++y) std::sort(rows[y].begin(), rows[y].end(), [](auto& a, auto& b) { return a.v < b.v; });
  return collapse_bipartite(RegularMultigraph::from_rows(std::move(rows)), s);
}

struct TrivialBounds {
  double gamma_bound;
  double gamma_plus_bound;
};

inline TrivialBounds trivial_poincare_bounds(double n, double d, double kappa) {
  if (n < 1 || d < 1 || kappa < 0) throw InvalidInput("trivial bounds need n,d >= 1 and kappa >= 0");
  const double base = d * std::pow(n, kappa + 1);
  return {std::pow(2.0, kappa - 1) * base, std::pow(2.0, 2 * kappa) * base};
}

// ---------------------------------------------------------------------------
// Structure queries

inline std::vector<std::size_t> components(const RegularMultigraph& g) {
  std::vector<std::size_t> parent(g.n());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t u = 0; u < g.n(); ++u)
    for (const auto& e : g.row(u)) {
      auto a = find(u), b = find(e.v);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  for (std::size_t u = 0; u < g.n(); ++u) parent[u] = find(u);
  return parent;
}

inline bool is_connected(const RegularMultigraph& g) {
  auto c = components(g);
  return std::all_of(c.begin(), c.end(), [](std::size_t x) { return x == 0; });
}

inline bool is_bipartite(const RegularMultigraph& g) {
  std::vector<int> color(g.n(), -1);
  std::vector<std::size_t> queue;
  for (std::size_t s = 0; s < g.n(); ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    queue.assign(1, s);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      std::size_t u = queue[h];
      for (const auto& e : g.row(u)) {
        if (color[e.v] < 0) {
          color[e.v] = 1 - color[u];
          queue.push_back(e.v);
        } else if (color[e.v] == color[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

// Hop distances in the support of g; unreachable vertices get SIZE_MAX.
inline std::vector<std::size_t> bfs_distances(const RegularMultigraph& g, std::size_t src) {
  std::vector<std::size_t> dist(g.n(), SIZE_MAX);
  std::vector<std::size_t> queue{src};
  dist[src] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    std::size_t u = queue[h];
    for (const auto& e : g.row(u))
      if (dist[e.v] == SIZE_MAX) {
        dist[e.v] = dist[u] + 1;
        queue.push_back(e.v);
      }
  }
  return dist;
}

// ---------------------------------------------------------------------------
// Edge-list text format: "n d" header, then sorted "u v mult" lines, u <= v.

inline void write_edge_list(const RegularMultigraph& g, std::ostream& os) {
  os << g.n() << ' ' << g.degree() << '\n';
  for (const auto& e : g.edges()) os << e.u << ' ' << e.v << ' ' << e.m << '\n';
}

inline std::string to_edge_list(const RegularMultigraph& g) {
  std::ostringstream os;
  write_edge_list(g, os);
  return os.str();
}

namespace detail {
inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

inline std::uint64_t parse_u64(const std::string& s, std::size_t line) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(line, "expected a nonnegative integer, got '" + s + "'");
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (errno == ERANGE) throw ParseError(line, "integer out of range: " + s);
  return v;
}
}  // namespace detail

inline RegularMultigraph read_edge_list(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> header;
  std::vector<Edge> edges;
  while (std::getline(is, line)) {
    ++lineno;
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (!header) {
      if (toks.size() != 2) throw ParseError(lineno, "header must be 'n d'");
      header = {detail::parse_u64(toks[0], lineno), detail::parse_u64(toks[1], lineno)};
      if (header->first == 0 || header->first > UINT32_MAX) throw ParseError(lineno, "vertex count out of range");
      continue;
    }
    if (toks.size() != 3) throw ParseError(lineno, "edge line must be 'u v mult'");
    auto u = detail::parse_u64(toks[0], lineno), v = detail::parse_u64(toks[1], lineno),
         m = detail::parse_u64(toks[2], lineno);
    if (u >= header->first || v >= header->first) throw ParseError(lineno, "vertex index out of range");
    if (m == 0) throw ParseError(lineno, "multiplicity must be positive");
    edges.push_back({static_cast<vid_t>(u), static_cast<vid_t>(v), m});
  }
  if (!header) throw ParseError(lineno, "missing header");
  RegularMultigraph g = build_graph(header->first, edges);
  if (g.degree() != header->second)
    throw ParseError(1, "header degree " + std::to_string(header->second) + " but graph is " +
                            std::to_string(g.degree()) + "-regular");
  return g;
}

inline RegularMultigraph from_edge_list(const std::string& text) {
  std::istringstream is(text);
  return read_edge_list(is);
}

}  // namespace expanders
