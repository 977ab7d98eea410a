#pragma once

#include <random>

#include "graph.hpp"

namespace expanders {

// Edge endpoints ("slots") of a multigraph. At vertex u the d slots are the
// edge copies ordered by (neighbour, copy index). Copy c of (u,v) at u is
// paired with copy c of (v,u) at v; a loop copy is its own mate.
class SlotTable {
 public:
  explicit SlotTable(const RegularMultigraph& g) : n_(g.n()), d_(g.degree()) {
    if (checked_mul(n_, d_) > UINT32_MAX) throw TooLarge("slot table exceeds 32-bit indices");
    target_.resize(n_ * d_);
    mate_.resize(n_ * d_);
    // prefix[u][i] = first slot index at u for the i-th row entry
    std::vector<std::vector<std::uint32_t>> prefix(n_);
    for (std::size_t u = 0; u < n_; ++u) {
      auto r = g.row(u);
      prefix[u].resize(r.size());
      std::uint32_t k = 0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        prefix[u][i] = k;
        for (mult_t c = 0; c < r[i].m; ++c) target_[u * d_ + k + c] = r[i].v;
        k += static_cast<std::uint32_t>(r[i].m);
      }
    }
    for (std::size_t u = 0; u < n_; ++u) {
      auto r = g.row(u);
      for (std::size_t i = 0; i < r.size(); ++i) {
        const vid_t v = r[i].v;
        auto rv = g.row(v);
        auto it = std::lower_bound(rv.begin(), rv.end(), u,
                                   [](const RegularMultigraph::Entry& e, std::size_t x) { return e.v < x; });
        const std::uint32_t back = prefix[v][static_cast<std::size_t>(it - rv.begin())];
        for (mult_t c = 0; c < r[i].m; ++c)
          mate_[u * d_ + prefix[u][i] + c] = back + static_cast<std::uint32_t>(c);
      }
    }
  }

  std::size_t degree() const { return d_; }
  vid_t target(std::size_t u, std::size_t k) const { return target_[u * d_ + k]; }
  std::uint32_t mate(std::size_t u, std::size_t k) const { return mate_[u * d_ + k]; }

 private:
  std::size_t n_, d_;
  std::vector<vid_t> target_;
  std::vector<std::uint32_t> mate_;
};

// pi[u][k]: vertex of G2 assigned to slot k at u (bijection onto V2).
// kappa[a][i]: i-th G2-neighbour of a, enumerating a's slots in G2.
struct RotationLabeling {
  std::vector<std::vector<vid_t>> pi;
  std::vector<std::vector<vid_t>> kappa;
  std::optional<std::uint64_t> seed;  // set for random labelings
};

inline void require_cloud_match(const RegularMultigraph& g1, const RegularMultigraph& g2) {
  if (g1.degree() != g2.n())
    throw DegreeMismatch("degree(G1)=" + std::to_string(g1.degree()) + " but |V(G2)|=" + std::to_string(g2.n()));
}

inline RotationLabeling default_labeling(const RegularMultigraph& g1, const RegularMultigraph& g2) {
  require_cloud_match(g1, g2);
  RotationLabeling L;
  const std::size_t d1 = g1.degree();
  L.pi.assign(g1.n(), std::vector<vid_t>(d1));
  for (auto& p : L.pi)
    for (std::size_t k = 0; k < d1; ++k) p[k] = static_cast<vid_t>(k);
  SlotTable s2(g2);
  L.kappa.assign(g2.n(), std::vector<vid_t>(g2.degree()));
  for (std::size_t a = 0; a < g2.n(); ++a)
    for (std::size_t i = 0; i < g2.degree(); ++i) L.kappa[a][i] = s2.target(a, i);
  return L;
}

inline RotationLabeling random_labeling(const RegularMultigraph& g1, const RegularMultigraph& g2,
                                        std::uint64_t seed) {
  RotationLabeling L = default_labeling(g1, g2);
  std::mt19937_64 rng(seed);
  for (auto& p : L.pi) std::shuffle(p.begin(), p.end(), rng);
  for (auto& k : L.kappa) std::shuffle(k.begin(), k.end(), rng);
  L.seed = seed;
  return L;
}

inline void validate_labeling(const RegularMultigraph& g1, const RegularMultigraph& g2, const RotationLabeling& L) {
  require_cloud_match(g1, g2);
  const std::size_t d1 = g1.degree();
  if (L.pi.size() != g1.n()) throw InvalidInput("labeling: pi has wrong size");
  for (const auto& p : L.pi) {
    if (p.size() != d1) throw InvalidInput("labeling: pi_u has wrong size");
    std::vector<char> seen(d1, 0);
    for (vid_t x : p) {
      if (x >= d1 || seen[x]) throw InvalidInput("labeling: pi_u is not a bijection onto V2");
      seen[x] = 1;
    }
  }
  if (L.kappa.size() != g2.n()) throw InvalidInput("labeling: kappa has wrong size");
  for (std::size_t a = 0; a < g2.n(); ++a) {
    if (L.kappa[a].size() != g2.degree()) throw InvalidInput("labeling: kappa_a has wrong size");
    std::vector<vid_t> got = L.kappa[a], want;
    for (const auto& e : g2.row(a))
      for (mult_t c = 0; c < e.m; ++c) want.push_back(e.v);
    std::sort(got.begin(), got.end());
    if (got != want) throw InvalidInput("labeling: kappa_a does not enumerate the neighbours of a");
  }
}

namespace detail {
inline std::vector<std::vector<vid_t>> invert_pi(const RotationLabeling& L) {
  std::vector<std::vector<vid_t>> inv(L.pi.size());
  for (std::size_t u = 0; u < L.pi.size(); ++u) {
    inv[u].resize(L.pi[u].size());
    for (std::size_t k = 0; k < L.pi[u].size(); ++k) inv[u][L.pi[u][k]] = static_cast<vid_t>(k);
  }
  return inv;
}
}  // namespace detail

// Vertex (u,a) has index u*d1 + a. Walk: small step by kappa, big step
// across the slot pi_u^{-1}(a'), small step by kappa.
inline RegularMultigraph zigzag(const RegularMultigraph& g1, const RegularMultigraph& g2, const RotationLabeling& L) {
  validate_labeling(g1, g2, L);
  const std::size_t d1 = g1.degree(), d2 = g2.degree();
  checked_mul(d2, d2, "zigzag degree");
  SlotTable s1(g1);
  auto piinv = detail::invert_pi(L);
  return build_rows(g1.n() * d1, [&](std::size_t x, RowAccumulator& acc) {
    const std::size_t u = x / d1, a = x % d1;
    for (std::size_t i = 0; i < d2; ++i) {
      const vid_t a1 = L.kappa[a][i];
      const std::size_t k = piinv[u][a1];
      const vid_t v = s1.target(u, k);
      const vid_t b1 = L.pi[v][s1.mate(u, k)];
      for (std::size_t j = 0; j < d2; ++j) acc.add(v * d1 + L.kappa[b1][j], 1);
    }
  });
}

// E2(i,j)[u=v] + w * [slot of (u,v) labelled i at u and j at v], w = 1 or d2.
inline RegularMultigraph replacement_impl(const RegularMultigraph& g1, const RegularMultigraph& g2,
                                          const RotationLabeling& L, mult_t w) {
  validate_labeling(g1, g2, L);
  const std::size_t d1 = g1.degree();
  SlotTable s1(g1);
  auto piinv = detail::invert_pi(L);
  return build_rows(g1.n() * d1, [&](std::size_t x, RowAccumulator& acc) {
    const std::size_t u = x / d1, i = x % d1;
    for (const auto& e : g2.row(i)) acc.add(u * d1 + e.v, e.m);
    const std::size_t k = piinv[u][i];
    const vid_t v = s1.target(u, k);
    acc.add(v * d1 + L.pi[v][s1.mate(u, k)], w);
  });
}

inline RegularMultigraph replacement(const RegularMultigraph& g1, const RegularMultigraph& g2,
                                     const RotationLabeling& L) {
  return replacement_impl(g1, g2, L, 1);
}

inline RegularMultigraph balanced_replacement(const RegularMultigraph& g1, const RegularMultigraph& g2,
                                              const RotationLabeling& L) {
  return replacement_impl(g1, g2, L, g2.degree());
}

// Sum over w and slot pairs (s -> u, s' -> v) at w of E2(pi_w(s), pi_w(s')).
inline RegularMultigraph derandomized_square(const RegularMultigraph& g1, const RegularMultigraph& g2,
                                             const RotationLabeling& L) {
  validate_labeling(g1, g2, L);
  checked_mul(g1.degree(), g2.degree(), "derandomized square degree");
  SlotTable s1(g1);
  auto piinv = detail::invert_pi(L);
  return build_rows(g1.n(), [&](std::size_t u, RowAccumulator& acc) {
    for (std::size_t k0 = 0; k0 < g1.degree(); ++k0) {
      const vid_t w = s1.target(u, k0);
      const vid_t a = L.pi[w][s1.mate(u, k0)];
      for (const auto& e : g2.row(a)) acc.add(s1.target(w, piinv[w][e.v]), e.m);
    }
  });
}

// Vertex (u,s) has index u*n2 + s; multiplicity E1(u,v) E2(s,t).
inline RegularMultigraph tensor_graph(const RegularMultigraph& g1, const RegularMultigraph& g2) {
  checked_mul(g1.degree(), g2.degree(), "tensor degree");
  const std::size_t n2 = g2.n();
  return build_rows(g1.n() * n2, [&](std::size_t x, RowAccumulator& acc) {
    const std::size_t u = x / n2, s = x % n2;
    for (const auto& e : g1.row(u))
      for (const auto& f : g2.row(s)) acc.add(e.v * n2 + f.v, checked_mul(e.m, f.m));
  });
}

inline StochasticMatrix tensor(const StochasticMatrix& a, const StochasticMatrix& b) {
  const auto m = static_cast<Eigen::Index>(a.order()), n = static_cast<Eigen::Index>(b.order());
  if (a.is_dense() && b.is_dense() && a.order() * b.order() <= kDenseThreshold) {
    Eigen::MatrixXd K(m * n, m * n);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) K.block(i * n, j * n, n, n) = a.matrix()(i, j) * b.matrix();
    return StochasticMatrix::dense(std::move(K), false);
  }
  // (A (x) B) vec(X) with X stored row-major as m blocks of length n.
  return StochasticMatrix::implicit(a.order() * b.order(), [a, b, m, n](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    Eigen::MatrixXd X = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, m);  // column i = block i
    Eigen::MatrixXd Y(n, m);
    for (Eigen::Index i = 0; i < m; ++i) Y.col(i) = b.apply(Eigen::VectorXd(X.col(i)));
    Eigen::MatrixXd Z(n, m);
    for (Eigen::Index r = 0; r < n; ++r) Z.row(r) = a.apply(Eigen::VectorXd(Y.row(r).transpose())).transpose();
    y = Eigen::Map<Eigen::VectorXd>(Z.data(), m * n);
  });
}

}  // namespace expanders
