#pragma once
// Reference implementations used only by the tests. They work on dense
// matrices and explicit slot lists and share no code with the library
// beyond the graph container.

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "expanders/graph.hpp"
#include "expanders/products.hpp"

namespace oracle {

using expanders::RegularMultigraph;
using Eigen::MatrixXd;

inline MatrixXd mult_matrix(const RegularMultigraph& g) {
  MatrixXd E = MatrixXd::Zero(g.n(), g.n());
  for (const auto& e : g.edges()) {
    E(e.u, e.v) += static_cast<double>(e.m);
    if (e.u != e.v) E(e.v, e.u) += static_cast<double>(e.m);
  }
  return E;
}

inline MatrixXd walk_matrix(const RegularMultigraph& g) { return mult_matrix(g) / static_cast<double>(g.degree()); }

// Slots at u: neighbours repeated by multiplicity, sorted. The c-th copy of
// (u,v) at u is matched with the c-th copy of (v,u) at v.
struct Slots {
  std::vector<std::vector<std::size_t>> target;
  std::vector<std::vector<std::size_t>> mate;
};

inline Slots slots(const RegularMultigraph& g) {
  const std::size_t n = g.n();
  MatrixXd E = mult_matrix(g);
  Slots s;
  s.target.resize(n);
  s.mate.resize(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      for (int c = 0; c < static_cast<int>(E(u, v)); ++c) s.target[u].push_back(v);
  for (std::size_t u = 0; u < n; ++u) {
    s.mate[u].resize(s.target[u].size());
    for (std::size_t k = 0; k < s.target[u].size(); ++k) {
      const std::size_t v = s.target[u][k];
      std::size_t copy = 0;
      for (std::size_t j = 0; j < k; ++j) copy += s.target[u][j] == v;
      std::size_t seen = 0;
      for (std::size_t j = 0; j < s.target[v].size(); ++j)
        if (s.target[v][j] == u && seen++ == copy) s.mate[u][k] = j;
    }
  }
  return s;
}

// Exit map X[(w,b), v] = 1 when the slot of w labelled b leads to v.
inline MatrixXd exit_map(const RegularMultigraph& g1, const expanders::RotationLabeling& L) {
  const std::size_t n = g1.n(), d = g1.degree();
  Slots s = slots(g1);
  MatrixXd X = MatrixXd::Zero(n * d, n);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t k = 0; k < d; ++k) X(w * d + L.pi[w][k], s.target[w][k]) = 1;
  return X;
}

// Edge permutation P[(u,a),(v,b)] on the cloud vertices.
inline MatrixXd cloud_permutation(const RegularMultigraph& g1, const expanders::RotationLabeling& L) {
  const std::size_t n = g1.n(), d = g1.degree();
  Slots s = slots(g1);
  MatrixXd P = MatrixXd::Zero(n * d, n * d);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t v = s.target[u][k], k2 = s.mate[u][k];
      P(u * d + L.pi[u][k], v * d + L.pi[v][k2]) = 1;
    }
  return P;
}

inline MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd K(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) K.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return K;
}

inline std::vector<double> sorted_eigs(const MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (A + A.transpose()));
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

// Naive gamma_+ for a finite target: all pairs of maps V -> X, doubles.
inline double gamma_plus_naive(const RegularMultigraph& g, const MatrixXd& K, bool plus = true) {
  const std::size_t n = g.n(), X = static_cast<std::size_t>(K.rows());
  MatrixXd A = walk_matrix(g);
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= X;
  std::vector<std::size_t> f(n), h(n);
  double best = 1;
  auto decode = [&](std::size_t idx, std::vector<std::size_t>& out) {
    for (auto& x : out) {
      x = idx % X;
      idx /= X;
    }
  };
  for (std::size_t a = 0; a < total; ++a) {
    decode(a, f);
    for (std::size_t b = 0; b < (plus ? total : 1); ++b) {
      if (plus) decode(b, h);
      else h = f;
      double num = 0, den = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          num += K(f[i], h[j]) / static_cast<double>(n * n);
          den += A(i, j) * K(f[i], h[j]) / static_cast<double>(n);
        }
      if (num == 0) continue;
      if (den == 0) return std::numeric_limits<double>::infinity();
      best = std::max(best, num / den);
    }
  }
  return best;
}

}  // namespace oracle
