#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <string>

#include "graph.hpp"

namespace expanders {

inline constexpr double kGapFloor = 1e-9;

struct SpectralOptions {
  std::size_t dense_threshold = kDenseThreshold;
  double tolerance = 1e-8;       // residual ||A y - theta y|| for the extreme Ritz pairs
  std::size_t max_matvecs = 0;   // 0: 10 n log n
  std::size_t basis = 64;        // Krylov basis size before restart
  std::size_t keep = 24;         // Ritz vectors kept across a restart
  std::uint64_t seed = 1;
  bool force_iterative = false;
};

struct SpectralReport {
  std::size_t order = 0;
  std::optional<mult_t> degree;
  double lambda2 = 0;
  double lambda_min = 0;
  double lambda_abs = 0;
  double gamma_euclid = 1;
  double gamma_plus_euclid = 1;
  std::string method;  // "dense" | "iterative"
  double residual = 0;
  std::size_t matvecs = 0;
};

inline double gamma_from_lambda(double lambda) {
  const double gap = 1.0 - lambda;
  return gap < kGapFloor ? kInf : 1.0 / gap;
}

// Full spectrum in descending order.
inline std::vector<double> eigenvalues_dense(const StochasticMatrix& a,
                                             std::size_t dense_threshold = kDenseThreshold) {
  if (a.order() > dense_threshold)
    throw TooLarge("order " + std::to_string(a.order()) + " exceeds dense threshold " + std::to_string(dense_threshold));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NoConvergence(0, kInf);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

inline EigenPairs eigenpairs_dense(const StochasticMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.matrix());
  if (es.info() != Eigen::Success) throw NoConvergence(0, kInf);
  return {es.eigenvalues(), es.eigenvectors()};
}

struct RitzResult {
  double value = 0;
  double residual = 0;
  Eigen::VectorXd vector;
  std::size_t matvecs = 0;
};

namespace detail {
inline void deflate(Eigen::VectorXd& v) { v.array() -= v.mean(); }
}  // namespace detail

// Largest eigenvalue of sign*A on the mean-zero subspace, by Lanczos with
// full reorthogonalisation and thick restarts keeping the top Ritz vectors.
inline RitzResult top_eigen_mean_zero(const StochasticMatrix& a, double sign, const SpectralOptions& opt) {
  const std::size_t n = a.order();
  if (n < 2) return {0.0, 0.0, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)), 0};
  const std::size_t cap =
      opt.max_matvecs ? opt.max_matvecs
                      : static_cast<std::size_t>(10.0 * static_cast<double>(n) * std::max(1.0, std::log(static_cast<double>(n))));
  const std::size_t m = std::min(opt.basis, n - 1);
  const std::size_t keep = std::min(opt.keep, m > 1 ? m - 1 : 0);
  const auto N = static_cast<Eigen::Index>(n);

  Eigen::MatrixXd V(N, static_cast<Eigen::Index>(m + 1));
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXd v0(N);
  for (Eigen::Index i = 0; i < N; ++i) v0[i] = nd(rng);
  detail::deflate(v0);
  V.col(0) = v0.normalized();

  std::size_t matvecs = 0, start = 0;
  Eigen::VectorXd w, ay;
  while (true) {
    std::size_t size = m;
    bool invariant = false;
    for (std::size_t j = start; j < m; ++j) {
      const auto J = static_cast<Eigen::Index>(j);
      a.apply(V.col(J), w);
      ++matvecs;
      w *= sign;
      detail::deflate(w);
      auto basis = V.leftCols(J + 1);
      Eigen::VectorXd h = basis.transpose() * w;
      w.noalias() -= basis * h;
      Eigen::VectorXd h2 = basis.transpose() * w;
      w.noalias() -= basis * h2;
      h += h2;
      H.col(J).head(J + 1) = h;
      H.row(J).head(J + 1) = h.transpose();
      const double beta = w.norm();
      if (beta < 1e-13) {
        size = j + 1;
        invariant = true;
        break;
      }
      V.col(J + 1) = w / beta;
    }
    const auto S = static_cast<Eigen::Index>(size);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.topLeftCorner(S, S));
    // descending order
    Eigen::VectorXd theta = es.eigenvalues().reverse();
    Eigen::MatrixXd Y = es.eigenvectors().rowwise().reverse();
    Eigen::VectorXd y = V.leftCols(S) * Y.col(0);
    y.normalize();
    a.apply(y, ay);
    ++matvecs;
    ay *= sign;
    detail::deflate(ay);
    const double rq = y.dot(ay);
    const double res = (ay - rq * y).norm();
    if (res <= opt.tolerance || invariant) {
      if (res > opt.tolerance) throw NoConvergence(matvecs, res);
      return {rq, res, y, matvecs};
    }
    if (matvecs >= cap) throw NoConvergence(matvecs, res);
    // Thick restart: [Ritz vectors 0..keep-1, residual direction].
    const auto K = static_cast<Eigen::Index>(keep);
    Eigen::MatrixXd kept = V.leftCols(S) * Y.leftCols(K);
    Eigen::VectorXd next = V.col(S);
    V.leftCols(K) = kept;
    // Re-orthonormalise the kept block against drift.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(V.leftCols(K));
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(N, K);
    V.leftCols(K) = Q;
    for (int pass = 0; pass < 2; ++pass) next -= V.leftCols(K) * (V.leftCols(K).transpose() * next);
    V.col(K) = next.normalized();
    H.setZero();
    Eigen::MatrixXd AK(N, K);
    // Rayleigh quotient block for the kept vectors, computed explicitly.
    for (Eigen::Index c = 0; c < K; ++c) {
      a.apply(V.col(c), w);
      ++matvecs;
      w *= sign;
      detail::deflate(w);
      AK.col(c) = w;
    }
    Eigen::MatrixXd HK = V.leftCols(K).transpose() * AK;
    H.topLeftCorner(K, K) = 0.5 * (HK + HK.transpose());
    start = keep;
  }
}

inline SpectralReport spectral_report(const StochasticMatrix& a, const SpectralOptions& opt = {}) {
  SpectralReport r;
  r.order = a.order();
  if (a.order() == 1) {
    r.method = "dense";
    return r;
  }
  if (!opt.force_iterative && a.is_dense() && a.order() <= opt.dense_threshold) {
    auto ev = eigenvalues_dense(a, opt.dense_threshold);
    r.lambda2 = ev[1];
    r.lambda_min = ev.back();
    r.method = "dense";
  } else {
    auto top = top_eigen_mean_zero(a, 1.0, opt);
    SpectralOptions o2 = opt;
    o2.seed = opt.seed + 1;
    auto bottom = top_eigen_mean_zero(a, -1.0, o2);
    r.lambda2 = top.value;
    r.lambda_min = -bottom.value;
    r.residual = std::max(top.residual, bottom.residual);
    r.matvecs = top.matvecs + bottom.matvecs;
    r.method = "iterative";
  }
  r.lambda_abs = std::max(std::abs(r.lambda2), std::abs(r.lambda_min));
  r.gamma_euclid = gamma_from_lambda(r.lambda2);
  r.gamma_plus_euclid = gamma_from_lambda(r.lambda_abs);
  return r;
}

inline SpectralReport spectral_report(const RegularMultigraph& g, const SpectralOptions& opt = {}) {
  SpectralReport r = spectral_report(normalized_adjacency(g, opt.force_iterative ? 0 : opt.dense_threshold), opt);
  r.degree = g.degree();
  return r;
}

inline double lambda_abs(const StochasticMatrix& a, const SpectralOptions& opt = {}) {
  return spectral_report(a, opt).lambda_abs;
}
inline double lambda2(const StochasticMatrix& a, const SpectralOptions& opt = {}) {
  return spectral_report(a, opt).lambda2;
}
inline double gamma_euclid(const StochasticMatrix& a, const SpectralOptions& opt = {}) {
  return spectral_report(a, opt).gamma_euclid;
}
inline double gamma_plus_euclid(const StochasticMatrix& a, const SpectralOptions& opt = {}) {
  return spectral_report(a, opt).gamma_plus_euclid;
}
inline double gamma_plus_euclid(const RegularMultigraph& g, const SpectralOptions& opt = {}) {
  return spectral_report(g, opt).gamma_plus_euclid;
}
inline double gamma_euclid(const RegularMultigraph& g, const SpectralOptions& opt = {}) {
  return spectral_report(g, opt).gamma_euclid;
}

// (1 + 4/(1-lambda))^p
inline double bound_norm_to_poincare(double lambda_p, double p) {
  if (!(lambda_p >= 0 && lambda_p < 1)) throw InvalidInput("bound_norm_to_poincare needs 0 <= lambda < 1");
  if (p < 1) throw InvalidInput("bound_norm_to_poincare needs p >= 1");
  return std::pow(1.0 + 4.0 / (1.0 - lambda_p), p);
}

// (1 - 1/((2^{p-1}-1) K^p gamma_plus))^{1/p}
inline double bound_poincare_to_norm(double gamma_plus, double p, double K_p) {
  if (!(gamma_plus >= 1) || p < 2 || K_p < 1) throw InvalidInput("bound_poincare_to_norm needs gamma+ >= 1, p >= 2, K_p >= 1");
  if (std::isinf(gamma_plus)) return 1.0;
  return std::pow(1.0 - 1.0 / ((std::pow(2.0, p - 1) - 1.0) * std::pow(K_p, p) * gamma_plus), 1.0 / p);
}

// (4K)^{p^2} max{1, (gamma_plus/t)^p}
inline double bound_power_decay(double gamma_plus, unsigned t, double p, double K_p) {
  if (!(gamma_plus >= 1) || t < 1 || p < 2 || K_p < 1) throw InvalidInput("bound_power_decay domain violation");
  return std::pow(4.0 * K_p, p * p) * std::max(1.0, std::pow(gamma_plus / t, p));
}

}  // namespace expanders
