#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>

#include "products.hpp"
#include "random.hpp"
#include "spectral.hpp"

namespace expanders {

using BigInt = boost::multiprecision::cpp_int;

// Spectral data for one stage; construction continues if the solver fails.
struct StageSpectrum {
  bool available = false;
  std::size_t vertices = 0;
  mult_t degree = 0;
  double lambda_abs = 0;
  double gamma_plus = 1;
  std::string method;
  double residual = 0;
  std::string error;
};

inline StageSpectrum measure(const RegularMultigraph& g, const SpectralOptions& opt = {}) {
  StageSpectrum s;
  s.vertices = g.n();
  s.degree = g.degree();
  try {
    auto r = spectral_report(g, opt);
    s.available = true;
    s.lambda_abs = r.lambda_abs;
    s.gamma_plus = r.gamma_plus_euclid;
    s.method = r.method;
    s.residual = r.residual;
  } catch (const NoConvergence& e) {
    s.error = e.what();
  }
  return s;
}

inline StageSpectrum unmeasured(const RegularMultigraph& g) {
  StageSpectrum s;
  s.vertices = g.n();
  s.degree = g.degree();
  return s;
}

// lhs <= rhs within an absolute/relative tolerance; inf <= inf holds.
inline bool chain_holds(double lhs, double rhs, double tol) {
  if (std::isinf(rhs)) return true;
  if (std::isinf(lhs)) return false;
  return lhs <= rhs + tol * std::max(1.0, rhs);
}

inline constexpr double kChainTolerance = 1e-7;

struct PipelineConfig {
  RegularMultigraph G0 = identity_graph(1);
  unsigned t = 2;
  unsigned j_max = 3;
  bool random_labels = false;
  std::uint64_t seed = 1;
  bool spectra = true;
  SpectralOptions spectral;
};

// t * d^{2(t-1)} <= m, with m = |V(G0)| and d = degree(G0).
inline void validate(const PipelineConfig& c) {
  if (c.t < 1 || c.j_max < 1) throw InvalidInput("pipeline needs t >= 1 and j_max >= 1");
  const BigInt lhs = BigInt(c.t) * boost::multiprecision::pow(BigInt(c.G0.degree()), 2 * (c.t - 1));
  if (lhs > c.G0.n())
    throw InvalidInput("pipeline needs t*d^(2(t-1)) <= m; got " + lhs.str() + " > " + std::to_string(c.G0.n()));
}

struct StepRecord {
  unsigned j = 0;
  StageSpectrum graph;
  std::optional<StageSpectrum> cesaro;      // A_t(F_{j-1})
  std::optional<StageSpectrum> completion;  // C_m(A_t(F_{j-1}))
  double chain_bound = kInf;                // 2 gamma_+(A_t F_{j-1}) gamma_+(G0)^2
  std::optional<bool> chain_ok;
};

struct IterationTrace {
  StageSpectrum g0;
  std::vector<StepRecord> steps;
  std::vector<std::string> notes;
};

struct InitialResult {
  std::vector<RegularMultigraph> graphs;  // F_1..F_{j_max}
  IterationTrace trace;
};

// F_1 = C_{d^2}(G0); F_{j+1} = C_m(A_t(F_j)) zigzag G0.
inline InitialResult initial_iteration(const PipelineConfig& cfg) {
  validate(cfg);
  const RegularMultigraph& G0 = cfg.G0;
  const mult_t d = G0.degree(), m = G0.n();
  InitialResult out;
  if (cfg.spectra) out.trace.g0 = measure(G0, cfg.spectral);
  out.graphs.push_back(edge_completion(G0, checked_mul(d, d)));
  {
    StepRecord r;
    r.j = 1;
    if (cfg.spectra) r.graph = measure(out.graphs.back(), cfg.spectral);
    else r.graph = unmeasured(out.graphs.back());
    out.trace.steps.push_back(r);
  }
  for (unsigned j = 2; j <= cfg.j_max; ++j) {
    const RegularMultigraph& prev = out.graphs.back();
    RegularMultigraph at = cesaro_graph(prev, cfg.t);
    RegularMultigraph comp = edge_completion(at, m);
    RotationLabeling L = cfg.random_labels ? random_labeling(comp, G0, cfg.seed + j) : default_labeling(comp, G0);
    RegularMultigraph next = zigzag(comp, G0, L);
    if (next.n() != prev.n() * m || next.degree() != d * d)
      throw InvalidInput("internal: F_j has unexpected size or degree");
    StepRecord r;
    r.j = j;
    if (cfg.spectra) {
      r.cesaro = measure(at, cfg.spectral);
      r.completion = measure(comp, cfg.spectral);
      r.graph = measure(next, cfg.spectral);
      if (r.cesaro->available && out.trace.g0.available && r.graph.available) {
        r.chain_bound = 2 * r.cesaro->gamma_plus * out.trace.g0.gamma_plus * out.trace.g0.gamma_plus;
        r.chain_ok = chain_holds(r.graph.gamma_plus, r.chain_bound, kChainTolerance);
      }
    } else {
      r.graph = unmeasured(next);
    }
    out.trace.steps.push_back(r);
    out.graphs.push_back(std::move(next));
  }
  if (cfg.t == 1) out.trace.notes.push_back("t=1: A_1 is the identity graph, so each completion is all loops");
  return out;
}

// ---------------------------------------------------------------------------
// Main iteration schedule

// M_k = (2k^3)^k
inline BigInt M_default(unsigned k) { return boost::multiprecision::pow(BigInt(2) * k * k * k, k); }

struct Family {
  mult_t degree = 0;           // d_k
  std::vector<BigInt> sizes;   // n_1(k) < n_2(k) < ...
};

struct ScheduleStep {
  unsigned i = 0;
  unsigned h = 0;           // h_i(k)
  unsigned partner_j = 0;   // W_h = F_{j(h)}(h)
  BigInt completion;        // n_{j(h)}(h)
  BigInt cesaro;            // M_h
  BigInt degree_after;      // M_h d_h^{2(M_h - 1)}
};

struct Schedule {
  unsigned k = 0;
  std::map<unsigned, BigInt> M;     // M_h used, after overrides
  std::map<unsigned, unsigned> j;   // j(h) for h <= k
  std::vector<unsigned> h;          // h_0 = k > h_1 > ... > h_l = 1
  std::vector<ScheduleStep> steps;  // l entries
  BigInt start_vertices;            // n_{j(k)}(k)
  BigInt final_vertices;
  bool overridden = false;
};

namespace detail {
inline BigInt M_value(unsigned k, const std::map<unsigned, BigInt>& ov, Schedule& s) {
  if (auto it = ov.find(k); it != ov.end()) {
    s.overridden = true;
    s.M[k] = it->second;
    return it->second;
  }
  BigInt v = M_default(k);
  s.M[k] = v;
  return v;
}

inline BigInt walk_degree(const BigInt& M, mult_t d) {
  if (M > 1000000 && d > 1) throw Overflow("Cesaro degree M d^{2(M-1)} too large to tabulate");
  return M * boost::multiprecision::pow(BigInt(d), 2 * (static_cast<unsigned>(M) - 1));
}
}  // namespace detail

// families[k-1] describes F_j(k); degrees of families up to k+1 are needed
// for j(k), so families.size() >= k + 1 (only the degree of the last is used).
inline Schedule main_iteration_bookkeeping(const std::vector<Family>& families, unsigned k,
                                           const std::map<unsigned, BigInt>& M_override = {}) {
  if (k < 1) throw InvalidInput("k must be >= 1");
  if (families.size() < k + 1) throw InvalidInput("need the degree of family k+1");
  for (unsigned h = 1; h <= k; ++h) {
    const auto& s = families[h - 1].sizes;
    for (std::size_t i = 1; i < s.size(); ++i)
      if (!(s[i] > s[i - 1])) throw InvalidInput("family sizes must be strictly increasing");
  }
  Schedule sc;
  sc.k = k;
  const mult_t d1 = families[0].degree;
  for (unsigned h = 1; h <= k; ++h) {
    const BigInt Mn = detail::M_value(h + 1, M_override, sc);
    const BigInt thr = 2 * BigInt(d1) * d1 + detail::walk_degree(Mn, families[h].degree);
    const auto& s = families[h - 1].sizes;
    unsigned jj = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] > thr) {
        jj = static_cast<unsigned>(i + 1);
        break;
      }
    if (jj == 0) throw InvalidInput("schedule infeasible: no n_j(" + std::to_string(h) + ") exceeds " + thr.str());
    sc.j[h] = jj;
  }
  auto n_of = [&](unsigned h) { return families[h - 1].sizes[sc.j[h] - 1]; };
  sc.h.push_back(k);
  sc.start_vertices = n_of(k);
  BigInt vertices = sc.start_vertices;
  BigInt need = families[k - 1].degree;  // degree of W^0
  while (sc.h.back() > 1) {
    unsigned hi = 0;
    for (unsigned h = 1; h <= k; ++h)
      if (n_of(h) >= need) {
        hi = h;
        break;
      }
    if (hi == 0 || hi >= sc.h.back())
      throw InvalidInput("schedule infeasible under overrides: h sequence not strictly decreasing");
    ScheduleStep st;
    st.i = static_cast<unsigned>(sc.h.size());
    st.h = hi;
    st.partner_j = sc.j[hi];
    st.completion = n_of(hi);
    st.cesaro = detail::M_value(hi, M_override, sc);
    st.degree_after = detail::walk_degree(st.cesaro, families[hi - 1].degree);
    vertices *= st.completion;
    sc.steps.push_back(st);
    sc.h.push_back(hi);
    need = st.degree_after;
  }
  sc.final_vertices = vertices;
  if (sc.steps.size() > k) throw InvalidInput("internal: l(k) > k");
  return sc;
}

struct MainStepRecord {
  unsigned i = 0;
  StageSpectrum graph;
  double crude_bound = kInf;  // 2 k2 gamma_+(W^{i-1}) gamma_+(F)^2
  std::optional<bool> crude_ok;
};

struct MainResult {
  RegularMultigraph H = identity_graph(1);
  std::vector<MainStepRecord> trace;
  std::vector<std::string> notes;
};

// Euclid calculus constant k2 = (45 C)^q with C = 32, q = 2.
inline constexpr double kEuclidK2 = (45.0 * 32.0) * (45.0 * 32.0);

// supplier(h, j) returns F_j(h). W^i = A_M(C_n(W^{i-1}) zigzag W_h).
template <class Supplier>
MainResult main_iteration_build(const Schedule& sc, Supplier&& supplier, bool spectra = true,
                                const SpectralOptions& opt = {}) {
  MainResult out;
  RegularMultigraph W = supplier(sc.k, sc.j.at(sc.k));
  StageSpectrum prev;
  if (spectra) prev = measure(W, opt);
  out.trace.push_back({0, spectra ? prev : unmeasured(W), kInf, std::nullopt});
  if (sc.overridden) out.notes.push_back("M_k overridden; true values (2k^3)^k are not buildable");
  for (const auto& st : sc.steps) {
    RegularMultigraph partner = supplier(st.h, st.partner_j);
    if (BigInt(partner.n()) != st.completion) throw InvalidInput("supplier returned a graph of the wrong size");
    if (st.cesaro > 64) throw Overflow("Cesaro parameter too large to build");
    RegularMultigraph comp = edge_completion(W, static_cast<mult_t>(st.completion));
    RegularMultigraph z = zigzag(comp, partner, default_labeling(comp, partner));
    RegularMultigraph next = cesaro_graph(z, static_cast<unsigned>(st.cesaro));
    if (BigInt(next.degree()) != st.degree_after) throw InvalidInput("internal: degree differs from schedule");
    MainStepRecord r;
    r.i = st.i;
    if (spectra) {
      r.graph = measure(next, opt);
      StageSpectrum f = measure(partner, opt);
      if (r.graph.available && prev.available && f.available) {
        r.crude_bound = 2 * kEuclidK2 * prev.gamma_plus * f.gamma_plus * f.gamma_plus;
        r.crude_ok = chain_holds(r.graph.gamma_plus, r.crude_bound, kChainTolerance);
      }
      prev = r.graph;
    } else {
      r.graph = unmeasured(next);
    }
    out.trace.push_back(r);
    W = std::move(next);
  }
  out.H = std::move(W);
  return out;
}

// ---------------------------------------------------------------------------
// Degree-3 reduction: (H zigzag C_d^o) replacement C_9

struct ThreeRegular {
  RegularMultigraph graph = identity_graph(1);
  mult_t input_degree = 0;
  bool completed_to_three = false;  // d < 3: H replaced by C_3(H) first
};

inline ThreeRegular three_regularize(const RegularMultigraph& H) {
  ThreeRegular out;
  out.input_degree = H.degree();
  RegularMultigraph h = H;
  if (h.degree() < 3) {
    h = edge_completion(h, 3);
    out.completed_to_three = true;
  }
  const std::size_t d = h.degree();
  RegularMultigraph cd = cycle_with_loops(d);
  RegularMultigraph z = zigzag(h, cd, default_labeling(h, cd));  // 9-regular
  RegularMultigraph c9 = cycle(9);
  out.graph = replacement(z, c9, default_labeling(z, c9));
  return out;
}

struct ThreeRegularChain {
  StageSpectrum H, Cd, C9, result;
  double bound = kInf;  // 9 gamma_+(H) gamma_+(C_d^o)^2 gamma_+(C_9)^2
  std::optional<bool> ok;
};

inline ThreeRegularChain three_regularize_chain(const RegularMultigraph& H, const ThreeRegular& r,
                                                const SpectralOptions& opt = {}) {
  ThreeRegularChain c;
  const RegularMultigraph h = r.completed_to_three ? edge_completion(H, 3) : H;
  c.H = measure(h, opt);
  c.Cd = measure(cycle_with_loops(h.degree()), opt);
  c.C9 = measure(cycle(9), opt);
  c.result = measure(r.graph, opt);
  if (c.H.available && c.Cd.available && c.C9.available && c.result.available) {
    c.bound = 9 * c.H.gamma_plus * c.Cd.gamma_plus * c.Cd.gamma_plus * c.C9.gamma_plus * c.C9.gamma_plus;
    c.ok = chain_holds(c.result.gamma_plus, c.bound, kChainTolerance);
  }
  return c;
}

}  // namespace expanders
