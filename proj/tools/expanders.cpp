// Command-line front end. Graph outputs are edge lists (text) or a JSON graph
// object (--format json); reports are JSON or plain text.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "expanders/verify.hpp"

using namespace expanders;
using nlohmann::json;

namespace {

constexpr const char* kGraphSchema = "expanders.graph/1";
constexpr const char* kReportSchema = "expanders.report/1";

struct Common {
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "text";
};

json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json ext(const ExtRational& r) {
  if (r.infinite) return json{{"infinite", true}, {"value", "inf"}};
  return json{{"infinite", false}, {"value", r.value.str()}, {"approx", r.approx()}};
}

void write_out(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw InvalidInput("cannot open output file '" + c.out + "'");
  f << text;
}

json graph_json(const RegularMultigraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v, e.m});
  return json{{"schema", kGraphSchema}, {"n", g.n()}, {"degree", g.degree()}, {"edges", edges}};
}

void emit_graph(const Common& c, const RegularMultigraph& g) {
  if (c.format == "json") write_out(c, graph_json(g).dump(2) + "\n");
  else write_out(c, to_edge_list(g));
}

// Accepts the edge-list format or a JSON graph object.
RegularMultigraph load_graph(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open graph file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  const auto p = text.find_first_not_of(" \t\r\n");
  if (p != std::string::npos && text[p] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(1, e.what());
    }
    if (j.value("schema", "") != kGraphSchema) throw ParseError(1, "unknown graph schema");
    std::vector<Edge> es;
    for (const auto& e : j.at("edges")) es.push_back({e.at(0).get<vid_t>(), e.at(1).get<vid_t>(), e.at(2).get<mult_t>()});
    RegularMultigraph g = build_graph(j.at("n").get<std::size_t>(), es);
    if (g.degree() != j.at("degree").get<mult_t>()) throw ParseError(1, "declared degree differs from the graph");
    return g;
  }
  return from_edge_list(text);
}

LinearCode load_code(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open code file '" + path + "'");
  return read_code(f);
}

// Prints a flat report: JSON object, or "key: value" lines.
void emit_report(const Common& c, const json& j) {
  if (c.format == "json") {
    json o = j;
    o["schema"] = kReportSchema;
    write_out(c, o.dump(2) + "\n");
    return;
  }
  std::ostringstream os;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it->is_string()) os << it.key() << ": " << it->get<std::string>() << '\n';
    else os << it.key() << ": " << it->dump() << '\n';
  }
  write_out(c, os.str());
}

json spectral_json(const SpectralReport& r) {
  return json{{"order", r.order},
              {"degree", r.degree ? json(*r.degree) : json(nullptr)},
              {"lambda2", num(r.lambda2)},
              {"lambda_min", num(r.lambda_min)},
              {"lambda_abs", num(r.lambda_abs)},
              {"gamma_euclid", num(r.gamma_euclid)},
              {"gamma_plus_euclid", num(r.gamma_plus_euclid)},
              {"method", r.method},
              {"residual", num(r.residual)},
              {"matvecs", r.matvecs}};
}

json stage_json(const StageSpectrum& s) {
  json j{{"vertices", s.vertices}, {"degree", s.degree}, {"available", s.available}};
  if (s.available) {
    j["lambda_abs"] = num(s.lambda_abs);
    j["gamma_plus"] = num(s.gamma_plus);
    j["method"] = s.method;
    j["residual"] = num(s.residual);
  } else if (!s.error.empty()) {
    j["error"] = s.error;
  }
  return j;
}

FiniteMetric finite_kernel(const std::string& name, double p) {
  if (name == "2pt") return two_point_metric(p);
  if (name == "3pt") return three_point_metric(p);
  throw InvalidInput("finite kernel must be 2pt or 3pt");
}

// ---------------------------------------------------------------------------
// Subcommand handlers

void cmd_build(const Common& c, const std::string& type, std::size_t n, std::size_t d) {
  RegularMultigraph g = identity_graph(1);
  if (type == "cycle") g = cycle(n);
  else if (type == "cycle-loops") g = cycle_with_loops(n);
  else if (type == "complete-loops") g = complete_with_loops(n);
  else if (type == "identity") g = identity_graph(n);
  else if (type == "random") g = random_regular(n, d, c.seed);
  else if (type == "expander") g = random_expander(n, d, c.seed);
  else throw InvalidInput("unknown graph type '" + type + "'");
  emit_graph(c, g);
}

void cmd_product(const Common& c, const std::string& kind, const std::string& f1, const std::string& f2,
                 const std::string& labeling) {
  RegularMultigraph g1 = load_graph(f1), g2 = load_graph(f2);
  if (kind == "tensor") {
    emit_graph(c, tensor_graph(g1, g2));
    return;
  }
  RotationLabeling L = labeling == "random" ? random_labeling(g1, g2, c.seed) : default_labeling(g1, g2);
  if (kind == "zigzag") emit_graph(c, zigzag(g1, g2, L));
  else if (kind == "replacement") emit_graph(c, replacement(g1, g2, L));
  else if (kind == "balanced") emit_graph(c, balanced_replacement(g1, g2, L));
  else if (kind == "square") emit_graph(c, derandomized_square(g1, g2, L));
  else throw InvalidInput("unknown product '" + kind + "'");
}

void cmd_spectrum(const Common& c, const std::string& f, bool iterative, double tol) {
  RegularMultigraph g = load_graph(f);
  SpectralOptions opt;
  opt.force_iterative = iterative;
  opt.tolerance = tol;
  opt.seed = c.seed;
  json j = spectral_json(spectral_report(g, opt));
  j["connected"] = is_connected(g);
  j["bipartite"] = is_bipartite(g);
  emit_report(c, j);
}

void cmd_poincare(const Common& c, const std::string& f, const std::string& kernel, double p, bool plain,
                  const std::string& method, std::uint64_t cap, std::uint64_t budget) {
  RegularMultigraph g = load_graph(f);
  json j{{"kernel", kernel}, {"p", p}, {"quantity", plain ? "gamma" : "gamma_plus"}};
  if (kernel == "euclid") {
    j["value"] = num(plain ? gamma_euclid(g) : gamma_plus_euclid(g));
    j["method"] = "spectral";
  } else if (kernel == "2pt" || kernel == "3pt") {
    FiniteMetric K = finite_kernel(kernel, p);
    OracleMethod m = method == "full" ? OracleMethod::Full : method == "separable" ? OracleMethod::Separable
                                                                                   : OracleMethod::Auto;
    if (method != "auto" && method != "full" && method != "separable") throw InvalidInput("unknown oracle method");
    OracleResult r = plain ? gamma_bruteforce(g, K, cap) : gamma_plus_bruteforce(g, K, cap, m);
    j["value"] = ext(r.value);
    j["method"] = r.method;
    j["evaluated"] = r.evaluated;
    j["witness_f"] = r.f;
    j["witness_g"] = r.g;
  } else if (kernel == "lp" || kernel == "loglinf") {
    if (plain) throw InvalidInput("search covers gamma_plus only");
    KernelSpec K = kernel == "lp" ? KernelSpec{LpPower{1, p}} : KernelSpec{LogLinf{1, p}};
    SearchResult s = gamma_plus_search(normalized_adjacency(g), K, budget, c.seed);
    j["lower_bound"] = num(s.lower_bound);
    j["evaluations"] = s.evaluations;
    j["method"] = "search";
  } else {
    throw InvalidInput("unknown kernel '" + kernel + "'");
  }
  emit_report(c, j);
}

void cmd_cotype(const Common& c, const std::string& f, unsigned m, std::size_t dim, double p, double q, double K) {
  RegularMultigraph g = load_graph(f);
  CotypeParams prm{p, q, K, m};
  validate(prm);
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(g.n()), static_cast<Eigen::Index>(dim));
  for (Eigen::Index a = 0; a < x.rows(); ++a)
    for (Eigen::Index b = 0; b < x.cols(); ++b) x(a, b) = nd(rng);
  auto r = check_cotype(normalized_adjacency(g), x, prm, p);
  json j{{"m", m},           {"dim", dim},           {"p", p},          {"q", q},
         {"K_p", K},         {"displacement", num(r.displacement)}, {"edge_term", num(r.edge_term)},
         {"rhs", num(r.rhs)}, {"slack", num(r.slack)}, {"holds", r.holds}};
  if (r.has_combined) {
    j["combined_lhs"] = num(r.combined_lhs);
    j["combined_rhs"] = num(r.combined_rhs);
    j["combined_holds"] = r.combined_holds;
  }
  emit_report(c, j);
}

json code_json(const LinearCode& k) {
  return json{{"n", k.n},
              {"dim", k.dim()},
              {"min_distance", k.min_distance ? json(*k.min_distance) : json(nullptr)},
              {"meets_tenth_thresholds", k.meets_tenth_thresholds()},
              {"tries", k.tries}};
}

void write_code_out(const Common& c, const LinearCode& k) {
  std::ostringstream os;
  write_code(k, os);
  if (c.format == "json") {
    json j = code_json(k);
    j["code"] = os.str();
    emit_report(c, j);
  } else {
    write_out(c, os.str());
  }
}

void cmd_base_graph(const Common& c, double t, const std::string& tau, std::size_t n, const std::string& code,
                    bool weights, bool estimates) {
  if (estimates) {
    auto r = tau_estimates_check(t, n);
    emit_report(c, json{{"t", num(r.t)},
                        {"n", r.n},
                        {"tau", num(r.tau)},
                        {"useful1_lower", num(r.useful1_lower)},
                        {"useful1_upper", num(r.useful1_upper)},
                        {"useful1_ok", r.useful1_ok},
                        {"useful2_even", num(r.useful2_even)},
                        {"useful2_odd", num(r.useful2_odd)},
                        {"useful2_ok", r.useful2_ok_all_s}});
    return;
  }
  HeatParams hp;
  if (!tau.empty()) {
    const auto slash = tau.find('/');
    if (slash == std::string::npos) throw InvalidInput("--tau must be p/q");
    hp = HeatParams::from_tau(std::stoull(tau.substr(0, slash)), std::stoull(tau.substr(slash + 1)), n);
  } else {
    hp = HeatParams::from_t(t, n);
  }
  if (weights) {
    json e = json::array();
    for (const auto& v : e_t_n_table(hp)) e.push_back(v.str());
    emit_report(c, json{{"n", n}, {"tau", num(hp.tau())}, {"log_sigma", num(hp.log_sigma())}, {"e", e},
                        {"degree", heat_degree(hp).str()}});
    return;
  }
  if (!code.empty()) emit_graph(c, quotient_heat_graph(hp, load_code(code)));
  else emit_graph(c, heat_graph(hp));
}

// key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInput("cannot open config '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t ln = 0;
  while (std::getline(f, line)) {
    ++ln;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(ln, "expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void cmd_pipeline(const Common& c, const std::string& cfg_path) {
  auto kv = read_config(cfg_path);
  static const std::set<std::string> known = {"g0", "g0_random_n", "g0_random_d", "t", "j_max",
                                              "random_labels", "spectra", "three_regularize", "seed"};
  for (const auto& [k, v] : kv)
    if (!known.count(k)) throw InvalidInput("unknown config key '" + k + "'");
  auto get_bool = [&](const std::string& k, bool def) {
    if (!kv.count(k)) return def;
    if (kv[k] == "true" || kv[k] == "1") return true;
    if (kv[k] == "false" || kv[k] == "0") return false;
    throw InvalidInput("config key '" + k + "' must be true or false");
  };
  auto get_u = [&](const std::string& k, std::uint64_t def) {
    return kv.count(k) ? detail::parse_u64(kv[k], 0) : def;
  };
  PipelineConfig pc;
  pc.seed = get_u("seed", c.seed);
  if (kv.count("g0")) {
    std::filesystem::path p = kv["g0"];
    if (p.is_relative()) p = std::filesystem::path(cfg_path).parent_path() / p;
    pc.G0 = load_graph(p.string());
  } else if (kv.count("g0_random_n") && kv.count("g0_random_d")) {
    pc.G0 = random_expander(get_u("g0_random_n", 0), get_u("g0_random_d", 0), pc.seed);
  } else {
    throw InvalidInput("config needs g0 or g0_random_n and g0_random_d");
  }
  pc.t = static_cast<unsigned>(get_u("t", 2));
  pc.j_max = static_cast<unsigned>(get_u("j_max", 3));
  pc.random_labels = get_bool("random_labels", false);
  pc.spectra = get_bool("spectra", true);
  pc.spectral.seed = pc.seed;
  auto res = initial_iteration(pc);
  json steps = json::array();
  for (const auto& s : res.trace.steps) {
    json j{{"j", s.j}, {"graph", stage_json(s.graph)}};
    if (s.cesaro) j["cesaro"] = stage_json(*s.cesaro);
    if (s.completion) j["completion"] = stage_json(*s.completion);
    if (s.chain_ok) {
      j["chain_bound"] = num(s.chain_bound);
      j["chain_ok"] = *s.chain_ok;
    }
    steps.push_back(j);
  }
  json out{{"g0", stage_json(res.trace.g0)}, {"t", pc.t}, {"j_max", pc.j_max}, {"steps", steps},
           {"notes", res.trace.notes}};
  bool ok = true;
  for (const auto& s : res.trace.steps) ok = ok && s.chain_ok.value_or(true);
  if (get_bool("three_regularize", false) && res.graphs.size() >= 2) {
    auto tr = three_regularize(res.graphs[1]);
    SpectralOptions it;
    it.force_iterative = true;
    it.seed = pc.seed;
    out["three_regular_F2"] = stage_json(measure(tr.graph, it));
    out["three_regular_F2"]["connected"] = is_connected(tr.graph);
  }
  out["chain_ok"] = ok;
  emit_report(c, out);
  if (!ok) throw Error("proof-chain inequality violated", 1);
}

void cmd_verify(const Common& c, VerifySuiteConfig cfg) {
  cfg.seed = c.seed;
  SuiteReport r = run_verify(cfg);
  if (c.format == "json") {
    json inst = json::array();
    for (const auto& i : r.instances)
      inst.push_back({{"id", i.id}, {"anchor", i.anchor}, {"seed", i.seed}, {"lhs", num(i.lhs)}, {"rhs", num(i.rhs)},
                      {"slack", num(i.slack)}, {"pass", i.pass}, {"detail", i.detail}});
    json info = json::object();
    for (const auto& [k, v] : r.info) info[k] = v;
    json j{{"schema", kReportSchema}, {"suite", r.suite},      {"seed", cfg.seed},
           {"pass", r.pass()},        {"checks", r.instances.size()}, {"failures", r.failures()},
           {"min_slack", num(r.min_slack())}, {"anchors", r.anchors()}, {"info", info}, {"instances", inst}};
    if (!r.table.empty()) j["table"] = json{{"header", r.table_header}, {"rows", r.table}};
    write_out(c, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "suite " << r.suite << " seed " << cfg.seed << ": " << (r.pass() ? "PASS" : "FAIL") << " checks "
       << r.instances.size() << " failures " << r.failures() << " min_slack " << detail::fmt(r.min_slack()) << '\n';
    for (const auto& i : r.instances)
      if (!i.pass)
        os << "  FAIL " << i.id << " [" << i.anchor << "] lhs " << detail::fmt(i.lhs) << " rhs " << detail::fmt(i.rhs)
           << " reproduce: expanders verify --suite " << r.suite << " --seed " << cfg.seed
           << (cfg.count ? " --count " + std::to_string(cfg.count) : std::string()) << " (instance seed " << i.seed
           << ")" << (i.detail.empty() ? "" : " " + i.detail) << '\n';
    for (const auto& [k, v] : r.info) os << "  " << k << " = " << v << '\n';
    if (!r.table.empty()) {
      for (const auto& h : r.table_header) os << h << '\t';
      os << '\n';
      for (const auto& row : r.table) {
        for (const auto& x : row) os << x << '\t';
        os << '\n';
      }
    }
    write_out(c, os.str());
  }
  if (!r.pass()) throw Error("verification failed", 1);
}

void cmd_nondecay(const Common& c, std::size_t n_min, std::size_t n_max, std::size_t d, std::vector<unsigned> ts) {
  if (n_min < 4 || n_max < n_min) throw InvalidInput("need 4 <= n-min <= n-max");
  std::ostringstream csv;
  csv << "n,t,degree,diameter,lower_bound_G,lower_bound_A_t,loglog_sq\n";
  json rows = json::array();
  for (unsigned t : ts)
    for (std::size_t n = n_min; n <= n_max; n *= 2) {
      auto r = nondecay_experiment(random_expander(n, d, c.seed + n), t);
      csv << r.n << ',' << r.t << ',' << r.degree << ',' << r.diameter << ',' << detail::fmt(r.lower_bound_G) << ','
          << detail::fmt(r.lower_bound_At) << ',' << detail::fmt(r.loglog_sq) << '\n';
      rows.push_back({{"n", r.n}, {"t", r.t}, {"degree", r.degree}, {"diameter", num(r.diameter)},
                      {"lower_bound_G", num(r.lower_bound_G)}, {"lower_bound_A_t", num(r.lower_bound_At)},
                      {"loglog_sq", num(r.loglog_sq)}});
    }
  if (c.format == "json") emit_report(c, json{{"rows", rows}});
  else write_out(c, csv.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regular multigraphs, graph products and Poincare-constant checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_option("--out", c.out, "output file (default stdout)");
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();

  std::function<void()> action;

  auto* build = app.add_subcommand("build", "construct a graph");
  std::string btype;
  std::size_t bn = 0, bd = 3;
  build->add_option("type", btype, "cycle | cycle-loops | complete-loops | identity | random | expander")->required();
  build->add_option("-n,--n", bn, "vertices")->required();
  build->add_option("-d,--d", bd, "degree for random types")->capture_default_str();
  build->callback([&] { action = [&] { cmd_build(c, btype, bn, bd); }; });

  auto* product = app.add_subcommand("product", "graph product of two edge lists");
  std::string pkind, pf1, pf2, plab = "default";
  product->add_option("kind", pkind, "zigzag | replacement | balanced | square | tensor")->required()
      ->check(CLI::IsMember({"zigzag", "replacement", "balanced", "square", "tensor"}));
  product->add_option("g1", pf1)->required();
  product->add_option("g2", pf2)->required();
  product->add_option("--labeling", plab)->check(CLI::IsMember({"default", "random"}))->capture_default_str();
  product->callback([&] { action = [&] { cmd_product(c, pkind, pf1, pf2, plab); }; });

  auto* power = app.add_subcommand("power", "t-th power");
  std::string gf;
  unsigned tpow = 2;
  power->add_option("graph", gf)->required();
  power->add_option("-t,--t", tpow)->required();
  power->callback([&] { action = [&] { emit_graph(c, graph_power(load_graph(gf), tpow)); }; });

  auto* ces = app.add_subcommand("cesaro", "Cesaro average graph");
  unsigned mces = 1;
  ces->add_option("graph", gf)->required();
  ces->add_option("-m,--m", mces)->required();
  ces->callback([&] { action = [&] { emit_graph(c, cesaro_graph(load_graph(gf), mces)); }; });

  auto* comp = app.add_subcommand("complete", "edge completion to degree D");
  mult_t Dcomp = 0;
  comp->add_option("graph", gf)->required();
  comp->add_option("-D,--D", Dcomp)->required();
  comp->callback([&] { action = [&] { emit_graph(c, edge_completion(load_graph(gf), Dcomp)); }; });

  auto* spec = app.add_subcommand("spectrum", "spectral report");
  bool iterative = false;
  double stol = 1e-8;
  spec->add_option("graph", gf)->required();
  spec->add_flag("--iterative", iterative, "force the Lanczos path");
  spec->add_option("--tol", stol)->capture_default_str();
  spec->callback([&] { action = [&] { cmd_spectrum(c, gf, iterative, stol); }; });

  auto* poin = app.add_subcommand("poincare", "Poincare constants of a graph");
  std::string kernel = "euclid", omethod = "auto";
  double kp = 1;
  bool plain = false;
  std::uint64_t cap = kDefaultCap, budget = 20000;
  poin->add_option("graph", gf)->required();
  poin->add_option("--kernel", kernel, "euclid | 2pt | 3pt | lp | loglinf")->capture_default_str();
  poin->add_option("--p", kp, "kernel power")->capture_default_str();
  poin->add_flag("--gamma", plain, "one-sided constant instead of gamma_plus");
  poin->add_option("--method", omethod, "oracle: auto | full | separable")->capture_default_str();
  poin->add_option("--cap", cap, "oracle enumeration cap")->capture_default_str();
  poin->add_option("--budget", budget, "search evaluations (lp, loglinf)")->capture_default_str();
  poin->callback([&] { action = [&] { cmd_poincare(c, gf, kernel, kp, plain, omethod, cap, budget); }; });

  auto* cot = app.add_subcommand("cotype", "metric Markov cotype check on random points");
  unsigned cm = 2;
  std::size_t cdim = 5;
  double cp = 2, cq = 2, cK = 1;
  cot->add_option("graph", gf)->required();
  cot->add_option("-m,--m", cm)->capture_default_str();
  cot->add_option("--dim", cdim)->capture_default_str();
  cot->add_option("--p", cp)->capture_default_str();
  cot->add_option("--q", cq)->capture_default_str();
  cot->add_option("--K", cK)->capture_default_str();
  cot->callback([&] { action = [&] { cmd_cotype(c, gf, cm, cdim, cp, cq, cK); }; });

  auto* code = app.add_subcommand("code", "binary linear codes");
  code->require_subcommand(1);
  auto* cgen = code->add_subcommand("gen", "generate a code");
  std::size_t cn = 8, cD = 4, cmin = 0;
  std::string preset;
  std::uint64_t tries = 100000;
  cgen->add_option("--n", cn)->capture_default_str();
  cgen->add_option("--D", cD)->capture_default_str();
  cgen->add_option("--min-dist", cmin)->capture_default_str();
  cgen->add_option("--preset", preset, "repetition | parity | hamming8");
  cgen->add_option("--max-tries", tries)->capture_default_str();
  cgen->callback([&] {
    action = [&] {
      LinearCode k;
      if (preset == "repetition") k = repetition_code(cn);
      else if (preset == "parity") k = parity_code(cn);
      else if (preset == "hamming8") k = hamming8_code();
      else if (preset.empty()) k = random_code(cn, cD, cmin, c.seed, tries);
      else throw InvalidInput("unknown preset '" + preset + "'");
      write_code_out(c, k);
    };
  });
  std::string cfile;
  auto* cver = code->add_subcommand("verify", "recompute the minimum distance");
  cver->add_option("file", cfile)->required();
  cver->callback([&] { action = [&] { emit_report(c, code_json(load_code(cfile))); }; });
  auto* cdual = code->add_subcommand("dual", "dual code");
  cdual->add_option("file", cfile)->required();
  cdual->callback([&] { action = [&] { write_code_out(c, verified(dual(load_code(cfile)))); }; });

  auto* base = app.add_subcommand("base-graph", "discretised hypercube heat graph");
  double bt = 0;
  std::string btau, bcode;
  std::size_t bnn = 4;
  bool bweights = false, best = false;
  auto* topt = base->add_option("--t", bt, "time parameter");
  auto* tauopt = base->add_option("--tau", btau, "tau as p/q");
  topt->excludes(tauopt);
  base->add_option("--n", bnn)->capture_default_str();
  base->add_option("--code", bcode, "quotient by the dual of this code");
  base->add_flag("--weights", bweights, "print e_t^n(k) and the degree");
  base->add_flag("--estimates", best, "binomial-sum checks (needs --t)");
  base->callback([&] { action = [&] { cmd_base_graph(c, bt, btau, bnn, bcode, bweights, best); }; });

  auto* pipe = app.add_subcommand("pipeline", "initial iteration from a key=value config");
  std::string pcfg;
  pipe->add_option("config", pcfg)->required();
  pipe->callback([&] { action = [&] { cmd_pipeline(c, pcfg); }; });

  auto* ver = app.add_subcommand("verify", "run an inequality battery");
  VerifySuiteConfig vc;
  std::string suites_help = "one of:";
  for (const auto& s : suite_names()) suites_help += " " + s;
  ver->add_option("--suite", vc.suite, suites_help)->required();
  ver->add_option("--count", vc.count, "instances (0: suite default)")->capture_default_str();
  ver->add_option("--tolerance", vc.tolerance)->capture_default_str();
  ver->add_option("--K", vc.K_p, "cotype target constant")->capture_default_str();
  ver->add_flag("--corrupt", vc.corrupt, "harness self-test: force every check to fail");
  ver->callback([&] { action = [&] { cmd_verify(c, vc); }; });

  auto* nd = app.add_subcommand("nondecay-demo", "lower bounds for snowflaked shortest-path embeddings");
  std::size_t nmin = 64, nmax = 1024, ndeg = 3;
  std::vector<unsigned> nts = {2, 4};
  nd->add_option("--n-min", nmin)->capture_default_str();
  nd->add_option("--n-max", nmax)->capture_default_str();
  nd->add_option("--d", ndeg)->capture_default_str();
  nd->add_option("--t", nts)->capture_default_str();
  nd->callback([&] { action = [&] { cmd_nondecay(c, nmin, nmax, ndeg, nts); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (action) action();
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
