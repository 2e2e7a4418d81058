// ellq: batch front end. verify | spectrum | solve | thermo | bethe
// Output is one JSON document (stdout or --out), floats with 17 digits.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ellq/bethe.hpp"
#include "ellq/perturbative.hpp"
#include "ellq/report.hpp"
#include "ellq/suites.hpp"
#include "ellq/thermo.hpp"
#include "ellq/tropical.hpp"

using namespace ellq;

namespace {

struct RunConfig {
  std::string command;
  std::optional<int> N, m, n, D, K, state;
  std::optional<cplx> v, y, p, q, tau, eta;
  std::optional<double> tol;
  int bits = 53;
  std::uint64_t seed = 42;
  std::string out;
  bool serial = false;

  bool multiplicative() const { return v || p || q; }
  bool additive() const { return y || tau || eta; }
};

// "0.5", "0.5,0.1" or "(0.5,0.1)"
cplx parse_complex(std::string s) {
  for (char& c : s)
    if (c == '(' || c == ')') c = ' ';
  std::istringstream in(s);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(in >> re)) throw ConfigError("cannot parse number '" + s + "'");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw ConfigError("cannot parse complex '" + s + "'");
  }
  return {re, im};
}

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  throw ConfigError("complex value must be a number, [re, im] or a string");
}

void check_forms(const RunConfig& c, const char* where) {
  if (c.multiplicative() && c.additive())
    throw ConfigError(std::string(where) + ": multiplicative (v,p,q) and additive (y,tau,eta) parameters are exclusive");
}

RunConfig config_from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  RunConfig c;
  auto geti = [&](const char* k, std::optional<int>& dst) {
    if (j.contains(k)) dst = j[k].get<int>();
  };
  auto getc = [&](const char* k, std::optional<cplx>& dst) {
    if (j.contains(k)) dst = complex_from_json(j[k]);
  };
  geti("N", c.N);
  geti("m", c.m);
  geti("n", c.n);
  geti("order", c.D);
  geti("modes", c.K);
  geti("state", c.state);
  getc("v", c.v);
  getc("y", c.y);
  getc("p", c.p);
  getc("q", c.q);
  getc("tau", c.tau);
  getc("eta", c.eta);
  if (j.contains("tol")) c.tol = j["tol"].get<double>();
  if (j.contains("precision_bits")) c.bits = j["precision_bits"].get<int>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out")) c.out = j["out"].get<std::string>();
  check_forms(c, "config file");
  return c;
}

// raw flag storage; one instance shared by all subcommands
struct Flags {
  int N = 0, m = 0, n = 0, D = 0, K = 0, state = 0, bits = 53;
  std::string v, y, p, q, tau, eta, config, out;
  double tol = 0.0;
  std::uint64_t seed = 42;
  bool serial = false;
  std::vector<std::map<std::string, CLI::Option*>> per_sub;

  void attach(CLI::App* s) {
    auto& opt = per_sub.emplace_back();
    opt["N"] = s->add_option("--N", N, "chain length");
    opt["m"] = s->add_option("--m", m, "excitation level / spin-set m");
    opt["n"] = s->add_option("--n", n, "spin-set n");
    opt["order"] = s->add_option("--order", D, "perturbative order D");
    opt["modes"] = s->add_option("--modes", K, "Fourier modes K");
    opt["state"] = s->add_option("--state", state, "partition index");
    auto* ov = opt["v"] = s->add_option("--v", v, "v (re or re,im)");
    auto* op = opt["p"] = s->add_option("--p", p, "p (re or re,im)");
    auto* oq = opt["q"] = s->add_option("--q", q, "q (re or re,im)");
    auto* oy = opt["y"] = s->add_option("--y", y, "y, v = e^{2 pi i y}");
    auto* ot = opt["tau"] = s->add_option("--tau", tau, "tau, q = e^{2 pi i tau}");
    auto* oe = opt["eta"] = s->add_option("--eta", eta, "eta, p = e^{2 pi i eta}");
    for (auto* a : {ov, op, oq})
      for (auto* b : {oy, ot, oe}) a->excludes(b);
    opt["tol"] = s->add_option("--tol", tol, "residual tolerance");
    opt["bits"] = s->add_option("--precision-bits", bits, "working precision (53 = double)");
    opt["seed"] = s->add_option("--seed", seed, "RNG seed for random-point suites");
    opt["out"] = s->add_option("--out", out, "output file (default stdout)");
    opt["serial"] = s->add_flag("--serial", serial, "disable OpenMP paths");
    s->add_option("--config", config, "JSON config file; flags override it");
  }

  bool has(const char* k) const {
    for (const auto& o : per_sub)
      if (o.at(k)->count() > 0) return true;
    return false;
  }

  RunConfig merge(RunConfig c) const {
    const bool flag_mult = has("v") || has("p") || has("q");
    const bool flag_add = has("y") || has("tau") || has("eta");
    if (flag_mult) c.y = c.tau = c.eta = std::nullopt;
    if (flag_add) c.v = c.p = c.q = std::nullopt;
    if (has("N")) c.N = N;
    if (has("m")) c.m = m;
    if (has("n")) c.n = n;
    if (has("order")) c.D = D;
    if (has("modes")) c.K = K;
    if (has("state")) c.state = state;
    if (has("v")) c.v = parse_complex(v);
    if (has("p")) c.p = parse_complex(p);
    if (has("q")) c.q = parse_complex(q);
    if (has("y")) c.y = parse_complex(y);
    if (has("tau")) c.tau = parse_complex(tau);
    if (has("eta")) c.eta = parse_complex(eta);
    if (has("tol")) c.tol = tol;
    if (has("bits")) c.bits = bits;
    if (has("seed")) c.seed = seed;
    if (has("out")) c.out = out;
    if (serial) c.serial = true;
    check_forms(c, "flags");
    return c;
  }
};

struct Params {
  cplx v, p, q, y, tau, eta;
};

// multiplicative values, filling gaps from the defaults of the command
Params resolve(const RunConfig& c, cplx v0, cplx p0, cplx q0) {
  Params r;
  if (c.additive()) {
    r.y = c.y.value_or(log_mult(v0));
    r.tau = c.tau.value_or(log_mult(q0));
    r.eta = c.eta.value_or(log_mult(p0));
    r.v = expi2pi(r.y);
    r.q = expi2pi(r.tau);
    r.p = expi2pi(r.eta);
  } else {
    r.v = c.v.value_or(v0);
    r.p = c.p.value_or(p0);
    r.q = c.q.value_or(q0);
    r.y = log_mult(r.v);
    if (!(std::abs(r.q) < 1.0 && std::abs(r.p) < 1.0 && std::abs(r.p) > 0.0 && std::abs(r.q) > 0.0))
      throw ConfigError("need 0 < |p|, |q| < 1");
    r.tau = log_mult(r.q);
    r.eta = log_mult(r.p);
  }
  return r;
}

double real_only(cplx z, const char* name) {
  if (std::abs(z.imag()) > 1e-15 * std::max(1.0, std::abs(z)))
    throw RegimeError(std::string(name) + " must be real for the thermodynamic limit");
  return z.real();
}

json config_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  auto puti = [&](const char* k, const std::optional<int>& x) {
    if (x) j[k] = *x;
  };
  auto putc = [&](const char* k, const std::optional<cplx>& x) {
    if (x) j[k] = cjson(*x);
  };
  puti("N", c.N);
  puti("m", c.m);
  puti("n", c.n);
  puti("order", c.D);
  puti("modes", c.K);
  puti("state", c.state);
  putc("v", c.v);
  putc("p", c.p);
  putc("q", c.q);
  putc("y", c.y);
  putc("tau", c.tau);
  putc("eta", c.eta);
  if (c.tol) j["tol"] = *c.tol;
  j["precision_bits"] = c.bits;
  j["seed"] = c.seed;
  return j;
}

json envelope(const RunConfig& c, const Context& ctx) {
  json j;
  j["schema"] = kSchema;
  j["config"] = config_json(c);
  j["policy"] = policy_json(ctx.policy);
  j["precision"] = precision_json(ctx.precision);
  return j;
}

// double-only commands record the precision they actually ran at
Context double_context() { return Context{}; }

int cmd_verify(const RunConfig& c, json& out) {
  SuiteOptions so;
  so.seed = c.seed;
  so.parallel = !c.serial;
  so.ctx.precision.bits = c.bits;
  const double tol_e = c.tol.value_or(1e-12), tol_v = c.tol.value_or(1e-8), tol_l = c.tol.value_or(1e-12);

  out = envelope(c, so.ctx);
  json suites = json::array();
  std::vector<std::string> failed;
  auto run = [&](const char* name, const std::vector<ResidualReport>& reps, double tol) {
    json s;
    s["suite"] = name;
    s["tolerance"] = tol;
    json rr = json::array();
    for (const auto& r : reps) {
      json e = r.to_json();
      e["pass"] = r.below(tol);
      if (!r.below(tol)) failed.push_back(std::string(name) + "/" + r.relation);
      rr.push_back(e);
    }
    s["relations"] = rr;
    suites.push_back(s);
  };
  run("elliptic-kernel", elliptic_suite(so), tol_e);
  SuiteOptions sd = so;
  sd.ctx.precision.bits = 53;  // vertex-sos and Laplace run in double
  run("vertex-sos", vertex_sos_suite(sd), tol_v);
  run("laplace", laplace_suite(sd), tol_l);
  out["suites"] = suites;
  out["failed"] = failed;
  out["pass"] = failed.empty();
  for (const auto& f : failed) std::cerr << "FAILED relation: " << f << "\n";
  return failed.empty() ? 0 : 1;
}

int cmd_spectrum(const RunConfig& c, json& out) {
  const int N = c.N.value_or(2), m = c.m.value_or(1);
  const Params pr = resolve(c, 0.5, 0.2, 0.2);
  out = envelope(c, double_context());
  const RootSet roots = find_root_pairs(g_polynomial(m, N, pr.v));
  const auto states = enumerate_states(N, m, pr.v);
  out["spectrum"] = state_catalog_json(N, m, pr.v, states, roots);
  return 0;
}

int cmd_solve(const RunConfig& c, json& out) {
  const int N = c.N.value_or(2), m = c.m.value_or(0);
  const Params pr = resolve(c, 0.5, 0.11, 0.17);
  PerturbativeOptions opt;
  opt.D = c.D.value_or(6);
  opt.probe_p = std::abs(pr.p);
  opt.probe_q = std::abs(pr.q);
  opt.parallel = !c.serial;
  if (c.tol) opt.solve_tol = *c.tol;
  out = envelope(c, double_context());

  PerturbativeSolution sol;
  if (m == 0) {
    sol = solve_ground(N, pr.v, opt);
  } else {
    const auto states = enumerate_states(N, m, pr.v);
    const int idx = c.state.value_or(0);
    if (idx < 0 || std::size_t(idx) >= states.size())
      throw ConfigError("state index " + std::to_string(idx) + " out of range (" + std::to_string(states.size()) +
                        " states)");
    sol = solve_excited(states[std::size_t(idx)], opt);
  }
  json s = solution_json(sol);
  s["max_relative_residual"] = max_relative_residual(sol);
  try {
    const InducedTransfer it = induced_transfer(sol);
    s["induced_transfer"] = {{"degree", it.Dt},
                             {"symmetry_deviation", it.symmetry_deviation},
                             {"q_residual", it.q_residual},
                             {"p_residual", it.p_residual},
                             {"tropical_deviation", it.tropical_deviation}};
  } catch (const Error& e) {
    s["induced_transfer"] = {{"error", e.code()}, {"message", e.what()}};
  }
  const ConjectureReport cr = conjecture_scaling(sol);
  s["conjecture"] = {{"chi_degree", cr.chi_degree},
                     {"R0_degree", cr.R0_degree},
                     {"order", cr.order},
                     {"expected", cr.expected}};
  out["solution"] = s;
  return 0;
}

int cmd_thermo(const RunConfig& c, json& out) {
  const int N = c.N.value_or(4), K = c.K.value_or(12);
  const Params pr = resolve(c, 0.7, 0.2, 0.2);
  out = envelope(c, double_context());
  const Regime rg = regime(pr.v, pr.p, pr.q);
  out["regime"] = {{"applicable", rg.applicable}, {"v_in_range", rg.v_in_range}, {"ok", rg.ok()}};
  if (!rg.ok()) std::cerr << "warning: parameters outside sqrt(pq) < v < 1\n";

  ThermoOptions opt;
  opt.parallel = !c.serial;
  if (c.tol) opt.tol = *c.tol;
  const double v = real_only(pr.v, "v"), p = real_only(pr.p, "p"), q = real_only(pr.q, "q");
  const ThermoSolution s = delta_f_solve(N, v, p, q, K, opt);
  std::vector<cplx> us;
  for (double u : {1.0, 1.0 / std::sqrt(p * q)})
    if (rg.contains(u)) us.push_back(u);
  json t = thermo_json(s, us);
  // outside the regime these checks may leave the annulus; report instead of failing the run
  auto guarded = [&](const char* key, auto f) {
    try {
      t[key] = f();
    } catch (const Error& e) {
      t[key] = {{"error", e.code()}, {"message", e.what()}};
    }
  };
  guarded("liouville_residual", [&] { return thermo_liouville_residual(s, 64); });
  guarded("reconstruction_excess", [&] { return thermo_reconstruction_excess(s); });
  out["thermo"] = t;
  return 0;
}

int cmd_bethe(const RunConfig& c, json& out) {
  const int N = c.N.value_or(2);
  SpinSet s{c.m.value_or(1), c.n.value_or(0)};
  // defaults: tau = 0.6i, eta = 0.13 + 0.07i
  const Params pr = resolve(c, 1.0, expi2pi({0.13, 0.07}), expi2pi({0.0, 0.6}));
  const ModularData md = spin_modular(s, pr.tau, pr.eta);
  out = envelope(c, double_context());
  if (c.v || c.y) std::cerr << "note: v is fixed by the spin set; the given value is ignored\n";

  BetheOptions opt;
  opt.parallel = !c.serial;
  const auto sols = bethe_solve(s, N, md, opt);
  std::vector<TqCheck> checks;
  json extra = json::array();
  for (const auto& r : sols) {
    checks.push_back(q_factorized_tq_check(r, s, N, md));
    json e;
    e["tq_residual"] = checks.back().fresh_residual;
    e["period_residual"] = checks.back().period_residual;
    if (s.n == 0) {
      const EquivalenceReport eq = q_equivalence_baxter(r, N, md);
      json xi = json::array();
      for (auto z : eq.xi) xi.push_back(cjson(z));
      e["theta_product"] = {{"fitted", eq.fitted}, {"xi", xi}, {"k", eq.k}, {"deviation", eq.deviation}};
    }
    extra.push_back(e);
  }
  json b = bethe_json(s, N, sols, checks);
  for (std::size_t i = 0; i < extra.size(); ++i) b["solutions"][i]["checks"] = extra[i];
  b["tau"] = cjson(md.tau);
  b["eta"] = cjson(md.eta);
  b["v"] = cjson(md.v);
  out["bethe"] = b;
  return 0;
}

void emit(const json& j, const std::string& path) {
  const std::string text = dump17(j) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ellq: elliptic TQ / Liouville numerics"};
  app.require_subcommand(1);
  Flags flags;
  std::map<std::string, CLI::App*> subs;
  for (const char* name : {"verify", "spectrum", "solve", "thermo", "bethe"}) {
    subs[name] = app.add_subcommand(name);
  }
  subs["verify"]->description("identity suites of the special functions and the vertex/SOS layer");
  subs["spectrum"]->description("tropical state catalog");
  subs["solve"]->description("perturbative Liouville solution");
  subs["thermo"]->description("thermodynamic limit");
  subs["bethe"]->description("special spin set: Bethe roots and TQ check");
  for (auto& [name, s] : subs) {
    (void)name;
    flags.attach(s);
  }
  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  std::string out_path;
  try {
    if (!flags.config.empty()) cfg = config_from_file(flags.config);
    cfg = flags.merge(cfg);
    out_path = cfg.out;
    for (auto& [name, s] : subs)
      if (s->parsed()) cfg.command = name;
  } catch (const Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 2;
  }

  json out;
  int rc = 0;
  try {
    if (cfg.command == "verify") rc = cmd_verify(cfg, out);
    else if (cfg.command == "spectrum") rc = cmd_spectrum(cfg, out);
    else if (cfg.command == "solve") rc = cmd_solve(cfg, out);
    else if (cfg.command == "thermo") rc = cmd_thermo(cfg, out);
    else rc = cmd_bethe(cfg, out);
  } catch (const Error& e) {
    if (out.is_null()) out = envelope(cfg, double_context());
    out["error"] = {{"code", e.code()}, {"message", e.what()}};
    if (const auto* r = dynamic_cast<const ResonanceError*>(&e)) out["error"]["at"] = {r->i, r->j};
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    rc = 3;
  }
  try {
    emit(out, out_path);
  } catch (const Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
