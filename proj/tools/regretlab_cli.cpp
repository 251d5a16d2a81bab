#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "regretlab/error.hpp"
#include "regretlab/game.hpp"
#include "regretlab/graph.hpp"
#include "regretlab/io.hpp"
#include "regretlab/pde.hpp"
#include "regretlab/playsim.hpp"
#include "regretlab/strategylp.hpp"
#include "regretlab/sweep.hpp"

using namespace regretlab;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string config_path;
  std::string out = ".";
  std::uint64_t seed = 1;
  int threads = 1;
};

// Flag values win over the config file.
struct Options {
  std::optional<int> d;
  std::optional<std::string> experts_file;
  std::string gamma_list;
  std::optional<std::string> eps;
  std::optional<int> N;
  std::optional<double> T, t0, t, C;
  bool classic = false;
  std::optional<std::string> data;
  std::vector<double> probe;
  std::vector<double> start;
  std::string side = "both";
  bool closed_form = false;
  std::optional<std::string> xi_axis;
  std::optional<std::string> investor, market;
  std::optional<double> fixed_f;
  std::optional<std::string> mode;
};

Json load_config(const Globals& g) {
  if (g.config_path.empty()) return Json::object();
  std::ifstream in(g.config_path);
  if (!in) throw ValidationError("cannot open config file '" + g.config_path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("config '" + g.config_path + "' is not valid JSON: " + e.what());
  }
}

template <class T>
T pick(const std::optional<T>& flag, const Json& cfg, const char* key, T fallback) {
  if (flag) return *flag;
  if (cfg.contains(key)) return cfg[key].get<T>();
  return fallback;
}

ExpertPair default_experts(int d, std::uint64_t seed) {
  if (d == 1) return ExpertPair::validate({0.5, 0.2}, {-0.3, -0.2});
  return random_pair(d, seed, 0.8);
}

ExpertPair resolve_experts(const Options& o, const Json& cfg, const Globals& g) {
  if (!o.gamma_list.empty()) {
    // Experts with q = -r = sqrt(gamma) / 2 realise the given gamma.
    std::vector<double> q, r;
    for (double gm : parse_fraction_list(o.gamma_list)) {
      if (!(gm >= 0 && gm < 4)) throw BoundViolation("gamma(m) = (q - r)^2 must lie in [0, 4)");
      q.push_back(std::sqrt(gm) / 2);
      r.push_back(-std::sqrt(gm) / 2);
    }
    return ExpertPair::validate(q, r);
  }
  if (o.experts_file) {
    std::ifstream in(*o.experts_file);
    if (!in) throw ValidationError("cannot open experts file '" + *o.experts_file + "'");
    return experts_from_json(Json::parse(in));
  }
  if (cfg.contains("experts")) return experts_from_json(cfg["experts"]);
  int d = pick(o.d, cfg, "d", 1);
  if (d < 1) throw ValidationError("depth d >= 1 required");
  return default_experts(d, g.seed);
}

double lp_value(const ExpertPair& e, LpSide side) {
  DeBruijnGraph g(e.depth());
  auto lp = build_lp(e, enumerate_simple_cycles(g), side);
  return solve(lp).M;
}

std::vector<double> investor_beta(const ExpertPair& e) {
  if (e.depth() <= 4) return indifference_closed_form(e).beta;
  DeBruijnGraph g(e.depth());
  return solve(build_lp(e, enumerate_simple_cycles(g), LpSide::Investor)).beta;
}

FinalData resolve_data(const Options& o, const Json& cfg, double C) {
  if (o.classic) return FinalData::classic();
  if (o.data) return final_data_from_json(Json{{"kind", *o.data}}, C);
  if (cfg.contains("final_data")) return final_data_from_json(cfg["final_data"], C);
  return FinalData::classic();
}

double resolve_eps(const Options& o, const Json& cfg, const char* fallback) {
  if (o.eps) return parse_fraction(*o.eps);
  if (cfg.contains("epsilon")) {
    const auto& v = cfg["epsilon"];
    return v.is_string() ? parse_fraction(v.get<std::string>()) : v.get<double>();
  }
  return parse_fraction(fallback);
}

GameStart resolve_start(const Options& o, const Json& cfg) {
  GameStart s;
  if (!o.start.empty()) {
    if (o.start.size() != 3) throw ValidationError("--start takes m xi eta");
    s.m = static_cast<State>(o.start[0]);
    s.xi = o.start[1];
    s.eta = o.start[2];
  } else if (cfg.contains("start")) {
    s.m = cfg["start"].value("m", 0u);
    s.xi = cfg["start"].value("xi", 0.0);
    s.eta = cfg["start"].value("eta", 0.0);
  }
  return s;
}

fs::path out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out);
  return fs::path(g.out) / name;
}

void write_json(const fs::path& p, const Json& j) {
  std::ofstream f(p);
  f << j.dump(2) << '\n';
}

void write_manifest(const Globals& g, RunManifest m) {
  m.outputs.push_back(m.command + ".manifest.json");
  write_json(out_path(g, m.command + ".manifest.json"), m.to_json());
}

Json echo_config(const Json& cfg, const ExpertPair& e, const FinalData& data, double C) {
  Json j = cfg;
  j["experts"] = experts_json(e);
  j["final_data"] = final_data_json(data);
  j["C"] = C;
  return j;
}

int cmd_cycles(const Globals& g, const Options& o, const Json& cfg) {
  int d = pick(o.d, cfg, "d", 1);
  int bound = cfg.value("depth_bound", kDefaultMaxCycleDepth);
  if (d < 1) throw ValidationError("depth d >= 1 required");
  DeBruijnGraph graph(d);
  auto j = cycles_json(d, enumerate_simple_cycles(graph, bound));
  std::string name = "cycles_d" + std::to_string(d) + ".json";
  j["manifest"] = "cycles.manifest.json";
  write_json(out_path(g, name), j);
  RunManifest m{"cycles", Json{{"d", d}, {"depth_bound", bound}}, {}, {name}};
  write_manifest(g, m);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_lp(const Globals& g, const Options& o, const Json& cfg) {
  auto e = resolve_experts(o, cfg, g);
  DeBruijnGraph graph(e.depth());
  auto cycles = enumerate_simple_cycles(graph);
  Json out;
  out["experts"] = experts_json(e);
  out["gamma"] = gamma(e).values();
  out["mean_gamma"] = gamma(e).mean();
  if (o.closed_form) {
    auto sol = indifference_closed_form(e);
    out["closed_form"] = lp_json(sol, build_lp(e, cycles, LpSide::Investor));
  } else {
    std::vector<LpSide> sides;
    if (o.side == "investor" || o.side == "both") sides.push_back(LpSide::Investor);
    if (o.side == "market" || o.side == "both") sides.push_back(LpSide::Market);
    if (sides.empty()) throw ValidationError("--side must be investor, market or both");
    for (auto side : sides) {
      auto lp = build_lp(e, cycles, side);
      out[to_string(side)] = lp_json(solve(lp), lp);
    }
    if (sides.size() == 2) {
      out["gap"] = out["investor"]["M"].get<double>() - out["market"]["M"].get<double>();
    }
  }
  out["manifest"] = "lp.manifest.json";
  write_json(out_path(g, "lp.json"), out);
  write_manifest(g, {"lp", echo_config(cfg, e, FinalData::classic(), 0), {g.seed}, {"lp.json"}});
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_pde(const Globals& g, const Options& o, const Json& cfg) {
  auto e = resolve_experts(o, cfg, g);
  double C = pick(o.C, cfg, "C", std::numeric_limits<double>::quiet_NaN());
  if (std::isnan(C)) C = lp_value(e, LpSide::Investor);
  double T = pick(o.T, cfg, "T", 1.0);
  double t = pick(o.t, cfg, "t", 0.0);
  auto data = resolve_data(o, cfg, C);
  auto sol = make_pde_solution(data, C, T);

  std::vector<std::array<double, 2>> pts;
  if (!o.probe.empty()) {
    if (o.probe.size() % 2) throw ValidationError("--probe takes xi eta pairs");
    for (std::size_t i = 0; i < o.probe.size(); i += 2) pts.push_back({o.probe[i], o.probe[i + 1]});
  } else {
    for (int i = -8; i <= 8; ++i) pts.push_back({0.25 * i, 0.0});
  }
  auto path = out_path(g, "pde.csv");
  std::ofstream f(path);
  CsvWriter w(f, {"t", "xi", "eta", "u", "u_t", "u_xi", "u_eta", "D"});
  std::ostringstream echo;
  CsvWriter we(echo, {"t", "xi", "eta", "u", "u_t", "u_xi", "u_eta", "D"});
  for (auto [xi, eta] : pts) {
    auto p = sol->evaluate(t, xi, eta);
    for (auto* cw : {&w, &we}) {
      *cw << t << xi << eta << p.u << p.u_t << p.u_xi << p.u_eta << p.D;
      cw->end_row();
    }
  }
  write_manifest(g, {"pde", echo_config(cfg, e, data, C), {}, {"pde.csv"}});
  std::cout << echo.str();
  return 0;
}

GridOptions resolve_grid(const Options& o, const Json& cfg, const Globals& g) {
  GridOptions go;
  go.threads = g.threads;
  Json gj = cfg.value("grid", Json::object());
  go.xi_step = gj.value("xi_step", 0.0);
  go.eta_step = gj.value("eta_step", 0.0);
  go.xi_halfwidth = gj.value("xi_halfwidth", 0.0);
  go.eta_halfwidth = gj.value("eta_halfwidth", 0.0);
  std::string axis = o.xi_axis ? *o.xi_axis : gj.value("xi_axis", std::string("auto"));
  if (axis == "auto") go.xi_axis = XiAxis::Auto;
  else if (axis == "lattice") go.xi_axis = XiAxis::Lattice;
  else if (axis == "interpolated") go.xi_axis = XiAxis::Interpolated;
  else if (axis == "tree") go.xi_axis = XiAxis::Tree;
  else throw ValidationError("xi axis must be auto, lattice, interpolated or tree");
  return go;
}

int cmd_value(const Globals& g, const Options& o, const Json& cfg) {
  auto e = resolve_experts(o, cfg, g);
  double C = lp_value(e, LpSide::Investor);
  auto data = resolve_data(o, cfg, C);
  double eps = resolve_eps(o, cfg, "1/8");
  double t0 = pick(o.t0, cfg, "t0", 0.0);
  double T = pick(o.T, cfg, "T", 1.0);
  if (o.N || cfg.contains("N")) {
    int N = pick(o.N, cfg, "N", 0);
    if (N < 0) throw ValidationError("N >= 0 required");
    T = t0 + N * eps * eps;
  }
  GameConfig gc(e, eps, T, t0, data);
  auto grid = resolve_grid(o, cfg, g);
  grid.xi0 = resolve_start(o, cfg).xi;
  grid.eta0 = resolve_start(o, cfg).eta;
  auto v = data.kind() == FinalKind::General ? dpp_value_general(gc, grid)
                                             : dpp_value_separable(gc, grid);
  {
    std::ofstream f(out_path(g, "value_k0.csv"));
    write_value_csv(f, v, 0);
  }
  auto start = resolve_start(o, cfg);
  Json summary{{"N", gc.steps()},          {"epsilon", eps},
               {"xi_axis", v.xi_axis},     {"interpolation", v.interpolation},
               {"xi_step", v.xi_step},     {"eta_step", v.eta_step},
               {"start", {start.m, start.xi, start.eta}},
               {"value", v.initial_value(start.m, start.xi, start.eta)}};
  if (data.kind() != FinalKind::General && gc.steps() > 0) {
    summary["u"] = make_pde_solution(data, C, T)->value(t0, start.xi, start.eta);
  }
  RunManifest m{"value", echo_config(cfg, e, data, C), {}, {"value_k0.csv"}};
  m.extra["grid"] = summary;
  write_manifest(g, m);
  std::cout << summary.dump(2) << '\n';
  return 0;
}

struct SimSetup {
  PdePtr sol;
  std::vector<double> beta;
  double gamma = 0;
  bool tau_scaled = false;
  double delta = 0;
};

// Classic data is played through the time-shifted solution with
// delta = 2 eps^2 and a threshold scaled by (T - t + delta)^{-1/2}.
SimSetup sim_setup(const ExpertPair& e, const FinalData& data, double C, double eps,
                   double t0, double T) {
  SimSetup s;
  s.beta = investor_beta(e);
  GammaOptions go;
  if (data.kind() == FinalKind::Classic) {
    s.delta = 2 * eps * eps;
    s.sol = classic_solution(C, T, s.delta);
    go.tau_scaled = s.tau_scaled = true;
    go.tau_shift = s.delta;
  } else {
    s.sol = make_pde_solution(data, C, T);
  }
  s.gamma = compute_gamma(*s.sol, e, s.beta, gamma_grid(t0, T, 2, -1, 1), go).gamma;
  return s;
}

InvestorPolicy make_investor(const std::string& kind, const SimSetup& s,
                             std::optional<double> f, std::uint64_t seed) {
  if (kind == "pde_guided") return InvestorPolicy::pde_guided(s.sol, s.beta);
  if (kind == "fixed") return InvestorPolicy::fixed(f.value_or(0));
  if (kind == "perturbed") return InvestorPolicy::perturbed(s.sol, s.beta, 0, 1, seed);
  throw ValidationError("investor must be pde_guided, fixed or perturbed");
}

MarketPolicy make_market(const std::string& kind, const SimSetup& s, std::uint64_t seed) {
  if (kind == "random") return MarketPolicy::random(seed);
  if (kind == "forcing") {
    return s.tau_scaled ? MarketPolicy::forcing_tau_scaled(s.sol, s.beta, s.gamma, s.delta)
                        : MarketPolicy::forcing(s.sol, s.beta, s.gamma);
  }
  throw ValidationError("market must be forcing or random");
}

int cmd_simulate(const Globals& g, const Options& o, const Json& cfg) {
  auto e = resolve_experts(o, cfg, g);
  double C = lp_value(e, LpSide::Investor);
  auto data = resolve_data(o, cfg, C);
  double eps = resolve_eps(o, cfg, "1/16");
  double t0 = pick(o.t0, cfg, "t0", 0.0), T = pick(o.T, cfg, "T", 1.0);
  GameConfig gc(e, eps, T, t0, data);
  auto s = sim_setup(e, data, C, eps, t0, T);
  std::string ik = pick(o.investor, cfg, "investor", std::string("pde_guided"));
  std::string mk = pick(o.market, cfg, "market", std::string("forcing"));
  auto start = resolve_start(o, cfg);
  auto tr = run_game(gc, start, make_investor(ik, s, o.fixed_f, g.seed), make_market(mk, s, g.seed));
  {
    std::ofstream f(out_path(g, "trajectory.csv"));
    write_trajectory_csv(f, tr);
  }
  double u = make_pde_solution(data, C, T)->value(t0, start.xi, start.eta);
  Json summary{{"N", gc.steps()},
               {"epsilon", eps},
               {"final_regret", tr.final_regret},
               {"u", u},
               {"clamp_events", tr.clamp_events},
               {"gamma", s.gamma}};
  RunManifest m{"simulate", echo_config(cfg, e, data, C), {g.seed}, {"trajectory.csv"}};
  m.extra["epsilon"] = eps;
  m.extra["policies"] = {{"investor", tr.investor}, {"market", tr.market}};
  m.extra["gamma"] = {{"value", s.gamma}, {"tau_scaled", s.tau_scaled}, {"delta", s.delta}};
  write_manifest(g, m);
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int cmd_sweep(const Globals& g, const Options& o, const Json& cfg) {
  auto e = resolve_experts(o, cfg, g);
  double C = lp_value(e, LpSide::Investor);
  auto data = resolve_data(o, cfg, C);
  std::vector<double> eps;
  if (o.eps) {
    eps = parse_fraction_list(*o.eps);
  } else if (cfg.contains("eps_list")) {
    for (const auto& v : cfg["eps_list"]) {
      eps.push_back(v.is_string() ? parse_fraction(v.get<std::string>()) : v.get<double>());
    }
  } else {
    eps = parse_fraction_list("1/16,1/32,1/64");
  }
  std::sort(eps.begin(), eps.end(), std::greater<>());
  double t0 = pick(o.t0, cfg, "t0", 0.0), T = pick(o.T, cfg, "T", 1.0);
  SweepSpec spec{e, data, T, t0, resolve_start(o, cfg), make_pde_solution(data, C, T)};
  spec.grid = resolve_grid(o, cfg, g);
  std::string mode = pick(o.mode, cfg, "mode", std::string("value"));
  if (mode == "simulate") {
    spec.mode = SweepMode::Simulate;
    std::string ik = pick(o.investor, cfg, "investor", std::string("pde_guided"));
    std::string mk = pick(o.market, cfg, "market", std::string("forcing"));
    spec.policies = [&, ik, mk](double ep) {
      auto s = sim_setup(e, data, C, ep, t0, T);
      return std::pair{make_investor(ik, s, o.fixed_f, g.seed), make_market(mk, s, g.seed)};
    };
  } else if (mode != "value") {
    throw ValidationError("sweep mode must be value or simulate");
  }
  auto rows = sweep_epsilon(spec, eps);
  {
    std::ofstream f(out_path(g, "sweep.csv"));
    write_sweep_csv(f, rows);
  }
  write_sweep_csv(std::cout, rows);
  RunManifest m{"sweep", echo_config(cfg, e, data, C), {g.seed}, {"sweep.csv"}};
  m.extra["mode"] = mode;
  write_manifest(g, m);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regretlab: expert-advice regret games, their PDE limits and simulations"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  Options o;
  app.add_option("--config", g.config_path, "JSON config file");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--seed", g.seed, "Base seed");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);

  auto common = [&](CLI::App* c) {
    c->add_option("--d", o.d, "History depth");
    c->add_option("--experts", o.experts_file, "Experts JSON {q, r}");
    c->add_option("--gamma", o.gamma_list, "Comma-separated gamma(m) values");
  };
  auto game_opts = [&](CLI::App* c) {
    common(c);
    c->add_option("--eps", o.eps, "Step size as a fraction, e.g. 1/64");
    c->add_option("--T", o.T, "Final time");
    c->add_option("--t0", o.t0, "Start time");
    c->add_flag("--classic", o.classic, "Classic final data (eta + |xi|) / 2");
    c->add_option("--data", o.data, "Final data fixture name");
    c->add_option("--start", o.start, "m xi eta")->expected(3);
  };

  auto* cycles = app.add_subcommand("cycles", "Simple-cycle inventory of the de Bruijn graph");
  cycles->add_option("--d", o.d, "History depth");
  auto* lp = app.add_subcommand("lp", "Investor and market linear programs");
  common(lp);
  lp->add_option("--side", o.side, "investor, market or both");
  lp->add_flag("--closed-form", o.closed_form, "Explicit indifference strategy (d <= 4)");
  auto* pde = app.add_subcommand("pde", "Evaluate the PDE solution");
  common(pde);
  pde->add_flag("--classic", o.classic, "Classic final data");
  pde->add_option("--data", o.data, "Final data fixture name");
  pde->add_option("--C", o.C, "Diffusion constant");
  pde->add_option("--T", o.T, "Final time");
  pde->add_option("--t", o.t, "Evaluation time");
  pde->add_option("--probe", o.probe, "xi eta")->expected(2);
  auto* value = app.add_subcommand("value", "Discrete game value by dynamic programming");
  game_opts(value);
  value->add_option("--N", o.N, "Number of steps (sets T = t0 + N eps^2)");
  value->add_option("--xi-axis", o.xi_axis, "auto, lattice, interpolated or tree");
  auto* sim = app.add_subcommand("simulate", "Play one game");
  game_opts(sim);
  sim->add_option("--investor", o.investor, "pde_guided, fixed or perturbed");
  sim->add_option("--market", o.market, "forcing or random");
  sim->add_option("--f", o.fixed_f, "Bid of the fixed investor");
  auto* sweep = app.add_subcommand("sweep", "Convergence sweep over eps");
  game_opts(sweep);
  sweep->add_option("--mode", o.mode, "value or simulate");
  sweep->add_option("--investor", o.investor, "Investor for simulate mode");
  sweep->add_option("--market", o.market, "Market for simulate mode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Json cfg = load_config(g);
    if (cfg.contains("seed") && app.count("--seed") == 0) g.seed = cfg["seed"].get<std::uint64_t>();
    if (cfg.contains("threads") && app.count("--threads") == 0) g.threads = cfg["threads"].get<int>();
    if (*cycles) return cmd_cycles(g, o, cfg);
    if (*lp) return cmd_lp(g, o, cfg);
    if (*pde) return cmd_pde(g, o, cfg);
    if (*value) return cmd_value(g, o, cfg);
    if (*sim) return cmd_simulate(g, o, cfg);
    if (*sweep) return cmd_sweep(g, o, cfg);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << " [" << e.where().file_name() << ":"
              << e.where().line() << "]\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << " [" << e.where().file_name() << ":"
              << e.where().line() << "]\n";
    return 3;
  } catch (const Json::exception& e) {
    std::cerr << "validation error: malformed config value: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
