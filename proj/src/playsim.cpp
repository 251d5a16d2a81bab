#include "regretlab/playsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "regretlab/error.hpp"
#include "regretlab/parallel.hpp"
#include "regretlab/rng.hpp"

namespace regretlab {

namespace {

constexpr double kZeroD = 1e-14;

double hash_unit(std::uint64_t seed, int k) {
  return static_cast<double>(mix_seed(seed, static_cast<std::uint64_t>(k)) >> 11) *
         0x1.0p-53;
}

void check_beta(const std::vector<double>& beta, std::size_t states) {
  if (beta.size() != states) {
    throw ValidationError("beta has " + std::to_string(beta.size()) +
                          " entries, expected one per state (" +
                          std::to_string(states) + ")");
  }
}

}  // namespace

Guidance guidance(const PdeSolution& sol, const std::vector<double>& beta,
                  const ExpertPair& e, double t, State m, double xi, double eta) {
  Guidance g;
  g.d = sol.evaluate(t, xi, eta);
  const auto& d = g.d;
  if (!(d.u_eta > 0) || !std::isfinite(d.u_xi)) {
    throw DerivativeUnavailable("u_eta > 0 needed for the guided bid at t=" +
                                std::to_string(t));
  }
  g.fstar = (e.difference(m) * d.u_xi + e.sum(m) * d.u_eta) / (2 * d.u_eta);
  g.fsharp = std::abs(d.D) < kZeroD ? 0.0 : d.D * beta[m] / (2 * d.u_eta);
  return g;
}

InvestorPolicy InvestorPolicy::pde_guided(PdePtr sol, std::vector<double> beta) {
  if (!sol) throw ValidationError("guided investor needs a PDE solution");
  InvestorPolicy p;
  p.kind = InvestorKind::PdeGuided;
  p.sol = std::move(sol);
  p.beta = std::move(beta);
  return p;
}

InvestorPolicy InvestorPolicy::fixed(double f) {
  if (!(std::abs(f) <= 1)) throw ValidationError("fixed bid must satisfy |f| <= 1");
  InvestorPolicy p;
  p.kind = InvestorKind::Fixed;
  p.fixed_f = f;
  return p;
}

InvestorPolicy InvestorPolicy::custom_policy(std::function<double(const PlayContext&)> fn) {
  if (!fn) throw ValidationError("custom investor needs a callable");
  InvestorPolicy p;
  p.kind = InvestorKind::Custom;
  p.custom = std::move(fn);
  return p;
}

InvestorPolicy InvestorPolicy::perturbed(PdePtr sol, std::vector<double> beta,
                                         double bias, double amplitude,
                                         std::uint64_t seed) {
  auto p = pde_guided(std::move(sol), std::move(beta));
  p.kind = InvestorKind::Perturbed;
  p.bias = bias;
  p.amplitude = amplitude;
  p.seed = seed;
  return p;
}

std::string InvestorPolicy::name() const {
  switch (kind) {
    case InvestorKind::PdeGuided: return "pde_guided";
    case InvestorKind::Fixed: return "fixed";
    case InvestorKind::Custom: return "custom";
    case InvestorKind::Perturbed: return "perturbed";
  }
  return "unknown";
}

Bid investor_bid(const InvestorPolicy& p, const ExpertPair& e, const PlayContext& ctx) {
  double f = 0;
  switch (p.kind) {
    case InvestorKind::Fixed:
      f = p.fixed_f;
      break;
    case InvestorKind::Custom:
      f = p.custom(ctx);
      if (!std::isfinite(f)) throw NumericalError("custom bid is not finite");
      break;
    case InvestorKind::PdeGuided:
    case InvestorKind::Perturbed: {
      check_beta(p.beta, e.state_count());
      auto g = guidance(*p.sol, p.beta, e, ctx.t, ctx.m, ctx.xi, ctx.eta);
      f = g.fstar + ctx.epsilon * g.fsharp;
      if (p.kind == InvestorKind::Perturbed) {
        double z = 2 * hash_unit(p.seed, ctx.k) - 1;
        f += ctx.epsilon * (p.bias + p.amplitude * z);
      }
      break;
    }
  }
  Bid bid;
  bid.f = std::clamp(f, -1.0, 1.0);
  bid.clamped = bid.f != f;
  return bid;
}

MarketPolicy MarketPolicy::forcing(PdePtr sol, std::vector<double> beta, double gamma) {
  if (!sol) throw ValidationError("forcing market needs a PDE solution");
  if (!(gamma >= 0)) throw ValidationError("forcing market needs gamma >= 0");
  MarketPolicy p;
  p.kind = MarketKind::Forcing;
  p.sol = std::move(sol);
  p.beta = std::move(beta);
  p.gamma = gamma;
  return p;
}

MarketPolicy MarketPolicy::forcing_tau_scaled(PdePtr sol, std::vector<double> beta,
                                              double gamma0, double tau_shift) {
  auto p = forcing(std::move(sol), std::move(beta), gamma0);
  if (!(tau_shift > 0)) throw ValidationError("tau-scaled threshold needs a shift > 0");
  p.tau_scaled = true;
  p.tau_shift = tau_shift;
  return p;
}

MarketPolicy MarketPolicy::random(std::uint64_t seed) {
  MarketPolicy p;
  p.kind = MarketKind::Random;
  p.seed = seed;
  return p;
}

MarketPolicy MarketPolicy::scripted(std::vector<int> script) {
  for (int b : script) {
    if (b != 1 && b != -1) throw ValidationError("scripted moves must be +1 or -1");
  }
  MarketPolicy p;
  p.kind = MarketKind::Scripted;
  p.script = std::move(script);
  return p;
}

double MarketPolicy::threshold(double t) const {
  if (!tau_scaled) return gamma;
  double tau = std::max(0.0, sol->final_time() - t) + tau_shift;
  return gamma / std::sqrt(tau);
}

std::string MarketPolicy::name() const {
  switch (kind) {
    case MarketKind::Forcing: return "forcing";
    case MarketKind::Random: return "random";
    case MarketKind::Scripted: return "scripted";
  }
  return "unknown";
}

int market_move(const MarketPolicy& p, const ExpertPair& e, const PlayContext& ctx) {
  switch (p.kind) {
    case MarketKind::Random:
      return (mix_seed(p.seed, static_cast<std::uint64_t>(ctx.k)) >> 63) ? 1 : -1;
    case MarketKind::Scripted:
      if (ctx.k < 0 || static_cast<std::size_t>(ctx.k) >= p.script.size()) {
        throw ValidationError("script has no move for step " + std::to_string(ctx.k));
      }
      return p.script[ctx.k];
    case MarketKind::Forcing:
      break;
  }
  check_beta(p.beta, e.state_count());
  auto g = guidance(*p.sol, p.beta, e, ctx.t, ctx.m, ctx.xi, ctx.eta);
  double dev = ctx.f - g.fstar;
  if (std::abs(dev) >= p.threshold(ctx.t) * ctx.epsilon) {
    return dev > 0 ? -1 : 1;
  }
  double X = (ctx.f - g.fstar - ctx.epsilon * g.fsharp) / ctx.epsilon;
  return X > 0 ? -1 : 1;
}

GammaGrid gamma_grid(double t0, double T, double xi_half, double eta_lo,
                     double eta_hi, int n) {
  if (n < 2) throw ValidationError("gamma grid needs at least two samples per axis");
  if (!(T > t0)) throw ValidationError("gamma grid needs T > t0");
  GammaGrid g;
  for (int i = 0; i < n; ++i) {
    double s = static_cast<double>(i) / (n - 1);
    g.t.push_back(t0 + (T - t0) * s);
    g.xi.push_back(-xi_half + 2 * xi_half * s);
    g.eta.push_back(eta_lo + (eta_hi - eta_lo) * s);
  }
  return g;
}

namespace {

struct Bounds {
  double c1 = 0, c2 = 0;
};

Bounds sample_bounds(const PdeSolution& sol, const ExpertPair& e,
                     const std::vector<double>& beta, const GammaOptions& opt,
                     double t, double xi, double eta) {
  auto d = sol.evaluate(t, xi, eta);
  const std::size_t S = e.state_count();
  const double C = sol.diffusion();
  auto gam = gamma(e);
  double coef = 0;
  for (State m = 0; m < S; ++m) {
    for (int b : {-1, 1}) coef = std::max(coef, std::abs(gam[m] - b * beta[m] - C));
  }
  double mv2 = std::pow(e.max_abs_difference(), 2) + std::pow(e.max_abs_sum() + 2, 2);
  // Extremes of (1/2) <H v, v> over |v|^2 <= mv2.
  double tr = d.u_xixi + d.u_etaeta;
  double det = d.u_xixi * d.u_etaeta - d.u_xieta * d.u_xieta;
  double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  double lmin = 0.5 * tr - disc, lmax = 0.5 * tr + disc;
  double lo = d.u_t + 0.5 * std::min(0.0, lmin) * mv2;
  double hi = d.u_t + 0.5 * std::max(0.0, lmax) * mv2;
  Bounds out;
  out.c1 = coef * std::abs(d.D) / d.u_eta;
  out.c2 = std::max(std::abs(lo), std::abs(hi)) / d.u_eta;
  if (opt.tau_scaled) {
    double w = std::sqrt(std::max(0.0, sol.final_time() - t) + opt.tau_shift);
    out.c1 *= w;
    out.c2 *= w;
  }
  if (!std::isfinite(out.c1) || !std::isfinite(out.c2) || !(d.u_eta > 0)) {
    throw UnboundedEstimate("gamma bounds are not finite at t=" + std::to_string(t) +
                            ", xi=" + std::to_string(xi) + ", eta=" + std::to_string(eta));
  }
  return out;
}

Bounds grid_bounds(const PdeSolution& sol, const ExpertPair& e,
                   const std::vector<double>& beta, const GammaOptions& opt,
                   const std::vector<double>& ts, const GammaGrid& g) {
  Bounds b;
  for (double t : ts) {
    for (double xi : g.xi) {
      for (double eta : g.eta) {
        auto s = sample_bounds(sol, e, beta, opt, t, xi, eta);
        b.c1 = std::max(b.c1, s.c1);
        b.c2 = std::max(b.c2, s.c2);
      }
    }
  }
  return b;
}

std::vector<double> refine(const std::vector<double>& v) {
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(v[i]);
    if (i + 1 < v.size()) out.push_back(0.5 * (v[i] + v[i + 1]));
  }
  return out;
}

}  // namespace

GammaEstimate compute_gamma(const PdeSolution& sol, const ExpertPair& e,
                            const std::vector<double>& beta, const GammaGrid& grid,
                            const GammaOptions& opt) {
  check_beta(beta, e.state_count());
  if (grid.t.empty() || grid.xi.empty() || grid.eta.empty()) {
    throw ValidationError("gamma grid has an empty axis");
  }
  auto base = grid_bounds(sol, e, beta, opt, grid.t, grid);

  // Refinement: doubled density, plus times pushed toward T.
  GammaGrid fine{refine(grid.t), refine(grid.xi), refine(grid.eta)};
  std::vector<double> ts = fine.t;
  double T = sol.final_time();
  double last = -std::numeric_limits<double>::infinity();
  for (double t : grid.t) {
    if (t < T) last = std::max(last, t);
  }
  if (std::isfinite(last)) {
    for (int j = 1; j <= 4; ++j) ts.push_back(T - (T - last) / std::pow(4.0, j));
  }
  auto fine_b = grid_bounds(sol, e, beta, opt, ts, fine);

  GammaEstimate est;
  est.condition1 = base.c1;
  est.condition2 = base.c2;
  est.gamma = opt.safety * std::max(base.c1, base.c2);
  est.refined = opt.safety * std::max(fine_b.c1, fine_b.c2);
  if (est.refined > opt.divergence_ratio * est.gamma + 1e-12) {
    throw UnboundedEstimate("sampled gamma bound grows from " + std::to_string(est.gamma) +
                            " to " + std::to_string(est.refined) +
                            " under refinement toward t = T");
  }
  return est;
}

Walk Trajectory::walk() const {
  Walk w;
  for (const auto& s : steps) w.push_back(s.m);
  w.push_back(m_final);
  return w;
}

Trajectory run_game(const GameConfig& cfg, const GameStart& start,
                    const InvestorPolicy& investor, const MarketPolicy& market) {
  const auto& e = cfg.experts;
  if (start.m >= e.state_count()) throw ValidationError("start state out of range");
  DeBruijnGraph g(e.depth());
  Trajectory tr;
  tr.epsilon = cfg.epsilon;
  tr.T = cfg.T;
  tr.t0 = cfg.t0;
  tr.investor = investor.name();
  tr.market = market.name();
  tr.seed = market.kind == MarketKind::Random ? market.seed : investor.seed;
  const int N = cfg.steps();
  const double eps = cfg.epsilon;
  tr.steps.reserve(N);

  State m = start.m;
  double xi = start.xi, eta = start.eta;
  for (int k = 0; k < N; ++k) {
    PlayContext ctx{k, cfg.time_at(k), m, xi, eta, eps,
                    std::numeric_limits<double>::quiet_NaN()};
    TrajectoryStep st{k, ctx.t, m, xi, eta, 0, 0, false};
    try {
      auto bid = investor_bid(investor, e, ctx);
      ctx.f = bid.f;
      st.f = bid.f;
      st.clamped = bid.clamped;
      st.b = market_move(market, e, ctx);
    } catch (const PolicyError&) {
      throw;
    } catch (const std::exception& ex) {
      throw PolicyError(k, ex.what());
    }
    if (st.clamped) ++tr.clamp_events;
    tr.steps.push_back(st);
    xi = xi + eps * st.b * e.difference(m);
    eta = eta + eps * st.b * (e.sum(m) - 2 * st.f);
    m = g.next(m, st.b);
  }
  tr.m_final = m;
  tr.xi_final = xi;
  tr.eta_final = eta;
  tr.final_regret = cfg.final.value(xi, eta);
  return tr;
}

Regrets accumulate_regrets(const Trajectory& tr, const ExpertPair& e, double x1_0,
                           double x2_0) {
  Regrets r{x1_0, x2_0, 0, 0, 0};
  const double eps = tr.epsilon;
  for (const auto& s : tr.steps) {
    // A bid f loses -eps b f when the market moves by eps b.
    r.investor_loss += -eps * s.b * s.f;
    r.q_loss += -eps * s.b * e.q(s.m);
    r.r_loss += -eps * s.b * e.r(s.m);
    r.x1 += eps * s.b * (e.q(s.m) - s.f);
    r.x2 += eps * s.b * (e.r(s.m) - s.f);
  }
  return r;
}

std::vector<double> increments(const Trajectory& tr, const ExpertPair& e,
                               const PdeSolution& sol, const std::vector<double>& beta) {
  check_beta(beta, e.state_count());
  auto gam = gamma(e);
  std::vector<double> L;
  L.reserve(tr.steps.size());
  for (const auto& s : tr.steps) {
    auto d = sol.evaluate(s.t, s.xi, s.eta);
    L.push_back(d.u_t + (gam[s.m] - s.b * beta[s.m]) * d.D);
  }
  return L;
}

std::vector<CycleAverage> cycle_averages(const Trajectory& tr, const ExpertPair& e,
                                         const PdeSolution& sol,
                                         const std::vector<double>& beta, double M) {
  std::vector<CycleAverage> out;
  if (tr.steps.empty()) return out;
  DeBruijnGraph g(e.depth());
  auto L = increments(tr, e, sol, beta);
  std::vector<double> ref(tr.steps.size());
  for (std::size_t i = 0; i < tr.steps.size(); ++i) {
    const auto& s = tr.steps[i];
    auto d = sol.evaluate(s.t, s.xi, s.eta);
    ref[i] = d.u_t + M * d.D;
  }
  auto walk = extend_to_closed_walk(tr.walk(), g);
  auto dec = decompose_walk(g, walk);
  for (const auto& inst : dec.instances) {
    if (inst.end_step() >= tr.steps.size()) continue;
    CycleAverage c;
    c.cycle = inst.cycle;
    c.start_step = inst.start_step;
    c.length = inst.steps.size();
    for (auto s : inst.steps) {
      c.mean_L += L[s];
      c.reference += ref[s];
    }
    c.mean_L /= static_cast<double>(c.length);
    c.reference /= static_cast<double>(c.length);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Trajectory> exhaustive_markets(const GameConfig& cfg, const GameStart& start,
                                           const InvestorPolicy& investor, int threads) {
  const int N = cfg.steps();
  if (N > kExhaustiveMaxSteps) {
    throw ValidationError("exhaustive markets need N <= " +
                          std::to_string(kExhaustiveMaxSteps) + ", got " +
                          std::to_string(N));
  }
  std::size_t count = std::size_t{1} << N;
  std::vector<Trajectory> out(count);
  parallel_for(0, count, threads, [&](std::size_t code) {
    std::vector<int> script(N);
    for (int k = 0; k < N; ++k) script[k] = (code >> k) & 1 ? 1 : -1;
    out[code] = run_game(cfg, start, investor, MarketPolicy::scripted(std::move(script)));
  });
  return out;
}

}  // namespace regretlab
