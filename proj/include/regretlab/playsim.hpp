#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "regretlab/experts.hpp"
#include "regretlab/game.hpp"
#include "regretlab/graph.hpp"
#include "regretlab/pde.hpp"

namespace regretlab {

// What a policy may look at when acting at step k. The investor's view has
// f = NaN; the market's view carries the committed bid.
struct PlayContext {
  int k = 0;
  double t = 0;
  State m = 0;
  double xi = 0, eta = 0;
  double epsilon = 0;
  double f = 0;
};

struct Guidance {
  double fstar = 0;
  double fsharp = 0;
  PointDerivatives d;
};

// f* and f# from the solution at (t, xi, eta). f# is zero when |D| < 1e-14.
Guidance guidance(const PdeSolution& sol, const std::vector<double>& beta,
                  const ExpertPair& e, double t, State m, double xi, double eta);

enum class InvestorKind { PdeGuided, Fixed, Custom, Perturbed };

struct InvestorPolicy {
  InvestorKind kind = InvestorKind::Fixed;
  PdePtr sol;
  std::vector<double> beta;
  double fixed_f = 0;
  std::function<double(const PlayContext&)> custom;
  // Perturbed: f = f* + eps f# + eps (bias + amplitude z_k), z_k uniform in
  // [-1, 1] from a hash of (seed, k).
  double bias = 0, amplitude = 0;
  std::uint64_t seed = 0;

  static InvestorPolicy pde_guided(PdePtr sol, std::vector<double> beta);
  static InvestorPolicy fixed(double f);
  static InvestorPolicy custom_policy(std::function<double(const PlayContext&)> fn);
  static InvestorPolicy perturbed(PdePtr sol, std::vector<double> beta,
                                  double bias, double amplitude, std::uint64_t seed);

  std::string name() const;
};

struct Bid {
  double f = 0;
  bool clamped = false;
};

Bid investor_bid(const InvestorPolicy& p, const ExpertPair& e,
                 const PlayContext& ctx);

enum class MarketKind { Forcing, Random, Scripted };

struct MarketPolicy {
  MarketKind kind = MarketKind::Random;
  PdePtr sol;
  std::vector<double> beta;
  // Threshold gamma at time t: gamma * (T - t + tau_shift)^{-1/2} when
  // tau_scaled, gamma otherwise.
  double gamma = 0;
  bool tau_scaled = false;
  double tau_shift = 0;
  std::uint64_t seed = 0;
  // Scripted: b_k = script[k] (+1 / -1).
  std::vector<int> script;

  static MarketPolicy forcing(PdePtr sol, std::vector<double> beta, double gamma);
  static MarketPolicy forcing_tau_scaled(PdePtr sol, std::vector<double> beta,
                                         double gamma0, double tau_shift);
  static MarketPolicy random(std::uint64_t seed);
  static MarketPolicy scripted(std::vector<int> script);

  double threshold(double t) const;
  std::string name() const;
};

int market_move(const MarketPolicy& p, const ExpertPair& e, const PlayContext& ctx);

struct GammaGrid {
  std::vector<double> t, xi, eta;
};

// n samples per axis; times run from t0 to T inclusive.
GammaGrid gamma_grid(double t0, double T, double xi_half, double eta_lo,
                     double eta_hi, int n = 9);

struct GammaOptions {
  double safety = 1.1;
  // Report gamma0 with gamma(t) = gamma0 (T - t + tau_shift)^{-1/2}.
  bool tau_scaled = false;
  double tau_shift = 0;
  // Sampled suprema growing by more than this factor under refinement count
  // as divergent.
  double divergence_ratio = 1.5;
};

struct GammaEstimate {
  double gamma = 0;
  double condition1 = 0;
  double condition2 = 0;
  double refined = 0;
};

GammaEstimate compute_gamma(const PdeSolution& sol, const ExpertPair& e,
                            const std::vector<double>& beta, const GammaGrid& grid,
                            const GammaOptions& opt = {});

struct TrajectoryStep {
  int k = 0;
  double t = 0;
  State m = 0;
  double xi = 0, eta = 0;
  double f = 0;
  int b = 0;
  bool clamped = false;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  State m_final = 0;
  double xi_final = 0, eta_final = 0;
  double final_regret = 0;
  double epsilon = 0;
  double T = 0, t0 = 0;
  std::string investor, market;
  std::uint64_t seed = 0;
  std::size_t clamp_events = 0;

  Walk walk() const;
};

Trajectory run_game(const GameConfig& cfg, const GameStart& start,
                    const InvestorPolicy& investor, const MarketPolicy& market);

// Regrets against q and r accumulated directly from (f_k, b_k).
struct Regrets {
  double x1 = 0, x2 = 0;
  double investor_loss = 0, q_loss = 0, r_loss = 0;
};
Regrets accumulate_regrets(const Trajectory& tr, const ExpertPair& e,
                           double x1_0 = 0, double x2_0 = 0);

// Per-step increment u_t + (gamma_m - b beta_m) D at the pre-move state.
std::vector<double> increments(const Trajectory& tr, const ExpertPair& e,
                               const PdeSolution& sol,
                               const std::vector<double>& beta);

struct CycleAverage {
  SimpleCycle cycle;
  std::size_t start_step = 0;
  std::size_t length = 0;
  double mean_L = 0;
  // Mean of u_t + M D over the same steps.
  double reference = 0;
};

// Averages over every cycle instance of the realized walk that is completed
// within the game.
std::vector<CycleAverage> cycle_averages(const Trajectory& tr, const ExpertPair& e,
                                         const PdeSolution& sol,
                                         const std::vector<double>& beta, double M);

// Every b-sequence of length N against the investor; N <= 16.
std::vector<Trajectory> exhaustive_markets(const GameConfig& cfg,
                                           const GameStart& start,
                                           const InvestorPolicy& investor,
                                           int threads = 1);

constexpr int kExhaustiveMaxSteps = 16;

}  // namespace regretlab
