#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "regretlab/game.hpp"
#include "regretlab/pde.hpp"
#include "regretlab/playsim.hpp"

namespace regretlab {

struct SweepRow {
  double epsilon = 0;
  int N = 0;
  double approx = 0;  // u^eps or the simulated final regret
  double u = 0;
  double error = 0;
  double error_over_eps = 0;
  double error_over_eps_log = 0;
};

enum class SweepMode { Value, Simulate };

struct SweepSpec {
  ExpertPair experts;
  FinalData data;
  double T = 1, t0 = 0;
  GameStart start;
  // The continuum solution compared against.
  PdePtr reference;
  SweepMode mode = SweepMode::Value;
  GridOptions grid;
  // Simulate mode: the policies to play at a given eps.
  std::function<std::pair<InvestorPolicy, MarketPolicy>(double)> policies;
};

std::vector<SweepRow> sweep_epsilon(const SweepSpec& spec, const std::vector<double>& eps);

// Ratio column bounded by slack times its value on the first (coarsest) row.
struct RateCheck {
  double coarse = 0;
  double worst = 0;
  bool pass = false;
};
RateCheck check_rate(const std::vector<SweepRow>& rows,
                     double SweepRow::*column, double slack = 1.05);

// Smallest C >= 0 with every excess <= C [(T - t0) + eps] eps, times slack.
double fit_bound_constant(const std::vector<double>& excess, double horizon,
                          double eps, double slack = 1.05);

}  // namespace regretlab
