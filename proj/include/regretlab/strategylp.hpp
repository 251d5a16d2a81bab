#pragma once

#include <string>
#include <vector>

#include "regretlab/experts.hpp"
#include "regretlab/graph.hpp"
#include "regretlab/simplex.hpp"

namespace regretlab {

enum class LpSide { Investor, Market };

const char* to_string(LpSide side);

// One row per simple cycle over the columns (-beta_0..-beta_{n-1}, M):
// A[i][m] is the sign of the edge leaving m on cycle i (0 if m is not on
// it) and the last column is -|s_i|; g[i] = -(sum of gamma over cycle i).
// Investor: min M s.t. A z <= g. Market: max M s.t. A z >= g.
struct CycleLp {
  int depth = 0;
  std::vector<std::vector<double>> A;
  std::vector<double> g;
  std::vector<SimpleCycle> cycles;
  std::vector<double> gamma;
  LpSide side = LpSide::Investor;

  std::size_t state_count() const { return gamma.size(); }
};

struct LpSolution {
  std::vector<double> beta;
  double M = 0;
  double optimal_value = 0;
  LpStatus status = LpStatus::Infeasible;
  LpSide side = LpSide::Investor;
  long iterations = 0;
};

struct MixedCycleStrategy {
  std::vector<double> p;
  double value = 0;
};

struct IndifferenceReport {
  // Cycle average of (gamma_m - b_{i,m} beta_m) minus M, row by row.
  std::vector<double> residuals;
  double max_abs_residual = 0;
  bool pass = false;
};

CycleLp build_lp(const ExpertPair& e, const std::vector<SimpleCycle>& cycles,
                 LpSide side);

// Rate the investor accumulates on cycle i under beta:
// (1/|s_i|) sum_{m in s_i} (gamma_m - b_{i,m} beta_m).
double cycle_rate(const CycleLp& lp, std::size_t row,
                  const std::vector<double>& beta);

LpSolution solve(const CycleLp& lp, const SimplexOptions& options = {});

// Explicit indifference strategies for d = 1..4.
LpSolution indifference_closed_form(const ExpertPair& e);
LpSolution indifference_closed_form(const std::vector<double>& gamma);

IndifferenceReport verify_indifference(const LpSolution& sol,
                                       const CycleLp& lp, double tol);

MixedCycleStrategy dual_mixed_strategy(const CycleLp& lp,
                                       const SimplexOptions& options = {});

// Weights of the decomposition of the Eulerian circuit into simple cycles,
// normalised to a probability vector over lp.cycles.
MixedCycleStrategy eulerian_mixed_strategy(const CycleLp& lp);

// Plain-text table: one row per cycle with its id, coefficients and rhs.
std::string format_lp(const CycleLp& lp);

}  // namespace regretlab
