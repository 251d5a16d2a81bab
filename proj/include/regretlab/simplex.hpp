#pragma once

#include <vector>

namespace regretlab {

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus s);

enum class Pricing { Dantzig, Bland };

struct SimplexOptions {
  Pricing pricing = Pricing::Dantzig;
  int degenerate_pivots_before_bland = 20;
  double pivot_tolerance = 1e-9;
  double optimality_tolerance = 1e-8;
  // 0 picks a cap from the problem size.
  long iteration_cap = 0;
};

struct SimplexResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0;
  std::vector<double> x;
  long iterations = 0;
};

// Dense two-phase simplex on the compact tableau:
//   maximize c.x  subject to  A x <= b,  x >= 0.
// Throws NumericalDegeneracy when the iteration cap is hit.
SimplexResult simplex_maximize(const std::vector<std::vector<double>>& A,
                               const std::vector<double>& b,
                               const std::vector<double>& c,
                               const SimplexOptions& options = {});

}  // namespace regretlab
