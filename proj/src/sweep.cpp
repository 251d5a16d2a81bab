#include "regretlab/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "regretlab/error.hpp"

namespace regretlab {

std::vector<SweepRow> sweep_epsilon(const SweepSpec& spec, const std::vector<double>& eps) {
  if (!spec.reference) throw ValidationError("sweep needs a reference solution");
  if (spec.mode == SweepMode::Simulate && !spec.policies) {
    throw ValidationError("simulation sweep needs a policy factory");
  }
  std::vector<SweepRow> rows;
  for (double e : eps) {
    GameConfig cfg(spec.experts, e, spec.T, spec.t0, spec.data);
    SweepRow row;
    row.epsilon = e;
    row.N = cfg.steps();
    if (spec.mode == SweepMode::Value) {
      bool separable = spec.data.kind() != FinalKind::General;
      auto v = separable ? dpp_value_separable(cfg, spec.grid)
                         : dpp_value_general(cfg, spec.grid);
      row.approx = v.initial_value(spec.start.m, spec.start.xi, spec.start.eta);
    } else {
      auto [inv, mk] = spec.policies(e);
      row.approx = run_game(cfg, spec.start, inv, mk).final_regret;
    }
    row.u = spec.reference->value(spec.t0, spec.start.xi, spec.start.eta);
    row.error = std::abs(row.approx - row.u);
    row.error_over_eps = row.error / e;
    row.error_over_eps_log = row.error / (e * std::log(1 / e));
    rows.push_back(row);
  }
  return rows;
}

RateCheck check_rate(const std::vector<SweepRow>& rows, double SweepRow::*column,
                     double slack) {
  RateCheck r;
  if (rows.empty()) return r;
  auto coarsest = std::max_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.epsilon < b.epsilon;
  });
  r.coarse = (*coarsest).*column;
  for (const auto& row : rows) r.worst = std::max(r.worst, row.*column);
  r.pass = r.worst <= slack * r.coarse;
  return r;
}

double fit_bound_constant(const std::vector<double>& excess, double horizon, double eps,
                          double slack) {
  double scale = (horizon + eps) * eps;
  double c = 0;
  for (double x : excess) c = std::max(c, x / scale);
  return slack * c;
}

}  // namespace regretlab
