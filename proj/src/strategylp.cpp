#include "regretlab/strategylp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "regretlab/error.hpp"

namespace regretlab {

const char* to_string(LpSide side) {
  return side == LpSide::Investor ? "investor" : "market";
}

CycleLp build_lp(const ExpertPair& e, const std::vector<SimpleCycle>& cycles,
                 LpSide side) {
  CycleLp lp;
  lp.depth = e.depth();
  lp.side = side;
  lp.cycles = cycles;
  lp.gamma = gamma(e).values();
  std::size_t n = e.state_count();
  lp.A.assign(cycles.size(), std::vector<double>(n + 1, 0.0));
  lp.g.assign(cycles.size(), 0.0);
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    const auto& c = cycles[i];
    for (std::size_t k = 0; k < c.length(); ++k) {
      State m = c.vertices[k];
      if (m >= n) throw ValidationError("cycle vertex outside the state range");
      lp.A[i][m] = c.signs[k];
      lp.g[i] -= lp.gamma[m];
    }
    lp.A[i][n] = -static_cast<double>(c.length());
  }
  return lp;
}

double cycle_rate(const CycleLp& lp, std::size_t row,
                  const std::vector<double>& beta) {
  const auto& c = lp.cycles[row];
  double total = 0;
  for (std::size_t k = 0; k < c.length(); ++k) {
    State m = c.vertices[k];
    total += lp.gamma[m] - c.signs[k] * beta[m];
  }
  return total / static_cast<double>(c.length());
}

namespace {

LpSolution solve_rows(const CycleLp& lp, const std::vector<std::size_t>& rows,
                      const SimplexOptions& options) {
  std::size_t n = lp.state_count() + 1;
  // Free variables z = (-beta, M) split as z = z+ - z-. M is measured from
  // the extreme cycle average, where beta = 0 is feasible, so the initial
  // basis is feasible.
  std::vector<std::vector<double>> A(rows.size(), std::vector<double>(2 * n));
  std::vector<double> b(rows.size());
  double sign = lp.side == LpSide::Investor ? 1.0 : -1.0;
  double shift = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::size_t i = rows[k];
    double avg = lp.g[i] / lp.A[i][n - 1];
    if (k == 0 || sign * avg > sign * shift) shift = avg;
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::size_t i = rows[k];
    for (std::size_t j = 0; j < n; ++j) {
      A[k][j] = sign * lp.A[i][j];
      A[k][n + j] = -sign * lp.A[i][j];
    }
    b[k] = std::max(0.0, sign * (lp.g[i] - lp.A[i][n - 1] * shift));
  }
  std::vector<double> c(2 * n, 0.0);
  c[n - 1] = -sign;
  c[2 * n - 1] = sign;

  auto res = simplex_maximize(A, b, c, options);
  LpSolution sol;
  sol.side = lp.side;
  sol.status = res.status;
  sol.iterations = res.iterations;
  if (res.status != LpStatus::Optimal) return sol;
  sol.beta.resize(n - 1);
  for (std::size_t m = 0; m + 1 < n; ++m) {
    sol.beta[m] = -(res.x[m] - res.x[n + m]);
  }
  sol.M = shift + res.x[n - 1] - res.x[2 * n - 1];
  sol.optimal_value = sol.M;
  return sol;
}

constexpr std::size_t kDirectRowLimit = 2000;
constexpr std::size_t kRowsPerRound = 64;

}  // namespace

LpSolution solve(const CycleLp& lp, const SimplexOptions& options) {
  std::vector<std::size_t> rows(lp.A.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  if (rows.size() <= kDirectRowLimit) return solve_rows(lp, rows, options);

  // Large inventories: optimise over a working set of cycles seeded with
  // the Eulerian-circuit factors (which already bound M), then add the most
  // violated cycles until none is violated.
  auto eul = eulerian_mixed_strategy(lp);
  std::vector<bool> active(lp.A.size(), false);
  rows.clear();
  for (std::size_t i = 0; i < eul.p.size(); ++i) {
    if (eul.p[i] > 0) {
      active[i] = true;
      rows.push_back(i);
    }
  }
  double sign = lp.side == LpSide::Investor ? 1.0 : -1.0;
  long iterations = 0;
  for (int round = 0; round < 10000; ++round) {
    auto sol = solve_rows(lp, rows, options);
    iterations += sol.iterations;
    sol.iterations = iterations;
    if (sol.status != LpStatus::Optimal) return sol;
    std::vector<std::pair<double, std::size_t>> violated;
    for (std::size_t i = 0; i < lp.A.size(); ++i) {
      if (active[i]) continue;
      double v = sign * (cycle_rate(lp, i, sol.beta) - sol.M);
      if (v > options.optimality_tolerance * 1e-2) violated.emplace_back(-v, i);
    }
    if (violated.empty()) return sol;
    std::size_t take = std::min(kRowsPerRound, violated.size());
    std::partial_sort(violated.begin(), violated.begin() + take, violated.end());
    for (std::size_t k = 0; k < take; ++k) {
      active[violated[k].second] = true;
      rows.push_back(violated[k].second);
    }
    std::sort(rows.begin(), rows.end());
  }
  throw NumericalDegeneracy("cycle constraint generation did not converge");
}

LpSolution indifference_closed_form(const ExpertPair& e) {
  return indifference_closed_form(gamma(e).values());
}

LpSolution indifference_closed_form(const std::vector<double>& gv) {
  const auto& g = gv;
  std::size_t n = g.size();
  double M = 0;
  for (double v : g) M += v;
  M /= static_cast<double>(n);
  std::vector<double> beta(n, 0.0);
  auto pair = [&](std::size_t m, double v) {
    beta[m] = v;
    beta[m + n / 2] = v;
  };
  switch (n) {
    case 2:
      pair(0, (g[1] - g[0]) / 2);
      break;
    case 4:
      pair(0, M - g[0]);
      pair(1, g[3] - M);
      break;
    case 8:
      pair(0, M - g[0]);
      pair(1, -M + (-g[2] + g[3] + g[6] + g[7]) / 2);
      pair(2, M - (g[0] + g[1] + g[4] - g[5]) / 2);
      pair(3, g[7] - M);
      break;
    case 16:
      pair(0, M - g[0]);
      pair(1, -M + (-2 * g[2] + 2 * g[3] - g[4] - g[5] + g[6] + g[7] +
                    g[12] + g[13] + g[14] + g[15]) /
                       4);
      pair(2, M - (g[0] + g[1] + g[2] + g[3] + 2 * g[4] - 2 * g[5] + g[8] +
                   g[9] - g[10] - g[11]) /
                      4);
      pair(3, -M + (-2 * g[6] + 2 * g[7] + 2 * g[14] + 2 * g[15]) / 4);
      pair(4, M - (2 * g[0] + 2 * g[1] + 2 * g[8] - 2 * g[9]) / 4);
      pair(5, -M + (-g[4] - g[5] + g[6] + g[7] - 2 * g[10] + 2 * g[11] +
                    g[12] + g[13] + g[14] + g[15]) /
                       4);
      pair(6, M - (g[0] + g[1] + g[2] + g[3] + g[8] + g[9] - g[10] - g[11] +
                   2 * g[12] - 2 * g[13]) /
                      4);
      pair(7, g[15] - M);
      break;
    default:
      throw UnsupportedDepth(
          "explicit indifference strategies exist only for d <= 4");
  }
  LpSolution sol;
  sol.beta = std::move(beta);
  sol.M = M;
  sol.optimal_value = M;
  sol.status = LpStatus::Optimal;
  return sol;
}

IndifferenceReport verify_indifference(const LpSolution& sol,
                                       const CycleLp& lp, double tol) {
  if (sol.beta.size() != lp.state_count()) {
    throw ValidationError("solution and LP have different state counts");
  }
  IndifferenceReport rep;
  rep.residuals.reserve(lp.cycles.size());
  for (std::size_t i = 0; i < lp.cycles.size(); ++i) {
    double r = cycle_rate(lp, i, sol.beta) - sol.M;
    rep.residuals.push_back(r);
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(r));
  }
  rep.pass = rep.max_abs_residual <= tol;
  return rep;
}

MixedCycleStrategy dual_mixed_strategy(const CycleLp& lp,
                                       const SimplexOptions& options) {
  // maximize sum_i w_i Gamma_i  s.t.  sum_i w_i |s_i| = 1,
  // sum_i w_i b_{i,m} = 0 for all m, w >= 0; then p_i = w_i |s_i|.
  std::size_t k = lp.cycles.size();
  std::size_t n = lp.state_count();
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  A.reserve(2 * n + 2);
  auto add_equality = [&](std::vector<double> row, double rhs) {
    A.push_back(row);
    b.push_back(rhs);
    for (double& v : row) v = -v;
    A.push_back(std::move(row));
    b.push_back(-rhs);
  };
  std::vector<double> lengths(k);
  for (std::size_t i = 0; i < k; ++i) lengths[i] = -lp.A[i][n];
  add_equality(lengths, 1.0);
  for (std::size_t m = 0; m < n; ++m) {
    std::vector<double> row(k);
    for (std::size_t i = 0; i < k; ++i) row[i] = lp.A[i][m];
    add_equality(std::move(row), 0.0);
  }
  std::vector<double> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = -lp.g[i];

  auto res = simplex_maximize(A, b, c, options);
  if (res.status != LpStatus::Optimal) {
    throw NumericalDegeneracy(std::string("dual cycle LP ended ") +
                              to_string(res.status));
  }
  MixedCycleStrategy out;
  out.p.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.p[i] = std::max(0.0, res.x[i]) * lengths[i];
  }
  out.value = res.value;
  return out;
}

MixedCycleStrategy eulerian_mixed_strategy(const CycleLp& lp) {
  DeBruijnGraph g(lp.depth);
  auto dec = decompose_walk(g, eulerian_circuit(g));
  std::map<std::vector<State>, std::size_t> index;
  for (std::size_t i = 0; i < lp.cycles.size(); ++i) {
    index[lp.cycles[i].vertices] = i;
  }
  MixedCycleStrategy out;
  out.p.assign(lp.cycles.size(), 0.0);
  double total = static_cast<double>(g.edge_count());
  for (const auto& [cycle, count] : dec.multiplicities) {
    auto it = index.find(cycle.vertices);
    if (it == index.end()) {
      throw ValidationError("LP cycle list is missing a circuit factor");
    }
    out.p[it->second] = static_cast<double>(count * cycle.length()) / total;
  }
  for (std::size_t i = 0; i < out.p.size(); ++i) {
    out.value += out.p[i] * (-lp.g[i]) / static_cast<double>(
                                             lp.cycles[i].length());
  }
  return out;
}

std::string format_lp(const CycleLp& lp) {
  std::ostringstream os;
  os.precision(17);
  std::size_t n = lp.state_count();
  os << "# side=" << to_string(lp.side) << " d=" << lp.depth
     << " rows=" << lp.A.size() << "\n# cycle";
  for (std::size_t m = 0; m < n; ++m) os << " a" << m;
  os << " a_M rhs\n";
  for (std::size_t i = 0; i < lp.A.size(); ++i) {
    for (std::size_t k = 0; k < lp.cycles[i].length(); ++k) {
      os << (k ? "-" : "") << lp.cycles[i].vertices[k];
    }
    for (double v : lp.A[i]) os << ' ' << v;
    os << ' ' << lp.g[i] << '\n';
  }
  return os.str();
}

}  // namespace regretlab
