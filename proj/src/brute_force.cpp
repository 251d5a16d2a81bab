#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "regretlab/error.hpp"
#include "regretlab/game.hpp"

namespace regretlab {

namespace {

struct Prefix {
  State m = 0;
  double xi = 0;
  // eps * sum b (q + r + 2); the eta offset for f = -1 on every step.
  double base_eta = 0;
};

bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1] + 1e-13 * (1 + std::abs(v[i - 1]))) return false;
  }
  return true;
}

}  // namespace

BruteForceResult brute_force(const GameConfig& cfg, const GameStart& start,
                             int f_count, bool allow_monotone_search) {
  const int N = cfg.steps();
  if (N > kBruteForceMaxSteps) {
    throw ValidationError("brute force needs N <= " +
                          std::to_string(kBruteForceMaxSteps) + ", got " +
                          std::to_string(N));
  }
  if (f_count < 2) throw ValidationError("brute force needs at least two f values");
  if (start.m >= cfg.experts.state_count()) {
    throw ValidationError("start state out of range");
  }
  const auto& e = cfg.experts;
  const std::size_t S = e.state_count();
  const double eps = cfg.epsilon;
  const long L = f_count - 1;
  const double df = 2.0 / L;

  // f = -1 + i df contributes eps b (s + 2) - 2 eps df b i to eta, so the
  // state after a b-prefix is fixed up to J = sum b i.
  std::vector<std::vector<Prefix>> levels(N + 1);
  levels[0] = {{start.m, start.xi, 0}};
  for (int k = 0; k < N; ++k) {
    levels[k + 1].resize(levels[k].size() * 2);
    for (std::size_t p = 0; p < levels[k].size(); ++p) {
      const auto& pr = levels[k][p];
      for (int bit = 0; bit < 2; ++bit) {
        int b = bit ? 1 : -1;
        Prefix c;
        c.m = ((pr.m << 1) | static_cast<State>(bit)) % S;
        c.xi = pr.xi + eps * b * e.difference(pr.m);
        c.base_eta = pr.base_eta + eps * b * (e.sum(pr.m) + 2);
        levels[k + 1][2 * p + bit] = c;
      }
    }
  }

  BruteForceResult res;
  std::vector<std::vector<double>> next(levels[N].size()), cur;
  {
    long span = N * L;
    for (std::size_t p = 0; p < levels[N].size(); ++p) {
      const auto& pr = levels[N][p];
      auto& t = next[p];
      t.resize(2 * span + 1);
      for (long J = -span; J <= span; ++J) {
        double eta = start.eta + pr.base_eta - 2 * eps * df * static_cast<double>(J);
        t[J + span] = cfg.final.value(pr.xi, eta);
      }
      res.table_entries += t.size();
    }
  }
  for (int k = N - 1; k >= 0; --k) {
    long span = k * L, child = (k + 1) * L;
    cur.assign(levels[k].size(), {});
    for (std::size_t p = 0; p < levels[k].size(); ++p) {
      const auto& X = next[2 * p + 1];
      const auto& Y = next[2 * p];
      const bool mono = allow_monotone_search && nonincreasing(X) && nonincreasing(Y);
      if (!mono) res.used_monotone_search = false;
      auto& t = cur[p];
      t.resize(2 * span + 1);
      for (long J = -span; J <= span; ++J) {
        auto val = [&](long i) {
          return std::max(X[J + i + child], Y[J - i + child]);
        };
        double best;
        if (mono) {
          // X(J + i) falls and Y(J - i) rises with i; find the crossing.
          long lo = 0, hi = L + 1;
          while (lo < hi) {
            long mid = (lo + hi) / 2;
            if (Y[J - mid + child] >= X[J + mid + child]) {
              hi = mid;
            } else {
              lo = mid + 1;
            }
          }
          best = std::numeric_limits<double>::infinity();
          if (lo <= L) best = val(lo);
          if (lo >= 1) best = std::min(best, val(lo - 1));
        } else {
          best = val(0);
          for (long i = 1; i <= L; ++i) best = std::min(best, val(i));
        }
        t[J + span] = best;
      }
      res.table_entries += t.size();
    }
    std::swap(cur, next);
  }
  res.value = next[0][0];
  return res;
}

double brute_force_value(const GameConfig& cfg, const GameStart& start,
                         int f_count) {
  return brute_force(cfg, start, f_count).value;
}

}  // namespace regretlab
