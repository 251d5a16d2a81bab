#include "regretlab/simplex.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "regretlab/error.hpp"

namespace regretlab {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

// Nonbasic columns are the structural variables plus one artificial (index
// -1); basic rows start as the slacks n..n+m-1. Row m holds the objective,
// row m+1 the phase-one objective.
class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& A,
          const std::vector<double>& b, const std::vector<double>& c,
          const SimplexOptions& opt)
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        opt_(opt),
        basic_(m_),
        nonbasic_(n_ + 1),
        d_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) d_[i][j] = A[i][j];
      d_[i][n_] = -1;
      d_[i][n_ + 1] = b[i];
      basic_[i] = n_ + i;
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      d_[m_][j] = -c[j];
    }
    nonbasic_[n_] = -1;
    d_[m_ + 1][n_] = 1;
    cap_ = opt.iteration_cap > 0 ? opt.iteration_cap
                                 : 1000 + 200L * (m_ + n_);
  }

  SimplexResult solve() {
    SimplexResult res;
    int r = 0;
    for (int i = 1; i < m_; ++i) {
      if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
    }
    if (m_ > 0 && d_[r][n_ + 1] < -opt_.pivot_tolerance) {
      pivot(r, n_);
      if (!run(2) || d_[m_ + 1][n_ + 1] < -opt_.pivot_tolerance) {
        res.status = LpStatus::Infeasible;
        res.iterations = iterations_;
        return res;
      }
      for (int i = 0; i < m_; ++i) {
        if (basic_[i] != -1) continue;
        int s = -1;
        for (int j = 0; j <= n_; ++j) {
          if (std::abs(d_[i][j]) <= opt_.pivot_tolerance) continue;
          if (s == -1 || nonbasic_[j] < nonbasic_[s]) s = j;
        }
        if (s != -1) pivot(i, s);
      }
    }
    bool bounded = run(1);
    res.iterations = iterations_;
    res.x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] >= 0 && basic_[i] < n_) res.x[basic_[i]] = d_[i][n_ + 1];
    }
    if (!bounded) {
      res.status = LpStatus::Unbounded;
      res.value = std::numeric_limits<double>::infinity();
      return res;
    }
    res.status = LpStatus::Optimal;
    res.value = d_[m_][n_ + 1];
    return res;
  }

 private:
  void pivot(int r, int s) {
    double inv = 1.0 / d_[r][s];
    const auto& row_r = d_[r];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      auto& row = d_[i];
      double f = row[s] * inv;
      if (f == 0.0) continue;
      for (int j = 0; j < n_ + 2; ++j) row[j] -= row_r[j] * f;
      row[s] = -f;
    }
    auto& pr = d_[r];
    for (int j = 0; j < n_ + 2; ++j) pr[j] *= inv;
    pr[s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
    if (++iterations_ > cap_) {
      throw NumericalDegeneracy("simplex exceeded its iteration cap of " +
                                std::to_string(cap_));
    }
  }

  // Largest-coefficient pricing; after a run of degenerate pivots switch to
  // Bland's rule (lowest-index entering variable) until the objective moves
  // again, which rules out cycling. Leaving rows are chosen by minimum ratio
  // with ties to the lowest basic index.
  bool run(int phase) {
    int x = m_ + phase - 1;
    int degenerate_run = 0;
    for (;;) {
      bool bland = opt_.pricing == Pricing::Bland ||
                   degenerate_run >= opt_.degenerate_pivots_before_bland;
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasic_[j] == -phase) continue;
        if (d_[x][j] >= -opt_.optimality_tolerance) continue;
        if (s == -1) {
          s = j;
        } else if (bland) {
          if (nonbasic_[j] < nonbasic_[s]) s = j;
        } else if (d_[x][j] < d_[x][s] ||
                   (d_[x][j] == d_[x][s] && nonbasic_[j] < nonbasic_[s])) {
          s = j;
        }
      }
      if (s == -1) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (d_[i][s] <= opt_.pivot_tolerance) continue;
        if (r == -1) {
          r = i;
          continue;
        }
        double lhs = d_[i][n_ + 1] * d_[r][s];
        double rhs = d_[r][n_ + 1] * d_[i][s];
        if (lhs < rhs || (lhs == rhs && basic_[i] < basic_[r])) r = i;
      }
      if (r == -1) return false;
      bool degenerate = d_[r][n_ + 1] <= opt_.pivot_tolerance;
      degenerate_run = degenerate ? degenerate_run + 1 : 0;
      pivot(r, s);
    }
  }

  int m_, n_;
  SimplexOptions opt_;
  std::vector<int> basic_, nonbasic_;
  std::vector<std::vector<double>> d_;
  long iterations_ = 0;
  long cap_;
};

}  // namespace

SimplexResult simplex_maximize(const std::vector<std::vector<double>>& A,
                               const std::vector<double>& b,
                               const std::vector<double>& c,
                               const SimplexOptions& options) {
  for (const auto& row : A) {
    if (row.size() != c.size()) {
      throw ValidationError("LP row width does not match objective length");
    }
  }
  if (A.size() != b.size()) {
    throw ValidationError("LP row count does not match right-hand side");
  }
  return Tableau(A, b, c, options).solve();
}

}  // namespace regretlab
