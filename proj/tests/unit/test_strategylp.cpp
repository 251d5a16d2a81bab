#include <cmath>
#include <numeric>

#include "doctest.h"
#include "regretlab/error.hpp"
#include "regretlab/rng.hpp"
#include "regretlab/strategylp.hpp"

using namespace regretlab;

namespace {

ExpertPair example_pair() { return ExpertPair::validate({0.5, 0.3}, {-0.5, -0.3}); }

double max_cycle_average(const CycleLp& lp, bool largest) {
  double best = largest ? -1e300 : 1e300;
  std::vector<double> zero(lp.state_count(), 0.0);
  for (std::size_t i = 0; i < lp.cycles.size(); ++i) {
    double v = cycle_rate(lp, i, zero);
    best = largest ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

// Two vectors of experts whose gammas differ by a factor lambda.
std::pair<ExpertPair, ExpertPair> scaled_pair(int d, Rng& rng, double lambda) {
  std::size_t n = std::size_t{1} << d;
  std::vector<double> q(n), r(n), q2(n), r2(n);
  for (std::size_t m = 0; m < n; ++m) {
    q[m] = rng.uniform(-0.4, 0.4);
    r[m] = rng.uniform(-0.4, 0.4);
    q2[m] = std::sqrt(lambda) * q[m];
    r2[m] = std::sqrt(lambda) * r[m];
  }
  return {ExpertPair::validate(q, r), ExpertPair::validate(q2, r2)};
}

}  // namespace

TEST_CASE("simplex on textbook problems") {
  auto res = simplex_maximize({{1, 0}, {0, 2}, {3, 2}}, {4, 12, 18}, {3, 5});
  CHECK(res.status == LpStatus::Optimal);
  CHECK(res.value == doctest::Approx(36));
  CHECK(res.x[0] == doctest::Approx(2));
  CHECK(res.x[1] == doctest::Approx(6));
  // x + y >= 2 with x, y <= 1 written as -x - y <= -2.
  auto infeasible = simplex_maximize({{-1, -1}, {1, 0}, {0, 1}}, {-3, 1, 1}, {1, 1});
  CHECK(infeasible.status == LpStatus::Infeasible);
  auto unbounded = simplex_maximize({{1, -1}}, {1}, {1, 0});
  CHECK(unbounded.status == LpStatus::Unbounded);
  // Phase one: x >= 1, maximize -x.
  auto p1 = simplex_maximize({{-1}}, {-1}, {-1});
  CHECK(p1.status == LpStatus::Optimal);
  CHECK(p1.value == doctest::Approx(-1));
}

TEST_CASE("d=1 cycle matrix") {
  auto cycles = enumerate_simple_cycles(DeBruijnGraph(1));
  auto lp = build_lp(example_pair(), cycles, LpSide::Investor);
  std::vector<std::vector<double>> A{{-1, 0, -1}, {0, 1, -1}, {1, -1, -2}};
  CHECK(lp.A == A);
  CHECK(lp.g[0] == doctest::Approx(-1.0));
  CHECK(lp.g[1] == doctest::Approx(-0.36));
  CHECK(lp.g[2] == doctest::Approx(-1.36));
}

TEST_CASE("rows follow the cycle signs") {
  DeBruijnGraph g(2);
  auto cycles = enumerate_simple_cycles(g);
  auto lp = build_lp(random_pair(2, 3, 0.9), cycles, LpSide::Market);
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    CHECK(lp.A[i][4] == -static_cast<double>(cycles[i].length()));
    for (State m = 0; m < 4; ++m) {
      int expect = 0;
      if (cycles[i].contains(m)) {
        auto k = std::find(cycles[i].vertices.begin(), cycles[i].vertices.end(), m) -
                 cycles[i].vertices.begin();
        State next = cycles[i].vertices[(k + 1) % cycles[i].length()];
        expect = next == g.plus(m) ? 1 : -1;
      }
      CHECK(lp.A[i][m] == expect);
    }
  }
  // Cycle 1-2 leaves 1 by the - edge and 2 by the + edge.
  CHECK(lp.A[2] == std::vector<double>{0, -1, 1, 0, -2});
}

TEST_CASE("d=1 optimum is the average gamma") {
  auto cycles = enumerate_simple_cycles(DeBruijnGraph(1));
  for (auto side : {LpSide::Investor, LpSide::Market}) {
    auto sol = solve(build_lp(example_pair(), cycles, side));
    CHECK(sol.status == LpStatus::Optimal);
    CHECK(sol.M == doctest::Approx(0.68).epsilon(1e-12));
  }
  auto cf = indifference_closed_form(example_pair());
  CHECK(cf.M == doctest::Approx(0.68));
  CHECK(cf.beta[0] == doctest::Approx(-0.32));
  CHECK(cf.beta[1] == doctest::Approx(-0.32));
}

TEST_CASE("zero beta gives the extreme cycle averages") {
  auto cycles = enumerate_simple_cycles(DeBruijnGraph(2));
  auto e = random_pair(2, 17, 0.9);
  auto inv = build_lp(e, cycles, LpSide::Investor);
  LpSolution zero;
  zero.beta.assign(4, 0.0);
  zero.M = max_cycle_average(inv, true);
  auto rep = verify_indifference(zero, inv, 1e-9);
  for (double r : rep.residuals) CHECK(r <= 1e-15);
  CHECK_FALSE(rep.pass);
  CHECK(solve(inv).M <= zero.M + 1e-12);
  CHECK(solve(build_lp(e, cycles, LpSide::Market)).M >=
        max_cycle_average(inv, false) - 1e-12);
}

TEST_CASE("constant gamma needs no beta") {
  auto e = ExpertPair::validate({0.3, 0.3, 0.3, 0.3}, {-0.2, -0.2, -0.2, -0.2});
  auto lp = build_lp(e, enumerate_simple_cycles(DeBruijnGraph(2)), LpSide::Investor);
  LpSolution zero;
  zero.beta.assign(4, 0.0);
  zero.M = 0.25;
  CHECK(verify_indifference(zero, lp, 1e-12).pass);
}

TEST_CASE("closed forms are indifferent") {
  Rng rng(5);
  for (int d = 1; d <= 4; ++d) {
    auto cycles = enumerate_simple_cycles(DeBruijnGraph(d));
    for (int trial = 0; trial < 20; ++trial) {
      auto e = random_pair(d, rng.next(), 0.95);
      auto lp = build_lp(e, cycles, LpSide::Investor);
      auto sol = indifference_closed_form(e);
      auto rep = verify_indifference(sol, lp, 1e-9);
      CHECK(rep.pass);
      CHECK(rep.residuals.size() == cycles.size());
      std::size_t half = e.state_count() / 2;
      for (std::size_t m = 0; m < half; ++m) CHECK(sol.beta[m] == sol.beta[m + half]);
    }
  }
  CHECK_THROWS_AS(indifference_closed_form(random_pair(5, 1, 0.9)), UnsupportedDepth);
}

TEST_CASE("primal, dual and Eulerian bounds agree for d <= 4") {
  Rng rng(8);
  for (int d = 1; d <= 4; ++d) {
    auto cycles = enumerate_simple_cycles(DeBruijnGraph(d));
    for (int trial = 0; trial < 10; ++trial) {
      auto e = random_pair(d, rng.next(), 0.9);
      double avg = gamma(e).mean();
      auto inv = build_lp(e, cycles, LpSide::Investor);
      auto mkt = build_lp(e, cycles, LpSide::Market);
      auto si = solve(inv);
      auto sm = solve(mkt);
      CHECK(si.M == doctest::Approx(avg).epsilon(1e-10));
      CHECK(sm.M == doctest::Approx(avg).epsilon(1e-10));
      for (std::size_t i = 0; i < cycles.size(); ++i) {
        CHECK(cycle_rate(inv, i, si.beta) <= si.M + 1e-9);
        CHECK(cycle_rate(mkt, i, sm.beta) >= sm.M - 1e-9);
      }
      auto dual = dual_mixed_strategy(inv);
      CHECK(dual.value == doctest::Approx(si.M).epsilon(1e-10));
      auto eul = eulerian_mixed_strategy(inv);
      CHECK(eul.value == doctest::Approx(avg).epsilon(1e-12));
      for (const auto* strat : {&dual, &eul}) {
        CHECK(std::accumulate(strat->p.begin(), strat->p.end(), 0.0) ==
              doctest::Approx(1.0));
        for (State m = 0; m < e.state_count(); ++m) {
          double s = 0;
          for (std::size_t i = 0; i < cycles.size(); ++i) {
            s += strat->p[i] * inv.A[i][m] / static_cast<double>(cycles[i].length());
          }
          CHECK(std::abs(s) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("summing circuit rows cancels beta") {
  for (int d = 1; d <= 4; ++d) {
    auto e = random_pair(d, 40 + d, 0.9);
    auto lp = build_lp(e, enumerate_simple_cycles(DeBruijnGraph(d)), LpSide::Investor);
    auto eul = eulerian_mixed_strategy(lp);
    std::vector<double> total(lp.state_count() + 1, 0.0);
    for (std::size_t i = 0; i < lp.cycles.size(); ++i) {
      double mult = eul.p[i] * 2 * static_cast<double>(lp.state_count()) /
                    static_cast<double>(lp.cycles[i].length());
      for (std::size_t j = 0; j < total.size(); ++j) total[j] += mult * lp.A[i][j];
    }
    for (std::size_t m = 0; m < lp.state_count(); ++m) CHECK(std::abs(total[m]) < 1e-12);
    CHECK(total.back() == doctest::Approx(-2.0 * static_cast<double>(lp.state_count())));
  }
}

TEST_CASE("optima scale linearly with gamma") {
  Rng rng(21);
  for (int d = 1; d <= 3; ++d) {
    auto cycles = enumerate_simple_cycles(DeBruijnGraph(d));
    auto [e1, e2] = scaled_pair(d, rng, 2.5);
    for (auto side : {LpSide::Investor, LpSide::Market}) {
      double a = solve(build_lp(e1, cycles, side)).M;
      double b = solve(build_lp(e2, cycles, side)).M;
      CHECK(b == doctest::Approx(2.5 * a).epsilon(1e-10));
    }
    auto c1 = indifference_closed_form(e1);
    auto c2 = indifference_closed_form(e2);
    for (std::size_t m = 0; m < c1.beta.size(); ++m) {
      CHECK(c2.beta[m] == doctest::Approx(2.5 * c1.beta[m]).epsilon(1e-10));
    }
  }
}

TEST_CASE("lp text export") {
  auto lp = build_lp(example_pair(), enumerate_simple_cycles(DeBruijnGraph(1)),
                     LpSide::Investor);
  auto text = format_lp(lp);
  CHECK(text.find("0-1 1 -1 -2 -1.3599999999999999") != std::string::npos);
}
