#include <cmath>

#include "doctest.h"
#include "regretlab/error.hpp"
#include "regretlab/playsim.hpp"
#include "regretlab/rng.hpp"
#include "regretlab/strategylp.hpp"

using namespace regretlab;

namespace {

ExpertPair d1_pair() { return ExpertPair::validate({0.5, 0.2}, {-0.3, -0.2}); }

PlayContext at(double t, State m, double xi, double eta, double eps, int k = 0) {
  return {k, t, m, xi, eta, eps, std::nan("")};
}

}  // namespace

TEST_CASE("guided bid reduces to expert averages") {
  auto e = d1_pair();
  auto lp = indifference_closed_form(e);
  auto sol = classic_solution(lp.M, 1.0);
  auto g = guidance(*sol, lp.beta, e, 0.5, 1, 0, 0.3);
  CHECK(g.fstar == doctest::Approx(e.sum(1) / 2));
  // d = 1: f# = (gamma_1 - gamma_0) D / (4 u_eta), negative here.
  auto gam = gamma(e);
  CHECK(g.fsharp == doctest::Approx((gam[1] - gam[0]) * g.d.D / (4 * g.d.u_eta)));
  CHECK(g.fsharp < 0);

  auto flat = make_pde_solution(affine_data(0.5, 0.5), 0.4, 1.0);
  auto h = guidance(*flat, lp.beta, e, 0.5, 0, 0.2, 0.1);
  CHECK(h.fstar == doctest::Approx(e.q(0)));
  CHECK(h.fsharp == 0);
}

TEST_CASE("emitted bids stay in [-1, 1]") {
  Rng rng(21);
  auto e = random_pair(2, 4, 0.95);
  auto lp = indifference_closed_form(e);
  auto sol = classic_solution(lp.M, 1.0, 1e-4);
  auto wild = InvestorPolicy::perturbed(sol, lp.beta, 20, 40, 9);
  auto guided = InvestorPolicy::pde_guided(sol, lp.beta);
  std::size_t clamps = 0;
  for (int i = 0; i < 100000; ++i) {
    auto ctx = at(rng.uniform(0, 1), static_cast<State>(rng.next() % 4),
                  rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.001, 0.2), i);
    for (const auto* p : {&wild, &guided}) {
      auto b = investor_bid(*p, e, ctx);
      REQUIRE(std::abs(b.f) <= 1);
      clamps += b.clamped;
    }
  }
  CHECK(clamps > 0);
}

TEST_CASE("forcing market cases") {
  auto e = d1_pair();
  auto lp = indifference_closed_form(e);
  auto sol = classic_solution(lp.M, 1.0, 0.01);
  double eps = 1.0 / 32, gam = 3;
  auto mk = MarketPolicy::forcing(sol, lp.beta, gam);
  auto ctx = at(0.2, 0, 0.1, 0, eps);
  auto g = guidance(*sol, lp.beta, e, ctx.t, ctx.m, ctx.xi, ctx.eta);

  ctx.f = g.fstar + eps * g.fsharp;
  CHECK(market_move(mk, e, ctx) == 1);
  ctx.f = g.fstar + 2 * gam * eps;
  CHECK(market_move(mk, e, ctx) == -1);
  ctx.f = g.fstar - 2 * gam * eps;
  CHECK(market_move(mk, e, ctx) == 1);
  ctx.f = g.fstar + eps * g.fsharp - 0.5 * eps;
  REQUIRE(std::abs(ctx.f - g.fstar) < gam * eps);
  CHECK(market_move(mk, e, ctx) == 1);
  ctx.f = g.fstar + eps * g.fsharp + 0.5 * eps;
  CHECK(market_move(mk, e, ctx) == -1);
}

TEST_CASE("gamma estimates") {
  auto e = d1_pair();
  auto lp = indifference_closed_form(e);
  auto grid = gamma_grid(0, 1, 2, -1, 1);

  auto flat = make_pde_solution(affine_data(0.5, 0.2), lp.M, 1.0);
  CHECK(compute_gamma(*flat, e, lp.beta, grid).gamma == 0);

  double g1 = compute_gamma(*classic_solution(lp.M, 1.0, 1e-3), e, lp.beta, grid).gamma;
  double g4 = compute_gamma(*classic_solution(lp.M, 1.0, 4e-3), e, lp.beta, grid).gamma;
  CHECK(g1 / g4 == doctest::Approx(2).epsilon(0.01));

  CHECK_THROWS_AS(compute_gamma(*classic_solution(lp.M, 1.0), e, lp.beta, grid),
                  UnboundedEstimate);

  GammaOptions scaled;
  scaled.tau_scaled = true;
  scaled.tau_shift = 1e-3;
  double g0 = compute_gamma(*classic_solution(lp.M, 1.0, 1e-3), e, lp.beta, grid, scaled).gamma;
  CHECK(g0 == doctest::Approx(g1 * std::sqrt(1e-3)).epsilon(1e-6));

  auto smooth = make_pde_solution(hyperbolic_data(0.5, 0.4), lp.M, 1.0);
  double coarse = compute_gamma(*smooth, e, lp.beta, gamma_grid(0, 1, 2, -1, 1, 9)).gamma;
  double fine = compute_gamma(*smooth, e, lp.beta, gamma_grid(0, 1, 2, -1, 1, 17)).gamma;
  CHECK(coarse > 0);
  CHECK(std::abs(fine - coarse) < 0.05 * coarse);
}

TEST_CASE("zero-step game returns the final data") {
  auto e = d1_pair();
  GameConfig cfg(e, 0.25, 1, 1, FinalData::classic());
  auto tr = run_game(cfg, {1, -0.4, 0.2}, InvestorPolicy::fixed(0.3), MarketPolicy::random(1));
  CHECK(tr.steps.empty());
  CHECK(tr.final_regret == doctest::Approx(0.3));
}

TEST_CASE("trajectory bookkeeping and the regret identity") {
  auto e = random_pair(2, 8, 0.8);
  auto lp = indifference_closed_form(e);
  double eps = 1.0 / 32;
  auto sol = classic_solution(lp.M, 1.0, 2 * eps * eps);
  GameConfig cfg(e, eps, 1, 0, FinalData::classic());
  DeBruijnGraph g(2);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto tr = run_game(cfg, {2, 0.1, -0.2}, InvestorPolicy::pde_guided(sol, lp.beta),
                       MarketPolicy::random(seed));
    REQUIRE(tr.steps.size() == 1024);
    CHECK(tr.clamp_events == 0);
    for (std::size_t k = 0; k + 1 < tr.steps.size(); ++k) {
      const auto& s = tr.steps[k];
      const auto& n = tr.steps[k + 1];
      CHECK(n.xi == s.xi + eps * s.b * e.difference(s.m));
      CHECK(n.eta == s.eta + eps * s.b * (e.sum(s.m) - 2 * s.f));
      CHECK(n.m == g.next(s.m, s.b));
    }
    double x1_0 = (0.1 + -0.2) / 2, x2_0 = (-0.2 - 0.1) / 2;
    auto r = accumulate_regrets(tr, e, x1_0, x2_0);
    CHECK(std::abs((r.x1 + r.x2) - tr.eta_final) < 1e-12);
    CHECK(std::abs((r.x1 - r.x2) - tr.xi_final) < 1e-12);
    double avg_expert = 0.5 * (r.q_loss + r.r_loss);
    CHECK(std::abs(tr.eta_final - (-0.2) - 2 * (r.investor_loss - avg_expert)) < 1e-12);
    CHECK(tr.final_regret == doctest::Approx(std::max(r.x1, r.x2)).epsilon(1e-12));
  }
}

TEST_CASE("policy failures carry the step index") {
  auto e = d1_pair();
  GameConfig cfg(e, 0.25, 1, 0, FinalData::classic());
  auto bad = InvestorPolicy::custom_policy([](const PlayContext& c) {
    if (c.k == 3) throw DerivativeUnavailable("refused");
    return 0.0;
  });
  try {
    run_game(cfg, {}, bad, MarketPolicy::random(1));
    FAIL("expected PolicyError");
  } catch (const PolicyError& err) {
    CHECK(err.step() == 3);
  }
  auto short_script = MarketPolicy::scripted({1, -1});
  CHECK_THROWS_AS(run_game(cfg, {}, InvestorPolicy::fixed(0), short_script), PolicyError);
}

TEST_CASE("investor sees no future moves") {
  auto e = d1_pair();
  GameConfig cfg(e, 0.25, 1, 0, FinalData::classic());
  int calls = 0;
  auto spy = InvestorPolicy::custom_policy([&](const PlayContext& c) {
    CHECK(std::isnan(c.f));
    CHECK(c.k == calls);
    ++calls;
    return 0.1;
  });
  run_game(cfg, {}, spy, MarketPolicy::random(5));
  CHECK(calls == 16);
}

TEST_CASE("cycle averages of L track u_t + M D") {
  for (int d : {1, 2, 3, 4}) {
    auto e = random_pair(d, 40 + d, 0.8);
    auto lp = indifference_closed_form(e);
    auto sol = classic_solution(lp.M, 1.0, 0.25);
    double prev = 1e300;
    for (int inv : {16, 64}) {
      double eps = 1.0 / inv;
      GameConfig cfg(e, eps, 1, 0, FinalData::classic());
      auto tr = run_game(cfg, {}, InvestorPolicy::pde_guided(sol, lp.beta),
                         MarketPolicy::random(100 + d));
      auto avgs = cycle_averages(tr, e, *sol, lp.beta, lp.M);
      REQUIRE(!avgs.empty());
      double worst = 0;
      std::size_t steps = 0;
      for (const auto& c : avgs) {
        worst = std::max(worst, std::abs(c.mean_L - c.reference));
        steps += c.length;
      }
      CHECK(steps <= tr.steps.size());
      CHECK(worst <= 4 * eps);
      CHECK(worst < prev);
      prev = worst;
    }
  }
}

TEST_CASE("exhaustive markets enumerate every b-sequence") {
  auto e = d1_pair();
  auto lp = indifference_closed_form(e);
  double eps = 1.0 / 8;
  GameConfig cfg(e, eps, 6 * eps * eps, 0, FinalData::classic());
  auto sol = classic_solution(lp.M, cfg.T, 2 * eps * eps);
  auto inv = InvestorPolicy::pde_guided(sol, lp.beta);
  auto all = exhaustive_markets(cfg, {}, inv, 4);
  REQUIRE(all.size() == 64);
  for (std::size_t code = 0; code < all.size(); ++code) {
    for (int k = 0; k < 6; ++k) CHECK(all[code].steps[k].b == ((code >> k) & 1 ? 1 : -1));
  }
  auto forced = run_game(cfg, {}, inv, MarketPolicy::forcing(sol, lp.beta, 3));
  double worst = -1e300;
  for (const auto& t : all) worst = std::max(worst, t.final_regret);
  CHECK(worst >= forced.final_regret - 1e-15);
  GameConfig big(e, eps, 17 * eps * eps, 0, FinalData::classic());
  CHECK_THROWS_AS(exhaustive_markets(big, {}, inv), ValidationError);
}
