#include <chrono>
#include <cmath>

#include "doctest.h"
#include "regretlab/error.hpp"
#include "regretlab/game.hpp"
#include "regretlab/pde.hpp"
#include "regretlab/rng.hpp"

using namespace regretlab;

namespace {

ExpertPair constant_pair() { return ExpertPair::validate({0.5, 0.5}, {-0.5, -0.5}); }
ExpertPair lattice_pair() { return ExpertPair::validate({0.5, 0.2}, {-0.3, -0.2}); }

GameConfig steps_config(ExpertPair e, double eps, int N, FinalData data) {
  return GameConfig(std::move(e), eps, N * eps * eps, 0, std::move(data));
}

}  // namespace

TEST_CASE("game config requires integral N") {
  auto e = constant_pair();
  CHECK(GameConfig(e, 0.25, 1, 0, FinalData::classic()).steps() == 16);
  CHECK(GameConfig(e, 1.0 / 64, 1, 0.75, FinalData::classic()).steps() == 1024);
  CHECK_THROWS_AS(GameConfig(e, 0.3, 1, 0, FinalData::classic()), ValidationError);
  CHECK_THROWS_AS(GameConfig(e, 0.25, 0, 1, FinalData::classic()), ValidationError);
}

TEST_CASE("lattice detection") {
  auto lat = detect_lattice(lattice_pair());
  REQUIRE(lat);
  CHECK(lat->base == doctest::Approx(0.4));
  CHECK(lat->multiples == std::vector<int>{2, 1});
  CHECK_FALSE(detect_lattice(ExpertPair::validate({0.5, 0.1}, {0.5 - 1 / std::sqrt(2.0), 0})));
}

TEST_CASE("separable minmax matches a direct scan") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    double vp = rng.uniform(-1, 1), vm = rng.uniform(-1, 1);
    double eps = rng.uniform(0.01, 0.5), c = rng.uniform(0.1, 1), s = rng.uniform(-1, 1);
    double exact = separable_minmax(vp, vm, eps, c, s);
    double scan = 1e300;
    for (int i = 0; i <= 20000; ++i) {
      double f = -1 + i * 1e-4;
      scan = std::min(scan, std::max(eps * c * (s - 2 * f) + vp, -eps * c * (s - 2 * f) + vm));
    }
    CHECK(exact <= scan + 1e-15);
    CHECK(scan - exact <= 2 * eps * c * 1e-4);
  }
}

TEST_CASE("zero steps return the final data") {
  auto cfg = steps_config(lattice_pair(), 0.25, 0, FinalData::classic());
  auto sep = dpp_value_separable(cfg);
  auto gen = dpp_value_general(cfg);
  CHECK(sep.initial_value(0, 0.1, 0.3) == doctest::Approx(0.2));
  CHECK(gen.initial_value(1, 0.0, 0.3) == doctest::Approx(0.15));
  CHECK(brute_force_value(cfg, {0, -0.4, 1.0}) == doctest::Approx(0.7));
}

TEST_CASE("one step minimax equals |q - r| / 2") {
  auto cfg = steps_config(constant_pair(), 1.0, 1, FinalData::classic());
  CHECK(brute_force_value(cfg, {0, 0, 0}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dpp_value_separable(cfg).initial_value(0, 0, 0) == doctest::Approx(0.5));
  CHECK(dpp_value_general(cfg).initial_value(0, 0, 0) == doctest::Approx(0.5));
  // Endpoint-only bids do worse for the investor.
  CHECK(brute_force_value(cfg, {0, 0, 0}, 2) >= brute_force_value(cfg, {0, 0, 0}) - 1e-15);
  CHECK(brute_force_value(cfg, {0, 0, 0}, 2) == doctest::Approx(1.5));
}

TEST_CASE("brute force symmetry under q, r -> -q, -r") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    // History-independent experts: the literal symmetry.
    double q = rng.uniform(-0.8, 0.8), r = rng.uniform(-0.8, 0.8);
    auto e = ExpertPair::validate({q, q}, {r, r});
    auto f = ExpertPair::validate({-q, -q}, {-r, -r});
    auto a = brute_force_value(steps_config(e, 0.5, 2, FinalData::classic()), {1, 0.2, 0}, 401);
    auto b = brute_force_value(steps_config(f, 0.5, 2, FinalData::classic()), {1, -0.2, 0}, 401);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));

    // General experts: flipping every b (and f) complements the state.
    auto g = random_pair(2, rng.next(), 0.8);
    std::vector<double> nq(4), nr(4);
    for (State m = 0; m < 4; ++m) {
      nq[m] = -g.q(3 - m);
      nr[m] = -g.r(3 - m);
    }
    auto h = ExpertPair::validate(nq, nr);
    auto c = brute_force_value(steps_config(g, 0.5, 2, FinalData::classic()), {1, 0.2, 0}, 401);
    auto dv = brute_force_value(steps_config(h, 0.5, 2, FinalData::classic()), {2, 0.2, 0}, 401);
    CHECK(c == doctest::Approx(dv).epsilon(1e-12));
  }
}

TEST_CASE("separable and general paths agree") {
  auto e = lattice_pair();
  for (auto data : {FinalData::classic(), hyperbolic_data(0.5, 0.4)}) {
    auto cfg = steps_config(e, 0.25, 6, data);
    auto sep = dpp_value_separable(cfg);
    GridOptions go;
    go.eta_step = 0.02;
    go.eta_halfwidth = 0.5;
    auto gen = dpp_value_general(cfg, go);
    CHECK(sep.xi_axis == "lattice");
    for (State m = 0; m < 2; ++m) {
      for (double eta : {0.0, 0.3}) {
        CHECK(gen.initial_value(m, 0, eta) ==
              doctest::Approx(sep.initial_value(m, 0, eta)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("general path matches the brute-force oracle") {
  Rng rng(5);
  std::vector<FinalData> data{FinalData::classic(), logcosh_data(0.2, 0.7),
                              shear_data(0.3, 0.5)};
  for (int trial = 0; trial < 6; ++trial) {
    int d = 1 + trial % 2;
    auto e = random_pair(d, rng.next(), 0.8);
    int N = 2 + trial % 3;
    auto cfg = steps_config(e, 0.25, N, data[trial % 3]);
    GridOptions go;
    go.eta_step = 0.01;
    go.eta0 = 0.2;
    auto gen = dpp_value_general(cfg, go);
    CHECK(gen.xi_axis == "tree");
    auto bf = brute_force(cfg, {1, 0, 0.2}, 2001);
    CHECK(bf.used_monotone_search);
    double g = gen.initial_value(1, 0, 0.2);
    CHECK(bf.value >= g - 1e-6);
    CHECK(std::abs(bf.value - g) <= 1e-3);
  }
}

TEST_CASE("brute-force monotone search equals the full scan") {
  auto e = random_pair(2, 99, 0.8);
  auto wiggle = FinalData::general(
      "wiggle",
      [](double x, double y) {
        PhiDerivatives p;
        p.phi = y + 0.5 * std::abs(x) - 0.3 * std::sin(3 * y);
        p.eta = 1 - 0.9 * std::cos(3 * y);
        return p;
      },
      0.1);
  for (const auto& data : {logcosh_data(0.2, 0.7), wiggle}) {
    auto cfg = steps_config(e, 0.25, 3, data);
    auto fast = brute_force(cfg, {2, 0.1, 0}, 201);
    auto slow = brute_force(cfg, {2, 0.1, 0}, 201, false);
    CHECK(fast.used_monotone_search);
    CHECK_FALSE(slow.used_monotone_search);
    CHECK(fast.value == doctest::Approx(slow.value).epsilon(1e-13));
  }
}

TEST_CASE("classic value translates with eta") {
  auto cfg = steps_config(lattice_pair(), 0.25, 5, FinalData::classic());
  auto gen = dpp_value_general(cfg);
  CHECK(gen.initial_value(0, 0, 0.25) - gen.initial_value(0, 0, 0) ==
        doctest::Approx(0.125).epsilon(1e-10));
}

TEST_CASE("value increases with eta for monotone data") {
  auto cfg = steps_config(random_pair(1, 7, 0.7), 0.25, 4, logcosh_data(0.2, 0.7));
  GridOptions go;
  go.eta_step = 0.05;
  auto gen = dpp_value_general(cfg, go);
  const auto& s = gen.slice(0, 0);
  std::size_t E = s.eta.size();
  for (std::size_t j = 1; j < E; ++j) CHECK(s.v[j] > s.v[j - 1]);
}

TEST_CASE("interpolated axis converges to the lattice value") {
  auto e = lattice_pair();
  auto cfg = steps_config(e, 1.0 / 8, 64, smooth_classic_envelope(0.4, 0.25, EnvelopeSide::Above));
  double exact = dpp_value_separable(cfg).initial_value(0, 0, 0);
  GridOptions coarse, fine;
  coarse.xi_axis = fine.xi_axis = XiAxis::Interpolated;
  coarse.xi_step = 0.0123;
  fine.xi_step = coarse.xi_step / 2;
  double a = dpp_value_separable(cfg, coarse).initial_value(0, 0, 0);
  double b = dpp_value_separable(cfg, fine).initial_value(0, 0, 0);
  CHECK(std::abs(b - exact) < std::abs(a - exact) + 1e-12);
  CHECK(std::abs(a - exact) < 1e-5);
}

TEST_CASE("discrete values approach the PDE as eps shrinks") {
  auto e = lattice_pair();
  auto pde = classic_solution(0.4, 1.0);
  double prev = 1e300;
  for (int inv : {4, 8, 16, 32}) {
    auto cfg = GameConfig(e, 1.0 / inv, 1, 0, FinalData::classic());
    double v = dpp_value_separable(cfg).initial_value(0, 0, 0);
    double err = std::abs(v - pde->value(0, 0, 0));
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("queries outside the value grid raise") {
  auto cfg = steps_config(lattice_pair(), 0.25, 3, FinalData::classic());
  auto sep = dpp_value_separable(cfg);
  CHECK_THROWS_AS(sep.initial_value(0, 50, 0), GridOutOfRange);
  CHECK_THROWS_AS(sep.value(7, 0, 0, 0), GridOutOfRange);
  auto bf_cfg = steps_config(lattice_pair(), 0.25, 9, FinalData::classic());
  CHECK_THROWS_AS(brute_force_value(bf_cfg, {}), ValidationError);
}
