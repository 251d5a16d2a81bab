#include <cmath>
#include <numbers>

#include "doctest.h"
#include "regretlab/error.hpp"
#include "regretlab/pde.hpp"
#include "regretlab/quadrature.hpp"

using namespace regretlab;

namespace {

std::vector<FinalData> smooth_fixtures() {
  return {hyperbolic_data(0.5, 0.5), logcosh_data(0.2, 0.7),
          shear_data(0.3, 0.5)};
}

std::vector<std::array<double, 3>> sample_points() {
  std::vector<std::array<double, 3>> pts;
  for (double t : {0.0, 0.6}) {
    for (double x : {-1.5, -0.4, 0.0, 0.7, 2.0}) {
      for (double e : {-1.0, 0.3, 1.2}) pts.push_back({t, x, e});
    }
  }
  return pts;
}

}  // namespace

TEST_CASE("quadrature rules integrate polynomials") {
  const auto& gh = gauss_hermite_normal(64);
  double m0 = 0, m2 = 0, m4 = 0, m1 = 0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    double z = gh.nodes[i], w = gh.weights[i];
    m0 += w;
    m1 += w * z;
    m2 += w * z * z;
    m4 += w * z * z * z * z;
  }
  CHECK(m0 == doctest::Approx(1).epsilon(1e-13));
  CHECK(std::abs(m1) < 1e-13);
  CHECK(m2 == doctest::Approx(1).epsilon(1e-12));
  CHECK(m4 == doctest::Approx(3).epsilon(1e-12));
  CHECK(gh.nodes.front() > gh.nodes.back());

  const auto& gl = gauss_legendre(10);
  double s = 0, s6 = 0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    s += gl.weights[i];
    s6 += gl.weights[i] * std::pow(gl.nodes[i], 6);
  }
  CHECK(s == doctest::Approx(2).epsilon(1e-14));
  CHECK(s6 == doctest::Approx(2.0 / 7).epsilon(1e-14));
  CHECK_THROWS_AS(gauss_legendre(0), ValidationError);
  CHECK_THROWS_AS(gauss_hermite_normal(400), ValidationError);
  const auto& big = gauss_hermite_normal(180);
  double total = 0;
  for (double w : big.weights) total += w;
  CHECK(total == doctest::Approx(1).epsilon(1e-13));
}

TEST_CASE("classic G satisfies its ODE and limits") {
  for (double C : {0.36, 0.5, 1.0, 2.0}) {
    CHECK(classic_G(0, C) == doctest::Approx(std::sqrt(C / (2 * std::numbers::pi))));
    double z = 12 * std::sqrt(C);
    CHECK(std::abs(classic_G(z, C) / z - 0.5) < 1e-10);
    for (int i = 0; i < 100; ++i) {
      double zi = -5 + 10.0 * i / 99;
      double res = classic_G(zi, C) - zi * classic_G1(zi, C) - C * classic_G2(zi, C);
      CHECK(std::abs(res) <= 1e-9);
    }
  }
  CHECK(classic_G(0, 2) == doctest::Approx(1 / std::sqrt(std::numbers::pi)));
}

TEST_CASE("heat quadrature reproduces the classic closed form") {
  const double C = 0.68, T = 1;
  auto classic = classic_solution(C, T);
  auto heat = heat_solve(FinalData::classic().profile(), C, T);
  double worst = 0;
  for (double t : {0.0, 0.3, 0.9, 0.999}) {
    for (double x = -2; x <= 2.0001; x += 0.25) {
      auto a = classic->evaluate(t, x, 0);
      auto b = heat.evaluate(t, x);
      worst = std::max({worst, std::abs(a.u - b.u), std::abs(a.u_xi - b.u_xi),
                        std::abs(a.u_t - b.u_t)});
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("heat solution keeps affine data and its final condition") {
  Profile1D lin;
  lin.value = [](double x) { return 0.3 * x - 0.2; };
  auto h = heat_solve(lin, 1.0, 2.0);
  for (double x : {-3.0, 0.0, 1.7}) {
    auto p = h.evaluate(0.0, x);
    CHECK(p.u == doctest::Approx(0.3 * x - 0.2).epsilon(1e-13));
    CHECK(p.u_xi == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(std::abs(p.u_xixi) < 1e-11);
  }
  auto hyp = hyperbolic_data(0.5, 0.5);
  auto hs = heat_solve(hyp.profile(), 0.5, 1.0);
  CHECK(hs.evaluate(1.0, 0.8).u == doctest::Approx(0.5 * std::sqrt(1.64)));
  CHECK(hs.evaluate(1.0 - 1e-12, 0.8).u ==
        doctest::Approx(0.5 * std::sqrt(1.64)).epsilon(1e-10));
}

TEST_CASE("heat solution flags truncation near the profile domain edge") {
  Profile1D p;
  p.value = [](double x) { return x * x; };
  p.lo = -1;
  p.hi = 1;
  auto h = heat_solve(p, 1.0, 1.0);
  CHECK(h.evaluate(0.99, 0.0).near_truncation == false);
  CHECK(h.evaluate(0.0, 0.5).near_truncation);
  CHECK_THROWS_AS(h.evaluate(0.0, 1.5), DerivativeUnavailable);
}

TEST_CASE("classic solution derivatives match finite differences") {
  auto sol = classic_solution(0.68, 1.0);
  std::vector<std::array<double, 3>> pts;
  for (double t : {0.0, 0.5, 0.9}) {
    for (double x : {-1.0, -0.1, 0.0, 0.4, 1.5}) pts.push_back({t, x, 0.2});
  }
  auto rep = residual_check(*sol, pts, 1e-4);
  CHECK(rep.points == pts.size());
  CHECK(rep.max_u_t_error <= 1e-6);
  CHECK(rep.max_u_xi_error <= 1e-6);
  CHECK(rep.max_u_eta_error <= 1e-6);
  CHECK(rep.max_D_error <= 1e-5);
  CHECK(rep.max_reported_residual <= 1e-14);
  CHECK_THROWS_AS(residual_check(*sol, {{1.0, 0, 0}}, 1e-4), ValidationError);
}

TEST_CASE("affine solution has D = 0 and u_t = 0") {
  auto sol = make_pde_solution(affine_data(0.7, 0.2), 1.0, 1.0);
  auto p = sol->evaluate(0.2, 0.3, -0.4);
  CHECK(std::abs(p.D) < 1e-12);
  CHECK(std::abs(p.u_t) < 1e-12);
  CHECK(p.u == doctest::Approx(0.7 * -0.4 + 0.2 * 0.3));
}

TEST_CASE("level-set path agrees with the separable path") {
  const double C = 0.5, T = 1;
  auto data = hyperbolic_data(0.5, 0.5);
  auto fast = make_pde_solution(data, C, T);
  auto slow = levelset_solve(data, C, T);
  double worst = 0;
  for (double t : {0.0, 0.5, 1.0}) {
    for (double x = -2; x <= 2.0001; x += 0.5) {
      for (double e : {-1.0, 0.0, 1.5}) {
        auto a = fast->evaluate(t, x, e);
        auto b = slow->evaluate(t, x, e);
        worst = std::max({worst, std::abs(a.u - b.u), std::abs(a.u_xi - b.u_xi),
                          std::abs(a.u_eta - b.u_eta), std::abs(a.D - b.D)});
      }
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("flat level sets stay flat") {
  auto flat = FinalData::general(
      "flat",
      [](double, double e) {
        PhiDerivatives p;
        p.phi = e;
        p.eta = 1;
        return p;
      },
      1.0);
  auto sol = levelset_solve(flat, 1.0, 1.0);
  for (double e : {-2.0, 0.0, 3.0}) {
    auto p = sol->evaluate(0.0, 0.7, e);
    CHECK(p.u == doctest::Approx(e).epsilon(1e-12));
    CHECK(p.u_eta == doctest::Approx(1));
    CHECK(std::abs(p.u_t) < 1e-14);
  }
}

TEST_CASE("smooth fixtures propagate their structure") {
  const double C = 0.5, T = 1;
  for (const auto& data : smooth_fixtures()) {
    CAPTURE(data.name());
    validate_final_data(data, SampleBox{}, true);
    auto sol = make_pde_solution(data, C, T);
    double c = data.eta_slope();
    for (const auto& pt : sample_points()) {
      auto p = sol->evaluate(pt[0], pt[1], pt[2]);
      CHECK(p.u_eta >= c - 1e-8);
      CHECK(std::abs(p.u_xi) <= p.u_eta + 1e-8);
      CHECK(p.u_t <= 1e-8);
    }
    auto rep = residual_check(*sol, sample_points(), 1e-3);
    CHECK(rep.max_fd_residual <= 1e-5);
    CHECK(rep.max_reported_residual <= 1e-10);
  }
}

TEST_CASE("even data gives an even solution") {
  auto sol = levelset_solve(logcosh_data(0.2, 0.7), 0.5, 1.0);
  for (double x : {0.3, 1.1}) {
    auto a = sol->evaluate(0.2, x, 0.4);
    auto b = sol->evaluate(0.2, -x, 0.4);
    CHECK(a.u == doctest::Approx(b.u).epsilon(1e-12));
    CHECK(a.u_xi == doctest::Approx(-b.u_xi).epsilon(1e-10));
  }
}

TEST_CASE("final data validation names the violated condition") {
  auto bad_slope = FinalData::general(
      "bad",
      [](double x, double e) {
        PhiDerivatives p;
        p.phi = 0.1 * e + x;
        p.xi = 1;
        p.eta = 0.1;
        return p;
      },
      0.1);
  try {
    validate_final_data(bad_slope, SampleBox{}, false);
    FAIL("expected a violation");
  } catch (const FinalDataViolation& e) {
    CHECK(std::string(e.what()).find("|phi_xi| <= phi_eta") != std::string::npos);
  }
  CHECK_THROWS_AS(hyperbolic_data(0.0, 0.5), FinalDataViolation);
  CHECK_THROWS_AS(levelset_solve(FinalData::classic(), 1, 1), ValidationError);
}

TEST_CASE("classic envelopes bracket the kinked data") {
  const double C = 0.68, delta = 0.05;
  auto above = smooth_classic_envelope(C, delta, EnvelopeSide::Above);
  auto below = smooth_classic_envelope(C, delta, EnvelopeSide::Below);
  auto classic = FinalData::classic();
  for (double x = -3; x <= 3.0001; x += 0.05) {
    CHECK(above.value(x, 0.3) >= classic.value(x, 0.3) - 1e-15);
    CHECK(below.value(x, 0.3) <= classic.value(x, 0.3) + 1e-15);
  }
  CHECK(above.derivatives(0, 0).xixi ==
        doctest::Approx(1 / std::sqrt(2 * std::numbers::pi * C * delta)));
  // The envelope's exact solution is the shifted classic one.
  auto soft = smooth_classic_envelope(C, 0.5, EnvelopeSide::Below);
  auto exact = make_pde_solution(soft, C, 1.0);
  auto heat = separable_solution(0.5, heat_solve(soft.profile(), C, 1.0));
  for (double x : {-0.5, 0.0, 0.8}) {
    CHECK(exact->value(0.1, x, 0.2) == doctest::Approx(heat->value(0.1, x, 0.2)).epsilon(1e-10));
  }
  // Large delta: Gaussian-mollified |xi|/2.
  auto wide = smooth_classic_envelope(C, 100, EnvelopeSide::Above);
  CHECK(wide.value(0, 0) == doctest::Approx(std::sqrt(C * 100 / (2 * std::numbers::pi))));
}
