#include <cmath>
#include <string>

#include "regretlab/error.hpp"
#include "regretlab/pde.hpp"
#include "regretlab/quadrature.hpp"

namespace regretlab {

LevelSetField::LevelSetField(FinalData phi, double C, double T,
                             LevelSetConfig cfg)
    : phi_(std::move(phi)), C_(C), T_(T), cfg_(cfg) {
  if (!(C > 0)) throw ValidationError("diffusion constant needs C > 0");
  if (cfg_.y_count < 2 || !(cfg_.y_max > cfg_.y_min)) {
    throw ValidationError("level-set y-grid needs y_count >= 2, y_max > y_min");
  }
  y_grid_.resize(cfg_.y_count);
  for (int i = 0; i < cfg_.y_count; ++i) {
    y_grid_[i] = cfg_.y_min + (cfg_.y_max - cfg_.y_min) * i / (cfg_.y_count - 1);
  }
}

double LevelSetField::g(double xi, double y, double hint) const {
  const double c = phi_.eta_slope();
  double eta = hint;
  auto p = phi_.derivatives(xi, eta);
  double f = p.phi - y;
  if (f == 0) return eta;
  // phi_eta >= c puts the root within |f| / c of the current point.
  double lo = f > 0 ? eta - f / c : eta;
  double hi = f > 0 ? eta : eta - f / c;
  for (int it = 0; it < 200; ++it) {
    double next = eta - f / p.eta;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    double step = next - eta;
    eta = next;
    p = phi_.derivatives(xi, eta);
    f = p.phi - y;
    if (f > 0) {
      hi = eta;
    } else if (f < 0) {
      lo = eta;
    } else {
      return eta;
    }
    if (std::abs(step) <= cfg_.root_tolerance * (1 + std::abs(eta)) ||
        hi - lo <= cfg_.root_tolerance * (1 + std::abs(eta))) {
      return eta - f / p.eta;
    }
  }
  throw NumericalError("level-set root for g(xi; y) did not converge at xi = " +
                       std::to_string(xi));
}

LevelSetField::GPoint LevelSetField::g_point(double xi, double y,
                                             double hint) const {
  GPoint out;
  out.g = g(xi, y, hint);
  auto p = phi_.derivatives(xi, out.g);
  if (!(p.eta > 0)) {
    throw FoliationViolation("phi_eta <= 0 at xi = " + std::to_string(xi));
  }
  double pe = p.eta, pe2 = pe * pe, pe3 = pe2 * pe;
  out.g_y = 1 / pe;
  out.g_xi = -p.xi / pe;
  out.g_xixi =
      -(p.xixi * pe2 - 2 * p.xieta * p.xi * pe + p.etaeta * p.xi * p.xi) / pe3;
  out.g_yy = -p.etaeta / pe3;
  out.g_xiy = -(p.xieta + p.etaeta * out.g_xi) / pe2;
  return out;
}

LevelSetField::HPoint LevelSetField::h(double t, double xi, double y,
                                       double hint) const {
  if (!(t <= T_ + 1e-14)) {
    throw ValidationError("level-set field evaluated after the final time");
  }
  double tau = std::max(0.0, T_ - t);
  HPoint out;
  if (tau == 0) {
    auto gp = g_point(xi, y, hint);
    out = {gp.g, 0, gp.g_xi, gp.g_y, gp.g_xixi, gp.g_xiy, gp.g_yy};
  } else {
    double sigma = std::sqrt(C_ * tau);
    const auto& gh = gauss_hermite_normal(cfg_.quad.order);
    double guess = hint;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
      double w = gh.weights[i];
      auto gp = g_point(xi + sigma * gh.nodes[i], y, guess);
      guess = gp.g;
      out.h += w * gp.g;
      out.h_xi += w * gp.g_xi;
      out.h_y += w * gp.g_y;
      out.h_xixi += w * gp.g_xixi;
      out.h_xiy += w * gp.g_xiy;
      out.h_yy += w * gp.g_yy;
    }
  }
  out.h_t = -0.5 * C_ * out.h_xixi;
  if (!(out.h_y > 0)) {
    throw FoliationViolation("level-set foliation lost: h_y <= 0 at (t, xi, y) = (" +
                             std::to_string(t) + ", " + std::to_string(xi) +
                             ", " + std::to_string(y) + ")");
  }
  return out;
}

double LevelSetField::invert(double t, double xi, double eta) const {
  double y = phi_.value(xi, eta);
  auto H = h(t, xi, y, eta);
  double f = H.h - eta;
  if (f == 0) return y;
  // Expand a bracket along the Newton direction until the sign flips.
  double lo, hi;
  double step = -f / H.h_y;
  double other = y + 1.5 * step;
  for (int it = 0;; ++it) {
    if (it > 60) throw NumericalError("level-set inversion found no bracket");
    double fo = h(t, xi, other, eta).h - eta;
    if ((fo > 0) != (f > 0) || fo == 0) break;
    other = y + (other - y) * 2;
  }
  lo = std::min(y, other);
  hi = std::max(y, other);
  const double tol = cfg_.root_tolerance;
  for (int it = 0; it < 200; ++it) {
    double next = y - f / H.h_y;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    double moved = next - y;
    y = next;
    H = h(t, xi, y, eta);
    f = H.h - eta;
    if (f > 0) {
      hi = y;
    } else if (f < 0) {
      lo = y;
    } else {
      return y;
    }
    if (std::abs(moved) <= tol * (1 + std::abs(y)) ||
        hi - lo <= tol * (1 + std::abs(y))) {
      return y - f / H.h_y;
    }
  }
  throw NumericalError("level-set inversion did not converge");
}

namespace {

class LevelSetPde : public PdeSolution {
 public:
  explicit LevelSetPde(LevelSetField field)
      : PdeSolution(field.diffusion(), field.final_time()),
        field_(std::move(field)) {}

  PointDerivatives evaluate(double t, double xi, double eta) const override {
    check_time(t);
    double y = field_.invert(t, xi, eta);
    auto H = field_.h(t, xi, y, eta);
    double hy = H.h_y;
    PointDerivatives p;
    p.u = y;
    p.u_eta = 1 / hy;
    p.u_xi = -H.h_xi / hy;
    p.u_etaeta = -H.h_yy / (hy * hy * hy);
    p.u_xieta = -(H.h_xiy + H.h_yy * p.u_xi) / (hy * hy);
    p.u_xixi =
        -(H.h_xixi + 2 * H.h_xiy * p.u_xi + H.h_yy * p.u_xi * p.u_xi) / hy;
    p.u_t = -p.u_eta * H.h_t;
    p.D = -0.5 * p.u_eta * H.h_xixi;
    return p;
  }

  double value(double t, double xi, double eta) const override {
    check_time(t);
    return field_.invert(t, xi, eta);
  }

 private:
  LevelSetField field_;
};

}  // namespace

PdePtr levelset_solve(const FinalData& phi, double C, double T,
                      const LevelSetConfig& cfg) {
  FinalData data = phi.kind() == FinalKind::General ? phi : phi.as_general();
  if (phi.kind() == FinalKind::Classic) {
    throw ValidationError(
        "level-set path needs smooth final data; classic data has a kink");
  }
  validate_final_data(data, SampleBox{}, false);
  return std::make_shared<LevelSetPde>(LevelSetField(data, C, T, cfg));
}

}  // namespace regretlab
