#include "regretlab/pde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "regretlab/error.hpp"
#include "regretlab/quadrature.hpp"

namespace regretlab {

double degenerate_term(double u_xi, double u_eta, double u_xixi,
                       double u_xieta, double u_etaeta) {
  double num = u_xixi * u_eta * u_eta - 2 * u_xieta * u_xi * u_eta +
               u_etaeta * u_xi * u_xi;
  return num / (2 * u_eta * u_eta);
}

void PdeSolution::check_time(double t) const {
  if (!(t <= T_ + 1e-14)) {
    throw ValidationError("PDE evaluated at t = " + std::to_string(t) +
                          " after the final time T = " + std::to_string(T_));
  }
}

HeatSolution::HeatSolution(Profile1D profile, double C, double T,
                           QuadratureConfig q)
    : profile_(std::move(profile)), C_(C), T_(T), q_(q) {
  if (!(C > 0)) throw ValidationError("diffusion constant needs C > 0");
  if (!profile_.value) throw ValidationError("heat_solve needs a profile value");
}

HeatPoint HeatSolution::evaluate(double t, double xi) const {
  if (!(t <= T_ + 1e-14)) {
    throw ValidationError("heat solution evaluated after the final time");
  }
  if (xi < profile_.lo || xi > profile_.hi) {
    throw DerivativeUnavailable("xi = " + std::to_string(xi) +
                                " outside the profile domain");
  }
  double tau = std::max(0.0, T_ - t);
  HeatPoint out;
  const bool oracles = profile_.d1 && profile_.d2;
  if (tau == 0) {
    if (!oracles) {
      throw DerivativeUnavailable("profile derivatives needed at t = T");
    }
    out.u = profile_.value(xi);
    out.u_xi = profile_.d1(xi);
    out.u_xixi = profile_.d2(xi);
    out.u_t = -0.5 * C_ * out.u_xixi;
    return out;
  }
  double sigma = std::sqrt(C_ * tau);
  out.near_truncation = xi - q_.warning_sigmas * sigma < profile_.lo ||
                        xi + q_.warning_sigmas * sigma > profile_.hi;

  if (profile_.kinks.empty()) {
    const auto& gh = gauss_hermite_normal(q_.order);
    double u = 0, u1 = 0, u2 = 0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
      double z = gh.nodes[i], w = gh.weights[i];
      double x = xi + sigma * z;
      u += w * profile_.value(x);
      if (oracles) {
        u1 += w * profile_.d1(x);
        u2 += w * profile_.d2(x);
      } else {
        double v = profile_.value(x);
        u1 += w * v * z;
        u2 += w * v * (z * z - 1);
      }
    }
    if (!oracles) {
      u1 /= sigma;
      u2 /= sigma * sigma;
    }
    out.u = u;
    out.u_xi = u1;
    out.u_xixi = u2;
  } else {
    // Composite Gauss-Legendre on [xi - L sigma, xi + L sigma], split at
    // kinks, with kernel weights for the derivatives.
    double L = q_.truncation_sigmas;
    double a = xi - L * sigma, b = xi + L * sigma;
    std::vector<double> cuts{a};
    for (double k : profile_.kinks) {
      if (k > a && k < b) cuts.push_back(k);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    const auto& gl = gauss_legendre(q_.panel_order);
    const double norm = 1.0 / std::sqrt(2 * std::numbers::pi);
    double u = 0, u1 = 0, u2 = 0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      double lo = cuts[s], hi = cuts[s + 1];
      int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / sigma)));
      double width = (hi - lo) / panels;
      for (int p = 0; p < panels; ++p) {
        double pl = lo + p * width;
        double mid = pl + 0.5 * width, half = 0.5 * width;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
          double x = mid + half * gl.nodes[i];
          double z = (x - xi) / sigma;
          double w = gl.weights[i] * half * norm * std::exp(-0.5 * z * z) /
                     sigma;
          double v = profile_.value(x);
          u += w * v;
          u1 += w * v * z;
          u2 += w * v * (z * z - 1);
        }
      }
    }
    out.u = u;
    out.u_xi = u1 / sigma;
    out.u_xixi = u2 / (sigma * sigma);
  }
  out.u_t = -0.5 * C_ * out.u_xixi;
  return out;
}

HeatSolution heat_solve(const Profile1D& profile, double C, double T,
                        const QuadratureConfig& q) {
  return HeatSolution(profile, C, T, q);
}

namespace {

class SeparablePde : public PdeSolution {
 public:
  SeparablePde(double c, HeatSolution heat)
      : PdeSolution(heat.diffusion(), heat.final_time()),
        c_(c),
        heat_(std::move(heat)) {}

  PointDerivatives evaluate(double t, double xi, double eta) const override {
    check_time(t);
    auto h = heat_.evaluate(t, xi);
    PointDerivatives p;
    p.u = c_ * eta + h.u;
    p.u_t = h.u_t;
    p.u_xi = h.u_xi;
    p.u_eta = c_;
    p.u_xixi = h.u_xixi;
    p.D = 0.5 * h.u_xixi;
    p.near_truncation = h.near_truncation;
    return p;
  }

 private:
  double c_;
  HeatSolution heat_;
};

class ClassicPde : public PdeSolution {
 public:
  ClassicPde(double C, double T, double delta, double offset)
      : PdeSolution(C, T), delta_(delta), offset_(offset) {}

  PointDerivatives evaluate(double t, double xi, double eta) const override {
    check_time(t);
    double C = diffusion();
    double s = std::max(0.0, final_time() - t) + delta_;
    PointDerivatives p;
    p.u_eta = 0.5;
    if (s == 0) {
      p.u = 0.5 * (eta + std::abs(xi)) + offset_;
      p.u_xi = xi > 0 ? 0.5 : (xi < 0 ? -0.5 : 0.0);
      return p;
    }
    double r = std::sqrt(s);
    double z = xi / r;
    double g2 = classic_G2(z, C) / r;
    p.u = 0.5 * eta + r * classic_G(z, C) + offset_;
    p.u_xi = classic_G1(z, C);
    p.u_xixi = g2;
    p.u_t = -0.5 * C * g2;
    p.D = 0.5 * g2;
    return p;
  }

 private:
  double delta_, offset_;
};

}  // namespace

PdePtr separable_solution(double c, HeatSolution heat) {
  if (!(c > 0)) throw FinalDataViolation("separable data needs c > 0");
  return std::make_shared<SeparablePde>(c, std::move(heat));
}

double classic_G(double z, double C) {
  return std::sqrt(C / (2 * std::numbers::pi)) * std::exp(-z * z / (2 * C)) +
         0.5 * z * std::erf(z / std::sqrt(2 * C));
}

double classic_G1(double z, double C) {
  return 0.5 * std::erf(z / std::sqrt(2 * C));
}

double classic_G2(double z, double C) {
  return std::exp(-z * z / (2 * C)) / std::sqrt(2 * std::numbers::pi * C);
}

PdePtr classic_solution(double C, double T, double delta, double offset) {
  if (!(C > 0)) throw ValidationError("diffusion constant needs C > 0");
  if (!(delta >= 0)) throw ValidationError("smoothing needs delta >= 0");
  return std::make_shared<ClassicPde>(C, T, delta, offset);
}

double envelope_offset(double C, double delta, EnvelopeSide side) {
  if (side == EnvelopeSide::Above) return 0;
  return -std::sqrt(C * delta / (2 * std::numbers::pi));
}

FinalData smooth_classic_envelope(double C, double delta, EnvelopeSide side) {
  if (!(delta > 0)) throw ValidationError("envelope needs delta > 0");
  if (!(C > 0)) throw ValidationError("envelope needs C > 0");
  double off = envelope_offset(C, delta, side);
  double r = std::sqrt(delta);
  Profile1D p;
  p.value = [C, r, off](double x) { return r * classic_G(x / r, C) + off; };
  p.d1 = [C, r](double x) { return classic_G1(x / r, C); };
  p.d2 = [C, r](double x) { return classic_G2(x / r, C) / r; };
  auto d = FinalData::separable("classic_envelope", 0.5, std::move(p));
  d.parameters = {{"C", C},
                  {"delta", delta},
                  {"offset", off},
                  {"above", side == EnvelopeSide::Above ? 1.0 : 0.0}};
  return d;
}

PdePtr make_pde_solution(const FinalData& data, double C, double T,
                         const LevelSetConfig& cfg) {
  switch (data.kind()) {
    case FinalKind::Classic:
      return classic_solution(C, T);
    case FinalKind::Separable: {
      if (data.name() == "classic_envelope" && data.parameters.count("C") &&
          data.parameters.at("C") == C) {
        return classic_solution(C, T, data.parameters.at("delta"),
                                data.parameters.at("offset"));
      }
      return separable_solution(data.eta_slope(),
                                heat_solve(data.profile(), C, T, cfg.quad));
    }
    case FinalKind::General:
      return levelset_solve(data, C, T, cfg);
  }
  throw ValidationError("unknown final data kind");
}

ResidualReport residual_check(const PdeSolution& sol,
                              const std::vector<std::array<double, 3>>& points,
                              double h) {
  ResidualReport rep;
  const double C = sol.diffusion();
  for (const auto& pt : points) {
    double t = pt[0], x = pt[1], e = pt[2];
    if (!(t < sol.final_time() - h)) {
      throw ValidationError("residual_check needs t < T - h");
    }
    auto p = sol.evaluate(t, x, e);
    auto u = [&](double dt, double dx, double de) {
      return sol.value(t + dt, x + dx, e + de);
    };
    double u0 = p.u;
    double ut = (u(h, 0, 0) - u(-h, 0, 0)) / (2 * h);
    double ux = (u(0, h, 0) - u(0, -h, 0)) / (2 * h);
    double ue = (u(0, 0, h) - u(0, 0, -h)) / (2 * h);
    double uxx = (u(0, h, 0) - 2 * u0 + u(0, -h, 0)) / (h * h);
    double uee = (u(0, 0, h) - 2 * u0 + u(0, 0, -h)) / (h * h);
    double uxe = (u(0, h, h) - u(0, h, -h) - u(0, -h, h) + u(0, -h, -h)) /
                 (4 * h * h);
    double D = degenerate_term(ux, ue, uxx, uxe, uee);
    rep.max_fd_residual = std::max(rep.max_fd_residual, std::abs(ut + C * D));
    rep.max_reported_residual =
        std::max(rep.max_reported_residual, std::abs(p.u_t + C * p.D));
    rep.max_u_t_error = std::max(rep.max_u_t_error, std::abs(ut - p.u_t));
    rep.max_u_xi_error = std::max(rep.max_u_xi_error, std::abs(ux - p.u_xi));
    rep.max_u_eta_error = std::max(rep.max_u_eta_error, std::abs(ue - p.u_eta));
    rep.max_D_error = std::max(rep.max_D_error, std::abs(D - p.D));
    ++rep.points;
  }
  return rep;
}

}  // namespace regretlab
