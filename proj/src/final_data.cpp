#include "regretlab/final_data.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "regretlab/error.hpp"

namespace regretlab {

FinalData FinalData::classic() {
  FinalData d;
  d.kind_ = FinalKind::Classic;
  d.name_ = "classic";
  d.c_ = 0.5;
  d.profile_.value = [](double x) { return 0.5 * std::abs(x); };
  d.profile_.d1 = [](double x) { return x > 0 ? 0.5 : (x < 0 ? -0.5 : 0.0); };
  d.profile_.d2 = [](double) { return 0.0; };
  d.profile_.kinks = {0.0};
  return d;
}

FinalData FinalData::separable(std::string name, double c, Profile1D profile) {
  if (!(c > 0)) {
    throw FinalDataViolation(
        "separable final data needs eta-slope c > 0 (phi_eta >= c > 0)");
  }
  if (!profile.value) throw ValidationError("separable profile has no value");
  FinalData d;
  d.kind_ = FinalKind::Separable;
  d.name_ = std::move(name);
  d.c_ = c;
  d.profile_ = std::move(profile);
  return d;
}

FinalData FinalData::general(std::string name,
                             std::function<PhiDerivatives(double, double)> eval,
                             double eta_slope_bound) {
  if (!(eta_slope_bound > 0)) {
    throw FinalDataViolation("general final data needs phi_eta >= c > 0");
  }
  FinalData d;
  d.kind_ = FinalKind::General;
  d.name_ = std::move(name);
  d.c_ = eta_slope_bound;
  d.eval_ = std::move(eval);
  return d;
}

double FinalData::value(double xi, double eta) const {
  if (kind_ == FinalKind::General) return eval_(xi, eta).phi;
  return c_ * eta + profile_.value(xi);
}

PhiDerivatives FinalData::derivatives(double xi, double eta) const {
  if (kind_ == FinalKind::General) return eval_(xi, eta);
  if (!profile_.d1 || !profile_.d2) {
    throw DerivativeUnavailable("profile '" + name_ +
                                "' has no derivative oracles");
  }
  PhiDerivatives p;
  p.phi = c_ * eta + profile_.value(xi);
  p.xi = profile_.d1(xi);
  p.eta = c_;
  p.xixi = profile_.d2(xi);
  return p;
}

FinalData FinalData::as_general() const {
  if (kind_ == FinalKind::General) return *this;
  auto self = std::make_shared<FinalData>(*this);
  FinalData g = general(name_, [self](double x, double e) {
    return self->derivatives(x, e);
  }, c_);
  g.parameters = parameters;
  return g;
}

FinalData hyperbolic_data(double c, double a) {
  Profile1D p;
  p.value = [a](double x) { return a * std::sqrt(1 + x * x); };
  p.d1 = [a](double x) { return a * x / std::sqrt(1 + x * x); };
  p.d2 = [a](double x) { return a / std::pow(1 + x * x, 1.5); };
  auto d = FinalData::separable("hyperbolic", c, std::move(p));
  d.parameters = {{"c", c}, {"a", a}};
  return d;
}

FinalData affine_data(double c, double a) {
  Profile1D p;
  p.value = [a](double x) { return a * x; };
  p.d1 = [a](double) { return a; };
  p.d2 = [](double) { return 0.0; };
  auto d = FinalData::separable("affine", c, std::move(p));
  d.parameters = {{"c", c}, {"a", a}};
  return d;
}

namespace {

double log_cosh(double x) {
  double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2 * ax)) - std::log(2.0);
}

}  // namespace

FinalData logcosh_data(double alpha, double a) {
  auto d = FinalData::general(
      "logcosh",
      [alpha, a](double x, double e) {
        double s = std::sqrt(1 + x * x);
        double th = std::tanh(e);
        PhiDerivatives p;
        p.phi = e + alpha * log_cosh(e) + a * s;
        p.xi = a * x / s;
        p.eta = 1 + alpha * th;
        p.xixi = a / (s * s * s);
        p.etaeta = alpha * (1 - th * th);
        return p;
      },
      1 - std::abs(alpha));
  d.parameters = {{"alpha", alpha}, {"a", a}};
  return d;
}

FinalData shear_data(double a, double kappa) {
  auto d = FinalData::general(
      "shear",
      [a, kappa](double x, double e) {
        double w = x + kappa * e;
        double s = std::sqrt(1 + w * w);
        double s3 = s * s * s;
        PhiDerivatives p;
        p.phi = e + a * s;
        p.xi = a * w / s;
        p.eta = 1 + a * kappa * w / s;
        p.xixi = a / s3;
        p.xieta = a * kappa / s3;
        p.etaeta = a * kappa * kappa / s3;
        return p;
      },
      1 - std::abs(a * kappa));
  d.parameters = {{"a", a}, {"kappa", kappa}};
  return d;
}

void validate_final_data(const FinalData& data, const SampleBox& box,
                         bool require_level_convexity) {
  if (data.kind() == FinalKind::Classic) return;
  const double tol = 1e-12;
  double c = data.eta_slope();
  auto where = [](double x, double e) {
    std::ostringstream os;
    os << " at (xi, eta) = (" << x << ", " << e << ")";
    return os.str();
  };
  for (int i = 0; i < box.xi_count; ++i) {
    double x = box.xi_min + (box.xi_max - box.xi_min) * i /
                                std::max(1, box.xi_count - 1);
    for (int j = 0; j < box.eta_count; ++j) {
      double e = box.eta_min + (box.eta_max - box.eta_min) * j /
                                   std::max(1, box.eta_count - 1);
      auto p = data.derivatives(x, e);
      if (!(p.eta >= c - tol)) {
        throw FinalDataViolation(
            "final data needs phi_eta >= c > 0; phi_eta = " +
            std::to_string(p.eta) + " < c = " + std::to_string(c) +
            where(x, e));
      }
      if (!(std::abs(p.xi) <= p.eta + tol)) {
        throw FinalDataViolation("final data needs |phi_xi| <= phi_eta" +
                                 where(x, e));
      }
      double curv = p.xixi * p.eta * p.eta - 2 * p.xieta * p.xi * p.eta +
                    p.etaeta * p.xi * p.xi;
      if (require_level_convexity && curv < -tol) {
        throw FinalDataViolation(
            "final data needs phi_xixi phi_eta^2 - 2 phi_xieta phi_xi phi_eta "
            "+ phi_etaeta phi_xi^2 >= 0 (level sets concave in xi)" +
            where(x, e));
      }
    }
  }
}

}  // namespace regretlab
