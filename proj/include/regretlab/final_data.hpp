#pragma once

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace regretlab {

// One-dimensional profile phibar(xi). Derivative oracles are optional;
// kinks list points where the profile is not smooth.
struct Profile1D {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  std::vector<double> kinks;
  // Interval on which the profile can be trusted.
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

struct PhiDerivatives {
  double phi = 0, xi = 0, eta = 0, xixi = 0, xieta = 0, etaeta = 0;
};

enum class FinalKind { Classic, Separable, General };

// Final-time payoff phi(xi, eta) of the regret game.
class FinalData {
 public:
  static FinalData classic();
  // phi = c eta + phibar(xi).
  static FinalData separable(std::string name, double c, Profile1D profile);
  // eta_slope_bound is a constant c > 0 with phi_eta >= c everywhere.
  static FinalData general(std::string name,
                           std::function<PhiDerivatives(double, double)> eval,
                           double eta_slope_bound);

  FinalKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  // eta-slope for separable/classic data, the declared lower bound otherwise.
  double eta_slope() const { return c_; }
  const Profile1D& profile() const { return profile_; }

  double value(double xi, double eta) const;
  // Classic data reports the one-sided limits at xi = 0.
  PhiDerivatives derivatives(double xi, double eta) const;

  // The same payoff through the general interface.
  FinalData as_general() const;

  // Parameters recorded in manifests.
  std::map<std::string, double> parameters;

 private:
  FinalKind kind_ = FinalKind::Classic;
  std::string name_;
  double c_ = 0.5;
  Profile1D profile_;
  std::function<PhiDerivatives(double, double)> eval_;
};

// phi = c eta + a sqrt(1 + xi^2).
FinalData hyperbolic_data(double c, double a);
// phi = c eta + a xi.
FinalData affine_data(double c, double a);
// phi = eta + alpha log cosh(eta) + a sqrt(1 + xi^2).
FinalData logcosh_data(double alpha, double a);
// phi = eta + a sqrt(1 + (xi + kappa eta)^2).
FinalData shear_data(double a, double kappa);

struct SampleBox {
  double xi_min = -3, xi_max = 3;
  double eta_min = -3, eta_max = 3;
  int xi_count = 41, eta_count = 41;
};

// Checks on a sample grid that phi_eta >= c > 0 and |phi_xi| <= phi_eta,
// plus convexity of the level sets when require_level_convexity is set.
// Throws FinalDataViolation naming the failed condition.
void validate_final_data(const FinalData& data, const SampleBox& box,
                         bool require_level_convexity);

}  // namespace regretlab
