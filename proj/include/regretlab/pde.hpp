#pragma once

#include <array>
#include <memory>
#include <vector>

#include "regretlab/final_data.hpp"

namespace regretlab {

struct PointDerivatives {
  double u = 0, u_t = 0, u_xi = 0, u_eta = 0;
  double u_xixi = 0, u_xieta = 0, u_etaeta = 0;
  double D = 0;
  bool near_truncation = false;
};

// D = (1/2) <D^2u w, w> with w = (-u_eta, u_xi) / u_eta. Written out:
// (u_xixi u_eta^2 - 2 u_xieta u_xi u_eta + u_etaeta u_xi^2) / (2 u_eta^2).
double degenerate_term(double u_xi, double u_eta, double u_xixi,
                       double u_xieta, double u_etaeta);

// Solution of u_t + C D = 0 for t <= T with u(T) = phi.
class PdeSolution {
 public:
  PdeSolution(double C, double T) : C_(C), T_(T) {}
  virtual ~PdeSolution() = default;

  double diffusion() const { return C_; }
  double final_time() const { return T_; }

  virtual PointDerivatives evaluate(double t, double xi, double eta) const = 0;
  virtual double value(double t, double xi, double eta) const {
    return evaluate(t, xi, eta).u;
  }

 protected:
  void check_time(double t) const;

 private:
  double C_, T_;
};

using PdePtr = std::shared_ptr<const PdeSolution>;

struct QuadratureConfig {
  int order = 64;
  // Composite Gauss-Legendre used for profiles with kinks.
  int panel_order = 24;
  double truncation_sigmas = 8;
  double warning_sigmas = 6;
};

struct HeatPoint {
  double u = 0, u_t = 0, u_xi = 0, u_xixi = 0;
  bool near_truncation = false;
};

// ubar(t, xi) = E phibar(xi + sqrt(C (T - t)) Z), Z standard normal.
class HeatSolution {
 public:
  HeatSolution(Profile1D profile, double C, double T, QuadratureConfig q);

  HeatPoint evaluate(double t, double xi) const;
  double diffusion() const { return C_; }
  double final_time() const { return T_; }

 private:
  Profile1D profile_;
  double C_, T_;
  QuadratureConfig q_;
};

HeatSolution heat_solve(const Profile1D& profile, double C, double T,
                        const QuadratureConfig& q = {});

// u = c eta + ubar(t, xi).
PdePtr separable_solution(double c, HeatSolution heat);

// The classic closed form: with s = T - t + delta,
// u = eta/2 + sqrt(s) G(xi / sqrt(s)) + offset. delta > 0 gives the
// solution with the time-shifted (smoothed) final data.
double classic_G(double z, double C);
double classic_G1(double z, double C);
double classic_G2(double z, double C);
PdePtr classic_solution(double C, double T, double delta = 0,
                        double offset = 0);

enum class EnvelopeSide { Above, Below };

// Classic solution at T - delta used as smooth final data. The upper
// envelope dominates (eta + |xi|)/2; the lower one is shifted down by
// sqrt(C delta / (2 pi)) and is dominated by it.
FinalData smooth_classic_envelope(double C, double delta, EnvelopeSide side);
double envelope_offset(double C, double delta, EnvelopeSide side);

struct LevelSetConfig {
  QuadratureConfig quad;
  double y_min = -8, y_max = 8;
  int y_count = 65;
  double root_tolerance = 1e-12;
};

// h(t, xi; y) = E g(xi + sigma Z; y) where phi(xi, g(xi; y)) = y.
class LevelSetField {
 public:
  LevelSetField(FinalData phi, double C, double T, LevelSetConfig cfg);

  struct GPoint {
    double g = 0, g_xi = 0, g_y = 0, g_xixi = 0, g_xiy = 0, g_yy = 0;
  };
  struct HPoint {
    double h = 0, h_t = 0, h_xi = 0, h_y = 0, h_xixi = 0, h_xiy = 0, h_yy = 0;
  };

  double g(double xi, double y, double hint = 0) const;
  GPoint g_point(double xi, double y, double hint = 0) const;
  HPoint h(double t, double xi, double y, double hint = 0) const;

  // The y with h(t, xi; y) = eta.
  double invert(double t, double xi, double eta) const;

  const std::vector<double>& y_grid() const { return y_grid_; }
  double diffusion() const { return C_; }
  double final_time() const { return T_; }
  const FinalData& data() const { return phi_; }

 private:
  FinalData phi_;
  double C_, T_;
  LevelSetConfig cfg_;
  std::vector<double> y_grid_;
};

PdePtr levelset_solve(const FinalData& phi, double C, double T,
                      const LevelSetConfig& cfg = {});

// Picks the fast path for the data kind: analytic for classic, heat
// quadrature for separable, level sets otherwise.
PdePtr make_pde_solution(const FinalData& data, double C, double T,
                         const LevelSetConfig& cfg = {});

struct ResidualReport {
  double max_fd_residual = 0;        // |u_t + C D| from differences
  double max_reported_residual = 0;  // |u_t + C D| from the evaluator
  double max_u_t_error = 0;
  double max_u_xi_error = 0;
  double max_u_eta_error = 0;
  double max_D_error = 0;
  std::size_t points = 0;
};

ResidualReport residual_check(const PdeSolution& sol,
                              const std::vector<std::array<double, 3>>& points,
                              double h);

}  // namespace regretlab
