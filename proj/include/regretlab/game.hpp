#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regretlab/experts.hpp"
#include "regretlab/final_data.hpp"

namespace regretlab {

// Scaled game: N = (T - t0) / eps^2 steps from t0 to T.
struct GameConfig {
  GameConfig(ExpertPair e, double eps, double T, double t0, FinalData data);

  ExpertPair experts;
  double epsilon;
  double T, t0;
  FinalData final;

  int steps() const { return N_; }
  double time_at(int k) const { return t0 + k * epsilon * epsilon; }

 private:
  int N_ = 0;
};

struct GameStart {
  State m = 0;
  double xi = 0, eta = 0;
};

// q - r = j_m * base with integer j_m.
struct Lattice {
  double base = 0;
  std::vector<int> multiples;
  int max_multiple() const;
};

std::optional<Lattice> detect_lattice(const ExpertPair& e, int max_multiple = 64);

enum class XiAxis { Auto, Lattice, Interpolated, Tree };

struct GridOptions {
  XiAxis xi_axis = XiAxis::Auto;
  // Zero picks eps^{3/2}.
  double xi_step = 0;
  double eta_step = 0;
  double xi0 = 0, eta0 = 0;
  // Extra half-widths of the k = 0 slice beyond the stencil margin.
  double xi_halfwidth = 0, eta_halfwidth = 0;
  int margin_cells = 4;
  // Tree axes are used by the general path while the reachable set stays
  // below this many nodes per slice.
  std::size_t tree_limit = 20000;
  std::size_t max_nodes = 50'000'000;
  bool keep_all_slices = false;
  int threads = 1;
};

struct ValueSlice {
  int k = 0;
  State m = 0;
  std::vector<double> xi;
  // Empty on the separable path.
  std::vector<double> eta;
  // Row-major in (xi, eta).
  std::vector<double> v;
};

struct GameValue {
  double epsilon = 0;
  int N = 0;
  double T = 0, t0 = 0;
  bool separable = false;
  double eta_slope = 0;
  std::string xi_axis;
  std::string interpolation;
  double xi_step = 0, eta_step = 0;
  std::vector<ValueSlice> slices;

  bool has_slice(int k, State m) const;
  const ValueSlice& slice(int k, State m) const;
  // Interpolates the stored slice; tree axes need an exact node.
  double value(int k, State m, double xi, double eta) const;
  double initial_value(State m, double xi, double eta) const {
    return value(0, m, xi, eta);
  }
};

GameValue dpp_value_separable(const GameConfig& cfg, const GridOptions& opt = {});
GameValue dpp_value_general(const GameConfig& cfg, const GridOptions& opt = {});

// min over f on [-1, 1] of max(P, Q) with P = eps c (s - 2f) + vp and
// Q = -eps c (s - 2f) + vm.
double separable_minmax(double vp, double vm, double eps, double c, double s);

struct BruteForceResult {
  double value = 0;
  // False when some table was not monotone in eta and the full f scan ran.
  bool used_monotone_search = true;
  std::size_t table_entries = 0;
};

// Exhaustive over b-sequences with f on the grid -1 + 2i / (f_count - 1).
// No interpolation; the eta offset is tracked as an exact integer.
// With monotone tables the best f is found by bisection on the branch
// crossing; otherwise (or when disabled) every f is scanned.
BruteForceResult brute_force(const GameConfig& cfg, const GameStart& start,
                             int f_count = 2001, bool allow_monotone_search = true);
double brute_force_value(const GameConfig& cfg, const GameStart& start,
                         int f_count = 2001);

constexpr int kBruteForceMaxSteps = 8;

}  // namespace regretlab
