#include "regretlab/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regretlab/error.hpp"
#include "regretlab/parallel.hpp"

namespace regretlab {

GameConfig::GameConfig(ExpertPair e, double eps, double T_, double t0_,
                       FinalData data)
    : experts(std::move(e)), epsilon(eps), T(T_), t0(t0_), final(std::move(data)) {
  if (!(eps > 0)) throw ValidationError("game needs eps > 0");
  if (!(T >= t0)) throw ValidationError("game needs t0 <= T");
  double n = (T - t0) / (eps * eps);
  double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-9 * std::max(1.0, n) || rounded > 1e9) {
    throw ValidationError("N = (T - t0) / eps^2 must be an integer, got " +
                          std::to_string(n));
  }
  N_ = static_cast<int>(rounded);
}

int Lattice::max_multiple() const {
  int best = 0;
  for (int j : multiples) best = std::max(best, std::abs(j));
  return best;
}

std::optional<Lattice> detect_lattice(const ExpertPair& e, int max_multiple) {
  double top = e.max_abs_difference();
  if (!(top > 0)) return std::nullopt;
  for (int J = 1; J <= max_multiple; ++J) {
    double base = top / J;
    Lattice lat{base, {}};
    bool ok = true;
    for (State m = 0; m < e.state_count() && ok; ++m) {
      double t = e.difference(m) / base;
      double j = std::round(t);
      ok = std::abs(t - j) <= 1e-9 * J;
      lat.multiples.push_back(static_cast<int>(j));
    }
    if (ok) return lat;
  }
  return std::nullopt;
}

double separable_minmax(double vp, double vm, double eps, double c, double s) {
  if (c == 0) return std::max(vp, vm);
  double fstar = 0.5 * s - (vm - vp) / (4 * eps * c);
  if (fstar > 1) return eps * c * (s - 2) + vp;
  if (fstar < -1) return -eps * c * (s + 2) + vm;
  return 0.5 * (vp + vm);
}

namespace {

// Offset measured in grid cells: exact node n, or cubic Lagrange weights on
// nodes n-1 .. n+2.
struct Shift {
  int n = 0;
  bool exact = true;
  double w[4] = {0, 0, 0, 0};
};

Shift make_shift(double cells) {
  Shift s;
  double fl = std::floor(cells);
  double th = cells - fl;
  s.n = static_cast<int>(fl);
  if (th < 1e-9) return s;
  if (th > 1 - 1e-9) {
    s.n += 1;
    return s;
  }
  s.exact = false;
  s.w[0] = -th * (th - 1) * (th - 2) / 6;
  s.w[1] = (th + 1) * (th - 1) * (th - 2) / 2;
  s.w[2] = -(th + 1) * th * (th - 2) / 2;
  s.w[3] = (th + 1) * th * (th - 1) / 6;
  return s;
}

int reach_cells(const Shift& s) { return s.exact ? std::abs(s.n) : std::abs(s.n) + 2; }

// Applies a shift at index i of a strided array.
inline double apply(const double* v, std::size_t stride, long i, const Shift& s) {
  if (s.exact) return v[(i + s.n) * static_cast<long>(stride)];
  long b = i + s.n - 1;
  return s.w[0] * v[b * static_cast<long>(stride)] +
         s.w[1] * v[(b + 1) * static_cast<long>(stride)] +
         s.w[2] * v[(b + 2) * static_cast<long>(stride)] +
         s.w[3] * v[(b + 3) * static_cast<long>(stride)];
}

struct AxisChoice {
  XiAxis axis = XiAxis::Interpolated;
  double step = 0;
};

AxisChoice choose_uniform_axis(const GameConfig& cfg, const GridOptions& opt,
                               bool allow_tree, bool* want_tree) {
  const double eps = cfg.epsilon;
  *want_tree = false;
  std::optional<Lattice> lat;
  if (opt.xi_axis == XiAxis::Auto || opt.xi_axis == XiAxis::Lattice) {
    lat = detect_lattice(cfg.experts);
  }
  if (opt.xi_axis == XiAxis::Lattice) {
    if (!lat) {
      throw ValidationError("lattice axis requested but q - r has no common base");
    }
    return {XiAxis::Lattice, eps * lat->base};
  }
  if (opt.xi_axis == XiAxis::Auto && lat && lat->base >= 0.5 * std::sqrt(eps)) {
    return {XiAxis::Lattice, eps * lat->base};
  }
  if (opt.xi_axis == XiAxis::Tree || (opt.xi_axis == XiAxis::Auto && allow_tree)) {
    *want_tree = true;
  }
  double step = opt.xi_step > 0 ? opt.xi_step : std::pow(eps, 1.5);
  return {XiAxis::Interpolated, step};
}

const char* axis_name(XiAxis a) {
  switch (a) {
    case XiAxis::Lattice: return "lattice";
    case XiAxis::Tree: return "tree";
    case XiAxis::Interpolated: return "interpolated";
    case XiAxis::Auto: return "auto";
  }
  return "?";
}

std::vector<double> uniform_nodes(double origin, double step, long half) {
  std::vector<double> x(2 * half + 1);
  for (long i = -half; i <= half; ++i) x[i + half] = origin + i * step;
  return x;
}

// Cubic interpolation on a uniform axis; exact on nodes.
struct Stencil {
  long base = 0;
  int count = 1;
  double w[4] = {1, 0, 0, 0};
};

Stencil uniform_stencil(const std::vector<double>& x, double at, const char* what) {
  double step = x.size() > 1 ? x[1] - x[0] : 1;
  double t = x.size() > 1 ? (at - x[0]) / step : 0;
  Shift s = make_shift(t);
  Stencil st;
  long n = static_cast<long>(x.size());
  if (s.exact) {
    if (s.n < 0 || s.n >= n || (x.size() == 1 && std::abs(at - x[0]) > 1e-9)) {
      throw GridOutOfRange(std::string(what) + " = " + std::to_string(at) +
                           " outside the value grid");
    }
    st.base = s.n;
    return st;
  }
  if (s.n - 1 < 0 || s.n + 2 >= n) {
    throw GridOutOfRange(std::string(what) + " = " + std::to_string(at) +
                         " outside the value grid");
  }
  st.base = s.n - 1;
  st.count = 4;
  for (int q = 0; q < 4; ++q) st.w[q] = s.w[q];
  return st;
}

long tree_index(const std::vector<double>& nodes, double x) {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), x - 1e-10 * (1 + std::abs(x)));
  if (it == nodes.end() || std::abs(*it - x) > 1e-10 * (1 + std::abs(x))) return -1;
  return it - nodes.begin();
}

bool keep_slice(const GridOptions& opt, int k, int N, double total_doubles) {
  return k == 0 || k == N || opt.keep_all_slices || total_doubles <= 4e6;
}

}  // namespace

bool GameValue::has_slice(int k, State m) const {
  for (const auto& s : slices) {
    if (s.k == k && s.m == m) return true;
  }
  return false;
}

const ValueSlice& GameValue::slice(int k, State m) const {
  for (const auto& s : slices) {
    if (s.k == k && s.m == m) return s;
  }
  throw GridOutOfRange("no stored value slice for k = " + std::to_string(k) +
                       ", m = " + std::to_string(m));
}

double GameValue::value(int k, State m, double xi, double eta) const {
  const auto& s = slice(k, m);
  Stencil sx;
  if (xi_axis == "tree") {
    long i = tree_index(s.xi, xi);
    if (i < 0) {
      throw GridOutOfRange("xi = " + std::to_string(xi) +
                           " is not a reachable node of the tree axis");
    }
    sx.base = i;
  } else {
    sx = uniform_stencil(s.xi, xi, "xi");
  }
  if (separable) {
    double v = 0;
    for (int q = 0; q < sx.count; ++q) v += sx.w[q] * s.v[sx.base + q];
    return eta_slope * eta + v;
  }
  Stencil se = uniform_stencil(s.eta, eta, "eta");
  std::size_t E = s.eta.size();
  double v = 0;
  for (int a = 0; a < sx.count; ++a) {
    double row = 0;
    for (int b = 0; b < se.count; ++b) row += se.w[b] * s.v[(sx.base + a) * E + se.base + b];
    v += sx.w[a] * row;
  }
  return v;
}

GameValue dpp_value_separable(const GameConfig& cfg, const GridOptions& opt) {
  if (cfg.final.kind() == FinalKind::General) {
    throw ValidationError("separable DPP needs separable or classic final data");
  }
  const auto& e = cfg.experts;
  const int N = cfg.steps();
  const double eps = cfg.epsilon;
  const double c = cfg.final.eta_slope();
  const auto& phibar = cfg.final.profile().value;
  const std::size_t S = e.state_count();
  bool tree = false;
  auto axis = choose_uniform_axis(cfg, opt, false, &tree);
  if (opt.xi_axis == XiAxis::Tree) {
    throw ValidationError("separable DPP supports lattice and interpolated axes");
  }
  const double h = axis.step;

  std::vector<Shift> plus(S), minus(S);
  int cells = 0;
  for (State m = 0; m < S; ++m) {
    double off = eps * e.difference(m) / h;
    plus[m] = make_shift(off);
    minus[m] = make_shift(-off);
    cells = std::max({cells, reach_cells(plus[m]), reach_cells(minus[m])});
  }
  const long w0 = opt.margin_cells + static_cast<long>(std::ceil(opt.xi_halfwidth / h));
  auto W = [&](int k) { return w0 + static_cast<long>(k) * cells; };
  if (static_cast<double>(2 * W(N) + 1) * S > static_cast<double>(opt.max_nodes)) {
    throw GridOutOfRange("reachable xi range needs more than " +
                         std::to_string(opt.max_nodes) + " grid nodes");
  }
  double total = 0;
  for (int k = 0; k <= N; ++k) total += static_cast<double>(2 * W(k) + 1) * S;

  GameValue gv;
  gv.epsilon = eps;
  gv.N = N;
  gv.T = cfg.T;
  gv.t0 = cfg.t0;
  gv.separable = true;
  gv.eta_slope = c;
  gv.xi_axis = axis_name(axis.axis);
  gv.interpolation = axis.axis == XiAxis::Lattice ? "none" : "cubic";
  gv.xi_step = h;

  std::vector<std::vector<double>> next(S), cur(S);
  for (State m = 0; m < S; ++m) {
    next[m].resize(2 * W(N) + 1);
    for (long i = -W(N); i <= W(N); ++i) next[m][i + W(N)] = phibar(opt.xi0 + i * h);
  }
  auto store = [&](int k, const std::vector<std::vector<double>>& tab) {
    if (!keep_slice(opt, k, N, total)) return;
    for (State m = 0; m < S; ++m) {
      ValueSlice sl;
      sl.k = k;
      sl.m = m;
      sl.xi = uniform_nodes(opt.xi0, h, W(k));
      sl.v = tab[m];
      gv.slices.push_back(std::move(sl));
    }
  };
  store(N, next);
  for (int k = N - 1; k >= 0; --k) {
    long wk = W(k), wn = W(k + 1);
    for (State m = 0; m < S; ++m) {
      cur[m].assign(2 * wk + 1, 0.0);
      const State mp = (2 * m + 1) % S, mm = (2 * m) % S;
      const double s = e.sum(m), off = eps * e.difference(m);
      const double* vp = next[mp].data() + wn;
      const double* vm = next[mm].data() + wn;
      double* out = cur[m].data() + wk;
      bool last = k == N - 1;
      parallel_for(0, 2 * wk + 1, opt.threads, [&](std::size_t idx) {
        long i = static_cast<long>(idx) - wk;
        double a, b;
        if (last) {
          double x = opt.xi0 + i * h;
          a = phibar(x + off);
          b = phibar(x - off);
        } else {
          a = apply(vp, 1, i, plus[m]);
          b = apply(vm, 1, i, minus[m]);
        }
        out[i] = separable_minmax(a, b, eps, c, s);
      });
    }
    std::swap(cur, next);
    store(k, next);
  }
  std::sort(gv.slices.begin(), gv.slices.end(), [](const auto& a, const auto& b) {
    return a.k != b.k ? a.k < b.k : a.m < b.m;
  });
  return gv;
}

namespace {

constexpr double kGolden = 0.6180339887498949;

template <class F>
double minimize_over_f(F&& fn) {
  double a = -1, b = 1;
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = fn(x1), f2 = fn(x2);
  while (b - a > 1e-10) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = fn(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = fn(x2);
    }
  }
  return std::min({f1, f2, fn(-1.0), fn(1.0)});
}

// Forward reachable xi values per (k, m), deduplicated. Empty if the set
// grows past the limit.
std::vector<std::vector<std::vector<double>>> reachable_tree(
    const GameConfig& cfg, double xi0, std::size_t limit) {
  const auto& e = cfg.experts;
  const std::size_t S = e.state_count();
  const int N = cfg.steps();
  std::vector<std::vector<std::vector<double>>> nodes(
      N + 1, std::vector<std::vector<double>>(S));
  for (State m = 0; m < S; ++m) nodes[0][m] = {xi0};
  for (int k = 0; k < N; ++k) {
    std::size_t count = 0;
    for (State m = 0; m < S; ++m) {
      double off = cfg.epsilon * e.difference(m);
      for (double x : nodes[k][m]) {
        nodes[k + 1][(2 * m + 1) % S].push_back(x + off);
        nodes[k + 1][(2 * m) % S].push_back(x - off);
      }
    }
    for (State m = 0; m < S; ++m) {
      auto& v = nodes[k + 1][m];
      std::sort(v.begin(), v.end());
      std::vector<double> u;
      for (double x : v) {
        if (u.empty() || x - u.back() > 1e-12 * (1 + std::abs(x))) u.push_back(x);
      }
      v = std::move(u);
      count += v.size();
    }
    if (count > limit) return {};
  }
  return nodes;
}

}  // namespace

GameValue dpp_value_general(const GameConfig& cfg, const GridOptions& opt) {
  const auto& e = cfg.experts;
  const int N = cfg.steps();
  const double eps = cfg.epsilon;
  const std::size_t S = e.state_count();
  const FinalData& phi = cfg.final;

  bool want_tree = false;
  auto axis = choose_uniform_axis(cfg, opt, true, &want_tree);
  std::vector<std::vector<std::vector<double>>> tree;
  if (want_tree) {
    tree = reachable_tree(cfg, opt.xi0, opt.tree_limit);
    if (!tree.empty()) {
      axis.axis = XiAxis::Tree;
    } else if (opt.xi_axis == XiAxis::Tree) {
      throw GridOutOfRange("reachable xi set exceeds the tree limit");
    }
  }
  const bool is_tree = axis.axis == XiAxis::Tree;
  const double h = axis.step;

  std::vector<Shift> plus(S), minus(S);
  int cells = 0;
  if (!is_tree) {
    for (State m = 0; m < S; ++m) {
      double off = eps * e.difference(m) / h;
      plus[m] = make_shift(off);
      minus[m] = make_shift(-off);
      cells = std::max({cells, reach_cells(plus[m]), reach_cells(minus[m])});
    }
  }
  const long w0 = opt.margin_cells + static_cast<long>(std::ceil(opt.xi_halfwidth / h));
  auto W = [&](int k) { return w0 + static_cast<long>(k) * cells; };

  double maxeta = 0;
  for (State m = 0; m < S; ++m) maxeta = std::max(maxeta, std::abs(e.sum(m)) + 2);
  const double he = opt.eta_step > 0 ? opt.eta_step : std::pow(eps, 1.5);
  const int ecells = static_cast<int>(std::ceil(eps * maxeta / he)) + 2;
  const long h0 = opt.margin_cells + static_cast<long>(std::ceil(opt.eta_halfwidth / he));
  auto H = [&](int k) { return h0 + static_cast<long>(k) * ecells; };

  auto xi_nodes = [&](int k, State m) {
    return is_tree ? tree[k][m] : uniform_nodes(opt.xi0, h, W(k));
  };
  double total = 0;
  for (int k = 0; k <= N; ++k) {
    for (State m = 0; m < S; ++m) {
      double nx = is_tree ? tree[k][m].size() : 2 * W(k) + 1;
      total += nx * (2 * H(k) + 1);
    }
  }
  {
    double biggest = 0;
    for (State m = 0; m < S; ++m) {
      double nx = is_tree ? tree[N][m].size() : 2 * W(N) + 1;
      biggest += nx * (2 * H(N) + 1);
    }
    if (biggest > static_cast<double>(opt.max_nodes)) {
      throw GridOutOfRange("reachable (xi, eta) range needs more than " +
                           std::to_string(opt.max_nodes) + " grid nodes");
    }
  }

  GameValue gv;
  gv.epsilon = eps;
  gv.N = N;
  gv.T = cfg.T;
  gv.t0 = cfg.t0;
  gv.separable = false;
  gv.eta_slope = phi.eta_slope();
  gv.xi_axis = axis_name(axis.axis);
  gv.interpolation = axis.axis == XiAxis::Interpolated ? "bicubic" : "cubic-eta";
  gv.xi_step = is_tree ? 0 : h;
  gv.eta_step = he;

  struct Table {
    std::vector<double> xi, eta, v;
  };
  std::vector<Table> next(S), cur(S);
  for (State m = 0; m < S; ++m) {
    auto& t = next[m];
    t.xi = xi_nodes(N, m);
    t.eta = uniform_nodes(opt.eta0, he, H(N));
    t.v.resize(t.xi.size() * t.eta.size());
    for (std::size_t i = 0; i < t.xi.size(); ++i) {
      for (std::size_t j = 0; j < t.eta.size(); ++j) {
        t.v[i * t.eta.size() + j] = phi.value(t.xi[i], t.eta[j]);
      }
    }
  }
  auto store = [&](int k, const std::vector<Table>& tab) {
    if (!keep_slice(opt, k, N, total)) return;
    for (State m = 0; m < S; ++m) {
      gv.slices.push_back({k, m, tab[m].xi, tab[m].eta, tab[m].v});
    }
  };
  store(N, next);

  for (int k = N - 1; k >= 0; --k) {
    const bool last = k == N - 1;
    for (State m = 0; m < S; ++m) {
      const State mp = (2 * m + 1) % S, mm = (2 * m) % S;
      const double s = e.sum(m), off = eps * e.difference(m);
      auto& t = cur[m];
      t.xi = xi_nodes(k, m);
      t.eta = uniform_nodes(opt.eta0, he, H(k));
      const std::size_t E = t.eta.size();
      t.v.assign(t.xi.size() * E, 0.0);
      const Table& P = next[mp];
      const Table& Q = next[mm];
      const std::size_t EP = P.eta.size(), EQ = Q.eta.size();

      // Row evaluation of a next-step table at eta, given its xi stencil.
      auto eval = [](const Table& T, std::size_t Et, const Stencil& sx, double eta) {
        Stencil se = uniform_stencil(T.eta, eta, "eta");
        double v = 0;
        for (int a = 0; a < sx.count; ++a) {
          const double* row = T.v.data() + (sx.base + a) * Et + se.base;
          double r = 0;
          for (int b = 0; b < se.count; ++b) r += se.w[b] * row[b];
          v += sx.w[a] * r;
        }
        return v;
      };

      parallel_for(0, t.xi.size(), opt.threads, [&](std::size_t i) {
        double x = t.xi[i];
        Stencil sp, sm;
        if (!last) {
          if (is_tree) {
            long ip = tree_index(P.xi, x + off), im = tree_index(Q.xi, x - off);
            if (ip < 0 || im < 0) throw NumericalError("tree axis lost a successor node");
            sp.base = ip;
            sm.base = im;
          } else {
            long il = static_cast<long>(i) - W(k) + W(k + 1);
            auto fill = [&](const Shift& sh, Stencil& st) {
              if (sh.exact) {
                st.base = il + sh.n;
              } else {
                st.base = il + sh.n - 1;
                st.count = 4;
                for (int q = 0; q < 4; ++q) st.w[q] = sh.w[q];
              }
            };
            fill(plus[m], sp);
            fill(minus[m], sm);
          }
        }
        for (std::size_t j = 0; j < E; ++j) {
          double y = t.eta[j];
          auto F = [&](double f) {
            double a = eps * (s - 2 * f);
            if (last) return std::max(phi.value(x + off, y + a), phi.value(x - off, y - a));
            return std::max(eval(P, EP, sp, y + a), eval(Q, EQ, sm, y - a));
          };
          t.v[i * E + j] = minimize_over_f(F);
        }
      });
    }
    std::swap(cur, next);
    store(k, next);
  }
  std::sort(gv.slices.begin(), gv.slices.end(), [](const auto& a, const auto& b) {
    return a.k != b.k ? a.k < b.k : a.m < b.m;
  });
  return gv;
}

}  // namespace regretlab
