#include "regretlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "regretlab/error.hpp"

namespace regretlab {

namespace {

// Newton on the orthonormal Hermite recurrence, physicists' weight exp(-x^2).
QuadratureRule build_hermite(int n) {
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  int half = (n + 1) / 2;
  double z = 0, pp = 0;
  for (int i = 0; i < half; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    int it = 0;
    for (; it < 100; ++it) {
      double p1 = pim4, p2 = 0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    if (it == 100) throw NumericalError("Gauss-Hermite nodes did not converge");
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / (pp * pp);
  }
  const double scale = std::sqrt(2.0);
  const double norm = 1.0 / std::sqrt(std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] *= scale;
    rule.weights[i] *= norm;
  }
  return rule;
}

QuadratureRule build_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1, p2 = 0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-16) break;
    }
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1 - z * z) * pp * pp);
  }
  return rule;
}

const QuadratureRule& cached(int order, bool hermite) {
  static std::mutex mu;
  static std::map<std::pair<int, bool>, std::unique_ptr<QuadratureRule>> cache;
  int cap = hermite ? 180 : 512;
  if (order < 1 || order > cap) {
    throw ValidationError("quadrature order must be in [1, " +
                          std::to_string(cap) + "], got " +
                          std::to_string(order));
  }
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{order, hermite}];
  if (!slot) {
    slot = std::make_unique<QuadratureRule>(hermite ? build_hermite(order)
                                                    : build_legendre(order));
  }
  return *slot;
}

}  // namespace

const QuadratureRule& gauss_hermite_normal(int order) {
  return cached(order, true);
}

const QuadratureRule& gauss_legendre(int order) { return cached(order, false); }

}  // namespace regretlab
