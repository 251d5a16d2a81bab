#pragma once

#include <vector>

namespace regretlab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Expectation over a standard normal: E f(Z) ~ sum w_i f(z_i), nodes in
// decreasing order, weights summing to one. Orders up to 180.
const QuadratureRule& gauss_hermite_normal(int order);

// Gauss-Legendre on [-1, 1].
const QuadratureRule& gauss_legendre(int order);

}  // namespace regretlab
