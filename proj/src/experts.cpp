#include "regretlab/experts.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "regretlab/error.hpp"
#include "regretlab/rng.hpp"

namespace regretlab {

GammaVector::GammaVector(std::vector<double> values)
    : values_(std::move(values)) {}

double GammaVector::sum() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

ExpertPair ExpertPair::validate(std::vector<double> q, std::vector<double> r) {
  if (q.size() != r.size()) {
    throw ValidationError("expert tables differ in size: " +
                          std::to_string(q.size()) + " vs " +
                          std::to_string(r.size()));
  }
  int depth = 0;
  while ((std::size_t{1} << depth) < q.size()) ++depth;
  if (q.size() < 2 || (std::size_t{1} << depth) != q.size()) {
    throw ValidationError("expert tables need 2^d entries with d >= 1, got " +
                          std::to_string(q.size()));
  }
  for (std::size_t m = 0; m < q.size(); ++m) {
    for (auto [name, v] : {std::pair{"q", q[m]}, std::pair{"r", r[m]}}) {
      if (!std::isfinite(v) || std::abs(v) >= 1.0) {
        std::ostringstream os;
        os << "expert bound |" << name << "(m)| < 1 violated at state " << m
           << " (value " << v << ")";
        throw BoundViolation(os.str());
      }
    }
  }
  if (q == r) {
    throw IdenticalExperts(
        "experts must differ in at least one state: q(m) == r(m) for all m");
  }
  return ExpertPair(depth, std::move(q), std::move(r));
}

double ExpertPair::max_abs_difference() const {
  double out = 0;
  for (std::size_t m = 0; m < q_.size(); ++m) {
    out = std::max(out, std::abs(q_[m] - r_[m]));
  }
  return out;
}

double ExpertPair::max_abs_sum() const {
  double out = 0;
  for (std::size_t m = 0; m < q_.size(); ++m) {
    out = std::max(out, std::abs(q_[m] + r_[m]));
  }
  return out;
}

GammaVector gamma(const ExpertPair& e) {
  std::vector<double> g(e.state_count());
  for (State m = 0; m < g.size(); ++m) {
    double diff = e.difference(m);
    g[m] = diff * diff;
  }
  return GammaVector(std::move(g));
}

ExpertPair random_pair(int depth, std::uint64_t seed, double bound) {
  if (!(bound > 0.0 && bound < 1.0)) {
    throw BoundViolation("random expert bound must lie in (0, 1)");
  }
  if (depth < 1 || depth > 20) {
    throw ValidationError("random expert depth must be in [1, 20]");
  }
  Rng rng(seed);
  std::size_t n = std::size_t{1} << depth;
  for (;;) {
    std::vector<double> q(n), r(n);
    for (auto& v : q) v = rng.uniform(-bound, bound);
    for (auto& v : r) v = rng.uniform(-bound, bound);
    if (q != r) return ExpertPair::validate(std::move(q), std::move(r));
  }
}

}  // namespace regretlab
