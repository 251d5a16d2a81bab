#pragma once

#include <cstdint>
#include <vector>

#include "regretlab/graph.hpp"

namespace regretlab {

class GammaVector {
 public:
  explicit GammaVector(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  double operator[](State m) const { return values_[m]; }
  std::size_t size() const { return values_.size(); }
  double sum() const;
  double mean() const { return sum() / static_cast<double>(size()); }

 private:
  std::vector<double> values_;
};

// Two history-dependent experts; q(m), r(m) are the bids after history m.
class ExpertPair {
 public:
  static ExpertPair validate(std::vector<double> q, std::vector<double> r);

  int depth() const { return depth_; }
  std::size_t state_count() const { return q_.size(); }
  double q(State m) const { return q_[m]; }
  double r(State m) const { return r_[m]; }
  double difference(State m) const { return q_[m] - r_[m]; }
  double sum(State m) const { return q_[m] + r_[m]; }
  const std::vector<double>& q() const { return q_; }
  const std::vector<double>& r() const { return r_; }
  // Largest |q - r| and |q + r| over all states.
  double max_abs_difference() const;
  double max_abs_sum() const;
  ExpertPair swapped() const { return validate(r_, q_); }

 private:
  ExpertPair(int depth, std::vector<double> q, std::vector<double> r)
      : depth_(depth), q_(std::move(q)), r_(std::move(r)) {}

  int depth_;
  std::vector<double> q_;
  std::vector<double> r_;
};

GammaVector gamma(const ExpertPair& e);

// Entries uniform in (-bound, bound), redrawn until the experts differ.
ExpertPair random_pair(int depth, std::uint64_t seed, double bound);

}  // namespace regretlab
