#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace regretlab {

// A history state: the last d market moves packed into an integer, most
// recent move in the low bit (1 for b=+1, 0 for b=-1).
using State = std::uint32_t;

constexpr int kDefaultMaxCycleDepth = 5;

class DeBruijnGraph {
 public:
  explicit DeBruijnGraph(int depth);

  int depth() const { return depth_; }
  std::size_t vertex_count() const { return std::size_t{1} << depth_; }
  std::size_t edge_count() const { return 2 * vertex_count(); }

  State plus(State m) const { return (2 * m + 1) & mask_; }
  State minus(State m) const { return (2 * m) & mask_; }
  State next(State m, int b) const { return b > 0 ? plus(m) : minus(m); }
  std::pair<State, State> next_states(State m) const;

  bool contains(State m) const { return m <= mask_; }
  // +1 or -1 if there is an edge from -> to, else 0.
  int edge_sign(State from, State to) const;

 private:
  int depth_;
  State mask_;
};

// Stored without the closing repetition; signs[i] names the edge leaving
// vertices[i].
struct SimpleCycle {
  std::vector<State> vertices;
  std::vector<int> signs;

  std::size_t length() const { return vertices.size(); }
  bool contains(State m) const;
  // Sign of the edge leaving m, 0 if m is not on the cycle.
  int sign_at(State m) const;
  // Rotation with the smallest vertex first.
  SimpleCycle canonical() const;
  bool operator==(const SimpleCycle& other) const = default;
};

bool cycle_order(const SimpleCycle& a, const SimpleCycle& b);
SimpleCycle make_cycle(const DeBruijnGraph& g, std::vector<State> vertices);

// Johnson's algorithm; canonical rotations, sorted by length then
// lexicographically.
std::vector<SimpleCycle> enumerate_simple_cycles(
    const DeBruijnGraph& g, int max_depth = kDefaultMaxCycleDepth);

// Walks are vertex sequences; a closed walk repeats its start at the end.
using Walk = std::vector<State>;

void validate_walk(const DeBruijnGraph& g, const Walk& walk);

// Hierholzer from vertex 0, taking the + edge before the - edge.
Walk eulerian_circuit(const DeBruijnGraph& g);

Walk extend_to_closed_walk(const Walk& walk, const DeBruijnGraph& g);

struct CycleInstance {
  // Vertices in traversal order, starting where the instance was entered.
  SimpleCycle cycle;
  std::size_t start_step = 0;
  // Indices of the walk steps (edges) that make up this instance.
  std::vector<std::size_t> steps;

  std::size_t end_step() const { return steps.back(); }
};

struct WalkDecomposition {
  std::vector<CycleInstance> instances;
  // Canonical cycle with its multiplicity, in order of first appearance.
  std::vector<std::pair<SimpleCycle, std::size_t>> multiplicities;

  std::size_t total_length() const;
  bool non_interleaving() const;
  // Rebuilds the walk by placing every instance's edges at its steps.
  Walk reconstruct() const;
};

WalkDecomposition decompose_walk(const DeBruijnGraph& g, const Walk& walk);

}  // namespace regretlab
