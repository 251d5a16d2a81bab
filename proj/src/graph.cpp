#include "regretlab/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "regretlab/error.hpp"

namespace regretlab {

DeBruijnGraph::DeBruijnGraph(int depth) : depth_(depth) {
  if (depth < 1 || depth > 30) {
    throw ValidationError("history depth must be in [1, 30], got " +
                          std::to_string(depth));
  }
  mask_ = static_cast<State>((std::uint64_t{1} << depth) - 1);
}

std::pair<State, State> DeBruijnGraph::next_states(State m) const {
  if (!contains(m)) {
    throw ValidationError("state " + std::to_string(m) +
                          " out of range for depth " + std::to_string(depth_));
  }
  return {plus(m), minus(m)};
}

int DeBruijnGraph::edge_sign(State from, State to) const {
  if (plus(from) == to) return 1;
  if (minus(from) == to) return -1;
  return 0;
}

bool SimpleCycle::contains(State m) const {
  return std::find(vertices.begin(), vertices.end(), m) != vertices.end();
}

int SimpleCycle::sign_at(State m) const {
  auto it = std::find(vertices.begin(), vertices.end(), m);
  if (it == vertices.end()) return 0;
  return signs[static_cast<std::size_t>(it - vertices.begin())];
}

SimpleCycle SimpleCycle::canonical() const {
  if (vertices.empty()) return *this;
  auto lead = std::min_element(vertices.begin(), vertices.end()) -
              vertices.begin();
  SimpleCycle out;
  out.vertices.reserve(length());
  out.signs.reserve(length());
  for (std::size_t i = 0; i < length(); ++i) {
    std::size_t j = (static_cast<std::size_t>(lead) + i) % length();
    out.vertices.push_back(vertices[j]);
    out.signs.push_back(signs[j]);
  }
  return out;
}

bool cycle_order(const SimpleCycle& a, const SimpleCycle& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  return a.vertices < b.vertices;
}

SimpleCycle make_cycle(const DeBruijnGraph& g, std::vector<State> vertices) {
  SimpleCycle c;
  c.signs.reserve(vertices.size());
  std::set<State> seen;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    State from = vertices[i];
    State to = vertices[(i + 1) % vertices.size()];
    int sign = g.edge_sign(from, to);
    if (sign == 0 || !seen.insert(from).second) {
      throw InvalidWalk("vertex list is not a simple cycle");
    }
    c.signs.push_back(sign);
  }
  c.vertices = std::move(vertices);
  return c;
}

namespace {

class Johnson {
 public:
  explicit Johnson(const DeBruijnGraph& g)
      : g_(g),
        n_(g.vertex_count()),
        blocked_(n_, false),
        blocked_by_(n_) {}

  std::vector<SimpleCycle> run() {
    for (State s = 0; s < n_; ++s) {
      start_ = s;
      for (State v = s; v < n_; ++v) {
        blocked_[v] = false;
        blocked_by_[v].clear();
      }
      circuit(s);
    }
    return std::move(found_);
  }

 private:
  bool circuit(State v) {
    bool closed = false;
    path_.push_back(v);
    blocked_[v] = true;
    for (State w : {g_.plus(v), g_.minus(v)}) {
      if (w < start_) continue;
      if (w == start_) {
        found_.push_back(make_cycle(g_, path_));
        closed = true;
      } else if (!blocked_[w] && circuit(w)) {
        closed = true;
      }
    }
    if (closed) {
      unblock(v);
    } else {
      for (State w : {g_.plus(v), g_.minus(v)}) {
        if (w >= start_) blocked_by_[w].insert(v);
      }
    }
    path_.pop_back();
    return closed;
  }

  void unblock(State u) {
    blocked_[u] = false;
    auto waiting = std::move(blocked_by_[u]);
    blocked_by_[u].clear();
    for (State w : waiting) {
      if (blocked_[w]) unblock(w);
    }
  }

  const DeBruijnGraph& g_;
  State n_;
  State start_ = 0;
  std::vector<bool> blocked_;
  std::vector<std::set<State>> blocked_by_;
  std::vector<State> path_;
  std::vector<SimpleCycle> found_;
};

}  // namespace

std::vector<SimpleCycle> enumerate_simple_cycles(const DeBruijnGraph& g,
                                                 int max_depth) {
  if (g.depth() > max_depth) {
    throw DepthExceeded("cycle enumeration depth " +
                        std::to_string(g.depth()) +
                        " exceeds the configured bound " +
                        std::to_string(max_depth));
  }
  // Every cycle found from start s has s as its smallest vertex, so the
  // output is already in canonical rotation.
  auto cycles = Johnson(g).run();
  std::sort(cycles.begin(), cycles.end(), cycle_order);
  return cycles;
}

void validate_walk(const DeBruijnGraph& g, const Walk& walk) {
  for (std::size_t i = 0; i < walk.size(); ++i) {
    if (!g.contains(walk[i])) {
      throw InvalidWalk("walk vertex " + std::to_string(walk[i]) +
                        " out of range at position " + std::to_string(i));
    }
    if (i > 0 && g.edge_sign(walk[i - 1], walk[i]) == 0) {
      throw InvalidWalk("no edge " + std::to_string(walk[i - 1]) + " -> " +
                        std::to_string(walk[i]) + " at position " +
                        std::to_string(i));
    }
  }
}

Walk eulerian_circuit(const DeBruijnGraph& g) {
  std::vector<int> used(g.vertex_count(), 0);
  Walk stack{0};
  Walk circuit;
  circuit.reserve(g.edge_count() + 1);
  while (!stack.empty()) {
    State v = stack.back();
    if (used[v] < 2) {
      State w = used[v] == 0 ? g.plus(v) : g.minus(v);
      ++used[v];
      stack.push_back(w);
    } else {
      circuit.push_back(v);
      stack.pop_back();
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  return circuit;
}

Walk extend_to_closed_walk(const Walk& walk, const DeBruijnGraph& g) {
  if (walk.empty()) throw InvalidWalk("empty walk");
  validate_walk(g, walk);
  Walk out = walk;
  if (walk.front() == walk.back()) return out;

  Walk circuit = eulerian_circuit(g);
  circuit.pop_back();
  auto pos = static_cast<std::size_t>(
      std::find(circuit.begin(), circuit.end(), walk.back()) -
      circuit.begin());
  for (std::size_t i = 1; i <= circuit.size(); ++i) {
    State v = circuit[(pos + i) % circuit.size()];
    out.push_back(v);
    if (v == walk.front()) break;
  }
  return out;
}

std::size_t WalkDecomposition::total_length() const {
  std::size_t total = 0;
  for (const auto& inst : instances) total += inst.cycle.length();
  return total;
}

bool WalkDecomposition::non_interleaving() const {
  std::map<std::vector<State>, std::vector<const CycleInstance*>> by_cycle;
  for (const auto& inst : instances) {
    by_cycle[inst.cycle.canonical().vertices].push_back(&inst);
  }
  for (auto& [key, list] : by_cycle) {
    std::sort(list.begin(), list.end(), [](auto* a, auto* b) {
      return a->start_step < b->start_step;
    });
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (list[i - 1]->end_step() >= list[i]->start_step) return false;
    }
  }
  return true;
}

Walk WalkDecomposition::reconstruct() const {
  std::size_t n = total_length();
  if (n == 0) return {};
  Walk walk(n + 1, 0);
  std::vector<bool> filled(n, false);
  for (const auto& inst : instances) {
    for (std::size_t i = 0; i < inst.steps.size(); ++i) {
      std::size_t step = inst.steps[i];
      if (step >= n || filled[step]) return {};
      walk[step] = inst.cycle.vertices[i];
      filled[step] = true;
    }
  }
  walk[n] = walk[0];
  return walk;
}

WalkDecomposition decompose_walk(const DeBruijnGraph& g, const Walk& walk) {
  if (walk.empty()) throw InvalidWalk("empty walk");
  validate_walk(g, walk);
  if (walk.front() != walk.back()) {
    throw NotClosedWalk("walk starts at " + std::to_string(walk.front()) +
                        " but ends at " + std::to_string(walk.back()));
  }

  // The reduced walk is kept as a stack of (vertex, step leaving it). When a
  // vertex repeats, the segment since its previous occurrence is the first
  // simple cycle closed along the reduced walk; it is cut out and the
  // repeated vertex keeps the later step.
  struct Entry {
    State vertex;
    std::size_t step;
  };
  std::vector<Entry> stack{{walk[0], 0}};
  std::vector<long> position(g.vertex_count(), -1);
  position[walk[0]] = 0;

  WalkDecomposition out;
  std::map<std::vector<State>, std::size_t> slot;
  for (std::size_t j = 1; j < walk.size(); ++j) {
    State v = walk[j];
    if (position[v] < 0) {
      position[v] = static_cast<long>(stack.size());
      stack.push_back({v, j});
      continue;
    }
    auto i = static_cast<std::size_t>(position[v]);
    CycleInstance inst;
    inst.start_step = stack[i].step;
    std::vector<State> verts;
    for (std::size_t k = i; k < stack.size(); ++k) {
      verts.push_back(stack[k].vertex);
      inst.steps.push_back(stack[k].step);
      if (k > i) position[stack[k].vertex] = -1;
    }
    inst.cycle = make_cycle(g, std::move(verts));
    stack.resize(i + 1);
    stack[i].step = j;

    auto key = inst.cycle.canonical();
    auto [it, inserted] = slot.emplace(key.vertices, out.multiplicities.size());
    if (inserted) out.multiplicities.emplace_back(std::move(key), 0);
    ++out.multiplicities[it->second].second;
    out.instances.push_back(std::move(inst));
  }
  return out;
}

}  // namespace regretlab
