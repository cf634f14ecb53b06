#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shiftgame/rational.hpp"

namespace shiftgame {

// Window graph of a binary subshift of finite type. Vertices are the
// forbidden-free words of length `window`, sorted, so vertex id order is
// lexicographic word order. Edge (u, v) iff the last window-1 symbols of u
// equal the first window-1 symbols of v. With window >= max forbidden
// length, any forbidden word inside a walk's symbol stream would fit inside
// a single vertex, so walks and subshift points correspond exactly.
struct DeBruijnGraph {
  int window = 0;
  std::vector<std::string> forbidden;      // sorted, deduplicated
  std::vector<std::string> vertices;
  std::vector<std::pair<int, int>> edges;  // sorted
  std::vector<std::vector<int>> out;       // ascending successor ids
  std::vector<std::vector<int>> in;        // ascending predecessor ids

  int index_of(const std::string& word) const;  // -1 when absent
  bool has_edge(int u, int v) const;

  // Symbol stream of a walk: first vertex, then one symbol per step.
  std::string stream_of(const std::vector<int>& walk) const;
};

DeBruijnGraph build_debruijn(const std::vector<std::string>& forbidden,
                             int window);

// A cycle is its vertex id sequence up to rotation. Canonical form is the
// lexicographically minimal rotation; the global cycle order compares
// canonical sequences lexicographically (a proper prefix sorts first).
using Cycle = std::vector<int>;

Cycle canonical_cycle(const Cycle& c);
bool cycle_less(const Cycle& a, const Cycle& b);

struct DoubleLoop {
  Cycle c0, c1;            // canonical; cycle_less(c0, c1)
  int shared_vertex = -1;  // smallest vertex id on both cycles
};

// Constructive finder: walks forward through vertices that keep uncountably
// many continuations, closes a loop on the first repeat, branches off the
// loop, and stops when a branch re-enters the walked structure; the two
// cycles are then read off the walked edges. Returns a double loop iff one
// exists.
std::optional<DoubleLoop> find_double_loop(const DeBruijnGraph& g);

// Every double loop of the graph, ordered by (c0, c1) in the cycle order.
// Guards against cycle blowup with a budget error beyond `limit` cycles.
std::vector<DoubleLoop> double_loops(const DeBruijnGraph& g,
                                     std::size_t limit = 20000);

// right[u]: uncountably many forward rays start at u. left[u]: same for
// reverse rays. Finite criterion: u reaches (forward, resp. backward) a
// strongly connected component carrying two distinct cycles through a
// common vertex, i.e. one with more internal edges than vertices.
struct GoodFlags {
  std::vector<bool> right, left;
};

GoodFlags classify_good(const DeBruijnGraph& g);

// Largest e on the grid k/10000 satisfying both uniqueness inequalities
//   (1)  e < (1/3 - 4/3 e)(1 - e) / graphSize
//   (2)  (1 - e)^2 / (10 graphSize) >= e
// `binding` is the inequality (1 or 2) violated at the next grid step.
struct EpsilonInfo {
  Rational value;
  int binding = 0;
};

EpsilonInfo epsilon_max_info(int graphSize);
Rational epsilon_max(int graphSize);

// DOT rendering; double-loop edges are bold red, the shared vertex doubled.
std::string graph_to_dot(const DeBruijnGraph& g,
                         const std::optional<DoubleLoop>& highlight);

// Graph, per-vertex good flags, and the double loop (null when absent).
std::string classification_to_json_text(const DeBruijnGraph& g);

}  // namespace shiftgame
