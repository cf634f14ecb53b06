#include "shiftgame/debruijn.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include <json.hpp>

#include "shiftgame/error.hpp"

namespace shiftgame {

namespace {

bool contains_subword(const std::string& word, const std::string& sub) {
  return word.find(sub) != std::string::npos;
}

// Kosaraju. Component ids are assigned in some order; only membership and
// per-component edge counts matter here.
std::vector<int> scc_ids(const DeBruijnGraph& g) {
  int n = static_cast<int>(g.vertices.size());
  std::vector<int> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    // Iterative post-order.
    std::vector<std::pair<int, int>> stack{{s, 0}};
    seen[s] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < static_cast<int>(g.out[v].size())) {
        int w = g.out[v][i++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<int> comp(n, -1);
  int next_id = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] >= 0) continue;
    std::deque<int> queue{*it};
    comp[*it] = next_id;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int w : g.in[v])
        if (comp[w] < 0) {
          comp[w] = next_id;
          queue.push_back(w);
        }
    }
    ++next_id;
  }
  return comp;
}

// Vertices whose component carries two distinct cycles through a common
// vertex. A strongly connected component with a cycle has at least as many
// internal edges as vertices, with equality exactly for a lone simple
// cycle, so rich == strictly more internal edges than vertices.
std::vector<char> rich_vertices(const DeBruijnGraph& g) {
  int n = static_cast<int>(g.vertices.size());
  std::vector<int> comp = scc_ids(g);
  int comps = n == 0 ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<int> sizes(comps, 0), internal(comps, 0);
  for (int v = 0; v < n; ++v) ++sizes[comp[v]];
  for (const auto& [u, v] : g.edges)
    if (comp[u] == comp[v]) ++internal[comp[u]];
  std::vector<char> rich(n, 0);
  for (int v = 0; v < n; ++v)
    if (internal[comp[v]] > sizes[comp[v]]) rich[v] = 1;
  return rich;
}

std::vector<bool> closure_from(const DeBruijnGraph& g,
                               const std::vector<char>& seed, bool backward) {
  int n = static_cast<int>(g.vertices.size());
  std::vector<bool> mark(n, false);
  std::deque<int> queue;
  for (int v = 0; v < n; ++v)
    if (seed[v]) {
      mark[v] = true;
      queue.push_back(v);
    }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : backward ? g.in[v] : g.out[v])
      if (!mark[w]) {
        mark[w] = true;
        queue.push_back(w);
      }
  }
  return mark;
}

// All simple cycles of the subgraph restricted to `edges`, in canonical
// form, ascending. Anchored search: a cycle is emitted from its smallest
// vertex, so each comes out exactly once and already canonical.
std::vector<Cycle> simple_cycles(int n,
                                 const std::set<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [u, v] : edges) adj[u].push_back(v);
  std::vector<Cycle> found;
  std::vector<char> on_path(n, 0);
  Cycle path;
  for (int s = 0; s < n; ++s) {
    // Depth-first over paths s -> ... with all interior vertices > s.
    struct Frame {
      int vertex;
      size_t next = 0;
    };
    std::vector<Frame> stack{{s}};
    on_path[s] = 1;
    path.assign(1, s);
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < adj[f.vertex].size()) {
        int w = adj[f.vertex][f.next++];
        if (w == s) {
          found.push_back(path);
          continue;
        }
        if (w < s || on_path[w]) continue;
        if (found.size() > 20000)
          fail(ErrorKind::budget, "simple cycle enumeration too large");
        on_path[w] = 1;
        path.push_back(w);
        stack.push_back({w});
      } else {
        on_path[f.vertex] = 0;
        path.pop_back();
        stack.pop_back();
      }
    }
  }
  std::sort(found.begin(), found.end(), cycle_less);
  return found;
}

std::vector<int> shared_vertices(const Cycle& a, const Cycle& b) {
  std::vector<int> sa(a), sb(b), common;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(common));
  return common;
}

}  // namespace

int DeBruijnGraph::index_of(const std::string& word) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), word);
  if (it == vertices.end() || *it != word) return -1;
  return static_cast<int>(it - vertices.begin());
}

bool DeBruijnGraph::has_edge(int u, int v) const {
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

std::string DeBruijnGraph::stream_of(const std::vector<int>& walk) const {
  if (walk.empty()) return "";
  std::string s = vertices.at(walk[0]);
  for (size_t i = 1; i < walk.size(); ++i) {
    if (!has_edge(walk[i - 1], walk[i]))
      fail(ErrorKind::usage, "walk uses a missing edge");
    s.push_back(vertices.at(walk[i]).back());
  }
  return s;
}

DeBruijnGraph build_debruijn(const std::vector<std::string>& forbidden,
                             int window) {
  if (window < 1) fail(ErrorKind::usage, "window length must be positive");
  if (window > 20) fail(ErrorKind::budget, "window length above 20");
  for (const auto& w : forbidden) {
    if (w.empty()) fail(ErrorKind::usage, "empty forbidden word");
    for (char c : w)
      if (c != '0' && c != '1')
        fail(ErrorKind::usage, "forbidden word with non-binary symbol");
    if (static_cast<int>(w.size()) > window)
      fail(ErrorKind::precondition,
           "window length " + std::to_string(window) +
               " shorter than forbidden word " + w);
  }
  DeBruijnGraph g;
  g.window = window;
  g.forbidden = forbidden;
  std::sort(g.forbidden.begin(), g.forbidden.end());
  g.forbidden.erase(std::unique(g.forbidden.begin(), g.forbidden.end()),
                    g.forbidden.end());
  for (std::uint32_t bits = 0; bits < (1u << window); ++bits) {
    std::string word(window, '0');
    for (int i = 0; i < window; ++i)
      if (bits & (1u << (window - 1 - i))) word[i] = '1';
    bool ok = true;
    for (const auto& f : forbidden)
      if (contains_subword(word, f)) {
        ok = false;
        break;
      }
    if (ok) g.vertices.push_back(word);
  }
  int n = static_cast<int>(g.vertices.size());
  g.out.resize(n);
  g.in.resize(n);
  for (int u = 0; u < n; ++u) {
    std::string suffix = g.vertices[u].substr(1);
    for (char c : {'0', '1'}) {
      int v = g.index_of(suffix + c);
      if (v < 0) continue;
      g.edges.emplace_back(u, v);
      g.out[u].push_back(v);
      g.in[v].push_back(u);
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  for (auto& preds : g.in) std::sort(preds.begin(), preds.end());
  return g;
}

Cycle canonical_cycle(const Cycle& c) {
  if (c.empty()) fail(ErrorKind::usage, "empty cycle");
  Cycle best = c;
  Cycle rot = c;
  for (size_t i = 1; i < c.size(); ++i) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (rot < best) best = rot;
  }
  return best;
}

bool cycle_less(const Cycle& a, const Cycle& b) {
  return canonical_cycle(a) < canonical_cycle(b);
}

GoodFlags classify_good(const DeBruijnGraph& g) {
  std::vector<char> rich = rich_vertices(g);
  GoodFlags flags;
  flags.right = closure_from(g, rich, /*backward=*/true);
  flags.left = closure_from(g, rich, /*backward=*/false);
  return flags;
}

std::optional<DoubleLoop> find_double_loop(const DeBruijnGraph& g) {
  int n = static_cast<int>(g.vertices.size());
  GoodFlags flags = classify_good(g);
  int start = -1;
  for (int v = 0; v < n && start < 0; ++v)
    if (flags.right[v]) start = v;
  if (start < 0) return std::nullopt;

  // Walk through vertices with uncountably many continuations. Every vertex
  // is walked at most once, so this terminates; the guarantees that a next
  // step and a branch vertex exist come with the flags just computed.
  std::vector<char> visited(n, 0);
  std::vector<int> pos_in_path(n, -1);
  std::set<std::pair<int, int>> walked;
  std::vector<int> path{start};
  visited[start] = 1;
  pos_in_path[start] = 0;
  for (;;) {
    int cur = path.back();
    int next = -1;
    for (int w : g.out[cur])
      if (flags.right[w]) {
        next = w;
        break;
      }
    if (next < 0)
      fail(ErrorKind::search_exhausted, "walk lost all continuations");
    walked.insert({cur, next});
    if (pos_in_path[next] >= 0) {
      // First repeat: the tail of the path from `next` on is a loop.
      std::vector<int> loop(path.begin() + pos_in_path[next], path.end());
      int branch_from = -1, branch_to = -1;
      for (size_t i = 0; i < loop.size() && branch_from < 0; ++i) {
        int succ = loop[(i + 1) % loop.size()];
        for (int w : g.out[loop[i]])
          if (w != succ && flags.right[w]) {
            branch_from = loop[i];
            branch_to = w;
            break;
          }
      }
      if (branch_from < 0)
        fail(ErrorKind::search_exhausted, "loop without a branch vertex");
      walked.insert({branch_from, branch_to});
      if (visited[branch_to]) break;
      for (int v : path) pos_in_path[v] = -1;
      path.assign(1, branch_to);
      visited[branch_to] = 1;
      pos_in_path[branch_to] = 0;
    } else if (visited[next]) {
      break;  // re-entered an earlier path: the structure closes up
    } else {
      visited[next] = 1;
      pos_in_path[next] = static_cast<int>(path.size());
      path.push_back(next);
    }
  }

  // The walked subgraph now contains two distinct cycles through a common
  // vertex; read off the least such pair in the cycle order.
  std::vector<Cycle> cycles = simple_cycles(n, walked);
  for (size_t i = 0; i < cycles.size(); ++i)
    for (size_t j = i + 1; j < cycles.size(); ++j) {
      std::vector<int> common = shared_vertices(cycles[i], cycles[j]);
      if (common.empty()) continue;
      DoubleLoop dl;
      dl.c0 = cycles[i];
      dl.c1 = cycles[j];
      dl.shared_vertex = common.front();
      return dl;
    }
  fail(ErrorKind::search_exhausted, "walk closed without a double loop");
}

std::vector<DoubleLoop> double_loops(const DeBruijnGraph& g,
                                     std::size_t limit) {
  std::set<std::pair<int, int>> edges(g.edges.begin(), g.edges.end());
  std::vector<Cycle> cycles =
      simple_cycles(static_cast<int>(g.vertices.size()), edges);
  if (cycles.size() > limit)
    fail(ErrorKind::budget, "too many simple cycles to pair");
  std::vector<DoubleLoop> out;
  for (size_t i = 0; i < cycles.size(); ++i)
    for (size_t j = i + 1; j < cycles.size(); ++j) {
      std::vector<int> common = shared_vertices(cycles[i], cycles[j]);
      if (common.empty()) continue;
      DoubleLoop dl;
      dl.c0 = cycles[i];
      dl.c1 = cycles[j];
      dl.shared_vertex = common.front();
      out.push_back(dl);
    }
  return out;
}

EpsilonInfo epsilon_max_info(int graphSize) {
  if (graphSize < 1) fail(ErrorKind::usage, "graph size must be positive");
  Rational size(graphSize);
  auto first_ok = [&](const Rational& e) {
    return e < (Rational(1, 3) - Rational(4, 3) * e) * (Rational(1) - e) / size;
  };
  auto second_ok = [&](const Rational& e) {
    Rational rest = Rational(1) - e;
    return rest * rest / (Rational(10) * size) >= e;
  };
  for (int k = 1;; ++k) {
    Rational e(k, 10000);
    if (first_ok(e) && second_ok(e)) continue;
    EpsilonInfo info;
    info.value = Rational(k - 1, 10000);
    info.binding = second_ok(e) ? 1 : 2;
    return info;
  }
}

Rational epsilon_max(int graphSize) { return epsilon_max_info(graphSize).value; }

namespace {

bool on_cycle_edge(const DoubleLoop& dl, int u, int v) {
  for (const Cycle* c : {&dl.c0, &dl.c1})
    for (size_t i = 0; i < c->size(); ++i)
      if ((*c)[i] == u && (*c)[(i + 1) % c->size()] == v) return true;
  return false;
}

bool on_cycle_vertex(const DoubleLoop& dl, int v) {
  return std::find(dl.c0.begin(), dl.c0.end(), v) != dl.c0.end() ||
         std::find(dl.c1.begin(), dl.c1.end(), v) != dl.c1.end();
}

}  // namespace

std::string graph_to_dot(const DeBruijnGraph& g,
                         const std::optional<DoubleLoop>& highlight) {
  std::string dot = "digraph sft {\n  rankdir=LR;\n";
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
    dot += "  \"" + g.vertices[v] + "\"";
    if (highlight && highlight->shared_vertex == v)
      dot += " [style=bold, peripheries=2]";
    else if (highlight && on_cycle_vertex(*highlight, v))
      dot += " [style=bold]";
    dot += ";\n";
  }
  for (const auto& [u, v] : g.edges) {
    dot += "  \"" + g.vertices[u] + "\" -> \"" + g.vertices[v] + "\"";
    if (highlight && on_cycle_edge(*highlight, u, v))
      dot += " [color=red, penwidth=2]";
    dot += ";\n";
  }
  dot += "}\n";
  return dot;
}

std::string classification_to_json_text(const DeBruijnGraph& g) {
  GoodFlags flags = classify_good(g);
  std::optional<DoubleLoop> dl = find_double_loop(g);
  nlohmann::json j;
  j["window"] = g.window;
  j["vertices"] = nlohmann::json::array();
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v)
    j["vertices"].push_back({{"word", g.vertices[v]},
                             {"goodRight", static_cast<bool>(flags.right[v])},
                             {"goodLeft", static_cast<bool>(flags.left[v])}});
  j["edges"] = nlohmann::json::array();
  for (const auto& [u, v] : g.edges)
    j["edges"].push_back({g.vertices[u], g.vertices[v]});
  if (dl) {
    auto words = [&](const Cycle& c) {
      std::vector<std::string> out;
      for (int v : c) out.push_back(g.vertices[v]);
      return out;
    };
    j["doubleLoop"] = {{"c0", words(dl->c0)},
                       {"c1", words(dl->c1)},
                       {"shared", g.vertices[dl->shared_vertex]}};
  } else {
    j["doubleLoop"] = nullptr;
  }
  return j.dump(2);
}

}  // namespace shiftgame
