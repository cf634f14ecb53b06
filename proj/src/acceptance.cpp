#include "shiftgame/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "shiftgame/debruijn.hpp"
#include "shiftgame/error.hpp"
#include "shiftgame/game.hpp"
#include "shiftgame/group.hpp"
#include "shiftgame/layers.hpp"
#include "shiftgame/rational.hpp"
#include "shiftgame/sft_codec.hpp"
#include "shiftgame/shift_codec.hpp"

namespace shiftgame::acceptance {

namespace {

constexpr std::uint64_t kSeed = 20260818u;

// Failure accountant: criteria keep running after the first miss so the
// report can say how widespread a break is.
struct Tally {
  long long checks = 0;
  long long failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      if (first.empty()) first = what;
    }
  }
};

CriterionResult finish(int index, const std::string& label, const Tally& t,
                       const std::string& extra,
                       std::chrono::steady_clock::time_point started) {
  CriterionResult r;
  r.index = index;
  r.label = label;
  r.pass = t.failures == 0;
  std::ostringstream d;
  if (t.failures == 0) {
    d << t.checks << " checks";
    if (!extra.empty()) d << ", " << extra;
  } else {
    d << t.failures << " of " << t.checks << " checks failed; first: "
      << t.first;
  }
  r.detail = d.str();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            started)
                  .count();
  return r;
}

// ---- independent oracles, shared by several criteria ----

// Every simple cycle, by walking all starts and deduplicating minimal
// rotations.
std::set<Cycle> all_cycles_by_walks(const DeBruijnGraph& g) {
  std::set<Cycle> out;
  int n = static_cast<int>(g.vertices.size());
  std::vector<char> used(n, 0);
  std::vector<int> path;
  std::function<void(int, int)> go = [&](int start, int v) {
    for (int w : g.out[v]) {
      if (w == start) {
        Cycle canon = path;
        std::rotate(canon.begin(),
                    std::min_element(canon.begin(), canon.end()), canon.end());
        out.insert(canon);
      } else if (!used[w]) {
        used[w] = 1;
        path.push_back(w);
        go(start, w);
        path.pop_back();
        used[w] = 0;
      }
    }
  };
  for (int s = 0; s < n; ++s) {
    used.assign(static_cast<std::size_t>(n), 0);
    used[s] = 1;
    path.assign(1, s);
    go(s, s);
  }
  return out;
}

bool two_cycles_share_a_vertex(const std::set<Cycle>& cycles) {
  std::vector<Cycle> list(cycles.begin(), cycles.end());
  for (std::size_t i = 0; i < list.size(); ++i) {
    std::set<int> a(list[i].begin(), list[i].end());
    for (std::size_t j = i + 1; j < list.size(); ++j)
      for (int v : list[j])
        if (a.count(v)) return true;
  }
  return false;
}

bool is_cycle_of(const DeBruijnGraph& g, const Cycle& c) {
  if (c.empty()) return false;
  std::set<int> distinct(c.begin(), c.end());
  if (distinct.size() != c.size()) return false;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!g.has_edge(c[i], c[(i + 1) % c.size()])) return false;
  return true;
}

// Play the strategy out against every legal counter-play.
bool wins_all_plays(const GameSpec& g, const Strategy& s, Position& p) {
  if (static_cast<int>(p.size()) == g.depth)
    return g.payoff(p) == (s.owner == Player::I);
  const bool ownTurn = (p.size() % 2 == 0) == (s.owner == Player::I);
  if (ownTurn) {
    p.push_back(s.move_at(p));
    if (!g.in_tree(p)) {
      p.pop_back();
      return false;
    }
    bool v = wins_all_plays(g, s, p);
    p.pop_back();
    return v;
  }
  bool all = true;
  for (int a = 0; a < g.alphabet[p.size()]; ++a) {
    p.push_back(a);
    if (g.in_tree(p)) all = all && wins_all_plays(g, s, p);
    p.pop_back();
  }
  return all;
}

bool wins_all_plays(const GameSpec& g, const Strategy& s) {
  Position root;
  return wins_all_plays(g, s, root);
}

std::string bits_string(std::uint64_t bits, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i)
    if ((bits >> i) & 1u) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

// ---- criteria ----

CriterionResult folner_bound() {
  auto started = std::chrono::steady_clock::now();
  Tally t;
  struct Case {
    GroupPtr G;
    const char* name;
  };
  std::vector<Case> cases{{Group::free_abelian(1), "line"},
                          {Group::free_group(2), "free"},
                          {Group::product(Group::free_abelian(1),
                                          Group::cyclic(2)), "product"}};
  for (const Case& c : cases) {
    LayerSystem layers(c.G);
    for (int r = 0; r <= 5; ++r)
      for (const Word& g : c.G->sphere(r))
        for (int n = 0; n <= 30; ++n) {
          Rational bound(n - r + 1, n + 1);
          t.expect(layers.folner_ratio(n, g) >= bound,
                   std::string(c.name) + " group, |g|=" + std::to_string(r) +
                       ", n=" + std::to_string(n));
        }
  }
  return finish(1, "layer ratios never drop below (n-|g|+1)/(n+1)", t,
                "3 groups, n to 30, |g| to 5", started);
}

CriterionResult spread_bound() {
  auto started = std::chrono::steady_clock::now();
  Tally t;
  GroupPtr F2 = Group::free_group(2);
  LayerSystem layers(F2);
  for (int r = 0; r <= 4; ++r)
    for (const Word& g : F2->sphere(r))
      for (int n = 0; n <= 12; ++n)
        t.expect(layers.appropriate_spread(g, n) <= 2 * r + 2,
                 "|g|=" + std::to_string(r) + ", n=" + std::to_string(n));
  return finish(2, "class spread stays within 2|g|+2 on the free group", t,
                "ball(4), n to 12", started);
}

CriterionResult ring_codec_round_trip() {
  auto started = std::chrono::steady_clock::now();
  Tally t;
  std::mt19937_64 rng(kSeed);
  int vectors = 0;

  GroupPtr Z = Group::free_abelian(1);
  RingCodec line(RingLayout(LayerSystem(Z), PairingKind::two_adic, 0),
                 PlayerPartition::parity(LayerSystem(Z)));
  for (int trial = 0; trial < 160; ++trial) {
    int len = static_cast<int>(rng() % 7);
    int J = 1 + static_cast<int>(rng() % 8);
    std::vector<std::int32_t> moves;
    for (int k = 0; k < len; ++k)
      moves.push_back(static_cast<std::int32_t>(rng() % 3));
    Configuration x = line.encode_moves(moves, J);
    ++vectors;
    for (int k = 0; k < len; ++k) {
      Player p = k % 2 == 0 ? Player::I : Player::II;
      t.expect(line.decode(x, k, p, 0, J) == moves[k],
               "line move " + std::to_string(k) + " trial " +
                   std::to_string(trial));
      t.expect(line.decode_default(x, k, p, J) == moves[k],
               "line default move " + std::to_string(k));
    }
  }

  std::uint64_t saved = ball_budget();
  set_ball_budget(4'000'000);
  GroupPtr F2 = Group::free_group(2);
  RingCodec tree(RingLayout(LayerSystem(F2), PairingKind::blocked, 2),
                 PlayerPartition::parity(LayerSystem(F2)));
  for (int trial = 0; trial < 40; ++trial) {
    int len = trial < 35 ? static_cast<int>(rng() % 3) : 3;
    std::vector<std::int32_t> moves;
    for (int k = 0; k < len; ++k)
      moves.push_back(static_cast<std::int32_t>(rng() % 3));
    Configuration x = tree.encode_moves(moves, 1);
    ++vectors;
    for (int k = 0; k < len; ++k) {
      Player p = k % 2 == 0 ? Player::I : Player::II;
      t.expect(tree.decode(x, k, p, 0, 1) == moves[k],
               "free-group move " + std::to_string(k) + " trial " +
                   std::to_string(trial));
      t.expect(tree.decode_default(x, k, p, 1) == moves[k],
               "free-group default move " + std::to_string(k));
    }
  }
  set_ball_budget(saved);
  t.expect(vectors == 200, "expected 200 vectors");
  return finish(3, "ring codec decodes every encoded move vector", t,
                "200 vectors (160 line, 40 free group)", started);
}

CriterionResult invariance_bound() {
  auto started = std::chrono::steady_clock::now();
  Tally t;
  int cases = 0;
  GroupPtr Z = Group::free_abelian(1);

  auto run = [&](RingCodec codec, const GroupPtr& shiftGroup,
                 const char* name) {
    Configuration x = codec.encode_moves({2, 1}, 1);
    std::vector<Word> shifts{shiftGroup->identity_word()};
    for (int r = 1; r <= 3; ++r)
      for (const Word& g : shiftGroup->sphere(r)) shifts.push_back(g);
    std::vector<std::pair<int, int>> rings{{0, 0}, {0, 1}, {2, 0}};
    for (const Word& g : shifts)
      for (auto [n, j] : rings) {
        InvarianceReport report = codec.invariance_bound_check(x, g, n, j);
        ++cases;
        t.expect(report.defects <= report.bound && report.pass,
                 std::string(name) + " |g|=" +
                     std::to_string(shiftGroup->word_length_of(g)) +
                     " ring (" + std::to_string(n) + "," + std::to_string(j) +
                     ")");
      }
  };

  LayerSystem doubling = reindex_layers(Z, Rational(1, 2), 11);
  run(RingCodec(RingLayout(doubling, PairingKind::two_adic),
                PlayerPartition::parity(doubling)),
      Z, "line");
  GroupPtr G = Group::product(Z, Group::cyclic(2));
  run(RingCodec(RingLayout(doubling, PairingKind::two_adic),
                PlayerPartition::coset_split(G, doubling)),
      G, "product");

  t.expect(cases >= 50, "needed at least 50 cases, got " +
                            std::to_string(cases));
  return finish(4, "shifted rings stay within the three-part defect bound", t,
                std::to_string(cases) + " (g,n,j) cases", started);
}

CriterionResult golden_mean_graph() {
  auto started = std::chrono::steady_clock::now();
  Tally t;
  DeBruijnGraph gm = build_debruijn({"11"}, 2);
  t.expect(gm.vertices.size() == 3, "vertex count");
  t.expect(gm.edges.size() == 5, "edge count");
  t.expect(gm.vertices == std::vector<std::string>{"00", "01", "10"},
           "vertex words");
  std::optional<DoubleLoop> dl = find_double_loop(gm);
  t.expect(dl.has_value(), "double loop exists");
  if (dl) {
    t.expect(dl->c0 == Cycle{0}, "first cycle is the 00 self-loop");
    t.expect(dl->c1 == Cycle{0, 1, 2}, "second cycle is 00-01-10");
    t.expect(dl->shared_vertex == 0, "shared vertex 00");
    std::set<Cycle> cycles = all_cycles_by_walks(gm);
    t.expect(two_cycles_share_a_vertex(cycles), "enumeration finds the pair");
    t.expect(cycles.count(dl->c0) == 1 && cycles.count(dl->c1) == 1,
             "returned cycles are enumerated cycles");
    t.expect(is_cycle_of(gm, dl->c0) && is_cycle_of(gm, dl->c1),
             "returned cycles close up");
  }
  GoodFlags flags = classify_good(gm);
  t.expect(flags.right == std::vector<bool>(3, true) &&
               flags.left == std::vector<bool>(3, true),
           "all vertices good both ways");

  DeBruijnGraph alt = build_debruijn({"00", "11"}, 2);
  t.expect(!find_double_loop(alt).has_value(), "alternating shift has no loop");
  t.expect(!two_cycles_share_a_vertex(all_cycles_by_walks(alt)),
           "enumeration agrees there is none");
  GoodFlags altFlags = classify_good(alt);
  t.expect(altFlags.right == std::vector<bool>(2, false) &&
               altFlags.left == std::vector<bool>(2, false),
           "alternating shift is all-bad");
  return finish(5, "golden-mean graph, double loop, and classification", t, "",
                started);
}

CriterionResult tolerance_uniqueness() {
  auto started = std::chrono::steady_clock::now();
  Tally t;
  EpsilonInfo info = epsilon_max_info(3);
  t.expect(info.value > Rational(1, 50), "tolerance above 0.02");
  t.expect(info.value < Rational(1, 25), "tolerance below 0.04");
  t.expect(info.binding == 2, "tenth-rule inequality binds");

  const Rational cap = info.value;
  const Rational scale = Rational(1) - cap;
  for (int len = 1; len <= 60; ++len)
    for (int c1 = 0; c1 <= len; ++c1) {
      int c0 = len - c1;
      // Independent evaluation of the two witness inequalities.
      auto holds = [&](int maj, int mino) {
        return Rational(3 * maj) >= Rational(2 * len) * scale &&
               Rational(10 * mino) >= Rational(len) * scale;
      };
      bool w0 = holds(c0, c1);
      bool w1 = holds(c1, c0);
      t.expect(!(w0 && w1), "two witnesses at |s|=" + std::to_string(len) +
                                ", ones=" + std::to_string(c1));
      std::string s = std::string(static_cast<std::size_t>(c0), '0') +
                      std::string(static_cast<std::size_t>(c1), '1');
      t.expect(pattern_meets(s, 0, cap) == w0 && pattern_meets(s, 1, cap) == w1,
               "threshold check disagrees at |s|=" + std::to_string(len) +
                   ", ones=" + std::to_string(c1));
    }
  return finish(6, "tolerance grid value and witness exclusivity", t,
                "value " + info.value.str() + ", patterns to length 60",
                started);
}

CriterionResult window_codec_round_trip() {
  auto started = std::chrono::steady_clock::now();
  Tally t;
  DeBruijnGraph g = build_debruijn({"11"}, 2);
  RingScheme scheme;
  Rational eps = epsilon_max(3) / Rational(2);
  // Deepest addressed block: player I bit 2n sits at 3+2n, player II bit
  // 2n+1 at 2+2n.
  auto blocks_for = [](int len) {
    int deepest = 3;
    for (int k = 0; k < len; ++k)
      deepest = std::max(deepest, k % 2 == 0 ? 3 + k : 1 + k);
    return deepest;
  };
  std::map<int, BlockSchedule> schedules;
  int strings = 0;
  for (int len = 0; len <= 8; ++len) {
    int blocks = blocks_for(len);
    if (!schedules.count(blocks))
      schedules.emplace(blocks,
                        block_schedule(2, ScheduleGrowth::desk, blocks, 4));
    const BlockSchedule& schedule = schedules.at(blocks);
    for (std::uint64_t mask = 0; mask < (1ull << len); ++mask) {
      std::vector<int> bits;
      for (int k = 0; k < len; ++k) bits.push_back((mask >> k) & 1u);
      SftWindow y = sft_encode(g, schedule, scheme, bits);
      SftDecoded back = sft_decode(g, schedule, scheme, y, len, eps);
      ++strings;
      bool ok = back.bits.size() == bits.size();
      for (int k = 0; ok && k < len; ++k)
        ok = back.bits[static_cast<std::size_t>(k)].has_value() &&
             *back.bits[static_cast<std::size_t>(k)] == bits[k];
      t.expect(ok, "string of length " + std::to_string(len) + ", mask " +
                       std::to_string(mask));
    }
  }
  t.expect(strings == 511, "expected 511 strings");
  return finish(7, "window codec round trips every bit string to length 8", t,
                "511 strings, desk factor 4", started);
}

CriterionResult rules_transfer() {
  auto started = std::chrono::steady_clock::now();
  Tally t;
  const std::vector<std::string> trees{
      "depth 3\nalphabet 3\nrule [01]*\npayoff ",
      "depth 3\nalphabet 3\nrule 0[0-2][01]|1[01]0\npayoff "};
  for (const std::string& base : trees)
    for (std::uint64_t bits = 0; bits < 256; ++bits) {
      GameSpec rules = parse_game_fixture(base + bits_string(bits, 8) + "\n");
      SolveResult direct = solve(rules);
      SolveResult lifted = solve(extend_rules_game(rules));
      t.expect(direct.winner == lifted.winner,
               "winner changed at payoff " + std::to_string(bits));
      Strategy moved = transfer_rules_strategy(rules, lifted.strategy);
      t.expect(moved.owner == lifted.winner &&
                   wins_all_plays(rules, moved),
               "transferred strategy loses at payoff " + std::to_string(bits));
    }
  auto elapsed = std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - started)
                     .count();
  t.expect(elapsed < 60.0, "runtime above 60 s");
  return finish(8, "rules transfer preserves winners on both fixture trees", t,
                "512 payoffs", started);
}

CriterionResult shift_transfer() {
  auto started = std::chrono::steady_clock::now();
  Tally t;
  ShiftGameLayout board = toy_shift_layout(2);
  for (std::uint64_t bits = 0; bits < 16; ++bits) {
    auto basePayoff = [bits](const Position& m) {
      return ((bits >> (m[0] * 2 + m[1])) & 1u) != 0;
    };
    GameSpec aux = auxiliary_game(board, basePayoff);
    SolveResult deep = solve(aux);
    GameSpec base = full_tree_game(2, {2}, basePayoff);
    SolveResult flat = solve(base);
    t.expect(deep.winner == flat.winner,
             "winner changed at payoff " + std::to_string(bits));
    ShiftTransfer moved = transfer_shift_strategy(deep.strategy, board);
    t.expect(moved.strategy.owner == deep.winner &&
                 wins_all_plays(base, moved.strategy),
             "transferred strategy loses at payoff " + std::to_string(bits));
  }
  return finish(9, "shift transfer wins the base game on the toy board", t,
                "16 payoffs, 2 rings per move", started);
}

CriterionResult double_loop_oracle() {
  auto started = std::chrono::steady_clock::now();
  Tally t;
  std::mt19937_64 rng(kSeed);
  int made = 0, withLoop = 0, attempts = 0;
  while (made < 100 && attempts < 100000) {
    ++attempts;
    int window = 1 + static_cast<int>(rng() % 4);
    int count = static_cast<int>(rng() % 5);
    std::vector<std::string> forbidden;
    for (int i = 0; i < count; ++i) {
      int len = 1 + static_cast<int>(rng() % window);
      std::string w(static_cast<std::size_t>(len), '0');
      for (char& c : w)
        if (rng() & 1) c = '1';
      forbidden.push_back(w);
    }
    DeBruijnGraph g = build_debruijn(forbidden, window);
    if (g.vertices.size() > 8) continue;
    ++made;
    std::set<Cycle> cycles = all_cycles_by_walks(g);
    bool expect = two_cycles_share_a_vertex(cycles);
    std::optional<DoubleLoop> dl = find_double_loop(g);
    t.expect(dl.has_value() == expect,
             "finder disagrees on graph " + std::to_string(made));
    if (dl) {
      ++withLoop;
      t.expect(is_cycle_of(g, dl->c0) && is_cycle_of(g, dl->c1) &&
                   cycles.count(dl->c0) == 1 && cycles.count(dl->c1) == 1,
               "returned cycles not in the enumeration, graph " +
                   std::to_string(made));
    }
  }
  t.expect(made == 100, "graph generator starved");
  return finish(10, "double-loop finder matches cycle enumeration", t,
                "100 graphs, " + std::to_string(withLoop) + " with a loop",
                started);
}

}  // namespace

std::vector<CriterionResult> run_all() {
  std::vector<std::function<CriterionResult()>> criteria{
      folner_bound,       spread_bound,       ring_codec_round_trip,
      invariance_bound,   golden_mean_graph,  tolerance_uniqueness,
      window_codec_round_trip, rules_transfer, shift_transfer,
      double_loop_oracle};
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      out.push_back(criteria[i]());
    } catch (const Error& e) {
      CriterionResult r;
      r.index = static_cast<int>(i) + 1;
      r.label = "criterion aborted";
      r.pass = false;
      r.detail = e.what();
      out.push_back(r);
    }
  }
  return out;
}

bool all_pass(const std::vector<CriterionResult>& results) {
  for (const CriterionResult& r : results)
    if (!r.pass) return false;
  return !results.empty();
}

std::string report_lines(const std::vector<CriterionResult>& results) {
  std::ostringstream out;
  for (const CriterionResult& r : results) {
    out << (r.pass ? "PASS" : "FAIL") << "  " << r.index << "  " << r.label
        << "  (" << r.detail << ", ";
    out.precision(2);
    out << std::fixed << r.seconds << " s)\n";
  }
  return out.str();
}

}  // namespace shiftgame::acceptance
