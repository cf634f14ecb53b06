#include "shiftgame/game.hpp"

#include <algorithm>
#include <bitset>
#include <memory>
#include <optional>
#include <sstream>

#include "shiftgame/error.hpp"

namespace shiftgame {

namespace {

Player mover_of_length(std::size_t len) {
  return len % 2 == 0 ? Player::I : Player::II;
}

void check_spec(const GameSpec& spec) {
  if (spec.depth < 1) fail(ErrorKind::usage, "game depth must be at least 1");
  if (spec.alphabet.size() != static_cast<std::size_t>(spec.depth))
    fail(ErrorKind::usage, "alphabet needs one entry per round");
  for (int a : spec.alphabet)
    if (a < 1) fail(ErrorKind::usage, "every round needs at least one move");
  if (!spec.payoff) fail(ErrorKind::usage, "game needs a payoff");
  if (!spec.in_tree(Position{}))
    fail(ErrorKind::usage, "the empty position must be legal");
}

[[noreturn]] void dead_end(const Position& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i)
    s += (i ? "," : "") + std::to_string(p[i]);
  fail(ErrorKind::precondition,
       "rule tree has a dead end at position (" + s + ")");
}

// Exhaustive minimax value; visits every tree node once so the caller can
// enforce the position budget exactly.
bool counted_value(const GameSpec& spec, Position& p, std::uint64_t budget,
                   std::uint64_t& visited) {
  if (++visited > budget)
    fail(ErrorKind::budget,
         "game exceeds the position budget of " + std::to_string(budget));
  if (static_cast<int>(p.size()) == spec.depth) return spec.payoff(p);
  bool iMoves = p.size() % 2 == 0;
  bool any = false;
  bool best = !iMoves;
  for (int a = 0; a < spec.moves_at(static_cast<int>(p.size())); ++a) {
    p.push_back(a);
    if (spec.in_tree(p)) {
      any = true;
      bool v = counted_value(spec, p, budget, visited);
      best = iMoves ? (best || v) : (best && v);
    }
    p.pop_back();
  }
  if (!any) dead_end(p);
  return best;
}

// Short-circuiting value used by strategy extraction and payoff analysis.
bool quick_value(const GameSpec& spec, Position& p) {
  if (static_cast<int>(p.size()) == spec.depth) return spec.payoff(p);
  bool iMoves = p.size() % 2 == 0;
  bool any = false;
  for (int a = 0; a < spec.moves_at(static_cast<int>(p.size())); ++a) {
    p.push_back(a);
    if (spec.in_tree(p)) {
      any = true;
      bool v = quick_value(spec, p);
      if (v == iMoves) {
        p.pop_back();
        return v;
      }
    }
    p.pop_back();
  }
  if (!any) dead_end(p);
  return !iMoves;
}

void enumerate_leaves(const GameSpec& spec, Position& p,
                      std::vector<Position>& out) {
  if (static_cast<int>(p.size()) == spec.depth) {
    if (out.size() >= (1u << 20))
      fail(ErrorKind::budget, "rule tree has more than 2^20 leaves");
    out.push_back(p);
    return;
  }
  for (int a = 0; a < spec.moves_at(static_cast<int>(p.size())); ++a) {
    p.push_back(a);
    if (spec.in_tree(p)) enumerate_leaves(spec, p, out);
    p.pop_back();
  }
}

// Whether some rule-tree completion of p satisfies the payoff, and whether
// some completion misses it. Stops as soon as both answers are known.
void reach_outcomes(const GameSpec& spec, Position& p, bool& meets,
                    bool& misses) {
  if (meets && misses) return;
  if (static_cast<int>(p.size()) == spec.depth) {
    (spec.payoff(p) ? meets : misses) = true;
    return;
  }
  for (int a = 0; a < spec.moves_at(static_cast<int>(p.size())); ++a) {
    p.push_back(a);
    if (spec.in_tree(p)) reach_outcomes(spec, p, meets, misses);
    p.pop_back();
    if (meets && misses) return;
  }
}

}  // namespace

bool GameSpec::in_tree(const Position& p) const {
  if (p.size() > static_cast<std::size_t>(depth)) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] < 0 || p[i] >= alphabet[i]) return false;
  return !rule || rule(p);
}

int GameSpec::moves_at(int round) const {
  if (round < 0 || round >= depth)
    fail(ErrorKind::usage, "round " + std::to_string(round) +
                               " outside a depth-" + std::to_string(depth) +
                               " game");
  return alphabet[round];
}

GameSpec full_tree_game(int depth, std::vector<int> alphabet,
                        std::function<bool(const Position&)> payoff) {
  GameSpec g;
  g.depth = depth;
  if (alphabet.size() == 1 && depth > 1)
    alphabet.assign(static_cast<std::size_t>(depth), alphabet[0]);
  g.alphabet = std::move(alphabet);
  g.payoff = std::move(payoff);
  check_spec(g);
  return g;
}

int Strategy::move_at(const Position& p) const {
  auto it = table.find(p);
  if (it == table.end()) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i)
      s += (i ? "," : "") + std::to_string(p[i]);
    fail(ErrorKind::precondition,
         "strategy has no move at position (" + s + ")");
  }
  return it->second;
}

SolveResult solve(const GameSpec& spec, std::uint64_t budget) {
  check_spec(spec);
  SolveResult res;
  Position p;
  bool rootValue = counted_value(spec, p, budget, res.positions);
  res.winner = rootValue ? Player::I : Player::II;
  res.strategy.owner = res.winner;

  std::function<void(Position&)> build = [&](Position& pos) {
    if (static_cast<int>(pos.size()) == spec.depth) return;
    if (mover_of_length(pos.size()) == res.winner) {
      int chosen = -1;
      for (int a = 0; a < spec.moves_at(static_cast<int>(pos.size())); ++a) {
        pos.push_back(a);
        bool hit = spec.in_tree(pos) && quick_value(spec, pos) == rootValue;
        pos.pop_back();
        if (hit) {
          chosen = a;
          break;
        }
      }
      if (chosen < 0)
        fail(ErrorKind::precondition, "backward induction lost its own value");
      res.strategy.table[pos] = chosen;
      pos.push_back(chosen);
      build(pos);
      pos.pop_back();
    } else {
      for (int a = 0; a < spec.moves_at(static_cast<int>(pos.size())); ++a) {
        pos.push_back(a);
        if (spec.in_tree(pos)) build(pos);
        pos.pop_back();
      }
    }
  };
  build(p);
  return res;
}

bool verify_strategy(const GameSpec& spec, const Strategy& s) {
  check_spec(spec);
  bool wantTrue = s.owner == Player::I;
  std::function<bool(Position&)> run = [&](Position& p) -> bool {
    if (static_cast<int>(p.size()) == spec.depth)
      return spec.payoff(p) == wantTrue;
    if (mover_of_length(p.size()) == s.owner) {
      auto it = s.table.find(p);
      if (it == s.table.end()) return false;
      p.push_back(it->second);
      bool ok = spec.in_tree(p) && run(p);
      p.pop_back();
      return ok;
    }
    bool any = false;
    for (int a = 0; a < spec.moves_at(static_cast<int>(p.size())); ++a) {
      p.push_back(a);
      if (spec.in_tree(p)) {
        any = true;
        if (!run(p)) {
          p.pop_back();
          return false;
        }
      }
      p.pop_back();
    }
    return any;  // a dead end under the opponent means the tree is bad
  };
  Position p;
  return run(p);
}

Position retract(const GameSpec& spec, const Position& x) {
  check_spec(spec);
  if (x.size() > static_cast<std::size_t>(spec.depth))
    fail(ErrorKind::usage, "play longer than the game depth");
  Position out;
  out.reserve(x.size());
  for (int m : x) {
    out.push_back(m);
    if (spec.in_tree(out)) continue;
    out.pop_back();
    int round = static_cast<int>(out.size());
    bool found = false;
    for (int a = 0; a < spec.moves_at(round); ++a) {
      out.push_back(a);
      if (spec.in_tree(out)) {
        found = true;
        break;
      }
      out.pop_back();
    }
    if (!found) dead_end(out);
  }
  return out;
}

GameSpec extend_rules_game(const GameSpec& rulesGame) {
  check_spec(rulesGame);
  GameSpec out;
  out.depth = rulesGame.depth;
  out.alphabet = rulesGame.alphabet;
  GameSpec base = rulesGame;
  // Decidedness of the subtree below each last-legal prefix, shared across
  // payoff evaluations of one extended game.
  auto memo =
      std::make_shared<std::map<Position, std::pair<bool, bool>>>();
  out.payoff = [base, memo](const Position& x) -> bool {
    Position s;
    std::size_t i = 0;
    for (; i < x.size(); ++i) {
      s.push_back(x[i]);
      if (!base.in_tree(s)) break;
    }
    if (i == x.size()) return base.payoff(x);
    s.pop_back();  // the last legal prefix; the mover there broke the rules
    auto it = memo->find(s);
    if (it == memo->end()) {
      bool meets = false, misses = false;
      Position scratch = s;
      reach_outcomes(base, scratch, meets, misses);
      it = memo->emplace(s, std::make_pair(meets, misses)).first;
    }
    auto [meets, misses] = it->second;
    if (meets && misses) return mover_of_length(s.size()) == Player::II;
    return base.payoff(retract(base, x));
  };
  check_spec(out);
  return out;
}

Strategy transfer_rules_strategy(const GameSpec& rulesGame,
                                 const Strategy& sigmaPrime) {
  check_spec(rulesGame);
  GameSpec extended = extend_rules_game(rulesGame);
  if (!verify_strategy(extended, sigmaPrime))
    fail(ErrorKind::precondition,
         "strategy does not win the extended game, nothing to transfer");
  Strategy out;
  out.owner = sigmaPrime.owner;
  // Until the first retracted move the walk follows sigmaPrime verbatim;
  // afterwards the game is decided in the owner's favor and any legal move
  // will do.
  std::function<void(Position&, bool)> walk = [&](Position& p,
                                                  bool diverged) {
    if (static_cast<int>(p.size()) == rulesGame.depth) return;
    int round = static_cast<int>(p.size());
    if (mover_of_length(p.size()) == out.owner) {
      int move = -1;
      bool divergedNow = diverged;
      if (!diverged) {
        int m = sigmaPrime.move_at(p);
        p.push_back(m);
        bool legal = rulesGame.in_tree(p);
        p.pop_back();
        if (legal)
          move = m;
        else
          divergedNow = true;
      }
      if (move < 0) {
        for (int a = 0; a < rulesGame.moves_at(round) && move < 0; ++a) {
          p.push_back(a);
          if (rulesGame.in_tree(p)) move = a;
          p.pop_back();
        }
        if (move < 0) dead_end(p);
      }
      out.table[p] = move;
      p.push_back(move);
      walk(p, divergedNow);
      p.pop_back();
    } else {
      for (int a = 0; a < rulesGame.moves_at(round); ++a) {
        p.push_back(a);
        if (rulesGame.in_tree(p)) walk(p, diverged);
        p.pop_back();
      }
    }
  };
  Position p;
  walk(p, false);
  return out;
}

namespace {

using Atom = std::bitset<10>;

std::vector<Atom> compile_branch(const std::string& branch, int depth) {
  std::vector<Atom> atoms;
  std::size_t i = 0;
  bool star = false;
  while (i < branch.size()) {
    char c = branch[i];
    if (c >= '0' && c <= '9') {
      Atom a;
      a.set(static_cast<std::size_t>(c - '0'));
      atoms.push_back(a);
      ++i;
    } else if (c == '[') {
      Atom a;
      ++i;
      while (i < branch.size() && branch[i] != ']') {
        if (branch[i] < '0' || branch[i] > '9')
          fail(ErrorKind::usage,
               "rule classes hold digits only: " + branch);
        int lo = branch[i] - '0';
        int hi = lo;
        if (i + 2 < branch.size() && branch[i + 1] == '-' &&
            branch[i + 2] >= '0' && branch[i + 2] <= '9') {
          hi = branch[i + 2] - '0';
          i += 2;
        }
        if (hi < lo) fail(ErrorKind::usage, "empty digit range in " + branch);
        for (int d = lo; d <= hi; ++d) a.set(static_cast<std::size_t>(d));
        ++i;
      }
      if (i >= branch.size())
        fail(ErrorKind::usage, "unterminated class in rule " + branch);
      ++i;  // ']'
      if (a.none()) fail(ErrorKind::usage, "empty class in rule " + branch);
      atoms.push_back(a);
    } else if (c == '*') {
      if (i + 1 != branch.size() || atoms.empty())
        fail(ErrorKind::usage,
             "'*' may only close a rule branch: " + branch);
      star = true;
      ++i;
    } else {
      fail(ErrorKind::usage, std::string("unexpected character '") + c +
                                 "' in rule " + branch);
    }
  }
  if (star)
    while (static_cast<int>(atoms.size()) < depth) atoms.push_back(atoms.back());
  if (static_cast<int>(atoms.size()) != depth)
    fail(ErrorKind::usage, "rule branch does not span the depth: " + branch);
  return atoms;
}

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<Position> rule_tree_leaves(const GameSpec& spec) {
  check_spec(spec);
  std::vector<Position> out;
  Position p;
  enumerate_leaves(spec, p, out);
  return out;
}

GameSpec parse_game_fixture(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int depth = -1;
  std::vector<int> alphabet;
  std::string rulePattern;
  bool haveRule = false;
  std::string payoffSpec;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trimmed(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "depth") {
      if (depth >= 0) fail(ErrorKind::usage, "duplicate depth line");
      if (!(ls >> depth) || depth < 1)
        fail(ErrorKind::usage, "depth needs a positive integer");
    } else if (key == "alphabet") {
      if (!alphabet.empty()) fail(ErrorKind::usage, "duplicate alphabet line");
      int a;
      while (ls >> a) alphabet.push_back(a);
      if (alphabet.empty())
        fail(ErrorKind::usage, "alphabet needs at least one size");
      for (int v : alphabet)
        if (v < 1 || v > 10)
          fail(ErrorKind::usage, "fixture alphabets are single digits");
    } else if (key == "rule") {
      if (haveRule) fail(ErrorKind::usage, "duplicate rule line");
      std::getline(ls, rulePattern);
      rulePattern = trimmed(rulePattern);
      if (rulePattern.empty()) fail(ErrorKind::usage, "rule line is empty");
      haveRule = true;
    } else if (key == "payoff") {
      if (!payoffSpec.empty()) fail(ErrorKind::usage, "duplicate payoff line");
      if (!(ls >> payoffSpec))
        fail(ErrorKind::usage, "payoff line is empty");
    } else {
      fail(ErrorKind::usage, "unknown fixture key: " + key);
    }
  }
  if (depth < 0) fail(ErrorKind::usage, "fixture needs a depth line");
  if (alphabet.empty()) fail(ErrorKind::usage, "fixture needs an alphabet");
  if (payoffSpec.empty()) fail(ErrorKind::usage, "fixture needs a payoff");
  if (alphabet.size() == 1)
    alphabet.assign(static_cast<std::size_t>(depth), alphabet[0]);
  if (alphabet.size() != static_cast<std::size_t>(depth))
    fail(ErrorKind::usage, "alphabet needs one entry per round");

  GameSpec g;
  g.depth = depth;
  g.alphabet = std::move(alphabet);
  if (haveRule) {
    std::vector<std::vector<Atom>> branches;
    std::size_t start = 0;
    while (true) {
      std::size_t bar = rulePattern.find('|', start);
      std::string part = trimmed(
          rulePattern.substr(start, bar == std::string::npos
                                        ? std::string::npos
                                        : bar - start));
      if (part.empty()) fail(ErrorKind::usage, "empty rule branch");
      branches.push_back(compile_branch(part, depth));
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
    g.rule = [branches](const Position& p) {
      for (const auto& atoms : branches) {
        bool ok = true;
        for (std::size_t i = 0; i < p.size() && ok; ++i)
          ok = p[i] >= 0 && p[i] <= 9 &&
               atoms[i].test(static_cast<std::size_t>(p[i]));
        if (ok) return true;
      }
      return false;
    };
  }
  if (payoffSpec == "all") {
    g.payoff = [](const Position&) { return true; };
  } else if (payoffSpec == "none") {
    g.payoff = [](const Position&) { return false; };
  } else {
    for (char c : payoffSpec)
      if (c != '0' && c != '1')
        fail(ErrorKind::usage, "payoff must be a 0/1 bitmap, all, or none");
    GameSpec probe = g;
    probe.payoff = [](const Position&) { return false; };
    std::vector<Position> leaves = rule_tree_leaves(probe);
    if (leaves.size() != payoffSpec.size())
      fail(ErrorKind::usage,
           "payoff bitmap has " + std::to_string(payoffSpec.size()) +
               " bits for " + std::to_string(leaves.size()) + " leaves");
    auto table = std::make_shared<std::map<Position, bool>>();
    for (std::size_t i = 0; i < leaves.size(); ++i)
      table->emplace(leaves[i], payoffSpec[i] == '1');
    g.payoff = [table](const Position& x) {
      auto it = table->find(x);
      if (it == table->end())
        fail(ErrorKind::precondition,
             "payoff is defined on the rule tree leaves only");
      return it->second;
    };
  }
  check_spec(g);
  return g;
}

Player ShiftGameLayout::mover(int k) const {
  if (k < 0 || k >= base_depth)
    fail(ErrorKind::usage, "base move " + std::to_string(k) +
                               " outside a depth-" +
                               std::to_string(base_depth) + " game");
  return k % 2 == 0 ? Player::I : Player::II;
}

ShiftGameLayout toy_shift_layout(int baseDepth, int alphabet) {
  if (baseDepth < 1) fail(ErrorKind::usage, "the base game needs a move");
  if (alphabet < 1 || alphabet > 9)
    fail(ErrorKind::usage, "toy boards use single-digit alphabets");
  GroupPtr Z = Group::free_abelian(1);
  RingLayout layout(LayerSystem(Z), PairingKind::blocked, 2);
  PlayerPartition part = PlayerPartition::parity(LayerSystem(Z));
  RingCodec codec(std::move(layout), std::move(part));

  int last = baseDepth - 1;
  Player lastMover = last % 2 == 0 ? Player::I : Player::II;
  int maxBand = codec.layout().ring_index(lastMover, last, 1);
  std::uint64_t need = Z->ball_size(maxBand);

  ShiftGameLayout board{std::move(codec), baseDepth, alphabet, {}};
  std::uint64_t covered = 0;
  for (std::uint64_t t = 0; covered < need; ++t) {
    Word w = board.codec.partition().pi(t);
    if (Z->word_length_of(w) <= maxBand) ++covered;
    board.slots.push_back(std::move(w));
  }
  return board;
}

namespace {

struct SlotInfo {
  int radius = 0;
  bool carries = false;  // slot belongs to a family that carries a base move
  Player famPlayer = Player::I;
  int famMove = 0;  // base move index the family carries
};

std::vector<SlotInfo> classify_slots(const ShiftGameLayout& board) {
  const LayerSystem& layers = board.codec.layout().layers();
  const GroupPtr& G = board.codec.config_group();
  std::vector<SlotInfo> out;
  out.reserve(board.slots.size());
  for (const Word& w : board.slots) {
    SlotInfo info;
    info.radius = G->word_length_of(w);
    int band = layers.band_of_radius(info.radius);
    if (band >= 1) {
      RingRef ref = board.codec.layout().ring_at_index(band);
      if (ref.n < board.base_depth &&
          board.mover(ref.n) == ref.player) {
        info.carries = true;
        info.famPlayer = ref.player;
        info.famMove = ref.n;
      }
    }
    out.push_back(info);
  }
  return out;
}

Configuration config_of(const ShiftGameLayout& board, const Position& leaf) {
  std::vector<std::pair<Word, std::int32_t>> entries;
  entries.reserve(leaf.size());
  for (std::size_t t = 0; t < leaf.size(); ++t)
    entries.emplace_back(board.slots[t], leaf[t]);
  return Configuration::from_entries(board.codec.config_group(),
                                     std::move(entries), board.alphabet);
}

// The single value both rings of base move k agree on; nullopt when a ring
// is not a one-witness m-ring or the rings disagree.
std::optional<int> family_value(const ShiftGameLayout& board,
                                const Configuration& x, int k) {
  Player p = board.mover(k);
  std::optional<int> agreed;
  for (int j = 0; j < board.codec.layout().j_count(); ++j) {
    RingStatus st = board.codec.ring_status(x, p, k, j);
    if (st.state != RingState::m_ring || st.witnesses.size() != 1)
      return std::nullopt;
    if (agreed && *agreed != st.value) return std::nullopt;
    agreed = st.value;
  }
  return agreed;
}

}  // namespace

GameSpec auxiliary_game(const ShiftGameLayout& board,
                        std::function<bool(const Position&)> basePayoff) {
  if (!basePayoff) fail(ErrorKind::usage, "auxiliary game needs a payoff");
  GameSpec g;
  g.depth = board.aux_depth();
  g.alphabet.assign(board.slots.size(), board.alphabet);
  ShiftGameLayout b = board;
  // Families are checked in base-move order; the first player whose family
  // is not uniformly written loses, which lets the opponent stop encoding
  // only after the blame is already settled. Leaf scores are cached: the
  // solver's value and strategy passes revisit the same plays.
  auto cache = std::make_shared<std::map<Position, bool>>();
  g.payoff = [b, basePayoff, cache](const Position& leaf) -> bool {
    auto it = cache->find(leaf);
    if (it != cache->end()) return it->second;
    Configuration x = config_of(b, leaf);
    bool result = true;
    Position base;
    for (int k = 0; k < b.base_depth; ++k) {
      std::optional<int> m = family_value(b, x, k);
      if (!m) {
        result = b.mover(k) == Player::II;
        break;
      }
      base.push_back(*m);
    }
    if (static_cast<int>(base.size()) == b.base_depth)
      result = basePayoff(base);
    cache->emplace(leaf, result);
    return result;
  };
  check_spec(g);
  return g;
}

namespace {

// Move options at auxiliary turn t: the owner's strategy reply, the forced
// encoding of an already played opponent move, or a free branch. Free
// branches try class-invalidating values first so instability surfaces at
// the shortest prefix that can exhibit it.
struct ShiftSearch {
  const Strategy& aux;
  const ShiftGameLayout& board;
  const std::vector<SlotInfo>& slots;
  const Position& baseHistory;

  std::vector<int> options(std::size_t t, const Position& partial) const {
    Player turn = mover_of_length(t);
    if (turn == aux.owner) return {aux.move_at(partial)};
    const SlotInfo& info = slots[t];
    if (info.carries && info.famMove < static_cast<int>(baseHistory.size()))
      return {baseHistory[static_cast<std::size_t>(info.famMove)]};
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(board.alphabet));
    std::optional<int> placed;
    bool split = false;
    if (info.carries) {
      for (std::size_t s = 0; s < partial.size(); ++s)
        if (slots[s].radius == info.radius) {
          if (placed && *placed != partial[s]) split = true;
          placed = partial[s];
        }
    }
    if (placed && !split) {
      for (int a = 0; a < board.alphabet; ++a)
        if (a != *placed) order.push_back(a);
      order.push_back(*placed);
    } else {
      for (int a = 0; a < board.alphabet; ++a) order.push_back(a);
    }
    return order;
  }

  // Whether every completion of q agrees on one compliant value for the
  // family of base move k; reports that value.
  bool stabilized(Position& q, int k, std::optional<int>& agreed) const {
    if (static_cast<int>(q.size()) == board.aux_depth()) {
      std::optional<int> m = family_value(board, config_of(board, q), k);
      if (!m || (agreed && *agreed != *m)) return false;
      agreed = m;
      return true;
    }
    for (int a : options(q.size(), q)) {
      q.push_back(a);
      bool ok = stabilized(q, k, agreed);
      q.pop_back();
      if (!ok) return false;
    }
    return true;
  }

  bool find(Position& q, std::size_t len, int k, std::optional<int>& value,
            Position& chosen) const {
    if (q.size() == len) {
      std::optional<int> agreed;
      Position scratch = q;
      if (stabilized(scratch, k, agreed) && agreed) {
        value = agreed;
        chosen = q;
        return true;
      }
      return false;
    }
    for (int a : options(q.size(), q)) {
      q.push_back(a);
      bool hit = find(q, len, k, value, chosen);
      q.pop_back();
      if (hit) return true;
    }
    return false;
  }
};

}  // namespace

ShiftTransfer transfer_shift_strategy(const Strategy& aux,
                                      const ShiftGameLayout& board,
                                      int horizon) {
  if (board.base_depth < 1 || board.slots.empty())
    fail(ErrorKind::usage, "board has no slots to play on");
  if (horizon < -1) fail(ErrorKind::usage, "horizon must be -1 or >= 0");
  int hor = horizon < 0 ? board.aux_depth()
                        : std::min(horizon, board.aux_depth());
  std::vector<SlotInfo> slots = classify_slots(board);

  ShiftTransfer out;
  out.strategy.owner = aux.owner;

  std::function<void(Position&, const Position&)> walk =
      [&](Position& h, const Position& q) {
        if (static_cast<int>(h.size()) == board.base_depth) return;
        int k = static_cast<int>(h.size());
        if (board.mover(k) == aux.owner) {
          ShiftSearch search{aux, board, slots, h};
          std::optional<int> value;
          Position chosen;
          bool hit = false;
          for (std::size_t len = q.size();
               len <= static_cast<std::size_t>(hor) && !hit; ++len) {
            Position scratch = q;
            hit = search.find(scratch, len, k, value, chosen);
          }
          if (!hit) {
            std::string rings;
            for (int j = 0; j < board.codec.layout().j_count(); ++j)
              rings += std::string(j ? ", " : "") + "(n=" +
                       std::to_string(k) + ", j=" + std::to_string(j) + ")";
            fail(ErrorKind::search_exhausted,
                 "rings " + rings + " for player " +
                     player_name(aux.owner) +
                     " failed to stabilize within horizon " +
                     std::to_string(hor));
          }
          out.strategy.table[h] = *value;
          out.trace[h] = chosen;
          h.push_back(*value);
          walk(h, chosen);
          h.pop_back();
        } else {
          for (int a = 0; a < board.alphabet; ++a) {
            h.push_back(a);
            walk(h, q);
            h.pop_back();
          }
        }
      };
  Position h;
  Position q0;
  walk(h, q0);
  return out;
}

}  // namespace shiftgame
