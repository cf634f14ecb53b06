#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "shiftgame/shift_codec.hpp"

namespace shiftgame {

using Position = std::vector<int>;

// Finite alternating game truncated at `depth` plies; player I moves at even
// lengths. rule(p) answers whether p is a legal position; the caller's
// contract is prefix closure and prunedness (every legal position shorter
// than depth has a legal successor), which the built-in constructors and the
// fixture parser both guarantee. payoff is consulted on full-length plays
// only and is true exactly when player I wins.
struct GameSpec {
  int depth = 0;
  std::vector<int> alphabet;  // one entry per round, each >= 1
  std::function<bool(const Position&)> rule;    // empty: every position legal
  std::function<bool(const Position&)> payoff;

  bool in_tree(const Position& p) const;
  int moves_at(int round) const;
};

GameSpec full_tree_game(int depth, std::vector<int> alphabet,
                        std::function<bool(const Position&)> payoff);

// Moves for every own-turn position reachable when the owner follows the
// table and the opponent plays arbitrary legal moves.
struct Strategy {
  Player owner = Player::I;
  std::map<Position, int> table;

  int move_at(const Position& p) const;  // precondition error when absent
};

struct SolveResult {
  Player winner = Player::I;
  Strategy strategy;
  std::uint64_t positions = 0;  // nodes visited by the induction pass
};

// Backward induction over the rule tree. The returned strategy picks the
// least winning move at every reachable own-turn position.
SolveResult solve(const GameSpec& spec, std::uint64_t budget = 10000000);

// True when the owner wins every run in which the opponent plays arbitrary
// legal moves; false as soon as the table lacks a reachable position, leaves
// the rule tree, or reaches a losing leaf.
bool verify_strategy(const GameSpec& spec, const Strategy& s);

// Retraction onto the rule tree: every illegal move is replaced, in order,
// by the least legal alternative. Fixes legal inputs, is idempotent, and is
// Lipschitz: the first n output moves depend only on the first n input
// moves. Accepts positions as well as full plays.
Position retract(const GameSpec& spec, const Position& x);

// Total game on the full tree extending a rules game. Plays that stay legal
// keep the payoff. A play that first goes illegal at s loses for the player
// who moved there when both outcomes were still reachable below the last
// legal position; once only one outcome is reachable the play is scored
// through the retraction instead, so later violations cannot flip a decided
// game.
GameSpec extend_rules_game(const GameSpec& rulesGame);

// Pulls a winning strategy of the extended total game back onto the rules
// game by retracting each proposed move. After the first retracted move the
// game is decided in the owner's favor and any legal move is emitted.
// Precondition error when sigmaPrime does not win the extended game.
Strategy transfer_rules_strategy(const GameSpec& rulesGame,
                                 const Strategy& sigmaPrime);

// Text fixture: "depth", "alphabet" (uniform or one entry per round),
// optional "rule" (branches separated by '|', each a string of digit
// literals and classes like [02] or [0-2]; a trailing '*' repeats the last
// atom to fill the depth), and "payoff" (bitmap over the rule-tree leaves in
// lexicographic order, or "all"/"none"). '#' starts a comment.
GameSpec parse_game_fixture(const std::string& text);

// Leaves of the rule tree in lexicographic order.
std::vector<Position> rule_tree_leaves(const GameSpec& spec);

// Finite auxiliary board for the encoded game: an alternating game whose
// turn t writes the symbol slot pi(t) of a configuration over Z. Base move k
// is carried by ring family (mover(k), n=k) of a blocked two-rings-per-move
// layout, so each move's rings are fully written before the next move's
// rings open, and the remaining slots are meaningless filler. The auxiliary
// payoff walks the families in move order: the first player whose family is
// not uniformly written loses, and fully compliant plays score the decoded
// base play.
struct ShiftGameLayout {
  RingCodec codec;
  int base_depth = 0;
  int alphabet = 2;
  std::vector<Word> slots;  // pi(0), pi(1), ... covering every used family

  int aux_depth() const { return static_cast<int>(slots.size()); }
  Player mover(int k) const;  // base-game mover of move k
};

ShiftGameLayout toy_shift_layout(int baseDepth, int alphabet = 2);

GameSpec auxiliary_game(const ShiftGameLayout& board,
                        std::function<bool(const Position&)> basePayoff);

struct ShiftTransfer {
  Strategy strategy;                    // base-game strategy
  std::map<Position, Position> trace;   // own-turn base position -> the
                                        // auxiliary prefix the move came from
};

// Replays the auxiliary strategy against virtual opponent digits to produce
// base moves: at each own turn the search extends the carried auxiliary
// prefix, forcing known opponent moves onto their families and branching on
// free slots (values that would invalidate a partially written class first),
// until every completion agrees on the owner's next family value. The least
// stabilized prefix wins; exhausting the horizon raises a search-exhausted
// error naming the rings that failed to stabilize.
ShiftTransfer transfer_shift_strategy(const Strategy& aux,
                                      const ShiftGameLayout& board,
                                      int horizon = -1);

}  // namespace shiftgame
