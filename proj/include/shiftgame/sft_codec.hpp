#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shiftgame/debruijn.hpp"
#include "shiftgame/layers.hpp"
#include "shiftgame/rational.hpp"

namespace shiftgame {

// Position blocks on the integers. b is increasing from b[0] = 0; block i
// (i >= 1) is [b[i-1], b[i]), and block -i mirrors it as -A_i - 1, i.e.
// [-b[i], -b[i-1]). Gap lengths are divisible by the window length so block
// boundaries land between dictionary words.
enum class ScheduleGrowth { strict, desk };

struct BlockSchedule {
  int window = 0;
  ScheduleGrowth growth = ScheduleGrowth::desk;
  int factor = 4;  // desk gap ratio K
  std::vector<long long> b;

  int block_count() const { return static_cast<int>(b.size()) - 1; }
  // Signed block index; 0 is invalid.
  std::pair<long long, long long> block(int i) const;
  int block_of(long long pos) const;
  long long block_length(int i) const;
  // sum_{j<i} b_j / b_i, the head-to-block weight ratio.
  Rational head_ratio(int i) const;
};

// strict: b_i = window * 2^(i*i), unusable past 6 blocks (capacity error)
// but with provably vanishing head ratio. desk: gaps window * K^i, K >= 4;
// head ratios stay below 1/(K-1), a desk-scale surrogate for the limit.
BlockSchedule block_schedule(int window, ScheduleGrowth growth, int blocks,
                             int factor = 4);

// Assignment of blocks to rings: player I takes odd block indices
// odd_start + 2(j_count*n + j), player II even ones even_start + 2(...).
// Index 1 is skipped by default: its block is too short to trace on.
struct RingScheme {
  int odd_start = 3;
  int even_start = 2;
  int j_count = 1;
};

int ring_block_index(const RingScheme& scheme, Player player, int n, int j);

// A finite two-sided binary window: symbol at position origin + k is
// symbols[k].
struct SftWindow {
  long long origin = 0;
  std::string symbols;

  long long begin() const { return origin; }
  long long end() const { return origin + static_cast<long long>(symbols.size()); }
  bool covers(long long lo, long long hi) const {
    return lo >= begin() && hi <= end();
  }
  char at(long long pos) const;
  std::string gram(long long pos, int window) const;

  std::string to_json_text() const;
  static SftWindow from_json_text(const std::string& text);
};

// Digit dictionary: every digit names a binary word of the window length.
// The default maps k to the big-endian bits of k mod 2^window, which is
// onto.
using Dictionary = std::function<std::string(int)>;
Dictionary default_dictionary(int window);
int word_digit(const std::string& word);  // inverse of the default map

// Preliminary placement: digit pair (x(2n), x(2n+1)) fills [nN, (n+1)N) and
// [-(n+1)N, -nN); when nN lies in an even block the two digits swap sides.
SftWindow pi_prime(const BlockSchedule& schedule,
                   const std::vector<int>& digits, const Dictionary& dict);

// Placement with redirection: once a player's word is not good in both
// directions, that player's later digits are ignored and the other player's
// words extend the window right, then left, alternating. legal() checks the
// window this active placement induces.
SftWindow pi(const DeBruijnGraph& graph, const BlockSchedule& schedule,
             const std::vector<int>& digits, const Dictionary& dict);
bool legal(const DeBruijnGraph& graph, const BlockSchedule& schedule,
           const std::vector<int>& digits, const Dictionary& dict);

struct TracePattern {
  DoubleLoop loop;
  int start_vertex = -1;
  std::string pattern;  // '0'/'1' per circuit
  long long a = 0, b = 0;

  std::optional<int> majority() const;  // defined only on strict majority
};

// Exact parse of y|[a,b) as circuits of the double loop from a shared
// vertex. Prefix-ambiguous cycle pairs are parsed preferring c0; the parse
// is deterministic but other patterns may exist for such pairs.
std::optional<TracePattern> trace_pattern(const DeBruijnGraph& graph,
                                          const SftWindow& y,
                                          const DoubleLoop& dl, long long a,
                                          long long b);

struct RingCheck {
  int j = 0;
  long long a = 0, b = 0;
  DoubleLoop loop;
  long long majority_count = 0, minority_count = 0, length = 0;
};

struct RuleReport {
  std::optional<int> witness;
  bool right_oriented = true;
  std::vector<RingCheck> rings;  // one per j on success
};

// Witness i such that every ring j in [jLo, jHi] carries a near-full
// interval tracing some double loop with majority i, minority at least a
// tenth. The window's orientation (all subwords good right, else all good
// left) picks positive or mirrored blocks.
std::optional<int> rule_check(const DeBruijnGraph& graph,
                              const BlockSchedule& schedule,
                              const RingScheme& scheme, const SftWindow& y,
                              int n, Player player, const Rational& eps,
                              int jLo, int jHi);
RuleReport rule_check_report(const DeBruijnGraph& graph,
                             const BlockSchedule& schedule,
                             const RingScheme& scheme, const SftWindow& y,
                             int n, Player player, const Rational& eps,
                             int jLo, int jHi);

// Whether pattern s supports witness i at tolerance eps:
// |s^-1(i)| >= (1-eps)(2/3)|s| and |s^-1(1-i)| >= (1-eps)(1/10)|s|.
bool pattern_meets(const std::string& s, int i, const Rational& eps);

// Encoder: bit k goes to player I's rings for k = 2n, player II's for
// k = 2n+1. Each addressed ring gets a shortest path to the double loop's
// shared vertex, minority circuits (a tenth of the pattern plus one), then
// majority circuits to the block end; everything else traces c0. Start
// vertex defaults to the shared vertex; it must be good both ways.
SftWindow sft_encode(const DeBruijnGraph& graph, const BlockSchedule& schedule,
                     const RingScheme& scheme, const std::vector<int>& bits,
                     std::pair<int, int> jRange = {-1, -1},
                     int start_vertex = -1);

struct SftDecoded {
  std::vector<std::optional<int>> bits;
};

// Decode bit positions 0..bit_count-1 with rule_check over the upper half
// of the j range (or the given one); position without a witness comes back
// empty.
SftDecoded sft_decode(const DeBruijnGraph& graph, const BlockSchedule& schedule,
                      const RingScheme& scheme, const SftWindow& y,
                      int bit_count, const Rational& eps,
                      std::pair<int, int> jRange = {-1, -1});

}  // namespace shiftgame
