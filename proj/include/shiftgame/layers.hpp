#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shiftgame/group.hpp"
#include "shiftgame/rational.hpp"

namespace shiftgame {

enum class Player { I, II };

inline const char* player_name(Player p) { return p == Player::I ? "I" : "II"; }
inline Player other(Player p) { return p == Player::I ? Player::II : Player::I; }

// Length classes over the equal-word-length relation. A_n is the set of
// nonempty classes of radius <= n. An optional selection k_0 < k_1 < ...
// picks sublayers A'_i = A_{k_i}; without one, A'_i = A_i.
class LayerSystem {
 public:
  explicit LayerSystem(GroupPtr group);
  LayerSystem(GroupPtr group, std::vector<int> selected);

  const GroupPtr& group() const { return group_; }
  bool identity_selection() const { return !selected_.has_value(); }
  // Number of selected indices; -1 when the selection is unbounded.
  int selected_count() const;
  int selected_index(int i) const;  // k_i
  int coverage_radius() const;      // largest selected radius; INT_MAX if unbounded
  // Least i with r <= k_i. Elements of band i >= 1 lie in A'_i \ A'_{i-1}.
  int band_of_radius(int r) const;

  std::uint64_t class_count(int n) const;     // |A_n|
  std::vector<int> class_radii(int n) const;  // radii of the classes of A_n
  std::uint64_t class_size(int radius) const;
  const std::vector<Word>& class_elements(int radius) const;
  std::uint64_t selected_class_count(int i) const;  // |A'_i|

  // max over classes C in A_n of the number of classes g*C meets.
  int appropriate_spread(const Word& g, int n) const;
  // |{C in A_n : g*C inside the ball of A_n}| / |A_n|, exact.
  Rational folner_ratio(int n, const Word& g) const;

 private:
  GroupPtr group_;
  std::optional<std::vector<int>> selected_;
};

// Greedy minimal k_0 < k_1 < ... < k_stages with
// (|A_{k_{t+1}}| - |A_{k_t}|) / |A_{k_{t+1}}| >= targetRatio at every step.
LayerSystem reindex_layers(const GroupPtr& group, const Rational& targetRatio,
                           int stages);

// Splits H by selected-band parity (even bands = H1, identity included) and
// G = H or G = H x F (F a finite table group) into player domains
// G_I = union of coset translates of H1, G_II likewise for H2. Also carries
// the alternating enumeration pi with pi(even) listing G_I in canonical order.
class PlayerPartition {
 public:
  static PlayerPartition parity(LayerSystem hLayers);
  static PlayerPartition coset_split(GroupPtr G, LayerSystem hLayers);

  const GroupPtr& group() const { return G_; }
  const GroupPtr& subgroup() const { return h_.group(); }
  const LayerSystem& h_layers() const { return h_; }
  const std::vector<Word>& coset_reps() const { return reps_; }

  bool in_H1(const Word& h) const;        // h: word in the subgroup
  Player player_of(const Word& g) const;  // g: word in the full group
  Word h_part(const Word& g) const;
  std::size_t coset_index_of(const Word& g) const;
  Word embed(const Word& h, std::size_t cosetIndex) const;

  Word pi(std::uint64_t index) const;
  std::uint64_t pi_inverse(const Word& g) const;

 private:
  PlayerPartition(GroupPtr G, LayerSystem h, std::vector<Word> reps);
  GroupPtr G_;
  LayerSystem h_;
  std::vector<Word> reps_;
  struct PiCache;
  std::shared_ptr<PiCache> cache_;
};

// Assignment of ring indices to (player, move, j) triples. Player I rings
// take even indices, player II odd ones; index i >= 1 names A'_i \ A'_{i-1}.
enum class PairingKind { two_adic, blocked };

struct RingRef {
  Player player;
  int n;
  int j;
};

class RingLayout {
 public:
  RingLayout(LayerSystem layers, PairingKind pairing, int jCount = 0);

  const LayerSystem& layers() const { return layers_; }
  PairingKind pairing() const { return pairing_; }
  int j_count() const { return jCount_; }  // 0 = unbounded j (two-adic)

  int ring_index(Player p, int n, int j) const;
  RingRef ring_at_index(int index) const;
  std::vector<int> ring_radii(Player p, int n, int j) const;
  std::uint64_t ring_class_count(Player p, int n, int j) const;

  std::string to_json_text() const;
  static RingLayout from_json_text(const std::string& text);

 private:
  LayerSystem layers_;
  PairingKind pairing_;
  int jCount_;
};

// Group serialization shared by layout files, reports, and the CLI.
std::string group_to_json_text(const GroupPtr& g);
GroupPtr group_from_json_text(const std::string& text);

}  // namespace shiftgame
