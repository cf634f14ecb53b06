#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shiftgame/layers.hpp"

namespace shiftgame {

// Finite partial assignment G -> symbols, kept sorted by (length, bytes).
// Immutable: extension produces a new value.
class Configuration {
 public:
  explicit Configuration(GroupPtr group,
                         std::optional<std::int32_t> alphabet = std::nullopt);
  static Configuration from_entries(
      GroupPtr group, std::vector<std::pair<Word, std::int32_t>> entries,
      std::optional<std::int32_t> alphabet = std::nullopt);

  const GroupPtr& group() const { return group_; }
  std::optional<std::int32_t> alphabet() const { return alphabet_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<std::pair<Word, std::int32_t>>& entries() const {
    return entries_;
  }

  std::optional<std::int32_t> at(const Word& g) const;
  bool contains(const Word& g) const { return at(g).has_value(); }
  Configuration with_assignment(const Word& g, std::int32_t value) const;

  // (g.x)(h) = x(g^-1 h); the domain moves to g * domain.
  Configuration shifted(const Word& g) const;

  std::string to_json_text() const;
  static Configuration from_json_text(const std::string& text);

 private:
  struct presorted_tag {};
  Configuration(GroupPtr group, std::optional<std::int32_t> alphabet,
                std::vector<std::pair<Word, std::int32_t>> sorted,
                presorted_tag);
  void validate_symbol(std::int32_t value) const;

  GroupPtr group_;
  std::optional<std::int32_t> alphabet_;
  std::vector<std::pair<Word, std::int32_t>> entries_;

  friend class RingCodec;
};

enum class ClassState { undeclared, m_class, invalid };

struct ClassStatus {
  ClassState state = ClassState::undeclared;
  std::int32_t value = 0;  // meaningful only when state == m_class
};

enum class RingState { undeclared, invalid, m_ring, declared_neither };

struct RingStatus {
  RingState state = RingState::undeclared;
  std::int32_t value = 0;  // meaningful only when state == m_ring
  std::uint64_t classes = 0;
  std::uint64_t undeclared_classes = 0;
  std::uint64_t invalid_classes = 0;
  // Values m whose m-classes fill at least half the ring, ascending.
  std::vector<std::int32_t> witnesses;
  bool declared() const { return undeclared_classes == 0; }
};

struct InvarianceReport {
  std::int32_t witness = 0;     // value the ring encodes
  std::uint64_t defects = 0;    // classes no longer uniformly witness-valued
  std::uint64_t carry = 0;      // defects of the unshifted configuration
  std::uint64_t part_lower = 0;   // spread * classes below the ring
  std::uint64_t part_escape = 0;  // classes pushed past the covered layers
  std::uint64_t part_carry = 0;   // spread * carried defects
  std::uint64_t bound = 0;
  bool pass = false;
};

// Encoder/decoder for move sequences written onto rings. Moves alternate:
// even positions belong to player I, odd to player II; position t is written
// on rings (player(t), t, j) for j = 0..J and everything else in the covered
// region is filled with 0.
class RingCodec {
 public:
  RingCodec(RingLayout layout, PlayerPartition partition);

  const RingLayout& layout() const { return layout_; }
  const PlayerPartition& partition() const { return partition_; }
  const GroupPtr& config_group() const { return partition_.group(); }

  // All elements of G whose subgroup part has the given length.
  std::vector<Word> class_footprint(int radius) const;

  ClassStatus class_status(const Configuration& x, int radius) const;
  RingStatus ring_status(const Configuration& x, Player p, int n, int j) const;

  Configuration encode_moves(const std::vector<std::int32_t>& moves,
                             int J) const;

  // Smallest value every ring in the window [jLo, jHi] witnesses; nullopt
  // when the rings disagree; error when any ring is not fully declared.
  std::optional<std::int32_t> decode(const Configuration& x, int n, Player p,
                                     int jLo, int jHi) const;
  std::optional<std::int32_t> decode_default(const Configuration& x, int n,
                                             Player p, int J) const;

  InvarianceReport invariance_bound_check(const Configuration& x,
                                          const Word& g, int n, int j) const;

 private:
  bool trivial_cosets() const;

  RingLayout layout_;
  PlayerPartition partition_;
};

// Least j whose ring sits on a layer index above gLength + 1; decoding over
// [j0, J] survives shifts by words no longer than gLength.
int stability_j0(const RingLayout& layout, Player p, int n, int gLength);

}  // namespace shiftgame
