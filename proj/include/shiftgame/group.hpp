#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shiftgame/error.hpp"

namespace shiftgame {

// Canonical word, one byte string per element. The identity is always the
// empty string; no other element encodes to it.
//   free(k):         reduced word, one signed byte per letter (+i / -i, 1-based)
//   free-abelian(d): d little-endian int32 coordinates (zero vector -> empty)
//   finite-table:    single byte, the element's table index (identity -> empty)
//   product:         4-byte little-endian length of the left word, then both
//                    canonical words (pair of identities -> empty)
using Word = std::string;

enum class GroupKind { free_group, free_abelian, finite_table, product };

class Group;
using GroupPtr = std::shared_ptr<const Group>;

struct GroupElement {
  GroupPtr group;
  Word word;
};

// Global element budget for ball/sphere materialization. Initialized from
// SHIFTGAME_BALL_BUDGET when set, else 10^6.
std::uint64_t ball_budget();
void set_ball_budget(std::uint64_t budget);

class Group : public std::enable_shared_from_this<Group> {
 public:
  static GroupPtr free_group(int rank);
  static GroupPtr free_abelian(int dim);
  // table[i][j] = index of element i * element j. Validated as a Latin
  // square with an identity and full associativity.
  static GroupPtr finite_table(std::vector<std::vector<int>> table,
                               std::vector<std::string> names = {});
  static GroupPtr cyclic(int order);
  static GroupPtr product(GroupPtr left, GroupPtr right);

  // Expression syntax: Z, Z^d, Fk, Ck, table:<csv path>, products with 'x',
  // parentheses. Example: "Z x C2".
  static GroupPtr from_expression(const std::string& expr);
  // Plain-text config: "kind" plus rank/dim/table/left/right lines.
  static GroupPtr from_config_text(const std::string& text);

  GroupKind kind() const { return kind_; }
  bool same(const Group& other) const;
  bool is_finite() const;
  std::optional<std::uint64_t> finite_order() const;
  int free_rank() const;
  int abelian_dim() const;
  int table_order() const;
  std::vector<std::vector<int>> table_copy() const;
  std::vector<std::string> table_names() const;
  GroupPtr left() const;
  GroupPtr right() const;

  // Word-level operations (canonical in, canonical out).
  Word identity_word() const { return Word(); }
  Word multiply_words(const Word& a, const Word& b) const;
  Word inverse_word(const Word& a) const;
  int word_length_of(const Word& a) const;
  std::vector<Word> generator_words() const;  // closed under inverse
  Word pair_word(const Word& left, const Word& right) const;  // product only
  std::pair<Word, Word> split_word(const Word& w) const;      // product only

  // Element-level API. multiply/inverse check group agreement (usage error).
  GroupElement identity() const;
  GroupElement element(Word w) const;
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;
  int word_length(const GroupElement& a) const;

  // Sphere {g : |g| = r} and ball {g : |g| <= r}, deterministic order
  // (radius, then canonical bytes). Materialization guarded by ball_budget.
  const std::vector<Word>& sphere(int r) const;
  std::vector<Word> ball(int r) const;
  // Exact counts, saturating at UINT64_MAX; no materialization.
  std::uint64_t sphere_size(int r) const;
  std::uint64_t ball_size(int r) const;

  // Exact set of word lengths { |g*c| : |c| = L }, closed-form per kind.
  std::vector<int> translate_lengths(const Word& g, int L) const;

  // Human-readable element syntax (parse accepts what format emits).
  //   free: "e", "abA" (uppercase = inverse), or g3/G3 beyond rank 26
  //   free-abelian: "5" (dim 1) or "(2,-3)"
  //   finite-table: element name (default t0, t1, ...)
  //   product: "(<left>,<right>)"
  std::string format_word(const Word& w) const;
  Word parse_element(const std::string& text) const;

  std::string describe() const;  // short expression-like description

  ~Group();

 private:
  Group() = default;
  struct Impl;
  GroupKind kind_;
  std::unique_ptr<Impl> impl_;
};

// Strict total order used for deterministic enumeration and map keys:
// (word length, canonical bytes).
struct WordOrder {
  const Group* group;
  bool operator()(const Word& a, const Word& b) const {
    int la = group->word_length_of(a), lb = group->word_length_of(b);
    if (la != lb) return la < lb;
    return a < b;
  }
};

}  // namespace shiftgame
