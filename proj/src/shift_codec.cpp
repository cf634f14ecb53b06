#include "shiftgame/shift_codec.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include <json.hpp>

namespace shiftgame {

namespace {

void sort_entries(const Group* g,
                  std::vector<std::pair<Word, std::int32_t>>& entries) {
  std::vector<std::tuple<int, Word, std::int32_t>> keyed;
  keyed.reserve(entries.size());
  for (auto& [w, v] : entries)
    keyed.emplace_back(g->word_length_of(w), std::move(w), v);
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    entries[i].first = std::move(std::get<1>(keyed[i]));
    entries[i].second = std::get<2>(keyed[i]);
  }
}

}  // namespace

Configuration::Configuration(GroupPtr group,
                             std::optional<std::int32_t> alphabet)
    : group_(std::move(group)), alphabet_(alphabet) {
  if (!group_) fail(ErrorKind::usage, "configuration needs a group");
  if (alphabet_ && *alphabet_ < 1)
    fail(ErrorKind::usage, "alphabet bound must be positive");
}

Configuration::Configuration(GroupPtr group,
                             std::optional<std::int32_t> alphabet,
                             std::vector<std::pair<Word, std::int32_t>> sorted,
                             presorted_tag)
    : group_(std::move(group)),
      alphabet_(alphabet),
      entries_(std::move(sorted)) {}

void Configuration::validate_symbol(std::int32_t value) const {
  if (value < 0)
    fail(ErrorKind::precondition, "symbols are natural numbers, got " +
                                      std::to_string(value));
  if (alphabet_ && value >= *alphabet_)
    fail(ErrorKind::precondition,
         "symbol " + std::to_string(value) + " exceeds the alphabet bound " +
             std::to_string(*alphabet_));
}

Configuration Configuration::from_entries(
    GroupPtr group, std::vector<std::pair<Word, std::int32_t>> entries,
    std::optional<std::int32_t> alphabet) {
  Configuration base(group, alphabet);
  for (const auto& [w, v] : entries) {
    group->element(w);
    base.validate_symbol(v);
  }
  sort_entries(group.get(), entries);
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].first == entries[i - 1].first)
      fail(ErrorKind::precondition,
           "duplicate assignment for " + group->format_word(entries[i].first));
  return Configuration(std::move(group), alphabet, std::move(entries),
                       presorted_tag{});
}

std::optional<std::int32_t> Configuration::at(const Word& g) const {
  WordOrder less{group_.get()};
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), g,
      [&](const auto& entry, const Word& w) { return less(entry.first, w); });
  if (it == entries_.end() || it->first != g) return std::nullopt;
  return it->second;
}

Configuration Configuration::with_assignment(const Word& g,
                                             std::int32_t value) const {
  group_->element(g);
  validate_symbol(value);
  WordOrder less{group_.get()};
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), g,
      [&](const auto& entry, const Word& w) { return less(entry.first, w); });
  if (it != entries_.end() && it->first == g)
    fail(ErrorKind::precondition,
         "element " + group_->format_word(g) + " is already assigned");
  std::vector<std::pair<Word, std::int32_t>> next;
  next.reserve(entries_.size() + 1);
  next.insert(next.end(), entries_.begin(), it);
  next.emplace_back(g, value);
  next.insert(next.end(), it, entries_.end());
  return Configuration(group_, alphabet_, std::move(next), presorted_tag{});
}

Configuration Configuration::shifted(const Word& g) const {
  group_->element(g);
  std::vector<std::pair<Word, std::int32_t>> moved;
  moved.reserve(entries_.size());
  for (const auto& [w, v] : entries_)
    moved.emplace_back(group_->multiply_words(g, w), v);
  sort_entries(group_.get(), moved);
  return Configuration(group_, alphabet_, std::move(moved), presorted_tag{});
}

std::string Configuration::to_json_text() const {
  nlohmann::json j;
  j["group"] = nlohmann::json::parse(group_to_json_text(group_));
  if (alphabet_)
    j["alphabet"] = *alphabet_;
  else
    j["alphabet"] = nullptr;
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [w, v] : entries_) entries[group_->format_word(w)] = v;
  j["entries"] = entries;
  return j.dump(2);
}

Configuration Configuration::from_json_text(const std::string& text) {
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    GroupPtr group = group_from_json_text(j.at("group").dump());
    std::optional<std::int32_t> alphabet;
    if (!j.at("alphabet").is_null())
      alphabet = j.at("alphabet").get<std::int32_t>();
    std::vector<std::pair<Word, std::int32_t>> entries;
    for (const auto& [key, value] : j.at("entries").items())
      entries.emplace_back(group->parse_element(key),
                           value.get<std::int32_t>());
    return from_entries(std::move(group), std::move(entries), alphabet);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::usage, std::string("bad configuration JSON: ") + e.what());
  }
}

RingCodec::RingCodec(RingLayout layout, PlayerPartition partition)
    : layout_(std::move(layout)), partition_(std::move(partition)) {
  if (!layout_.layers().group()->same(*partition_.subgroup()))
    fail(ErrorKind::usage,
         "ring layout and player partition describe different subgroups");
}

bool RingCodec::trivial_cosets() const {
  return partition_.group()->same(*partition_.subgroup());
}

std::vector<Word> RingCodec::class_footprint(int radius) const {
  const GroupPtr& H = partition_.subgroup();
  std::vector<Word> out;
  out.reserve(H->sphere(radius).size() * partition_.coset_reps().size());
  for (const Word& h : H->sphere(radius))
    for (std::size_t k = 0; k < partition_.coset_reps().size(); ++k)
      out.push_back(partition_.embed(h, k));
  return out;
}

ClassStatus RingCodec::class_status(const Configuration& x, int radius) const {
  if (!x.group()->same(*config_group()))
    fail(ErrorKind::usage, "configuration lives on a different group");
  ClassStatus status;
  bool seen = false;
  std::int32_t value = 0;
  if (trivial_cosets()) {
    // Entries are (length, bytes)-sorted, so one class is one slab.
    const Group* G = x.group().get();
    auto lo = std::partition_point(
        x.entries().begin(), x.entries().end(),
        [&](const auto& e) { return G->word_length_of(e.first) < radius; });
    for (auto it = lo; it != x.entries().end() &&
                       G->word_length_of(it->first) == radius;
         ++it) {
      if (!seen) {
        seen = true;
        value = it->second;
      } else if (it->second != value) {
        status.state = ClassState::invalid;
        return status;
      }
    }
  } else {
    const GroupPtr& H = partition_.subgroup();
    for (const Word& h : H->sphere(radius))
      for (std::size_t k = 0; k < partition_.coset_reps().size(); ++k) {
        auto v = x.at(partition_.embed(h, k));
        if (!v) continue;
        if (!seen) {
          seen = true;
          value = *v;
        } else if (*v != value) {
          status.state = ClassState::invalid;
          return status;
        }
      }
  }
  if (seen) {
    status.state = ClassState::m_class;
    status.value = value;
  }
  return status;
}

RingStatus RingCodec::ring_status(const Configuration& x, Player p, int n,
                                  int j) const {
  RingStatus rs;
  std::map<std::int32_t, std::uint64_t> perValue;
  for (int r : layout_.ring_radii(p, n, j)) {
    ++rs.classes;
    ClassStatus cs = class_status(x, r);
    switch (cs.state) {
      case ClassState::undeclared:
        ++rs.undeclared_classes;
        break;
      case ClassState::invalid:
        ++rs.invalid_classes;
        break;
      case ClassState::m_class:
        ++perValue[cs.value];
        break;
    }
  }
  for (const auto& [m, count] : perValue)
    if (2 * count >= rs.classes) rs.witnesses.push_back(m);
  if (rs.undeclared_classes > 0) {
    rs.state = RingState::undeclared;
  } else if (10 * rs.invalid_classes >= rs.classes) {
    rs.state = RingState::invalid;
  } else if (!rs.witnesses.empty()) {
    rs.state = RingState::m_ring;
    rs.value = rs.witnesses.front();
  } else {
    rs.state = RingState::declared_neither;
  }
  return rs;
}

Configuration RingCodec::encode_moves(const std::vector<std::int32_t>& moves,
                                      int J) const {
  if (J < 1) fail(ErrorKind::usage, "encoding depth J must be at least 1");
  if (layout_.pairing() == PairingKind::blocked && J >= layout_.j_count())
    fail(ErrorKind::usage,
         "layout exhausted: the pairing provides " +
             std::to_string(layout_.j_count()) +
             " rings per move, depth J=" + std::to_string(J) + " needs more");
  std::map<int, std::int32_t> ringValue;
  for (std::size_t t = 0; t < moves.size(); ++t) {
    if (moves[t] < 0)
      fail(ErrorKind::precondition, "symbols are natural numbers");
    Player p = t % 2 == 0 ? Player::I : Player::II;
    for (int j = 0; j <= J; ++j)
      ringValue[layout_.ring_index(p, static_cast<int>(t), j)] = moves[t];
  }
  int maxIdx = ringValue.empty() ? 0 : ringValue.rbegin()->first;
  const LayerSystem& layers = layout_.layers();
  int covered = layers.selected_index(maxIdx);

  const GroupPtr& H = partition_.subgroup();
  std::vector<std::pair<Word, std::int32_t>> entries;
  for (int r = 0; r <= covered; ++r) {
    if (H->sphere_size(r) == 0) continue;
    int band = layers.band_of_radius(r);
    std::int32_t value = 0;
    if (band > 0) {
      auto it = ringValue.find(band);
      if (it != ringValue.end()) value = it->second;
    }
    for (const Word& h : H->sphere(r))
      for (std::size_t k = 0; k < partition_.coset_reps().size(); ++k)
        entries.emplace_back(partition_.embed(h, k), value);
  }
  if (!trivial_cosets()) sort_entries(config_group().get(), entries);
  return Configuration(config_group(), std::nullopt, std::move(entries),
                       Configuration::presorted_tag{});
}

std::optional<std::int32_t> RingCodec::decode(const Configuration& x, int n,
                                              Player p, int jLo,
                                              int jHi) const {
  if (jLo < 0 || jHi < jLo)
    fail(ErrorKind::usage, "decoding window must be a nonempty j-range");
  std::vector<RingStatus> statuses;
  for (int j = jLo; j <= jHi; ++j) {
    statuses.push_back(ring_status(x, p, n, j));
    if (!statuses.back().declared())
      fail(ErrorKind::insufficient_data,
           std::string("ring ") + player_name(p) + " n=" + std::to_string(n) +
               " j=" + std::to_string(j) + " has undeclared classes");
  }
  std::vector<std::int32_t> common = statuses.front().witnesses;
  for (std::size_t i = 1; i < statuses.size() && !common.empty(); ++i) {
    std::vector<std::int32_t> merged;
    std::set_intersection(common.begin(), common.end(),
                          statuses[i].witnesses.begin(),
                          statuses[i].witnesses.end(),
                          std::back_inserter(merged));
    common = std::move(merged);
  }
  if (common.empty()) return std::nullopt;
  return common.front();
}

std::optional<std::int32_t> RingCodec::decode_default(const Configuration& x,
                                                      int n, Player p,
                                                      int J) const {
  return decode(x, n, p, (J + 1) / 2, J);
}

InvarianceReport RingCodec::invariance_bound_check(const Configuration& x,
                                                   const Word& g, int n,
                                                   int j) const {
  config_group()->element(g);
  const LayerSystem& layers = layout_.layers();
  const GroupPtr& H = partition_.subgroup();
  int c = layout_.ring_index(Player::I, n, j);
  std::vector<int> radii = layout_.ring_radii(Player::I, n, j);

  RingStatus rs = ring_status(x, Player::I, n, j);
  if (rs.witnesses.empty())
    fail(ErrorKind::precondition,
         "configuration does not encode move " + std::to_string(n) +
             " on ring j=" + std::to_string(j));
  InvarianceReport report;
  report.witness = rs.witnesses.front();

  for (int r : radii) {
    ClassStatus cs = class_status(x, r);
    if (!(cs.state == ClassState::m_class && cs.value == report.witness))
      ++report.carry;
  }

  Word hInv = partition_.h_part(g);  // inverse of h' below
  Word hPrime = H->inverse_word(hInv);
  int kc = layers.selected_index(c);
  int kcPrev = layers.selected_index(c - 1);

  report.part_lower =
      static_cast<std::uint64_t>(layers.appropriate_spread(hPrime, kcPrev)) *
      (static_cast<std::uint64_t>(kcPrev) + 1);
  for (int r : radii)
    if (H->translate_lengths(hPrime, r).back() > kc) ++report.part_escape;
  report.part_carry =
      static_cast<std::uint64_t>(layers.appropriate_spread(hInv, kc)) *
      report.carry;
  report.bound = report.part_lower + report.part_escape + report.part_carry;

  Configuration sx = x.shifted(g);
  for (int r : radii) {
    bool defect = false;
    for (const Word& h : H->sphere(r)) {
      for (std::size_t k = 0; k < partition_.coset_reps().size(); ++k) {
        auto v = sx.at(partition_.embed(h, k));
        if (!v || *v != report.witness) {
          defect = true;
          break;
        }
      }
      if (defect) break;
    }
    if (defect) ++report.defects;
  }
  report.pass = report.defects <= report.bound;
  return report;
}

int stability_j0(const RingLayout& layout, Player p, int n, int gLength) {
  int limit = layout.pairing() == PairingKind::blocked ? layout.j_count() : 64;
  for (int j = 0; j < limit; ++j)
    if (layout.ring_index(p, n, j) > gLength + 1) return j;
  fail(ErrorKind::precondition,
       "no ring of move " + std::to_string(n) +
           " sits above layer index " + std::to_string(gLength + 1));
}

}  // namespace shiftgame
