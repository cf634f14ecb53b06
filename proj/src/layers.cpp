#include "shiftgame/layers.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <mutex>

#include <json.hpp>

namespace shiftgame {

namespace {

// Largest radius with a nonempty sphere, or -1 for infinite groups.
int finite_diameter(const GroupPtr& g) {
  switch (g->kind()) {
    case GroupKind::free_group:
    case GroupKind::free_abelian:
      return -1;
    case GroupKind::finite_table:
      return g->table_order() > 1 ? 1 : 0;
    case GroupKind::product: {
      int l = finite_diameter(g->left());
      int r = finite_diameter(g->right());
      if (l < 0 || r < 0) return -1;
      return l + r;
    }
  }
  return -1;
}

constexpr std::uint64_t kBandGuard = 10000000;

}  // namespace

LayerSystem::LayerSystem(GroupPtr group) : group_(std::move(group)) {
  if (!group_) fail(ErrorKind::usage, "layer system needs a group");
}

LayerSystem::LayerSystem(GroupPtr group, std::vector<int> selected)
    : group_(std::move(group)), selected_(std::move(selected)) {
  if (!group_) fail(ErrorKind::usage, "layer system needs a group");
  if (selected_->empty())
    fail(ErrorKind::usage, "layer selection must be nonempty");
  if ((*selected_)[0] < 0)
    fail(ErrorKind::usage, "layer indices must be nonnegative");
  for (std::size_t i = 1; i < selected_->size(); ++i)
    if ((*selected_)[i] <= (*selected_)[i - 1])
      fail(ErrorKind::usage, "layer selection must be strictly increasing");
}

int LayerSystem::selected_count() const {
  return selected_ ? static_cast<int>(selected_->size()) : -1;
}

int LayerSystem::selected_index(int i) const {
  if (i < 0) fail(ErrorKind::usage, "negative layer index");
  if (!selected_) return i;
  if (i >= static_cast<int>(selected_->size()))
    fail(ErrorKind::budget,
         "layer selection has " + std::to_string(selected_->size()) +
             " stages, index " + std::to_string(i) + " requested");
  return (*selected_)[i];
}

int LayerSystem::coverage_radius() const {
  return selected_ ? selected_->back() : INT_MAX;
}

int LayerSystem::band_of_radius(int r) const {
  if (r < 0) fail(ErrorKind::usage, "negative radius");
  if (!selected_) return r;
  auto it = std::lower_bound(selected_->begin(), selected_->end(), r);
  if (it == selected_->end())
    fail(ErrorKind::budget, "radius " + std::to_string(r) +
                                " beyond selected coverage " +
                                std::to_string(selected_->back()));
  return static_cast<int>(it - selected_->begin());
}

std::uint64_t LayerSystem::class_count(int n) const {
  if (n < 0) fail(ErrorKind::usage, "negative layer");
  int diam = finite_diameter(group_);
  int top = diam < 0 ? n : std::min(n, diam);
  return static_cast<std::uint64_t>(top) + 1;
}

std::vector<int> LayerSystem::class_radii(int n) const {
  if (n < 0) fail(ErrorKind::usage, "negative layer");
  int diam = finite_diameter(group_);
  int top = diam < 0 ? n : std::min(n, diam);
  std::vector<int> out(top + 1);
  for (int r = 0; r <= top; ++r) out[r] = r;
  return out;
}

std::uint64_t LayerSystem::class_size(int radius) const {
  return group_->sphere_size(radius);
}

const std::vector<Word>& LayerSystem::class_elements(int radius) const {
  return group_->sphere(radius);
}

std::uint64_t LayerSystem::selected_class_count(int i) const {
  return class_count(selected_index(i));
}

int LayerSystem::appropriate_spread(const Word& g, int n) const {
  int best = 0;
  for (int r : class_radii(n))
    best = std::max(best,
                    static_cast<int>(group_->translate_lengths(g, r).size()));
  return best;
}

Rational LayerSystem::folner_ratio(int n, const Word& g) const {
  auto radii = class_radii(n);
  std::int64_t inside = 0;
  for (int r : radii) {
    auto lengths = group_->translate_lengths(g, r);
    if (!lengths.empty() && lengths.back() <= n) ++inside;
  }
  return Rational(inside, static_cast<std::int64_t>(radii.size()));
}

LayerSystem reindex_layers(const GroupPtr& group, const Rational& targetRatio,
                           int stages) {
  if (!(Rational(0) < targetRatio && targetRatio < Rational(1)))
    fail(ErrorKind::usage, "target ratio must lie in (0,1)");
  if (stages < 0) fail(ErrorKind::usage, "stages must be nonnegative");
  if (finite_diameter(group) >= 0)
    fail(ErrorKind::precondition,
         "reindexing requires an infinite class quotient");
  std::int64_t p = targetRatio.num, q = targetRatio.den;
  std::vector<int> ks{0};
  std::int64_t prev = 0;
  for (int t = 0; t < stages; ++t) {
    // least k > prev with (k - prev) / (k + 1) >= p/q
    std::int64_t k = (q * prev + p + (q - p) - 1) / (q - p);
    if (k <= prev) k = prev + 1;
    if (k > (1ll << 30))
      fail(ErrorKind::budget, "target ratio needs layer indices beyond 2^30");
    if (!(Rational(k - prev, k + 1) >= targetRatio))
      fail(ErrorKind::precondition, "greedy reindex step failed");
    if (k > prev + 1 && Rational(k - 1 - prev, k) >= targetRatio)
      fail(ErrorKind::precondition, "greedy reindex step not minimal");
    ks.push_back(static_cast<int>(k));
    prev = k;
  }
  return LayerSystem(group, std::move(ks));
}

struct PlayerPartition::PiCache {
  std::mutex mu;
  std::vector<Word> list[2];
  int scanned = -1;
};

PlayerPartition::PlayerPartition(GroupPtr G, LayerSystem h,
                                 std::vector<Word> reps)
    : G_(std::move(G)),
      h_(std::move(h)),
      reps_(std::move(reps)),
      cache_(std::make_shared<PiCache>()) {}

PlayerPartition PlayerPartition::parity(LayerSystem hLayers) {
  if (finite_diameter(hLayers.group()) >= 0)
    fail(ErrorKind::precondition,
         "parity partition requires an infinite subgroup");
  GroupPtr H = hLayers.group();
  return PlayerPartition(H, std::move(hLayers), {H->identity_word()});
}

PlayerPartition PlayerPartition::coset_split(GroupPtr G, LayerSystem hLayers) {
  if (G->same(*hLayers.group())) return parity(std::move(hLayers));
  if (G->kind() != GroupKind::product ||
      !G->left()->same(*hLayers.group()) ||
      G->right()->kind() != GroupKind::finite_table)
    fail(ErrorKind::usage,
         "unsupported subgroup shape: need G = H or G = H x finite table");
  if (finite_diameter(hLayers.group()) >= 0)
    fail(ErrorKind::precondition, "coset split requires an infinite subgroup");
  std::vector<Word> reps;
  GroupPtr F = G->right();
  for (int r = 0; r <= 1; ++r)
    for (const Word& f : F->sphere(r))
      reps.push_back(G->pair_word(G->left()->identity_word(), f));
  return PlayerPartition(std::move(G), std::move(hLayers), std::move(reps));
}

bool PlayerPartition::in_H1(const Word& h) const {
  int band = h_.band_of_radius(h_.group()->word_length_of(h));
  return band % 2 == 0;
}

Word PlayerPartition::h_part(const Word& g) const {
  if (G_->same(*h_.group())) return g;
  return G_->split_word(g).first;
}

std::size_t PlayerPartition::coset_index_of(const Word& g) const {
  if (G_->same(*h_.group())) return 0;
  Word f = G_->split_word(g).second;
  for (std::size_t k = 0; k < reps_.size(); ++k)
    if (G_->split_word(reps_[k]).second == f) return k;
  fail(ErrorKind::precondition, "element matches no coset representative");
}

Word PlayerPartition::embed(const Word& h, std::size_t cosetIndex) const {
  if (cosetIndex >= reps_.size())
    fail(ErrorKind::usage, "coset index out of range");
  if (G_->same(*h_.group())) return h;
  return G_->pair_word(h, G_->split_word(reps_[cosetIndex]).second);
}

Player PlayerPartition::player_of(const Word& g) const {
  return in_H1(h_part(g)) ? Player::I : Player::II;
}

Word PlayerPartition::pi(std::uint64_t index) const {
  int side = static_cast<int>(index % 2);
  std::size_t pos = static_cast<std::size_t>(index / 2);
  std::lock_guard<std::mutex> lock(cache_->mu);
  while (cache_->list[side].size() <= pos) {
    int r = cache_->scanned + 1;
    for (const Word& w : G_->sphere(r)) {
      int p = player_of(w) == Player::I ? 0 : 1;
      cache_->list[p].push_back(w);
    }
    cache_->scanned = r;
  }
  return cache_->list[side][pos];
}

std::uint64_t PlayerPartition::pi_inverse(const Word& g) const {
  int r = G_->word_length_of(g);
  int side = player_of(g) == Player::I ? 0 : 1;
  std::lock_guard<std::mutex> lock(cache_->mu);
  while (cache_->scanned < r) {
    int next = cache_->scanned + 1;
    for (const Word& w : G_->sphere(next)) {
      int p = player_of(w) == Player::I ? 0 : 1;
      cache_->list[p].push_back(w);
    }
    cache_->scanned = next;
  }
  const auto& list = cache_->list[side];
  auto cmp = [this](const Word& a, const Word& b) {
    int la = G_->word_length_of(a), lb = G_->word_length_of(b);
    if (la != lb) return la < lb;
    return a < b;
  };
  auto it = std::lower_bound(list.begin(), list.end(), g, cmp);
  if (it == list.end() || *it != g)
    fail(ErrorKind::precondition, "element not reached by the enumeration");
  return 2 * static_cast<std::uint64_t>(it - list.begin()) +
         (side == 1 ? 1 : 0);
}

RingLayout::RingLayout(LayerSystem layers, PairingKind pairing, int jCount)
    : layers_(std::move(layers)), pairing_(pairing), jCount_(jCount) {
  if (pairing_ == PairingKind::blocked) {
    if (jCount_ < 1) fail(ErrorKind::usage, "blocked pairing needs jCount >= 1");
  } else {
    jCount_ = 0;
  }
}

int RingLayout::ring_index(Player p, int n, int j) const {
  if (n < 0 || j < 0) fail(ErrorKind::usage, "negative ring coordinates");
  std::int64_t idx;
  if (pairing_ == PairingKind::two_adic) {
    if (n > 25) fail(ErrorKind::capacity, "two-adic pairing overflow at n > 25");
    idx = (1ll << (n + 1)) * (2ll * j + 1);
    if (p == Player::II) idx -= 1;
  } else {
    if (j >= jCount_)
      fail(ErrorKind::usage, "blocked pairing has jCount " +
                                 std::to_string(jCount_) + ", j " +
                                 std::to_string(j) + " requested");
    std::int64_t t = static_cast<std::int64_t>(jCount_) * n + j;
    idx = p == Player::I ? 2 * t + 2 : 2 * t + 1;
  }
  if (idx > INT_MAX) fail(ErrorKind::capacity, "ring index overflow");
  return static_cast<int>(idx);
}

RingRef RingLayout::ring_at_index(int index) const {
  if (index < 1) fail(ErrorKind::usage, "ring indices start at 1");
  RingRef ref{};
  if (index % 2 == 0) {
    ref.player = Player::I;
    if (pairing_ == PairingKind::two_adic) {
      unsigned v = std::countr_zero(static_cast<unsigned>(index));
      ref.n = static_cast<int>(v) - 1;
      ref.j = ((index >> v) - 1) / 2;
    } else {
      int t = (index - 2) / 2;
      ref.n = t / jCount_;
      ref.j = t % jCount_;
    }
  } else {
    ref.player = Player::II;
    if (pairing_ == PairingKind::two_adic) {
      unsigned u = static_cast<unsigned>(index) + 1;
      unsigned v = std::countr_zero(u);
      ref.n = static_cast<int>(v) - 1;
      ref.j = static_cast<int>(((u >> v) - 1) / 2);
    } else {
      int t = (index - 1) / 2;
      ref.n = t / jCount_;
      ref.j = t % jCount_;
    }
  }
  return ref;
}

std::vector<int> RingLayout::ring_radii(Player p, int n, int j) const {
  int idx = ring_index(p, n, j);
  int hi = layers_.selected_index(idx);
  int lo = layers_.selected_index(idx - 1);
  if (static_cast<std::uint64_t>(hi) - lo > kBandGuard)
    fail(ErrorKind::budget, "ring band wider than " + std::to_string(kBandGuard));
  std::vector<int> out;
  for (int r = lo + 1; r <= hi; ++r)
    if (layers_.group()->sphere_size(r) > 0) out.push_back(r);
  return out;
}

std::uint64_t RingLayout::ring_class_count(Player p, int n, int j) const {
  return ring_radii(p, n, j).size();
}

namespace {

nlohmann::json group_to_json(const GroupPtr& g) {
  nlohmann::json j;
  switch (g->kind()) {
    case GroupKind::free_group:
      j["kind"] = "free";
      j["rank"] = g->free_rank();
      break;
    case GroupKind::free_abelian:
      j["kind"] = "free-abelian";
      j["dim"] = g->abelian_dim();
      break;
    case GroupKind::finite_table:
      j["kind"] = "finite-table";
      j["table"] = g->table_copy();
      j["names"] = g->table_names();
      break;
    case GroupKind::product:
      j["kind"] = "product";
      j["left"] = group_to_json(g->left());
      j["right"] = group_to_json(g->right());
      break;
  }
  return j;
}

GroupPtr group_from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "free") return Group::free_group(j.at("rank").get<int>());
  if (kind == "free-abelian")
    return Group::free_abelian(j.at("dim").get<int>());
  if (kind == "finite-table") {
    std::vector<std::string> names;
    if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
    return Group::finite_table(
        j.at("table").get<std::vector<std::vector<int>>>(), std::move(names));
  }
  if (kind == "product")
    return Group::product(group_from_json(j.at("left")),
                          group_from_json(j.at("right")));
  fail(ErrorKind::usage, "unknown group kind in JSON: " + kind);
}

}  // namespace

std::string group_to_json_text(const GroupPtr& g) {
  return group_to_json(g).dump();
}

GroupPtr group_from_json_text(const std::string& text) {
  try {
    return group_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::usage, std::string("bad group JSON: ") + e.what());
  }
}

std::string RingLayout::to_json_text() const {
  nlohmann::json j;
  j["group"] = group_to_json(layers_.group());
  if (layers_.identity_selection()) {
    j["selected"] = nullptr;
  } else {
    std::vector<int> ks(layers_.selected_count());
    for (int i = 0; i < layers_.selected_count(); ++i)
      ks[i] = layers_.selected_index(i);
    j["selected"] = ks;
  }
  j["pairing"] = pairing_ == PairingKind::two_adic ? "two-adic" : "blocked";
  j["jCount"] = jCount_;
  return j.dump(2);
}

RingLayout RingLayout::from_json_text(const std::string& text) {
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    GroupPtr g = group_from_json(j.at("group"));
    LayerSystem layers =
        j.at("selected").is_null()
            ? LayerSystem(g)
            : LayerSystem(g, j.at("selected").get<std::vector<int>>());
    std::string pairing = j.at("pairing").get<std::string>();
    if (pairing == "two-adic")
      return RingLayout(std::move(layers), PairingKind::two_adic);
    if (pairing == "blocked")
      return RingLayout(std::move(layers), PairingKind::blocked,
                        j.at("jCount").get<int>());
    fail(ErrorKind::usage, "unknown pairing: " + pairing);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::usage, std::string("bad layout JSON: ") + e.what());
  }
}

}  // namespace shiftgame
