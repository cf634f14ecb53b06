#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "shiftgame/shift_codec.hpp"

using namespace shiftgame;

namespace {

std::optional<ErrorKind> error_kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

GroupPtr z_group() { return Group::free_abelian(1); }

RingCodec plain_z_codec(PairingKind pk = PairingKind::two_adic, int jCount = 0) {
  GroupPtr Z = z_group();
  return RingCodec(RingLayout(LayerSystem(Z), pk, jCount),
                   PlayerPartition::parity(LayerSystem(Z)));
}

// Doubling bands: ring at index i spans 2^(i-1) radii, wide enough that a
// short shift damages fewer than half of any ring's classes.
RingCodec doubling_z_codec() {
  GroupPtr Z = z_group();
  LayerSystem sel = reindex_layers(Z, Rational(1, 2), 11);
  return RingCodec(RingLayout(sel, PairingKind::two_adic),
                   PlayerPartition::parity(sel));
}

RingCodec doubling_product_codec() {
  GroupPtr Z = z_group();
  GroupPtr G = Group::product(Z, Group::cyclic(2));
  LayerSystem sel = reindex_layers(Z, Rational(1, 2), 11);
  return RingCodec(RingLayout(sel, PairingKind::two_adic),
                   PlayerPartition::coset_split(G, sel));
}

Configuration z_config(const std::vector<std::pair<int, std::int32_t>>& points,
                       std::optional<std::int32_t> alphabet = std::nullopt) {
  GroupPtr Z = z_group();
  std::vector<std::pair<Word, std::int32_t>> entries;
  for (const auto& [p, v] : points)
    entries.emplace_back(Z->parse_element(std::to_string(p)), v);
  return Configuration::from_entries(Z, std::move(entries), alphabet);
}

}  // namespace

TEST_CASE("shifting moves the domain and relabels points") {
  GroupPtr Z = z_group();
  Configuration x = z_config({{0, 1}, {1, 0}});

  Configuration same = x.shifted(Z->identity_word());
  CHECK(same.entries() == x.entries());

  Configuration moved = x.shifted(Z->parse_element("2"));
  Configuration expect = z_config({{2, 1}, {3, 0}});
  CHECK(moved.entries() == expect.entries());

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> point(-5, 5), symbol(0, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<int, std::int32_t>> points;
    std::set<int> used;
    for (int i = 0; i < 6; ++i) {
      int p = point(rng);
      if (used.insert(p).second) points.push_back({p, symbol(rng)});
    }
    Configuration cfg = z_config(points);
    Word g = Z->parse_element(std::to_string(point(rng)));
    Word h = Z->parse_element(std::to_string(point(rng)));
    Configuration byParts = cfg.shifted(g).shifted(h);
    Configuration atOnce = cfg.shifted(Z->multiply_words(h, g));
    CHECK(byParts.entries() == atOnce.entries());
  }

  GroupPtr G = Group::product(Z, Group::cyclic(2));
  std::vector<std::pair<Word, std::int32_t>> entries;
  for (int r = 0; r <= 2; ++r)
    for (const Word& w : G->sphere(r))
      entries.emplace_back(w, (r * 7) % 3);
  Configuration pcfg = Configuration::from_entries(G, entries);
  Word pg = G->parse_element("(2,g1)");
  Word ph = G->parse_element("(-1,g1)");
  CHECK(pcfg.shifted(pg).shifted(ph).entries() ==
        pcfg.shifted(G->multiply_words(ph, pg)).entries());
}

TEST_CASE("configurations validate entries and stay immutable") {
  GroupPtr Z = z_group();
  Configuration x = z_config({{0, 1}, {3, 2}});
  CHECK(x.size() == 2);
  CHECK(x.at(Z->identity_word()) == 1);
  CHECK(x.at(Z->parse_element("3")) == 2);
  CHECK(!x.at(Z->parse_element("1")).has_value());

  Configuration y = x.with_assignment(Z->parse_element("1"), 0);
  CHECK(y.size() == 3);
  CHECK(x.size() == 2);
  CHECK(error_kind_of([&] { x.with_assignment(Z->identity_word(), 2); }) ==
        ErrorKind::precondition);

  CHECK(error_kind_of([&] { z_config({{2, 1}, {2, 1}}); }) ==
        ErrorKind::precondition);
  CHECK(error_kind_of([&] { z_config({{2, -1}}); }) == ErrorKind::precondition);
  CHECK(error_kind_of([&] { z_config({{2, 2}}, 2); }) ==
        ErrorKind::precondition);
  CHECK(error_kind_of([&] { Configuration(z_group(), 0); }) ==
        ErrorKind::usage);

  Configuration bounded = z_config({{0, 1}, {5, 0}}, 2);
  Configuration back = Configuration::from_json_text(bounded.to_json_text());
  CHECK(back.group()->same(*Z));
  CHECK(back.alphabet() == 2);
  CHECK(back.entries() == bounded.entries());

  GroupPtr G = Group::product(Z, Group::cyclic(2));
  Configuration pcfg = Configuration::from_entries(
      G, {{G->parse_element("(2,g1)"), 3}, {G->parse_element("(0,g1)"), 0}});
  Configuration pback = Configuration::from_json_text(pcfg.to_json_text());
  CHECK(pback.entries() == pcfg.entries());
  CHECK(!pback.alphabet().has_value());

  CHECK(error_kind_of([] { Configuration::from_json_text("nope"); }) ==
        ErrorKind::usage);
}

TEST_CASE("class status distinguishes empty, uniform, and conflicting") {
  RingCodec codec = plain_z_codec();
  GroupPtr Z = z_group();

  Configuration empty(Z);
  CHECK(codec.class_status(empty, 3).state == ClassState::undeclared);

  Configuration half = z_config({{2, 1}});
  CHECK(codec.class_status(half, 2).state == ClassState::m_class);
  CHECK(codec.class_status(half, 2).value == 1);

  Configuration full = z_config({{2, 1}, {-2, 1}});
  CHECK(codec.class_status(full, 2).state == ClassState::m_class);

  Configuration mixed = z_config({{2, 1}, {-2, 0}});
  CHECK(codec.class_status(mixed, 2).state == ClassState::invalid);

  RingCodec pcodec = doubling_product_codec();
  GroupPtr G = pcodec.config_group();
  Configuration one =
      Configuration::from_entries(G, {{G->parse_element("(2,g1)"), 1}});
  CHECK(pcodec.class_status(one, 2).state == ClassState::m_class);
  CHECK(pcodec.class_footprint(2).size() == 4);
  Configuration clash = Configuration::from_entries(
      G, {{G->parse_element("(2,g1)"), 1}, {G->parse_element("(-2,g0)"), 0}});
  CHECK(pcodec.class_status(clash, 2).state == ClassState::invalid);
}

TEST_CASE("a tenth of conflicting classes poisons the ring summary") {
  GroupPtr Z = z_group();
  LayerSystem layers(Z, {0, 10, 13});
  RingCodec codec(RingLayout(layers, PairingKind::blocked, 1),
                  PlayerPartition::parity(LayerSystem(Z)));

  std::vector<std::pair<int, std::int32_t>> points;
  for (int r = 1; r <= 9; ++r) {
    points.push_back({r, 1});
    points.push_back({-r, 1});
  }
  points.push_back({10, 1});
  points.push_back({-10, 0});
  Configuration x = z_config(points);

  RingStatus rs = codec.ring_status(x, Player::II, 0, 0);
  CHECK(rs.state == RingState::invalid);
  CHECK(rs.classes == 10);
  CHECK(rs.invalid_classes == 1);
  CHECK(rs.witnesses == std::vector<std::int32_t>{1});
  CHECK(codec.decode(x, 0, Player::II, 0, 0) == 1);

  // Three uniform classes with three different values witness nothing.
  Configuration spread3 = z_config(
      {{11, 0}, {-11, 0}, {12, 1}, {-12, 1}, {13, 2}, {-13, 2}});
  RingStatus neither = codec.ring_status(spread3, Player::I, 0, 0);
  CHECK(neither.state == RingState::declared_neither);
  CHECK(neither.witnesses.empty());
  CHECK(codec.decode(spread3, 0, Player::I, 0, 0) == std::nullopt);

  Configuration partial = z_config({{1, 1}, {2, 1}, {3, 1}, {4, 1}});
  CHECK(codec.ring_status(partial, Player::II, 0, 0).state ==
        RingState::undeclared);
  CHECK(error_kind_of([&] { codec.decode(partial, 0, Player::II, 0, 0); }) ==
        ErrorKind::insufficient_data);
  CHECK(error_kind_of([&] { codec.decode(partial, 0, Player::II, 1, 0); }) ==
        ErrorKind::usage);
}

TEST_CASE("replaying assignments never revives a poisoned class or ring") {
  GroupPtr Z = z_group();
  LayerSystem layers(Z, {0, 10, 13});
  RingCodec codec(RingLayout(layers, PairingKind::blocked, 1),
                  PlayerPartition::parity(LayerSystem(Z)));

  std::vector<std::pair<Word, std::int32_t>> target;
  for (int r = 1; r <= 9; ++r) {
    target.emplace_back(Z->parse_element(std::to_string(r)), 1);
    target.emplace_back(Z->parse_element(std::to_string(-r)), 1);
  }
  target.emplace_back(Z->parse_element("10"), 1);
  target.emplace_back(Z->parse_element("-10"), 0);
  target.emplace_back(Z->parse_element("11"), 0);
  target.emplace_back(Z->parse_element("-11"), 0);
  target.emplace_back(Z->parse_element("12"), 1);
  target.emplace_back(Z->parse_element("-12"), 1);
  target.emplace_back(Z->parse_element("13"), 2);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(target.begin(), target.end(), rng);
    Configuration x(Z);
    std::vector<ClassStatus> classes(14);
    for (int r = 1; r <= 13; ++r) classes[r] = codec.class_status(x, r);
    RingStatus ringLow = codec.ring_status(x, Player::II, 0, 0);
    RingStatus ringHigh = codec.ring_status(x, Player::I, 0, 0);

    for (const auto& [w, v] : target) {
      x = x.with_assignment(w, v);
      for (int r = 1; r <= 13; ++r) {
        ClassStatus next = codec.class_status(x, r);
        if (classes[r].state == ClassState::invalid)
          CHECK(next.state == ClassState::invalid);
        if (classes[r].state == ClassState::m_class) {
          CHECK(next.state != ClassState::undeclared);
          if (next.state == ClassState::m_class)
            CHECK(next.value == classes[r].value);
        }
        classes[r] = next;
      }
      for (auto [p, prev] : {std::pair(Player::II, &ringLow),
                             std::pair(Player::I, &ringHigh)}) {
        RingStatus next = codec.ring_status(x, p, 0, 0);
        if (prev->state == RingState::invalid)
          CHECK(next.state == RingState::invalid);
        if (prev->declared()) {
          CHECK(next.declared());
          for (std::int32_t m : next.witnesses)
            CHECK(std::count(prev->witnesses.begin(), prev->witnesses.end(),
                             m) == 1);
        }
        *prev = next;
      }
    }
    CHECK(ringLow.state == RingState::invalid);
    CHECK(ringHigh.state == RingState::declared_neither);
  }
}

TEST_CASE("the encoder writes each move on its rings and zero elsewhere") {
  RingCodec codec = plain_z_codec();
  GroupPtr Z = z_group();

  Configuration none = codec.encode_moves({}, 3);
  CHECK(none.size() == 1);
  CHECK(none.at(Z->identity_word()) == 0);

  Configuration one = codec.encode_moves({5}, 2);
  for (int j = 0; j <= 2; ++j) {
    RingStatus rs = codec.ring_status(one, Player::I, 0, j);
    CHECK(rs.state == RingState::m_ring);
    CHECK(rs.value == 5);
    CHECK(rs.witnesses == std::vector<std::int32_t>{5});
  }
  CHECK(codec.ring_status(one, Player::II, 0, 0).witnesses ==
        std::vector<std::int32_t>{0});
  CHECK(one.at(Z->identity_word()) == 0);
  CHECK(one.at(Z->parse_element("1")) == 0);
  CHECK(one.at(Z->parse_element("2")) == 5);
  CHECK(one.at(Z->parse_element("-10")) == 5);
  CHECK(one.size() == Z->ball_size(10));

  CHECK(error_kind_of([&] { codec.encode_moves({1}, 0); }) == ErrorKind::usage);
  CHECK(error_kind_of([&] { codec.encode_moves({-1}, 1); }) ==
        ErrorKind::precondition);
  RingCodec blocked = plain_z_codec(PairingKind::blocked, 2);
  CHECK(error_kind_of([&] { blocked.encode_moves({1}, 2); }) ==
        ErrorKind::usage);

  RingCodec pcodec = doubling_product_codec();
  GroupPtr G = pcodec.config_group();
  Configuration pone = pcodec.encode_moves({4, 2}, 1);
  CHECK(pone.at(G->parse_element("(2,g0)")) ==
        pone.at(G->parse_element("(2,g1)")));
  CHECK(pone.at(G->parse_element("(2,g0)")) == 4);
  CHECK(pcodec.decode(pone, 0, Player::I, 0, 1) == 4);
  CHECK(pcodec.decode(pone, 1, Player::II, 0, 1) == 2);
}

TEST_CASE("random move vectors decode back exactly") {
  RingCodec codec = plain_z_codec();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> lenDist(0, 6), symDist(0, 2),
      depthDist(1, 8);
  for (int trial = 0; trial < 25; ++trial) {
    int len = lenDist(rng), J = depthDist(rng);
    std::vector<std::int32_t> moves;
    for (int t = 0; t < len; ++t) moves.push_back(symDist(rng));
    Configuration x = codec.encode_moves(moves, J);
    for (int t = 0; t < len; ++t) {
      Player p = t % 2 == 0 ? Player::I : Player::II;
      CHECK(codec.decode(x, t, p, 0, J) == moves[t]);
      CHECK(codec.decode_default(x, t, p, J) == moves[t]);
    }
  }
}

TEST_CASE("free-group layouts round trip through the blocked pairing") {
  std::uint64_t saved = ball_budget();
  set_ball_budget(4'000'000);
  GroupPtr F2 = Group::free_group(2);
  RingCodec codec(RingLayout(LayerSystem(F2), PairingKind::blocked, 2),
                  PlayerPartition::parity(LayerSystem(F2)));
  std::vector<std::int32_t> moves{1, 2, 0};
  Configuration x = codec.encode_moves(moves, 1);
  for (int t = 0; t < 3; ++t) {
    Player p = t % 2 == 0 ? Player::I : Player::II;
    CHECK(codec.decode(x, t, p, 0, 1) == moves[t]);
    CHECK(codec.decode_default(x, t, p, 1) == moves[t]);
  }
  set_ball_budget(saved);
}

TEST_CASE("decoding reads through short shifts above the damage line") {
  for (RingCodec codec : {doubling_z_codec(), doubling_product_codec()}) {
    GroupPtr G = codec.config_group();
    std::vector<std::int32_t> moves{2, 1};
    const int J = 1;
    Configuration x = codec.encode_moves(moves, J);

    std::vector<Word> shifts;
    for (int r = 1; r <= 3; ++r)
      for (const Word& g : G->sphere(r)) shifts.push_back(g);

    for (const Word& g : shifts) {
      int gLen = G->word_length_of(g);
      Configuration sx = x.shifted(g);
      for (int t = 0; t < 2; ++t) {
        Player p = t % 2 == 0 ? Player::I : Player::II;
        int j0 = stability_j0(codec.layout(), p, t, gLen);
        REQUIRE(j0 <= J);
        CHECK(codec.decode(sx, t, p, j0, J) == moves[t]);
        CHECK(codec.decode(x, t, p, j0, J) == moves[t]);
      }
    }
  }

  // Below the damage line the first ring is overrun: both of its classes
  // pull one value from a neighboring ring, so the window disagrees.
  RingCodec codec = doubling_z_codec();
  GroupPtr Z = codec.config_group();
  Configuration x = codec.encode_moves({2, 1}, 1);
  Configuration sx = x.shifted(Z->parse_element("1"));
  CHECK(codec.decode(sx, 0, Player::I, 0, 1) == std::nullopt);
}

TEST_CASE("shifted rings stay within the three-part defect bound") {
  RingCodec codec = doubling_z_codec();
  GroupPtr Z = codec.config_group();
  const LayerSystem& layers = codec.layout().layers();
  Configuration x = codec.encode_moves({2, 1}, 1);

  std::vector<Word> shifts{Z->identity_word()};
  for (int r = 1; r <= 3; ++r)
    for (const Word& g : Z->sphere(r)) shifts.push_back(g);

  std::vector<std::pair<int, int>> rings{{0, 0}, {0, 1}, {2, 0}};
  for (const Word& g : shifts) {
    for (auto [n, j] : rings) {
      {
        InvarianceReport report = codec.invariance_bound_check(x, g, n, j);
        CHECK(report.pass);
        CHECK(report.carry == 0);
        CHECK(report.part_carry == 0);
        if (n == 0) CHECK(report.witness == 2);
        if (Z->word_length_of(g) == 0) CHECK(report.defects == 0);

        // Independent escape count: enumerate the sphere instead of using
        // the translate-length formula.
        Word hPrime = Z->inverse_word(g);
        int c = codec.layout().ring_index(Player::I, n, j);
        int kc = layers.selected_index(c);
        std::uint64_t escapes = 0;
        for (int r : codec.layout().ring_radii(Player::I, n, j)) {
          bool out = false;
          for (const Word& h : Z->sphere(r))
            if (Z->word_length_of(Z->multiply_words(hPrime, h)) > kc)
              out = true;
          if (out) ++escapes;
        }
        CHECK(report.part_escape == escapes);

        // Independent defect count straight from the definition.
        Word gInv = Z->inverse_word(g);
        std::uint64_t defects = 0;
        for (int r : codec.layout().ring_radii(Player::I, n, j)) {
          bool bad = false;
          for (const Word& h : Z->sphere(r)) {
            auto v = x.at(Z->multiply_words(gInv, h));
            if (!v || *v != report.witness) bad = true;
          }
          if (bad) ++defects;
        }
        CHECK(report.defects == defects);
      }
    }
  }
}

TEST_CASE("a corrupted class is charged to the carried-defect term") {
  RingCodec codec = doubling_z_codec();
  GroupPtr Z = codec.config_group();
  Configuration clean = codec.encode_moves({2, 1}, 1);

  std::vector<std::pair<Word, std::int32_t>> entries = clean.entries();
  for (auto& [w, v] : entries)
    if (Z->word_length_of(w) == 40) v = 7;
  Configuration dirty = Configuration::from_entries(Z, std::move(entries));

  InvarianceReport base = codec.invariance_bound_check(dirty, Z->identity_word(), 0, 1);
  CHECK(base.witness == 2);
  CHECK(base.carry == 1);
  CHECK(base.pass);
  CHECK(base.defects == 1);

  InvarianceReport shifted =
      codec.invariance_bound_check(dirty, Z->parse_element("1"), 0, 1);
  CHECK(shifted.carry == 1);
  CHECK(shifted.part_carry > 0);
  // Ring spans radii 32..63: classes 39 and 41 pull the corrupted radius,
  // classes 32 and 63 pull values from the neighboring rings.
  CHECK(shifted.defects == 4);
  CHECK(shifted.pass);

  // Conflict 17 of the ring's 32 classes: no witness remains.
  std::set<Word> plus, minus;
  for (int r = 32; r <= 48; ++r) {
    plus.insert(Z->parse_element(std::to_string(r)));
    minus.insert(Z->parse_element(std::to_string(-r)));
  }
  std::vector<std::pair<Word, std::int32_t>> noisy = clean.entries();
  for (auto& [w, v] : noisy) {
    if (plus.count(w)) v = 3;
    if (minus.count(w)) v = 4;
  }
  Configuration hopeless = Configuration::from_entries(Z, std::move(noisy));
  CHECK(error_kind_of([&] {
          codec.invariance_bound_check(hopeless, Z->parse_element("1"), 0, 1);
        }) == ErrorKind::precondition);
}

TEST_CASE("the stability threshold tracks ring indices") {
  RingCodec two = plain_z_codec();
  CHECK(stability_j0(two.layout(), Player::I, 0, 1) == 1);
  CHECK(stability_j0(two.layout(), Player::II, 1, 1) == 0);
  CHECK(stability_j0(two.layout(), Player::I, 3, 3) == 0);

  RingCodec blk = plain_z_codec(PairingKind::blocked, 2);
  CHECK(stability_j0(blk.layout(), Player::I, 0, 1) == 1);
  CHECK(error_kind_of([&] {
          stability_j0(blk.layout(), Player::I, 0, 5);
        }) == ErrorKind::precondition);
}
