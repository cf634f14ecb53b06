#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftgame/debruijn.hpp"
#include "shiftgame/error.hpp"
#include "shiftgame/rational.hpp"
#include "shiftgame/sft_codec.hpp"

using namespace shiftgame;

namespace {

ErrorKind error_kind_of(const std::function<void()>& run) {
  try {
    run();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a failure");
  return ErrorKind::usage;
}

std::string error_text_of(const std::function<void()>& run) {
  try {
    run();
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("expected a failure");
  return "";
}

std::string rep(const std::string& s, int times) {
  std::string out;
  for (int i = 0; i < times; ++i) out += s;
  return out;
}

}  // namespace

TEST_CASE("block schedules: desk and strict growth") {
  BlockSchedule desk = block_schedule(2, ScheduleGrowth::desk, 9, 4);
  std::vector<long long> expect{0,    8,     40,    168,    680,
                                2728, 10920, 43688, 174760, 699048};
  CHECK(desk.b == expect);
  CHECK(desk.block_count() == 9);
  CHECK(desk.block(1) == std::pair<long long, long long>{0, 8});
  CHECK(desk.block(3) == std::pair<long long, long long>{40, 168});
  CHECK(desk.block(-1) == std::pair<long long, long long>{-8, 0});
  CHECK(desk.block(-4) == std::pair<long long, long long>{-680, -168});
  CHECK(desk.block_length(9) == 524288);
  CHECK(desk.block_length(-9) == 524288);

  // window length divides every gap, so word slots never straddle blocks
  for (int i = 1; i <= desk.block_count(); ++i)
    CHECK((desk.b[i] - desk.b[i - 1]) % desk.window == 0);

  CHECK(desk.head_ratio(1) == Rational(0));
  CHECK(desk.head_ratio(2) == Rational(1, 5));
  CHECK(desk.head_ratio(3) == Rational(2, 7));
  CHECK(desk.head_ratio(4) == Rational(27, 85));
  Rational cap(1, desk.factor - 1);
  for (int i = 1; i <= desk.block_count(); ++i) {
    CHECK(desk.head_ratio(i) < cap);
    if (i > 1) CHECK(desk.head_ratio(i - 1) < desk.head_ratio(i));
  }

  BlockSchedule strict = block_schedule(3, ScheduleGrowth::strict, 6);
  CHECK(strict.b == std::vector<long long>{0, 6, 48, 1536, 196608, 100663296,
                                           206158430208});
  for (int i = 1; i <= 6; ++i) {
    CHECK((strict.b[i] - strict.b[i - 1]) % 3 == 0);
    CHECK(strict.head_ratio(i) <= Rational(2LL * i, 1LL << (2 * i)));
  }

  CHECK(desk.block_of(0) == 1);
  CHECK(desk.block_of(7) == 1);
  CHECK(desk.block_of(8) == 2);
  CHECK(desk.block_of(39) == 2);
  CHECK(desk.block_of(40) == 3);
  CHECK(desk.block_of(-1) == -1);
  CHECK(desk.block_of(-8) == -1);
  CHECK(desk.block_of(-9) == -2);
  CHECK(desk.block_of(-699048) == -9);

  CHECK(error_kind_of([&] { desk.block(0); }) == ErrorKind::usage);
  CHECK(error_kind_of([&] { desk.block(10); }) == ErrorKind::usage);
  CHECK(error_kind_of([&] { desk.block_of(699048); }) == ErrorKind::usage);
  CHECK(error_kind_of([&] { desk.block_of(-699049); }) == ErrorKind::usage);
  CHECK(error_kind_of([&] { desk.head_ratio(0); }) == ErrorKind::usage);
  CHECK(error_kind_of([] { block_schedule(0, ScheduleGrowth::desk, 3); }) ==
        ErrorKind::usage);
  CHECK(error_kind_of([] { block_schedule(2, ScheduleGrowth::desk, 0); }) ==
        ErrorKind::usage);
  CHECK(error_kind_of([] { block_schedule(2, ScheduleGrowth::desk, 3, 3); }) ==
        ErrorKind::usage);
  CHECK(error_kind_of([] { block_schedule(2, ScheduleGrowth::strict, 7); }) ==
        ErrorKind::capacity);
  CHECK(error_kind_of([] { block_schedule(2, ScheduleGrowth::desk, 40); }) ==
        ErrorKind::capacity);
}

TEST_CASE("ring scheme block indices") {
  RingScheme one;
  CHECK(ring_block_index(one, Player::I, 0, 0) == 3);
  CHECK(ring_block_index(one, Player::II, 0, 0) == 2);
  CHECK(ring_block_index(one, Player::I, 1, 0) == 5);
  CHECK(ring_block_index(one, Player::II, 1, 0) == 4);
  CHECK(ring_block_index(one, Player::I, 3, 0) == 9);
  CHECK(ring_block_index(one, Player::II, 3, 0) == 8);

  RingScheme two{3, 2, 2};
  CHECK(ring_block_index(two, Player::I, 0, 0) == 3);
  CHECK(ring_block_index(two, Player::I, 0, 1) == 5);
  CHECK(ring_block_index(two, Player::I, 1, 0) == 7);
  CHECK(ring_block_index(two, Player::II, 0, 1) == 4);
  CHECK(ring_block_index(two, Player::II, 1, 0) == 6);

  CHECK(error_kind_of([&] { ring_block_index(one, Player::I, -1, 0); }) ==
        ErrorKind::usage);
  CHECK(error_kind_of([&] { ring_block_index(one, Player::I, 0, 1); }) ==
        ErrorKind::usage);
  CHECK(error_kind_of([] {
          ring_block_index(RingScheme{2, 2, 1}, Player::I, 0, 0);
        }) == ErrorKind::usage);
  CHECK(error_kind_of([] {
          ring_block_index(RingScheme{3, 1, 1}, Player::I, 0, 0);
        }) == ErrorKind::usage);
  CHECK(error_kind_of([] {
          ring_block_index(RingScheme{3, 2, 0}, Player::I, 0, 0);
        }) == ErrorKind::usage);
}

TEST_CASE("windows: accessors and json round trip") {
  SftWindow y{-3, "010011"};
  CHECK(y.begin() == -3);
  CHECK(y.end() == 3);
  CHECK(y.covers(-3, 3));
  CHECK(!y.covers(-4, 0));
  CHECK(!y.covers(0, 4));
  CHECK(y.at(-3) == '0');
  CHECK(y.at(2) == '1');
  CHECK(y.gram(-1, 3) == "001");
  CHECK(error_kind_of([&] { y.at(3); }) == ErrorKind::usage);
  CHECK(error_kind_of([&] { y.gram(1, 3); }) == ErrorKind::usage);
  CHECK(error_kind_of([&] { y.gram(0, 0); }) == ErrorKind::usage);

  SftWindow back = SftWindow::from_json_text(y.to_json_text());
  CHECK(back.origin == y.origin);
  CHECK(back.symbols == y.symbols);
  nlohmann::json j = nlohmann::json::parse(y.to_json_text());
  CHECK(j["origin"] == -3);
  CHECK(j["symbols"] == "010011");

  CHECK(error_kind_of([] { SftWindow::from_json_text("[1,2]"); }) ==
        ErrorKind::usage);
  CHECK(error_kind_of([] {
          SftWindow::from_json_text("{\"origin\": 0}");
        }) == ErrorKind::usage);
  CHECK(error_kind_of([] {
          SftWindow::from_json_text("{\"origin\": \"0\", \"symbols\": \"01\"}");
        }) == ErrorKind::usage);
  CHECK(error_kind_of([] {
          SftWindow::from_json_text("{\"origin\": 0, \"symbols\": \"012\"}");
        }) == ErrorKind::usage);
}

TEST_CASE("digit dictionary") {
  Dictionary d = default_dictionary(2);
  CHECK(d(0) == "00");
  CHECK(d(1) == "01");
  CHECK(d(2) == "10");
  CHECK(d(3) == "11");
  CHECK(d(4) == "00");  // reduced mod 2^window, so the map is onto
  for (int k = 0; k < 8; ++k) CHECK(word_digit(default_dictionary(3)(k)) == k);
  CHECK(word_digit("101") == 5);
  CHECK(error_kind_of([&] { d(-1); }) == ErrorKind::usage);
  CHECK(error_kind_of([] { default_dictionary(0); }) == ErrorKind::usage);
  CHECK(error_kind_of([] { word_digit("1a0"); }) == ErrorKind::usage);
  CHECK(error_kind_of([] { word_digit(""); }) == ErrorKind::usage);
}

TEST_CASE("preliminary placement") {
  BlockSchedule sched = block_schedule(2, ScheduleGrowth::desk, 2, 4);
  Dictionary dict = default_dictionary(2);

  SftWindow empty = pi_prime(sched, {}, dict);
  CHECK(empty.origin == 0);
  CHECK(empty.symbols.empty());

  // pair 0 sits in block 1 (odd): first digit right, second mirrored left
  SftWindow y = pi_prime(sched, {0, 1}, dict);
  CHECK(y.origin == -2);
  CHECK(y.symbols == "0100");

  // pair 4 starts at 8, inside block 2 (even): the two digits swap sides
  SftWindow z = pi_prime(sched, {0, 0, 0, 0, 0, 0, 0, 0, 1, 2}, dict);
  CHECK(z.origin == -10);
  CHECK(z.symbols == std::string("01") + std::string(16, '0') + "10");
  CHECK(z.at(8) == '1');
  CHECK(z.at(9) == '0');
  CHECK(z.gram(-10, 2) == "01");

  CHECK(error_kind_of([&] { pi_prime(sched, {0}, dict); }) == ErrorKind::usage);
  BlockSchedule tiny = block_schedule(2, ScheduleGrowth::desk, 1, 4);
  std::vector<int> ten(10, 0);
  CHECK(error_kind_of([&] { pi_prime(tiny, ten, dict); }) ==
        ErrorKind::capacity);
}

TEST_CASE("legal placements on the golden mean shift") {
  DeBruijnGraph g = build_debruijn({"11"}, 2);
  BlockSchedule sched = block_schedule(2, ScheduleGrowth::desk, 2, 4);
  Dictionary dict = default_dictionary(2);

  CHECK(legal(g, sched, {0, 1, 0, 1}, dict));
  CHECK(legal(g, sched, {1, 2}, dict));   // "10" | "01" seam stays clean
  CHECK(!legal(g, sched, {2, 1}, dict));  // "01" | "10" seam forms 11
  CHECK(!legal(g, sched, {3, 0}, dict));  // the word 11 itself
  CHECK(error_kind_of([&] { legal(g, sched, {0}, dict); }) == ErrorKind::usage);
  BlockSchedule misfit = block_schedule(3, ScheduleGrowth::desk, 2, 4);
  CHECK(error_kind_of([&] { legal(g, misfit, {0, 0}, dict); }) ==
        ErrorKind::usage);
}

TEST_CASE("placement with redirection") {
  BlockSchedule sched2 = block_schedule(2, ScheduleGrowth::desk, 2, 4);
  Dictionary dict2 = default_dictionary(2);

  // golden mean: every vertex is good both ways, so pi never redirects
  DeBruijnGraph gm = build_debruijn({"11"}, 2);
  std::mt19937_64 rng(20260818);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> digits(2 * (rng() % 4), 0);
    for (int& d : digits) d = static_cast<int>(rng() % 3);  // skip 11
    if (!legal(gm, sched2, digits, dict2)) continue;
    SftWindow via_pi = pi(gm, sched2, digits, dict2);
    SftWindow via_prime = pi_prime(sched2, digits, dict2);
    CHECK(via_pi.origin == via_prime.origin);
    CHECK(via_pi.symbols == via_prime.symbols);
  }
  CHECK(error_kind_of([&] { pi(gm, sched2, {3, 0}, dict2); }) ==
        ErrorKind::precondition);

  // first word bad both ways: placement falls back to the preliminary map
  DeBruijnGraph checker = build_debruijn({"00", "11"}, 2);
  SftWindow fb = pi(checker, sched2, {1, 1}, dict2);
  CHECK(fb.origin == -2);
  CHECK(fb.symbols == "0101");

  // one-sided graph: 011 and 111 are good left only
  DeBruijnGraph g110 = build_debruijn({"110"}, 3);
  BlockSchedule sched3 = block_schedule(3, ScheduleGrowth::desk, 2, 4);
  Dictionary dict3 = default_dictionary(3);

  // player I offends at pair 1; player II's words then alternate right, left
  SftWindow ri = pi(g110, sched3, {0, 0, 3, 1, 0, 2, 0, 0}, dict3);
  CHECK(ri.origin == -6);
  CHECK(ri.symbols == "010000000001000");
  CHECK(legal(g110, sched3, {0, 0, 3, 1, 0, 2, 0, 0}, dict3));

  // player II offends at pair 0; player I's words alternate from the start
  SftWindow rii = pi(g110, sched3, {0, 3, 1, 2}, dict3);
  CHECK(rii.origin == -3);
  CHECK(rii.symbols == "001000");
}

TEST_CASE("trace patterns over the golden mean double loop") {
  DeBruijnGraph g = build_debruijn({"11"}, 2);
  DoubleLoop dl = *find_double_loop(g);

  SftWindow zeros{0, "00000"};
  auto t0 = trace_pattern(g, zeros, dl, 0, 5);
  REQUIRE(t0.has_value());
  CHECK(t0->pattern == "000");
  CHECK(t0->start_vertex == 0);
  CHECK(t0->a == 0);
  CHECK(t0->b == 5);
  CHECK(t0->majority() == 0);

  SftWindow mixed{0, "00100001000"};
  auto t1 = trace_pattern(g, mixed, dl, 0, 11);
  REQUIRE(t1.has_value());
  CHECK(t1->pattern == "10010");
  CHECK(t1->majority() == 0);

  SftWindow tie{0, "001000"};
  auto t2 = trace_pattern(g, tie, dl, 0, 6);
  REQUIRE(t2.has_value());
  CHECK(t2->pattern == "10");
  CHECK(!t2->majority().has_value());

  // interval that is no concatenation of circuits
  CHECK(!trace_pattern(g, SftWindow{0, "0001"}, dl, 0, 4).has_value());
  // anchor gram is a vertex but not shared by both cycles
  CHECK(!trace_pattern(g, SftWindow{0, "01000"}, dl, 0, 5).has_value());
  // anchor gram is not even a vertex
  CHECK(!trace_pattern(g, SftWindow{0, "11000"}, dl, 0, 5).has_value());

  CHECK(error_kind_of([&] { trace_pattern(g, zeros, dl, 0, 1); }) ==
        ErrorKind::usage);
  CHECK(error_kind_of([&] { trace_pattern(g, zeros, dl, 0, 6); }) ==
        ErrorKind::usage);

  DeBruijnGraph g110 = build_debruijn({"110"}, 3);
  DoubleLoop dl110 = *find_double_loop(g110);
  SftWindow w110{0, "000001000"};
  auto t3 = trace_pattern(g110, w110, dl110, 0, 9);
  REQUIRE(t3.has_value());
  CHECK(t3->pattern == "001");
  CHECK(t3->majority() == 0);
}

TEST_CASE("pattern thresholds and witness exclusivity") {
  Rational cap = epsilon_max(3);
  CHECK(pattern_meets("0000000111", 0, Rational(1, 100)));
  CHECK(!pattern_meets("0000000111", 1, Rational(1, 100)));
  CHECK(!pattern_meets("0000000000", 0, Rational(1, 100)));  // no minority

  // at tolerances up to the graph cap, no pattern supports both witnesses
  for (int len = 1; len <= 60; ++len)
    for (int c1 = 0; c1 <= len; ++c1) {
      std::string s = std::string(len - c1, '0') + std::string(c1, '1');
      CHECK(!(pattern_meets(s, 0, cap) && pattern_meets(s, 1, cap)));
    }

  CHECK(error_kind_of([] { pattern_meets("01", 2, Rational(1, 100)); }) ==
        ErrorKind::usage);
  CHECK(error_kind_of([] { pattern_meets("0a", 0, Rational(1, 100)); }) ==
        ErrorKind::usage);
  CHECK(error_kind_of([] { pattern_meets("01", 0, Rational(0)); }) ==
        ErrorKind::usage);
}

TEST_CASE("encode then check one ring") {
  DeBruijnGraph g = build_debruijn({"11"}, 2);
  BlockSchedule sched = block_schedule(2, ScheduleGrowth::desk, 3, 4);
  RingScheme scheme;
  Rational eps = epsilon_max(3) / Rational(2);

  SftWindow one = sft_encode(g, sched, scheme, {1});
  CHECK(one.origin == 0);
  CHECK(one.symbols.size() == 168);
  CHECK(one.symbols.substr(0, 42) == std::string(42, '0'));
  // minority circuits first, then the majority block up to the boundary
  CHECK(one.symbols.substr(42) == std::string(6, '0') + rep("100", 40));
  RuleReport rep1 = rule_check_report(g, sched, scheme, one, 0, Player::I, eps,
                                      0, 0);
  REQUIRE(rep1.witness.has_value());
  CHECK(*rep1.witness == 1);
  CHECK(rep1.right_oriented);
  REQUIRE(rep1.rings.size() == 1);
  CHECK(rep1.rings[0].a == 40);
  CHECK(rep1.rings[0].b == 168);
  CHECK(rep1.rings[0].minority_count == 6);
  CHECK(rep1.rings[0].majority_count == 40);
  CHECK(rep1.rings[0].length == 46);

  // the unaddressed ring of the other player has no minority circuits
  CHECK(!rule_check(g, sched, scheme, one, 0, Player::II, eps, 0, 0)
             .has_value());

  SftWindow zero = sft_encode(g, sched, scheme, {0});
  RuleReport rep0 = rule_check_report(g, sched, scheme, zero, 0, Player::I, eps,
                                      0, 0);
  REQUIRE(rep0.witness.has_value());
  CHECK(*rep0.witness == 0);
  CHECK(rep0.rings[0].minority_count == 12);
  CHECK(rep0.rings[0].majority_count == 90);
  CHECK(rep0.rings[0].length == 102);

  // a pure filler stream answers nothing anywhere
  SftWindow blank = sft_encode(g, sched, scheme, {});
  CHECK(blank.symbols == std::string(blank.symbols.size(), '0'));
  CHECK(!rule_check(g, sched, scheme, blank, 0, Player::I, eps, 0, 0)
             .has_value());
  CHECK(!rule_check(g, sched, scheme, blank, 0, Player::II, eps, 0, 0)
             .has_value());

  SftDecoded two = sft_decode(g, sched, scheme, one, 2, eps);
  REQUIRE(two.bits.size() == 2);
  CHECK(two.bits[0] == 1);
  CHECK(!two.bits[1].has_value());
}

TEST_CASE("round trips") {
  DeBruijnGraph g = build_debruijn({"11"}, 2);
  RingScheme scheme;
  Rational eps = epsilon_max(3) / Rational(2);

  BlockSchedule small = block_schedule(2, ScheduleGrowth::desk, 5, 4);
  for (int len = 0; len <= 4; ++len)
    for (int mask = 0; mask < (1 << len); ++mask) {
      std::vector<int> bits;
      for (int k = 0; k < len; ++k) bits.push_back(mask >> k & 1);
      SftWindow y = sft_encode(g, small, scheme, bits);
      SftDecoded back = sft_decode(g, small, scheme, y, len, eps);
      REQUIRE(back.bits.size() == bits.size());
      for (int k = 0; k < len; ++k) {
        REQUIRE(back.bits[static_cast<std::size_t>(k)].has_value());
        CHECK(*back.bits[static_cast<std::size_t>(k)] ==
              bits[static_cast<std::size_t>(k)]);
      }
    }

  BlockSchedule big = block_schedule(2, ScheduleGrowth::desk, 9, 4);
  std::mt19937_64 rng(414243);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<int> bits(8, 0);
    for (int& b : bits) b = static_cast<int>(rng() % 2);
    SftWindow y = sft_encode(g, big, scheme, bits);
    CHECK(y.symbols.size() >= 699048);
    SftDecoded back = sft_decode(g, big, scheme, y, 8, eps);
    for (int k = 0; k < 8; ++k)
      CHECK(back.bits[static_cast<std::size_t>(k)] ==
            bits[static_cast<std::size_t>(k)]);
  }

  // one-sided graph round trip, majority circuit of length four
  DeBruijnGraph g110 = build_debruijn({"110"}, 3);
  BlockSchedule sched3 = block_schedule(3, ScheduleGrowth::desk, 3, 4);
  Rational eps7 = epsilon_max(7) / Rational(2);
  SftWindow y110 = sft_encode(g110, sched3, scheme, {1});
  CHECK(y110.symbols.find("110") == std::string::npos);
  RuleReport r110 = rule_check_report(g110, sched3, scheme, y110, 0, Player::I,
                                      eps7, 0, 0);
  CHECK(r110.witness == 1);
  CHECK(r110.right_oriented);
  CHECK(r110.rings[0].minority_count == 9);
  CHECK(r110.rings[0].majority_count == 45);

  // custom start vertex: connector runs 01 -> 10 -> 00, then filler
  SftWindow fromEdge = sft_encode(g, small, scheme, {0, 1}, {-1, -1}, 1);
  CHECK(fromEdge.symbols.substr(0, 4) == "0100");
  SftDecoded backEdge = sft_decode(g, small, scheme, fromEdge, 2, eps);
  CHECK(backEdge.bits[0] == 0);
  CHECK(backEdge.bits[1] == 1);
}

TEST_CASE("decoding survives small shifts") {
  DeBruijnGraph g = build_debruijn({"11"}, 2);
  BlockSchedule sched = block_schedule(2, ScheduleGrowth::desk, 5, 4);
  RingScheme scheme{3, 2, 2};
  Rational eps = epsilon_max(3);

  // bit 0 lives on rings 3 and 5; the default decode range reads ring 5,
  // whose length 2048 tolerates shifts up to (eps/2)|B| = 31
  SftWindow y = sft_encode(g, sched, scheme, {1});
  y.symbols.append(24, '0');
  for (int m = -10; m <= 10; ++m) {
    SftWindow shifted{y.origin + m, y.symbols};
    SftDecoded got = sft_decode(g, sched, scheme, shifted, 1, eps);
    REQUIRE(got.bits.size() == 1);
    CHECK(got.bits[0] == 1);
  }
}

TEST_CASE("orientation: left-leaning windows read mirrored blocks") {
  DeBruijnGraph g = build_debruijn({"110"}, 3);
  BlockSchedule sched = block_schedule(3, ScheduleGrowth::desk, 4, 4);
  RingScheme scheme;
  CHECK(sched.b == std::vector<long long>{0, 12, 60, 252, 1020});

  // ring block 3 mirrored to [-1020, -252): anchor, 25 minority loops,
  // 185 majority circuits, then filler and a right-bad tail word
  SftWindow y;
  y.origin = -1020;
  y.symbols = "000" + std::string(25, '0') + rep("1000", 185) +
              std::string(252, '0') + "111";
  REQUIRE(y.symbols.size() == 1023);
  CHECK(y.symbols.find("110") == std::string::npos);

  Rational eps(69, 10000);
  RuleReport report = rule_check_report(g, sched, scheme, y, 0, Player::I, eps,
                                        0, 0);
  REQUIRE(report.witness.has_value());
  CHECK(*report.witness == 1);
  CHECK(!report.right_oriented);
  CHECK(report.rings[0].a == -1020);
  CHECK(report.rings[0].b == -252);
  CHECK(report.rings[0].majority_count == 185);
  CHECK(report.rings[0].minority_count == 25);
  CHECK(report.rings[0].length == 210);

  // the mirrored ring of the other player is all filler
  CHECK(!rule_check(g, sched, scheme, y, 0, Player::II, eps, 0, 0).has_value());

  // a window bad in both directions cannot be oriented at all
  DeBruijnGraph checker = build_debruijn({"00", "11"}, 2);
  BlockSchedule sched2 = block_schedule(2, ScheduleGrowth::desk, 3, 4);
  SftWindow flip{0, "01010101"};
  CHECK(error_kind_of([&] {
          rule_check(checker, sched2, scheme, flip, 0, Player::I,
                     Rational(1, 100), 0, 0);
        }) == ErrorKind::precondition);
}

TEST_CASE("codec failure modes") {
  DeBruijnGraph g = build_debruijn({"11"}, 2);
  BlockSchedule sched = block_schedule(2, ScheduleGrowth::desk, 3, 4);
  RingScheme scheme;
  Rational eps = epsilon_max(3) / Rational(2);

  // ring blocks past the end of the window
  SftWindow y = sft_encode(g, sched, scheme, {1});
  SftWindow cut{0, y.symbols.substr(0, 100)};
  CHECK(error_kind_of([&] {
          rule_check(g, sched, scheme, cut, 0, Player::I, eps, 0, 0);
        }) == ErrorKind::insufficient_data);

  // tolerance above the graph cap, empty tolerance, bad j ranges
  CHECK(error_kind_of([&] {
          rule_check(g, sched, scheme, y, 0, Player::I, Rational(1, 10), 0, 0);
        }) == ErrorKind::usage);
  CHECK(error_kind_of([&] {
          rule_check(g, sched, scheme, y, 0, Player::I, Rational(0), 0, 0);
        }) == ErrorKind::usage);
  CHECK(error_kind_of([&] {
          rule_check(g, sched, scheme, y, 0, Player::I, eps, 0, 1);
        }) == ErrorKind::usage);
  CHECK(error_kind_of([&] {
          rule_check(g, sched, scheme, y, -1, Player::I, eps, 0, 0);
        }) == ErrorKind::usage);

  // schedule whose window disagrees with the graph
  BlockSchedule misfit = block_schedule(3, ScheduleGrowth::desk, 3, 4);
  CHECK(error_kind_of([&] { sft_encode(g, misfit, scheme, {1}); }) ==
        ErrorKind::usage);

  // ring blocks the schedule does not have
  BlockSchedule short2 = block_schedule(2, ScheduleGrowth::desk, 2, 4);
  CHECK(error_kind_of([&] { sft_encode(g, short2, scheme, {1}); }) ==
        ErrorKind::capacity);

  // block 1 is too short for bit 1; the error names the minimal length
  RingScheme early{1, 2, 1};
  std::string msg = error_text_of([&] { sft_encode(g, sched, early, {1}); });
  CHECK(msg.find("capacity") != std::string::npos);
  CHECK(msg.find("minimal feasible ring length is 16") != std::string::npos);

  // no double loop, bad bits, bad start vertices
  DeBruijnGraph checker = build_debruijn({"00", "11"}, 2);
  BlockSchedule sched2 = block_schedule(2, ScheduleGrowth::desk, 3, 4);
  CHECK(error_kind_of([&] { sft_encode(checker, sched2, scheme, {0}); }) ==
        ErrorKind::precondition);
  CHECK(error_kind_of([&] { sft_encode(g, sched, scheme, {2}); }) ==
        ErrorKind::usage);
  CHECK(error_kind_of([&] { sft_encode(g, sched, scheme, {0}, {-1, -1}, 9); }) ==
        ErrorKind::usage);
  DeBruijnGraph g110 = build_debruijn({"110"}, 3);
  BlockSchedule sched3 = block_schedule(3, ScheduleGrowth::desk, 3, 4);
  CHECK(error_kind_of([&] {
          sft_encode(g110, sched3, scheme, {0}, {-1, -1}, 6);
        }) == ErrorKind::usage);

  CHECK(error_kind_of([&] { sft_decode(g, sched, scheme, y, -1, eps); }) ==
        ErrorKind::usage);
}
