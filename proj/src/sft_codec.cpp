#include "shiftgame/sft_codec.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>

#include "shiftgame/error.hpp"

namespace shiftgame {

namespace {

long long checked_pos(__int128 v, const char* what) {
  if (v > (__int128)4'000'000'000'000'000'000LL)
    fail(ErrorKind::capacity, std::string(what) + " overflows position arithmetic");
  return static_cast<long long>(v);
}

void check_scheme(const RingScheme& scheme) {
  if (scheme.odd_start < 1 || scheme.odd_start % 2 == 0)
    fail(ErrorKind::usage, "odd_start must be an odd index >= 1");
  if (scheme.even_start < 2 || scheme.even_start % 2 != 0)
    fail(ErrorKind::usage, "even_start must be an even index >= 2");
  if (scheme.j_count < 1) fail(ErrorKind::usage, "j_count must be >= 1");
}

void check_word(const std::string& w, int window) {
  if (static_cast<int>(w.size()) != window)
    fail(ErrorKind::usage, "dictionary word \"" + w + "\" does not have the window length");
  for (char c : w)
    if (c != '0' && c != '1')
      fail(ErrorKind::usage, "dictionary word \"" + w + "\" is not binary");
}

// Circuit symbol strings of a double loop anchored at a shared vertex v0:
// walking cycle t from v0 appends sym[t]; the gram window returns to v0.
struct Circuits {
  int v0 = -1;
  std::array<std::string, 2> sym;
  std::array<int, 2> len{};
};

std::string circuit_symbols(const DeBruijnGraph& g, const Cycle& cycle, int v0) {
  auto it = std::find(cycle.begin(), cycle.end(), v0);
  if (it == cycle.end()) fail(ErrorKind::usage, "anchor vertex is not on the cycle");
  std::size_t start = static_cast<std::size_t>(it - cycle.begin());
  std::string out;
  for (std::size_t t = 0; t < cycle.size(); ++t) {
    int u = cycle[(start + t) % cycle.size()];
    int v = cycle[(start + t + 1) % cycle.size()];
    if (!g.has_edge(u, v)) fail(ErrorKind::usage, "cycle uses a non-edge of the graph");
    out += g.vertices[static_cast<std::size_t>(v)].back();
  }
  return out;
}

std::vector<int> shared_of(const DoubleLoop& dl) {
  Cycle a = dl.c0, b = dl.c1;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Circuits make_circuits(const DeBruijnGraph& g, const DoubleLoop& dl, int v0) {
  if (dl.c0 == dl.c1) fail(ErrorKind::usage, "double loop cycles must differ");
  Circuits c;
  c.v0 = v0;
  c.sym[0] = circuit_symbols(g, dl.c0, v0);
  c.sym[1] = circuit_symbols(g, dl.c1, v0);
  c.len[0] = static_cast<int>(c.sym[0].size());
  c.len[1] = static_cast<int>(c.sym[1].size());
  return c;
}

// Vertex transition v --c--> u, or -1. Consecutive grams of a symbol
// stream always satisfy the de Bruijn overlap, so -1 means the next gram
// is a forbidden word.
std::vector<std::array<int, 2>> transitions(const DeBruijnGraph& g) {
  std::vector<std::array<int, 2>> next(g.vertices.size(), {-1, -1});
  for (const auto& [u, v] : g.edges)
    next[static_cast<std::size_t>(u)][g.vertices[static_cast<std::size_t>(v)].back() - '0'] = v;
  return next;
}

struct Orientation {
  bool all_right = true;
  bool all_left = true;
};

Orientation scan_orientation(const DeBruijnGraph& g, const GoodFlags& flags,
                             const SftWindow& y) {
  Orientation o;
  int n = g.window;
  long long grams = static_cast<long long>(y.symbols.size()) - n + 1;
  if (grams <= 0) return o;
  auto next = transitions(g);
  int v = g.index_of(y.symbols.substr(0, static_cast<std::size_t>(n)));
  for (long long p = 0;; ++p) {
    if (v < 0) {
      o.all_right = o.all_left = false;
      return o;
    }
    o.all_right = o.all_right && flags.right[static_cast<std::size_t>(v)];
    o.all_left = o.all_left && flags.left[static_cast<std::size_t>(v)];
    if (!o.all_right && !o.all_left) return o;
    if (p + 1 >= grams) return o;
    v = next[static_cast<std::size_t>(v)][y.symbols[static_cast<std::size_t>(p + n)] - '0'];
  }
}

// Interval test b - a > (1 - eps)|B| and the two density thresholds
// |s^-1(maj)| >= (1-eps)(2/3)|s|, |s^-1(min)| >= (1-eps)(1/10)|s|, all in
// exact arithmetic.
bool interval_meets(long long span, long long blockLen, const Rational& eps) {
  return (__int128)span * eps.den > (__int128)(eps.den - eps.num) * blockLen;
}

bool counts_meet(long long cMaj, long long cMin, long long len, const Rational& eps) {
  if ((__int128)3 * cMaj * eps.den < (__int128)2 * (eps.den - eps.num) * len) return false;
  return (__int128)10 * cMin * eps.den >= (__int128)(eps.den - eps.num) * len;
}

// Parse tables over one ring [lo, hi) for a fixed anchored double loop.
// Positions are relative gram offsets r in [0, |B|-N]. reach_end marks
// parses landing exactly on the block boundary; best_end is the furthest
// reachable circuit boundary. cnt* follow the deterministic
// prefer-first-circuit reconstruction.
struct ParseTables {
  std::vector<std::uint8_t> reach_end;
  std::vector<int> cnt_e0, cnt_e1;
  std::vector<int> best_end, cnt_m0, cnt_m1;
};

ParseTables build_tables(const SftWindow& y, long long lo, long long hi,
                         const Circuits& c, int window) {
  long long R = hi - lo - window + 1;
  ParseTables t;
  t.reach_end.assign(static_cast<std::size_t>(R), 0);
  t.cnt_e0.assign(static_cast<std::size_t>(R), 0);
  t.cnt_e1.assign(static_cast<std::size_t>(R), 0);
  t.best_end.assign(static_cast<std::size_t>(R), 0);
  t.cnt_m0.assign(static_cast<std::size_t>(R), 0);
  t.cnt_m1.assign(static_cast<std::size_t>(R), 0);
  const char* sym = y.symbols.data() + (lo - y.origin);
  auto step_ok = [&](int i, long long r) {
    if (r + c.len[i] >= R) return false;
    return std::char_traits<char>::compare(sym + r + window, c.sym[i].data(),
                                           static_cast<std::size_t>(c.len[i])) == 0;
  };
  for (long long r = R - 1; r >= 0; --r) {
    std::size_t u = static_cast<std::size_t>(r);
    bool s0 = step_ok(0, r), s1 = step_ok(1, r);
    if (r == R - 1) t.reach_end[u] = 1;
    else if (s0 && t.reach_end[static_cast<std::size_t>(r + c.len[0])]) {
      std::size_t w = static_cast<std::size_t>(r + c.len[0]);
      t.reach_end[u] = 1;
      t.cnt_e0[u] = t.cnt_e0[w] + 1;
      t.cnt_e1[u] = t.cnt_e1[w];
    } else if (s1 && t.reach_end[static_cast<std::size_t>(r + c.len[1])]) {
      std::size_t w = static_cast<std::size_t>(r + c.len[1]);
      t.reach_end[u] = 1;
      t.cnt_e0[u] = t.cnt_e0[w];
      t.cnt_e1[u] = t.cnt_e1[w] + 1;
    }
    t.best_end[u] = static_cast<int>(r);
    for (int i = 0; i < 2; ++i) {
      if (!(i == 0 ? s0 : s1)) continue;
      std::size_t w = static_cast<std::size_t>(r + c.len[i]);
      if (t.best_end[w] > t.best_end[u]) {
        t.best_end[u] = t.best_end[w];
        t.cnt_m0[u] = t.cnt_m0[w] + (i == 0);
        t.cnt_m1[u] = t.cnt_m1[w] + (i == 1);
      }
    }
  }
  return t;
}

struct SftContext {
  const DeBruijnGraph* graph = nullptr;
  GoodFlags flags;
  std::vector<DoubleLoop> loops;
  std::vector<std::vector<int>> shared;  // per loop, ascending vertex ids
};

SftContext make_context(const DeBruijnGraph& g) {
  SftContext ctx;
  ctx.graph = &g;
  ctx.flags = classify_good(g);
  ctx.loops = double_loops(g);
  for (const auto& dl : ctx.loops) ctx.shared.push_back(shared_of(dl));
  return ctx;
}

RuleReport rule_check_impl(const SftContext& ctx, const BlockSchedule& schedule,
                           const RingScheme& scheme, const SftWindow& y,
                           const Orientation& orient, int n, Player player,
                           const Rational& eps, int jLo, int jHi) {
  const DeBruijnGraph& g = *ctx.graph;
  RuleReport report;
  if (!orient.all_right && !orient.all_left)
    fail(ErrorKind::precondition, "window has bad subwords in both directions");
  report.right_oriented = orient.all_right;

  std::array<bool, 2> global{true, true};
  std::vector<std::array<std::optional<RingCheck>, 2>> found(
      static_cast<std::size_t>(jHi - jLo + 1));
  for (int j = jLo; j <= jHi; ++j) {
    int idx = ring_block_index(scheme, player, n, j);
    int signedIdx = report.right_oriented ? idx : -(idx + 1);
    if (std::abs(signedIdx) > schedule.block_count())
      fail(ErrorKind::usage, "ring block " + std::to_string(signedIdx) +
                                 " lies outside the schedule");
    auto [lo, hi] = schedule.block(signedIdx);
    if (!y.covers(lo, hi))
      fail(ErrorKind::insufficient_data,
           "window does not cover ring block " + std::to_string(signedIdx));
    long long B = hi - lo;
    long long maxOff = static_cast<long long>(
        (__int128)eps.num * B / eps.den);
    long long scanHi = std::min(lo + maxOff, hi - g.window);

    std::map<std::pair<int, int>, ParseTables> cache;
    std::map<std::pair<int, int>, Circuits> circ;
    std::array<bool, 2> witness{false, false};
    for (int i = 0; i < 2 && !(witness[0] && witness[1]); ++i) {
      bool done = false;
      for (std::size_t d = 0; d < ctx.loops.size() && !done; ++d) {
        for (int v0 : ctx.shared[d]) {
          auto key = std::make_pair(static_cast<int>(d), v0);
          auto cit = circ.find(key);
          if (cit == circ.end())
            cit = circ.emplace(key, make_circuits(g, ctx.loops[d], v0)).first;
          const Circuits& c = cit->second;
          const std::string& w0 = g.vertices[static_cast<std::size_t>(v0)];
          const char* sym = y.symbols.data() + (lo - y.origin);
          const ParseTables* tables = nullptr;
          for (long long a = lo; a <= scanHi; ++a) {
            long long r = a - lo;
            if (std::char_traits<char>::compare(sym + r, w0.data(), w0.size()) != 0)
              continue;
            if (!tables) {
              auto tit = cache.find(key);
              if (tit == cache.end())
                tit = cache.emplace(key, build_tables(y, lo, hi, c, g.window)).first;
              tables = &tit->second;
            }
            std::size_t u = static_cast<std::size_t>(r);
            long long b;
            long long c0n, c1n;
            if (tables->reach_end[u]) {
              b = hi;
              c0n = tables->cnt_e0[u];
              c1n = tables->cnt_e1[u];
            } else {
              b = lo + tables->best_end[u] + g.window;
              c0n = tables->cnt_m0[u];
              c1n = tables->cnt_m1[u];
            }
            long long len = c0n + c1n;
            if (len == 0) continue;
            if (!interval_meets(b - a, B, eps)) continue;
            long long cMaj = i == 0 ? c0n : c1n;
            long long cMin = i == 0 ? c1n : c0n;
            if (!counts_meet(cMaj, cMin, len, eps)) continue;
            witness[static_cast<std::size_t>(i)] = true;
            RingCheck rc;
            rc.j = j;
            rc.a = a;
            rc.b = b;
            rc.loop = ctx.loops[d];
            rc.majority_count = cMaj;
            rc.minority_count = cMin;
            rc.length = len;
            found[static_cast<std::size_t>(j - jLo)][static_cast<std::size_t>(i)] = rc;
            done = true;
            break;
          }
          if (done) break;
        }
      }
    }
    if (witness[0] && witness[1])
      fail(ErrorKind::precondition,
           "ambiguous rule witness on ring j=" + std::to_string(j));
    global[0] = global[0] && witness[0];
    global[1] = global[1] && witness[1];
    if (!global[0] && !global[1]) return report;
  }
  int w = global[0] ? 0 : 1;
  report.witness = w;
  for (auto& slot : found) report.rings.push_back(*slot[static_cast<std::size_t>(w)]);
  return report;
}

void check_rule_args(const DeBruijnGraph& g, const BlockSchedule& schedule,
                     const RingScheme& scheme, int n, const Rational& eps,
                     int jLo, int jHi) {
  check_scheme(scheme);
  if (g.window != schedule.window)
    fail(ErrorKind::usage, "graph and schedule window lengths differ");
  if (n < 0) fail(ErrorKind::usage, "ring index n must be >= 0");
  if (jLo < 0 || jHi < jLo || jHi >= scheme.j_count)
    fail(ErrorKind::usage, "j range must lie inside the ring scheme");
  Rational cap = epsilon_max(static_cast<int>(g.vertices.size()));
  if (eps.num <= 0 || eps > cap)
    fail(ErrorKind::usage,
         "tolerance must satisfy 0 < eps <= " + cap.str());
}

// Active placement used by both legal() and pi(): redirection drops the
// offending player's tail, the other player's words extend right then left.
SftWindow build_placement(const DeBruijnGraph& g, const BlockSchedule& schedule,
                          const std::vector<int>& digits, const Dictionary& dict) {
  if (g.window != schedule.window)
    fail(ErrorKind::usage, "graph and schedule window lengths differ");
  if (digits.size() % 2 != 0)
    fail(ErrorKind::usage, "digit count must be even");
  int N = schedule.window;
  std::vector<std::string> words;
  words.reserve(digits.size());
  for (int d : digits) {
    std::string w = dict(d);
    check_word(w, N);
    words.push_back(std::move(w));
  }
  long long pairs = static_cast<long long>(digits.size()) / 2;
  if (pairs * N > schedule.b.back())
    fail(ErrorKind::capacity, "digit stream runs past the schedule");

  GoodFlags flags = classify_good(g);
  auto good_both = [&](const std::string& w) {
    int v = g.index_of(w);
    return v >= 0 && flags.right[static_cast<std::size_t>(v)] &&
           flags.left[static_cast<std::size_t>(v)];
  };
  auto bad_both = [&](const std::string& w) {
    int v = g.index_of(w);
    return v < 0 || (!flags.right[static_cast<std::size_t>(v)] &&
                     !flags.left[static_cast<std::size_t>(v)]);
  };

  long long n0 = -1;
  Player offender = Player::I;
  if (pairs > 0 && !bad_both(words[0])) {
    for (long long n = 0; n < pairs && n0 < 0; ++n) {
      if (!good_both(words[static_cast<std::size_t>(2 * n)])) {
        n0 = n;
        offender = Player::I;
      } else if (!good_both(words[static_cast<std::size_t>(2 * n + 1)])) {
        n0 = n;
        offender = Player::II;
      }
    }
  }
  long long prefix = n0 < 0 ? pairs : n0;

  long long L = -prefix * N, R = prefix * N;
  long long tail = n0 < 0 ? 0 : pairs - n0;
  long long left_words = tail / 2;
  SftWindow y;
  y.origin = L - left_words * N;
  y.symbols.assign(static_cast<std::size_t>((prefix * 2 + tail) * N), '?');
  auto place = [&](long long pos, const std::string& w) {
    std::copy(w.begin(), w.end(),
              y.symbols.begin() + static_cast<std::size_t>(pos - y.origin));
  };
  for (long long n = 0; n < prefix; ++n) {
    int i = schedule.block_of(n * N);
    const std::string& first = words[static_cast<std::size_t>(2 * n)];
    const std::string& second = words[static_cast<std::size_t>(2 * n + 1)];
    if (i % 2 != 0) {
      place(n * N, first);
      place(-(n + 1) * N, second);
    } else {
      place(n * N, second);
      place(-(n + 1) * N, first);
    }
  }
  for (long long t = 0; t < tail; ++t) {
    long long n = n0 + t;
    std::size_t k = static_cast<std::size_t>(
        2 * n + (offender == Player::I ? 1 : 0));
    if (t % 2 == 0) {
      place(R, words[k]);
      R += N;
    } else {
      L -= N;
      place(L, words[k]);
    }
  }
  return y;
}

bool window_clean(const DeBruijnGraph& g, const SftWindow& y) {
  for (const auto& f : g.forbidden)
    if (y.symbols.find(f) != std::string::npos) return false;
  return true;
}

}  // namespace

std::pair<long long, long long> BlockSchedule::block(int i) const {
  if (i == 0) fail(ErrorKind::usage, "block index 0 is invalid");
  int k = std::abs(i);
  if (k > block_count())
    fail(ErrorKind::usage, "block index " + std::to_string(i) +
                               " lies outside the schedule");
  if (i > 0) return {b[static_cast<std::size_t>(k - 1)], b[static_cast<std::size_t>(k)]};
  return {-b[static_cast<std::size_t>(k)], -b[static_cast<std::size_t>(k - 1)]};
}

int BlockSchedule::block_of(long long pos) const {
  long long a = pos >= 0 ? pos : -pos - 1;
  auto it = std::upper_bound(b.begin(), b.end(), a);
  if (it == b.end())
    fail(ErrorKind::usage, "position " + std::to_string(pos) +
                               " lies outside the schedule");
  int i = static_cast<int>(it - b.begin());
  return pos >= 0 ? i : -i;
}

long long BlockSchedule::block_length(int i) const {
  auto [lo, hi] = block(i);
  return hi - lo;
}

Rational BlockSchedule::head_ratio(int i) const {
  if (i < 1 || i > block_count())
    fail(ErrorKind::usage, "head ratio index outside the schedule");
  long long sum = 0;
  for (int j = 0; j < i; ++j) sum += b[static_cast<std::size_t>(j)];
  return Rational(sum, b[static_cast<std::size_t>(i)]);
}

BlockSchedule block_schedule(int window, ScheduleGrowth growth, int blocks,
                             int factor) {
  if (window < 1) fail(ErrorKind::usage, "window length must be >= 1");
  if (blocks < 1) fail(ErrorKind::usage, "block count must be >= 1");
  BlockSchedule s;
  s.window = window;
  s.growth = growth;
  s.factor = factor;
  s.b.push_back(0);
  if (growth == ScheduleGrowth::strict) {
    if (blocks > 6)
      fail(ErrorKind::capacity,
           "strict growth is unusable past 6 blocks; use desk growth");
    for (int i = 1; i <= blocks; ++i)
      s.b.push_back(checked_pos((__int128)window << (i * i), "strict schedule"));
  } else {
    if (factor < 4) fail(ErrorKind::usage, "desk growth factor must be >= 4");
    __int128 gap = window;
    for (int i = 1; i <= blocks; ++i) {
      gap *= factor;
      s.b.push_back(checked_pos((__int128)s.b.back() + gap, "desk schedule"));
    }
  }
  return s;
}

int ring_block_index(const RingScheme& scheme, Player player, int n, int j) {
  check_scheme(scheme);
  if (n < 0) fail(ErrorKind::usage, "ring index n must be >= 0");
  if (j < 0 || j >= scheme.j_count)
    fail(ErrorKind::usage, "ring index j must lie in [0, j_count)");
  int base = player == Player::I ? scheme.odd_start : scheme.even_start;
  return base + 2 * (scheme.j_count * n + j);
}

char SftWindow::at(long long pos) const {
  if (pos < begin() || pos >= end())
    fail(ErrorKind::usage, "position " + std::to_string(pos) +
                               " lies outside the window");
  return symbols[static_cast<std::size_t>(pos - origin)];
}

std::string SftWindow::gram(long long pos, int window) const {
  if (window < 1) fail(ErrorKind::usage, "gram length must be >= 1");
  if (!covers(pos, pos + window))
    fail(ErrorKind::usage, "gram at " + std::to_string(pos) +
                               " lies outside the window");
  return symbols.substr(static_cast<std::size_t>(pos - origin),
                        static_cast<std::size_t>(window));
}

std::string SftWindow::to_json_text() const {
  nlohmann::json j;
  j["origin"] = origin;
  j["symbols"] = symbols;
  return j.dump(2);
}

SftWindow SftWindow::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("origin") ||
      !j.contains("symbols") || !j["origin"].is_number_integer() ||
      !j["symbols"].is_string())
    fail(ErrorKind::usage, "window json needs integer origin and string symbols");
  SftWindow y;
  y.origin = j["origin"].get<long long>();
  y.symbols = j["symbols"].get<std::string>();
  for (char c : y.symbols)
    if (c != '0' && c != '1')
      fail(ErrorKind::usage, "window symbols must be binary");
  return y;
}

Dictionary default_dictionary(int window) {
  if (window < 1 || window > 30)
    fail(ErrorKind::usage, "dictionary window must lie in [1, 30]");
  return [window](int k) {
    if (k < 0) fail(ErrorKind::usage, "digit must be nonnegative");
    std::string w(static_cast<std::size_t>(window), '0');
    unsigned long long bits = static_cast<unsigned long long>(k) &
                              ((1ULL << window) - 1);
    for (int t = 0; t < window; ++t)
      w[static_cast<std::size_t>(window - 1 - t)] = (bits >> t & 1) ? '1' : '0';
    return w;
  };
}

int word_digit(const std::string& word) {
  if (word.empty() || word.size() > 30)
    fail(ErrorKind::usage, "word length must lie in [1, 30]");
  int v = 0;
  for (char c : word) {
    if (c != '0' && c != '1') fail(ErrorKind::usage, "word must be binary");
    v = v * 2 + (c - '0');
  }
  return v;
}

SftWindow pi_prime(const BlockSchedule& schedule, const std::vector<int>& digits,
                   const Dictionary& dict) {
  if (digits.size() % 2 != 0)
    fail(ErrorKind::usage, "digit count must be even");
  int N = schedule.window;
  long long pairs = static_cast<long long>(digits.size()) / 2;
  if (pairs * N > schedule.b.back())
    fail(ErrorKind::capacity, "digit stream runs past the schedule");
  SftWindow y;
  y.origin = -pairs * N;
  y.symbols.assign(static_cast<std::size_t>(2 * pairs * N), '?');
  for (long long n = 0; n < pairs; ++n) {
    std::string first = dict(digits[static_cast<std::size_t>(2 * n)]);
    std::string second = dict(digits[static_cast<std::size_t>(2 * n + 1)]);
    check_word(first, N);
    check_word(second, N);
    int i = schedule.block_of(n * N);
    if (i % 2 == 0) std::swap(first, second);
    std::copy(first.begin(), first.end(),
              y.symbols.begin() + static_cast<std::size_t>(n * N - y.origin));
    std::copy(second.begin(), second.end(),
              y.symbols.begin() + static_cast<std::size_t>(-(n + 1) * N - y.origin));
  }
  return y;
}

SftWindow pi(const DeBruijnGraph& graph, const BlockSchedule& schedule,
             const std::vector<int>& digits, const Dictionary& dict) {
  SftWindow y = build_placement(graph, schedule, digits, dict);
  if (!window_clean(graph, y))
    fail(ErrorKind::precondition, "digit placement contains a forbidden word");
  return y;
}

bool legal(const DeBruijnGraph& graph, const BlockSchedule& schedule,
           const std::vector<int>& digits, const Dictionary& dict) {
  return window_clean(graph, build_placement(graph, schedule, digits, dict));
}

std::optional<int> TracePattern::majority() const {
  long long c0 = std::count(pattern.begin(), pattern.end(), '0');
  long long c1 = static_cast<long long>(pattern.size()) - c0;
  if (c0 > c1) return 0;
  if (c1 > c0) return 1;
  return std::nullopt;
}

std::optional<TracePattern> trace_pattern(const DeBruijnGraph& graph,
                                          const SftWindow& y, const DoubleLoop& dl,
                                          long long a, long long b) {
  int N = graph.window;
  if (b - a < N) fail(ErrorKind::usage, "trace interval shorter than the window");
  if (!y.covers(a, b)) fail(ErrorKind::usage, "trace interval outside the window");
  std::vector<int> shared = shared_of(dl);
  if (shared.empty()) fail(ErrorKind::usage, "cycles share no vertex");
  int v0 = graph.index_of(y.gram(a, N));
  if (v0 < 0 || !std::binary_search(shared.begin(), shared.end(), v0))
    return std::nullopt;
  Circuits c = make_circuits(graph, dl, v0);
  long long R = b - a - N + 1;
  const char* sym = y.symbols.data() + (a - y.origin);
  std::vector<std::uint8_t> feasible(static_cast<std::size_t>(R), 0);
  auto step_ok = [&](int i, long long r) {
    if (r + c.len[i] >= R) return false;
    return std::char_traits<char>::compare(sym + r + N, c.sym[i].data(),
                                           static_cast<std::size_t>(c.len[i])) == 0;
  };
  for (long long r = R - 1; r >= 0; --r) {
    if (r == R - 1) {
      feasible[static_cast<std::size_t>(r)] = 1;
      continue;
    }
    for (int i = 0; i < 2 && !feasible[static_cast<std::size_t>(r)]; ++i)
      if (step_ok(i, r) && feasible[static_cast<std::size_t>(r + c.len[i])])
        feasible[static_cast<std::size_t>(r)] = 1;
  }
  if (!feasible[0]) return std::nullopt;
  TracePattern out;
  out.loop = dl;
  out.start_vertex = v0;
  out.a = a;
  out.b = b;
  for (long long r = 0; r != R - 1;) {
    int pick = step_ok(0, r) && feasible[static_cast<std::size_t>(r + c.len[0])] ? 0 : 1;
    out.pattern += static_cast<char>('0' + pick);
    r += c.len[pick];
  }
  return out;
}

std::optional<int> rule_check(const DeBruijnGraph& graph,
                              const BlockSchedule& schedule,
                              const RingScheme& scheme, const SftWindow& y, int n,
                              Player player, const Rational& eps, int jLo,
                              int jHi) {
  return rule_check_report(graph, schedule, scheme, y, n, player, eps, jLo, jHi)
      .witness;
}

RuleReport rule_check_report(const DeBruijnGraph& graph,
                             const BlockSchedule& schedule,
                             const RingScheme& scheme, const SftWindow& y, int n,
                             Player player, const Rational& eps, int jLo,
                             int jHi) {
  check_rule_args(graph, schedule, scheme, n, eps, jLo, jHi);
  SftContext ctx = make_context(graph);
  Orientation orient = scan_orientation(graph, ctx.flags, y);
  return rule_check_impl(ctx, schedule, scheme, y, orient, n, player, eps, jLo,
                         jHi);
}

bool pattern_meets(const std::string& s, int i, const Rational& eps) {
  if (i != 0 && i != 1) fail(ErrorKind::usage, "witness must be 0 or 1");
  if (eps.num <= 0 || eps >= Rational(1))
    fail(ErrorKind::usage, "tolerance must lie in (0, 1)");
  long long c0 = 0;
  for (char c : s) {
    if (c != '0' && c != '1') fail(ErrorKind::usage, "pattern must be binary");
    c0 += c == '0';
  }
  long long c1 = static_cast<long long>(s.size()) - c0;
  long long cMaj = i == 0 ? c0 : c1;
  long long cMin = i == 0 ? c1 : c0;
  return counts_meet(cMaj, cMin, static_cast<long long>(s.size()), eps);
}

SftWindow sft_encode(const DeBruijnGraph& graph, const BlockSchedule& schedule,
                     const RingScheme& scheme, const std::vector<int>& bits,
                     std::pair<int, int> jRange, int start_vertex) {
  check_scheme(scheme);
  if (graph.window != schedule.window)
    fail(ErrorKind::usage, "graph and schedule window lengths differ");
  auto [jLo, jHi] = jRange;
  if (jLo < 0) {
    jLo = 0;
    jHi = scheme.j_count - 1;
  }
  if (jLo < 0 || jHi < jLo || jHi >= scheme.j_count)
    fail(ErrorKind::usage, "j range must lie inside the ring scheme");
  for (int bit : bits)
    if (bit != 0 && bit != 1) fail(ErrorKind::usage, "bits must be 0 or 1");

  std::optional<DoubleLoop> dl = find_double_loop(graph);
  if (!dl)
    fail(ErrorKind::precondition,
         "graph has no double loop, so no ring can carry a rule");
  GoodFlags flags = classify_good(graph);
  int N = graph.window;
  int v0 = dl->shared_vertex;
  Circuits c = make_circuits(graph, *dl, v0);
  int start = start_vertex < 0 ? v0 : start_vertex;
  if (start >= static_cast<int>(graph.vertices.size()))
    fail(ErrorKind::usage, "start vertex out of range");
  if (!flags.right[static_cast<std::size_t>(start)] ||
      !flags.left[static_cast<std::size_t>(start)])
    fail(ErrorKind::usage, "start vertex must be good in both directions");

  std::map<int, int> addressed;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    Player p = k % 2 == 0 ? Player::I : Player::II;
    int n = static_cast<int>(k / 2);
    for (int j = jLo; j <= jHi; ++j)
      addressed[ring_block_index(scheme, p, n, j)] = bits[k];
  }
  long long coverI = std::max<long long>((bits.size() + 1) / 2, 1);
  long long coverII = std::max<long long>(bits.size() / 2, 1);
  int maxI = std::max(
      ring_block_index(scheme, Player::I, static_cast<int>(coverI) - 1, jHi),
      ring_block_index(scheme, Player::II, static_cast<int>(coverII) - 1, jHi));
  if (maxI > schedule.block_count())
    fail(ErrorKind::capacity, "schedule has " +
                                  std::to_string(schedule.block_count()) +
                                  " blocks but the encoding needs " +
                                  std::to_string(maxI));

  SftWindow y;
  y.origin = 0;
  y.symbols.reserve(static_cast<std::size_t>(
      schedule.b[static_cast<std::size_t>(maxI)] + c.len[0] + N));
  y.symbols = graph.vertices[static_cast<std::size_t>(start)];
  long long t = 0;  // gram position: current vertex occupies [t, t+N)
  if (start != v0) {
    // shortest connector to the loop anchor through two-way good vertices
    std::vector<int> prev(graph.vertices.size(), -2);
    std::deque<int> queue{start};
    prev[static_cast<std::size_t>(start)] = -1;
    while (!queue.empty() && prev[static_cast<std::size_t>(v0)] == -2) {
      int u = queue.front();
      queue.pop_front();
      for (int v : graph.out[static_cast<std::size_t>(u)]) {
        if (prev[static_cast<std::size_t>(v)] != -2) continue;
        if (!flags.right[static_cast<std::size_t>(v)] ||
            !flags.left[static_cast<std::size_t>(v)])
          continue;
        prev[static_cast<std::size_t>(v)] = u;
        queue.push_back(v);
      }
    }
    if (prev[static_cast<std::size_t>(v0)] == -2)
      fail(ErrorKind::search_exhausted,
           "no path from the start vertex to the double loop through two-way "
           "good vertices");
    std::string path;
    for (int u = v0; u != start; u = prev[static_cast<std::size_t>(u)])
      path += graph.vertices[static_cast<std::size_t>(u)].back();
    std::reverse(path.begin(), path.end());
    y.symbols += path;
    t += static_cast<long long>(path.size());
  }
  auto append = [&](int i, long long times) {
    for (long long r = 0; r < times; ++r) y.symbols += c.sym[static_cast<std::size_t>(i)];
    t += times * c.len[static_cast<std::size_t>(i)];
  };
  for (int blockIdx = 1; blockIdx <= maxI; ++blockIdx) {
    auto [lo, hi] = schedule.block(blockIdx);
    auto it = addressed.find(blockIdx);
    if (it == addressed.end()) {
      while (t < hi - N) append(0, 1);
      continue;
    }
    int bit = it->second;
    while (t < lo) append(0, 1);
    long long a = t, waste = a - lo, B = hi - lo;
    long long L = hi - a - N;
    int kMaj = c.len[static_cast<std::size_t>(bit)];
    int kMin = c.len[static_cast<std::size_t>(1 - bit)];
    // minimal minority count m with M*kMaj + m*kMin = L, m >= ceil(|s|/10)+1
    // and majority at least two thirds even at zero tolerance
    auto solve = [&](long long budget) -> std::optional<std::pair<long long, long long>> {
      for (long long m = 1; m * kMin <= budget; ++m) {
        long long rest = budget - m * kMin;
        if (rest % kMaj != 0) continue;
        long long M = rest / kMaj;
        long long len = m + M;
        if (m < (len + 9) / 10 + 1) continue;
        if (3 * M < 2 * len) continue;
        return std::make_pair(m, M);
      }
      return std::nullopt;
    };
    auto mm = solve(L);
    Rational half = epsilon_max(static_cast<int>(graph.vertices.size())) /
                    Rational(2);
    if (mm && !interval_meets(hi - a, B, half)) mm = std::nullopt;
    if (!mm) {
      long long feasible = -1;
      for (long long Lx = L + 1; Lx <= L + 20000; ++Lx)
        if (solve(Lx)) {
          feasible = Lx + N + waste;
          break;
        }
      std::string hint = feasible < 0
                             ? "no feasible length within 20000 of it"
                             : "minimal feasible ring length is " +
                                   std::to_string(feasible);
      fail(ErrorKind::capacity,
           "ring block " + std::to_string(blockIdx) + " of length " +
               std::to_string(B) + " cannot carry bit " + std::to_string(bit) +
               "; " + hint);
    }
    append(1 - bit, mm->first);
    append(bit, mm->second);
  }
  return y;
}

SftDecoded sft_decode(const DeBruijnGraph& graph, const BlockSchedule& schedule,
                      const RingScheme& scheme, const SftWindow& y, int bit_count,
                      const Rational& eps, std::pair<int, int> jRange) {
  auto [jLo, jHi] = jRange;
  if (jLo < 0) {
    jLo = scheme.j_count / 2;
    jHi = scheme.j_count - 1;
  }
  if (bit_count < 0) fail(ErrorKind::usage, "bit count must be >= 0");
  check_rule_args(graph, schedule, scheme, 0, eps, jLo, jHi);
  SftContext ctx = make_context(graph);
  Orientation orient = scan_orientation(graph, ctx.flags, y);
  SftDecoded out;
  out.bits.reserve(static_cast<std::size_t>(bit_count));
  for (int k = 0; k < bit_count; ++k) {
    Player p = k % 2 == 0 ? Player::I : Player::II;
    out.bits.push_back(rule_check_impl(ctx, schedule, scheme, y, orient, k / 2, p,
                                       eps, jLo, jHi)
                           .witness);
  }
  return out;
}

}  // namespace shiftgame
