// Command-line workbench over the library: layer tables, ring codec suites,
// window-graph exports, game solving and strategy transfer, and the
// acceptance gate. Every randomized run is seeded and echoes its config into
// the report it writes; reports carry no timings, so identical invocations
// produce byte-identical files. Exit codes: 0 all asserted properties hold,
// 1 a property failed (first failing assertion on stderr), 2 usage, 3 other
// library errors.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shiftgame/acceptance.hpp"
#include "shiftgame/debruijn.hpp"
#include "shiftgame/error.hpp"
#include "shiftgame/game.hpp"
#include "shiftgame/group.hpp"
#include "shiftgame/layers.hpp"
#include "shiftgame/rational.hpp"
#include "shiftgame/sft_codec.hpp"
#include "shiftgame/shift_codec.hpp"

namespace {

using namespace shiftgame;
using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20260818;

// Reports keep being written past their first failing row; the failure is
// raised after the file is complete so the exit path can name it.
struct PropertyFailure {
  std::string what;
};

struct Verdict {
  std::string first;
  void expect(bool ok, const std::string& what) {
    if (!ok && first.empty()) first = what;
  }
  void raise_if_failed() const {
    if (!first.empty()) throw PropertyFailure{first};
  }
};

using Config = std::vector<std::pair<std::string, std::string>>;

std::string config_line(const std::string& command, const Config& config) {
  std::string line = command;
  for (const auto& [key, value] : config) line += " " + key + "=" + value;
  return line;
}

json config_json(const std::string& command, const Config& config) {
  json options = json::object();
  for (const auto& [key, value] : config) options[key] = value;
  return json{{"command", command}, {"options", options}};
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::usage, "cannot open output file " + path);
  out << text;
}

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::usage, "cannot open input file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string csv_cell(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string joined(const std::vector<std::string>& parts) {
  std::string text;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) text += ";";
    text += parts[i];
  }
  return text;
}

// p/q, a plain integer, or a decimal like 0.0156.
Rational parse_rational(const std::string& text) {
  try {
    if (auto slash = text.find('/'); slash != std::string::npos) {
      std::size_t ln = 0, rn = 0;
      long long num = std::stoll(text.substr(0, slash), &ln);
      long long den = std::stoll(text.substr(slash + 1), &rn);
      if (ln == slash && rn == text.size() - slash - 1) return Rational(num, den);
    } else if (auto dot = text.find('.'); dot != std::string::npos) {
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      std::size_t used = 0;
      long long scaled = std::stoll(digits, &used);
      long long den = 1;
      for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
      if (used == digits.size()) return Rational(scaled, den);
    } else {
      std::size_t used = 0;
      long long value = std::stoll(text, &used);
      if (used == text.size()) return Rational(value);
    }
  } catch (const std::logic_error&) {
  }
  fail(ErrorKind::usage, "not a rational number: '" + text + "'");
}

Player parse_player(const std::string& text) {
  if (text == "I") return Player::I;
  if (text == "II") return Player::II;
  fail(ErrorKind::usage, "player must be I or II, got '" + text + "'");
}

PairingKind parse_pairing(const std::string& text) {
  if (text == "two-adic") return PairingKind::two_adic;
  if (text == "blocked") return PairingKind::blocked;
  fail(ErrorKind::usage, "pairing must be two-adic or blocked, got '" + text + "'");
}

ScheduleGrowth parse_growth(const std::string& text) {
  if (text == "desk") return ScheduleGrowth::desk;
  if (text == "strict") return ScheduleGrowth::strict;
  fail(ErrorKind::usage, "growth must be desk or strict, got '" + text + "'");
}

std::vector<int> parse_bits(const std::string& text) {
  std::vector<int> bits;
  for (char c : text) {
    if (c != '0' && c != '1')
      fail(ErrorKind::usage, "bit string may only contain 0 and 1: '" + text + "'");
    bits.push_back(c - '0');
  }
  return bits;
}

// ---------------------------------------------------------------- layouts

struct LayoutOptions {
  std::string group = "Z";
  std::string pairing = "two-adic";
  int j_count = 0;
  std::string ratio;  // empty = identity layer selection
  int stages = 11;
  std::string layout_file;
};

void add_layout_options(CLI::App* cmd, LayoutOptions& opt) {
  cmd->add_option("--group", opt.group,
                  "group expression: Z, Z^d, Fk, Ck, products with x");
  cmd->add_option("--pairing", opt.pairing, "ring pairing, two-adic or blocked");
  cmd->add_option("--j-count", opt.j_count,
                  "rings per (player, move); 0 = unbounded two-adic");
  cmd->add_option("--ratio", opt.ratio,
                  "select layers greedily toward this growth ratio, e.g. 1/2");
  cmd->add_option("--stages", opt.stages, "selected layer count used with --ratio");
  cmd->add_option("--layout", opt.layout_file,
                  "JSON ring layout file overriding the options above");
}

RingLayout make_layout(const LayoutOptions& opt) {
  if (!opt.layout_file.empty())
    return RingLayout::from_json_text(read_input(opt.layout_file));
  GroupPtr group = Group::from_expression(opt.group);
  LayerSystem layers = opt.ratio.empty()
                           ? LayerSystem(group)
                           : reindex_layers(group, parse_rational(opt.ratio),
                                            opt.stages);
  return RingLayout(std::move(layers), parse_pairing(opt.pairing), opt.j_count);
}

void echo_layout(Config& config, const LayoutOptions& opt) {
  if (!opt.layout_file.empty()) {
    config.emplace_back("layout", opt.layout_file);
    return;
  }
  config.emplace_back("group", opt.group);
  config.emplace_back("pairing", opt.pairing);
  config.emplace_back("j-count", std::to_string(opt.j_count));
  if (!opt.ratio.empty()) {
    config.emplace_back("ratio", opt.ratio);
    config.emplace_back("stages", std::to_string(opt.stages));
  }
}

// --------------------------------------------------------------------- wa

struct FolnerOptions {
  std::string group = "Z";
  int n = 16;
  std::string g = "1";
  std::string out;
};

void run_folner(const FolnerOptions& o) {
  if (o.n < 0) fail(ErrorKind::usage, "--n must be nonnegative");
  GroupPtr group = Group::from_expression(o.group);
  LayerSystem layers(group);
  Word g = group->parse_element(o.g);
  int glen = group->word_length_of(g);
  Config config{{"group", o.group}, {"g", o.g}, {"n", std::to_string(o.n)}};
  std::string csv = "# " + config_line("wa folner", config) + "\n";
  csv += "n,ratio,bound,margin\n";
  Verdict verdict;
  for (int n = 0; n <= o.n; ++n) {
    Rational ratio = layers.folner_ratio(n, g);
    Rational bound(n - glen + 1, n + 1);
    csv += std::to_string(n) + "," + ratio.str() + "," + bound.str() + "," +
           (ratio - bound).str() + "\n";
    verdict.expect(ratio >= bound, "ratio " + ratio.str() + " at n=" +
                                       std::to_string(n) + " drops below " +
                                       bound.str());
  }
  write_output(o.out, csv);
  verdict.raise_if_failed();
}

struct SpreadOptions {
  std::string group = "F2";
  int radius = 2;
  int n = 8;
  std::string out;
};

void run_spread(const SpreadOptions& o) {
  if (o.radius < 0 || o.n < 0)
    fail(ErrorKind::usage, "--radius and --n must be nonnegative");
  GroupPtr group = Group::from_expression(o.group);
  LayerSystem layers(group);
  Config config{{"group", o.group},
                {"radius", std::to_string(o.radius)},
                {"n", std::to_string(o.n)}};
  std::string csv = "# " + config_line("wa spread", config) + "\n";
  csv += "g,glen,n,spread,bound\n";
  Verdict verdict;
  for (int r = 0; r <= o.radius; ++r)
    for (const Word& g : group->sphere(r))
      for (int n = 0; n <= o.n; ++n) {
        int spread = layers.appropriate_spread(g, n);
        int bound = 2 * r + 2;
        csv += csv_cell(group->format_word(g)) + "," + std::to_string(r) + "," +
               std::to_string(n) + "," + std::to_string(spread) + "," +
               std::to_string(bound) + "\n";
        verdict.expect(spread <= bound,
                       "spread " + std::to_string(spread) + " of " +
                           group->format_word(g) + " at n=" + std::to_string(n) +
                           " exceeds " + std::to_string(bound));
      }
  write_output(o.out, csv);
  verdict.raise_if_failed();
}

struct WaLayoutOptions {
  LayoutOptions layout;
  std::string out;
};

void run_layout(const WaLayoutOptions& o) {
  RingLayout layout = make_layout(o.layout);
  Config config;
  echo_layout(config, o.layout);
  json j = json::parse(layout.to_json_text());
  j["config"] = config_json("wa layout", config);
  write_output(o.out, j.dump(2) + "\n");
}

// ------------------------------------------------------------------ codec

struct RoundtripOptions {
  LayoutOptions layout;
  int cases = 50;
  int max_len = 4;
  int alphabet = 3;
  int max_j = 4;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

void run_roundtrip(const RoundtripOptions& o) {
  if (o.cases < 1 || o.max_len < 0 || o.alphabet < 1 || o.max_j < 1)
    fail(ErrorKind::usage, "--cases, --alphabet and --max-j must be positive");
  RingLayout layout = make_layout(o.layout);
  RingCodec codec(layout, PlayerPartition::parity(layout.layers()));
  // Blocked pairings carry j_count rings per move; clamp and echo the
  // effective window so the report still replays the run.
  int maxJ = o.max_j;
  if (layout.j_count() > 0) maxJ = std::min(maxJ, layout.j_count() - 1);
  if (maxJ < 1)
    fail(ErrorKind::usage,
         "this layout has a single ring per move; encoding needs J >= 1");
  Config config;
  echo_layout(config, o.layout);
  config.emplace_back("cases", std::to_string(o.cases));
  config.emplace_back("max-len", std::to_string(o.max_len));
  config.emplace_back("alphabet", std::to_string(o.alphabet));
  config.emplace_back("max-j", std::to_string(maxJ));
  config.emplace_back("seed", std::to_string(o.seed));
  std::string csv = "# " + config_line("codec roundtrip", config) + "\n";
  csv += "case,J,moves,decoded,match\n";
  std::mt19937_64 rng(o.seed);
  Verdict verdict;
  for (int i = 0; i < o.cases; ++i) {
    int len = static_cast<int>(rng() % static_cast<std::uint64_t>(o.max_len + 1));
    int J = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(maxJ));
    std::vector<std::int32_t> moves(static_cast<std::size_t>(len));
    for (auto& m : moves)
      m = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(o.alphabet));
    Configuration x = codec.encode_moves(moves, J);
    std::vector<std::string> sent, got;
    bool match = true;
    for (int t = 0; t < len; ++t) {
      Player p = t % 2 == 0 ? Player::I : Player::II;
      std::optional<std::int32_t> back = codec.decode_default(x, t, p, J);
      sent.push_back(std::to_string(moves[static_cast<std::size_t>(t)]));
      got.push_back(back ? std::to_string(*back) : "?");
      match = match && back && *back == moves[static_cast<std::size_t>(t)];
    }
    csv += std::to_string(i) + "," + std::to_string(J) + "," + joined(sent) +
           "," + joined(got) + "," + (match ? "1" : "0") + "\n";
    verdict.expect(match, "case " + std::to_string(i) + " decoded as " +
                              joined(got) + " instead of " + joined(sent));
  }
  write_output(o.out, csv);
  verdict.raise_if_failed();
}

struct InvarianceOptions {
  LayoutOptions layout;
  int cases = 40;
  int moves = 2;
  int alphabet = 3;
  int J = 1;
  int radius = 2;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

void run_invariance(const InvarianceOptions& o) {
  if (o.cases < 1 || o.moves < 1 || o.alphabet < 1 || o.J < 0 || o.radius < 1)
    fail(ErrorKind::usage, "--cases, --moves and --radius must be positive");
  RingLayout layout = make_layout(o.layout);
  RingCodec codec(layout, PlayerPartition::parity(layout.layers()));
  std::vector<Word> shifts = codec.config_group()->ball(o.radius);
  if (shifts.size() < 2)
    fail(ErrorKind::usage, "the shift ball holds no nontrivial element");
  int J = o.J;
  if (layout.j_count() > 0) J = std::min(J, layout.j_count() - 1);
  if (J < 1)
    fail(ErrorKind::usage,
         "this layout has a single ring per move; encoding needs J >= 1");
  Config config;
  echo_layout(config, o.layout);
  config.emplace_back("cases", std::to_string(o.cases));
  config.emplace_back("moves", std::to_string(o.moves));
  config.emplace_back("alphabet", std::to_string(o.alphabet));
  config.emplace_back("J", std::to_string(J));
  config.emplace_back("radius", std::to_string(o.radius));
  config.emplace_back("seed", std::to_string(o.seed));
  std::string csv = "# " + config_line("codec invariance", config) + "\n";
  csv += "case,g,n,j,witness,defects,carry,partLower,partEscape,partCarry,bound,pass\n";
  std::mt19937_64 rng(o.seed);
  Verdict verdict;
  for (int i = 0; i < o.cases; ++i) {
    std::vector<std::int32_t> moves(static_cast<std::size_t>(o.moves));
    for (auto& m : moves)
      m = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(o.alphabet));
    const Word& g = shifts[1 + rng() % (shifts.size() - 1)];
    // The defect report reads player I's rings, so only even moves qualify.
    int n = 2 * static_cast<int>(
                    rng() % ((static_cast<std::uint64_t>(o.moves) + 1) / 2));
    int j = static_cast<int>(rng() % static_cast<std::uint64_t>(J + 1));
    Configuration x = codec.encode_moves(moves, J);
    InvarianceReport r = codec.invariance_bound_check(x, g, n, j);
    std::string name = codec.config_group()->format_word(g);
    csv += std::to_string(i) + "," + csv_cell(name) + "," + std::to_string(n) +
           "," + std::to_string(j) + "," + std::to_string(r.witness) + "," +
           std::to_string(r.defects) + "," + std::to_string(r.carry) + "," +
           std::to_string(r.part_lower) + "," + std::to_string(r.part_escape) +
           "," + std::to_string(r.part_carry) + "," + std::to_string(r.bound) +
           "," + (r.pass ? "1" : "0") + "\n";
    verdict.expect(r.pass, "case " + std::to_string(i) + ": shifting by " +
                               name + " left " + std::to_string(r.defects) +
                               " defects on ring (" + std::to_string(n) + "," +
                               std::to_string(j) + "), bound " +
                               std::to_string(r.bound));
  }
  write_output(o.out, csv);
  verdict.raise_if_failed();
}

// -------------------------------------------------------------------- sft

struct GraphOptions {
  std::vector<std::string> forbidden;
  int window = 2;
  std::string dot;
  std::string json_path;
  std::string out;
};

void run_graph(const GraphOptions& o) {
  DeBruijnGraph graph = build_debruijn(o.forbidden, o.window);
  std::optional<DoubleLoop> loop = find_double_loop(graph);
  Config config{{"forbidden", joined(o.forbidden)},
                {"N", std::to_string(o.window)}};
  if (!o.dot.empty())
    write_output(o.dot, "// " + config_line("sft graph", config) + "\n" +
                            graph_to_dot(graph, loop));
  if (!o.json_path.empty()) {
    json j = json::parse(classification_to_json_text(graph));
    j["config"] = config_json("sft graph", config);
    write_output(o.json_path, j.dump(2) + "\n");
  }
  auto words = [&](const Cycle& c) {
    std::vector<std::string> out;
    for (int v : c) out.push_back(graph.vertices[static_cast<std::size_t>(v)]);
    return out;
  };
  GoodFlags flags = classify_good(graph);
  std::size_t right = static_cast<std::size_t>(
      std::count(flags.right.begin(), flags.right.end(), true));
  std::size_t left = static_cast<std::size_t>(
      std::count(flags.left.begin(), flags.left.end(), true));
  std::string summary =
      "vertices " + std::to_string(graph.vertices.size()) + ", edges " +
      std::to_string(graph.edges.size()) + "\n";
  if (loop)
    summary += "double loop: " + joined(words(loop->c0)) + " and " +
               joined(words(loop->c1)) + ", shared " +
               graph.vertices[static_cast<std::size_t>(loop->shared_vertex)] +
               "\n";
  else
    summary += "double loop: none\n";
  summary += "good right " + std::to_string(right) + " of " +
             std::to_string(graph.vertices.size()) + ", good left " +
             std::to_string(left) + " of " +
             std::to_string(graph.vertices.size()) + "\n";
  write_output(o.out, summary);
}

struct EpsOptions {
  int max_size = 8;
  std::string out;
};

void run_eps(const EpsOptions& o) {
  if (o.max_size < 1) fail(ErrorKind::usage, "--max-size must be positive");
  Config config{{"max-size", std::to_string(o.max_size)}};
  std::string csv = "# " + config_line("sft eps", config) + "\n";
  csv += "size,eps,binding\n";
  for (int s = 1; s <= o.max_size; ++s) {
    EpsilonInfo info = epsilon_max_info(s);
    csv += std::to_string(s) + "," + info.value.str() + "," +
           std::to_string(info.binding) + "\n";
  }
  write_output(o.out, csv);
}

struct SftOptions {
  std::vector<std::string> forbidden{"11"};
  int window = 2;  // --N
  int factor = 4;  // --K
  std::string growth = "desk";
  int blocks = 0;  // 0 = sized to the deepest addressed ring
  int rings = 1;
};

void add_sft_options(CLI::App* cmd, SftOptions& opt) {
  cmd->add_option("--forbidden", opt.forbidden, "forbidden binary words");
  cmd->add_option("--N", opt.window, "window length");
  cmd->add_option("--K", opt.factor, "desk schedule gap ratio");
  cmd->add_option("--growth", opt.growth, "schedule growth, desk or strict");
  cmd->add_option("--blocks", opt.blocks,
                  "block count; 0 sizes the schedule to the deepest ring used");
  cmd->add_option("--rings", opt.rings, "rings per (player, move)");
}

void echo_sft(Config& config, const SftOptions& opt, int blocks) {
  config.emplace_back("forbidden", joined(opt.forbidden));
  config.emplace_back("N", std::to_string(opt.window));
  config.emplace_back("K", std::to_string(opt.factor));
  config.emplace_back("growth", opt.growth);
  config.emplace_back("blocks", std::to_string(blocks));
  config.emplace_back("rings", std::to_string(opt.rings));
}

int blocks_for_bits(const RingScheme& scheme, int bit_count,
                    std::pair<int, int> jRange) {
  int jLo = jRange.first >= 0 ? jRange.first : 0;
  int jHi = jRange.second >= 0 ? jRange.second : scheme.j_count - 1;
  int deepest = 3;
  for (int k = 0; k < bit_count; ++k) {
    Player p = k % 2 == 0 ? Player::I : Player::II;
    for (int j = jLo; j <= jHi; ++j)
      deepest = std::max(deepest, ring_block_index(scheme, p, k / 2, j));
  }
  return deepest;
}

Rational default_eps(const DeBruijnGraph& graph) {
  return epsilon_max(static_cast<int>(graph.vertices.size())) / Rational(2);
}

struct EncodeOptions {
  SftOptions sft;
  std::string bits;
  int j_lo = -1, j_hi = -1;
  int start_vertex = -1;
  std::string out;
};

void run_encode(const EncodeOptions& o) {
  DeBruijnGraph graph = build_debruijn(o.sft.forbidden, o.sft.window);
  RingScheme scheme;
  scheme.j_count = o.sft.rings;
  std::vector<int> bits = parse_bits(o.bits);
  std::pair<int, int> jRange{o.j_lo, o.j_hi};
  int blocks = o.sft.blocks > 0
                   ? o.sft.blocks
                   : blocks_for_bits(scheme, static_cast<int>(bits.size()), jRange);
  BlockSchedule schedule = block_schedule(
      o.sft.window, parse_growth(o.sft.growth), blocks, o.sft.factor);
  SftWindow y = sft_encode(graph, schedule, scheme, bits, jRange, o.start_vertex);
  Config config;
  echo_sft(config, o.sft, blocks);
  config.emplace_back("bits", o.bits);
  json j = json::parse(y.to_json_text());
  j["config"] = config_json("sft encode", config);
  write_output(o.out, j.dump(2) + "\n");
}

struct DecodeOptions {
  SftOptions sft;
  std::string in;
  int count = 0;
  std::string eps;     // empty = half the tolerance cap of the graph
  std::string expect;  // optional bit string to assert against
  int j_lo = -1, j_hi = -1;
  std::string out;
};

void run_decode(const DecodeOptions& o) {
  if (o.in.empty()) fail(ErrorKind::usage, "decode needs --in <window.json>");
  if (o.count < 0) fail(ErrorKind::usage, "--count must be nonnegative");
  DeBruijnGraph graph = build_debruijn(o.sft.forbidden, o.sft.window);
  RingScheme scheme;
  scheme.j_count = o.sft.rings;
  SftWindow y = SftWindow::from_json_text(read_input(o.in));
  std::pair<int, int> jRange{o.j_lo, o.j_hi};
  int blocks = o.sft.blocks > 0 ? o.sft.blocks
                                : blocks_for_bits(scheme, o.count, jRange);
  BlockSchedule schedule = block_schedule(
      o.sft.window, parse_growth(o.sft.growth), blocks, o.sft.factor);
  Rational eps = o.eps.empty() ? default_eps(graph) : parse_rational(o.eps);
  SftDecoded decoded = sft_decode(graph, schedule, scheme, y, o.count, eps, jRange);
  Config config;
  echo_sft(config, o.sft, blocks);
  config.emplace_back("count", std::to_string(o.count));
  config.emplace_back("eps", eps.str());
  json bits = json::array();
  for (const auto& bit : decoded.bits)
    bits.push_back(bit ? json(*bit) : json(nullptr));
  json report{{"config", config_json("sft decode", config)}, {"bits", bits}};
  write_output(o.out, report.dump(2) + "\n");
  if (!o.expect.empty()) {
    Verdict verdict;
    std::vector<int> want = parse_bits(o.expect);
    verdict.expect(want.size() == decoded.bits.size(),
                   "decoded " + std::to_string(decoded.bits.size()) +
                       " bits, expected " + std::to_string(want.size()));
    for (std::size_t k = 0; k < want.size() && k < decoded.bits.size(); ++k)
      verdict.expect(
          decoded.bits[k] && *decoded.bits[k] == want[k],
          "bit " + std::to_string(k) + " decoded as " +
              (decoded.bits[k] ? std::to_string(*decoded.bits[k])
                               : std::string("none")) +
              ", expected " + std::to_string(want[k]));
    verdict.raise_if_failed();
  }
}

struct CheckOptions {
  SftOptions sft;
  std::string in;
  int n = 0;
  std::string player = "I";
  std::string eps;
  int j_lo = 0, j_hi = -1;
  std::string out;
};

void run_check(const CheckOptions& o) {
  if (o.in.empty()) fail(ErrorKind::usage, "check needs --in <window.json>");
  DeBruijnGraph graph = build_debruijn(o.sft.forbidden, o.sft.window);
  RingScheme scheme;
  scheme.j_count = o.sft.rings;
  Player player = parse_player(o.player);
  int jHi = o.j_hi >= 0 ? o.j_hi : scheme.j_count - 1;
  int blocks = o.sft.blocks;
  if (blocks <= 0) {
    blocks = 3;
    for (int j = o.j_lo; j <= jHi; ++j)
      blocks = std::max(blocks, ring_block_index(scheme, player, o.n, j));
  }
  BlockSchedule schedule = block_schedule(
      o.sft.window, parse_growth(o.sft.growth), blocks, o.sft.factor);
  SftWindow y = SftWindow::from_json_text(read_input(o.in));
  Rational eps = o.eps.empty() ? default_eps(graph) : parse_rational(o.eps);
  RuleReport r =
      rule_check_report(graph, schedule, scheme, y, o.n, player, eps, o.j_lo, jHi);
  Config config;
  echo_sft(config, o.sft, blocks);
  config.emplace_back("n", std::to_string(o.n));
  config.emplace_back("player", o.player);
  config.emplace_back("eps", eps.str());
  config.emplace_back("j-lo", std::to_string(o.j_lo));
  config.emplace_back("j-hi", std::to_string(jHi));
  auto words = [&](const Cycle& c) {
    std::vector<std::string> out;
    for (int v : c) out.push_back(graph.vertices[static_cast<std::size_t>(v)]);
    return out;
  };
  json rings = json::array();
  for (const RingCheck& rc : r.rings)
    rings.push_back({{"j", rc.j},
                     {"a", rc.a},
                     {"b", rc.b},
                     {"majority", rc.majority_count},
                     {"minority", rc.minority_count},
                     {"length", rc.length},
                     {"loop",
                      {{"c0", words(rc.loop.c0)},
                       {"c1", words(rc.loop.c1)},
                       {"shared",
                        graph.vertices[static_cast<std::size_t>(
                            rc.loop.shared_vertex)]}}}});
  json report{{"config", config_json("sft check", config)},
              {"witness", r.witness ? json(*r.witness) : json(nullptr)},
              {"rightOriented", r.right_oriented},
              {"rings", rings}};
  write_output(o.out, report.dump(2) + "\n");
}

// ------------------------------------------------------------------- game

json strategy_json(const Strategy& s) {
  json rows = json::array();
  for (const auto& [position, move] : s.table)
    rows.push_back({{"position", position}, {"move", move}});
  return rows;
}

struct GameSolveOptions {
  std::string fixture;
  std::uint64_t budget = 10000000;
  std::string out;
  std::string strategy_out;
};

void run_game_solve(const GameSolveOptions& o) {
  if (o.fixture.empty()) fail(ErrorKind::usage, "solve needs --fixture <file>");
  GameSpec spec = parse_game_fixture(read_input(o.fixture));
  SolveResult result = solve(spec, o.budget);
  bool verified = verify_strategy(spec, result.strategy);
  Config config{{"fixture", o.fixture}, {"budget", std::to_string(o.budget)}};
  json report{{"config", config_json("game solve", config)},
              {"winner", player_name(result.winner)},
              {"positions", result.positions},
              {"strategyMoves", result.strategy.table.size()},
              {"verified", verified}};
  write_output(o.out, report.dump(2) + "\n");
  if (!o.strategy_out.empty())
    write_output(o.strategy_out, strategy_json(result.strategy).dump(2) + "\n");
  Verdict verdict;
  verdict.expect(verified, "solved strategy for " +
                               std::string(player_name(result.winner)) +
                               " fails verification");
  verdict.raise_if_failed();
}

struct TransferRulesOptions {
  std::string fixture;
  std::uint64_t budget = 10000000;
  std::string out;
  std::string strategy_out;
};

void run_transfer_rules(const TransferRulesOptions& o) {
  if (o.fixture.empty())
    fail(ErrorKind::usage, "transfer-rules needs --fixture <file>");
  GameSpec rules = parse_game_fixture(read_input(o.fixture));
  SolveResult direct = solve(rules, o.budget);
  GameSpec extended = extend_rules_game(rules);
  SolveResult lifted = solve(extended, o.budget);
  Strategy moved = transfer_rules_strategy(rules, lifted.strategy);
  bool verified = verify_strategy(rules, moved);
  Config config{{"fixture", o.fixture}, {"budget", std::to_string(o.budget)}};
  json report{{"config", config_json("game transfer-rules", config)},
              {"rulesWinner", player_name(direct.winner)},
              {"extendedWinner", player_name(lifted.winner)},
              {"rulesPositions", direct.positions},
              {"extendedPositions", lifted.positions},
              {"transferredMoves", moved.table.size()},
              {"verified", verified}};
  write_output(o.out, report.dump(2) + "\n");
  if (!o.strategy_out.empty())
    write_output(o.strategy_out, strategy_json(moved).dump(2) + "\n");
  Verdict verdict;
  verdict.expect(direct.winner == lifted.winner,
                 "extension moved the win from " +
                     std::string(player_name(direct.winner)) + " to " +
                     std::string(player_name(lifted.winner)));
  verdict.expect(verified, "transferred strategy fails verification");
  verdict.raise_if_failed();
}

struct TransferShiftOptions {
  int depth = 2;
  int alphabet = 2;
  std::string payoff = "all";
  int horizon = -1;
  std::uint64_t budget = 10000000;
  std::string out;
};

std::function<bool(const Position&)> leaf_bitmap_payoff(int depth, int alphabet,
                                                        const std::string& text) {
  if (text == "all") return [](const Position&) { return true; };
  if (text == "none") return [](const Position&) { return false; };
  std::uint64_t leaves = 1;
  for (int i = 0; i < depth; ++i) {
    leaves *= static_cast<std::uint64_t>(alphabet);
    if (leaves > (1ull << 32))
      fail(ErrorKind::usage, "payoff bitmap would need more than 2^32 bits");
  }
  if (text.size() != leaves)
    fail(ErrorKind::usage, "payoff bitmap needs " + std::to_string(leaves) +
                               " bits, got " + std::to_string(text.size()));
  parse_bits(text);
  return [alphabet, text](const Position& p) {
    std::uint64_t index = 0;
    for (int v : p)
      index = index * static_cast<std::uint64_t>(alphabet) +
              static_cast<std::uint64_t>(v);
    return text[index] == '1';
  };
}

void run_transfer_shift(const TransferShiftOptions& o) {
  ShiftGameLayout board = toy_shift_layout(o.depth, o.alphabet);
  auto payoff = leaf_bitmap_payoff(o.depth, o.alphabet, o.payoff);
  GameSpec aux = auxiliary_game(board, payoff);
  SolveResult solved = solve(aux, o.budget);
  ShiftTransfer transfer = transfer_shift_strategy(solved.strategy, board, o.horizon);
  GameSpec base = full_tree_game(o.depth, {o.alphabet}, payoff);
  bool verified = verify_strategy(base, transfer.strategy);
  Config config{{"depth", std::to_string(o.depth)},
                {"alphabet", std::to_string(o.alphabet)},
                {"payoff", o.payoff},
                {"horizon", std::to_string(o.horizon)},
                {"budget", std::to_string(o.budget)}};
  json report{{"config", config_json("game transfer-shift", config)},
              {"auxWinner", player_name(solved.winner)},
              {"auxDepth", board.aux_depth()},
              {"auxPositions", solved.positions},
              {"baseWinner", player_name(transfer.strategy.owner)},
              {"traceRounds", transfer.trace.size()},
              {"verified", verified}};
  write_output(o.out, report.dump(2) + "\n");
  Verdict verdict;
  verdict.expect(verified, "transferred strategy loses the base game for " +
                               std::string(player_name(transfer.strategy.owner)));
  verdict.raise_if_failed();
}

// ----------------------------------------------------------------- accept

void run_accept(const std::string& out) {
  std::vector<acceptance::CriterionResult> results = acceptance::run_all();
  std::cout << acceptance::report_lines(results);
  if (!out.empty()) {
    std::string stable;
    for (const auto& r : results)
      stable += std::string(r.pass ? "PASS" : "FAIL") + "  " +
                std::to_string(r.index) + "  " + r.label + "  (" + r.detail +
                ")\n";
    write_output(out, stable);
  }
  Verdict verdict;
  for (const auto& r : results)
    verdict.expect(r.pass, "criterion " + std::to_string(r.index) + " (" +
                               r.label + "): " + r.detail);
  verdict.raise_if_failed();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"layer ratios, ring codecs, window graphs, and strategy transfer"};
  app.require_subcommand(1);
  std::uint64_t ballBudget = 0;
  app.add_option("--ball-budget", ballBudget,
                 "sphere/ball element budget (overrides SHIFTGAME_BALL_BUDGET)");
  auto budget = [&] {
    if (ballBudget) shiftgame::set_ball_budget(ballBudget);
  };

  auto* wa = app.add_subcommand("wa", "layer tables over finitely generated groups");
  wa->require_subcommand(1);

  FolnerOptions folnerOpt;
  auto* folner = wa->add_subcommand(
      "folner", "CSV of layer ratios against the (n-|g|+1)/(n+1) bound");
  folner->add_option("--group", folnerOpt.group, "group expression");
  folner->add_option("--n", folnerOpt.n, "largest layer index");
  folner->add_option("--g", folnerOpt.g, "element whose translates are scored");
  folner->add_option("--out", folnerOpt.out, "output CSV path (default stdout)");
  folner->callback([&] { budget(); run_folner(folnerOpt); });

  SpreadOptions spreadOpt;
  auto* spread = wa->add_subcommand(
      "spread", "CSV of class spreads against the 2|g|+2 bound");
  spread->add_option("--group", spreadOpt.group, "group expression");
  spread->add_option("--radius", spreadOpt.radius, "largest |g| tested");
  spread->add_option("--n", spreadOpt.n, "largest layer index");
  spread->add_option("--out", spreadOpt.out, "output CSV path (default stdout)");
  spread->callback([&] { budget(); run_spread(spreadOpt); });

  WaLayoutOptions layoutOpt;
  auto* layout = wa->add_subcommand(
      "layout", "ring layout as JSON, reloadable by the codec commands");
  add_layout_options(layout, layoutOpt.layout);
  layout->add_option("--out", layoutOpt.out, "output JSON path (default stdout)");
  layout->callback([&] { budget(); run_layout(layoutOpt); });

  auto* codec = app.add_subcommand("codec", "move coding on configurations");
  codec->require_subcommand(1);

  RoundtripOptions roundtripOpt;
  auto* roundtrip = codec->add_subcommand(
      "roundtrip", "randomized encode/decode suite, CSV report");
  add_layout_options(roundtrip, roundtripOpt.layout);
  roundtrip->add_option("--cases", roundtripOpt.cases, "number of cases");
  roundtrip->add_option("--max-len", roundtripOpt.max_len, "largest move vector");
  roundtrip->add_option("--alphabet", roundtripOpt.alphabet, "move values 0..a-1");
  roundtrip->add_option("--max-j", roundtripOpt.max_j, "largest ring index J");
  roundtrip->add_option("--seed", roundtripOpt.seed, "random seed");
  roundtrip->add_option("--out", roundtripOpt.out, "output CSV path");
  roundtrip->callback([&] { budget(); run_roundtrip(roundtripOpt); });

  InvarianceOptions invarianceOpt;
  invarianceOpt.layout.ratio = "1/2";
  invarianceOpt.layout.stages = 16;
  auto* invariance = codec->add_subcommand(
      "invariance", "randomized shift-defect suite against the three-part bound");
  add_layout_options(invariance, invarianceOpt.layout);
  invariance->add_option("--cases", invarianceOpt.cases, "number of cases");
  invariance->add_option("--moves", invarianceOpt.moves,
                         "encoded move count; checks sample player I's rings");
  invariance->add_option("--alphabet", invarianceOpt.alphabet, "move values 0..a-1");
  invariance->add_option("--J", invarianceOpt.J, "rings 0..J per move");
  invariance->add_option("--radius", invarianceOpt.radius, "largest shift length");
  invariance->add_option("--seed", invarianceOpt.seed, "random seed");
  invariance->add_option("--out", invarianceOpt.out, "output CSV path");
  invariance->callback([&] { budget(); run_invariance(invarianceOpt); });

  auto* sft = app.add_subcommand("sft", "window graphs and the window codec");
  sft->require_subcommand(1);

  GraphOptions graphOpt;
  auto* graph = sft->add_subcommand("graph",
                                    "build the window graph, export DOT/JSON");
  graph->add_option("--forbidden", graphOpt.forbidden, "forbidden binary words");
  graph->add_option("--N", graphOpt.window, "window length");
  graph->add_option("--dot", graphOpt.dot, "DOT output path");
  graph->add_option("--json", graphOpt.json_path, "classification JSON path");
  graph->add_option("--out", graphOpt.out, "summary path (default stdout)");
  graph->callback([&] { budget(); run_graph(graphOpt); });

  EpsOptions epsOpt;
  auto* eps = sft->add_subcommand("eps", "tolerance cap per graph size, CSV");
  eps->add_option("--max-size", epsOpt.max_size, "largest graph size");
  eps->add_option("--out", epsOpt.out, "output CSV path (default stdout)");
  eps->callback([&] { budget(); run_eps(epsOpt); });

  EncodeOptions encodeOpt;
  auto* encode = sft->add_subcommand("encode", "write bits into a window, JSON out");
  add_sft_options(encode, encodeOpt.sft);
  encode->add_option("--bits", encodeOpt.bits, "bit string to encode");
  encode->add_option("--j-lo", encodeOpt.j_lo, "first ring index per move");
  encode->add_option("--j-hi", encodeOpt.j_hi, "last ring index per move");
  encode->add_option("--start", encodeOpt.start_vertex, "start vertex id");
  encode->add_option("--out", encodeOpt.out, "window JSON path (default stdout)");
  encode->callback([&] { budget(); run_encode(encodeOpt); });

  DecodeOptions decodeOpt;
  auto* decode = sft->add_subcommand("decode", "read bits back from a window, JSON report");
  add_sft_options(decode, decodeOpt.sft);
  decode->add_option("--in", decodeOpt.in, "window JSON path")->required();
  decode->add_option("--count", decodeOpt.count, "bit positions to decode");
  decode->add_option("--eps", decodeOpt.eps, "tolerance (default: half the cap)");
  decode->add_option("--expect", decodeOpt.expect, "assert the decoded bits");
  decode->add_option("--j-lo", decodeOpt.j_lo, "first ring index per move");
  decode->add_option("--j-hi", decodeOpt.j_hi, "last ring index per move");
  decode->add_option("--out", decodeOpt.out, "report JSON path (default stdout)");
  decode->callback([&] { budget(); run_decode(decodeOpt); });

  CheckOptions checkOpt;
  auto* check = sft->add_subcommand("check", "rule report for one ring family, JSON");
  add_sft_options(check, checkOpt.sft);
  check->add_option("--in", checkOpt.in, "window JSON path")->required();
  check->add_option("--n", checkOpt.n, "move index");
  check->add_option("--player", checkOpt.player, "ring owner, I or II");
  check->add_option("--eps", checkOpt.eps, "tolerance (default: half the cap)");
  check->add_option("--j-lo", checkOpt.j_lo, "first ring index");
  check->add_option("--j-hi", checkOpt.j_hi, "last ring index");
  check->add_option("--out", checkOpt.out, "report JSON path (default stdout)");
  check->callback([&] { budget(); run_check(checkOpt); });

  auto* game = app.add_subcommand("game", "finite games and strategy transfer");
  game->require_subcommand(1);

  GameSolveOptions solveOpt;
  auto* gameSolve = game->add_subcommand("solve", "solve a fixture, JSON verdict");
  gameSolve->add_option("--fixture", solveOpt.fixture, "fixture file")->required();
  gameSolve->add_option("--budget", solveOpt.budget, "node budget");
  gameSolve->add_option("--out", solveOpt.out, "verdict JSON path (default stdout)");
  gameSolve->add_option("--strategy", solveOpt.strategy_out, "strategy JSON path");
  gameSolve->callback([&] { budget(); run_game_solve(solveOpt); });

  TransferRulesOptions rulesOpt;
  auto* transferRules = game->add_subcommand(
      "transfer-rules", "solve the rule-break extension and pull the strategy back");
  transferRules->add_option("--fixture", rulesOpt.fixture, "fixture file")->required();
  transferRules->add_option("--budget", rulesOpt.budget, "node budget");
  transferRules->add_option("--out", rulesOpt.out, "verdict JSON path (default stdout)");
  transferRules->add_option("--strategy", rulesOpt.strategy_out, "strategy JSON path");
  transferRules->callback([&] { budget(); run_transfer_rules(rulesOpt); });

  TransferShiftOptions shiftOpt;
  auto* transferShift = game->add_subcommand(
      "transfer-shift", "solve the toy board game and replay it onto the base game");
  transferShift->add_option("--depth", shiftOpt.depth, "base game depth");
  transferShift->add_option("--alphabet", shiftOpt.alphabet, "base moves per round");
  transferShift->add_option("--payoff", shiftOpt.payoff,
                            "leaf bitmap in lexicographic order, or all/none");
  transferShift->add_option("--horizon", shiftOpt.horizon,
                            "stabilization search depth, -1 = board depth");
  transferShift->add_option("--budget", shiftOpt.budget, "node budget");
  transferShift->add_option("--out", shiftOpt.out, "verdict JSON path (default stdout)");
  transferShift->callback([&] { budget(); run_transfer_shift(shiftOpt); });

  std::string acceptOut;
  auto* accept = app.add_subcommand("accept", "run the acceptance gate");
  accept->add_flag("--all", "run every criterion (the default)");
  accept->add_option("--out", acceptOut, "stable report path (no timings)");
  accept->callback([&] { budget(); run_accept(acceptOut); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const PropertyFailure& failure) {
    std::cerr << "first failing assertion: " << failure.what << "\n";
    return 1;
  } catch (const shiftgame::Error& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == shiftgame::ErrorKind::usage ? 2 : 3;
  }
  return 0;
}
