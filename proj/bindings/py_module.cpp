// Python surface: group arithmetic and layer ratios, window graphs, the
// window codec at defaults matching the CLI, and the game transfers.
// Elements cross the boundary as their formatted text, rationals as
// fractions.Fraction, windows as (origin, symbols) pairs.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shiftgame/debruijn.hpp"
#include "shiftgame/error.hpp"
#include "shiftgame/game.hpp"
#include "shiftgame/group.hpp"
#include "shiftgame/layers.hpp"
#include "shiftgame/rational.hpp"
#include "shiftgame/sft_codec.hpp"
#include "shiftgame/shift_codec.hpp"

namespace py = pybind11;

namespace {

using namespace shiftgame;

py::object fraction(const Rational& r) {
  return py::module_::import("fractions").attr("Fraction")(r.num, r.den);
}

struct PyGroup {
  GroupPtr g;
};

std::vector<std::string> formatted(const GroupPtr& g,
                                   const std::vector<Word>& words) {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const Word& w : words) out.push_back(g->format_word(w));
  return out;
}

std::vector<int> to_bits(const std::string& text) {
  std::vector<int> bits;
  for (char c : text) {
    if (c != '0' && c != '1')
      fail(ErrorKind::usage, "bit string may only contain 0 and 1: '" + text + "'");
    bits.push_back(c - '0');
  }
  return bits;
}

// Deepest block any addressed ring of the default scheme reaches.
int blocks_for(const RingScheme& scheme, int bit_count) {
  int deepest = 3;
  for (int k = 0; k < bit_count; ++k) {
    Player p = k % 2 == 0 ? Player::I : Player::II;
    for (int j = 0; j < scheme.j_count; ++j)
      deepest = std::max(deepest, ring_block_index(scheme, p, k / 2, j));
  }
  return deepest;
}

std::function<bool(const Position&)> leaf_bitmap(int depth, int alphabet,
                                                 const std::string& text) {
  if (text == "all") return [](const Position&) { return true; };
  if (text == "none") return [](const Position&) { return false; };
  std::uint64_t leaves = 1;
  for (int i = 0; i < depth; ++i) leaves *= static_cast<std::uint64_t>(alphabet);
  if (text.size() != leaves)
    fail(ErrorKind::usage, "payoff bitmap needs " + std::to_string(leaves) +
                               " bits, got " + std::to_string(text.size()));
  to_bits(text);
  return [alphabet, text](const Position& p) {
    std::uint64_t index = 0;
    for (int v : p)
      index = index * static_cast<std::uint64_t>(alphabet) +
              static_cast<std::uint64_t>(v);
    return text[index] == '1';
  };
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "finite-scale layer ratios, shift coding, and game transfer";

  py::register_exception<Error>(m, "ShiftgameError");

  py::class_<PyGroup>(m, "Group")
      .def_static(
          "from_expression",
          [](const std::string& expr) { return PyGroup{Group::from_expression(expr)}; },
          py::arg("expr"), "Parse expressions like 'Z', 'Z^2', 'F2', 'Z x C2'.")
      .def("describe", [](const PyGroup& s) { return s.g->describe(); })
      .def(
          "sphere",
          [](const PyGroup& s, int r) { return formatted(s.g, s.g->sphere(r)); },
          py::arg("r"))
      .def(
          "ball",
          [](const PyGroup& s, int r) { return formatted(s.g, s.g->ball(r)); },
          py::arg("r"))
      .def(
          "word_length",
          [](const PyGroup& s, const std::string& a) {
            return s.g->word_length_of(s.g->parse_element(a));
          },
          py::arg("a"))
      .def(
          "multiply",
          [](const PyGroup& s, const std::string& a, const std::string& b) {
            return s.g->format_word(
                s.g->multiply_words(s.g->parse_element(a), s.g->parse_element(b)));
          },
          py::arg("a"), py::arg("b"))
      .def(
          "inverse",
          [](const PyGroup& s, const std::string& a) {
            return s.g->format_word(s.g->inverse_word(s.g->parse_element(a)));
          },
          py::arg("a"))
      .def("__repr__",
           [](const PyGroup& s) { return "Group('" + s.g->describe() + "')"; });

  py::class_<LayerSystem>(m, "LayerSystem")
      .def(py::init([](const PyGroup& g) { return LayerSystem(g.g); }),
           py::arg("group"))
      .def(
          "folner_ratio",
          [](const LayerSystem& layers, int n, const std::string& g) {
            return fraction(layers.folner_ratio(n, layers.group()->parse_element(g)));
          },
          py::arg("n"), py::arg("g"))
      .def(
          "appropriate_spread",
          [](const LayerSystem& layers, const std::string& g, int n) {
            return layers.appropriate_spread(layers.group()->parse_element(g), n);
          },
          py::arg("g"), py::arg("n"));

  py::class_<DeBruijnGraph>(m, "WindowGraph")
      .def_readonly("window", &DeBruijnGraph::window)
      .def_readonly("forbidden", &DeBruijnGraph::forbidden)
      .def_readonly("vertices", &DeBruijnGraph::vertices)
      .def_readonly("edges", &DeBruijnGraph::edges)
      .def("double_loop",
           [](const DeBruijnGraph& g) -> py::object {
             std::optional<DoubleLoop> dl = find_double_loop(g);
             if (!dl) return py::none();
             auto words = [&](const Cycle& c) {
               std::vector<std::string> out;
               for (int v : c)
                 out.push_back(g.vertices[static_cast<std::size_t>(v)]);
               return out;
             };
             return py::make_tuple(
                 words(dl->c0), words(dl->c1),
                 g.vertices[static_cast<std::size_t>(dl->shared_vertex)]);
           })
      .def("good_flags",
           [](const DeBruijnGraph& g) {
             GoodFlags flags = classify_good(g);
             return py::make_tuple(flags.right, flags.left);
           })
      .def("to_dot",
           [](const DeBruijnGraph& g) {
             return graph_to_dot(g, find_double_loop(g));
           })
      .def("classification_json",
           [](const DeBruijnGraph& g) { return classification_to_json_text(g); })
      .def("__repr__", [](const DeBruijnGraph& g) {
        return "WindowGraph(window=" + std::to_string(g.window) + ", vertices=" +
               std::to_string(g.vertices.size()) + ")";
      });

  m.def("build_graph", &build_debruijn, py::arg("forbidden"), py::arg("window"),
        "Window graph of the binary subshift avoiding the given words.");

  m.def(
      "epsilon_max",
      [](int graph_size) { return fraction(epsilon_max(graph_size)); },
      py::arg("graph_size"),
      "Largest grid tolerance keeping trace witnesses exclusive.");

  m.def(
      "encode_bits",
      [](const std::string& bits, const std::vector<std::string>& forbidden,
         int window, int factor) {
        DeBruijnGraph graph = build_debruijn(forbidden, window);
        RingScheme scheme;
        std::vector<int> values = to_bits(bits);
        BlockSchedule schedule =
            block_schedule(window, ScheduleGrowth::desk,
                           blocks_for(scheme, static_cast<int>(values.size())),
                           factor);
        SftWindow y = sft_encode(graph, schedule, scheme, values);
        return py::make_tuple(y.origin, y.symbols);
      },
      py::arg("bits"), py::arg("forbidden") = std::vector<std::string>{"11"},
      py::arg("window") = 2, py::arg("factor") = 4,
      "Write a bit string into a window; returns (origin, symbols).");

  m.def(
      "decode_bits",
      [](long long origin, const std::string& symbols, int count,
         const std::vector<std::string>& forbidden, int window, int factor) {
        DeBruijnGraph graph = build_debruijn(forbidden, window);
        RingScheme scheme;
        BlockSchedule schedule = block_schedule(
            window, ScheduleGrowth::desk, blocks_for(scheme, count), factor);
        SftWindow y;
        y.origin = origin;
        y.symbols = symbols;
        Rational eps =
            epsilon_max(static_cast<int>(graph.vertices.size())) / Rational(2);
        return sft_decode(graph, schedule, scheme, y, count, eps).bits;
      },
      py::arg("origin"), py::arg("symbols"), py::arg("count"),
      py::arg("forbidden") = std::vector<std::string>{"11"},
      py::arg("window") = 2, py::arg("factor") = 4,
      "Read bit positions back from a window; None where no witness holds.");

  m.def(
      "solve_fixture",
      [](const std::string& text, std::uint64_t budget) {
        GameSpec spec = parse_game_fixture(text);
        SolveResult result = solve(spec, budget);
        py::dict out;
        out["winner"] = player_name(result.winner);
        out["positions"] = result.positions;
        out["moves"] = result.strategy.table.size();
        out["verified"] = verify_strategy(spec, result.strategy);
        return out;
      },
      py::arg("text"), py::arg("budget") = 10000000ull,
      "Solve a fixture text; the winner's strategy is verified by play-out.");

  m.def(
      "transfer_rules",
      [](const std::string& text, std::uint64_t budget) {
        GameSpec rules = parse_game_fixture(text);
        GameSpec extended = extend_rules_game(rules);
        SolveResult lifted = solve(extended, budget);
        Strategy moved = transfer_rules_strategy(rules, lifted.strategy);
        py::dict out;
        out["extended_winner"] = player_name(lifted.winner);
        out["rules_winner"] = player_name(moved.owner);
        out["verified"] = verify_strategy(rules, moved);
        return out;
      },
      py::arg("text"), py::arg("budget") = 10000000ull,
      "Solve the rule-break extension and pull the strategy back.");

  m.def(
      "transfer_shift",
      [](int depth, int alphabet, const std::string& payoff, int horizon,
         std::uint64_t budget) {
        ShiftGameLayout board = toy_shift_layout(depth, alphabet);
        auto scorer = leaf_bitmap(depth, alphabet, payoff);
        SolveResult solved = solve(auxiliary_game(board, scorer), budget);
        ShiftTransfer transfer =
            transfer_shift_strategy(solved.strategy, board, horizon);
        GameSpec base = full_tree_game(depth, {alphabet}, scorer);
        py::dict out;
        out["aux_winner"] = player_name(solved.winner);
        out["aux_depth"] = board.aux_depth();
        out["aux_positions"] = solved.positions;
        out["base_winner"] = player_name(transfer.strategy.owner);
        out["verified"] = verify_strategy(base, transfer.strategy);
        return out;
      },
      py::arg("depth"), py::arg("alphabet") = 2, py::arg("payoff") = "all",
      py::arg("horizon") = -1, py::arg("budget") = 10000000ull,
      "Solve the toy board game and replay the strategy onto the base game.");
}
