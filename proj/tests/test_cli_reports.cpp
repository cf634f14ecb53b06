#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "shiftgame/layers.hpp"

using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;  // stdout and stderr, merged
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(SHIFTGAME_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "shiftgame-cli-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("folner tables carry exact ratios, bounds, and margins") {
  // On the line with g=2, n-1 of the n+1 classes of A_n translate inside the
  // ball, so the ratio meets the bound with margin zero from n=1 on.
  RunResult r = run_cli("wa folner --group Z --n 8 --g 2");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "# wa folner group=Z g=2 n=8\n"
        "n,ratio,bound,margin\n"
        "0,0,-1,1\n"
        "1,0,0,0\n"
        "2,1/3,1/3,0\n"
        "3,1/2,1/2,0\n"
        "4,3/5,3/5,0\n"
        "5,2/3,2/3,0\n"
        "6,5/7,5/7,0\n"
        "7,3/4,3/4,0\n"
        "8,7/9,7/9,0\n");
}

TEST_CASE("spread tables stay within the universal bound") {
  // A generator sends the length-r class onto lengths r-1 and r+1, so its
  // spread saturates at 2 once both neighbors exist.
  RunResult r = run_cli("wa spread --group F2 --radius 1 --n 3");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "g,glen,n,spread,bound\n"));
  CHECK(contains(r.out, "e,0,0,1,2\n"));
  CHECK(contains(r.out, "e,0,3,1,2\n"));
  CHECK(contains(r.out, "a,1,0,1,4\n"));
  CHECK(contains(r.out, "a,1,1,2,4\n"));
  CHECK(contains(r.out, "A,1,3,2,4\n"));
}

TEST_CASE("layout JSON reloads into the same ring assignment") {
  auto path = scratch("layout.json");
  RunResult r = run_cli("wa layout --group Z --pairing blocked --j-count 2 --out " +
                        path.string());
  REQUIRE(r.code == 0);
  shiftgame::RingLayout layout = shiftgame::RingLayout::from_json_text(slurp(path));
  CHECK(layout.pairing() == shiftgame::PairingKind::blocked);
  CHECK(layout.j_count() == 2);
  CHECK(layout.layers().group()->describe() == "Z");
  CHECK(layout.ring_index(shiftgame::Player::I, 1, 0) == 6);
  CHECK(layout.ring_index(shiftgame::Player::II, 0, 1) == 3);
}

TEST_CASE("codec reports are reproducible from config and seed") {
  auto a = scratch("roundtrip-a.csv"), b = scratch("roundtrip-b.csv");
  RunResult first =
      run_cli("codec roundtrip --cases 8 --seed 11 --out " + a.string());
  RunResult second =
      run_cli("codec roundtrip --cases 8 --seed 11 --out " + b.string());
  CHECK(first.code == 0);
  CHECK(second.code == 0);
  std::string report = slurp(a);
  CHECK(report == slurp(b));
  CHECK(contains(report, "seed=11"));
  std::istringstream lines(report);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'c') continue;
    ++rows;
    CHECK(line.back() == '1');  // match column
  }
  CHECK(rows == 8);

  auto c = scratch("invariance-a.csv"), d = scratch("invariance-b.csv");
  first = run_cli("codec invariance --cases 8 --seed 3 --out " + c.string());
  second = run_cli("codec invariance --cases 8 --seed 3 --out " + d.string());
  CHECK(first.code == 0);
  CHECK(second.code == 0);
  CHECK(slurp(c) == slurp(d));
  CHECK(contains(slurp(c), ",1\n"));
}

TEST_CASE("graph export highlights the double loop") {
  auto dot = scratch("graph.dot");
  RunResult r = run_cli("sft graph --forbidden 11 --N 2 --dot " + dot.string());
  CHECK(r.code == 0);
  CHECK(r.out ==
        "vertices 3, edges 5\n"
        "double loop: 00 and 00;01;10, shared 00\n"
        "good right 3 of 3, good left 3 of 3\n");
  CHECK(slurp(dot) ==
        "// sft graph forbidden=11 N=2\n"
        "digraph sft {\n"
        "  rankdir=LR;\n"
        "  \"00\" [style=bold, peripheries=2];\n"
        "  \"01\" [style=bold];\n"
        "  \"10\" [style=bold];\n"
        "  \"00\" -> \"00\" [color=red, penwidth=2];\n"
        "  \"00\" -> \"01\" [color=red, penwidth=2];\n"
        "  \"01\" -> \"10\" [color=red, penwidth=2];\n"
        "  \"10\" -> \"00\" [color=red, penwidth=2];\n"
        "  \"10\" -> \"01\";\n"
        "}\n");
}

TEST_CASE("tolerance table lists the grid caps") {
  RunResult r = run_cli("sft eps --max-size 4");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "# sft eps max-size=4\n"
        "size,eps,binding\n"
        "1,839/10000,2\n"
        "2,91/2000,2\n"
        "3,39/1250,2\n"
        "4,119/5000,2\n");
}

TEST_CASE("windows encode to files that decode back") {
  auto window = scratch("window.json");
  RunResult enc = run_cli("sft encode --bits 10110 --out " + window.string());
  REQUIRE(enc.code == 0);
  RunResult dec = run_cli("sft decode --in " + window.string() +
                          " --count 5 --expect 10110");
  CHECK(dec.code == 0);
  json report = json::parse(dec.out);
  CHECK(report["bits"] == json::array({1, 0, 1, 1, 0}));
  CHECK(report["config"]["options"]["eps"] == "39/2500");

  RunResult wrong = run_cli("sft decode --in " + window.string() +
                            " --count 5 --expect 10111");
  CHECK(wrong.code == 1);
  CHECK(contains(wrong.out, "first failing assertion: bit 4 decoded as 0"));
}

TEST_CASE("game verdicts report winners and verification") {
  auto fixture = scratch("tree.txt");
  {
    std::ofstream out(fixture);
    out << "depth 3\nalphabet 3\nrule 0[0-2][01]|1[01]0\npayoff 10010110\n";
  }
  RunResult solve = run_cli("game solve --fixture " + fixture.string());
  CHECK(solve.code == 0);
  json verdict = json::parse(solve.out);
  CHECK(verdict["winner"] == "I");
  CHECK(verdict["positions"] == 16);  // every rule-tree node once
  CHECK(verdict["strategyMoves"] == 4);
  CHECK(verdict["verified"] == true);

  RunResult transfer = run_cli("game transfer-rules --fixture " + fixture.string());
  CHECK(transfer.code == 0);
  verdict = json::parse(transfer.out);
  CHECK(verdict["rulesWinner"] == "I");
  CHECK(verdict["extendedWinner"] == "I");
  CHECK(verdict["extendedPositions"] == 40);  // the full ternary tree
  CHECK(verdict["verified"] == true);

  RunResult shift = run_cli("game transfer-shift --depth 1 --payoff 10");
  CHECK(shift.code == 0);
  verdict = json::parse(shift.out);
  CHECK(verdict["auxWinner"] == "I");
  CHECK(verdict["auxDepth"] == 9);
  CHECK(verdict["auxPositions"] == 1023);
  CHECK(verdict["baseWinner"] == "I");
  CHECK(verdict["traceRounds"] == 1);
  CHECK(verdict["verified"] == true);
}

TEST_CASE("bad configs exit with usage errors") {
  RunResult r = run_cli("wa folner --group BOGUS");
  CHECK(r.code == 2);
  CHECK(contains(r.out, "usage: unknown group expression: BOGUS"));

  r = run_cli("sft decode --in " + scratch("missing.json").string() + " --count 1");
  CHECK(r.code == 2);
  CHECK(contains(r.out, "usage: cannot open input file"));

  r = run_cli("game solve");  // --fixture is required
  CHECK(r.code != 0);
}
