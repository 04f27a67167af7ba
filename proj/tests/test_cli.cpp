#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "cfi/cfi.hpp"
#include "doctest.h"
#include "structures/json_io.hpp"

using namespace ppw;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

fs::path scratch() {
  static fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("ppw_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

Run cli(const std::string& args, const std::string& input = "") {
  auto out = scratch() / "out.txt", err = scratch() / "err.txt", in = scratch() / "in.txt";
  std::ofstream(in) << input;
  std::string cmd = std::string(PPW_CLI) + " " + args + " <" + in.string() + " >" + out.string() + " 2>" + err.string();
  int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string file(const std::string& name) { return (scratch() / name).string(); }

}  // namespace

TEST_CASE("template output and round trip") {
  auto r = cli("template --kind nu --params 3");
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["relations"]["R0"].size() == 9);
  CHECK(structure_to_json(structure_from_json(j)) == j);
  CHECK(cli("template --kind nu --params 3").out == r.out);
  CHECK(cli("template --kind parity --params 3").code == 0);
  CHECK(cli("template --kind nu-star --params 3,3").code == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli("").code == 2);
  CHECK(cli("template --kind nu --params 3 --bogus").code == 2);
  CHECK(cli("template --kind nu --params x").code == 2);
  CHECK(cli("template --kind torus --params 3").code == 2);
  CHECK(cli("verify --lemma no-such-lemma").code == 2);
  CHECK(cli("instance --graph /nonexistent --variant nu:3").code == 2);
  auto r = cli("verify --lemma bp-invariant --variant maltsev:3");
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("verify reports coverage and seed") {
  auto r = cli("verify --lemma base-separating");
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["checked"] == 19683);
  CHECK(j["coverage"] == "exhaustive");
  CHECK(r.err.find("seed 0") != std::string::npos);
  auto s = cli("verify --lemma local-isom --samples 50 --seed 7");
  REQUIRE(s.code == 0);
  CHECK(json::parse(s.out)["coverage"] == "sampled");
  CHECK(json::parse(s.out)["details"]["seed"] == 7);
  CHECK(cli("verify --lemma pairs --params 3,3").out == cli("verify --lemma pairs:3,3").out);
}

TEST_CASE("graph, instance and csp on K33") {
  std::vector<std::pair<int, int>> e;
  for (int a = 0; a < 3; ++a)
    for (int b = 3; b < 6; ++b) e.emplace_back(a, b);
  write_json_file(file("k33.json"), graph_to_json(make_graph({"a1", "a2", "a3", "b1", "b2", "b3"}, e)));
  REQUIRE(cli("template --kind nu --params 3 -o " + file("b3.json")).code == 0);
  REQUIRE(cli("instance --graph " + file("k33.json") + " --variant nu:3 --twist -o " + file("t.json")).code == 0);
  REQUIRE(cli("instance --graph " + file("k33.json") + " --variant nu:3 -o " + file("u.json")).code == 0);

  auto t = cli("csp --instance " + file("t.json") + " --template " + file("b3.json"));
  CHECK(t.code == 0);
  auto tj = json::parse(t.out);
  CHECK(tj["verdict"] == "UNSAT");
  CHECK(tj["oracle"] == "UNSAT");
  CHECK(tj["agreement"] == true);

  auto u = cli("csp --instance " + file("u.json") + " --template " + file("b3.json"));
  CHECK(u.code == 0);
  CHECK(json::parse(u.out)["verdict"] == "SAT");
  CHECK(json::parse(u.out)["witness_verified"] == true);

  // a tiny budget without an applicable oracle
  auto bare = cfi_from_json(read_json_file(file("t.json")));
  write_json_file(file("bare.json"), structure_to_json(bare.structure));
  CHECK(cli("csp --instance " + file("bare.json") + " --template " + file("b3.json") + " --budget 3").code == 3);
}

TEST_CASE("graph connectivity report") {
  auto r = cli("graph --kind composite --params 3,4 --connectivity");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["vertices"].size() == 40);
  auto rep = json::parse(r.err);
  CHECK(rep["edge_connectivity"] == 3);
  CHECK(rep["bipartite"] == true);
}

TEST_CASE("close and reduce") {
  Structure s = empty_structure({{"R", 3}}, 3);
  s.relations[0] = {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}};
  write_json_file(file("s.json"), structure_to_json(s));
  auto c = cli("close --structure " + file("s.json") + " --family nu:3");
  REQUIRE(c.code == 0);
  auto closed = structure_from_json(json::parse(c.out));
  CHECK(closed.relations[0].size() >= 3);
  auto m = cli("close --structure " + file("s.json") + " --family maltsev");
  CHECK(m.code == 0);
  auto r = cli("reduce --structure " + file("s.json") + " --ell 3 --division [[1,1],[2,2],[3,3]]");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["vocab"].size() == 3);
  CHECK(cli("reduce --structure " + file("s.json") + " --ell 3 --division [[1,2]]").code == 2);
}

TEST_CASE("game run, replay and tampering") {
  auto run = cli("game run --graph biclique-minus-matching:3 --variant maltsev:3 --rounds 15 --seed 4 -o " +
                 file("m.trace"));
  REQUIRE(run.code == 0);
  CHECK(run.err.find("Duplicator survived 15 rounds") != std::string::npos);
  auto rep = cli("game replay " + file("m.trace"));
  CHECK(rep.code == 0);
  CHECK(json::parse(rep.out)["identical"] == true);

  auto text = slurp(file("m.trace"));
  auto at = text.find("\"pick\":");
  REQUIRE(at != std::string::npos);
  auto nl = text.find('\n');
  std::string tampered = text.substr(0, nl + 1) + "{\"type\":\"round\"}" + text.substr(text.find('\n', nl + 1));
  std::ofstream(file("bad.trace")) << tampered;
  auto bad = cli("game replay " + file("bad.trace"));
  CHECK(bad.code == 1);
  CHECK(json::parse(bad.out)["first_difference"] == 2);

  auto bp = cli("game run --graph composite:3,7 --variant nu:3 --rounds 10 --seed 1");
  CHECK(bp.code == 0);
  CHECK(bp.out == cli("game run --graph composite:3,7 --variant nu:3 --rounds 10 --seed 1").out);
}

TEST_CASE("exhaustive spoiler and one-round verification") {
  auto r = cli("game run --graph composite:3,7 --variant nu:3 --k 2 --r 1 --spoiler exhaustive --depth 1");
  CHECK(r.code == 0);
  auto v = cli("game verify-round --graph biclique-minus-matching:3 --variant maltsev:3 --k 1");
  CHECK(v.code == 0);
  auto j = json::parse(v.out);
  CHECK(j["coverage"] == "exhaustive");
  CHECK(j["checked"] == 96);
}

TEST_CASE("interactive play") {
  auto first = cli("game run --graph biclique-minus-matching:3 --variant maltsev:3 --rounds 1 --seed 2");
  REQUIRE(first.code == 0);
  std::stringstream lines(first.out);
  std::string header, round;
  std::getline(lines, header);
  std::getline(lines, round);
  auto j = json::parse(round);
  std::string move = j["side"].get<std::string>();
  for (std::size_t i = 0; i < j["vars"].size(); ++i)
    move += " " + j["vars"][i].get<std::string>() + "=" + j["atoms"][i].get<std::string>();
  std::string script = "A x1=nonsense\n" + move + "\n" + (j["P"].size() > 1 ? "1\n" : "") + "quit\n";
  auto r = cli("game play --graph biclique-minus-matching:3 --variant maltsev:3 -o " + file("play.trace"), script);
  CHECK(r.code == 0);
  CHECK(r.err.find("error:") != std::string::npos);
  CHECK(r.err.find("Duplicator survived 1 rounds") != std::string::npos);
  auto rep = cli("game replay " + file("play.trace"));
  CHECK(rep.code == 0);
}
