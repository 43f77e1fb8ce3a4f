#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "hk/bench.hpp"
#include "hk/generators.hpp"
#include "hk/io.hpp"
#include "hk/oracles.hpp"
#include "test_util.hpp"

using namespace hk;
using namespace hk::test;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run_tool(const std::string& args) {
  const std::string cmd = std::string(HKTOOL_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / ("hk_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
  return s;
}

std::string input_error(const std::string& text) {
  try {
    io::gkmp_from_json(io::parse(text));
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("cli_io") {
  TEST_CASE("round trips") {
    for (int it = 0; it < 50; ++it) {
      gen::GkmpParams p;
      p.d = 2 + it % 6;
      p.n = 10;
      p.colors = 1 + it % 4;
      p.eboxes = it % 4;
      p.free_percent = 30;
      auto g = gen::random_gkmp(p, it);
      for (std::size_t i = 0; i < g.eboxes.size(); ++i) g.eboxes[i].weight = static_cast<std::int64_t>(i) - 1;
      CHECK(io::gkmp_from_json(io::parse(io::to_json(g).dump())) == g);

      const auto h = gen::random_hausdorff(2 + it % 4, 1 + it % 7, 1 + it % 5, 50, it);
      CHECK(io::hausdorff_from_json(io::parse(io::to_json(h).dump())) == h);

      const auto gr = gen::random_graph(3 + it % 6, 50, it);
      CHECK(io::graph_from_json(io::parse(io::to_json(gr).dump())) == gr);
    }
  }

  TEST_CASE("reduction output carries provenance") {
    const Graph G = gen::random_graph(4, 60, 2);
    const auto out = clique_instance(G, 2, 1, 1);
    const auto doc = io::to_json(out);
    CHECK(io::kind_of(doc) == "hausdorff");
    CHECK(io::hausdorff_from_json(doc) == out.hausdorff);
    const auto prov = io::provenance_from_json(doc);
    REQUIRE(prov.has_value());
    CHECK(prov->edges == G.edges());
    CHECK(prov->graph_hash == G.hash());
    CHECK(prov->d == 2);
    CHECK(prov->mu == 1);
    CHECK_FALSE(io::provenance_from_json(io::to_json(out.hausdorff)).has_value());
  }

  TEST_CASE("schema errors name the offending field") {
    CHECK(input_error(R"({"kind":"gkmp","d":2})").find("n_colors") != std::string::npos);
    CHECK(input_error(R"({"kind":"gkmp","d":2,"n_colors":1,"clip":{"lo":[0,0],"hi":[4,4]},
      "orthants":[{"color":0,"lo":[1,null],"hi":[2,null]}],"eboxes":[]})")
              .find("$.orthants[0]") != std::string::npos);
    CHECK(input_error(R"({"kind":"gkmp","d":2,"n_colors":1,"clip":{"lo":[0,0],"hi":[4,4]},
      "orthants":[{"color":"red","lo":[1,null],"hi":[null,null]}],"eboxes":[]})")
              .find("color") != std::string::npos);
    CHECK(input_error(R"({"kind":"gkmp",)").find("<input>") != std::string::npos);
    CHECK_THROWS_AS(io::kind_of(io::parse(R"({"kind":"polygon"})")), InputError);
    CHECK_THROWS_AS(io::hausdorff_from_json(io::parse(R"({"kind":"hausdorff","d":2,"P":[[0]],"Q":[[0,0]]})")),
                    InputError);
    CHECK_THROWS_AS(io::graph_from_json(io::parse(R"({"kind":"graph","n0":3,"edges":[[0,0]]})")), InputError);
    CHECK_THROWS_AS(io::load_file("/nonexistent/file.json"), InputError);
  }

  TEST_CASE("decimal volumes") {
    CHECK(io::decimal(BigInt(24)) == "24");
    BigInt big = 1;
    for (int i = 0; i < 200; ++i) big *= 2;
    CHECK(io::decimal(big).size() == 61);
  }

  TEST_CASE("generators are deterministic and validate") {
    gen::GkmpParams p;
    p.d = 4;
    p.colors = 3;
    p.n = 12;
    CHECK(gen::random_gkmp(p, 7) == gen::random_gkmp(p, 7));
    CHECK_FALSE(gen::random_gkmp(p, 7) == gen::random_gkmp(p, 8));
    const auto g = gen::random_gkmp(p, 7);
    g.validate();
    std::vector<int> per_color(3, 0);
    for (const auto& o : g.orthants) ++per_color[o.color];
    for (int c : per_color) CHECK(c > 0);
    CHECK_NOTHROW(oracle_volume(g));
    p.n = 0;
    CHECK_THROWS_AS(gen::random_gkmp(p, 1), InputError);
    CHECK(gen::random_hausdorff(3, 4, 5, 20, 1) == gen::random_hausdorff(3, 4, 5, 20, 1));
    CHECK_THROWS_AS(gen::random_hausdorff(3, 0, 5, 20, 1), InputError);
  }

  TEST_CASE("bench helpers") {
    CHECK(bench::digest("abc") == bench::digest("abc"));
    CHECK(bench::digest("abc").size() == 16);
    CHECK(bench::loglog_slope({1, 2, 4, 8}, {3, 12, 48, 192}) == doctest::Approx(2.0));
    std::ostringstream csv;
    bench::write_csv(csv, {{"volume", 4, 250, 100, 1, 5, "00"}});
    CHECK(csv.str().rfind("command,d,N,n_colors,seed,wall_ns,answer_digest\n", 0) == 0);
    CHECK_THROWS_AS(bench::run_suite("nope"), InputError);
    const auto a = bench::run_suite("smoke");
    const auto b = bench::run_suite("smoke", 2);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].answer_digest == b.rows[i].answer_digest);
  }

  TEST_CASE("command line examples") {
    const auto dir = scratch_dir();
    const auto v24 = write(dir / "v24.json", io::to_json(example24()).dump());
    const auto h = write(dir / "h.json", R"({"kind":"hausdorff","d":2,"P":[[0,0],[2,0]],"Q":[[0,0]]})");

    auto r = run_tool("gkmp volume --input " + v24);
    CHECK(r.status == 0);
    CHECK(trim(r.out) == R"({"volume":"24"})");
    CHECK(trim(run_tool("oracle gkmp volume --input " + v24).out) == R"({"volume":"24"})");

    r = run_tool("hausdorff dist --input " + h);
    CHECK(r.status == 0);
    CHECK(trim(r.out) == R"({"r2":2,"witness":[-2,0]})");
    const auto dec = io::parse(run_tool("hausdorff decide --input " + h + " --r2 1").out);
    CHECK(dec["feasible"] == false);
    CHECK(io::parse(run_tool("oracle hausdorff dist --input " + h).out)["r2"] == 2);

    const auto depth = io::parse(run_tool("gkmp depth --mode min --input " + v24).out);
    CHECK(depth["value"] == 0);
    CHECK(io::parse(run_tool("gkmp exists --input " + v24).out)["exists"] == true);
    CHECK(io::parse(run_tool("gkmp volume --timings --input " + v24).out).contains("timings"));

    const auto a = dir / "a.json";
    const auto b = dir / "b.json";
    CHECK(run_tool("gen gkmp --d 4 --colors 3 --n 12 --seed 7 --out " + a.string()).status == 0);
    CHECK(run_tool("gen gkmp --d 4 --colors 3 --n 12 --seed 7 --out " + b.string()).status == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(slurp(a).empty());
    CHECK(run_tool("gen gkmp --d 4 --colors 3 --n 0 --seed 7").status == 2);

    const auto solver = io::parse(run_tool("gkmp volume --input " + a.string()).out);
    const auto oracle = io::parse(run_tool("oracle gkmp volume --input " + a.string()).out);
    CHECK(solver == oracle);

    CHECK(run_tool("gkmp volume --input " + write(dir / "bad.json", R"({"kind":"gkmp","d":2})")).status == 2);
    CHECK(run_tool("gkmp volume --input " + write(dir / "broken.json", "{")).status == 2);
    CHECK(run_tool("gkmp volume").status == 2);
    CHECK(run_tool("oracle gkmp volume --budget 3 --input " + a.string()).status == 3);

    const auto graph = write(dir / "g.json", io::to_json(Graph::complete(4)).dump());
    const auto clique = dir / "clique.json";
    CHECK(run_tool("gen clique --graph " + graph + " --d 2 --g 1 --mu 1 --out " + clique.string()).status == 0);
    const auto ver = io::parse(run_tool("verify --decide --input " + clique.string()).out);
    CHECK(ver["verified"] == true);
    CHECK(ver["matches_file"] == true);
    CHECK(ver["expected"] == true);
    CHECK(ver["pipeline_verdict"] == true);
    const auto ver2 = io::parse(run_tool("verify --input " + graph + " --d 2 --g 2 --mu 2").out);
    CHECK(ver2["verified"] == true);
    CHECK(ver2["expected"] == true);

    fs::remove_all(dir);
  }
}
