// Command-line front end: solvers, oracles, generators, bench and verify.
//
// Exit status: 0 computed (decisions live in the JSON), 2 invalid input,
// 3 capacity exceeded.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hk/bench.hpp"
#include "hk/cliquegen.hpp"
#include "hk/generators.hpp"
#include "hk/io.hpp"
#include "hk/oracles.hpp"

namespace {

using hk::io::json;

struct Common {
  std::string input;
  int threads = 1;
  bool timings = false;
  std::uint64_t budget = 10'000'000;
};

void emit(json out, const Common& c, std::int64_t ns) {
  if (c.timings) out["timings"] = {{"solve_ns", ns}};
  std::cout << out.dump() << "\n";
}

template <class F>
std::int64_t timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count();
}

json witness_json(const std::optional<hk::Point>& w, int d) { return w ? hk::io::point_json(*w, d) : json(nullptr); }

void write_doc(const json& doc, const std::string& out) {
  if (out.empty()) {
    std::cout << doc.dump() << "\n";
  } else {
    hk::io::save_file(out, doc);
  }
}

void run_gkmp(const std::string& what, const std::string& mode, const Common& c, bool oracle) {
  const auto inst = hk::io::gkmp_from_json(hk::io::load_file(c.input));
  hk::gkmp::Options opt;
  opt.threads = c.threads;
  hk::OracleOptions oo;
  oo.budget = c.budget;
  json out;
  std::int64_t ns = 0;
  if (what == "volume") {
    hk::BigInt v;
    ns = timed([&] { v = oracle ? hk::oracle_volume(inst, oo) : hk::solve_volume(inst, opt); });
    out["volume"] = hk::io::decimal(v);
  } else if (what == "exists") {
    std::optional<hk::Point> w;
    ns = timed([&] { w = oracle ? hk::oracle_colorful_point(inst, oo) : hk::solve_exists_colorful(inst, opt); });
    out["exists"] = w.has_value();
    out["witness"] = witness_json(w, inst.d);
  } else {
    if (mode != "min" && mode != "max") throw hk::InputError("--mode must be min or max");
    const auto m = mode == "max" ? hk::DepthMode::Max : hk::DepthMode::Min;
    hk::DepthAnswer a;
    ns = timed([&] { a = oracle ? hk::oracle_depth(inst, m, oo) : hk::solve_depth(inst, m, opt); });
    out["mode"] = mode;
    out["value"] = a.value;
    out["witness"] = hk::io::point_json(a.witness, inst.d);
  }
  emit(out, c, ns);
}

void run_hausdorff(const std::string& what, std::int64_t r2, const Common& c, bool oracle) {
  const auto h = hk::io::hausdorff_from_json(hk::io::load_file(c.input));
  hk::HausdorffOptions opt;
  opt.threads = c.threads;
  hk::OracleOptions oo;
  oo.budget = c.budget;
  json out;
  std::int64_t ns = 0;
  if (what == "decide") {
    if (r2 < 0) throw hk::InputError("--r2 must be nonnegative");
    std::optional<hk::Point> w;
    ns = timed([&] { w = oracle ? hk::oracle_translation_feasible(h, r2, oo) : hk::decide_translation(h, r2, opt); });
    out["r2"] = r2;
    out["feasible"] = w.has_value();
    out["witness"] = witness_json(w, h.d);
  } else if (oracle) {
    hk::Coord best = 0;
    std::optional<hk::Point> w;
    ns = timed([&] {
      best = hk::oracle_min_hausdorff(h, oo);
      w = hk::oracle_translation_feasible(h, best, oo);
    });
    out["r2"] = best;
    out["witness"] = witness_json(w, h.d);
  } else {
    hk::HausdorffResult r;
    ns = timed([&] { r = hk::min_hausdorff_translation(h, opt); });
    out["r2"] = r.r2;
    out["witness"] = hk::io::point_json(r.witness, h.d);
  }
  emit(out, c, ns);
}

hk::Graph graph_from_provenance(const hk::Provenance& p) {
  hk::Graph g(p.n0);
  for (const auto& [u, v] : p.edges) g.add_edge(u, v);
  return g;
}

int run(int argc, char** argv) {
  CLI::App app{"Translational Hausdorff distance and colored Klee's measure toolkit"};
  app.require_subcommand(1);
  Common c;

  auto add_common = [&](CLI::App* sub, bool solver) {
    sub->add_option("--input", c.input, "instance file")->required();
    if (solver) {
      sub->add_option("--threads", c.threads, "solver threads")->check(CLI::Range(1, 256));
      sub->add_flag("--timings", c.timings, "report wall time");
    }
  };

  // gkmp / oracle gkmp
  std::string depth_mode = "max";
  auto add_gkmp = [&](CLI::App* parent, bool solver) {
    auto* g = parent->add_subcommand("gkmp", "colored Klee's measure queries");
    g->require_subcommand(1);
    for (const char* name : {"volume", "exists", "depth"}) {
      auto* s = g->add_subcommand(name);
      add_common(s, solver);
      if (!solver) s->add_option("--budget", c.budget, "grid point budget");
      if (std::string(name) == "depth") s->add_option("--mode", depth_mode, "min or max");
    }
    return g;
  };
  std::int64_t r2 = -1;
  auto add_hd = [&](CLI::App* parent, bool solver) {
    auto* h = parent->add_subcommand("hausdorff", "translational Hausdorff queries");
    h->require_subcommand(1);
    auto* dec = h->add_subcommand("decide");
    add_common(dec, solver);
    dec->add_option("--r2", r2, "doubled radius")->required();
    auto* dist = h->add_subcommand("dist");
    add_common(dist, solver);
    if (!solver) {
      dec->add_option("--budget", c.budget, "search budget");
      dist->add_option("--budget", c.budget, "search budget");
    }
    return h;
  };
  auto* gkmp_cmd = add_gkmp(&app, true);
  auto* hd_cmd = add_hd(&app, true);
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force reference answers");
  oracle_cmd->require_subcommand(1);
  auto* ogkmp = add_gkmp(oracle_cmd, false);
  auto* ohd = add_hd(oracle_cmd, false);

  // gen
  auto* gen = app.add_subcommand("gen", "seeded instance generators");
  gen->require_subcommand(1);
  int d = 2, n = 4, m = 4, colors = 2, eboxes = 0, g = 1, mu = 1;
  hk::Coord coord_max = 16;
  std::uint64_t seed = 0;
  std::string out_path, graph_path;
  auto* gen_h = gen->add_subcommand("hausdorff");
  gen_h->add_option("--d", d)->required();
  gen_h->add_option("--n", n)->required();
  gen_h->add_option("--m", m)->required();
  gen_h->add_option("--coord-max", coord_max);
  gen_h->add_option("--seed", seed);
  gen_h->add_option("--out", out_path);
  auto* gen_g = gen->add_subcommand("gkmp");
  gen_g->add_option("--d", d)->required();
  gen_g->add_option("--n", n)->required();
  gen_g->add_option("--colors", colors)->required();
  gen_g->add_option("--coord-max", coord_max);
  gen_g->add_option("--eboxes", eboxes);
  gen_g->add_option("--seed", seed);
  gen_g->add_option("--out", out_path);
  auto* gen_c = gen->add_subcommand("clique");
  gen_c->add_option("--graph", graph_path)->required();
  gen_c->add_option("--d", d)->required();
  gen_c->add_option("--g", g)->required();
  gen_c->add_option("--mu", mu)->required();
  gen_c->add_option("--out", out_path);

  // bench
  auto* bench = app.add_subcommand("bench", "run a benchmark ladder");
  std::string suite, csv;
  bench->add_option("--suite", suite, "suite name")->required();
  bench->add_option("--csv", csv, "CSV output path")->required();
  bench->add_option("--threads", c.threads)->check(CLI::Range(1, 256));

  // verify
  auto* verify = app.add_subcommand("verify", "self-check of a clique instance");
  verify->add_option("--input", c.input, "generated instance or graph file")->required();
  verify->add_option("--d", d);
  verify->add_option("--g", g);
  verify->add_option("--mu", mu);
  verify->add_option("--budget", c.budget, "lattice point budget");
  bool decide_too = false;
  verify->add_flag("--decide", decide_too, "also run the Hausdorff decision");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  auto chosen = [](CLI::App* parent) {
    for (auto* s : parent->get_subcommands()) {
      if (s->parsed()) return s;
    }
    return static_cast<CLI::App*>(nullptr);
  };

  if (gkmp_cmd->parsed()) {
    run_gkmp(chosen(gkmp_cmd)->get_name(), depth_mode, c, false);
  } else if (hd_cmd->parsed()) {
    run_hausdorff(chosen(hd_cmd)->get_name(), r2, c, false);
  } else if (oracle_cmd->parsed()) {
    if (ogkmp->parsed()) {
      run_gkmp(chosen(ogkmp)->get_name(), depth_mode, c, true);
    } else {
      run_hausdorff(chosen(ohd)->get_name(), r2, c, true);
    }
  } else if (gen->parsed()) {
    if (gen_h->parsed()) {
      write_doc(hk::io::to_json(hk::gen::random_hausdorff(d, n, m, coord_max, seed)), out_path);
    } else if (gen_g->parsed()) {
      hk::gen::GkmpParams p;
      p.d = d;
      p.n = n;
      p.colors = colors;
      p.coord_max = coord_max;
      p.eboxes = eboxes;
      write_doc(hk::io::to_json(hk::gen::random_gkmp(p, seed)), out_path);
    } else {
      const auto graph = hk::io::graph_from_json(hk::io::load_file(graph_path));
      write_doc(hk::io::to_json(hk::clique_instance(graph, d, g, mu)), out_path);
    }
  } else if (bench->parsed()) {
    const auto report = hk::bench::run_suite(suite, c.threads);
    std::ofstream f(csv);
    if (!f) throw hk::InputError("cannot write " + csv);
    hk::bench::write_csv(f, report.rows);
    json fits = json::array();
    for (const auto& fit : report.fits) {
      fits.push_back({{"command", fit.command},
                      {"d", fit.d},
                      {"points", fit.points},
                      {"slope", fit.slope},
                      {"theory_exponent", fit.theory},
                      {"end_to_end_exponent", fit.end_to_end}});
    }
    std::cout << json{{"suite", suite}, {"rows", report.rows.size()}, {"csv", csv}, {"fits", fits}}.dump() << "\n";
  } else if (verify->parsed()) {
    const auto doc = hk::io::load_file(c.input);
    json out;
    hk::Problem3Instance p3;
    if (hk::io::kind_of(doc) == "graph") {
      p3 = hk::build_problem3(hk::io::graph_from_json(doc), d, g, mu);
    } else {
      const auto prov = hk::io::provenance_from_json(doc);
      if (!prov) throw hk::InputError("$.provenance: missing; pass a graph file with --d --g --mu instead");
      p3 = hk::build_problem3(graph_from_provenance(*prov), prov->d, prov->g, prov->mu);
      const auto rebuilt = hk::problem3_to_hausdorff(p3);
      out["matches_file"] = rebuilt.hausdorff == hk::io::hausdorff_from_json(doc);
    }
    out["verified"] = hk::verify_instance(p3, c.budget);
    const auto red = hk::problem3_to_hausdorff(p3);
    out["expected"] = red.expected;
    out["shapes"] = red.shapes;
    out["translates"] = red.translates;
    out["orthants"] = red.cubes;
    if (decide_too) out["pipeline_verdict"] = hk::decide_translation(red.hausdorff, red.r2).has_value();
    std::cout << out.dump() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const hk::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hk::CapacityError& e) {
    std::cerr << "capacity exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
