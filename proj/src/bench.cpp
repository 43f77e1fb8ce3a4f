#include "hk/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "hk/generators.hpp"
#include "hk/gkmp.hpp"
#include "hk/hausdorff.hpp"

namespace hk::bench {

namespace {

struct Step {
  std::string command;
  int d = 0;
  int size = 0;  // suite-specific size parameter
  std::uint64_t seed = 0;
};

std::map<std::string, std::vector<Step>> suites() {
  std::map<std::string, std::vector<Step>> s;
  for (int n : {250, 500, 1000, 2000}) s["volume-d4"].push_back({"volume", 4, n, 1000});
  for (int n : {240, 480, 960, 1920}) s["volume-d3"].push_back({"volume", 3, n, 1000});
  for (int n : {100, 200, 400, 800}) s["exists-d3"].push_back({"exists", 3, n, 2000});
  for (int n : {100, 200, 400, 800}) s["depth-d3"].push_back({"depth-max", 3, n, 3000});
  for (int n : {4, 8, 16, 32}) s["hausdorff-d2"].push_back({"hausdorff-dist", 2, n, 4000});
  for (int n : {24, 48, 96}) s["smoke"].push_back({"volume", 3, n, 5000});
  for (int n : {4, 8}) s["smoke"].push_back({"hausdorff-dist", 2, n, 5001});
  return s;
}

template <class F>
std::int64_t time_ns(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
}

std::string point_text(const Point& p, int d) {
  std::string s;
  for (int k = 0; k < d; ++k) s += std::to_string(p[k]) + ",";
  return s;
}

BenchRow run_step(const Step& st, int threads) {
  BenchRow row;
  row.command = st.command;
  row.d = st.d;
  row.seed = st.seed;
  gkmp::Options opt;
  opt.threads = threads;
  std::string answer;
  if (st.command == "volume") {
    const int boxes = std::max(1, st.size / (2 * st.d));
    // Sides scale so that the expected coverage stays moderate across the ladder.
    const Coord side = static_cast<Coord>(1'000'000 * 3.0 / std::pow(boxes, 1.0 / st.d));
    const auto inst = gen::klee_complement(st.d, boxes, 1'000'000, st.seed, nullptr, side);
    row.N = inst.orthants.size();
    row.n_colors = inst.n_colors;
    row.wall_ns = time_ns([&] { answer = solve_volume(inst, opt).str(); });
  } else if (st.command == "exists" || st.command == "depth-max") {
    gen::GkmpParams p;
    p.d = st.d;
    p.n = st.size;
    p.colors = std::max(2, st.size / 20);
    p.coord_max = 1'000'000;
    p.eboxes = st.size / 10;
    auto inst = gen::random_gkmp(p, st.seed);
    row.N = inst.orthants.size() + inst.eboxes.size();
    row.n_colors = inst.n_colors;
    if (st.command == "exists") {
      row.wall_ns = time_ns([&] {
        const auto w = solve_exists_colorful(inst, opt);
        answer = w ? point_text(*w, st.d) : "none";
      });
    } else {
      inst.eboxes.clear();
      row.N = inst.orthants.size();
      row.wall_ns = time_ns([&] {
        const auto a = solve_depth(inst, DepthMode::Max, opt);
        answer = std::to_string(a.value) + ":" + point_text(a.witness, st.d);
      });
    }
  } else {
    const auto h = gen::random_hausdorff(st.d, st.size, st.size, 1000, st.seed);
    row.N = h.P.size() * h.Q.size();
    row.n_colors = static_cast<int>(h.P.size());
    HausdorffOptions ho;
    ho.threads = threads;
    row.wall_ns = time_ns([&] {
      const auto r = min_hausdorff_translation(h, ho);
      answer = std::to_string(r.r2) + ":" + point_text(r.witness, st.d);
    });
  }
  row.answer_digest = digest(answer);
  return row;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, steps] : suites()) names.push_back(name);
  return names;
}

BenchReport run_suite(const std::string& name, int threads) {
  const auto all = suites();
  const auto it = all.find(name);
  if (it == all.end()) throw InputError("bench: unknown suite \"" + name + "\"");
  BenchReport report;
  for (const auto& st : it->second) report.rows.push_back(run_step(st, threads));
  report.fits = fit_slopes(report.rows);
  return report;
}

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "command,d,N,n_colors,seed,wall_ns,answer_digest\n";
  for (const auto& r : rows) {
    out << r.command << ',' << r.d << ',' << r.N << ',' << r.n_colors << ',' << r.seed << ',' << r.wall_ns << ','
        << r.answer_digest << '\n';
  }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  return den == 0 ? 0 : (n * sxy - sx * sy) / den;
}

std::vector<SlopeFit> fit_slopes(const std::vector<BenchRow>& rows) {
  std::map<std::pair<std::string, int>, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : rows) {
    auto& g = groups[{r.command, r.d}];
    g.first.push_back(static_cast<double>(r.N));
    g.second.push_back(static_cast<double>(std::max<std::int64_t>(r.wall_ns, 1)));
  }
  std::vector<SlopeFit> fits;
  for (const auto& [key, xy] : groups) {
    SlopeFit f;
    f.command = key.first;
    f.d = key.second;
    f.points = xy.first.size();
    f.slope = loglog_slope(xy.first, xy.second);
    f.theory = key.second / 2.0;
    f.end_to_end = key.second;
    fits.push_back(f);
  }
  return fits;
}

std::string digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hk::bench
