// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "hk/bench.hpp"
#include "hk/cliquegen.hpp"
#include "hk/generators.hpp"
#include "hk/oracles.hpp"

using namespace hk;

namespace {

// Pinned parameters.
constexpr int kVolumePerDim = 1000;
constexpr int kExistsPerDim = 1000;
constexpr int kCornerPerDim = 100;
constexpr int kDepthPerDim = 500;
constexpr int kHausdorffTotal = 300;
constexpr int kMaxOrthants = 40;
constexpr int kMaxColors = 6;
constexpr Coord kCoordMax = 16;
constexpr int kMaxEboxes = 4;
constexpr std::uint64_t kOracleBudget = 100'000'000;
constexpr double kVolumeSeconds = 600;
constexpr double kCliqueSeconds = 900;
constexpr int kSplitsPerDim = 10'000;
constexpr double kWeightEpsilon = 1e-9;  // relative slack on the decay bound
constexpr double kBenchSeconds = 120;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

GkmpInstance random_instance(std::mt19937_64& rng, int d, bool eboxes) {
  gen::GkmpParams p;
  p.d = d;
  p.colors = static_cast<int>(gen::uniform(rng, 1, kMaxColors));
  p.n = static_cast<int>(gen::uniform(rng, p.colors, kMaxOrthants));
  p.coord_max = kCoordMax;
  p.eboxes = eboxes ? static_cast<int>(gen::uniform(rng, 0, kMaxEboxes)) : 0;
  return gen::random_gkmp(p, rng());
}

OracleOptions oracle_opts() {
  OracleOptions o;
  o.budget = kOracleBudget;
  return o;
}

void criterion1() {
  const auto t0 = Clock::now();
  int mismatches = 0, nonzero = 0, total = 0;
  std::string first_bad;
  for (int d = 2; d <= 5; ++d) {
    std::mt19937_64 rng(1000 + d);
    for (int i = 0; i < kVolumePerDim; ++i) {
      const auto inst = random_instance(rng, d, true);
      const BigInt s = solve_volume(inst);
      const BigInt o = oracle_volume(inst, oracle_opts());
      ++total;
      if (o != 0) ++nonzero;
      if (s != o) {
        ++mismatches;
        if (first_bad.empty()) first_bad = " first mismatch d=" + std::to_string(d) + " i=" + std::to_string(i);
      }
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream msg;
  msg << "volume vs oracle: " << total << " instances, " << mismatches << " mismatches, " << nonzero
      << " nonzero, " << secs << " s (limit " << kVolumeSeconds << " s)" << first_bad;
  report(1, mismatches == 0 && secs <= kVolumeSeconds, msg.str());
}

void criterion2() {
  int mismatches = 0, bad_witness = 0, some = 0, total = 0, corner_fail = 0;
  for (int d = 2; d <= 5; ++d) {
    std::mt19937_64 rng(2000 + d);
    for (int i = 0; i < kExistsPerDim; ++i) {
      const auto inst = random_instance(rng, d, true);
      const auto s = solve_exists_colorful(inst);
      const auto o = oracle_colorful_point(inst, oracle_opts());
      ++total;
      if (s.has_value() != o.has_value()) ++mismatches;
      if (s) {
        ++some;
        if (!is_colorful_doubled(inst, *s)) ++bad_witness;
      }
    }
    for (int i = 0; i < kCornerPerDim; ++i) {
      const auto inst = gen::corner_touching(d, 2 + i % 3, 4 + i % 12, kCoordMax, 3000 + 100 * d + i);
      const auto s = solve_exists_colorful(inst);
      if (!s || !is_colorful_doubled(inst, *s) || solve_volume(inst) != 0) ++corner_fail;
    }
  }
  std::ostringstream msg;
  msg << "exists vs oracle: " << total << " instances (" << some << " nonempty), " << mismatches
      << " verdict mismatches, " << bad_witness << " bad witnesses; corner cases: " << 4 * kCornerPerDim
      << " run, " << corner_fail << " failed";
  report(2, mismatches == 0 && bad_witness == 0 && corner_fail == 0, msg.str());
}

void criterion3() {
  int mismatches = 0, bad_witness = 0, total = 0;
  for (int d = 2; d <= 4; ++d) {
    std::mt19937_64 rng(4000 + d);
    for (int i = 0; i < kDepthPerDim; ++i) {
      const auto inst = random_instance(rng, d, false);
      for (auto mode : {DepthMode::Min, DepthMode::Max}) {
        const auto s = solve_depth(inst, mode);
        const auto o = oracle_depth(inst, mode, oracle_opts());
        ++total;
        if (s.value != o.value) ++mismatches;
        if (depth_at_doubled(inst, s.witness) != s.value) ++bad_witness;
      }
    }
  }
  std::ostringstream msg;
  msg << "depth vs oracle: " << total << " queries (min and max), " << mismatches << " mismatches, "
      << bad_witness << " bad witnesses";
  report(3, mismatches == 0 && bad_witness == 0, msg.str());
}

void criterion4() {
  int mismatches = 0, loose = 0, not_tight = 0;
  std::mt19937_64 rng(5000);
  for (int i = 0; i < kHausdorffTotal; ++i) {
    const int d = 2 + i % 3;
    const int n = static_cast<int>(gen::uniform(rng, 1, 8));
    const int m = static_cast<int>(gen::uniform(rng, 1, 8));
    const auto h = gen::random_hausdorff(d, n, m, 20, rng());
    const auto r = min_hausdorff_translation(h);
    if (r.r2 != oracle_min_hausdorff(h, oracle_opts())) ++mismatches;
    if (directed_hausdorff_doubled(h, r.witness) != r.r2) ++loose;
    if (r.r2 > 0 && decide_translation(h, r.r2 - 1).has_value()) ++not_tight;
  }
  std::ostringstream msg;
  msg << "hausdorff optimum vs oracle: " << kHausdorffTotal << " instances, " << mismatches << " mismatches, "
      << loose << " witnesses off the optimum, " << not_tight << " feasible at r2*-1";
  report(4, mismatches == 0 && loose == 0 && not_tight == 0, msg.str());
}

void criterion5() {
  const auto t0 = Clock::now();
  int mismatches = 0, unverified = 0, yes = 0, total = 0;
  auto run = [&](const Graph& G, int d, int g, int mu) {
    const auto p3 = build_problem3(G, d, g, mu);
    if (!verify_instance(p3)) ++unverified;
    const auto out = problem3_to_hausdorff(p3);
    const bool verdict = decide_translation(out.hausdorff, out.r2).has_value();
    const bool truth = brute_clique(G, d * g);
    if (out.expected != truth || verdict != truth) ++mismatches;
    yes += truth;
    ++total;
  };
  for (std::uint64_t mask = 0; mask < 64; ++mask) run(Graph::from_mask(4, mask), 2, 1, 1);
  const int mus[3] = {1, 2, 6};
  for (int i = 0; i < 200; ++i) run(gen::random_graph(6, 50 + (i % 5) * 10, 6000 + i), 2, 2, mus[i % 3]);
  for (int i = 0; i < 100; ++i) run(gen::random_graph(7, 40 + (i % 6) * 10, 7000 + i), 3, 1, 1);
  const double secs = seconds_since(t0);
  std::ostringstream msg;
  msg << "clique pipeline: " << total << " graphs (" << yes << " with a clique), " << mismatches
      << " mismatches, " << unverified << " failed verify_instance, " << secs << " s (limit " << kCliqueSeconds
      << " s)";
  report(5, mismatches == 0 && unverified == 0 && secs <= kCliqueSeconds, msg.str());
}

void criterion6() {
  std::ostringstream msg;
  bool ok = true;
  msg << "structural invariants:";
  for (int d = 2; d <= 6; ++d) {
    long splits = 0, reduces = 0, reduce_bad = 0, weight_bad = 0;
    double worst_ratio = 0;
    gkmp::Options o;
    o.hooks.after_reduce = [&](const gkmp::NodeState& n) {
      ++reduces;
      if (!gkmp::check_reduced(n).empty()) ++reduce_bad;
    };
    o.hooks.after_split = [&](const gkmp::NodeState& parent, std::span<const gkmp::NodeState> kids) {
      if (splits >= kSplitsPerDim) return;
      ++splits;
      const double wp = gkmp::short_weight(parent);
      const double bound = wp / std::pow(2.0, 2.0 / d);
      for (const auto& k : kids) {
        const double wk = gkmp::short_weight(k);
        if (wp > 0) worst_ratio = std::max(worst_ratio, wk / wp);
        if (wk > bound * (1 + kWeightEpsilon)) ++weight_bad;
      }
    };
    std::mt19937_64 rng(8000 + d);
    for (int i = 0; splits < kSplitsPerDim; ++i) {
      gen::GkmpParams p;
      p.d = d;
      p.colors = static_cast<int>(gen::uniform(rng, 1, kMaxColors));
      p.n = static_cast<int>(gen::uniform(rng, std::max(p.colors, 20), 60));
      p.eboxes = static_cast<int>(gen::uniform(rng, 0, kMaxEboxes));
      auto inst = gen::random_gkmp(p, rng());
      switch (i % 3) {
        case 0: solve_volume(inst, o); break;
        case 1: solve_exists_colorful(inst, o); break;
        default:
          inst.eboxes.clear();
          solve_depth(inst, i % 2 ? DepthMode::Max : DepthMode::Min, o);
          break;
      }
    }
    ok = ok && reduce_bad == 0 && weight_bad == 0;
    msg << " d=" << d << " splits=" << splits << " reduces=" << reduces << " bad_reduce=" << reduce_bad
        << " bad_weight=" << weight_bad << " max_ratio=" << worst_ratio << " (bound "
        << 1 / std::pow(2.0, 2.0 / d) << ");";
  }
  report(6, ok, msg.str());
}

void criterion7() {
  const auto rep = bench::run_suite("volume-d4", 1);
  double n2000 = -1;
  std::ostringstream msg;
  msg << "bench volume-d4:";
  for (const auto& r : rep.rows) {
    msg << " N=" << r.N << " " << static_cast<double>(r.wall_ns) / 1e9 << "s";
    if (r.N == 2000) n2000 = static_cast<double>(r.wall_ns) / 1e9;
  }
  for (const auto& f : rep.fits) msg << "; fitted slope " << f.slope << " (theory " << f.theory << ", report only)";
  msg << "; limit " << kBenchSeconds << " s at N=2000";
  report(7, rep.rows.size() == 4 && n2000 >= 0 && n2000 <= kBenchSeconds, msg.str());
}

}  // namespace

int main() {
  const std::function<void()> all[] = {criterion1, criterion2, criterion3, criterion4,
                                       criterion5, criterion6, criterion7};
  int id = 1;
  for (const auto& c : all) {
    try {
      c();
    } catch (const std::exception& e) {
      report(id, false, std::string("exception: ") + e.what());
    }
    ++id;
  }
  std::printf("%d of 7 criteria passed\n", 7 - failures);
  return failures == 0 ? 0 : 1;
}
