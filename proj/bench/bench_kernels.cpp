// Solver kernels against the brute-force references, and the solver across
// thread counts. Prints CSV: kernel,impl,threads,d,N,seed,wall_ns,answer_digest
//
//   bench_kernels [--max-threads T] [--reps R]

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include "hk/bench.hpp"
#include "hk/generators.hpp"
#include "hk/oracles.hpp"

namespace {

template <class F>
std::int64_t best_of(int reps, F&& f) {
  std::int64_t best = -1;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count();
    if (best < 0 || ns < best) best = ns;
  }
  return best;
}

void row(const char* kernel, const char* impl, int threads, int d, std::size_t n, std::uint64_t seed,
         std::int64_t ns, const std::string& answer) {
  std::cout << kernel << ',' << impl << ',' << threads << ',' << d << ',' << n << ',' << seed << ',' << ns << ','
            << hk::bench::digest(answer) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  int max_threads = 4;
  int reps = 3;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (!std::strcmp(argv[i], "--max-threads")) max_threads = std::atoi(argv[i + 1]);
    if (!std::strcmp(argv[i], "--reps")) reps = std::atoi(argv[i + 1]);
  }
  std::cout << "kernel,impl,threads,d,N,seed,wall_ns,answer_digest\n";

  // Solver vs reference on instances the reference can still enumerate.
  for (int d : {2, 3, 4}) {
    hk::gen::GkmpParams p;
    p.d = d;
    p.n = 40;
    p.colors = 4;
    p.coord_max = 16;
    p.eboxes = 4;
    const std::uint64_t seed = 42 + d;
    const auto inst = hk::gen::random_gkmp(p, seed);
    hk::BigInt a, b;
    const auto ns_solver = best_of(reps, [&] { a = hk::solve_volume(inst); });
    const auto ns_oracle = best_of(reps, [&] { b = hk::oracle_volume(inst); });
    row("volume", "solver", 1, d, inst.orthants.size(), seed, ns_solver, a.str());
    row("volume", "reference", 1, d, inst.orthants.size(), seed, ns_oracle, b.str());
    if (a != b) {
      std::cerr << "volume disagreement at d=" << d << "\n";
      return 1;
    }
  }
  for (int d : {2, 3}) {
    const std::uint64_t seed = 7 + d;
    const auto h = hk::gen::random_hausdorff(d, 6, 6, 20, seed);
    hk::Coord a = 0, b = 0;
    const auto ns_solver = best_of(reps, [&] { a = hk::min_hausdorff_translation(h).r2; });
    const auto ns_oracle = best_of(reps, [&] { b = hk::oracle_min_hausdorff(h); });
    row("hausdorff", "solver", 1, d, h.P.size() * h.Q.size(), seed, ns_solver, std::to_string(a));
    row("hausdorff", "reference", 1, d, h.P.size() * h.Q.size(), seed, ns_oracle, std::to_string(b));
    if (a != b) {
      std::cerr << "hausdorff disagreement at d=" << d << "\n";
      return 1;
    }
  }

  // Thread scaling: answers must not depend on the thread count.
  const auto big = hk::gen::klee_complement(4, 250, 1'000'000, 1000, nullptr, 750'000);
  std::string reference;
  for (int t = 1; t <= max_threads; t *= 2) {
    hk::gkmp::Options opt;
    opt.threads = t;
    hk::BigInt v;
    const auto ns = best_of(reps, [&] { v = hk::solve_volume(big, opt); });
    row("volume", "solver", t, 4, big.orthants.size(), 1000, ns, v.str());
    if (reference.empty()) reference = v.str();
    if (v.str() != reference) {
      std::cerr << "thread count changed the answer\n";
      return 1;
    }
  }
  return 0;
}
