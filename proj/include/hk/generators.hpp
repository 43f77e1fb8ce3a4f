#pragma once

// Seeded instance generators. Output depends only on the parameters and the
// seed, on every platform.

#include <cstdint>
#include <random>

#include "hk/gkmp.hpp"
#include "hk/graph.hpp"
#include "hk/hausdorff.hpp"

namespace hk::gen {

/// Uniform integer in [lo, hi] by rejection, independent of the standard
/// library's distribution implementations.
std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

struct GkmpParams {
  int d = 2;
  int n = 8;  // orthants
  int colors = 2;
  Coord coord_max = 16;
  int eboxes = 0;
  int free_percent = 10;  // chance that an orthant axis is unbounded
};

/// Every color receives at least one orthant; clip is [0, coord_max]^d; eboxes
/// are weight-0 boxes, open or closed at random.
GkmpInstance random_gkmp(const GkmpParams& params, std::uint64_t seed);

/// Instance whose colorful set contains a single shared corner of two colors.
GkmpInstance corner_touching(int d, int colors, int n, Coord coord_max, std::uint64_t seed);

/// One color per random box, holding the 2d closed halfspaces outside it.
/// The colorful volume is the clip volume minus the union volume of the boxes.
/// Box sides are at most max_side (0: unbounded).
GkmpInstance klee_complement(int d, int boxes, Coord coord_max, std::uint64_t seed,
                             std::vector<AxisBox>* out_boxes = nullptr, Coord max_side = 0);

HausdorffInstance random_hausdorff(int d, int n, int m, Coord coord_max, std::uint64_t seed);

/// G(n0, p) with p = percent/100.
Graph random_graph(int n0, int percent, std::uint64_t seed);

}  // namespace hk::gen
