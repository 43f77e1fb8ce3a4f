#pragma once

// Instances built from a graph: shapes and translates whose common
// intersection encodes the (dg)-cliques of the graph, and their conversion to
// a translational Hausdorff decision with a known answer.
//
// Coordinates live in an odd frame: lattice cell k on an axis is the point
// 2k+1, shape bounds are odd and translate components even, so the region
// [0, n0^g)^d of cells becomes [1, 2 n0^g - 1]^d.

#include <cstdint>
#include <vector>

#include "hk/geometry.hpp"
#include "hk/graph.hpp"
#include "hk/hausdorff.hpp"

namespace hk {

/// (a+1)-th least significant base-n0 digit of x.
int phi_digit(std::int64_t x, int a, int n0);

enum class TranslateKind : std::uint8_t { Region, Interval, Box, Diagonal };

struct TranslateTag {
  TranslateKind kind = TranslateKind::Region;
  int alpha = 0, a = 0, beta = 0, b = 0;
  int u = 0, v = 0;
  int level = 0;
};

struct Shape {
  std::vector<Orthant> orthants;
};

struct Translate {
  std::size_t shape = 0;
  Point vec{};
  TranslateTag tag;
};

struct Problem3Instance {
  int d = 0;
  int n0 = 0;
  int g = 0;
  int mu = 0;
  Graph graph;
  std::vector<Shape> shapes;
  std::vector<Translate> translates;
  AxisBox region;  // odd frame

  std::size_t orthant_count() const;
};

/// Pre: g >= 1, d >= 2, 1 <= mu <= n0^(g-1).
Problem3Instance build_problem3(const Graph& G, int d, int g, int mu);

/// True iff membership of every region lattice point in the intersection of
/// all translated shapes matches the clique predicate on its digits.
/// Throws CapacityError when the lattice exceeds `budget` points.
bool verify_instance(const Problem3Instance& inst, std::uint64_t budget = 10'000'000);

struct Provenance {
  std::uint64_t graph_hash = 0;
  int n0 = 0;
  int d = 0;
  int g = 0;
  int mu = 0;
  std::vector<std::pair<int, int>> edges;
};

struct ReductionOutput {
  HausdorffInstance hausdorff;
  Coord r2 = 0;  // decision threshold
  bool expected = false;
  Provenance provenance;
  std::size_t shapes = 0;
  std::size_t translates = 0;
  std::size_t cubes = 0;
};

ReductionOutput problem3_to_hausdorff(const Problem3Instance& inst);

/// build_problem3 followed by problem3_to_hausdorff.
ReductionOutput clique_instance(const Graph& G, int d, int g, int mu);

}  // namespace hk
