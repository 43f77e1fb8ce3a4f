#pragma once

// Directed L-infinity Hausdorff distance under translation. All radii and
// translations are doubled so that half-integer optima stay integral: a
// threshold r2 means distance r2/2, a witness V means translation V/2.

#include <optional>
#include <vector>

#include "hk/gkmp.hpp"

namespace hk {

struct HausdorffInstance {
  int d = 0;
  std::vector<Point> P;
  std::vector<Point> Q;

  void validate(Coord limit = kUserCoordLimit) const;

  friend bool operator==(const HausdorffInstance&, const HausdorffInstance&) = default;
};

/// 2 * max_p min_q |p - q|_inf.
Coord directed_hausdorff_linf(const HausdorffInstance& h);
/// 2 * h(P + v2/2, Q) for a doubled translation v2.
Coord directed_hausdorff_doubled(const HausdorffInstance& h, const Point& v2);

struct CellInstance {
  Point index{};  // grid cell index per axis
  GkmpInstance instance;
};

/// One exists-instance per grid cell of side 2*r2 (doubled frame) that meets
/// cubes of every color, in lexicographic cell order. Requires r2 > 0.
std::vector<CellInstance> build_cell_instances(const HausdorffInstance& h, Coord r2);

struct HausdorffOptions {
  int threads = 1;
  gkmp::Options gkmp;
};

/// Doubled translation V with directed_hausdorff_doubled(h, V) <= r2, or nullopt.
std::optional<Point> decide_translation(const HausdorffInstance& h, Coord r2,
                                        const HausdorffOptions& opt = {});

/// Sorted {0} u {|c_k - c'_k|} over centers c = q - p.
std::vector<Coord> candidate_values(const HausdorffInstance& h);

struct HausdorffResult {
  Coord r2 = 0;
  Point witness{};
};

HausdorffResult min_hausdorff_translation(const HausdorffInstance& h, const HausdorffOptions& opt = {});

}  // namespace hk
