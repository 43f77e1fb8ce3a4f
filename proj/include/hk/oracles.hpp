#pragma once

// Brute-force reference implementations. They share no code with the solver
// beyond the instance types and exist to be obviously correct.

#include <cstdint>
#include <optional>

#include "hk/gkmp.hpp"
#include "hk/hausdorff.hpp"

namespace hk {

struct OracleOptions {
  /// Maximum number of grid points (or search nodes) an oracle may visit.
  std::uint64_t budget = 10'000'000;
};

BigInt oracle_volume(const GkmpInstance& inst, const OracleOptions& opt = {});

/// Lexicographically smallest colorful point of the compressed grid, in
/// doubled original coordinates.
std::optional<Point> oracle_colorful_point(const GkmpInstance& inst, const OracleOptions& opt = {});

DepthAnswer oracle_depth(const GkmpInstance& inst, DepthMode mode, const OracleOptions& opt = {});

/// Some doubled translation V with h(P + V/2, Q) <= r2/2, by backtracking over
/// per-axis lower cube ends.
std::optional<Point> oracle_translation_feasible(const HausdorffInstance& h, Coord r2,
                                                 const OracleOptions& opt = {});

/// Smallest r2 with a feasible translation (integer binary search).
Coord oracle_min_hausdorff(const HausdorffInstance& h, const OracleOptions& opt = {});

}  // namespace hk
