#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace hk {

/// Integer coordinate. The extreme values stand for -inf / +inf.
using Coord = std::int64_t;

inline constexpr Coord kNegInf = std::numeric_limits<Coord>::min();
inline constexpr Coord kPosInf = std::numeric_limits<Coord>::max();

inline constexpr int kMaxDim = 8;

/// Magnitude bound for user-facing coordinates.
inline constexpr Coord kUserCoordLimit = Coord{1} << 40;
/// Magnitude bound for coordinates produced internally (doubling, offsets).
inline constexpr Coord kInternalCoordLimit = Coord{1} << 60;

using BigInt = boost::multiprecision::cpp_int;

/// Fixed-capacity coordinate vector; only the first d entries are meaningful.
using Point = std::array<Coord, kMaxDim>;

inline bool is_finite(Coord c) { return c != kNegInf && c != kPosInf; }

/// Malformed or out-of-contract input. Maps to CLI exit status 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A brute-force routine or generator would exceed its configured budget.
/// Maps to CLI exit status 3.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hk
