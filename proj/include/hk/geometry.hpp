#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hk/types.hpp"

namespace hk {

enum class Openness : std::uint8_t { Closed, Open };

/// Axis-aligned box with extended-integer bounds. Openness applies to every
/// finite face at once.
struct AxisBox {
  int d = 0;
  Point lo{};
  Point hi{};
  Openness openness = Openness::Closed;

  static AxisBox closed(std::span<const Coord> lo, std::span<const Coord> hi);
  static AxisBox open(std::span<const Coord> lo, std::span<const Coord> hi);

  /// Throws InputError unless 2 <= d <= 8 and lo <= hi on every axis.
  void validate() const;
  bool all_finite() const;

  friend bool operator==(const AxisBox&, const AxisBox&) = default;
};

/// A cell is a closed box with finite bounds.
using Cell = AxisBox;

enum class BoundKind : std::uint8_t { Free, Lower, Upper };

struct AxisBound {
  BoundKind kind = BoundKind::Free;
  Coord value = 0;

  static AxisBound lower(Coord a) { return {BoundKind::Lower, a}; }
  static AxisBound upper(Coord a) { return {BoundKind::Upper, a}; }
  static AxisBound free() { return {}; }

  friend bool operator==(const AxisBound&, const AxisBound&) = default;
};

/// Closed region with at most one finite bound per axis: Lower(a) means
/// x >= a, Upper(a) means x <= a.
struct Orthant {
  int d = 0;
  std::array<AxisBound, kMaxDim> axes{};

  AxisBox to_box() const;
  static Orthant from_box(const AxisBox& box);

  friend bool operator==(const Orthant&, const Orthant&) = default;
};

enum class ObjectClass : std::uint8_t { TrivialOutside, TrivialContains, Long, Short };

enum class FaceKind : std::uint8_t { B, E };

/// A (d-2)-face {x_i = fixed_i, x_j = fixed_j} of an object. Axes are 1-indexed.
struct Face2 {
  std::size_t owner = 0;
  int axis_i = 0;
  int axis_j = 0;
  Coord fixed_i = 0;
  Coord fixed_j = 0;
  FaceKind kind = FaceKind::B;

  friend bool operator==(const Face2&, const Face2&) = default;
};

ObjectClass classify_object(const AxisBox& obj, const Cell& cell);
ObjectClass classify_object(const Orthant& obj, const Cell& cell);

/// Number of axes on which some finite bound of obj lies strictly inside the
/// cell's extent.
int crossing_axis_count(const AxisBox& obj, const Cell& cell);

/// (d-2)-faces of obj whose relative interior meets interior(cell).
std::vector<Face2> enumerate_faces(const AxisBox& obj, const Cell& cell,
                                   FaceKind kind = FaceKind::B, std::size_t owner = 0);
std::vector<Face2> enumerate_faces(const Orthant& obj, const Cell& cell,
                                   FaceKind kind = FaceKind::B, std::size_t owner = 0);

/// 2^{(i+j)/d} for B-faces, 2^{(i+j)/d}/t for E-faces. Axes 1-indexed.
double face_weight(int axis_i, int axis_j, FaceKind kind, double t, int d);

/// Cyclic left shift of per-axis data by k: new axis a holds old axis (a+k) mod d.
AxisBox rotate_axes(const AxisBox& box, int k);
Orthant rotate_axes(const Orthant& orthant, int k);
Point rotate_axes(const Point& p, int d, int k);

/// Membership of a point given in doubled coordinates (X = 2x), honouring
/// openness exactly.
bool contains_doubled(const AxisBox& box, const Point& x2);
bool contains_doubled(const Orthant& orthant, const Point& x2);

/// Per-axis order-preserving map from coordinates to even integers
/// (value -> 2*rank). Odd integers denote the open gap between neighbours.
class RankMap {
 public:
  RankMap() = default;
  explicit RankMap(std::vector<std::vector<Coord>> values_per_axis);

  int dims() const { return static_cast<int>(values_.size()); }
  const std::vector<Coord>& values(int axis) const { return values_[axis]; }

  /// 2*rank of v; infinities pass through. Throws InputError if v is unknown.
  Coord forward(int axis, Coord v) const;
  /// Original value of an even encoded coordinate.
  Coord backward(int axis, Coord even) const;
  /// Representative in doubled original coordinates: 2*v for even codes,
  /// v_r + v_{r+1} (the doubled midpoint) for the odd code 2r+1.
  Coord decode_doubled(int axis, Coord encoded) const;

 private:
  std::vector<std::vector<Coord>> values_;
};

struct RankEncoded {
  /// Closed integer boxes; nullopt for inputs that encode to the empty set.
  std::vector<std::optional<AxisBox>> boxes;
  Cell cell;
  RankMap map;
};

/// Closed [a,b] -> [2r_a, 2r_b]; open (a,b) -> [2r_a+1, 2r_b-1]. A point set
/// built from these boxes is nonempty in real space iff it contains an
/// integer point in encoded space.
RankEncoded rank_space_encode(std::span<const AxisBox> boxes, const Cell& cell);

}  // namespace hk
