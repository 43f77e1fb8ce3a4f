#pragma once

// Generalized colored Klee's measure solver: emptiness with witness, min/max
// depth, and exact volume of the intersection of colored orthant unions with
// the complements of extra boxes, inside a clip cell.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hk/geometry.hpp"

namespace hk {

struct ColoredOrthant {
  Orthant orthant;
  int color = 0;

  friend bool operator==(const ColoredOrthant&, const ColoredOrthant&) = default;
};

/// Excluded box. Weight 0 means pure exclusion; depth queries add the weight
/// wherever the box covers.
struct EBox {
  AxisBox box;
  std::int64_t weight = 0;

  friend bool operator==(const EBox&, const EBox&) = default;
};

struct GkmpInstance {
  int d = 0;
  int n_colors = 0;
  std::vector<ColoredOrthant> orthants;
  std::vector<EBox> eboxes;
  Cell clip;
  std::int64_t depth_offset = 0;

  /// Throws InputError on structural problems or coordinates beyond limit.
  void validate(Coord limit = kUserCoordLimit) const;

  friend bool operator==(const GkmpInstance&, const GkmpInstance&) = default;
};

enum class DepthMode : std::uint8_t { Min, Max };

struct DepthAnswer {
  std::int64_t value = 0;
  Point witness{};  // doubled original coordinates
};

/// Depth of a point given in doubled original coordinates.
std::int64_t depth_at_doubled(const GkmpInstance& inst, const Point& x2);
/// True iff x2 (doubled coordinates) is inside the clip, inside some orthant
/// of every color, and outside every ebox.
bool is_colorful_doubled(const GkmpInstance& inst, const Point& x2);

namespace gkmp {

enum class Mode : std::uint8_t { Volume, Exists, DepthMin, DepthMax };

/// Solver-internal object. Bounds are half-open [lo, hi) in the node frame;
/// boundaries never matter because every mode reasons about positive-measure
/// regions (Exists and Depth run over unit lattice cells of rank space).
struct Object {
  Point lo{};
  Point hi{};
  int color = -1;           // -1 for eboxes
  std::int64_t weight = 0;  // eboxes only
};

/// Collapsed step function along one axis: on [lo, hi) the relevant extremum
/// is `value`, attained at integer position `arg`.
struct ProfileSegment {
  Coord lo = 0;
  Coord hi = 0;
  std::int64_t value = 0;
  Coord arg = 0;
  bool exact = true;
};

/// Coordinate remap performed by slab shrinking, kept so that witnesses can be
/// mapped back. Each entry: removed interval collapsed to `at` (new frame),
/// with `length` removed.
struct ShrinkRecord {
  int axis = 0;
  std::vector<std::pair<Coord, Coord>> removed;  // (position in new frame, length)
};

struct NodeState {
  int d = 0;
  Mode mode = Mode::Volume;
  Point cell_lo{};
  Point cell_hi{};
  std::vector<Object> b_list;  // sorted by color
  std::vector<Object> e_list;
  std::vector<int> colors;  // colors still constraining this node, sorted
  int rotation = 0;
  double t = 1.0;
  std::int64_t offset = 0;
  std::vector<std::vector<ProfileSegment>> profiles;  // depth modes only
  int depth = 0;

  Cell cell() const;
};

struct Face {
  int axis_i = 0;  // 0-indexed in the node frame
  int axis_j = 0;
  Coord fixed_i = 0;
  Coord fixed_j = 0;
  FaceKind kind = FaceKind::B;
};

std::vector<Face> short_faces(const NodeState& node);
double short_weight(const NodeState& node);
double face_weight(const Face& f, const NodeState& node);

struct ReduceResult {
  NodeState node;
  bool empty = false;  // Volume/Exists: the node's region has measure zero
  std::vector<ShrinkRecord> shrinks;
};

/// Trivial-object elimination, long-orthant canonicalization, color-class
/// conversion, and long-ebox elimination, iterated to a fixpoint.
ReduceResult reduce(NodeState node);

/// Collapses the union of the long eboxes' slabs on `axis` to zero width.
/// Every long ebox crossing only `axis` is removed.
NodeState shrink_long_eboxes(NodeState node, int axis, ShrinkRecord* record = nullptr);

/// Smallest coordinate m whose cumulative weight (items at or below m)
/// reaches half the total. Requires a nonempty list.
Coord weighted_median(std::vector<std::pair<Coord, double>> items);

/// Weighted-median split on axis 0 followed by a one-step axis rotation.
/// Returns one child (rotation only) when no face is orthogonal to axis 0.
std::vector<NodeState> split(const NodeState& node);

struct NodeAnswer {
  BigInt volume = 0;
  std::optional<Point> witness;  // node frame
  std::int64_t depth = 0;
};

NodeAnswer base_case(const NodeState& node);

/// Checks the post-reduce structure: no trivial objects, no long eboxes, at most
/// 2d long orthants per color, every long orthant's color owns a short orthant.
/// Returns an empty string when all hold, else a description.
std::string check_reduced(const NodeState& node);

struct Hooks {
  std::function<void(const NodeState&)> after_reduce;
  std::function<void(const NodeState& parent, std::span<const NodeState> children)> after_split;
};

struct Options {
  int threads = 1;
  std::size_t base_face_threshold = 4;
  Hooks hooks;
};

/// Root node for an already prepared instance (volume: original coordinates;
/// exists/depth: rank space converted to unit lattice cells).
NodeState make_root(const GkmpInstance& inst, Mode mode);

NodeAnswer solve_node(const NodeState& root, const Options& options = {});

}  // namespace gkmp

BigInt solve_volume(const GkmpInstance& inst, const gkmp::Options& options = {});

/// Witness in doubled original coordinates, re-verified before returning.
std::optional<Point> solve_exists_colorful(const GkmpInstance& inst,
                                           const gkmp::Options& options = {});

DepthAnswer solve_depth(const GkmpInstance& inst, DepthMode mode,
                        const gkmp::Options& options = {});

}  // namespace hk
