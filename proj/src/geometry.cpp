#include "hk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hk {

namespace {

void check_dim(int d) {
  if (d < 2 || d > kMaxDim) {
    throw InputError("dimension must be in [2, 8], got " + std::to_string(d));
  }
}

bool strictly_inside(Coord v, Coord lo, Coord hi) { return is_finite(v) && lo < v && v < hi; }

bool cell_has_interior(const Cell& cell) {
  for (int k = 0; k < cell.d; ++k) {
    if (!(cell.lo[k] < cell.hi[k])) return false;
  }
  return true;
}

bool meets_interior(const AxisBox& obj, const Cell& cell) {
  if (!cell_has_interior(cell)) return false;
  for (int k = 0; k < obj.d; ++k) {
    if (!(obj.lo[k] < cell.hi[k] && obj.hi[k] > cell.lo[k])) return false;
  }
  return true;
}

bool contains_cell(const AxisBox& obj, const Cell& cell) {
  for (int k = 0; k < obj.d; ++k) {
    if (obj.openness == Openness::Open) {
      if (!((obj.lo[k] == kNegInf || obj.lo[k] < cell.lo[k]) &&
            (obj.hi[k] == kPosInf || obj.hi[k] > cell.hi[k]))) {
        return false;
      }
    } else if (!(obj.lo[k] <= cell.lo[k] && obj.hi[k] >= cell.hi[k])) {
      return false;
    }
  }
  return true;
}

Coord doubled(Coord v) {
  if (v == kNegInf || v == kPosInf) return v;
  return v * 2;
}

}  // namespace

AxisBox AxisBox::closed(std::span<const Coord> lo, std::span<const Coord> hi) {
  if (lo.size() != hi.size()) throw InputError("box bound arrays differ in length");
  AxisBox box;
  box.d = static_cast<int>(lo.size());
  check_dim(box.d);
  std::copy(lo.begin(), lo.end(), box.lo.begin());
  std::copy(hi.begin(), hi.end(), box.hi.begin());
  box.validate();
  return box;
}

AxisBox AxisBox::open(std::span<const Coord> lo, std::span<const Coord> hi) {
  AxisBox box = closed(lo, hi);
  box.openness = Openness::Open;
  return box;
}

void AxisBox::validate() const {
  check_dim(d);
  for (int k = 0; k < d; ++k) {
    if (lo[k] > hi[k]) {
      throw InputError("box has lo > hi on axis " + std::to_string(k));
    }
    if (lo[k] == kPosInf || hi[k] == kNegInf) {
      throw InputError("box bound at the wrong infinity on axis " + std::to_string(k));
    }
  }
}

bool AxisBox::all_finite() const {
  for (int k = 0; k < d; ++k) {
    if (!is_finite(lo[k]) || !is_finite(hi[k])) return false;
  }
  return true;
}

AxisBox Orthant::to_box() const {
  AxisBox box;
  box.d = d;
  for (int k = 0; k < d; ++k) {
    box.lo[k] = kNegInf;
    box.hi[k] = kPosInf;
    if (axes[k].kind == BoundKind::Lower) box.lo[k] = axes[k].value;
    if (axes[k].kind == BoundKind::Upper) box.hi[k] = axes[k].value;
  }
  return box;
}

Orthant Orthant::from_box(const AxisBox& box) {
  Orthant o;
  o.d = box.d;
  for (int k = 0; k < box.d; ++k) {
    const bool lo_fin = is_finite(box.lo[k]);
    const bool hi_fin = is_finite(box.hi[k]);
    if (lo_fin && hi_fin) throw InputError("orthant has two finite bounds on axis " + std::to_string(k));
    if (lo_fin) o.axes[k] = AxisBound::lower(box.lo[k]);
    if (hi_fin) o.axes[k] = AxisBound::upper(box.hi[k]);
  }
  return o;
}

int crossing_axis_count(const AxisBox& obj, const Cell& cell) {
  int count = 0;
  for (int k = 0; k < obj.d; ++k) {
    if (strictly_inside(obj.lo[k], cell.lo[k], cell.hi[k]) ||
        strictly_inside(obj.hi[k], cell.lo[k], cell.hi[k])) {
      ++count;
    }
  }
  return count;
}

ObjectClass classify_object(const AxisBox& obj, const Cell& cell) {
  if (obj.d != cell.d) throw InputError("classify_object: dimension mismatch");
  if (!meets_interior(obj, cell)) return ObjectClass::TrivialOutside;
  if (contains_cell(obj, cell)) return ObjectClass::TrivialContains;
  return crossing_axis_count(obj, cell) >= 2 ? ObjectClass::Short : ObjectClass::Long;
}

ObjectClass classify_object(const Orthant& obj, const Cell& cell) {
  return classify_object(obj.to_box(), cell);
}

std::vector<Face2> enumerate_faces(const AxisBox& obj, const Cell& cell, FaceKind kind,
                                   std::size_t owner) {
  if (obj.d != cell.d) throw InputError("enumerate_faces: dimension mismatch");
  std::vector<Face2> faces;
  if (!meets_interior(obj, cell)) return faces;

  // Finite bounds strictly inside the cell, per axis (at most two).
  std::array<std::array<Coord, 2>, kMaxDim> sides{};
  std::array<int, kMaxDim> n_sides{};
  for (int k = 0; k < obj.d; ++k) {
    if (strictly_inside(obj.lo[k], cell.lo[k], cell.hi[k])) sides[k][n_sides[k]++] = obj.lo[k];
    if (obj.hi[k] != obj.lo[k] && strictly_inside(obj.hi[k], cell.lo[k], cell.hi[k])) {
      sides[k][n_sides[k]++] = obj.hi[k];
    }
  }
  for (int i = 0; i < obj.d; ++i) {
    for (int j = i + 1; j < obj.d; ++j) {
      for (int si = 0; si < n_sides[i]; ++si) {
        for (int sj = 0; sj < n_sides[j]; ++sj) {
          faces.push_back({owner, i + 1, j + 1, sides[i][si], sides[j][sj], kind});
        }
      }
    }
  }
  return faces;
}

std::vector<Face2> enumerate_faces(const Orthant& obj, const Cell& cell, FaceKind kind,
                                   std::size_t owner) {
  return enumerate_faces(obj.to_box(), cell, kind, owner);
}

double face_weight(int axis_i, int axis_j, FaceKind kind, double t, int d) {
  const double w = std::exp2(static_cast<double>(axis_i + axis_j) / d);
  return kind == FaceKind::E ? w / t : w;
}

AxisBox rotate_axes(const AxisBox& box, int k) {
  AxisBox out = box;
  for (int a = 0; a < box.d; ++a) {
    out.lo[a] = box.lo[(a + k) % box.d];
    out.hi[a] = box.hi[(a + k) % box.d];
  }
  return out;
}

Orthant rotate_axes(const Orthant& orthant, int k) {
  Orthant out = orthant;
  for (int a = 0; a < orthant.d; ++a) out.axes[a] = orthant.axes[(a + k) % orthant.d];
  return out;
}

Point rotate_axes(const Point& p, int d, int k) {
  Point out = p;
  for (int a = 0; a < d; ++a) out[a] = p[(a + k) % d];
  return out;
}

bool contains_doubled(const AxisBox& box, const Point& x2) {
  for (int k = 0; k < box.d; ++k) {
    const Coord lo = doubled(box.lo[k]);
    const Coord hi = doubled(box.hi[k]);
    if (box.openness == Openness::Open) {
      if (!(lo == kNegInf || lo < x2[k])) return false;
      if (!(hi == kPosInf || x2[k] < hi)) return false;
    } else {
      if (!(lo <= x2[k] && x2[k] <= hi)) return false;
    }
  }
  return true;
}

bool contains_doubled(const Orthant& orthant, const Point& x2) {
  return contains_doubled(orthant.to_box(), x2);
}

RankMap::RankMap(std::vector<std::vector<Coord>> values_per_axis) : values_(std::move(values_per_axis)) {
  for (auto& axis : values_) {
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
  }
}

Coord RankMap::forward(int axis, Coord v) const {
  if (!is_finite(v)) return v;
  const auto& vals = values_[axis];
  auto it = std::lower_bound(vals.begin(), vals.end(), v);
  if (it == vals.end() || *it != v) {
    throw InputError("rank map: coordinate " + std::to_string(v) + " not registered on axis " +
                     std::to_string(axis));
  }
  return 2 * static_cast<Coord>(it - vals.begin());
}

Coord RankMap::backward(int axis, Coord even) const {
  if (!is_finite(even)) return even;
  const auto& vals = values_[axis];
  if (even % 2 != 0 || even < 0 || even / 2 >= static_cast<Coord>(vals.size())) {
    throw InputError("rank map: " + std::to_string(even) + " is not a value code");
  }
  return vals[even / 2];
}

Coord RankMap::decode_doubled(int axis, Coord encoded) const {
  const auto& vals = values_[axis];
  if (vals.empty()) throw InputError("rank map: empty axis");
  const auto n = static_cast<Coord>(vals.size());
  if (encoded % 2 == 0) return 2 * backward(axis, encoded);
  const Coord r = (encoded - 1) / 2;  // exact: encoded is odd
  if (r < 0) return 2 * vals.front() - 1;
  if (r >= n - 1) return 2 * vals.back() + 1;
  return vals[r] + vals[r + 1];
}

RankEncoded rank_space_encode(std::span<const AxisBox> boxes, const Cell& cell) {
  cell.validate();
  if (!cell.all_finite()) throw InputError("rank_space_encode: cell must be finite");
  const int d = cell.d;
  std::vector<std::vector<Coord>> values(d);
  for (int k = 0; k < d; ++k) {
    values[k].push_back(cell.lo[k]);
    values[k].push_back(cell.hi[k]);
  }
  for (const auto& b : boxes) {
    if (b.d != d) throw InputError("rank_space_encode: dimension mismatch");
    for (int k = 0; k < d; ++k) {
      if (is_finite(b.lo[k])) values[k].push_back(b.lo[k]);
      if (is_finite(b.hi[k])) values[k].push_back(b.hi[k]);
    }
  }
  RankEncoded out;
  out.map = RankMap(std::move(values));

  out.cell = cell;
  for (int k = 0; k < d; ++k) {
    out.cell.lo[k] = out.map.forward(k, cell.lo[k]);
    out.cell.hi[k] = out.map.forward(k, cell.hi[k]);
  }
  out.boxes.reserve(boxes.size());
  for (const auto& b : boxes) {
    AxisBox e;
    e.d = d;
    bool empty = false;
    const Coord shrink = b.openness == Openness::Open ? 1 : 0;
    for (int k = 0; k < d; ++k) {
      e.lo[k] = out.map.forward(k, b.lo[k]);
      e.hi[k] = out.map.forward(k, b.hi[k]);
      if (is_finite(e.lo[k])) e.lo[k] += shrink;
      if (is_finite(e.hi[k])) e.hi[k] -= shrink;
      if (e.lo[k] > e.hi[k]) empty = true;
    }
    if (empty) {
      out.boxes.emplace_back(std::nullopt);
    } else {
      out.boxes.emplace_back(e);
    }
  }
  return out;
}

}  // namespace hk
