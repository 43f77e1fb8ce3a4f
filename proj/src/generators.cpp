#include "hk/generators.hpp"

#include <algorithm>
#include <string>

namespace hk::gen {

std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw InputError("uniform: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(rng());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

namespace {

void check_common(int d, Coord coord_max) {
  if (d < 2 || d > kMaxDim) throw InputError("generator: d must be in [2, 8]");
  if (coord_max < 1 || coord_max > kUserCoordLimit) throw InputError("generator: coord-max must be in [1, 2^40]");
}

Cell cube_clip(int d, Coord coord_max) {
  Cell c;
  c.d = d;
  for (int k = 0; k < d; ++k) c.hi[k] = coord_max;
  return c;
}

Orthant random_orthant(std::mt19937_64& rng, int d, Coord coord_max, int free_percent) {
  Orthant o;
  o.d = d;
  for (int k = 0; k < d; ++k) {
    if (uniform(rng, 0, 99) < free_percent) continue;
    const Coord v = uniform(rng, 0, coord_max);
    o.axes[k] = uniform(rng, 0, 1) ? AxisBound::lower(v) : AxisBound::upper(v);
  }
  return o;
}

AxisBox random_box(std::mt19937_64& rng, int d, Coord coord_max) {
  AxisBox b;
  b.d = d;
  for (int k = 0; k < d; ++k) {
    Coord x = uniform(rng, 0, coord_max);
    Coord y = uniform(rng, 0, coord_max);
    if (x > y) std::swap(x, y);
    b.lo[k] = x;
    b.hi[k] = y;
  }
  return b;
}

}  // namespace

GkmpInstance random_gkmp(const GkmpParams& p, std::uint64_t seed) {
  check_common(p.d, p.coord_max);
  if (p.colors < 1) throw InputError("generator: need at least one color");
  if (p.n < p.colors) throw InputError("generator: n must be at least the number of colors");
  if (p.eboxes < 0) throw InputError("generator: negative ebox count");
  std::mt19937_64 rng(seed);
  GkmpInstance inst;
  inst.d = p.d;
  inst.n_colors = p.colors;
  inst.clip = cube_clip(p.d, p.coord_max);
  for (int i = 0; i < p.n; ++i) {
    const int color = i < p.colors ? i : static_cast<int>(uniform(rng, 0, p.colors - 1));
    inst.orthants.push_back({random_orthant(rng, p.d, p.coord_max, p.free_percent), color});
  }
  for (int i = 0; i < p.eboxes; ++i) {
    EBox e{random_box(rng, p.d, p.coord_max), 0};
    if (uniform(rng, 0, 1)) e.box.openness = Openness::Open;
    inst.eboxes.push_back(e);
  }
  return inst;
}

GkmpInstance corner_touching(int d, int colors, int n, Coord coord_max, std::uint64_t seed) {
  check_common(d, coord_max);
  if (colors < 2 || n < colors) throw InputError("corner_touching: need colors >= 2 and n >= colors");
  std::mt19937_64 rng(seed);
  GkmpInstance inst;
  inst.d = d;
  inst.n_colors = colors;
  inst.clip = cube_clip(d, coord_max);
  Point c{};
  for (int k = 0; k < d; ++k) c[k] = uniform(rng, 1, coord_max - 1 > 0 ? coord_max - 1 : 1);
  Orthant below, above;
  below.d = above.d = d;
  for (int k = 0; k < d; ++k) {
    below.axes[k] = AxisBound::upper(c[k]);
    above.axes[k] = AxisBound::lower(c[k]);
  }
  inst.orthants.push_back({below, 0});
  inst.orthants.push_back({above, 1});
  // Remaining colors each get one orthant through the corner.
  for (int color = 2; color < colors; ++color) {
    Orthant o;
    o.d = d;
    for (int k = 0; k < d; ++k) {
      const int kind = static_cast<int>(uniform(rng, 0, 2));
      if (kind == 0) o.axes[k] = AxisBound::lower(uniform(rng, 0, c[k]));
      if (kind == 1) o.axes[k] = AxisBound::upper(uniform(rng, c[k], coord_max));
    }
    inst.orthants.push_back({o, color});
  }
  // Extra orthants for colors other than the two touching ones.
  for (int i = colors; i < n; ++i) {
    const int color = colors > 2 ? static_cast<int>(uniform(rng, 2, colors - 1)) : 0;
    Orthant o = random_orthant(rng, d, coord_max, 10);
    if (color < 2) {
      // Stay inside the touching orthant so the corner remains the only point.
      o = below;
      for (int k = 0; k < d; ++k) o.axes[k] = AxisBound::upper(uniform(rng, 0, c[k]));
    }
    inst.orthants.push_back({o, color});
  }
  // An open box that ends exactly at the corner excludes nothing there.
  EBox e;
  e.box.d = d;
  e.box.openness = Openness::Open;
  for (int k = 0; k < d; ++k) {
    e.box.lo[k] = 0;
    e.box.hi[k] = c[k];
  }
  inst.eboxes.push_back(e);
  return inst;
}

GkmpInstance klee_complement(int d, int boxes, Coord coord_max, std::uint64_t seed, std::vector<AxisBox>* out_boxes,
                             Coord max_side) {
  check_common(d, coord_max);
  if (boxes < 1) throw InputError("klee_complement: need at least one box");
  std::mt19937_64 rng(seed);
  GkmpInstance inst;
  inst.d = d;
  inst.n_colors = boxes;
  inst.clip = cube_clip(d, coord_max);
  for (int i = 0; i < boxes; ++i) {
    AxisBox b;
    if (max_side > 0) {
      b.d = d;
      for (int k = 0; k < d; ++k) {
        b.lo[k] = uniform(rng, 0, coord_max);
        b.hi[k] = std::min(coord_max, b.lo[k] + uniform(rng, 0, max_side));
      }
    } else {
      b = random_box(rng, d, coord_max);
    }
    if (out_boxes) out_boxes->push_back(b);
    for (int k = 0; k < d; ++k) {
      Orthant lo_side, hi_side;
      lo_side.d = hi_side.d = d;
      lo_side.axes[k] = AxisBound::upper(b.lo[k]);
      hi_side.axes[k] = AxisBound::lower(b.hi[k]);
      inst.orthants.push_back({lo_side, i});
      inst.orthants.push_back({hi_side, i});
    }
  }
  return inst;
}

HausdorffInstance random_hausdorff(int d, int n, int m, Coord coord_max, std::uint64_t seed) {
  check_common(d, coord_max);
  if (n < 1 || m < 1) throw InputError("random_hausdorff: n and m must be positive");
  std::mt19937_64 rng(seed);
  HausdorffInstance h;
  h.d = d;
  auto sample = [&](std::vector<Point>& dst, int count) {
    for (int i = 0; i < count; ++i) {
      Point p{};
      for (int k = 0; k < d; ++k) p[k] = uniform(rng, 0, coord_max);
      dst.push_back(p);
    }
  };
  sample(h.P, n);
  sample(h.Q, m);
  return h;
}

Graph random_graph(int n0, int percent, std::uint64_t seed) {
  if (n0 < 1 || n0 > 64) throw InputError("random_graph: n0 must be in [1, 64]");
  std::mt19937_64 rng(seed);
  Graph g(n0);
  for (int u = 0; u < n0; ++u) {
    for (int v = u + 1; v < n0; ++v) {
      if (uniform(rng, 0, 99) < percent) g.add_edge(u, v);
    }
  }
  return g;
}

}  // namespace hk::gen
