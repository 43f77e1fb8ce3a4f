#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "hk/gkmp.hpp"

namespace hk::gkmp {

namespace {

bool is_depth(Mode m) { return m == Mode::DepthMin || m == Mode::DepthMax; }

bool inside(Coord v, Coord lo, Coord hi) { return lo < v && v < hi; }

bool cell_degenerate(const NodeState& n) {
  for (int k = 0; k < n.d; ++k) {
    if (!(n.cell_lo[k] < n.cell_hi[k])) return true;
  }
  return false;
}

bool meets(const Object& o, const Point& lo, const Point& hi, int d) {
  for (int k = 0; k < d; ++k) {
    if (!(o.lo[k] < hi[k] && o.hi[k] > lo[k])) return false;
  }
  return true;
}

bool contains(const Object& o, const Point& lo, const Point& hi, int d) {
  for (int k = 0; k < d; ++k) {
    if (!(o.lo[k] <= lo[k] && o.hi[k] >= hi[k])) return false;
  }
  return true;
}

bool crosses(const Object& o, const NodeState& n, int k) {
  return inside(o.lo[k], n.cell_lo[k], n.cell_hi[k]) || inside(o.hi[k], n.cell_lo[k], n.cell_hi[k]);
}

/// Number of crossing axes; `axis` receives the last crossing axis found.
int crossing(const Object& o, const NodeState& n, int* axis = nullptr) {
  int count = 0;
  for (int k = 0; k < n.d; ++k) {
    if (crosses(o, n, k)) {
      ++count;
      if (axis) *axis = k;
    }
  }
  return count;
}

bool better(std::int64_t a, std::int64_t b, Mode mode) {
  return mode == Mode::DepthMax ? a > b : a < b;
}

Coord remap(Coord x, const std::vector<std::pair<Coord, Coord>>& intervals) {
  if (!is_finite(x)) return x;
  Coord removed = 0;
  for (const auto& [a, b] : intervals) {
    if (x <= a) break;
    removed += std::min(x, b) - a;
  }
  return x - removed;
}

void split_profile_at(std::vector<ProfileSegment>& prof, Coord x) {
  for (std::size_t i = 0; i < prof.size(); ++i) {
    auto& s = prof[i];
    if (s.lo < x && x < s.hi) {
      if (!s.exact) throw std::logic_error("profile: split inside a collapsed segment");
      ProfileSegment right = s;
      right.lo = x;
      right.arg = x;
      s.hi = x;
      prof.insert(prof.begin() + static_cast<std::ptrdiff_t>(i) + 1, right);
      return;
    }
  }
}

void fold_slab(std::vector<ProfileSegment>& prof, Coord a, Coord b, std::int64_t w) {
  if (w == 0) return;
  split_profile_at(prof, a);
  split_profile_at(prof, b);
  for (auto& s : prof) {
    if (s.lo >= a && s.hi <= b) s.value += w;
  }
}

void collapse_profiles(NodeState& n) {
  for (int k = 0; k < n.d; ++k) {
    std::vector<Coord> ev{n.cell_lo[k], n.cell_hi[k]};
    auto add = [&](const Object& o) {
      if (inside(o.lo[k], n.cell_lo[k], n.cell_hi[k])) ev.push_back(o.lo[k]);
      if (inside(o.hi[k], n.cell_lo[k], n.cell_hi[k])) ev.push_back(o.hi[k]);
    };
    for (const auto& o : n.b_list) add(o);
    for (const auto& o : n.e_list) add(o);
    std::sort(ev.begin(), ev.end());
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());

    auto& prof = n.profiles[k];
    for (std::size_t i = 1; i + 1 < ev.size(); ++i) split_profile_at(prof, ev[i]);

    std::vector<ProfileSegment> out;
    out.reserve(ev.size());
    std::size_t s = 0;
    for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
      ProfileSegment seg{ev[i], ev[i + 1], 0, ev[i], true};
      bool first = true;
      while (s < prof.size() && prof[s].hi <= ev[i + 1]) {
        const auto& p = prof[s];
        if (first) {
          seg.value = p.value;
          seg.arg = p.arg;
          seg.exact = p.exact;
          first = false;
        } else {
          if (!p.exact || p.value != seg.value) seg.exact = false;
          if (better(p.value, seg.value, n.mode)) {
            seg.value = p.value;
            seg.arg = p.arg;
          }
        }
        ++s;
      }
      if (first) throw std::logic_error("profile: no segment covers an event interval");
      if (seg.exact) seg.arg = seg.lo;
      out.push_back(seg);
    }
    prof = std::move(out);
  }
}

void rotate_node(NodeState& n) {
  const int d = n.d;
  auto rot = [d](Point& p) { std::rotate(p.begin(), p.begin() + 1, p.begin() + d); };
  rot(n.cell_lo);
  rot(n.cell_hi);
  for (auto& o : n.b_list) {
    rot(o.lo);
    rot(o.hi);
  }
  for (auto& o : n.e_list) {
    rot(o.lo);
    rot(o.hi);
  }
  if (!n.profiles.empty()) std::rotate(n.profiles.begin(), n.profiles.begin() + 1, n.profiles.end());
  n.rotation = (n.rotation + 1) % d;
}

}  // namespace

Cell NodeState::cell() const {
  Cell c;
  c.d = d;
  c.lo = cell_lo;
  c.hi = cell_hi;
  return c;
}

double face_weight(const Face& f, const NodeState& node) {
  return hk::face_weight(f.axis_i + 1, f.axis_j + 1, f.kind, node.t, node.d);
}

std::vector<Face> short_faces(const NodeState& node) {
  std::vector<Face> faces;
  auto emit = [&](const Object& o, FaceKind kind) {
    if (!meets(o, node.cell_lo, node.cell_hi, node.d)) return;
    std::array<std::array<Coord, 2>, kMaxDim> sides{};
    std::array<int, kMaxDim> ns{};
    int axes = 0;
    for (int k = 0; k < node.d; ++k) {
      if (inside(o.lo[k], node.cell_lo[k], node.cell_hi[k])) sides[k][ns[k]++] = o.lo[k];
      if (o.hi[k] != o.lo[k] && inside(o.hi[k], node.cell_lo[k], node.cell_hi[k])) {
        sides[k][ns[k]++] = o.hi[k];
      }
      if (ns[k] > 0) ++axes;
    }
    if (axes < 2) return;
    for (int i = 0; i < node.d; ++i) {
      for (int j = i + 1; j < node.d; ++j) {
        for (int a = 0; a < ns[i]; ++a) {
          for (int b = 0; b < ns[j]; ++b) faces.push_back({i, j, sides[i][a], sides[j][b], kind});
        }
      }
    }
  };
  for (const auto& o : node.b_list) emit(o, FaceKind::B);
  for (const auto& o : node.e_list) emit(o, FaceKind::E);
  return faces;
}

double short_weight(const NodeState& node) {
  double w = 0;
  for (const auto& f : short_faces(node)) w += face_weight(f, node);
  return w;
}

NodeState shrink_long_eboxes(NodeState node, int axis, ShrinkRecord* record) {
  if (is_depth(node.mode)) throw std::logic_error("shrink_long_eboxes: depth nodes fold slabs instead");
  std::vector<std::pair<Coord, Coord>> slabs;
  std::vector<Object> kept;
  kept.reserve(node.e_list.size());
  for (const auto& e : node.e_list) {
    int ax = -1;
    const bool targeted = meets(e, node.cell_lo, node.cell_hi, node.d) &&
                          !contains(e, node.cell_lo, node.cell_hi, node.d) &&
                          crossing(e, node, &ax) == 1 && ax == axis;
    if (!targeted) {
      kept.push_back(e);
      continue;
    }
    slabs.emplace_back(std::max(e.lo[axis], node.cell_lo[axis]), std::min(e.hi[axis], node.cell_hi[axis]));
  }
  if (slabs.empty()) return node;
  std::sort(slabs.begin(), slabs.end());
  std::vector<std::pair<Coord, Coord>> merged;
  for (const auto& s : slabs) {
    if (!merged.empty() && s.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, s.second);
    } else {
      merged.push_back(s);
    }
  }
  node.e_list = std::move(kept);
  auto apply = [&](Object& o) {
    o.lo[axis] = remap(o.lo[axis], merged);
    o.hi[axis] = remap(o.hi[axis], merged);
  };
  for (auto& o : node.b_list) apply(o);
  for (auto& o : node.e_list) apply(o);
  node.cell_lo[axis] = remap(node.cell_lo[axis], merged);
  node.cell_hi[axis] = remap(node.cell_hi[axis], merged);
  if (record) {
    record->axis = axis;
    record->removed.clear();
    for (const auto& [a, b] : merged) record->removed.emplace_back(remap(a, merged), b - a);
  }
  return node;
}

ReduceResult reduce(NodeState node) {
  ReduceResult res;
  res.node = std::move(node);
  NodeState& n = res.node;
  const bool depth = is_depth(n.mode);
  const int d = n.d;

  if (cell_degenerate(n)) {
    if (depth) throw std::logic_error("reduce: degenerate cell in depth mode");
    res.empty = true;
    return res;
  }

  for (;;) {
    // Eboxes: drop the ones missing the cell, absorb the ones containing it.
    {
      std::vector<Object> kept;
      kept.reserve(n.e_list.size());
      for (auto& e : n.e_list) {
        if (!meets(e, n.cell_lo, n.cell_hi, d)) continue;
        if (contains(e, n.cell_lo, n.cell_hi, d)) {
          if (!depth) {
            res.empty = true;
            return res;
          }
          n.offset += e.weight;
          continue;
        }
        kept.push_back(std::move(e));
      }
      n.e_list = std::move(kept);
    }

    // Orthants, one color class at a time.
    std::vector<Object> kept_b;
    kept_b.reserve(n.b_list.size());
    std::vector<int> kept_colors;
    kept_colors.reserve(n.colors.size());
    std::size_t pos = 0;
    for (const int color : n.colors) {
      while (pos < n.b_list.size() && n.b_list[pos].color < color) ++pos;
      const std::size_t begin = pos;
      while (pos < n.b_list.size() && n.b_list[pos].color == color) ++pos;

      bool satisfied = false;
      std::vector<const Object*> shorts;
      // Most permissive long orthant per (axis, side): side 0 = x >= a, side 1 = x < a.
      std::array<std::array<const Object*, 2>, kMaxDim> best{};
      bool any_long = false;
      for (std::size_t i = begin; i < pos && !satisfied; ++i) {
        const Object& o = n.b_list[i];
        if (!meets(o, n.cell_lo, n.cell_hi, d)) continue;
        if (contains(o, n.cell_lo, n.cell_hi, d)) {
          satisfied = true;
          break;
        }
        int ax = -1;
        if (crossing(o, n, &ax) >= 2) {
          shorts.push_back(&o);
          continue;
        }
        any_long = true;
        if (inside(o.lo[ax], n.cell_lo[ax], n.cell_hi[ax])) {
          auto& slot = best[ax][0];
          if (!slot || o.lo[ax] < slot->lo[ax]) slot = &o;
        } else {
          auto& slot = best[ax][1];
          if (!slot || o.hi[ax] > slot->hi[ax]) slot = &o;
        }
      }

      if (!satisfied && shorts.empty() && any_long) {
        // The class is a union of halfspaces here: its complement is one box.
        Object comp;
        comp.color = -1;
        for (int k = 0; k < d; ++k) {
          comp.lo[k] = best[k][1] ? best[k][1]->hi[k] : kNegInf;
          comp.hi[k] = best[k][0] ? best[k][0]->lo[k] : kPosInf;
        }
        bool comp_meets = true;
        for (int k = 0; k < d; ++k) {
          if (!(comp.lo[k] < comp.hi[k])) comp_meets = false;
        }
        if (comp_meets && !meets(comp, n.cell_lo, n.cell_hi, d)) comp_meets = false;
        if (!comp_meets) {
          satisfied = true;
        } else {
          comp.weight = depth ? -1 : 0;
          if (depth) n.offset += 1;
          n.e_list.push_back(comp);
          continue;
        }
      }

      if (satisfied) {
        if (depth) n.offset += 1;
        continue;
      }
      if (shorts.empty()) {
        // Color absent from the cell.
        if (!depth) {
          res.empty = true;
          return res;
        }
        continue;
      }
      for (const Object* o : shorts) kept_b.push_back(*o);
      for (int k = 0; k < d; ++k) {
        for (int side = 0; side < 2; ++side) {
          if (best[k][side]) kept_b.push_back(*best[k][side]);
        }
      }
      kept_colors.push_back(color);
    }
    // Keep each class contiguous; within a class the order is irrelevant.
    std::stable_sort(kept_b.begin(), kept_b.end(),
                     [](const Object& a, const Object& b) { return a.color < b.color; });
    n.b_list = std::move(kept_b);
    n.colors = std::move(kept_colors);

    // Long eboxes.
    bool changed = false;
    if (depth) {
      std::vector<Object> kept;
      kept.reserve(n.e_list.size());
      for (auto& e : n.e_list) {
        int ax = -1;
        if (crossing(e, n, &ax) == 1) {
          fold_slab(n.profiles[ax], std::max(e.lo[ax], n.cell_lo[ax]), std::min(e.hi[ax], n.cell_hi[ax]),
                    e.weight);
        } else {
          kept.push_back(std::move(e));
        }
      }
      n.e_list = std::move(kept);
    } else {
      std::array<bool, kMaxDim> has_long{};
      for (const auto& e : n.e_list) {
        int ax = -1;
        if (crossing(e, n, &ax) == 1) has_long[ax] = true;
      }
      for (int k = 0; k < d; ++k) {
        if (!has_long[k]) continue;
        ShrinkRecord rec;
        n = shrink_long_eboxes(std::move(n), k, &rec);
        res.shrinks.push_back(std::move(rec));
        changed = true;
      }
      if (changed && cell_degenerate(n)) {
        res.empty = true;
        return res;
      }
    }
    if (!changed) break;
  }

  if (depth) collapse_profiles(n);
  return res;
}

Coord weighted_median(std::vector<std::pair<Coord, double>> items) {
  if (items.empty()) throw std::logic_error("weighted_median: no items");
  std::sort(items.begin(), items.end());
  double total = 0;
  for (const auto& [x, w] : items) total += w;
  double cum = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    cum += items[i].second;
    const bool last_of_value = i + 1 == items.size() || items[i + 1].first != items[i].first;
    if (last_of_value && cum >= total / 2) return items[i].first;
  }
  return items.back().first;
}

std::vector<NodeState> split(const NodeState& node) {
  const int d = node.d;
  std::vector<std::pair<Coord, double>> axis0;
  for (const auto& f : short_faces(node)) {
    if (f.axis_i == 0) axis0.emplace_back(f.fixed_i, face_weight(f, node));
  }
  std::vector<NodeState> children;
  if (axis0.empty()) {
    NodeState child = node;
    rotate_node(child);
    child.depth = node.depth + 1;
    children.push_back(std::move(child));
    return children;
  }

  const Coord m = weighted_median(std::move(axis0));

  for (int side = 0; side < 2; ++side) {
    NodeState child;
    child.d = d;
    child.mode = node.mode;
    child.cell_lo = node.cell_lo;
    child.cell_hi = node.cell_hi;
    if (side == 0) {
      child.cell_hi[0] = m;
    } else {
      child.cell_lo[0] = m;
    }
    child.colors = node.colors;
    child.rotation = node.rotation;
    child.t = node.t;
    child.offset = node.offset;
    child.depth = node.depth + 1;
    for (const auto& o : node.b_list) {
      if (meets(o, child.cell_lo, child.cell_hi, d)) child.b_list.push_back(o);
    }
    for (const auto& o : node.e_list) {
      if (meets(o, child.cell_lo, child.cell_hi, d)) child.e_list.push_back(o);
    }
    if (is_depth(node.mode)) {
      child.profiles = node.profiles;
      auto& prof = child.profiles[0];
      split_profile_at(prof, m);
      std::vector<ProfileSegment> part;
      for (const auto& s : prof) {
        if (s.lo >= child.cell_lo[0] && s.hi <= child.cell_hi[0]) part.push_back(s);
      }
      prof = std::move(part);
    }
    rotate_node(child);
    children.push_back(std::move(child));
  }
  return children;
}

namespace {

struct BaseEnumerator {
  const NodeState& n;
  std::vector<std::vector<Coord>> events;
  // Per axis, per event interval: extremum of the profile and its position.
  std::vector<std::vector<std::pair<std::int64_t, Coord>>> profile_ext;
  std::array<std::size_t, kMaxDim> at{};
  NodeAnswer ans;
  bool found = false;
  bool have_depth = false;
  Point best_point{};
  unsigned __int128 vol_acc = 0;

  explicit BaseEnumerator(const NodeState& node) : n(node) {
    const int d = n.d;
    events.resize(d);
    for (int k = 0; k < d; ++k) {
      auto& ev = events[k];
      ev = {n.cell_lo[k], n.cell_hi[k]};
      auto add = [&](const Object& o) {
        if (inside(o.lo[k], n.cell_lo[k], n.cell_hi[k])) ev.push_back(o.lo[k]);
        if (inside(o.hi[k], n.cell_lo[k], n.cell_hi[k])) ev.push_back(o.hi[k]);
      };
      for (const auto& o : n.b_list) add(o);
      for (const auto& o : n.e_list) add(o);
      std::sort(ev.begin(), ev.end());
      ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
    }
    if (is_depth(n.mode)) {
      profile_ext.resize(d);
      for (int k = 0; k < d; ++k) {
        const auto& ev = events[k];
        const auto& prof = n.profiles[k];
        for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
          bool first = true;
          std::pair<std::int64_t, Coord> ext{0, ev[i]};
          for (const auto& s : prof) {
            if (s.hi <= ev[i] || s.lo >= ev[i + 1]) continue;
            if (!s.exact && (s.lo < ev[i] || s.hi > ev[i + 1])) {
              throw std::logic_error("base case: collapsed profile segment straddles an event");
            }
            const Coord arg = s.exact ? std::max(s.lo, ev[i]) : s.arg;
            if (first || better(s.value, ext.first, n.mode)) {
              ext = {s.value, arg};
              first = false;
            }
          }
          if (first) throw std::logic_error("base case: profile does not cover the cell");
          profile_ext[k].push_back(ext);
        }
      }
    }
  }

  void flush_volume() {
    ans.volume += BigInt(vol_acc);
    vol_acc = 0;
  }

  void add_volume() {
    unsigned __int128 prod = 1;
    bool overflow = false;
    for (int k = 0; k < n.d; ++k) {
      const auto len = static_cast<unsigned __int128>(events[k][at[k] + 1] - events[k][at[k]]);
      if (__builtin_mul_overflow(prod, len, &prod)) {
        overflow = true;
        break;
      }
    }
    if (overflow) {
      BigInt big = 1;
      for (int k = 0; k < n.d; ++k) big *= BigInt(events[k][at[k] + 1] - events[k][at[k]]);
      ans.volume += big;
      return;
    }
    if (__builtin_add_overflow(vol_acc, prod, &vol_acc)) {
      flush_volume();
      vol_acc = prod;
    }
  }

  static std::size_t distinct_colors(const std::vector<const Object*>& bs) {
    std::size_t c = 0;
    int last = -1;
    for (const Object* o : bs) {
      if (o->color != last) {
        ++c;
        last = o->color;
      }
    }
    return c;
  }

  void leaf(const std::vector<const Object*>& bs, const std::vector<const Object*>& es) {
    const int d = n.d;
    if (!is_depth(n.mode)) {
      if (!es.empty() || distinct_colors(bs) != n.colors.size()) return;
      if (n.mode == Mode::Volume) {
        add_volume();
      } else {
        Point w{};
        for (int k = 0; k < d; ++k) w[k] = events[k][at[k]];
        ans.witness = w;
        found = true;
      }
      return;
    }
    std::int64_t v = n.offset + static_cast<std::int64_t>(distinct_colors(bs));
    for (const Object* e : es) v += e->weight;
    Point w{};
    for (int k = 0; k < d; ++k) {
      const auto& ext = profile_ext[k][at[k]];
      v += ext.first;
      w[k] = ext.second;
    }
    if (!have_depth || better(v, ans.depth, n.mode)) {
      have_depth = true;
      ans.depth = v;
      ans.witness = w;
    }
  }

  void slice(int axis, const std::vector<const Object*>& bs, const std::vector<const Object*>& es) {
    if (axis == n.d) {
      leaf(bs, es);
      return;
    }
    const auto& ev = events[axis];
    std::vector<const Object*> nb, ne;
    nb.reserve(bs.size());
    ne.reserve(es.size());
    for (std::size_t i = 0; i + 1 < ev.size() && !found; ++i) {
      nb.clear();
      ne.clear();
      for (const Object* o : bs) {
        if (o->lo[axis] < ev[i + 1] && o->hi[axis] > ev[i]) nb.push_back(o);
      }
      for (const Object* o : es) {
        if (o->lo[axis] < ev[i + 1] && o->hi[axis] > ev[i]) ne.push_back(o);
      }
      if (!is_depth(n.mode)) {
        if (distinct_colors(nb) != n.colors.size()) continue;
        bool excluded = false;
        for (const Object* e : ne) {
          bool covers_rest = true;
          for (int k = axis + 1; k < n.d && covers_rest; ++k) {
            covers_rest = e->lo[k] <= n.cell_lo[k] && e->hi[k] >= n.cell_hi[k];
          }
          if (covers_rest) {
            excluded = true;
            break;
          }
        }
        if (excluded) continue;
      }
      at[axis] = i;
      slice(axis + 1, nb, ne);
    }
  }

  NodeAnswer run() {
    std::vector<const Object*> bs, es;
    for (const auto& o : n.b_list) {
      if (meets(o, n.cell_lo, n.cell_hi, n.d)) bs.push_back(&o);
    }
    for (const auto& o : n.e_list) {
      if (meets(o, n.cell_lo, n.cell_hi, n.d)) es.push_back(&o);
    }
    slice(0, bs, es);
    flush_volume();
    if (is_depth(n.mode) && !have_depth) throw std::logic_error("base case: empty depth cell");
    return std::move(ans);
  }
};

}  // namespace

NodeAnswer base_case(const NodeState& node) {
  if (cell_degenerate(node)) {
    if (is_depth(node.mode)) throw std::logic_error("base case: degenerate depth cell");
    return {};
  }
  if (!is_depth(node.mode)) {
    std::size_t present = 0;
    int last = -1;
    for (const auto& o : node.b_list) {
      if (o.color != last && meets(o, node.cell_lo, node.cell_hi, node.d)) {
        ++present;
        last = o.color;
      }
    }
    if (present < node.colors.size()) return {};
  }
  return BaseEnumerator(node).run();
}

std::string check_reduced(const NodeState& n) {
  std::ostringstream err;
  const int d = n.d;
  std::map<int, int> longs, shorts;
  for (const auto& o : n.b_list) {
    if (!meets(o, n.cell_lo, n.cell_hi, d)) err << "orthant of color " << o.color << " misses the cell; ";
    if (contains(o, n.cell_lo, n.cell_hi, d)) err << "orthant of color " << o.color << " contains the cell; ";
    if (crossing(o, n) >= 2) {
      ++shorts[o.color];
    } else {
      ++longs[o.color];
    }
  }
  for (const auto& [color, count] : longs) {
    if (count > 2 * d) err << "color " << color << " keeps " << count << " long orthants; ";
    if (shorts[color] == 0) err << "color " << color << " has long orthants but no short one; ";
  }
  for (const auto& e : n.e_list) {
    if (!meets(e, n.cell_lo, n.cell_hi, d)) err << "ebox misses the cell; ";
    if (contains(e, n.cell_lo, n.cell_hi, d)) err << "ebox contains the cell; ";
    if (crossing(e, n) < 2) err << "long ebox survived; ";
  }
  for (std::size_t i = 1; i < n.b_list.size(); ++i) {
    if (n.b_list[i - 1].color > n.b_list[i].color) err << "orthants not grouped by color; ";
  }
  return err.str();
}

}  // namespace hk::gkmp
