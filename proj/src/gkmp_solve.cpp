#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hk/gkmp.hpp"

namespace hk {

namespace {

void check_coord(Coord v, Coord limit, const std::string& what) {
  if (is_finite(v) && (v > limit || v < -limit)) {
    throw InputError(what + ": coordinate " + std::to_string(v) + " exceeds the magnitude bound");
  }
}

}  // namespace

void GkmpInstance::validate(Coord limit) const {
  if (d < 2 || d > kMaxDim) throw InputError("gkmp: dimension must be in [2, 8]");
  if (n_colors < 0) throw InputError("gkmp: negative color count");
  if (clip.d != d) throw InputError("gkmp: clip dimension mismatch");
  clip.validate();
  if (!clip.all_finite()) throw InputError("gkmp: clip must be finite");
  for (int k = 0; k < d; ++k) {
    check_coord(clip.lo[k], limit, "clip");
    check_coord(clip.hi[k], limit, "clip");
  }
  for (std::size_t i = 0; i < orthants.size(); ++i) {
    const auto& o = orthants[i];
    const std::string where = "orthant " + std::to_string(i);
    if (o.orthant.d != d) throw InputError(where + ": dimension mismatch");
    if (o.color < 0 || o.color >= n_colors) throw InputError(where + ": color out of range");
    for (int k = 0; k < d; ++k) {
      const auto& a = o.orthant.axes[k];
      if (a.kind != BoundKind::Free) {
        if (!is_finite(a.value)) throw InputError(where + ": bound must be finite");
        check_coord(a.value, limit, where);
      }
    }
  }
  for (std::size_t i = 0; i < eboxes.size(); ++i) {
    const auto& e = eboxes[i];
    const std::string where = "ebox " + std::to_string(i);
    if (e.box.d != d) throw InputError(where + ": dimension mismatch");
    e.box.validate();
    for (int k = 0; k < d; ++k) {
      check_coord(e.box.lo[k], limit, where);
      check_coord(e.box.hi[k], limit, where);
    }
  }
}

std::int64_t depth_at_doubled(const GkmpInstance& inst, const Point& x2) {
  std::int64_t v = inst.depth_offset;
  std::vector<char> seen(static_cast<std::size_t>(inst.n_colors), 0);
  for (const auto& o : inst.orthants) {
    if (!seen[o.color] && contains_doubled(o.orthant, x2)) {
      seen[o.color] = 1;
      ++v;
    }
  }
  for (const auto& e : inst.eboxes) {
    if (contains_doubled(e.box, x2)) v += e.weight;
  }
  return v;
}

bool is_colorful_doubled(const GkmpInstance& inst, const Point& x2) {
  if (!contains_doubled(inst.clip, x2)) return false;
  std::vector<char> seen(static_cast<std::size_t>(inst.n_colors), 0);
  int covered = 0;
  for (const auto& o : inst.orthants) {
    if (!seen[o.color] && contains_doubled(o.orthant, x2)) {
      seen[o.color] = 1;
      ++covered;
    }
  }
  if (covered != inst.n_colors) return false;
  for (const auto& e : inst.eboxes) {
    if (contains_doubled(e.box, x2)) return false;
  }
  return true;
}

namespace gkmp {

namespace {

bool is_depth(Mode m) { return m == Mode::DepthMin || m == Mode::DepthMax; }

Coord lattice_hi(Coord v) { return is_finite(v) ? v + 1 : v; }

struct Context {
  const Options& options;
  int max_depth = 0;
  int task_depth = 0;
};

Point to_root_frame(const Point& w, int d, int rotation) {
  Point out{};
  for (int k = 0; k < d; ++k) out[(k + rotation) % d] = w[k];
  return out;
}

void unrotate_child(NodeAnswer& a, int d) {
  if (!a.witness) return;
  Point out{};
  for (int k = 0; k < d; ++k) out[(k + 1) % d] = (*a.witness)[k];
  a.witness = out;
}

void unshrink(NodeAnswer& a, const std::vector<ShrinkRecord>& shrinks) {
  if (!a.witness) return;
  for (auto it = shrinks.rbegin(); it != shrinks.rend(); ++it) {
    Coord& x = (*a.witness)[it->axis];
    Coord add = 0;
    for (const auto& [at, length] : it->removed) {
      if (at <= x) add += length;
    }
    x += add;
  }
}

NodeAnswer merge(const NodeState& parent, NodeAnswer left, NodeAnswer right) {
  switch (parent.mode) {
    case Mode::Volume:
      left.volume += right.volume;
      return left;
    case Mode::Exists:
      return left.witness ? std::move(left) : std::move(right);
    default: {
      const bool want_max = parent.mode == Mode::DepthMax;
      if (left.depth != right.depth) {
        const bool right_better = want_max ? right.depth > left.depth : right.depth < left.depth;
        return right_better ? std::move(right) : std::move(left);
      }
      const Point lw = to_root_frame(*left.witness, parent.d, parent.rotation);
      const Point rw = to_root_frame(*right.witness, parent.d, parent.rotation);
      return std::lexicographical_compare(rw.begin(), rw.begin() + parent.d, lw.begin(), lw.begin() + parent.d)
                 ? std::move(right)
                 : std::move(left);
    }
  }
}

NodeAnswer solve_rec(NodeState node, const Context& ctx) {
  if (node.depth > ctx.max_depth) {
    throw std::logic_error("gkmp: recursion depth guard exceeded (" + std::to_string(node.depth) + ")");
  }
  ReduceResult red = reduce(std::move(node));
  if (red.empty) return {};
  if (ctx.options.hooks.after_reduce) ctx.options.hooks.after_reduce(red.node);
  const NodeState& n = red.node;

  NodeAnswer ans;
  if (short_faces(n).size() <= ctx.options.base_face_threshold) {
    ans = base_case(n);
  } else {
    std::vector<NodeState> children = split(n);
    if (ctx.options.hooks.after_split) ctx.options.hooks.after_split(n, children);
    if (children.size() == 1) {
      ans = solve_rec(std::move(children[0]), ctx);
      unrotate_child(ans, n.d);
    } else {
      NodeAnswer a, b;
#ifdef _OPENMP
      const bool spawn = ctx.options.threads > 1 && n.depth < ctx.task_depth && omp_in_parallel();
#else
      const bool spawn = false;
#endif
      if (spawn) {
        std::exception_ptr err_a, err_b;
#pragma omp task default(none) shared(a, err_a, children, ctx)
        {
          try {
            a = solve_rec(std::move(children[0]), ctx);
          } catch (...) {
            err_a = std::current_exception();
          }
        }
#pragma omp task default(none) shared(b, err_b, children, ctx)
        {
          try {
            b = solve_rec(std::move(children[1]), ctx);
          } catch (...) {
            err_b = std::current_exception();
          }
        }
#pragma omp taskwait
        if (err_a) std::rethrow_exception(err_a);
        if (err_b) std::rethrow_exception(err_b);
      } else {
        a = solve_rec(std::move(children[0]), ctx);
        if (!(n.mode == Mode::Exists && a.witness)) b = solve_rec(std::move(children[1]), ctx);
      }
      unrotate_child(a, n.d);
      unrotate_child(b, n.d);
      ans = merge(n, std::move(a), std::move(b));
    }
  }
  unshrink(ans, red.shrinks);
  return ans;
}

int depth_guard(const NodeState& root) {
  const double d = root.d;
  const double pairs = d * (d - 1) / 2;
  const double objects = static_cast<double>(root.b_list.size() + root.e_list.size() + root.colors.size() + 1);
  // Every object contributes at most 4 faces per axis pair, each of weight < 4.
  const double w_bound = std::max(2.0, objects * pairs * 16.0 * root.t);
  return static_cast<int>(d * std::ceil(d / 2 * std::log2(w_bound)) + d);
}

}  // namespace

NodeState make_root(const GkmpInstance& inst, Mode mode) {
  NodeState n;
  n.d = inst.d;
  n.mode = mode;
  const bool lattice = mode != Mode::Volume;
  for (int k = 0; k < inst.d; ++k) {
    n.cell_lo[k] = inst.clip.lo[k];
    n.cell_hi[k] = lattice ? lattice_hi(inst.clip.hi[k]) : inst.clip.hi[k];
  }
  std::vector<char> present(static_cast<std::size_t>(inst.n_colors), 0);
  for (const auto& co : inst.orthants) {
    const AxisBox box = co.orthant.to_box();
    Object o;
    o.color = co.color;
    for (int k = 0; k < inst.d; ++k) {
      o.lo[k] = box.lo[k];
      o.hi[k] = lattice ? lattice_hi(box.hi[k]) : box.hi[k];
    }
    n.b_list.push_back(o);
    present[co.color] = 1;
  }
  std::stable_sort(n.b_list.begin(), n.b_list.end(),
                   [](const Object& a, const Object& b) { return a.color < b.color; });
  for (const auto& e : inst.eboxes) {
    Object o;
    o.weight = e.weight;
    bool degenerate = false;
    for (int k = 0; k < inst.d; ++k) {
      o.lo[k] = e.box.lo[k];
      o.hi[k] = lattice ? lattice_hi(e.box.hi[k]) : e.box.hi[k];
      if (!(o.lo[k] < o.hi[k])) degenerate = true;
    }
    if (!degenerate) n.e_list.push_back(o);
  }
  for (int c = 0; c < inst.n_colors; ++c) {
    if (present[c] || !is_depth(mode)) n.colors.push_back(c);
  }
  const std::size_t total = n.b_list.size() + n.e_list.size();
  n.t = std::max(1.0, std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(total, 1)))));
  n.offset = inst.depth_offset;
  if (is_depth(mode)) {
    n.profiles.resize(inst.d);
    for (int k = 0; k < inst.d; ++k) n.profiles[k].push_back({n.cell_lo[k], n.cell_hi[k], 0, n.cell_lo[k], true});
  }
  return n;
}

NodeAnswer solve_node(const NodeState& root, const Options& options) {
  Context ctx{options, depth_guard(root) + root.depth, 0};
#ifdef _OPENMP
  if (options.threads > 1) {
    ctx.task_depth = root.depth + 4 * root.d + 8;
    NodeAnswer out;
    std::exception_ptr err;
#pragma omp parallel num_threads(options.threads) default(none) shared(out, err, root, ctx)
#pragma omp single
    {
      try {
        out = solve_rec(root, ctx);
      } catch (...) {
        err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return out;
  }
#endif
  return solve_rec(root, ctx);
}

}  // namespace gkmp

namespace {

struct Encoded {
  GkmpInstance lattice;
  RankMap map;
};

Encoded encode(const GkmpInstance& inst) {
  std::vector<AxisBox> boxes;
  boxes.reserve(inst.orthants.size() + inst.eboxes.size());
  for (const auto& o : inst.orthants) boxes.push_back(o.orthant.to_box());
  for (const auto& e : inst.eboxes) boxes.push_back(e.box);
  RankEncoded enc = rank_space_encode(boxes, inst.clip);

  Encoded out;
  out.map = std::move(enc.map);
  auto& li = out.lattice;
  li.d = inst.d;
  li.n_colors = inst.n_colors;
  li.clip = enc.cell;
  li.depth_offset = inst.depth_offset;
  for (std::size_t i = 0; i < inst.orthants.size(); ++i) {
    // Closed orthants never encode to the empty set.
    li.orthants.push_back({Orthant::from_box(*enc.boxes[i]), inst.orthants[i].color});
  }
  for (std::size_t i = 0; i < inst.eboxes.size(); ++i) {
    const auto& b = enc.boxes[inst.orthants.size() + i];
    if (!b) continue;
    EBox e{*b, inst.eboxes[i].weight};
    e.box.openness = Openness::Closed;
    li.eboxes.push_back(e);
  }
  return out;
}

Point decode(const RankMap& map, const Point& w, int d) {
  Point out{};
  for (int k = 0; k < d; ++k) out[k] = map.decode_doubled(k, w[k]);
  return out;
}

}  // namespace

BigInt solve_volume(const GkmpInstance& inst, const gkmp::Options& options) {
  inst.validate(kInternalCoordLimit);
  for (const auto& e : inst.eboxes) {
    if (e.weight != 0) throw InputError("volume: eboxes must carry weight 0");
  }
  return gkmp::solve_node(gkmp::make_root(inst, gkmp::Mode::Volume), options).volume;
}

std::optional<Point> solve_exists_colorful(const GkmpInstance& inst, const gkmp::Options& options) {
  inst.validate(kInternalCoordLimit);
  for (const auto& e : inst.eboxes) {
    if (e.weight != 0) throw InputError("exists: eboxes must carry weight 0");
  }
  const Encoded enc = encode(inst);
  const auto ans = gkmp::solve_node(gkmp::make_root(enc.lattice, gkmp::Mode::Exists), options);
  if (!ans.witness) return std::nullopt;
  const Point x2 = decode(enc.map, *ans.witness, inst.d);
  if (!is_colorful_doubled(inst, x2)) throw std::logic_error("exists: witness failed re-verification");
  return x2;
}

DepthAnswer solve_depth(const GkmpInstance& inst, DepthMode mode, const gkmp::Options& options) {
  inst.validate(kInternalCoordLimit);
  const Encoded enc = encode(inst);
  const auto m = mode == DepthMode::Max ? gkmp::Mode::DepthMax : gkmp::Mode::DepthMin;
  const auto ans = gkmp::solve_node(gkmp::make_root(enc.lattice, m), options);
  if (!ans.witness) throw std::logic_error("depth: solver returned no witness");
  DepthAnswer out;
  out.value = ans.depth;
  out.witness = decode(enc.map, *ans.witness, inst.d);
  if (depth_at_doubled(inst, out.witness) != out.value) {
    throw std::logic_error("depth: witness failed re-verification");
  }
  return out;
}

}  // namespace hk
