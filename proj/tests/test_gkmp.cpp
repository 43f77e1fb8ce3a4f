#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "hk/generators.hpp"
#include "hk/oracles.hpp"
#include "test_util.hpp"

using namespace hk;
using namespace hk::test;
using gkmp::Mode;
using gkmp::NodeState;
using gkmp::Object;

namespace {

struct NodeTruth {
  BigInt volume = 0;
  bool exists = false;
  std::int64_t depth = 0;
  bool have_depth = false;
};

bool covers(const Object& o, const Point& z, int d) {
  for (int k = 0; k < d; ++k) {
    if (!(o.lo[k] <= z[k] && z[k] + 1 <= o.hi[k])) return false;
  }
  return true;
}

std::int64_t profile_at(const std::vector<gkmp::ProfileSegment>& prof, Coord z) {
  for (const auto& s : prof) {
    if (s.lo <= z && z < s.hi) return s.value;
  }
  FAIL("profile does not cover " << z);
  return 0;
}

// Direct evaluation over the unit cells [z, z+1)^d of the node cell. All node
// coordinates are integers, so every mode is decided cell by cell.
NodeTruth brute_node(const NodeState& n) {
  NodeTruth out;
  const int d = n.d;
  for (int k = 0; k < d; ++k) {
    if (n.cell_hi[k] <= n.cell_lo[k]) return out;
  }
  const bool depth = n.mode == Mode::DepthMin || n.mode == Mode::DepthMax;
  Point z = n.cell_lo;
  for (;;) {
    std::set<int> hit;
    for (const auto& o : n.b_list) {
      if (covers(o, z, d)) hit.insert(o.color);
    }
    if (depth) {
      std::int64_t v = n.offset + static_cast<std::int64_t>(hit.size());
      for (const auto& e : n.e_list) {
        if (covers(e, z, d)) v += e.weight;
      }
      for (int k = 0; k < d; ++k) v += profile_at(n.profiles[k], z[k]);
      if (!out.have_depth || (n.mode == Mode::DepthMax ? v > out.depth : v < out.depth)) out.depth = v;
      out.have_depth = true;
    } else {
      bool ok = true;
      for (int c : n.colors) ok = ok && hit.count(c) > 0;
      for (const auto& e : n.e_list) ok = ok && !covers(e, z, d);
      if (ok) {
        out.volume += 1;
        out.exists = true;
      }
    }
    int k = d - 1;
    while (k >= 0 && ++z[k] == n.cell_hi[k]) {
      z[k] = n.cell_lo[k];
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

void check_same(const NodeTruth& a, const NodeTruth& b, Mode mode) {
  switch (mode) {
    case Mode::Volume: REQUIRE(a.volume == b.volume); break;
    case Mode::Exists: REQUIRE(a.exists == b.exists); break;
    default: REQUIRE(a.depth == b.depth); break;
  }
}

// Walks reduce/split a few levels deep, comparing every transformed node with
// its parent by brute force.
void walk(const NodeState& node, int levels, int& checked) {
  const NodeTruth before = brute_node(node);
  const auto red = gkmp::reduce(node);
  if (red.empty) {
    REQUIRE(node.mode != Mode::DepthMin);
    REQUIRE(node.mode != Mode::DepthMax);
    REQUIRE_FALSE(before.exists);
    REQUIRE(before.volume == 0);
    ++checked;
    return;
  }
  REQUIRE(gkmp::check_reduced(red.node) == "");
  check_same(before, brute_node(red.node), node.mode);
  ++checked;
  if (levels == 0 || gkmp::short_faces(red.node).size() <= 4) return;
  const auto kids = gkmp::split(red.node);
  NodeTruth merged;
  bool first = true;
  for (const auto& kid : kids) {
    const NodeTruth t = brute_node(kid);
    merged.volume += t.volume;
    merged.exists = merged.exists || t.exists;
    if (first || (node.mode == Mode::DepthMax ? t.depth > merged.depth : t.depth < merged.depth)) {
      merged.depth = t.depth;
    }
    first = false;
  }
  check_same(brute_node(red.node), merged, node.mode);
  for (const auto& kid : kids) walk(kid, levels - 1, checked);
}

gkmp::NodeState bare_node(int d, Mode mode, std::initializer_list<Coord> lo, std::initializer_list<Coord> hi) {
  NodeState n;
  n.d = d;
  n.mode = mode;
  std::copy(lo.begin(), lo.end(), n.cell_lo.begin());
  std::copy(hi.begin(), hi.end(), n.cell_hi.begin());
  if (mode == Mode::DepthMin || mode == Mode::DepthMax) {
    n.profiles.resize(d);
    for (int k = 0; k < d; ++k) n.profiles[k].push_back({n.cell_lo[k], n.cell_hi[k], 0, n.cell_lo[k], true});
  }
  return n;
}

Object obj(std::initializer_list<Coord> lo, std::initializer_list<Coord> hi, int color, std::int64_t w = 0) {
  Object o;
  std::copy(lo.begin(), lo.end(), o.lo.begin());
  std::copy(hi.begin(), hi.end(), o.hi.begin());
  o.color = color;
  o.weight = w;
  return o;
}

BigInt box_union_volume(const std::vector<AxisBox>& boxes, const Cell& clip) {
  const int d = clip.d;
  std::vector<std::vector<Coord>> ev(d);
  for (int k = 0; k < d; ++k) {
    ev[k] = {clip.lo[k], clip.hi[k]};
    for (const auto& b : boxes) {
      ev[k].push_back(std::clamp(b.lo[k], clip.lo[k], clip.hi[k]));
      ev[k].push_back(std::clamp(b.hi[k], clip.lo[k], clip.hi[k]));
    }
    std::sort(ev[k].begin(), ev[k].end());
    ev[k].erase(std::unique(ev[k].begin(), ev[k].end()), ev[k].end());
  }
  BigInt total = 0;
  std::vector<std::size_t> at(d, 0);
  for (;;) {
    bool ok = true;
    for (int k = 0; k < d; ++k) ok = ok && at[k] + 1 < ev[k].size();
    if (ok) {
      bool inside = false;
      for (const auto& b : boxes) {
        bool in = true;
        for (int k = 0; k < d && in; ++k) in = b.lo[k] <= ev[k][at[k]] && ev[k][at[k] + 1] <= b.hi[k];
        if (in) {
          inside = true;
          break;
        }
      }
      if (inside) {
        BigInt v = 1;
        for (int k = 0; k < d; ++k) v *= ev[k][at[k] + 1] - ev[k][at[k]];
        total += v;
      }
    }
    int k = d - 1;
    while (k >= 0 && ++at[k] + 1 >= ev[k].size()) at[k--] = 0;
    if (k < 0) break;
  }
  return total;
}

}  // namespace

TEST_SUITE("gkmp") {
  TEST_CASE("solver examples") {
    CHECK(solve_volume(example24()) == 24);
    CHECK(solve_volume(example18()) == 18);
    CHECK(solve_volume(example8()) == 8);

    const auto d8 = example8();
    CHECK(solve_depth(d8, DepthMode::Max).value == 2);
    CHECK(solve_depth(d8, DepthMode::Min).value == 1);

    const auto all = instance(3, 3, box({0, 0, 0}, {5, 5, 5}),
                              {co(0, {F(), F(), F()}), co(1, {L(-1), F(), U(9)}), co(2, {U(5), L(0), F()})});
    CHECK(solve_depth(all, DepthMode::Max).value == 3);
    CHECK(solve_depth(all, DepthMode::Min).value == 3);

    const auto touch = instance(2, 2, box({0, 0}, {2, 2}), {co(0, {U(1), U(1)}), co(1, {L(1), L(1)})});
    const auto w = solve_exists_colorful(touch);
    REQUIRE(w.has_value());
    CHECK((*w)[0] == 2);
    CHECK((*w)[1] == 2);
    CHECK(solve_volume(touch) == 0);

    const auto apart = instance(2, 2, box({0, 0}, {3, 3}), {co(0, {U(1), U(1)}), co(1, {L(2), L(2)})});
    CHECK_FALSE(solve_exists_colorful(apart).has_value());

    const auto missing = instance(2, 3, box({0, 0}, {3, 3}), {co(0, {F(), F()}), co(1, {F(), F()})});
    CHECK(solve_volume(missing) == 0);
    CHECK_FALSE(solve_exists_colorful(missing).has_value());
    CHECK(solve_depth(missing, DepthMode::Max).value == 2);
  }

  TEST_CASE("invalid instances are rejected") {
    auto bad = example24();
    bad.orthants[0].color = 5;
    CHECK_THROWS_AS(solve_volume(bad), InputError);
    auto far = example24();
    far.clip.hi[0] = kUserCoordLimit * 2;
    CHECK_THROWS_AS(far.validate(), InputError);
    auto dim = example24();
    dim.orthants[1].orthant.d = 3;
    CHECK_THROWS_AS(solve_volume(dim), InputError);
  }

  TEST_CASE("reduce turns a lone long orthant into a shrunk slab") {
    NodeState n = bare_node(2, Mode::Volume, {0, 0}, {2, 2});
    n.b_list.push_back(obj({1, kNegInf}, {kPosInf, kPosInf}, 0));
    n.colors = {0};
    const auto r = gkmp::reduce(n);
    REQUIRE_FALSE(r.empty);
    CHECK(r.node.colors.empty());
    CHECK(r.node.b_list.empty());
    CHECK(r.node.e_list.empty());
    REQUIRE(r.shrinks.size() == 1);
    CHECK(r.shrinks[0].axis == 0);
    CHECK(r.node.cell_hi[0] - r.node.cell_lo[0] == 1);
    CHECK(r.node.cell_hi[1] - r.node.cell_lo[1] == 2);
    CHECK(gkmp::base_case(r.node).volume == 2);
  }

  TEST_CASE("reduce in depth mode adds a negative slab and offset") {
    for (auto mode : {Mode::DepthMax, Mode::DepthMin}) {
      NodeState n = bare_node(2, mode, {0, 0}, {2, 2});
      n.b_list.push_back(obj({1, kNegInf}, {kPosInf, kPosInf}, 0));
      n.colors = {0};
      const auto r = gkmp::reduce(n);
      REQUIRE_FALSE(r.empty);
      CHECK(r.node.offset == 1);
      CHECK(r.node.colors.empty());
      CHECK(r.node.e_list.empty());
      const auto& prof = r.node.profiles[0];
      REQUIRE_FALSE(prof.empty());
      const auto a = gkmp::base_case(r.node);
      CHECK(a.depth == (mode == Mode::DepthMax ? 1 : 0));
    }
  }

  TEST_CASE("reduce drops a color held by a containing orthant") {
    NodeState n = bare_node(2, Mode::DepthMax, {0, 0}, {4, 4});
    n.b_list.push_back(obj({-3, -3}, {kPosInf, kPosInf}, 0));
    n.colors = {0};
    const auto r = gkmp::reduce(n);
    CHECK(r.node.offset == 1);
    CHECK(r.node.b_list.empty());

    NodeState v = bare_node(2, Mode::Volume, {0, 0}, {4, 4});
    v.e_list.push_back(obj({-1, -1}, {5, 5}, -1));
    CHECK(gkmp::reduce(v).empty);
  }

  TEST_CASE("shrink example") {
    NodeState n = bare_node(2, Mode::Volume, {0, 0}, {10, 10});
    n.b_list.push_back(obj({5, kNegInf}, {kPosInf, 6}, 0));
    n.b_list.push_back(obj({9, kNegInf}, {kPosInf, 3}, 0));
    n.colors = {0};
    n.e_list.push_back(obj({2, kNegInf}, {4, kPosInf}, -1));
    n.e_list.push_back(obj({7, kNegInf}, {8, kPosInf}, -1));
    gkmp::ShrinkRecord rec;
    const auto s = gkmp::shrink_long_eboxes(n, 0, &rec);
    CHECK(s.e_list.empty());
    CHECK(s.b_list[0].lo[0] == 3);
    CHECK(s.b_list[1].lo[0] == 6);
    CHECK(s.cell_lo[0] == 0);
    CHECK(s.cell_hi[0] == 7);
    CHECK(rec.axis == 0);
    CHECK(rec.removed.size() == 2);
    CHECK(brute_node(s).volume == brute_node(n).volume);

    const auto same = gkmp::shrink_long_eboxes(s, 1);
    CHECK(same.cell_hi[1] == 10);
    CHECK(same.b_list[0].lo[0] == 3);
    CHECK(same.b_list[0].hi[1] == 6);
  }

  TEST_CASE("weighted median examples") {
    const double w = 2.0;
    CHECK(gkmp::weighted_median({{1, w}, {3, w}, {5, w}}) == 3);
    CHECK(gkmp::weighted_median({{5, 10}, {1, 1}, {3, 1}}) == 5);
    CHECK(gkmp::weighted_median({{4, 1}}) == 4);
    CHECK_THROWS(gkmp::weighted_median({}));
  }

  TEST_CASE("split example") {
    NodeState n = bare_node(2, Mode::Volume, {0, 0}, {6, 6});
    n.b_list.push_back(obj({1, 1}, {kPosInf, kPosInf}, 0));
    n.b_list.push_back(obj({3, 3}, {kPosInf, kPosInf}, 1));
    n.b_list.push_back(obj({5, 5}, {kPosInf, kPosInf}, 2));
    n.colors = {0, 1, 2};
    const auto kids = gkmp::split(n);
    REQUIRE(kids.size() == 2);
    // Axis 0 moved to the last position by the rotation.
    CHECK(kids[0].cell_lo[1] == 0);
    CHECK(kids[0].cell_hi[1] == 3);
    CHECK(kids[1].cell_lo[1] == 3);
    CHECK(kids[1].cell_hi[1] == 6);
    CHECK(kids[0].rotation == 1);
    CHECK(kids[0].cell_hi[0] == 6);

    NodeState flat = bare_node(2, Mode::Volume, {0, 0}, {6, 6});
    flat.b_list.push_back(obj({kNegInf, 2}, {kPosInf, kPosInf}, 0));
    flat.colors = {0};
    const auto one = gkmp::split(flat);
    REQUIRE(one.size() == 1);
    CHECK(one[0].b_list[0].lo[0] == 2);
  }

  TEST_CASE("base case examples") {
    NodeState v = bare_node(3, Mode::Volume, {0, 1, 2}, {3, 5, 7});
    CHECK(gkmp::base_case(v).volume == 3 * 4 * 5);
    NodeState e = bare_node(2, Mode::Exists, {4, 6}, {9, 9});
    const auto a = gkmp::base_case(e);
    REQUIRE(a.witness.has_value());
    CHECK((*a.witness)[0] == 4);
    CHECK((*a.witness)[1] == 6);
  }

  TEST_CASE("base case alone matches the oracles") {
    gkmp::Options base_only;
    base_only.base_face_threshold = std::numeric_limits<std::size_t>::max();
    for (int it = 0; it < 1000; ++it) {
      gen::GkmpParams p;
      p.d = 2 + it % 3;
      p.n = 4 + it % 9;
      p.colors = 1 + it % 4;
      p.coord_max = 12;
      p.eboxes = it % 3;
      const auto inst = gen::random_gkmp(p, 4000 + it);
      REQUIRE(solve_volume(inst, base_only) == oracle_volume(inst));
      REQUIRE(solve_exists_colorful(inst, base_only).has_value() == oracle_colorful_point(inst).has_value());
      auto plain = inst;
      plain.eboxes.clear();
      const auto mode = it % 2 ? DepthMode::Max : DepthMode::Min;
      REQUIRE(solve_depth(plain, mode, base_only).value == oracle_depth(plain, mode).value);
    }
  }

  TEST_CASE("reduce and split preserve node answers") {
    int checked = 0;
    for (int it = 0; it < 500; ++it) {
      gen::GkmpParams p;
      p.d = 2 + it % 2;
      p.n = 6 + it % 10;
      p.colors = 1 + it % 4;
      p.coord_max = 12;
      const auto mode = static_cast<Mode>(it % 4);
      if (mode == Mode::Volume || mode == Mode::Exists) p.eboxes = it % 4;
      const auto inst = gen::random_gkmp(p, 7000 + it);
      walk(gkmp::make_root(inst, mode), 3, checked);
    }
    CHECK(checked > 2000);
  }

  TEST_CASE("weighted eboxes in depth nodes") {
    for (int it = 0; it < 200; ++it) {
      gen::GkmpParams p;
      p.d = 2 + it % 2;
      p.n = 8;
      p.colors = 3;
      p.eboxes = 3;
      p.coord_max = 10;
      auto inst = gen::random_gkmp(p, 9100 + it);
      for (std::size_t i = 0; i < inst.eboxes.size(); ++i) {
        inst.eboxes[i].weight = static_cast<std::int64_t>(i % 3) - 1;
      }
      for (auto mode : {DepthMode::Min, DepthMode::Max}) {
        const auto s = solve_depth(inst, mode);
        REQUIRE(s.value == oracle_depth(inst, mode).value);
        REQUIRE(depth_at_doubled(inst, s.witness) == s.value);
      }
    }
  }

  TEST_CASE("slab eboxes preserve volume") {
    std::mt19937_64 rng(12);
    for (int it = 0; it < 500; ++it) {
      gen::GkmpParams p;
      p.d = 2 + it % 3;
      p.n = 10;
      p.colors = 2;
      const auto base = gen::random_gkmp(p, 11000 + it);
      auto inst = base;
      const int slabs = static_cast<int>(gen::uniform(rng, 1, 3));
      for (int s = 0; s < slabs; ++s) {
        AxisBox b = inst.clip;
        const int axis = static_cast<int>(gen::uniform(rng, 0, p.d - 1));
        b.lo[axis] = gen::uniform(rng, 0, 15);
        b.hi[axis] = gen::uniform(rng, b.lo[axis] + 1, 16);
        b.openness = gen::uniform(rng, 0, 1) ? Openness::Open : Openness::Closed;
        inst.eboxes.push_back({b, 0});
      }
      REQUIRE(solve_volume(inst) == oracle_volume(inst));
      REQUIRE(solve_exists_colorful(inst).has_value() == oracle_colorful_point(inst).has_value());
    }
  }

  TEST_CASE("solve_volume is additive under clip splits") {
    std::mt19937_64 rng(21);
    for (int it = 0; it < 200; ++it) {
      gen::GkmpParams p;
      p.d = 2 + it % 4;
      p.n = 20;
      p.colors = 1 + it % 3;
      p.eboxes = it % 3;
      const auto inst = gen::random_gkmp(p, 13000 + it);
      const int axis = static_cast<int>(gen::uniform(rng, 0, p.d - 1));
      const Coord m = gen::uniform(rng, 0, 16);
      auto left = inst;
      auto right = inst;
      left.clip.hi[axis] = m;
      right.clip.lo[axis] = m;
      REQUIRE(solve_volume(inst) == solve_volume(left) + solve_volume(right));
    }
  }

  TEST_CASE("answers do not depend on the thread count") {
    for (int it = 0; it < 40; ++it) {
      gen::GkmpParams p;
      p.d = 3 + it % 3;
      p.n = 40;
      p.colors = 3;
      p.eboxes = 2;
      const auto inst = gen::random_gkmp(p, 15000 + it);
      auto plain = inst;
      plain.eboxes.clear();
      const auto v1 = solve_volume(inst);
      const auto w1 = solve_exists_colorful(inst);
      const auto d1 = solve_depth(plain, DepthMode::Max);
      for (int threads : {2, 4}) {
        gkmp::Options o;
        o.threads = threads;
        REQUIRE(solve_volume(inst, o) == v1);
        REQUIRE(solve_exists_colorful(inst, o) == w1);
        const auto d2 = solve_depth(plain, DepthMode::Max, o);
        REQUIRE(d2.value == d1.value);
        REQUIRE(d2.witness == d1.witness);
      }
    }
  }

  TEST_CASE("complement of a box union") {
    for (int it = 0; it < 100; ++it) {
      const int d = 2 + it % 3;
      std::vector<AxisBox> boxes;
      const auto inst = gen::klee_complement(d, 3 + it % 10, 100, 17000 + it, &boxes);
      BigInt clip_volume = 1;
      for (int k = 0; k < d; ++k) clip_volume *= inst.clip.hi[k] - inst.clip.lo[k];
      REQUIRE(solve_volume(inst) == clip_volume - box_union_volume(boxes, inst.clip));
    }
  }

  TEST_CASE("post-reduce structure and weight decay") {
    for (int d = 2; d <= 4; ++d) {
      int splits = 0;
      std::string failure;
      gkmp::Options o;
      o.hooks.after_reduce = [&](const NodeState& n) {
        const auto msg = gkmp::check_reduced(n);
        if (!msg.empty() && failure.empty()) failure = msg;
      };
      o.hooks.after_split = [&](const NodeState& parent, std::span<const NodeState> kids) {
        const double bound = gkmp::short_weight(parent) / std::pow(2.0, 2.0 / d);
        for (const auto& k : kids) {
          if (gkmp::short_weight(k) > bound * (1 + 1e-9) + 1e-9 && failure.empty()) failure = "weight bound";
        }
        ++splits;
      };
      for (std::uint64_t seed = 0; splits < 1000; ++seed) {
        gen::GkmpParams p;
        p.d = d;
        p.n = 40;
        p.colors = 4;
        p.eboxes = 3;
        solve_volume(gen::random_gkmp(p, 19000 + seed), o);
      }
      CHECK(failure == "");
    }
  }
}
