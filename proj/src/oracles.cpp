#include "hk/oracles.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hk {

namespace {

// Object bounds in doubled coordinates.
struct DBox {
  Point lo{};
  Point hi{};
  bool open = false;
  int color = -1;
  std::int64_t weight = 0;

  bool contains(int k, Coord x) const {
    if (open) return (lo[k] == kNegInf || lo[k] < x) && (hi[k] == kPosInf || x < hi[k]);
    return lo[k] <= x && x <= hi[k];
  }
};

Coord twice(Coord v) { return is_finite(v) ? 2 * v : v; }

DBox doubled_box(const AxisBox& b) {
  DBox out;
  for (int k = 0; k < b.d; ++k) {
    out.lo[k] = twice(b.lo[k]);
    out.hi[k] = twice(b.hi[k]);
  }
  out.open = b.openness == Openness::Open;
  return out;
}

enum class Task { Volume, Exists, DepthMin, DepthMax };

class GridSweep {
 public:
  GridSweep(const GkmpInstance& inst, Task task, const OracleOptions& opt) : inst_(inst), task_(task) {
    inst.validate(kInternalCoordLimit);
    d_ = inst.d;
    for (const auto& o : inst.orthants) {
      DBox b = doubled_box(o.orthant.to_box());
      b.color = o.color;
      orthants_.push_back(b);
    }
    std::stable_sort(orthants_.begin(), orthants_.end(),
                     [](const DBox& a, const DBox& b) { return a.color < b.color; });
    for (const auto& e : inst.eboxes) {
      DBox b = doubled_box(e.box);
      b.weight = e.weight;
      eboxes_.push_back(b);
    }

    // Per axis: sample coordinates (doubled) and, for volume, cell lengths.
    std::uint64_t total = 1;
    samples_.resize(d_);
    lengths_.resize(d_);
    for (int k = 0; k < d_; ++k) {
      std::vector<Coord> vals{inst.clip.lo[k], inst.clip.hi[k]};
      auto add = [&](Coord v) {
        if (is_finite(v) && v > inst.clip.lo[k] && v < inst.clip.hi[k]) vals.push_back(v);
      };
      for (const auto& o : inst.orthants) {
        const AxisBox b = o.orthant.to_box();
        add(b.lo[k]);
        add(b.hi[k]);
      }
      for (const auto& e : inst.eboxes) {
        add(e.box.lo[k]);
        add(e.box.hi[k]);
      }
      std::sort(vals.begin(), vals.end());
      vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
      for (std::size_t i = 0; i < vals.size(); ++i) {
        if (task != Task::Volume) samples_[k].push_back(2 * vals[i]);
        if (i + 1 < vals.size()) {
          samples_[k].push_back(vals[i] + vals[i + 1]);
          lengths_[k].push_back(vals[i + 1] - vals[i]);
        }
      }
      if (task != Task::Volume && samples_[k].size() > 1) {
        // Keep lexicographic order: the value code precedes the gap after it.
        std::sort(samples_[k].begin(), samples_[k].end());
      }
      const auto count = static_cast<std::uint64_t>(samples_[k].size());
      if (count == 0) {
        total = 0;
      } else if (total > opt.budget / count + 1) {
        total = opt.budget + 1;
      } else {
        total *= count;
      }
    }
    if (total > opt.budget) {
      throw CapacityError("oracle: grid of more than " + std::to_string(opt.budget) + " points");
    }
    // Whole-range coverage per object and axis, for pruning.
    covers_.resize(eboxes_.size() + orthants_.size());
    for (std::size_t i = 0; i < eboxes_.size() + orthants_.size(); ++i) {
      const DBox& b = i < eboxes_.size() ? eboxes_[i] : orthants_[i - eboxes_.size()];
      for (int k = 0; k < d_; ++k) {
        covers_[i][k] = samples_[k].empty() ||
                        (b.contains(k, samples_[k].front()) && b.contains(k, samples_[k].back()));
      }
    }
  }

  void run() {
    std::vector<int> os(orthants_.size()), es(eboxes_.size());
    for (std::size_t i = 0; i < os.size(); ++i) os[i] = static_cast<int>(i);
    for (std::size_t i = 0; i < es.size(); ++i) es[i] = static_cast<int>(i);
    if (samples_.empty() || std::any_of(samples_.begin(), samples_.end(), [](const auto& s) { return s.empty(); })) {
      return;
    }
    rec(0, os, es, 1, false);
    volume_ += BigInt(acc_);
  }

  BigInt volume() const { return volume_; }
  const std::optional<Point>& point() const { return point_; }
  bool have_depth() const { return have_depth_; }
  std::int64_t depth() const { return best_; }

 private:
  bool covers_rest(std::size_t obj, int from) const {
    for (int k = from; k < d_; ++k) {
      if (!covers_[obj][k]) return false;
    }
    return true;
  }

  int distinct_colors(const std::vector<int>& os) const {
    int c = 0, last = -1;
    for (int i : os) {
      if (orthants_[i].color != last) {
        ++c;
        last = orthants_[i].color;
      }
    }
    return c;
  }

  /// Bound on the depth of any point below this node (upper for Max, lower for Min).
  std::int64_t depth_bound(const std::vector<int>& os, const std::vector<int>& es, int from) const {
    const bool max = task_ == Task::DepthMax;
    std::int64_t v = inst_.depth_offset;
    if (max) {
      v += distinct_colors(os);
    } else {
      int last = -1;
      for (int i : os) {
        if (orthants_[i].color != last && covers_rest(eboxes_.size() + i, from)) {
          ++v;
          last = orthants_[i].color;
        }
      }
    }
    for (int i : es) {
      const auto w = eboxes_[i].weight;
      if ((max && w > 0) || (!max && w < 0) || covers_rest(i, from)) v += w;
    }
    return v;
  }

  void leaf(const std::vector<int>& os, const std::vector<int>& es, unsigned __int128 vol, bool vol_big) {
    switch (task_) {
      case Task::Volume:
        if (!es.empty() || distinct_colors(os) != inst_.n_colors) return;
        if (vol_big) {
          BigInt big = 1;
          for (int k = 0; k < d_; ++k) big *= BigInt(lengths_[k][at_[k]]);
          volume_ += big;
        } else if (__builtin_add_overflow(acc_, vol, &acc_)) {
          volume_ += BigInt(acc_);
          acc_ = vol;
        }
        return;
      case Task::Exists:
        if (!es.empty() || distinct_colors(os) != inst_.n_colors) return;
        point_ = x_;
        return;
      default: {
        std::int64_t v = inst_.depth_offset + distinct_colors(os);
        for (int i : es) v += eboxes_[i].weight;
        const bool improves = task_ == Task::DepthMax ? v > best_ : v < best_;
        if (!have_depth_ || improves) {
          have_depth_ = true;
          best_ = v;
          point_ = x_;
        }
      }
    }
  }

  void rec(int k, const std::vector<int>& os, const std::vector<int>& es, unsigned __int128 vol, bool vol_big) {
    if (k == d_) {
      leaf(os, es, vol, vol_big);
      return;
    }
    std::vector<int> nos, nes;
    for (std::size_t s = 0; s < samples_[k].size(); ++s) {
      if (task_ == Task::Exists && point_) return;
      const Coord x = samples_[k][s];
      nos.clear();
      nes.clear();
      for (int i : os) {
        if (orthants_[i].contains(k, x)) nos.push_back(i);
      }
      for (int i : es) {
        if (eboxes_[i].contains(k, x)) nes.push_back(i);
      }
      if (task_ == Task::Volume || task_ == Task::Exists) {
        if (distinct_colors(nos) != inst_.n_colors) continue;
        bool excluded = false;
        for (int i : nes) {
          if (covers_rest(i, k + 1)) {
            excluded = true;
            break;
          }
        }
        if (excluded) continue;
      } else if (have_depth_) {
        const std::int64_t bound = depth_bound(nos, nes, k + 1);
        if (task_ == Task::DepthMax ? bound <= best_ : bound >= best_) continue;
      }
      x_[k] = x;
      at_[k] = s;
      unsigned __int128 nvol = vol;
      bool nbig = vol_big;
      if (task_ == Task::Volume && !nbig) {
        nbig = __builtin_mul_overflow(vol, static_cast<unsigned __int128>(lengths_[k][s]), &nvol);
      }
      rec(k + 1, nos, nes, nvol, nbig);
    }
  }

  const GkmpInstance& inst_;
  Task task_;
  int d_ = 0;
  std::vector<DBox> orthants_;
  std::vector<DBox> eboxes_;
  std::vector<std::vector<Coord>> samples_;
  std::vector<std::vector<Coord>> lengths_;
  std::vector<std::array<bool, kMaxDim>> covers_;
  Point x_{};
  std::array<std::size_t, kMaxDim> at_{};
  BigInt volume_ = 0;
  unsigned __int128 acc_ = 0;
  std::optional<Point> point_;
  bool have_depth_ = false;
  std::int64_t best_ = 0;
};

}  // namespace

BigInt oracle_volume(const GkmpInstance& inst, const OracleOptions& opt) {
  GridSweep sweep(inst, Task::Volume, opt);
  sweep.run();
  return sweep.volume();
}

std::optional<Point> oracle_colorful_point(const GkmpInstance& inst, const OracleOptions& opt) {
  GridSweep sweep(inst, Task::Exists, opt);
  sweep.run();
  return sweep.point();
}

DepthAnswer oracle_depth(const GkmpInstance& inst, DepthMode mode, const OracleOptions& opt) {
  GridSweep sweep(inst, mode == DepthMode::Max ? Task::DepthMax : Task::DepthMin, opt);
  sweep.run();
  if (!sweep.have_depth()) throw std::logic_error("oracle_depth: empty grid");
  return {sweep.depth(), *sweep.point()};
}

namespace {

struct Backtrack {
  int d = 0;
  Coord r2 = 0;
  // centers[p][q] = 2(q - p)
  std::vector<std::vector<Point>> centers;
  std::vector<std::vector<Coord>> axis_values;
  std::uint64_t budget = 0;
  std::uint64_t visited = 0;
  Point v{};

  bool rec(int k, const std::vector<std::vector<int>>& alive) {
    if (k == d) return true;
    for (const Coord x : axis_values[k]) {
      if (++visited > budget) throw CapacityError("oracle_min_hausdorff: search budget exceeded");
      std::vector<std::vector<int>> next(alive.size());
      bool ok = true;
      for (std::size_t p = 0; p < alive.size() && ok; ++p) {
        for (int q : alive[p]) {
          const Coord c = centers[p][q][k];
          if (c - r2 <= x && x <= c + r2) next[p].push_back(q);
        }
        ok = !next[p].empty();
      }
      if (!ok) continue;
      v[k] = x;
      if (rec(k + 1, next)) return true;
    }
    return false;
  }
};

}  // namespace

std::optional<Point> oracle_translation_feasible(const HausdorffInstance& h, Coord r2, const OracleOptions& opt) {
  h.validate();
  if (r2 < 0) return std::nullopt;
  Backtrack bt;
  bt.d = h.d;
  bt.r2 = r2;
  bt.budget = opt.budget;
  bt.centers.resize(h.P.size());
  bt.axis_values.resize(h.d);
  for (std::size_t p = 0; p < h.P.size(); ++p) {
    for (const auto& q : h.Q) {
      Point c{};
      for (int k = 0; k < h.d; ++k) {
        c[k] = 2 * (q[k] - h.P[p][k]);
        bt.axis_values[k].push_back(c[k] - r2);
      }
      bt.centers[p].push_back(c);
    }
  }
  for (auto& vals : bt.axis_values) {
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  }
  std::vector<std::vector<int>> alive(h.P.size());
  for (auto& a : alive) {
    for (std::size_t q = 0; q < h.Q.size(); ++q) a.push_back(static_cast<int>(q));
  }
  if (!bt.rec(0, alive)) return std::nullopt;
  return bt.v;
}

Coord oracle_min_hausdorff(const HausdorffInstance& h, const OracleOptions& opt) {
  Coord lo = 0;
  Coord hi = directed_hausdorff_linf(h);
  while (lo < hi) {
    const Coord mid = lo + (hi - lo) / 2;
    if (oracle_translation_feasible(h, mid, opt)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace hk
