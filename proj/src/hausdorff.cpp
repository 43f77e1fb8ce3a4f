#include "hk/hausdorff.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace hk {

namespace {

struct PointHash {
  int d = 0;
  std::size_t operator()(const Point& p) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (int k = 0; k < d; ++k) {
      h ^= static_cast<std::uint64_t>(p[k]);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

struct PointEq {
  int d = 0;
  bool operator()(const Point& a, const Point& b) const {
    return std::equal(a.begin(), a.begin() + d, b.begin());
  }
};

Coord floor_div(Coord a, Coord b) {
  Coord q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Point center2(const Point& p, const Point& q, int d) {
  Point c{};
  for (int k = 0; k < d; ++k) c[k] = 2 * (q[k] - p[k]);
  return c;
}

bool point_less(const Point& a, const Point& b, int d) {
  return std::lexicographical_compare(a.begin(), a.begin() + d, b.begin(), b.begin() + d);
}

/// For r2 = 0 the translation must map every p exactly onto some q.
std::optional<Point> exact_match(const HausdorffInstance& h) {
  std::optional<Point> best;
  for (const auto& q0 : h.Q) {
    const Point v = center2(h.P.front(), q0, h.d);
    if (directed_hausdorff_doubled(h, v) == 0 && (!best || point_less(v, *best, h.d))) best = v;
  }
  return best;
}

}  // namespace

void HausdorffInstance::validate(Coord limit) const {
  if (d < 2 || d > kMaxDim) throw InputError("hausdorff: dimension must be in [2, 8]");
  if (P.empty()) throw InputError("hausdorff: P is empty");
  if (Q.empty()) throw InputError("hausdorff: Q is empty");
  for (const auto* set : {&P, &Q}) {
    for (const auto& p : *set) {
      for (int k = 0; k < d; ++k) {
        if (!is_finite(p[k]) || p[k] > limit || p[k] < -limit) {
          throw InputError("hausdorff: coordinate " + std::to_string(p[k]) + " out of range");
        }
      }
    }
  }
}

Coord directed_hausdorff_doubled(const HausdorffInstance& h, const Point& v2) {
  if (h.P.empty() || h.Q.empty()) throw InputError("hausdorff: empty point set");
  Coord worst = 0;
  for (const auto& p : h.P) {
    Coord best = std::numeric_limits<Coord>::max();
    for (const auto& q : h.Q) {
      Coord dist = 0;
      for (int k = 0; k < h.d; ++k) {
        const Coord diff = 2 * (p[k] - q[k]) + v2[k];
        dist = std::max(dist, diff < 0 ? -diff : diff);
      }
      best = std::min(best, dist);
    }
    worst = std::max(worst, best);
  }
  return worst;
}

Coord directed_hausdorff_linf(const HausdorffInstance& h) { return directed_hausdorff_doubled(h, Point{}); }

std::vector<CellInstance> build_cell_instances(const HausdorffInstance& h, Coord r2) {
  h.validate();
  if (r2 <= 0) throw InputError("build_cell_instances: r2 must be positive");
  const int d = h.d;
  const Coord side = 2 * r2;
  const auto n = static_cast<int>(h.P.size());

  // Cells touched by a cube: floor-division of both ends, at most two per axis.
  auto for_each_cell = [&](const Point& c, auto&& fn) {
    std::array<std::array<Coord, 2>, kMaxDim> ks{};
    std::array<int, kMaxDim> nk{};
    for (int k = 0; k < d; ++k) {
      const Coord a = floor_div(c[k] - r2, side);
      const Coord b = floor_div(c[k] + r2, side);
      ks[k][0] = a;
      nk[k] = 1;
      if (b != a) ks[k][nk[k]++] = b;
    }
    std::array<int, kMaxDim> at{};
    for (;;) {
      Point idx{};
      for (int k = 0; k < d; ++k) idx[k] = ks[k][at[k]];
      fn(idx);
      int k = d - 1;
      while (k >= 0 && ++at[k] == nk[k]) at[k--] = 0;
      if (k < 0) break;
    }
  };

  struct Tally {
    int count = 0;
    int last = -1;
  };
  std::unordered_map<Point, Tally, PointHash, PointEq> tally(16, PointHash{d}, PointEq{d});
  for (int p = 0; p < n; ++p) {
    for (const auto& q : h.Q) {
      for_each_cell(center2(h.P[p], q, d), [&](const Point& idx) {
        auto& t = tally[idx];
        if (t.last != p) {
          t.last = p;
          ++t.count;
        }
      });
    }
  }

  std::unordered_map<Point, std::size_t, PointHash, PointEq> slot(16, PointHash{d}, PointEq{d});
  std::vector<CellInstance> cells;
  for (const auto& [idx, t] : tally) {
    if (t.count != n) continue;
    slot.emplace(idx, cells.size());
    CellInstance ci;
    ci.index = idx;
    auto& inst = ci.instance;
    inst.d = d;
    inst.n_colors = n;
    inst.clip.d = d;
    for (int k = 0; k < d; ++k) {
      inst.clip.lo[k] = idx[k] * side;
      inst.clip.hi[k] = idx[k] * side + side;
    }
    cells.push_back(std::move(ci));
  }
  if (cells.empty()) return cells;

  for (int p = 0; p < n; ++p) {
    for (const auto& q : h.Q) {
      const Point c = center2(h.P[p], q, d);
      for_each_cell(c, [&](const Point& idx) {
        const auto it = slot.find(idx);
        if (it == slot.end()) return;
        auto& inst = cells[it->second].instance;
        ColoredOrthant co;
        co.color = p;
        co.orthant.d = d;
        for (int k = 0; k < d; ++k) {
          const Coord cell_lo = inst.clip.lo[k];
          const Coord cell_hi = inst.clip.hi[k];
          if (c[k] - r2 <= cell_lo) {
            co.orthant.axes[k] = c[k] + r2 >= cell_hi ? AxisBound::free() : AxisBound::upper(c[k] + r2);
          } else {
            co.orthant.axes[k] = AxisBound::lower(c[k] - r2);
          }
        }
        inst.orthants.push_back(co);
      });
    }
  }
  std::sort(cells.begin(), cells.end(),
            [d](const CellInstance& a, const CellInstance& b) { return point_less(a.index, b.index, d); });
  return cells;
}

std::optional<Point> decide_translation(const HausdorffInstance& h, Coord r2, const HausdorffOptions& opt) {
  h.validate();
  if (r2 < 0) return std::nullopt;
  if (r2 == 0) return exact_match(h);
  const int d = h.d;
  const auto cells = build_cell_instances(h, r2);
  const auto total = static_cast<std::int64_t>(cells.size());

  // Smallest cell index (in sorted order) holding a colorful point wins.
  std::atomic<std::int64_t> first{total};
  std::vector<std::optional<Point>> found(cells.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, opt.threads)) if (opt.threads > 1)
  for (std::int64_t i = 0; i < total; ++i) {
    if (i > first.load()) continue;
    try {
      auto w = solve_exists_colorful(cells[static_cast<std::size_t>(i)].instance, opt.gkmp);
      if (w) {
        found[static_cast<std::size_t>(i)] = w;
        std::int64_t cur = first.load();
        while (i < cur && !first.compare_exchange_weak(cur, i)) {
        }
      }
    } catch (...) {
#pragma omp critical(hk_decide_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  if (first.load() == total) return std::nullopt;
  const Point w = *found[static_cast<std::size_t>(first.load())];

  // w is the doubled colorful point X. Pick one containing cube per p and
  // return the floor midpoint of their intersection.
  Point lo{}, hi{};
  for (int k = 0; k < d; ++k) {
    lo[k] = std::numeric_limits<Coord>::min();
    hi[k] = std::numeric_limits<Coord>::max();
  }
  for (const auto& p : h.P) {
    bool picked = false;
    for (const auto& q : h.Q) {
      const Point c = center2(p, q, d);
      bool inside = true;
      for (int k = 0; k < d && inside; ++k) inside = 2 * (c[k] - r2) <= w[k] && w[k] <= 2 * (c[k] + r2);
      if (!inside) continue;
      for (int k = 0; k < d; ++k) {
        lo[k] = std::max(lo[k], c[k] - r2);
        hi[k] = std::min(hi[k], c[k] + r2);
      }
      picked = true;
      break;
    }
    if (!picked) throw std::logic_error("decide_translation: witness outside every cube of a color");
  }
  Point v{};
  for (int k = 0; k < d; ++k) {
    if (lo[k] > hi[k]) throw std::logic_error("decide_translation: empty witness box");
    v[k] = floor_div(lo[k] + hi[k], 2);
  }
  if (directed_hausdorff_doubled(h, v) > r2) throw std::logic_error("decide_translation: witness failed re-verification");
  return v;
}

std::vector<Coord> candidate_values(const HausdorffInstance& h) {
  std::vector<Point> centers;
  centers.reserve(h.P.size() * h.Q.size());
  for (const auto& p : h.P) {
    for (const auto& q : h.Q) {
      Point c{};
      for (int k = 0; k < h.d; ++k) c[k] = q[k] - p[k];
      centers.push_back(c);
    }
  }
  std::vector<Coord> out{0};
  for (int k = 0; k < h.d; ++k) {
    std::vector<Coord> axis;
    axis.reserve(centers.size());
    for (const auto& c : centers) axis.push_back(c[k]);
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
    for (std::size_t i = 0; i < axis.size(); ++i) {
      for (std::size_t j = i + 1; j < axis.size(); ++j) out.push_back(axis[j] - axis[i]);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

HausdorffResult min_hausdorff_translation(const HausdorffInstance& h, const HausdorffOptions& opt) {
  h.validate();
  const auto cand = candidate_values(h);
  std::size_t lo = 0;
  std::size_t hi = cand.size() - 1;
  std::optional<Point> best = decide_translation(h, cand[hi], opt);
  if (!best) throw std::logic_error("min_hausdorff_translation: largest candidate infeasible");
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    auto w = decide_translation(h, cand[mid], opt);
    if (w) {
      hi = mid;
      best = w;
    } else {
      lo = mid + 1;
    }
  }
  return {cand[hi], *best};
}

}  // namespace hk
