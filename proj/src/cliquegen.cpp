#include "hk/cliquegen.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace hk {

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(r, base, &r) || r > (std::int64_t{1} << 40)) {
      throw CapacityError("cliquegen: n0^g exceeds the coordinate budget");
    }
  }
  return r;
}

Orthant make_orthant(int d, std::initializer_list<std::pair<int, AxisBound>> bounds) {
  Orthant o;
  o.d = d;
  for (const auto& [axis, bound] : bounds) o.axes[axis] = bound;
  return o;
}

// Odd-frame bounds for cell-index conditions.
Coord ge(std::int64_t c) { return 2 * c + 1; }  // x >= c
Coord gt(std::int64_t c) { return 2 * c + 3; }  // x > c
Coord le(std::int64_t c) { return 2 * c + 1; }  // x <= c
Coord lt(std::int64_t c) { return 2 * c - 1; }  // x < c

}  // namespace

int phi_digit(std::int64_t x, int a, int n0) {
  if (n0 < 1 || a < 0 || x < 0) throw InputError("phi_digit: arguments out of range");
  if (n0 == 1) return 0;
  for (int i = 0; i < a; ++i) x /= n0;
  return static_cast<int>(x % n0);
}

std::size_t Problem3Instance::orthant_count() const {
  std::size_t n = 0;
  for (const auto& s : shapes) n += s.orthants.size();
  return n;
}

Problem3Instance build_problem3(const Graph& G, int d, int g, int mu) {
  if (d < 2 || d > kMaxDim) throw InputError("build_problem3: d must be in [2, 8]");
  if (g < 1) throw InputError("build_problem3: g must be at least 1");
  const int n0 = G.n0();
  if (n0 < 1) throw InputError("build_problem3: graph has no vertices");
  const std::int64_t N = ipow(n0, g);
  if (mu < 1 || mu > ipow(n0, g - 1)) {
    throw InputError("build_problem3: mu must be in [1, n0^(g-1)]");
  }

  Problem3Instance inst;
  inst.d = d;
  inst.n0 = n0;
  inst.g = g;
  inst.mu = mu;
  inst.graph = G;
  inst.region.d = d;
  for (int k = 0; k < d; ++k) {
    inst.region.lo[k] = 1;
    inst.region.hi[k] = 2 * N - 1;
  }

  auto add_shape = [&](std::vector<Orthant> orthants) {
    inst.shapes.push_back({std::move(orthants)});
    return inst.shapes.size() - 1;
  };

  for (int k = 0; k < d; ++k) {
    TranslateTag tag;
    tag.alpha = tag.beta = k;
    inst.translates.push_back({add_shape({make_orthant(d, {{k, AxisBound::lower(1)}})}), Point{}, tag});
    inst.translates.push_back({add_shape({make_orthant(d, {{k, AxisBound::upper(2 * N - 1)}})}), Point{}, tag});
  }

  std::vector<std::pair<int, int>> non_edges;
  for (int u = 0; u < n0; ++u) {
    for (int v = 0; v < n0; ++v) {
      if (u == v || !G.adjacent(u, v)) non_edges.emplace_back(u, v);
    }
  }

  for (int alpha = 0; alpha < d; ++alpha) {
    for (int a = 0; a < g; ++a) {
      for (int beta = alpha; beta < d; ++beta) {
        for (int b = beta == alpha ? a + 1 : 0; b < g; ++b) {
          TranslateTag tag;
          tag.alpha = alpha;
          tag.a = a;
          tag.beta = beta;
          tag.b = b;
          const std::int64_t la = ipow(n0, a), wa = ipow(n0, a + 1), ia = ipow(n0, g - a - 1);
          const std::int64_t lb = ipow(n0, b), wb = ipow(n0, b + 1), jb = ipow(n0, g - b - 1);

          if (alpha == beta) {
            // Same axis: cells whose digits a and b are (u, v) form intervals of length n0^a.
            tag.kind = TranslateKind::Interval;
            const auto shape = add_shape({make_orthant(d, {{alpha, AxisBound::upper(lt(0))}}),
                                          make_orthant(d, {{alpha, AxisBound::lower(gt(la - 1))}})});
            const std::int64_t mids = ipow(n0, b - a - 1);
            for (const auto& [u, v] : non_edges) {
              tag.u = u;
              tag.v = v;
              for (std::int64_t hi = 0; hi < jb; ++hi) {
                for (std::int64_t mid = 0; mid < mids; ++mid) {
                  Point vec{};
                  vec[alpha] = 2 * (hi * wb + v * lb + mid * wa + u * la);
                  inst.translates.push_back({shape, vec, tag});
                }
              }
            }
            continue;
          }

          if (std::min(ia, jb) == 1) {
            tag.kind = TranslateKind::Box;
            const auto shape = add_shape({make_orthant(d, {{alpha, AxisBound::upper(lt(0))}}),
                                          make_orthant(d, {{alpha, AxisBound::lower(gt(la - 1))}}),
                                          make_orthant(d, {{beta, AxisBound::upper(lt(0))}}),
                                          make_orthant(d, {{beta, AxisBound::lower(gt(lb - 1))}})});
            for (const auto& [u, v] : non_edges) {
              tag.u = u;
              tag.v = v;
              for (std::int64_t i = 0; i < ia; ++i) {
                for (std::int64_t j = 0; j < jb; ++j) {
                  tag.level = static_cast<int>(i + j);
                  Point vec{};
                  vec[alpha] = 2 * (u * la + i * wa);
                  vec[beta] = 2 * (v * lb + j * wb);
                  inst.translates.push_back({shape, vec, tag});
                }
              }
            }
            continue;
          }

          // Anti-diagonal run of mu+1 blocks: rect i = C_i x C'_{mu-i}.
          tag.kind = TranslateKind::Diagonal;
          auto s = [&](std::int64_t i) { return i * wa; };
          auto e = [&](std::int64_t i) { return i * wa + la - 1; };
          auto s2 = [&](std::int64_t j) { return j * wb; };
          auto e2 = [&](std::int64_t j) { return j * wb + lb - 1; };
          std::vector<Orthant> stair;
          stair.push_back(make_orthant(d, {{alpha, AxisBound::upper(lt(s(0)))}}));
          stair.push_back(make_orthant(d, {{alpha, AxisBound::lower(gt(e(mu)))}}));
          stair.push_back(make_orthant(d, {{beta, AxisBound::upper(lt(s2(0)))}}));
          stair.push_back(make_orthant(d, {{beta, AxisBound::lower(gt(e2(mu)))}}));
          for (std::int64_t i = 0; i <= mu; ++i) {
            stair.push_back(
                make_orthant(d, {{alpha, AxisBound::lower(ge(s(i)))}, {beta, AxisBound::lower(gt(e2(mu - i)))}}));
            stair.push_back(
                make_orthant(d, {{alpha, AxisBound::upper(le(e(i)))}, {beta, AxisBound::upper(lt(s2(mu - i)))}}));
          }
          for (std::int64_t i = 0; i < mu; ++i) {
            stair.push_back(make_orthant(
                d, {{alpha, AxisBound::lower(gt(e(i)))}, {beta, AxisBound::lower(gt(e2(mu - i - 1)))}}));
            stair.push_back(make_orthant(
                d, {{alpha, AxisBound::upper(lt(s(i + 1)))}, {beta, AxisBound::upper(lt(s2(mu - i)))}}));
          }
          const auto shape = add_shape(std::move(stair));
          for (const auto& [u, v] : non_edges) {
            tag.u = u;
            tag.v = v;
            for (std::int64_t level = 0; level <= ia + jb - 2; ++level) {
              tag.level = static_cast<int>(level);
              const std::int64_t i_min = std::max<std::int64_t>(0, level - jb + 1);
              const std::int64_t i_max = std::min(ia - 1, level);
              for (std::int64_t i0 = i_min; i0 <= i_max; i0 += mu + 1) {
                const std::int64_t j0 = level - mu - i0;
                Point vec{};
                vec[alpha] = 2 * (u * la + i0 * wa);
                vec[beta] = 2 * (v * lb + j0 * wb);
                inst.translates.push_back({shape, vec, tag});
              }
            }
          }
        }
      }
    }
  }

  // Free axes get a lower bound that no translate of the shape can move into the region.
  std::vector<Point> max_t(inst.shapes.size(), Point{});
  std::vector<char> seen(inst.shapes.size(), 0);
  for (const auto& t : inst.translates) {
    auto& m = max_t[t.shape];
    for (int k = 0; k < d; ++k) m[k] = seen[t.shape] ? std::max(m[k], t.vec[k]) : t.vec[k];
    seen[t.shape] = 1;
  }
  for (std::size_t i = 0; i < inst.shapes.size(); ++i) {
    for (auto& o : inst.shapes[i].orthants) {
      for (int k = 0; k < d; ++k) {
        if (o.axes[k].kind == BoundKind::Free) o.axes[k] = AxisBound::lower(1 - max_t[i][k]);
      }
    }
  }
  return inst;
}

bool verify_instance(const Problem3Instance& inst, std::uint64_t budget) {
  const int d = inst.d;
  const std::int64_t N = ipow(inst.n0, inst.g);
  std::uint64_t total = 1;
  for (int k = 0; k < d; ++k) {
    if (__builtin_mul_overflow(total, static_cast<std::uint64_t>(N), &total) || total > budget) {
      throw CapacityError("verify_instance: lattice exceeds the budget");
    }
  }
  std::vector<std::int64_t> stride(d);
  stride[0] = 1;
  for (int k = 1; k < d; ++k) stride[k] = stride[k - 1] * N;

  std::vector<std::uint8_t> alive(total, 1), covered(total);
  std::array<std::int64_t, kMaxDim> lo{}, hi{}, at{};
  for (const auto& t : inst.translates) {
    std::fill(covered.begin(), covered.end(), 0);
    for (const auto& o : inst.shapes[t.shape].orthants) {
      bool empty = false;
      for (int k = 0; k < d; ++k) {
        lo[k] = 0;
        hi[k] = N - 1;
        const auto& ax = o.axes[k];
        if (ax.kind == BoundKind::Lower) lo[k] = std::max<std::int64_t>(lo[k], (ax.value + t.vec[k] - 1) / 2);
        if (ax.kind == BoundKind::Upper) {
          const Coord b = ax.value + t.vec[k];
          hi[k] = std::min<std::int64_t>(hi[k], b < 1 ? -1 : (b - 1) / 2);
        }
        if (lo[k] > hi[k]) empty = true;
      }
      if (empty) continue;
      for (int k = 0; k < d; ++k) at[k] = lo[k];
      for (;;) {
        std::int64_t idx = 0;
        for (int k = 1; k < d; ++k) idx += at[k] * stride[k];
        std::fill(covered.begin() + idx + lo[0], covered.begin() + idx + hi[0] + 1, 1);
        int k = 1;
        while (k < d && ++at[k] > hi[k]) {
          at[k] = lo[k];
          ++k;
        }
        if (k == d) break;
      }
    }
    for (std::uint64_t i = 0; i < total; ++i) alive[i] &= covered[i];
  }

  const int slots = d * inst.g;
  std::vector<int> digits(slots);
  for (std::uint64_t i = 0; i < total; ++i) {
    std::uint64_t rest = i;
    for (int k = 0; k < d; ++k) {
      const auto x = static_cast<std::int64_t>(rest % static_cast<std::uint64_t>(N));
      rest /= static_cast<std::uint64_t>(N);
      for (int a = 0; a < inst.g; ++a) digits[k * inst.g + a] = phi_digit(x, a, inst.n0);
    }
    bool clique = true;
    for (int x = 0; x < slots && clique; ++x) {
      for (int y = x + 1; y < slots && clique; ++y) {
        clique = digits[x] != digits[y] && inst.graph.adjacent(digits[x], digits[y]);
      }
    }
    if (clique != (alive[i] != 0)) return false;
  }
  return true;
}

ReductionOutput problem3_to_hausdorff(const Problem3Instance& inst) {
  const int d = inst.d;
  Coord min_apex = std::numeric_limits<Coord>::max();
  Coord max_apex = std::numeric_limits<Coord>::min();
  for (const auto& s : inst.shapes) {
    for (const auto& o : s.orthants) {
      for (int k = 0; k < d; ++k) {
        if (o.axes[k].kind == BoundKind::Free) throw InputError("problem3_to_hausdorff: free axis left in a shape");
        min_apex = std::min(min_apex, o.axes[k].value);
        max_apex = std::max(max_apex, o.axes[k].value);
      }
    }
  }
  Coord min_t = std::numeric_limits<Coord>::max();
  Coord max_t = std::numeric_limits<Coord>::min();
  for (const auto& t : inst.translates) {
    for (int k = 0; k < d; ++k) {
      min_t = std::min(min_t, t.vec[k]);
      max_t = std::max(max_t, t.vec[k]);
    }
  }
  if (inst.shapes.empty() || inst.translates.empty()) throw InputError("problem3_to_hausdorff: empty instance");
  const Coord shift_apex = -min_apex;
  const Coord shift_t = -min_t;
  const Coord top = std::max(max_apex + shift_apex, max_t + shift_t);
  Coord s = std::max<Coord>(2, 2 * top);
  if (s % 2 != 0) ++s;
  const auto l = static_cast<Coord>(inst.shapes.size());
  if (4 * s * (l + 2) > kUserCoordLimit) throw CapacityError("problem3_to_hausdorff: coordinates exceed the budget");

  ReductionOutput out;
  auto& h = out.hausdorff;
  h.d = d;
  auto u = [&](Coord i) {
    Point p{};
    p[0] = 4 * s * i;
    return p;
  };
  for (std::size_t i = 0; i < inst.shapes.size(); ++i) {
    const Point ui = u(static_cast<Coord>(i) + 1);
    for (const auto& o : inst.shapes[i].orthants) {
      Point c = ui;
      for (int k = 0; k < d; ++k) {
        const Coord a = o.axes[k].value + shift_apex;
        c[k] += o.axes[k].kind == BoundKind::Lower ? a + s / 2 : a - s / 2;
      }
      h.Q.push_back(c);
    }
  }
  for (const auto& t : inst.translates) {
    Point p = u(static_cast<Coord>(t.shape) + 1);
    for (int k = 0; k < d; ++k) p[k] -= t.vec[k] + shift_t;
    h.P.push_back(p);
  }
  Point aux_c{};
  for (int k = 0; k < d; ++k) aux_c[k] = s / 2;
  h.Q.push_back(aux_c);
  aux_c[0] += u(l + 1)[0];
  h.Q.push_back(aux_c);
  h.P.push_back(u(0));
  h.P.push_back(u(l + 1));

  out.r2 = s;
  out.expected = brute_clique(inst.graph, d * inst.g);
  out.provenance = {inst.graph.hash(), inst.n0, d, inst.g, inst.mu, inst.graph.edges()};
  out.shapes = inst.shapes.size();
  out.translates = inst.translates.size();
  out.cubes = inst.orthant_count();
  return out;
}

ReductionOutput clique_instance(const Graph& G, int d, int g, int mu) {
  return problem3_to_hausdorff(build_problem3(G, d, g, mu));
}

}  // namespace hk
