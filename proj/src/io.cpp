#include "hk/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hk::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw InputError(path + ": " + msg); }

const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field \"") + key + "\"");
  return *it;
}

std::int64_t get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<std::int64_t>();
}

int get_small(const json& v, const std::string& path) {
  const auto x = get_int(v, path);
  if (x < -(std::int64_t{1} << 30) || x > (std::int64_t{1} << 30)) fail(path, "integer out of range");
  return static_cast<int>(x);
}

Coord get_coord(const json& v, const std::string& path) {
  const auto x = get_int(v, path);
  if (x > kUserCoordLimit || x < -kUserCoordLimit) fail(path, "coordinate magnitude exceeds 2^40");
  return x;
}

const json& get_array(const json& v, const std::string& path, std::size_t expected_size = 0) {
  if (!v.is_array()) fail(path, "expected an array");
  if (expected_size != 0 && v.size() != expected_size) {
    fail(path, "expected " + std::to_string(expected_size) + " entries, got " + std::to_string(v.size()));
  }
  return v;
}

/// Bound array with null for an unbounded side.
Point get_bounds(const json& v, const std::string& path, int d, Coord null_value) {
  get_array(v, path, static_cast<std::size_t>(d));
  Point p{};
  for (int k = 0; k < d; ++k) {
    const std::string sub = path + "[" + std::to_string(k) + "]";
    p[k] = v[k].is_null() ? null_value : get_coord(v[k], sub);
  }
  return p;
}

Point get_point(const json& v, const std::string& path, int d) {
  get_array(v, path, static_cast<std::size_t>(d));
  Point p{};
  for (int k = 0; k < d; ++k) p[k] = get_coord(v[k], path + "[" + std::to_string(k) + "]");
  return p;
}

json bound_json(const Point& p, int d) {
  json a = json::array();
  for (int k = 0; k < d; ++k) a.push_back(is_finite(p[k]) ? json(p[k]) : json(nullptr));
  return a;
}

int get_dim(const json& doc) {
  const int d = get_small(field(doc, "$", "d"), "$.d");
  if (d < 2 || d > kMaxDim) fail("$.d", "dimension must be in [2, 8]");
  return d;
}

void expect_kind(const json& doc, const char* kind) {
  const auto k = kind_of(doc);
  if (k != kind) fail("$.kind", std::string("expected \"") + kind + "\", got \"" + k + "\"");
}

}  // namespace

json parse(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(source + ": malformed JSON (" + e.what() + ")");
  }
}

json load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void save_file(const std::string& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << doc.dump() << "\n";
}

std::string kind_of(const json& doc) {
  const auto& k = field(doc, "$", "kind");
  if (!k.is_string()) fail("$.kind", "expected a string");
  const auto s = k.get<std::string>();
  if (s != "gkmp" && s != "hausdorff" && s != "graph") fail("$.kind", "unknown kind \"" + s + "\"");
  return s;
}

std::string decimal(const BigInt& v) { return v.str(); }

json point_json(const Point& p, int d) {
  json a = json::array();
  for (int k = 0; k < d; ++k) a.push_back(p[k]);
  return a;
}

json to_json(const GkmpInstance& inst) {
  json doc;
  doc["kind"] = "gkmp";
  doc["d"] = inst.d;
  doc["n_colors"] = inst.n_colors;
  doc["clip"] = {{"lo", point_json(inst.clip.lo, inst.d)}, {"hi", point_json(inst.clip.hi, inst.d)}};
  json os = json::array();
  for (const auto& o : inst.orthants) {
    const AxisBox b = o.orthant.to_box();
    os.push_back({{"color", o.color}, {"lo", bound_json(b.lo, inst.d)}, {"hi", bound_json(b.hi, inst.d)}});
  }
  doc["orthants"] = os;
  json es = json::array();
  for (const auto& e : inst.eboxes) {
    es.push_back({{"lo", bound_json(e.box.lo, inst.d)},
                  {"hi", bound_json(e.box.hi, inst.d)},
                  {"open", e.box.openness == Openness::Open},
                  {"weight", e.weight}});
  }
  doc["eboxes"] = es;
  if (inst.depth_offset != 0) doc["depth_offset"] = inst.depth_offset;
  return doc;
}

GkmpInstance gkmp_from_json(const json& doc) {
  expect_kind(doc, "gkmp");
  GkmpInstance inst;
  inst.d = get_dim(doc);
  const int d = inst.d;
  inst.n_colors = get_small(field(doc, "$", "n_colors"), "$.n_colors");
  if (inst.n_colors < 0) fail("$.n_colors", "must be nonnegative");

  const auto& clip = field(doc, "$", "clip");
  inst.clip.d = d;
  inst.clip.lo = get_point(field(clip, "$.clip", "lo"), "$.clip.lo", d);
  inst.clip.hi = get_point(field(clip, "$.clip", "hi"), "$.clip.hi", d);
  for (int k = 0; k < d; ++k) {
    if (inst.clip.lo[k] > inst.clip.hi[k]) fail("$.clip", "lo > hi on axis " + std::to_string(k));
  }

  const auto& os = get_array(field(doc, "$", "orthants"), "$.orthants");
  for (std::size_t i = 0; i < os.size(); ++i) {
    const std::string path = "$.orthants[" + std::to_string(i) + "]";
    ColoredOrthant co;
    co.color = get_small(field(os[i], path, "color"), path + ".color");
    if (co.color < 0 || co.color >= inst.n_colors) fail(path + ".color", "outside [0, n_colors)");
    const Point lo = get_bounds(field(os[i], path, "lo"), path + ".lo", d, kNegInf);
    const Point hi = get_bounds(field(os[i], path, "hi"), path + ".hi", d, kPosInf);
    co.orthant.d = d;
    for (int k = 0; k < d; ++k) {
      if (is_finite(lo[k]) && is_finite(hi[k])) {
        fail(path, "axis " + std::to_string(k) + " has both bounds; an orthant allows at most one");
      }
      if (is_finite(lo[k])) co.orthant.axes[k] = AxisBound::lower(lo[k]);
      if (is_finite(hi[k])) co.orthant.axes[k] = AxisBound::upper(hi[k]);
    }
    inst.orthants.push_back(co);
  }

  if (doc.contains("eboxes")) {
    const auto& es = get_array(doc["eboxes"], "$.eboxes");
    for (std::size_t i = 0; i < es.size(); ++i) {
      const std::string path = "$.eboxes[" + std::to_string(i) + "]";
      EBox e;
      e.box.d = d;
      e.box.lo = get_bounds(field(es[i], path, "lo"), path + ".lo", d, kNegInf);
      e.box.hi = get_bounds(field(es[i], path, "hi"), path + ".hi", d, kPosInf);
      if (es[i].contains("open")) {
        if (!es[i]["open"].is_boolean()) fail(path + ".open", "expected a boolean");
        e.box.openness = es[i]["open"].get<bool>() ? Openness::Open : Openness::Closed;
      }
      if (es[i].contains("weight")) e.weight = get_int(es[i]["weight"], path + ".weight");
      for (int k = 0; k < d; ++k) {
        if (e.box.lo[k] > e.box.hi[k]) fail(path, "lo > hi on axis " + std::to_string(k));
      }
      inst.eboxes.push_back(e);
    }
  }
  if (doc.contains("depth_offset")) inst.depth_offset = get_int(doc["depth_offset"], "$.depth_offset");
  inst.validate();
  return inst;
}

json to_json(const HausdorffInstance& inst) {
  json doc;
  doc["kind"] = "hausdorff";
  doc["d"] = inst.d;
  json P = json::array(), Q = json::array();
  for (const auto& p : inst.P) P.push_back(point_json(p, inst.d));
  for (const auto& q : inst.Q) Q.push_back(point_json(q, inst.d));
  doc["P"] = P;
  doc["Q"] = Q;
  return doc;
}

HausdorffInstance hausdorff_from_json(const json& doc) {
  expect_kind(doc, "hausdorff");
  HausdorffInstance h;
  h.d = get_dim(doc);
  for (const char* key : {"P", "Q"}) {
    const auto& arr = get_array(field(doc, "$", key), std::string("$.") + key);
    if (arr.empty()) fail(std::string("$.") + key, "must be nonempty");
    auto& dst = key[0] == 'P' ? h.P : h.Q;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      dst.push_back(get_point(arr[i], std::string("$.") + key + "[" + std::to_string(i) + "]", h.d));
    }
  }
  h.validate();
  return h;
}

json to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  return {{"kind", "graph"}, {"n0", g.n0()}, {"edges", edges}};
}

Graph graph_from_json(const json& doc) {
  expect_kind(doc, "graph");
  const int n0 = get_small(field(doc, "$", "n0"), "$.n0");
  if (n0 < 1 || n0 > 64) fail("$.n0", "vertex count must be in [1, 64]");
  Graph g(n0);
  const auto& edges = get_array(field(doc, "$", "edges"), "$.edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string path = "$.edges[" + std::to_string(i) + "]";
    get_array(edges[i], path, 2);
    const int u = get_small(edges[i][0], path + "[0]");
    const int v = get_small(edges[i][1], path + "[1]");
    if (u < 0 || v < 0 || u >= n0 || v >= n0) fail(path, "vertex out of range");
    if (u == v) fail(path, "self-loop");
    g.add_edge(u, v);
  }
  return g;
}

json to_json(const ReductionOutput& out) {
  json doc = to_json(out.hausdorff);
  json edges = json::array();
  for (const auto& [u, v] : out.provenance.edges) edges.push_back({u, v});
  std::ostringstream hash;
  hash << std::hex << out.provenance.graph_hash;
  doc["provenance"] = {{"source", "clique"},
                       {"graph_hash", hash.str()},
                       {"n0", out.provenance.n0},
                       {"edges", edges},
                       {"d", out.provenance.d},
                       {"g", out.provenance.g},
                       {"mu", out.provenance.mu},
                       {"r2", out.r2},
                       {"expected", out.expected},
                       {"shapes", out.shapes},
                       {"translates", out.translates},
                       {"cubes", out.cubes}};
  return doc;
}

std::optional<Provenance> provenance_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("provenance")) return std::nullopt;
  const auto& pv = doc["provenance"];
  const std::string path = "$.provenance";
  Provenance p;
  p.n0 = get_small(field(pv, path, "n0"), path + ".n0");
  p.d = get_small(field(pv, path, "d"), path + ".d");
  p.g = get_small(field(pv, path, "g"), path + ".g");
  p.mu = get_small(field(pv, path, "mu"), path + ".mu");
  const auto& edges = get_array(field(pv, path, "edges"), path + ".edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string sub = path + ".edges[" + std::to_string(i) + "]";
    get_array(edges[i], sub, 2);
    p.edges.emplace_back(get_small(edges[i][0], sub + "[0]"), get_small(edges[i][1], sub + "[1]"));
  }
  const auto& hash = field(pv, path, "graph_hash");
  std::size_t used = 0;
  try {
    if (!hash.is_string()) throw std::invalid_argument("not a string");
    const auto text = hash.get<std::string>();
    p.graph_hash = std::stoull(text, &used, 16);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw InputError(path + ".graph_hash: expected a hexadecimal string");
  }
  return p;
}

}  // namespace hk::io
