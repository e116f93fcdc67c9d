#include "ksplit/json_io.hpp"

#include "ksplit/errors.hpp"

namespace ksplit {

namespace {

[[noreturn]] void bad(const std::string& what) { throw InputError("bad JSON input: " + what); }

double number(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const PolyCurve3& curve) {
  Json j;
  j["closed"] = curve.closed;
  Json verts = Json::array();
  for (const auto& v : curve.vertices) verts.push_back(Json::array({v.x, v.y, v.z}));
  j["vertices"] = std::move(verts);
  return j;
}

PolyCurve3 polycurve_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("closed") || !j.contains("vertices")) {
    bad("curve needs {closed, vertices}");
  }
  PolyCurve3 c;
  c.closed = j.at("closed").get<bool>();
  for (const auto& v : j.at("vertices")) {
    if (!v.is_array() || v.size() != 3) bad("curve vertex must be [x, y, z]");
    c.vertices.push_back({number(v[0], "x"), number(v[1], "y"), number(v[2], "z")});
  }
  validate_polycurve(c);
  return c;
}

Json to_json(const SpatialGraph& graph) {
  Json j;
  Json circles = Json::array(), arcs = Json::array();
  for (const auto& c : graph.circles) circles.push_back(to_json(c));
  for (const auto& a : graph.arcs) arcs.push_back(to_json(a));
  j["circles"] = std::move(circles);
  j["arcs"] = std::move(arcs);
  return j;
}

SpatialGraph graph_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("circles")) bad("graph needs {circles, arcs}");
  SpatialGraph g;
  for (const auto& c : j.at("circles")) g.circles.push_back(polycurve_from_json(c));
  if (j.contains("arcs")) {
    for (const auto& a : j.at("arcs")) g.arcs.push_back(polycurve_from_json(a));
  }
  validate_spatial_graph(g);
  return g;
}

Json to_json(const ChartCurveSpec& spec) {
  Json j;
  j["chart"] = spec.chart;
  Json coords = Json::array();
  for (const auto& [s, t] : spec.coords) coords.push_back(Json::array({s, t}));
  j["coords"] = std::move(coords);
  return j;
}

ChartCurveSpec chart_curve_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("chart") || !j.contains("coords")) {
    bad("chart curve needs {chart, coords}");
  }
  ChartCurveSpec spec;
  spec.chart = j.at("chart").get<int>();
  for (const auto& c : j.at("coords")) {
    if (!c.is_array() || c.size() != 2) bad("chart coordinate must be [s, theta]");
    spec.coords.emplace_back(number(c[0], "s"), number(c[1], "theta"));
  }
  return spec;
}

Json to_json(const SurfaceSpec& spec) {
  Json j;
  j["graph"] = to_json(spec.graph);
  j["radius"] = spec.radius;
  j["n_circ"] = spec.n_circ;
  j["n_long_per_unit"] = spec.n_long_per_unit;
  return j;
}

SurfaceSpec surface_spec_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("graph")) bad("surface needs {graph, radius}");
  SurfaceSpec spec;
  spec.graph = graph_from_json(j.at("graph"));
  if (j.contains("radius")) spec.radius = number(j.at("radius"), "radius");
  if (j.contains("n_circ")) spec.n_circ = j.at("n_circ").get<int>();
  if (j.contains("n_long_per_unit")) {
    spec.n_long_per_unit = number(j.at("n_long_per_unit"), "n_long_per_unit");
  }
  return spec;
}

Json to_json(const SlopeResult& r) {
  Json j;
  j["slope"] = r.m;
  j["lk_pushoffs"] = r.lk_pushoffs;
  j["lk_knot_pushoff"] = r.lk_knot_pushoff;
  j["engines"] = r.methods_used;
  return j;
}

Json to_json(const KnotInfo& k) {
  Json j;
  j["name"] = k.name;
  if (k.tunnel_number) {
    j["tunnel_number"] = *k.tunnel_number;
  } else {
    j["tunnel_number"] = nullptr;
  }
  return j;
}

KnotInfo knot_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("name")) bad("knot needs {name}");
  KnotInfo k;
  k.name = j.at("name").get<std::string>();
  if (j.contains("tunnel_number") && !j.at("tunnel_number").is_null()) {
    k.tunnel_number = j.at("tunnel_number").get<int>();
  }
  return k;
}

Json to_json(const KSplittingRecord& r) {
  Json j;
  j["manifold"] = r.manifold.name;
  j["genus"] = r.genus;
  j["slope"] = r.slope;
  j["knot"] = to_json(r.knot);
  j["separating"] = r.separating;
  j["provenance"] = r.provenance;
  j["weakly_reducible"] = r.weakly_reducible;
  return j;
}

KSplittingRecord record_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("genus") || !j.contains("slope")) {
    bad("record needs {manifold, genus, slope, knot, separating}");
  }
  KSplittingRecord r;
  if (j.contains("manifold")) r.manifold.name = j.at("manifold").get<std::string>();
  r.genus = j.at("genus").get<int>();
  r.slope = j.at("slope").get<int>();
  if (j.contains("knot")) r.knot = knot_from_json(j.at("knot"));
  if (j.contains("separating")) r.separating = j.at("separating").get<bool>();
  if (j.contains("provenance")) r.provenance = j.at("provenance").get<std::string>();
  if (j.contains("weakly_reducible")) r.weakly_reducible = j.at("weakly_reducible").get<bool>();
  validate_record(r);
  return r;
}

namespace {

ComponentKind kind_from_string(const std::string& s) {
  if (s == "SolidTorus") return ComponentKind::SolidTorus;
  if (s == "ProductT2xI") return ComponentKind::ProductT2xI;
  if (s == "CompressionBodyC3") return ComponentKind::CompressionBodyC3;
  if (s == "HandlebodyGenusG") return ComponentKind::HandlebodyGenusG;
  bad("unknown component kind '" + s + "'");
}

}  // namespace

Json to_json(const ComponentSplitting& c) {
  Json j;
  j["id"] = c.id;
  j["kind"] = to_string(c.kind);
  j["plus_genus"] = c.plus_genus;
  Json bounds = Json::array();
  for (const auto& b : c.minus_boundaries) {
    Json bj;
    bj["id"] = b.id;
    bj["genus"] = b.genus;
    bj["carries_knot"] = b.carries_knot;
    bounds.push_back(std::move(bj));
  }
  j["minus_boundaries"] = std::move(bounds);
  j["carries_knot"] = c.carries_knot;
  j["knot_annulus"] = c.knot_annulus;
  if (c.slope) {
    j["slope"] = *c.slope;
  } else {
    j["slope"] = nullptr;
  }
  return j;
}

ComponentSplitting component_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("id") || !j.contains("kind")) {
    bad("component needs {id, kind, plus_genus, ...}");
  }
  ComponentSplitting c;
  c.id = j.at("id").get<std::string>();
  c.kind = kind_from_string(j.at("kind").get<std::string>());
  c.plus_genus = j.at("plus_genus").get<int>();
  if (j.contains("minus_boundaries")) {
    for (const auto& b : j.at("minus_boundaries")) {
      BoundaryLabel bl;
      bl.id = b.at("id").get<std::string>();
      bl.genus = b.at("genus").get<int>();
      if (b.contains("carries_knot")) bl.carries_knot = b.at("carries_knot").get<bool>();
      c.minus_boundaries.push_back(std::move(bl));
    }
  }
  if (j.contains("carries_knot")) c.carries_knot = j.at("carries_knot").get<bool>();
  if (j.contains("knot_annulus")) c.knot_annulus = j.at("knot_annulus").get<bool>();
  if (j.contains("slope") && !j.at("slope").is_null()) c.slope = j.at("slope").get<int>();
  validate_component(c);
  return c;
}

Json to_json(const GeneralizedSplitting& gs) {
  Json j;
  j["manifold"] = gs.manifold.name;
  j["knot"] = to_json(gs.knot);
  Json comps = Json::array();
  for (const auto& c : gs.components) comps.push_back(to_json(c));
  j["components"] = std::move(comps);
  Json gluings = Json::array();
  for (const auto& g : gs.gluings) {
    Json gj;
    gj["id"] = g.id;
    gj["a"] = Json::array({g.component_a, g.label_a});
    gj["b"] = Json::array({g.component_b, g.label_b});
    gj["knot_gluing"] = g.knot_gluing;
    gluings.push_back(std::move(gj));
  }
  j["gluings"] = std::move(gluings);
  return j;
}

GeneralizedSplitting generalized_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("components")) bad("splitting needs {components, gluings}");
  GeneralizedSplitting gs;
  if (j.contains("manifold")) gs.manifold.name = j.at("manifold").get<std::string>();
  if (j.contains("knot")) gs.knot = knot_from_json(j.at("knot"));
  for (const auto& c : j.at("components")) gs.components.push_back(component_from_json(c));
  if (j.contains("gluings")) {
    for (const auto& g : j.at("gluings")) {
      Gluing gl;
      gl.id = g.at("id").get<std::string>();
      gl.component_a = g.at("a")[0].get<std::string>();
      gl.label_a = g.at("a")[1].get<std::string>();
      gl.component_b = g.at("b")[0].get<std::string>();
      gl.label_b = g.at("b")[1].get<std::string>();
      if (g.contains("knot_gluing")) gl.knot_gluing = g.at("knot_gluing").get<bool>();
      gs.gluings.push_back(std::move(gl));
    }
  }
  validate_generalized(gs);
  return gs;
}

namespace {

const char* move_name(TraceMove::Kind k) {
  switch (k) {
    case TraceMove::KStabilize: return "k_stabilize";
    case TraceMove::PeelCollar: return "peel_collar";
    case TraceMove::SecondStabilize: return "second_stabilize";
    case TraceMove::WeakReduce: return "weak_reduce";
    case TraceMove::RSStabilize: return "rs_stabilize";
    case TraceMove::Amalgamate: return "amalgamate";
  }
  return "?";
}

TraceMove::Kind move_kind(const std::string& s) {
  if (s == "k_stabilize") return TraceMove::KStabilize;
  if (s == "peel_collar") return TraceMove::PeelCollar;
  if (s == "second_stabilize") return TraceMove::SecondStabilize;
  if (s == "weak_reduce") return TraceMove::WeakReduce;
  if (s == "rs_stabilize") return TraceMove::RSStabilize;
  if (s == "amalgamate") return TraceMove::Amalgamate;
  bad("unknown trace move '" + s + "'");
}

}  // namespace

Json to_json(const StabilizationTrace& t) {
  Json j;
  Json moves = Json::array();
  for (const auto& m : t.moves) {
    Json mj;
    mj["move"] = move_name(m.kind);
    if (m.kind == TraceMove::RSStabilize) mj["count"] = m.count;
    if (m.kind == TraceMove::Amalgamate) mj["order"] = m.order;
    moves.push_back(std::move(mj));
  }
  j["moves"] = std::move(moves);
  return j;
}

StabilizationTrace trace_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("moves")) bad("trace needs {moves}");
  StabilizationTrace t;
  for (const auto& m : j.at("moves")) {
    TraceMove mv;
    mv.kind = move_kind(m.at("move").get<std::string>());
    if (m.contains("count")) mv.count = m.at("count").get<int>();
    if (m.contains("order")) {
      for (const auto& o : m.at("order")) mv.order.push_back(o.get<std::string>());
    }
    t.moves.push_back(std::move(mv));
  }
  return t;
}

}  // namespace ksplit
