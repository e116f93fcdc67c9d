#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ksplit/records.hpp"
#include "ksplit/slope.hpp"

namespace ksplit {

// Insertion-ordered JSON so serialization is byte-stable: for every value x,
// dump(parse(dump(x))) == dump(x).
using Json = nlohmann::ordered_json;

std::string dump_json(const Json& j);

Json to_json(const PolyCurve3& curve);
PolyCurve3 polycurve_from_json(const Json& j);

Json to_json(const SpatialGraph& graph);
SpatialGraph graph_from_json(const Json& j);

// {"chart": id, "coords": [[s, theta], ...]}; the final coordinate is the
// closure marker (first point shifted by the integer wraps).
struct ChartCurveSpec {
  int chart = 0;
  std::vector<std::pair<double, double>> coords;
};
Json to_json(const ChartCurveSpec& spec);
ChartCurveSpec chart_curve_from_json(const Json& j);

// {"graph": {...}, "radius": r, "n_circ": n, "n_long_per_unit": x}
struct SurfaceSpec {
  SpatialGraph graph;
  double radius = 0.0;  // 0 = admissible default
  int n_circ = 16;
  double n_long_per_unit = 8.0;
};
Json to_json(const SurfaceSpec& spec);
SurfaceSpec surface_spec_from_json(const Json& j);

Json to_json(const SlopeResult& r);

Json to_json(const KnotInfo& k);
KnotInfo knot_from_json(const Json& j);

Json to_json(const KSplittingRecord& r);
KSplittingRecord record_from_json(const Json& j);

Json to_json(const ComponentSplitting& c);
ComponentSplitting component_from_json(const Json& j);

Json to_json(const GeneralizedSplitting& gs);
GeneralizedSplitting generalized_from_json(const Json& j);

Json to_json(const StabilizationTrace& t);
StabilizationTrace trace_from_json(const Json& j);

}  // namespace ksplit
