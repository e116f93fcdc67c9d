#include "ksplit/slope.hpp"

#include "ksplit/errors.hpp"
#include "ksplit/linking.hpp"

namespace ksplit {

namespace {

int both_engines(const PolyCurve3& a, const PolyCurve3& b, std::uint64_t seed,
                 const char* what) {
  int by_crossings = linking_number_crossings(a, b, std::nullopt, seed);
  int by_gauss = linking_number_gauss(a, b);
  if (by_crossings != by_gauss) {
    throw EngineMismatchError(std::string(what) + ": crossings=" + std::to_string(by_crossings) +
                              " gauss=" + std::to_string(by_gauss));
  }
  return by_gauss;
}

}  // namespace

SlopeResult surface_slope(const TubeSurface& surface, const CurveOnSurface& curve,
                          double epsilon, std::uint64_t seed) {
  PushoffPair pair = surface_pushoffs(surface, curve, epsilon);
  SlopeResult result;
  result.lk_pushoffs = both_engines(pair.alpha1.points, pair.alpha2.points, seed,
                                    "lk(alpha1, alpha2)");
  result.lk_knot_pushoff = both_engines(curve.points, pair.alpha1.points, seed, "lk(K, alpha1)");
  if (result.lk_pushoffs != result.lk_knot_pushoff) {
    throw EngineMismatchError("slope identity failed: lk(alpha1,alpha2)=" +
                              std::to_string(result.lk_pushoffs) + " but lk(K,alpha1)=" +
                              std::to_string(result.lk_knot_pushoff));
  }
  result.m = result.lk_pushoffs;
  return result;
}

int slope_in_canonical_basis(const TubeSurface& surface, const CurveOnSurface& curve,
                             double epsilon, std::uint64_t seed) {
  return surface_slope(surface, curve, epsilon, seed).m;
}

CanonicalFraming canonical_framing(const TubeSurface& surface, int chart_id,
                                   std::uint64_t seed) {
  if (chart_id < 0 || chart_id >= static_cast<int>(surface.charts.size())) {
    throw InputError("no such chart: " + std::to_string(chart_id));
  }
  const TubeChart& ch = surface.charts[chart_id];
  if (!ch.closed) throw InputError("canonical framing needs a closed chart core");

  // Ring centers give a centerline of the tube, isotopic to the core within it.
  PolyCurve3 core;
  core.closed = true;
  for (int r = 0; r < ch.n_long; ++r) {
    Vec3 sum{0, 0, 0};
    for (int j = 0; j < ch.n_circ; ++j) sum += surface.mesh.vertices[ch.vertex_id(r, j)];
    core.vertices.push_back(sum / ch.n_circ);
  }

  auto pushoff = make_longitude_curve(surface, chart_id, 0);
  int w0 = both_engines(core, pushoff.points, seed, "lk(core, pushoff_0)");
  CanonicalFraming out;
  out.chart_id = chart_id;
  out.framing_offset = -w0;

  auto zero = make_longitude_curve(surface, chart_id, out.framing_offset);
  int check = both_engines(core, zero.points, seed, "lk(core, pushoff_f)");
  if (check != 0) {
    throw EngineMismatchError("canonical framing verification failed: lk = " +
                              std::to_string(check) + " at f = " +
                              std::to_string(out.framing_offset));
  }
  return out;
}

}  // namespace ksplit
