#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ksplit/surface_curve.hpp"

namespace ksplit {

struct SlopeResult {
  int m = 0;
  int lk_pushoffs = 0;       // lk(alpha1, alpha2)
  int lk_knot_pushoff = 0;   // lk(K, alpha1)
  std::vector<std::string> methods_used{"crossings", "gauss"};
};

// Surface slope of an embedded curve: push off to both sides within the
// surface and take the linking number of the two copies. Both engines run on
// every linking number and must agree, and the identity
// lk(alpha1, alpha2) = lk(K, alpha1) is asserted before the result is
// returned.
SlopeResult surface_slope(const TubeSurface& surface, const CurveOnSurface& curve,
                          double epsilon, std::uint64_t seed = 0);

// Same value, named for the canonical-basis reading; slopes here are always
// plain integers.
int slope_in_canonical_basis(const TubeSurface& surface, const CurveOnSurface& curve,
                             double epsilon, std::uint64_t seed = 0);

struct CanonicalFraming {
  int chart_id = 0;
  int framing_offset = 0;  // f such that lk(core, pushoff with f wraps) = 0
};

// The preferred longitude of a chart: lk(core, pushoff_f) = lk(core, pushoff_0) + f,
// so f is minus the parallel-transport framing. The result is re-verified by
// recomputing the linking number at f.
CanonicalFraming canonical_framing(const TubeSurface& surface, int chart_id,
                                   std::uint64_t seed = 0);

}  // namespace ksplit
