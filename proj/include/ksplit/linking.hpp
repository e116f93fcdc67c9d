#pragma once

#include <cstdint>
#include <optional>

#include "ksplit/curve.hpp"

namespace ksplit {

// Linking numbers of disjoint closed PL curves in Euclidean 3-space, by two
// independent routes. Both use the same orientation convention: at a
// projected crossing with points x1 on c1 and x2 on c2 and tangents t1, t2,
// the crossing sign is sign(det[t1, t2, x2 - x1]). Under this convention two
// parallel (p,q) curves on the standard torus link pq times.

// Signed-crossing count along a projection direction, halved. A direction is
// rejected (and redrawn from the seeded generator, up to 32 attempts) when a
// segment pair is near-parallel in projection, a crossing parameter falls
// within tol_proj of a segment end, or the strand heights are ambiguous.
int linking_number_crossings(const PolyCurve3& c1, const PolyCurve3& c2,
                             std::optional<Vec3> direction = std::nullopt,
                             std::uint64_t seed = 0);

// Gauss double sum: exact per-segment-pair solid angles, totalled and divided
// by 4*pi. Throws PrecisionError when the total is farther than 0.1 from an
// integer (curves too close or too coarse); an off-by-one linking number is
// silent poison downstream, so this fails loudly instead of rounding hard.
double linking_number_gauss_raw(const PolyCurve3& c1, const PolyCurve3& c2);
int linking_number_gauss(const PolyCurve3& c1, const PolyCurve3& c2);

// Runs both engines and insists they agree; never silently prefers one.
int linking_number_checked(const PolyCurve3& c1, const PolyCurve3& c2, std::uint64_t seed = 0);

}  // namespace ksplit
