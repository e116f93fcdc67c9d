#pragma once

#include <cstdint>
#include <utility>

#include "ksplit/records.hpp"

namespace ksplit {

// K-stabilization: one unknotted handle, genus up by one, slope untouched.
// Records carrying geometry get a real handle (seeded placement search) and
// the slope is recomputed from the linking engines afterwards.
KSplittingRecord k_stabilize(const KSplittingRecord& r, std::uint64_t seed = 0);

// The stabilization criterion: a V-disk missing the knot whose boundary
// meets the partner disk's boundary exactly once (the partner may cross the
// knot any number of times).
bool is_k_stabilized(const KSplittingRecord& r, const DiskWitness& d1, const DiskWitness& d2);

// Meridian twisting: slope moves by exactly k (convention sigma = +1).
// Geometric records re-verify the new slope on the twisted chart curve.
KSplittingRecord dehn_twist(const KSplittingRecord& r, int k, std::uint64_t seed = 0);

// Connected sum of records in S3: genus and slope add; summing with an
// unknot record keeps the knot.
KSplittingRecord connect_sum(const KSplittingRecord& r1, const KSplittingRecord& r2);

struct RealizeOptions {
  bool geometric = false;
  std::uint64_t seed = 0;
  double epsilon = 0.0;  // pushoff width; 0 picks a radius-scaled default
};

struct RealizeResult {
  KSplittingRecord record;
  int twist_count = 0;
};

// Embed the knot in a genus t(K)+1 surface with any prescribed slope: tube
// around the knot and its tunnels, then twist. Geometric mode builds the
// surface for the bundled fixtures ("unknot", "figure8") and verifies every
// slope with both linking engines.
RealizeResult realize_slope(const KnotInfo& knot, int target_m,
                            const RealizeOptions& options = {});

// First pipeline stabilization: the knot becomes a longitude of a collar
// solid torus split off by a disk missing K.
std::pair<KSplittingRecord, DiskWitness> peel_collar(const KSplittingRecord& r);

// Second pipeline stabilization, producing the disjoint partner disk; the
// result is flagged K-weakly reducible.
std::pair<KSplittingRecord, DiskWitness> second_stabilize(const KSplittingRecord& r_tilde,
                                                          const DiskWitness& d1);

// The canonical disk families produced by the two pipeline stabilizations.
WeakReductionWitness pipeline_witness();

// Compress along both disk families: the four-component census
//   C1 solid torus (knot, slope m) - C2 T2xI (knot) - C3 compression body - C4 handlebody
// glued along knot torus / plain torus / genus-g surface.
GeneralizedSplitting weak_reduce(const KSplittingRecord& r_hat, const WeakReductionWitness& w);

// Glue two components along a shared boundary label: plus genus adds minus
// the interface genus; knot gluings require both annulus certificates.
ComponentSplitting amalgamate_pair(const ComponentSplitting& a, const ComponentSplitting& b,
                                   const std::string& label);

// Consume every gluing (in the given order, default as stored) down to a
// single closed record. The result is order independent.
KSplittingRecord amalgamate_all(const GeneralizedSplitting& gs,
                                const std::vector<std::string>& order = {});

// The three-splitting decomposition: collar of K, T2 x I, and the splitting
// of the knot complement (C3 and C4 pre-amalgamated).
struct ThreeSplitting {
  GeneralizedSplitting splitting;  // components ordered [collar, product, complement]
  const ComponentSplitting& collar() const { return splitting.components[0]; }
  const ComponentSplitting& product() const { return splitting.components[1]; }
  const ComponentSplitting& complement() const { return splitting.components[2]; }
};
ThreeSplitting decompose_three(const KSplittingRecord& r);

struct CommonStabilization {
  KSplittingRecord record;
  StabilizationTrace trace_a, trace_b;
};

// The main pipeline: two records of the same knot and slope are carried to
// one common record of genus max(gA, gB) + 2 + extra_stabs by decomposing
// both, leveling the complement splittings, and re-amalgamating. Unequal
// slopes throw SlopeMismatchError: the slope obstruction is absolute.
CommonStabilization common_stabilization(const KSplittingRecord& ra, const KSplittingRecord& rb,
                                         int extra_stabs = 0);

// Replays a trace from a record; used to audit pipeline outputs.
KSplittingRecord replay_trace(const KSplittingRecord& input, const StabilizationTrace& trace);

}  // namespace ksplit
