#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ksplit/surface_curve.hpp"

namespace ksplit {

struct KnotInfo {
  std::string name = "unknot";
  std::optional<int> tunnel_number;  // t(K) >= 0 when known

  // t(K) <= h(K) <= t(K) + 1
  std::optional<std::pair<int, int>> h_genus_bounds() const {
    if (!tunnel_number) return std::nullopt;
    return std::pair<int, int>{*tunnel_number, *tunnel_number + 1};
  }
  bool is_unknot() const { return name == "unknot"; }
};

struct ManifoldLabel {
  std::string name = "S3";
  bool is_s3() const { return name == "S3"; }
};

// Geometric realization attached to a record: the splitting surface as a
// tube mesh with the knot embedded as a chart curve.
struct GeometricRef {
  TubeSurface surface;
  CurveOnSurface knot_curve;
  double epsilon = 0.0;  // pushoff width used for slope verification
};

// Symbolic K-splitting pair (S, K): everything the calculus tracks about a
// knot embedded in a Heegaard surface.
struct KSplittingRecord {
  ManifoldLabel manifold;
  int genus = 0;
  int slope = 0;
  KnotInfo knot;
  bool separating = false;
  std::string provenance = "input";   // construction history; not part of equality
  bool weakly_reducible = false;      // set by the second stabilization
  std::shared_ptr<const GeometricRef> geometric_ref;
};

// Equality of records is equality of (manifold, genus, slope, knot label,
// separating); provenance and geometry are bookkeeping.
bool operator==(const KSplittingRecord& a, const KSplittingRecord& b);
inline bool operator!=(const KSplittingRecord& a, const KSplittingRecord& b) { return !(a == b); }

// Throws InputError when a record violates its own invariants (a separating
// knot in S3 must have slope 0; genus must be non-negative).
void validate_record(const KSplittingRecord& r);

enum class Side { V, W };

struct DiskWitness {
  Side side = Side::V;
  int knot_intersections = 0;
  int boundary_intersections_with_partner = 0;
  bool separating = false;
};

struct WeakReductionWitness {
  std::vector<DiskWitness> delta_v, delta_w;
};

// Both families nonempty, every disk misses the knot, all cross pairs have
// disjoint boundaries.
void validate_weak_reduction_witness(const WeakReductionWitness& w);

enum class ComponentKind { SolidTorus, ProductT2xI, CompressionBodyC3, HandlebodyGenusG };

std::string to_string(ComponentKind k);

struct BoundaryLabel {
  std::string id;
  int genus = 1;
  bool carries_knot = false;
};

// One component of a generalized splitting, with its induced Heegaard
// splitting summarized by the genus of its positive boundary.
struct ComponentSplitting {
  std::string id;
  ComponentKind kind = ComponentKind::HandlebodyGenusG;
  int plus_genus = 0;
  std::vector<BoundaryLabel> minus_boundaries;
  bool carries_knot = false;
  bool knot_annulus = false;  // the two knot copies cobound an annulus
  std::optional<int> slope;   // present when carries_knot
};

void validate_component(const ComponentSplitting& c);

struct Gluing {
  std::string id;  // consumed by name during amalgamation
  std::string component_a, label_a;
  std::string component_b, label_b;
  bool knot_gluing = false;
};

struct GeneralizedSplitting {
  ManifoldLabel manifold;
  KnotInfo knot;
  std::vector<ComponentSplitting> components;
  std::vector<Gluing> gluings;
};

// Gluing graph connected, every boundary label glued exactly once (closed
// manifold), glued labels have equal genus, knot gluings join knot copies.
void validate_generalized(const GeneralizedSplitting& gs);

// Audit trail for the common-stabilization pipeline; replaying a trace from
// the input record must reproduce the output record exactly.
struct TraceMove {
  enum Kind { KStabilize, PeelCollar, SecondStabilize, WeakReduce, RSStabilize, Amalgamate };
  Kind kind = KStabilize;
  int count = 0;                   // RSStabilize
  std::vector<std::string> order;  // Amalgamate: gluing ids in consumption order
};

struct StabilizationTrace {
  std::vector<TraceMove> moves;
};

}  // namespace ksplit
