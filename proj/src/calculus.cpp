#include "ksplit/calculus.hpp"

#include <algorithm>
#include <set>

#include "ksplit/errors.hpp"
#include "ksplit/slope.hpp"

namespace ksplit {

namespace {

double default_epsilon(const TubeSurface& surface, int chart_id) {
  return 0.1 * surface.charts[chart_id].radius;
}

// Re-validate the knot curve against a modified surface and re-verify the
// slope with both engines.
std::shared_ptr<const GeometricRef> rebuild_geometry(TubeSurface surface,
                                                     const CurveOnSurface& old_curve,
                                                     double epsilon, int expected_slope,
                                                     std::uint64_t seed) {
  auto ref = std::make_shared<GeometricRef>();
  ref->surface = std::move(surface);
  ref->knot_curve = curve_on_tube(ref->surface, old_curve.chart_id, old_curve.coords);
  ref->epsilon = epsilon;
  int m = surface_slope(ref->surface, ref->knot_curve, epsilon, seed).m;
  if (m != expected_slope) {
    throw GeometryError("geometric slope " + std::to_string(m) +
                        " disagrees with the symbolic slope " + std::to_string(expected_slope));
  }
  return ref;
}

void check_genus_coherence(const KSplittingRecord& r) {
  if (!r.geometric_ref) return;
  int g = genus(r.geometric_ref->surface.mesh);
  if (g != r.genus) {
    throw GeometryError("geometric genus " + std::to_string(g) +
                        " disagrees with the symbolic genus " + std::to_string(r.genus));
  }
}

ComponentKind classify(int plus_genus, const std::vector<BoundaryLabel>& minus) {
  if (minus.empty()) return ComponentKind::HandlebodyGenusG;
  if (minus.size() == 1 && minus[0].genus == 1 && plus_genus == 1) {
    return ComponentKind::SolidTorus;
  }
  if (minus.size() == 2 && minus[0].genus == 1 && minus[1].genus == 1 && plus_genus == 2) {
    return ComponentKind::ProductT2xI;
  }
  return ComponentKind::CompressionBodyC3;
}

}  // namespace

KSplittingRecord k_stabilize(const KSplittingRecord& r, std::uint64_t seed) {
  validate_record(r);
  KSplittingRecord out = r;
  out.genus += 1;
  out.provenance = "k_stabilize";
  out.weakly_reducible = false;
  if (r.geometric_ref) {
    const GeometricRef& g = *r.geometric_ref;
    double corridor = 3.0 * g.epsilon;
    Rng rng(seed ^ 0x51ab5eedull);
    StabilizationSite site =
        find_stabilization_site(g.surface, g.knot_curve.points, corridor, rng);
    TubeSurface stabbed = k_stabilize_geometric(g.surface, g.knot_curve.points, corridor, site);
    out.geometric_ref = rebuild_geometry(std::move(stabbed), g.knot_curve, g.epsilon, out.slope,
                                         seed);
    check_genus_coherence(out);
  }
  return out;
}

bool is_k_stabilized(const KSplittingRecord& r, const DiskWitness& d1, const DiskWitness& d2) {
  validate_record(r);
  if (d1.side == d2.side) throw InputError("stabilization witnesses must lie on opposite sides");
  return d1.knot_intersections == 0 && d1.boundary_intersections_with_partner == 1;
}

KSplittingRecord dehn_twist(const KSplittingRecord& r, int k, std::uint64_t seed) {
  validate_record(r);
  KSplittingRecord out = r;
  out.slope += k;  // sigma = +1 per positive meridian twist
  out.provenance = "dehn_twist";
  if (out.separating && out.manifold.is_s3() && out.slope != 0) out.separating = false;
  if (r.geometric_ref && k != 0) {
    const GeometricRef& g = *r.geometric_ref;
    CurveOnSurface twisted = dehn_twist_curve(g.surface, g.knot_curve, k);
    auto ref = std::make_shared<GeometricRef>();
    ref->surface = g.surface;
    ref->knot_curve = twisted;
    ref->epsilon = g.epsilon;
    int m = surface_slope(ref->surface, ref->knot_curve, ref->epsilon, seed).m;
    if (m != out.slope) {
      throw GeometryError("twisted slope " + std::to_string(m) + " does not match symbolic " +
                          std::to_string(out.slope));
    }
    out.geometric_ref = ref;
  }
  return out;
}

KSplittingRecord connect_sum(const KSplittingRecord& r1, const KSplittingRecord& r2) {
  validate_record(r1);
  validate_record(r2);
  if (!r1.manifold.is_s3() || !r2.manifold.is_s3()) {
    throw InputError("connected sums are supported in S3 only");
  }
  KSplittingRecord out;
  out.manifold = r1.manifold;
  out.genus = r1.genus + r2.genus;
  out.slope = r1.slope + r2.slope;
  if (r2.knot.is_unknot()) {
    out.knot = r1.knot;
  } else if (r1.knot.is_unknot()) {
    out.knot = r2.knot;
  } else {
    out.knot.name = r1.knot.name + "#" + r2.knot.name;
    out.knot.tunnel_number = std::nullopt;
  }
  out.separating = r1.separating && r2.separating;
  out.provenance = "connect_sum";
  return out;
}

RealizeResult realize_slope(const KnotInfo& knot, int target_m, const RealizeOptions& options) {
  if (!knot.tunnel_number) {
    throw InputError("realize_slope needs a knot with known tunnel number");
  }
  const int t = *knot.tunnel_number;
  RealizeResult out;
  out.record.manifold = ManifoldLabel{"S3"};
  out.record.genus = t + 1;
  out.record.slope = target_m;
  out.record.knot = knot;
  out.record.separating = false;
  out.record.provenance = "realize_slope";

  if (!options.geometric) {
    out.twist_count = std::abs(target_m);
    return out;
  }

  SpatialGraph graph;
  double radius;
  if (knot.name == "unknot") {
    if (t != 0) throw InputError("the unknot has tunnel number 0");
    graph.circles.push_back(make_circle_curve(2.0, 64));
    radius = 0.5;
  } else if (knot.name == "figure8") {
    if (t != 1) throw InputError("the figure-eight knot has tunnel number 1");
    graph = make_figure_eight_with_tunnel(240);
    radius = 0.8 * suggest_tube_radius(graph);
  } else if (knot.name == "trefoil") {
    if (t != 1) throw InputError("the trefoil has tunnel number 1");
    graph = make_trefoil_with_tunnel(180);
    radius = 0.8 * suggest_tube_radius(graph);
  } else {
    throw InputError("no geometric fixture for knot '" + knot.name +
                     "'; supported: unknot, figure8, trefoil");
  }

  auto ref = std::make_shared<GeometricRef>();
  ref->surface = make_tube_surface(graph, radius);
  ref->epsilon = options.epsilon > 0 ? options.epsilon : default_epsilon(ref->surface, 0);

  CurveOnSurface base = make_longitude_curve(ref->surface, 0, 0);
  int base_slope = surface_slope(ref->surface, base, ref->epsilon, options.seed).m;
  int twists = target_m - base_slope;
  ref->knot_curve = twists == 0 ? base : dehn_twist_curve(ref->surface, base, twists);
  int m = surface_slope(ref->surface, ref->knot_curve, ref->epsilon, options.seed).m;
  if (m != target_m) {
    throw GeometryError("realized slope " + std::to_string(m) + " misses target " +
                        std::to_string(target_m));
  }
  out.record.geometric_ref = ref;
  out.twist_count = std::abs(twists);
  check_genus_coherence(out.record);
  return out;
}

std::pair<KSplittingRecord, DiskWitness> peel_collar(const KSplittingRecord& r) {
  validate_record(r);
  KSplittingRecord out = r;
  out.genus += 1;
  out.separating = false;  // the handle straddles K, so K meets a disk once
  out.provenance = "peel_collar";
  out.weakly_reducible = false;
  out.geometric_ref.reset();  // the collar stabilization is not realized in the mesh class
  DiskWitness d1;
  d1.side = Side::V;
  d1.knot_intersections = 0;
  d1.boundary_intersections_with_partner = 0;
  d1.separating = true;
  return {out, d1};
}

std::pair<KSplittingRecord, DiskWitness> second_stabilize(const KSplittingRecord& r_tilde,
                                                          const DiskWitness& d1) {
  if (r_tilde.provenance != "peel_collar") {
    throw ProtocolError("second_stabilize consumes the output of peel_collar");
  }
  if (d1.side != Side::V || d1.knot_intersections != 0) {
    throw InputError("the collar witness must be a V-side disk missing the knot");
  }
  KSplittingRecord out = r_tilde;
  out.genus += 1;
  out.provenance = "second_stabilize";
  out.weakly_reducible = true;
  DiskWitness d2;
  d2.side = Side::W;
  d2.knot_intersections = 0;
  d2.boundary_intersections_with_partner = 0;
  d2.separating = true;
  return {out, d2};
}

WeakReductionWitness pipeline_witness() {
  WeakReductionWitness w;
  DiskWitness d1{Side::V, 0, 0, true};
  DiskWitness d2{Side::W, 0, 0, true};
  w.delta_v = {d1};
  w.delta_w = {d2};
  return w;
}

GeneralizedSplitting weak_reduce(const KSplittingRecord& r_hat, const WeakReductionWitness& w) {
  validate_record(r_hat);
  if (!r_hat.weakly_reducible) {
    throw ProtocolError("weak_reduce needs a record flagged K-weakly reducible "
                        "(run peel_collar and second_stabilize first)");
  }
  validate_weak_reduction_witness(w);
  const int g = r_hat.genus - 2;
  if (g < 0) throw InputError("flagged record has genus below 2");
  const int m = r_hat.slope;

  GeneralizedSplitting gs;
  gs.manifold = r_hat.manifold;
  gs.knot = r_hat.knot;

  ComponentSplitting c1;
  c1.id = "C1";
  c1.kind = ComponentKind::SolidTorus;
  c1.plus_genus = 1;
  c1.minus_boundaries = {{"knot_torus", 1, true}};
  c1.carries_knot = true;
  c1.knot_annulus = true;
  c1.slope = m;

  ComponentSplitting c2;
  c2.id = "C2";
  c2.kind = ComponentKind::ProductT2xI;
  c2.plus_genus = 2;
  c2.minus_boundaries = {{"knot_torus", 1, true}, {"plain_torus", 1, false}};
  c2.carries_knot = true;
  c2.knot_annulus = true;
  c2.slope = m;

  ComponentSplitting c3;
  c3.id = "C3";
  c3.kind = ComponentKind::CompressionBodyC3;
  c3.plus_genus = g + 1;
  c3.minus_boundaries = {{"plain_torus", 1, false}, {"surface", g, false}};

  ComponentSplitting c4;
  c4.id = "C4";
  c4.kind = ComponentKind::HandlebodyGenusG;
  c4.plus_genus = g;
  c4.minus_boundaries = {{"surface", g, false}};

  gs.components = {c1, c2, c3, c4};
  gs.gluings = {
      {"knot_torus", "C1", "knot_torus", "C2", "knot_torus", true},
      {"plain_torus", "C2", "plain_torus", "C3", "plain_torus", false},
      {"surface", "C3", "surface", "C4", "surface", false},
  };
  validate_generalized(gs);
  return gs;
}

ComponentSplitting amalgamate_pair(const ComponentSplitting& a, const ComponentSplitting& b,
                                   const std::string& label) {
  auto find_label = [&](const ComponentSplitting& c) -> const BoundaryLabel* {
    for (const auto& bl : c.minus_boundaries) {
      if (bl.id == label) return &bl;
    }
    return nullptr;
  };
  const BoundaryLabel* la = find_label(a);
  const BoundaryLabel* lb = find_label(b);
  if (!la || !lb) {
    throw GluingError("boundary label '" + label + "' is not shared by both components");
  }
  if (la->genus != lb->genus) {
    throw GluingError("gluing genus mismatch at '" + label + "': " + std::to_string(la->genus) +
                      " vs " + std::to_string(lb->genus));
  }
  if (la->carries_knot != lb->carries_knot) {
    throw GluingError("knot copy glued to a plain boundary at '" + label + "'");
  }
  if (la->carries_knot && (!a.knot_annulus || !b.knot_annulus)) {
    throw GluingError("K-amalgamation at '" + label +
                      "' needs the annulus certificate on both sides");
  }
  if (a.carries_knot && b.carries_knot && a.slope != b.slope) {
    throw GluingError("slope mismatch between knot copies");
  }

  const int h = la->genus;
  ComponentSplitting out;
  out.id = a.id + "+" + b.id;
  out.plus_genus = a.plus_genus + b.plus_genus - h;
  for (const auto& bl : a.minus_boundaries) {
    if (bl.id != label) out.minus_boundaries.push_back(bl);
  }
  for (const auto& bl : b.minus_boundaries) {
    if (bl.id != label) out.minus_boundaries.push_back(bl);
  }
  out.carries_knot = a.carries_knot || b.carries_knot;
  out.knot_annulus = out.carries_knot;
  if (a.carries_knot) {
    out.slope = a.slope;
  } else if (b.carries_knot) {
    out.slope = b.slope;
  }
  out.kind = classify(out.plus_genus, out.minus_boundaries);
  return out;
}

KSplittingRecord amalgamate_all(const GeneralizedSplitting& gs,
                                const std::vector<std::string>& order) {
  validate_generalized(gs);
  std::vector<std::string> sequence = order;
  if (sequence.empty()) {
    for (const auto& g : gs.gluings) sequence.push_back(g.id);
  }
  if (sequence.size() != gs.gluings.size()) {
    throw GluingError("amalgamation order must consume every gluing exactly once");
  }
  {
    std::vector<std::string> sorted_a = sequence, sorted_b;
    for (const auto& g : gs.gluings) sorted_b.push_back(g.id);
    std::sort(sorted_a.begin(), sorted_a.end());
    std::sort(sorted_b.begin(), sorted_b.end());
    if (sorted_a != sorted_b) {
      throw GluingError("amalgamation order must consume every gluing exactly once");
    }
  }

  std::vector<ComponentSplitting> live = gs.components;
  for (const std::string& gl : sequence) {
    std::vector<size_t> holders;
    for (size_t i = 0; i < live.size(); ++i) {
      for (const auto& bl : live[i].minus_boundaries) {
        if (bl.id == gl) {
          holders.push_back(i);
          break;
        }
      }
    }
    if (holders.size() != 2) {
      throw GluingError("gluing '" + gl + "' does not join two distinct components");
    }
    ComponentSplitting merged = amalgamate_pair(live[holders[0]], live[holders[1]], gl);
    live.erase(live.begin() + holders[1]);
    live.erase(live.begin() + holders[0]);
    live.push_back(std::move(merged));
  }
  if (live.size() != 1) {
    throw GluingError("amalgamation left " + std::to_string(live.size()) + " components");
  }
  const ComponentSplitting& final_comp = live[0];
  if (!final_comp.minus_boundaries.empty()) {
    throw GluingError("amalgamation left exposed boundaries; the manifold is not closed");
  }

  KSplittingRecord out;
  out.manifold = gs.manifold;
  out.genus = final_comp.plus_genus;
  out.slope = final_comp.slope.value_or(0);
  out.knot = gs.knot;
  out.separating = false;
  out.provenance = "amalgamate";
  out.weakly_reducible = false;
  return out;
}

ThreeSplitting decompose_three(const KSplittingRecord& r) {
  auto [tilde, d1] = peel_collar(r);
  auto [hat, d2] = second_stabilize(tilde, d1);
  GeneralizedSplitting four = weak_reduce(hat, pipeline_witness());

  // Pre-amalgamate C3 and C4 into the knot-complement splitting.
  ThreeSplitting out;
  out.splitting.manifold = four.manifold;
  out.splitting.knot = four.knot;
  ComponentSplitting complement = amalgamate_pair(four.components[2], four.components[3],
                                                  "surface");
  out.splitting.components = {four.components[0], four.components[1], std::move(complement)};
  out.splitting.gluings = {four.gluings[0], four.gluings[1]};
  out.splitting.gluings[1].component_b = out.splitting.components[2].id;
  validate_generalized(out.splitting);
  return out;
}

CommonStabilization common_stabilization(const KSplittingRecord& ra, const KSplittingRecord& rb,
                                         int extra_stabs) {
  validate_record(ra);
  validate_record(rb);
  if (extra_stabs < 0) throw InputError("extra_stabs must be non-negative");
  if (ra.manifold.name != rb.manifold.name) {
    throw ManifoldMismatchError("records live in different manifolds: " + ra.manifold.name +
                                " vs " + rb.manifold.name);
  }
  if (ra.knot.name != rb.knot.name) {
    throw KnotMismatchError("records carry different knots: " + ra.knot.name + " vs " +
                            rb.knot.name);
  }
  if (ra.slope != rb.slope) {
    throw SlopeMismatchError(ra.slope, rb.slope);
  }

  const int target = std::max(ra.genus, rb.genus) + 1 + extra_stabs;  // complement genus

  auto run_side = [&](const KSplittingRecord& r, StabilizationTrace& trace) {
    ThreeSplitting three = decompose_three(r);
    int count = target - three.complement().plus_genus;
    GeneralizedSplitting gs = three.splitting;
    gs.components[2].plus_genus += count;
    gs.components[2].kind = classify(gs.components[2].plus_genus,
                                     gs.components[2].minus_boundaries);
    KSplittingRecord result = amalgamate_all(gs, {"knot_torus", "plain_torus"});

    trace.moves = {
        {TraceMove::PeelCollar, 0, {}},
        {TraceMove::SecondStabilize, 0, {}},
        {TraceMove::WeakReduce, 0, {}},
        {TraceMove::Amalgamate, 0, {"surface"}},
        {TraceMove::RSStabilize, count, {}},
        {TraceMove::Amalgamate, 0, {"knot_torus", "plain_torus"}},
    };
    return result;
  };

  CommonStabilization out;
  KSplittingRecord result_a = run_side(ra, out.trace_a);
  KSplittingRecord result_b = run_side(rb, out.trace_b);
  if (!(result_a == result_b)) {
    throw ProtocolError("pipeline produced different common records");
  }
  out.record = result_a;
  return out;
}

KSplittingRecord replay_trace(const KSplittingRecord& input, const StabilizationTrace& trace) {
  KSplittingRecord record = input;
  record.geometric_ref.reset();  // replay is symbolic
  std::optional<GeneralizedSplitting> gs;
  std::optional<DiskWitness> d1;

  for (const auto& move : trace.moves) {
    switch (move.kind) {
      case TraceMove::KStabilize:
        record = k_stabilize(record);
        break;
      case TraceMove::PeelCollar: {
        auto [r, d] = peel_collar(record);
        record = r;
        d1 = d;
        break;
      }
      case TraceMove::SecondStabilize: {
        if (!d1) throw ProtocolError("trace runs second_stabilize before peel_collar");
        auto [r, d] = second_stabilize(record, *d1);
        record = r;
        break;
      }
      case TraceMove::WeakReduce:
        gs = weak_reduce(record, pipeline_witness());
        break;
      case TraceMove::RSStabilize: {
        if (!gs) throw ProtocolError("trace stabilizes a complement before weak reduction");
        bool found = false;
        for (auto& c : gs->components) {
          if (!c.carries_knot) {
            c.plus_genus += move.count;
            c.kind = classify(c.plus_genus, c.minus_boundaries);
            found = true;
            break;
          }
        }
        if (!found) throw ProtocolError("no knot-free component to stabilize");
        break;
      }
      case TraceMove::Amalgamate: {
        if (!gs) throw ProtocolError("trace amalgamates before weak reduction");
        // consume the named gluings from the current splitting
        std::vector<ComponentSplitting> live = gs->components;
        std::vector<Gluing> remaining;
        std::set<std::string> consumed(move.order.begin(), move.order.end());
        for (const std::string& gl : move.order) {
          std::vector<size_t> holders;
          for (size_t i = 0; i < live.size(); ++i) {
            for (const auto& bl : live[i].minus_boundaries) {
              if (bl.id == gl) {
                holders.push_back(i);
                break;
              }
            }
          }
          if (holders.size() != 2) throw GluingError("replay gluing '" + gl + "' unavailable");
          ComponentSplitting merged = amalgamate_pair(live[holders[0]], live[holders[1]], gl);
          live.erase(live.begin() + holders[1]);
          live.erase(live.begin() + holders[0]);
          live.push_back(std::move(merged));
        }
        for (const auto& g : gs->gluings) {
          if (!consumed.count(g.id)) remaining.push_back(g);
        }
        gs->components = std::move(live);
        gs->gluings = std::move(remaining);
        if (gs->components.size() == 1 && gs->gluings.empty() &&
            gs->components[0].minus_boundaries.empty()) {
          const auto& c = gs->components[0];
          record.genus = c.plus_genus;
          record.slope = c.slope.value_or(record.slope);
          record.separating = false;
          record.provenance = "amalgamate";
          record.weakly_reducible = false;
          gs.reset();
        }
        break;
      }
    }
  }
  if (gs) throw ProtocolError("trace ended before amalgamation completed");
  return record;
}

}  // namespace ksplit
