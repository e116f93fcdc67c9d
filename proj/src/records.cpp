#include "ksplit/records.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "ksplit/errors.hpp"

namespace ksplit {

bool operator==(const KSplittingRecord& a, const KSplittingRecord& b) {
  return a.manifold.name == b.manifold.name && a.genus == b.genus && a.slope == b.slope &&
         a.knot.name == b.knot.name && a.separating == b.separating;
}

void validate_record(const KSplittingRecord& r) {
  if (r.genus < 0) throw InputError("record genus must be non-negative");
  if (r.separating && r.manifold.is_s3() && r.slope != 0) {
    throw InputError("a separating knot in S3 has slope 0, got " + std::to_string(r.slope));
  }
  if (r.knot.tunnel_number && *r.knot.tunnel_number < 0) {
    throw InputError("tunnel number must be non-negative");
  }
}

void validate_weak_reduction_witness(const WeakReductionWitness& w) {
  if (w.delta_v.empty() || w.delta_w.empty()) {
    throw InputError("weak reduction needs nonempty disk families on both sides");
  }
  for (const auto& family : {w.delta_v, w.delta_w}) {
    for (const auto& d : family) {
      if (d.knot_intersections != 0) {
        throw InputError("weak reduction disks must miss the knot");
      }
      if (d.knot_intersections < 0 || d.boundary_intersections_with_partner < 0) {
        throw InputError("disk witness counts must be non-negative");
      }
    }
  }
  for (const auto& dv : w.delta_v) {
    if (dv.side != Side::V) throw InputError("delta_V disk recorded on the wrong side");
    if (dv.boundary_intersections_with_partner != 0) {
      throw InputError("weak reduction disks must have disjoint boundaries");
    }
  }
  for (const auto& dw : w.delta_w) {
    if (dw.side != Side::W) throw InputError("delta_W disk recorded on the wrong side");
    if (dw.boundary_intersections_with_partner != 0) {
      throw InputError("weak reduction disks must have disjoint boundaries");
    }
  }
}

std::string to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::SolidTorus: return "SolidTorus";
    case ComponentKind::ProductT2xI: return "ProductT2xI";
    case ComponentKind::CompressionBodyC3: return "CompressionBodyC3";
    case ComponentKind::HandlebodyGenusG: return "HandlebodyGenusG";
  }
  return "?";
}

void validate_component(const ComponentSplitting& c) {
  if (c.plus_genus < 0) throw InputError("component plus genus must be non-negative");
  switch (c.kind) {
    case ComponentKind::SolidTorus:
      if (c.plus_genus != 1) throw InputError("a solid torus splitting has plus genus 1");
      break;
    case ComponentKind::ProductT2xI:
      if (c.plus_genus != 2) throw InputError("a T2xI splitting has plus genus 2");
      if (c.minus_boundaries.size() != 2 || c.minus_boundaries[0].genus != 1 ||
          c.minus_boundaries[1].genus != 1) {
        throw InputError("a T2xI component has two torus boundaries");
      }
      break;
    case ComponentKind::CompressionBodyC3:
      if (c.minus_boundaries.empty() || c.minus_boundaries.size() > 2) {
        throw InputError("a compression-body component has one or two negative boundaries");
      }
      if (c.minus_boundaries.size() == 2 && c.minus_boundaries[0].genus != 1) {
        throw InputError("the census compression body has boundaries [torus, genus-g surface]");
      }
      break;
    case ComponentKind::HandlebodyGenusG:
      break;  // no constraint: closed amalgams and the trivial product splitting
  }
  if (c.carries_knot && !c.knot_annulus) {
    throw InputError("a knot-carrying component needs its annulus certificate");
  }
  if (c.carries_knot && !c.slope) {
    throw InputError("a knot-carrying component records the slope");
  }
  int knot_labels = 0;
  for (const auto& b : c.minus_boundaries) knot_labels += b.carries_knot ? 1 : 0;
  if (knot_labels > 1) throw InputError("at most one boundary carries the knot copy");
}

void validate_generalized(const GeneralizedSplitting& gs) {
  if (gs.components.empty()) throw InputError("generalized splitting has no components");
  std::map<std::string, const ComponentSplitting*> by_id;
  for (const auto& c : gs.components) {
    validate_component(c);
    if (!by_id.emplace(c.id, &c).second) throw InputError("duplicate component id " + c.id);
  }
  std::set<std::pair<std::string, std::string>> used;
  for (const auto& g : gs.gluings) {
    auto a = by_id.find(g.component_a);
    auto b = by_id.find(g.component_b);
    if (a == by_id.end() || b == by_id.end()) {
      throw GluingError("gluing " + g.id + " names a missing component");
    }
    auto find_label = [](const ComponentSplitting& c, const std::string& label) {
      for (const auto& bl : c.minus_boundaries) {
        if (bl.id == label) return &bl;
      }
      return static_cast<const BoundaryLabel*>(nullptr);
    };
    const BoundaryLabel* la = find_label(*a->second, g.label_a);
    const BoundaryLabel* lb = find_label(*b->second, g.label_b);
    if (!la || !lb) throw GluingError("gluing " + g.id + " names a missing boundary label");
    if (la->genus != lb->genus) {
      throw GluingError("gluing " + g.id + " joins boundaries of different genus");
    }
    if (g.knot_gluing && (!la->carries_knot || !lb->carries_knot)) {
      throw GluingError("knot gluing " + g.id + " must join knot copies");
    }
    if (!used.emplace(g.component_a, g.label_a).second ||
        !used.emplace(g.component_b, g.label_b).second) {
      throw GluingError("boundary label glued more than once");
    }
  }
  for (const auto& c : gs.components) {
    for (const auto& bl : c.minus_boundaries) {
      if (!used.count({c.id, bl.id})) {
        throw GluingError("boundary " + c.id + ":" + bl.id + " is exposed; closed manifolds "
                          "glue every boundary");
      }
    }
  }
  // connectivity of the gluing graph
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < gs.components.size(); ++i) index[gs.components[i].id] = i;
  std::vector<size_t> parent(gs.components.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& g : gs.gluings) parent[find(index[g.component_a])] = find(index[g.component_b]);
  for (size_t i = 1; i < parent.size(); ++i) {
    if (find(i) != find(size_t{0})) throw GluingError("gluing graph is not connected");
  }
}

}  // namespace ksplit
