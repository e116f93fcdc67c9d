#include <algorithm>

#include "doctest.h"
#include "ksplit/calculus.hpp"
#include "ksplit/mesh.hpp"
#include "ksplit/errors.hpp"

using namespace ksplit;

namespace {

KSplittingRecord rec(int genus, int slope, const std::string& knot = "K",
                     bool separating = false) {
  KSplittingRecord r;
  r.genus = genus;
  r.slope = slope;
  r.knot.name = knot;
  r.separating = separating;
  return r;
}

}  // namespace

TEST_CASE("k_stabilize raises genus and keeps slope") {
  auto r = rec(1, 6);
  auto s = k_stabilize(r);
  CHECK(s.genus == 2);
  CHECK(s.slope == 6);
  auto sphere = rec(0, 0, "unknot", true);
  auto s2 = k_stabilize(sphere);
  CHECK(s2.genus == 1);
  CHECK(s2.slope == 0);
  // g applications add g
  auto cur = r;
  for (int i = 0; i < 5; ++i) cur = k_stabilize(cur);
  CHECK(cur.genus == 6);
  CHECK(cur.slope == 6);
}

TEST_CASE("is_k_stabilized follows the disk criterion") {
  auto r = rec(2, 0);
  DiskWitness v{Side::V, 0, 1, false};
  DiskWitness w{Side::W, 3, 1, false};
  CHECK(is_k_stabilized(r, v, w));
  DiskWitness v_bad{Side::V, 1, 1, false};
  CHECK_FALSE(is_k_stabilized(r, v_bad, w));
  DiskWitness v_two{Side::V, 0, 2, false};
  CHECK_FALSE(is_k_stabilized(r, v_two, w));
  CHECK_THROWS_AS(is_k_stabilized(r, v, v), InputError);
}

TEST_CASE("dehn_twist moves slope by k") {
  auto r = rec(2, 4);
  CHECK(dehn_twist(r, 0).slope == 4);
  CHECK(dehn_twist(r, 1).slope == 5);
  CHECK(dehn_twist(r, -7).slope == -3);
  CHECK(dehn_twist(r, 3).genus == 2);
}

TEST_CASE("connect_sum adds genus and slope") {
  auto a = rec(2, -3);
  auto b = rec(1, 7, "unknot");
  auto s = connect_sum(a, b);
  CHECK(s.genus == 3);
  CHECK(s.slope == 4);
  CHECK(s.knot.name == "K");

  auto t = connect_sum(rec(1, 2, "unknot"), rec(2, 3, "J"));
  CHECK(t.knot.name == "J");

  KSplittingRecord other = rec(1, 0);
  other.manifold.name = "L(2,1)";
  CHECK_THROWS_AS(connect_sum(other, b), InputError);
}

TEST_CASE("realize_slope symbolic bookkeeping") {
  KnotInfo fig8{"figure8", 1};
  auto out = realize_slope(fig8, 0);
  CHECK(out.record.genus == 2);
  CHECK(out.record.slope == 0);

  KnotInfo unknown{"mystery", std::nullopt};
  CHECK_THROWS_AS(realize_slope(unknown, 1), InputError);

  KnotInfo unknot{"unknot", 0};
  auto r4 = realize_slope(unknot, 4);
  CHECK(r4.record.genus == 1);
  CHECK(r4.record.slope == 4);
  CHECK(r4.twist_count == 4);
}

TEST_CASE("realize_slope builds verified geometry for the bundled knots") {
  RealizeOptions options;
  options.geometric = true;
  for (auto [name, t, m] : {std::tuple{"unknot", 0, -2}, {"figure8", 1, 3}, {"trefoil", 1, 7}}) {
    KnotInfo knot{name, t};
    auto out = realize_slope(knot, m, options);
    CAPTURE(name);
    CHECK(out.record.genus == t + 1);
    CHECK(out.record.slope == m);
    REQUIRE(out.record.geometric_ref != nullptr);
    CHECK(genus(out.record.geometric_ref->surface.mesh) == t + 1);
  }
  KnotInfo wrong{"trefoil", 2};
  CHECK_THROWS_AS(realize_slope(wrong, 0, options), InputError);
}

TEST_CASE("peel_collar and second_stabilize bookkeeping") {
  auto r = rec(1, 6);
  auto [tilde, d1] = peel_collar(r);
  CHECK(tilde.genus == 2);
  CHECK(tilde.slope == 6);
  CHECK(d1.side == Side::V);
  CHECK(d1.knot_intersections == 0);
  CHECK(d1.separating);

  auto [hat, d2] = second_stabilize(tilde, d1);
  CHECK(hat.genus == 3);
  CHECK(hat.slope == 6);
  CHECK(hat.weakly_reducible);
  CHECK(d2.side == Side::W);

  CHECK_THROWS_AS(second_stabilize(r, d1), ProtocolError);

  // genus-0 record runs uniformly
  auto [t0, w0] = peel_collar(rec(0, 0, "unknot"));
  CHECK(t0.genus == 1);
  (void)w0;

  // slope preserved on random records
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    auto rr = rec(rng.uniform_int(0, 6), rng.uniform_int(-9, 9));
    auto [pt, pw] = peel_collar(rr);
    CHECK(pt.slope == rr.slope);
    (void)pw;
  }
}

TEST_CASE("weak_reduce emits the four-component census") {
  for (int g : {0, 1, 2, 3}) {
    auto r = rec(g, 6);
    auto [tilde, d1] = peel_collar(r);
    auto [hat, d2] = second_stabilize(tilde, d1);
    (void)d2;
    auto gs = weak_reduce(hat, pipeline_witness());
    REQUIRE(gs.components.size() == 4);
    CHECK(gs.components[0].kind == ComponentKind::SolidTorus);
    CHECK(gs.components[1].kind == ComponentKind::ProductT2xI);
    CHECK(gs.components[2].kind == ComponentKind::CompressionBodyC3);
    CHECK(gs.components[3].kind == ComponentKind::HandlebodyGenusG);
    CHECK(gs.components[0].plus_genus == 1);
    CHECK(gs.components[1].plus_genus == 2);
    CHECK(gs.components[2].plus_genus == g + 1);
    CHECK(gs.components[3].plus_genus == g);
    CHECK(gs.components[0].carries_knot);
    CHECK(gs.components[1].carries_knot);
    CHECK_FALSE(gs.components[2].carries_knot);
    CHECK_FALSE(gs.components[3].carries_knot);
    CHECK(gs.components[0].slope == 6);
    CHECK(gs.gluings.size() == 3);
    CHECK(gs.gluings[0].knot_gluing);
  }
  // unflagged records are rejected
  CHECK_THROWS_AS(weak_reduce(rec(3, 6), pipeline_witness()), ProtocolError);
}

TEST_CASE("amalgamate_pair genus ledger") {
  auto r = rec(2, 6);
  auto [tilde, d1] = peel_collar(r);
  auto [hat, d2] = second_stabilize(tilde, d1);
  (void)d2;
  auto gs = weak_reduce(hat, pipeline_witness());
  int g = 2;

  auto complement = amalgamate_pair(gs.components[2], gs.components[3], "surface");
  CHECK(complement.plus_genus == g + 1);
  REQUIRE(complement.minus_boundaries.size() == 1);
  CHECK(complement.minus_boundaries[0].genus == 1);

  auto collar_product = amalgamate_pair(gs.components[0], gs.components[1], "knot_torus");
  CHECK(collar_product.plus_genus == 2);
  CHECK(collar_product.carries_knot);
  CHECK(collar_product.slope == 6);

  CHECK_THROWS_AS(amalgamate_pair(gs.components[0], gs.components[2], "plain_torus"),
                  GluingError);
}

TEST_CASE("weak_reduce then amalgamate_all is the identity, in every order") {
  Rng rng(23);
  std::vector<std::string> gluings{"knot_torus", "plain_torus", "surface"};
  std::sort(gluings.begin(), gluings.end());
  for (int i = 0; i < 100; ++i) {
    auto r = rec(rng.uniform_int(0, 5), rng.uniform_int(-10, 10));
    auto [tilde, d1] = peel_collar(r);
    auto [hat, d2] = second_stabilize(tilde, d1);
    (void)d2;
    auto gs = weak_reduce(hat, pipeline_witness());
    std::vector<std::string> order = gluings;
    do {
      auto back = amalgamate_all(gs, order);
      CHECK(back == hat);
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST_CASE("decompose_three shapes") {
  for (int g : {0, 1, 3}) {
    auto r = rec(g, 5);
    auto three = decompose_three(r);
    CHECK(three.collar().kind == ComponentKind::SolidTorus);
    CHECK(three.collar().slope == 5);
    CHECK(three.product().kind == ComponentKind::ProductT2xI);
    CHECK(three.complement().plus_genus == g + 1);
    CHECK_FALSE(three.complement().carries_knot);

    auto back = amalgamate_all(three.splitting);
    CHECK(back.genus == g + 2);
    CHECK(back.slope == 5);
  }
}

TEST_CASE("common_stabilization levels both sides") {
  auto a = rec(1, 6);
  auto b = rec(2, 6);
  auto out = common_stabilization(a, b, 0);
  CHECK(out.record.genus == 4);  // max(1,2) + 2
  CHECK(out.record.slope == 6);

  CHECK(replay_trace(a, out.trace_a) == out.record);
  CHECK(replay_trace(b, out.trace_b) == out.record);

  // symmetric
  auto swapped = common_stabilization(b, a, 0);
  CHECK(swapped.record == out.record);

  // reflexive
  auto same = common_stabilization(a, a, 0);
  CHECK(replay_trace(a, same.trace_a) == same.record);

  // extra stabilizations raise the common genus
  auto extra = common_stabilization(a, b, 3);
  CHECK(extra.record.genus == 7);
}

TEST_CASE("common_stabilization mismatch errors") {
  CHECK_THROWS_AS(common_stabilization(rec(1, 6), rec(2, 7)), SlopeMismatchError);
  CHECK_THROWS_AS(common_stabilization(rec(1, 6), rec(2, 6, "J")), KnotMismatchError);
  KSplittingRecord other = rec(1, 6);
  other.manifold.name = "T3";
  CHECK_THROWS_AS(common_stabilization(rec(1, 6), other), ManifoldMismatchError);
  try {
    common_stabilization(rec(1, 6), rec(2, 7));
    FAIL("expected slope mismatch");
  } catch (const SlopeMismatchError& e) {
    CHECK(e.slope_a == 6);
    CHECK(e.slope_b == 7);
  }
}

TEST_CASE("random equal-slope pairs produce replayable common records") {
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    int slope = rng.uniform_int(-8, 8);
    auto a = rec(rng.uniform_int(0, 5), slope);
    auto b = rec(rng.uniform_int(0, 5), slope);
    int extra = rng.uniform_int(0, 2);
    auto out = common_stabilization(a, b, extra);
    CHECK(out.record.genus == std::max(a.genus, b.genus) + 2 + extra);
    CHECK(replay_trace(a, out.trace_a) == out.record);
    CHECK(replay_trace(b, out.trace_b) == out.record);
  }
}

TEST_CASE("geometric and symbolic records meet in one common stabilization") {
  RealizeOptions options;
  options.geometric = true;
  KnotInfo trefoil{"trefoil", 1};
  auto geometric = realize_slope(trefoil, 6, options).record;  // genus 2, slope verified
  KSplittingRecord symbolic = rec(4, 6, "trefoil");

  auto out = common_stabilization(geometric, symbolic, 0);
  CHECK(out.record.genus == 6);  // max(2, 4) + 2
  CHECK(out.record.slope == 6);
  CHECK(replay_trace(geometric, out.trace_a) == out.record);
  CHECK(replay_trace(symbolic, out.trace_b) == out.record);

  // a geometric record can also be stabilized directly, keeping its geometry
  auto stabbed = k_stabilize(geometric, 3);
  CHECK(stabbed.genus == 3);
  CHECK(stabbed.slope == 6);
  REQUIRE(stabbed.geometric_ref != nullptr);
  CHECK(genus(stabbed.geometric_ref->surface.mesh) == 3);
}

TEST_CASE("record invariants") {
  KSplittingRecord r = rec(1, 3, "K", true);  // separating with nonzero slope in S3
  CHECK_THROWS_AS(validate_record(r), InputError);
  CHECK_NOTHROW(validate_record(rec(1, 0, "K", true)));
}
