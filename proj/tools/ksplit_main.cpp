// ksplit: slopes, stabilizations, and splittings of knots in surfaces.
//
// JSON in, JSON out, OBJ side files for meshes. Exit codes: 0 success,
// 1 input error, 2 numerical/engine error, 3 slope mismatch.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ksplit/calculus.hpp"
#include "ksplit/errors.hpp"
#include "ksplit/json_io.hpp"
#include "ksplit/linking.hpp"
#include "ksplit/slope.hpp"

namespace {

using namespace ksplit;

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InputError("parse failure in " + path + ": " + e.what());
  }
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

void emit(const Json& j, const std::string& out_path) {
  std::string text = dump_json(j);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text(out_path, text);
  }
}

TubeSurface build_surface(const std::string& surface_path) {
  SurfaceSpec spec = surface_spec_from_json(read_json_file(surface_path));
  return make_tube_surface(spec.graph, spec.radius, spec.n_circ, spec.n_long_per_unit);
}

int run_selftest(std::uint64_t seed);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knots in Heegaard surfaces: slopes, stabilizations, splittings"};
  app.require_subcommand(1);

  std::vector<std::string> inputs;
  std::string surface_path, out_path;
  double epsilon = 0.0;
  int twists = 1;
  int target_slope = 0;
  int extra_stabs = 0;
  std::uint64_t seed = 0;
  bool symbolic = false;

  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    if (needs_input) cmd->add_option("--input", inputs, "input JSON file(s)")->required();
    cmd->add_option("--out", out_path, "output file (stdout when omitted)");
    cmd->add_option("--seed", seed, "seed for all randomized choices");
  };

  auto* slope_cmd = app.add_subcommand("slope", "surface slope of a chart curve");
  add_common(slope_cmd, true);
  slope_cmd->add_option("--surface", surface_path, "surface JSON")->required();
  slope_cmd->add_option("--epsilon", epsilon, "pushoff width (default 0.1 x tube radius)");

  auto* genus_cmd = app.add_subcommand("genus", "genus and Euler characteristic of a surface");
  add_common(genus_cmd, false);
  genus_cmd->add_option("--surface", surface_path, "surface JSON")->required();

  auto* twist_cmd = app.add_subcommand("twist", "Dehn twist a splitting record");
  add_common(twist_cmd, true);
  twist_cmd->add_option("--k", twists, "twist count (slope moves by k)");

  auto* stab_cmd = app.add_subcommand("stabilize", "K-stabilize a splitting record");
  add_common(stab_cmd, true);

  auto* sum_cmd = app.add_subcommand("connect-sum", "connected sum of two records");
  add_common(sum_cmd, true);

  auto* realize_cmd = app.add_subcommand("realize-slope", "embed a knot with a target slope");
  add_common(realize_cmd, true);
  realize_cmd->add_option("--target-slope", target_slope, "surface slope to realize")->required();
  realize_cmd->add_option("--epsilon", epsilon, "pushoff width for verification");
  realize_cmd->add_flag("--symbolic", symbolic, "skip the geometric construction");

  auto* decomp_cmd = app.add_subcommand("decompose", "collar / product / complement splittings");
  add_common(decomp_cmd, true);

  auto* common_cmd = app.add_subcommand("common-stab", "common K-stabilization of two records");
  add_common(common_cmd, true);
  common_cmd->add_option("--extra-stabs", extra_stabs, "extra leveling stabilizations");

  auto* export_cmd = app.add_subcommand("export-obj", "triangulate a surface spec to OBJ");
  add_common(export_cmd, false);
  export_cmd->add_option("--surface", surface_path, "surface JSON")->required();

  auto* selftest_cmd = app.add_subcommand("selftest", "run the invariant suite");
  selftest_cmd->add_option("--seed", seed, "seed for all randomized choices");

  CLI11_PARSE(app, argc, argv);

  try {
    if (slope_cmd->parsed()) {
      TubeSurface surface = build_surface(surface_path);
      ChartCurveSpec spec = chart_curve_from_json(read_json_file(inputs.at(0)));
      CurveOnSurface curve = curve_on_tube(surface, spec.chart, spec.coords);
      double eps = epsilon > 0 ? epsilon : 0.1 * surface.charts.at(spec.chart).radius;
      SlopeResult result = surface_slope(surface, curve, eps, seed);
      emit(to_json(result), out_path);
    } else if (genus_cmd->parsed()) {
      TubeSurface surface = build_surface(surface_path);
      MeshReport report = validate_surface_mesh(surface.mesh);
      Json j;
      j["genus"] = report.genus;
      j["euler"] = report.euler;
      emit(j, out_path);
    } else if (twist_cmd->parsed()) {
      KSplittingRecord r = record_from_json(read_json_file(inputs.at(0)));
      emit(to_json(dehn_twist(r, twists, seed)), out_path);
    } else if (stab_cmd->parsed()) {
      KSplittingRecord r = record_from_json(read_json_file(inputs.at(0)));
      emit(to_json(k_stabilize(r, seed)), out_path);
    } else if (sum_cmd->parsed()) {
      if (inputs.size() != 2) throw InputError("connect-sum needs --input twice");
      KSplittingRecord a = record_from_json(read_json_file(inputs[0]));
      KSplittingRecord b = record_from_json(read_json_file(inputs[1]));
      emit(to_json(connect_sum(a, b)), out_path);
    } else if (realize_cmd->parsed()) {
      KnotInfo knot = knot_from_json(read_json_file(inputs.at(0)));
      RealizeOptions options;
      options.geometric = !symbolic && (knot.name == "unknot" || knot.name == "figure8");
      options.seed = seed;
      options.epsilon = epsilon;
      RealizeResult result = realize_slope(knot, target_slope, options);
      Json j;
      j["record"] = to_json(result.record);
      j["twist_count"] = result.twist_count;
      emit(j, out_path);
      if (result.record.geometric_ref && !out_path.empty()) {
        write_text(out_path + ".obj", to_obj(result.record.geometric_ref->surface.mesh));
      }
    } else if (decomp_cmd->parsed()) {
      KSplittingRecord r = record_from_json(read_json_file(inputs.at(0)));
      ThreeSplitting three = decompose_three(r);
      emit(to_json(three.splitting), out_path);
    } else if (common_cmd->parsed()) {
      if (inputs.size() != 2) throw InputError("common-stab needs --input twice");
      KSplittingRecord a = record_from_json(read_json_file(inputs[0]));
      KSplittingRecord b = record_from_json(read_json_file(inputs[1]));
      CommonStabilization result = common_stabilization(a, b, extra_stabs);
      if (!(replay_trace(a, result.trace_a) == result.record) ||
          !(replay_trace(b, result.trace_b) == result.record)) {
        throw ProtocolError("trace replay does not reproduce the common record");
      }
      Json j;
      j["record"] = to_json(result.record);
      j["trace_a"] = to_json(result.trace_a);
      j["trace_b"] = to_json(result.trace_b);
      emit(j, out_path);
    } else if (export_cmd->parsed()) {
      TubeSurface surface = build_surface(surface_path);
      if (out_path.empty()) {
        std::cout << to_obj(surface.mesh);
      } else {
        write_text(out_path, to_obj(surface.mesh));
      }
    } else if (selftest_cmd->parsed()) {
      return run_selftest(seed);
    }
  } catch (const SlopeMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const PrecisionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const EngineMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

namespace {

int run_selftest(std::uint64_t seed) {
  struct Property {
    const char* name;
    std::function<void()> run;
  };

  auto unknot_surface = [] {
    SpatialGraph g;
    g.circles.push_back(make_circle_curve(2.0, 64));
    return make_tube_surface(g, 0.5);
  };
  auto pq_curve = [](const TubeSurface& surf, int p, int q) {
    std::vector<std::pair<double, double>> coords;
    int n = 60 * (std::abs(p) + std::abs(q));
    for (int k = 0; k <= n; ++k) {
      double t = static_cast<double>(k) / n;
      coords.emplace_back(p * t, 0.37 + 2.0 * M_PI * q * t);
    }
    return curve_on_tube(surf, 0, coords);
  };
  auto expect = [](bool ok, const std::string& detail) {
    if (!ok) throw Error("check failed: " + detail);
  };

  std::vector<Property> properties;

  properties.push_back({"linking-engine-agreement-and-symmetry", [&] {
    Rng rng(seed + 1);
    int tested = 0;
    for (std::uint64_t i = 0; tested < 25 && i < 300; ++i) {
      PolyCurve3 c1, c2;
      c1.closed = c2.closed = true;
      double shift = rng.uniform(-0.8, 0.8);
      for (int k = 0; k < 36; ++k) {
        double t = 2.0 * M_PI * k / 36;
        c1.vertices.push_back({std::cos(t) + 0.3 * std::cos(2 * t), std::sin(t), 0.3 * std::sin(2 * t)});
        c2.vertices.push_back({0.4 + std::cos(t), 0.2 + std::sin(t) * 0.8, shift + 0.4 * std::sin(t)});
      }
      if (curve_curve_distance(c1, c2) < 0.05) continue;
      ++tested;
      int a = linking_number_crossings(c1, c2, std::nullopt, seed + i);
      int b = linking_number_gauss(c1, c2);
      expect(a == b, "engines disagree");
      expect(linking_number_gauss(c2, c1) == b, "gauss asymmetric");
      expect(linking_number_crossings(c2, c1, std::nullopt, seed + i) == a, "crossings asymmetric");
    }
    expect(tested >= 10, "too few disjoint samples");
  }});

  properties.push_back({"linking-subdivision-invariance", [&] {
    auto surf = unknot_surface();
    auto tk = pq_curve(surf, 2, 3);
    auto pair = surface_pushoffs(surf, tk, 0.05);
    int base = linking_number_checked(pair.alpha1.points, pair.alpha2.points, seed);
    expect(linking_number_checked(subdivide_midpoints(pair.alpha1.points), pair.alpha2.points,
                                  seed) == base,
           "subdivision changed lk");
  }});

  properties.push_back({"torus-slope-pq", [&] {
    auto surf = unknot_surface();
    for (auto [p, q] : {std::pair{1, 0}, {1, 1}, {2, 3}}) {
      expect(surface_slope(surf, pq_curve(surf, p, q), 0.05, seed).m == p * q, "slope != pq");
    }
  }});

  properties.push_back({"pushoff-linking-identity", [&] {
    auto surf = unknot_surface();
    auto result = surface_slope(surf, pq_curve(surf, 2, 3), 0.05, seed);
    expect(result.lk_pushoffs == result.lk_knot_pushoff, "identity failed");
  }});

  properties.push_back({"epsilon-stability", [&] {
    auto surf = unknot_surface();
    auto tk = pq_curve(surf, 2, 3);
    expect(surface_slope(surf, tk, 0.05, seed).m == surface_slope(surf, tk, 0.025, seed).m,
           "slope unstable in epsilon");
  }});

  properties.push_back({"separating-belt-slope-zero", [&] {
    auto g = make_dumbbell_graph(1.0, 2.0, 48);
    auto surf = make_tube_surface(g, 0.12);
    auto belt = make_meridian_curve(surf, 2, 0.5);
    expect(is_separating(surf, belt), "belt should separate");
    expect(surface_slope(surf, belt, 0.03, seed).m == 0, "separating slope nonzero");
  }});

  properties.push_back({"twist-action-unit-step", [&] {
    auto surf = unknot_surface();
    auto base = make_longitude_curve(surf, 0, 0);
    int m0 = surface_slope(surf, base, 0.05, seed).m;
    for (int k : {-2, 1, 3}) {
      auto tw = dehn_twist_curve(surf, base, k);
      expect(surface_slope(surf, tw, 0.05, seed).m == m0 + k, "twist step != k");
    }
  }});

  properties.push_back({"stabilization-chi-ledger", [&] {
    auto surf = unknot_surface();
    auto knot = make_longitude_curve(surf, 0, 0);
    Rng rng(seed + 5);
    auto site = find_stabilization_site(surf, knot.points, 0.2, rng);
    auto stabbed = k_stabilize_geometric(surf, knot.points, 0.2, site);
    expect(euler_characteristic(stabbed.mesh) == euler_characteristic(surf.mesh) - 2,
           "chi did not drop by 2");
    expect(genus(stabbed.mesh) == 2, "genus did not rise by 1");
  }});

  properties.push_back({"mesh-validity-of-fixtures", [&] {
    auto g = make_unknot_with_tunnel(2.0, 64);
    auto surf = make_tube_surface(g, 0.3);
    auto report = validate_surface_mesh(surf.mesh);
    expect(report.genus == 2, "tunnel surface genus != 2");
  }});

  properties.push_back({"weak-reduction-census", [&] {
    for (int g : {0, 1, 2}) {
      KSplittingRecord r;
      r.genus = g;
      r.slope = 4;
      auto [tilde, d1] = peel_collar(r);
      auto [hat, d2] = second_stabilize(tilde, d1);
      (void)d2;
      auto gs = weak_reduce(hat, pipeline_witness());
      expect(gs.components.size() == 4, "census size");
      expect(gs.components[2].plus_genus == g + 1, "C3 genus");
      expect(gs.components[0].carries_knot && gs.components[1].carries_knot, "knot flags");
    }
  }});

  properties.push_back({"round-trip-identity-all-orders", [&] {
    Rng rng(seed + 7);
    std::vector<std::string> order{"knot_torus", "plain_torus", "surface"};
    std::sort(order.begin(), order.end());
    for (int i = 0; i < 20; ++i) {
      KSplittingRecord r;
      r.genus = rng.uniform_int(0, 4);
      r.slope = rng.uniform_int(-6, 6);
      auto [tilde, d1] = peel_collar(r);
      auto [hat, d2] = second_stabilize(tilde, d1);
      (void)d2;
      auto gs = weak_reduce(hat, pipeline_witness());
      auto perm = order;
      do {
        expect(amalgamate_all(gs, perm) == hat, "round trip broke");
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }});

  properties.push_back({"common-stabilization-replay", [&] {
    Rng rng(seed + 9);
    for (int i = 0; i < 20; ++i) {
      KSplittingRecord a, b;
      a.slope = b.slope = rng.uniform_int(-5, 5);
      a.genus = rng.uniform_int(0, 4);
      b.genus = rng.uniform_int(0, 4);
      auto out = common_stabilization(a, b, 0);
      expect(out.record.genus == std::max(a.genus, b.genus) + 2, "common genus");
      expect(replay_trace(a, out.trace_a) == out.record, "trace A replay");
      expect(replay_trace(b, out.trace_b) == out.record, "trace B replay");
    }
    bool threw = false;
    KSplittingRecord a, b;
    a.slope = 6;
    b.slope = 7;
    try {
      common_stabilization(a, b, 0);
    } catch (const SlopeMismatchError&) {
      threw = true;
    }
    expect(threw, "slope mismatch accepted");
  }});

  properties.push_back({"slope-invariance-under-pipeline-moves", [&] {
    KSplittingRecord r;
    r.genus = 1;
    r.slope = 6;
    auto s1 = k_stabilize(r);
    auto [s2, d1] = peel_collar(s1);
    auto [s3, d2] = second_stabilize(s2, d1);
    (void)d2;
    expect(s1.slope == 6 && s2.slope == 6 && s3.slope == 6, "slope drifted");
  }});

  int failures = 0;
  for (const auto& p : properties) {
    try {
      p.run();
      std::cout << "PASS " << p.name << "\n";
    } catch (const std::exception& e) {
      std::cout << "FAIL " << p.name << ": " << e.what() << "\n";
      ++failures;
    }
  }
  std::cout << (failures == 0 ? "all properties passed" : "some properties FAILED") << " ("
            << properties.size() - failures << "/" << properties.size() << ")\n";
  return failures == 0 ? 0 : 2;
}

}  // namespace
