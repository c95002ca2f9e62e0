#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "catseye/metrics.hpp"
#include "catseye/optimizer.hpp"

using namespace catseye;

namespace {

const ExecPolicy kPolicy{4};

SceneConfig quick_scene(std::int64_t rays = 8000, std::uint64_t seed = 1) {
  SceneConfig scene = design_envelope_scene();
  scene.rays_per_point = rays;
  scene.seed = seed;
  scene.theta_range = {-20.0, 20.0, 5.0};
  return scene;
}

}  // namespace

TEST_CASE("step 1: unit size from the pixel footprint") {
  const ApertureSizing a = step1_max_aperture(0.4);
  CHECK(a.a_max == 0.4);
  CHECK(a.R_l == 0.2);
  const ApertureSizing b = step1_max_aperture(1.0);
  CHECK(b.R_l == 0.5);
  // Linear in the footprint.
  const ApertureSizing c = step1_max_aperture(0.8);
  CHECK(c.a_max == 2.0 * a.a_max);
  CHECK(c.R_l == 2.0 * a.R_l);
  CHECK_THROWS_AS(step1_max_aperture(0.0), DesignError);
}

TEST_CASE("step 2: single offset, determinism, interior optimum") {
  const SceneConfig scene = quick_scene();
  const auto single = step2_sweep_distance(DesignFamily::ball_C, 0.5,
                                           kFusedSilicaIndex, {0.15}, scene,
                                           kPolicy);
  REQUIRE(single.size() == 1);
  CHECK(single[0].value == 0.15);
  CHECK(single[0].score > 0.0);

  const auto again = step2_sweep_distance(DesignFamily::ball_C, 0.5,
                                          kFusedSilicaIndex, {0.15}, scene,
                                          kPolicy);
  CHECK(single[0].score == again[0].score);  // bitwise

  const std::vector<double> offsets = {0.0, 0.08, 0.14, 0.16, 0.24};
  const auto sweep = step2_sweep_distance(DesignFamily::biconvex_A, 0.2,
                                          kFusedSilicaIndex, offsets, scene,
                                          kPolicy);
  REQUIRE(sweep.size() == offsets.size());
  std::size_t best = 0;
  for (std::size_t i = 1; i < sweep.size(); ++i)
    if (sweep[i].score > sweep[best].score) best = i;
  CHECK(best != 0);
  CHECK(best != sweep.size() - 1);

  CHECK_THROWS_AS(step2_sweep_distance(DesignFamily::ball_C, 0.5,
                                       kFusedSilicaIndex, {0.4}, scene,
                                       kPolicy),
                  DesignError);  // d would go negative (d_f = 0.295)
  CHECK_THROWS_AS(step2_sweep_distance(DesignFamily::ball_C, 0.5,
                                       kFusedSilicaIndex, {}, scene, kPolicy),
                  DesignError);
}

TEST_CASE("step 4: aperture trade-off") {
  OptimizationSpec spec;
  spec.family = DesignFamily::biconvex_A;
  spec.pixel_footprint_mm = 0.4;
  spec.scene = quick_scene(20000);
  const UnitDesign base = make_candidate(spec, 0.14, 1.0);

  // At the widest entrance angle the larger aperture wins.
  SceneConfig edge = spec.scene;
  edge.theta_range = {20.0, 20.0, 1.0};
  UnitDesign small = base;
  small.a = 0.5 * base.a;
  const FractionEstimate big_edge =
      return_fraction(base, edge, 20.0, 300.0, TraceMode::sequential, kPolicy);
  const FractionEstimate small_edge =
      return_fraction(small, edge, 20.0, 300.0, TraceMode::sequential, kPolicy);
  const double sigma_e = std::sqrt(big_edge.stderr_ * big_edge.stderr_ +
                                   small_edge.stderr_ * small_edge.stderr_);
  CHECK(big_edge.fraction - small_edge.fraction > -3.0 * sigma_e);

  // Smaller apertures trim the spherical-aberration tail: the retro cone
  // tightens even though wide-angle collection suffers.
  const DivergenceHistogram big_cone = divergence_histogram(base, 50000, 2,
                                                            kPolicy);
  const DivergenceHistogram small_cone = divergence_histogram(small, 50000, 2,
                                                              kPolicy);
  CHECK(small_cone.cone_angle_q80 < big_cone.cone_angle_q80);

  // Fraction 1.0 reproduces the unmodified design score bitwise.
  const auto rows = step4_sweep_aperture(base, {1.0, 0.5}, spec.scene, kPolicy);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].score ==
        multi_distance_score(base, spec.scene, TraceMode::sequential, kPolicy));
  CHECK_THROWS_AS(step4_sweep_aperture(base, {1.5}, spec.scene, kPolicy),
                  DesignError);
}

TEST_CASE("candidates satisfy the retro condition by construction") {
  OptimizationSpec spec;
  spec.family = DesignFamily::ball_C;
  spec.pixel_footprint_mm = 1.0;
  spec.scene = quick_scene();
  for (double off : {0.05, 0.15, 0.25}) {
    for (double frac : {0.5, 1.0}) {
      const UnitDesign u = make_candidate(spec, off, frac);
      CHECK(u.R_m == retro_mirror_radius(u.family, u.R_l, u.n, u.d));
      CHECK(u.a == frac * 1.0);
    }
  }
  CHECK_THROWS_AS(make_candidate(spec, 0.5, 1.0), DesignError);  // d < 0
}

TEST_CASE("optimize: recovers the caption gap for ball lenses") {
  OptimizationSpec spec;
  spec.family = DesignFamily::ball_C;
  spec.pixel_footprint_mm = 1.0;  // R_l = 0.5
  spec.d_offsets = {0.05, 0.10, 0.15, 0.20, 0.25};
  spec.aperture_fractions = {1.0};
  spec.scene = quick_scene(12000, 3);
  spec.rays_per_cell = 12000;
  spec.seed = 3;

  const OptimizationReport report = optimize(spec, kPolicy);
  REQUIRE(report.grid.size() == 5);
  // Best offset within one grid step of 0.15.
  double best_offset = 0.0;
  for (const GridCell& cell : report.grid)
    if (cell.valid && cell.score == report.best_score) best_offset = cell.d_offset;
  CHECK(std::abs(best_offset - 0.15) <= 0.05 + 1e-12);
  CHECK(report.best_score > 0.0);
  for (const GridCell& cell : report.grid) CHECK(report.best_score >= cell.score);
  CHECK_FALSE(report.spec_fingerprint.empty());
  CHECK(report.seed == 3);
}

TEST_CASE("optimize: single cell echoes the candidate") {
  OptimizationSpec spec;
  spec.family = DesignFamily::ball_C;
  spec.pixel_footprint_mm = 1.0;
  spec.d_offsets = {0.15};
  spec.aperture_fractions = {1.0};
  spec.scene = quick_scene(4000, 5);
  spec.rays_per_cell = 4000;
  spec.seed = 5;
  const OptimizationReport report = optimize(spec, kPolicy);
  REQUIRE(report.grid.size() == 1);
  CHECK(report.best.d == report.grid[0].design.d);
  CHECK(report.best_score == report.grid[0].score);

  spec.d_offsets.clear();
  CHECK_THROWS_AS(optimize(spec, kPolicy), DesignError);
}

TEST_CASE("argmax: scale invariance and manufacturability ties") {
  std::vector<GridCell> grid(3);
  grid[0].score = 0.2;
  grid[0].design.a = 0.4;
  grid[0].d_offset = 0.1;
  grid[1].score = 0.5;
  grid[1].design.a = 0.4;
  grid[1].d_offset = 0.2;
  grid[2].score = 0.3;
  grid[2].design.a = 0.2;
  grid[2].d_offset = 0.0;
  CHECK(argmax_cell(grid) == 1);
  for (GridCell& cell : grid) cell.score *= 7.5;
  CHECK(argmax_cell(grid) == 1);

  // Equal scores: larger aperture wins, then smaller |offset|.
  grid[0].score = grid[1].score = grid[2].score = 1.0;
  CHECK(argmax_cell(grid) == 0);  // a=0.4, |off|=0.1 beats a=0.4, |off|=0.2
  grid[2].design.a = 0.6;
  CHECK(argmax_cell(grid) == 2);

  grid[0].valid = grid[1].valid = grid[2].valid = false;
  CHECK_THROWS_AS(argmax_cell(grid), DesignError);
}
