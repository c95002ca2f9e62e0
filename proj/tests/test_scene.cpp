#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "catseye/scene.hpp"

using namespace catseye;

TEST_CASE("design envelope scene") {
  const SceneConfig s = design_envelope_scene();
  CHECK(s.lens_diameter == 50.0);  // lens radius 25 mm
  REQUIRE(s.source_offsets.size() == 1);
  CHECK(s.source_offsets[0].y() == 35.0);
  CHECK(s.working_distances == std::vector<double>{300.0, 500.0});

  const std::vector<double> grid = theta_grid(s.theta_range);
  REQUIRE_FALSE(grid.empty());
  CHECK(grid.front() == -20.0);
  CHECK(grid.back() == 20.0);
  bool has_zero = false;
  for (double t : grid) {
    has_zero = has_zero || t == 0.0;
    bool has_mirror = false;
    for (double u : grid) has_mirror = has_mirror || u == -t;
    CHECK(has_mirror);
  }
  CHECK(has_zero);
}

TEST_CASE("experiment scene: four opposed sources, 30 mm lens") {
  const SceneConfig s = experiment_scene();
  CHECK(s.lens_diameter == 30.0);
  REQUIRE(s.source_offsets.size() == 4);
  for (const Vec3& o : s.source_offsets) {
    CHECK(o.head<2>().norm() == doctest::Approx(22.0).epsilon(1e-12));
    bool opposed = false;
    for (const Vec3& p : s.source_offsets)
      opposed = opposed || (o + p).norm() < 1e-12;
    CHECK(opposed);
  }
  CHECK(s.working_distances == std::vector<double>{300.0, 500.0});

  // Both pixel-footprint readings are kept; the computed one (1920 px over
  // a 71.2 deg field at 300 mm) is what metadata reports.
  CHECK(s.pixel_footprint_quoted_mm == 0.4);
  CHECK(s.pixel_footprint_computed_mm == doctest::Approx(0.2237).epsilon(1e-3));
  CHECK(s.fingerprint().find("px_footprint=") != std::string::npos);
}

TEST_CASE("observation angle") {
  CHECK(observation_angle(22.0, 300.0) == doctest::Approx(4.194).epsilon(1e-3));
  CHECK(std::abs(observation_angle(22.0, 300.0) - 4.19) < 0.01);
  CHECK(observation_angle(22.0, 500.0) == doctest::Approx(2.519).epsilon(1e-3));
  CHECK(observation_angle(35.0, 500.0) == doctest::Approx(4.004).epsilon(1e-3));
  CHECK(observation_angle(0.0, 450.0) == 0.0);

  double prev = observation_angle(22.0, 250.0);
  for (double dist = 300.0; dist <= 600.0; dist += 50.0) {
    const double cur = observation_angle(22.0, dist);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("emit: deterministic, aimed at the aperture disc") {
  const SceneConfig scene = design_envelope_scene();
  MarkerPose pose;
  pose.centre = Vec3(0.0, 0.0, 300.0);
  pose.rotation_angle_deg = 7.0;
  const double aperture = 1.0;

  const auto a = emit_bundle(scene, pose, 0, 256, 42, aperture);
  const auto b = emit_bundle(scene, pose, 0, 256, 42, aperture);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].origin == b[i].origin);
    CHECK(a[i].direction == b[i].direction);
  }

  // Different seed changes the bundle.
  const auto c = emit_bundle(scene, pose, 0, 256, 43, aperture);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    differs = differs || a[i].direction != c[i].direction;
  CHECK(differs);

  // Every ray crosses the local aperture plane inside the disc.
  for (const Ray& r : a) {
    CHECK(std::abs(r.direction.norm() - 1.0) < 1e-12);
    CHECK(r.weight == 1.0);
    const double t = -r.origin.z() / r.direction.z();
    REQUIRE(t > 0.0);
    const Vec3 p = r.origin + t * r.direction;
    CHECK(p.head<2>().norm() <= aperture / 2.0 + 1e-9);
  }
}

TEST_CASE("emit: mirrored sample pairs at zero rotation") {
  SceneConfig scene = design_envelope_scene();
  scene.source_offsets = {Vec3(0.0, 0.0, 0.0)};  // on-axis source
  MarkerPose pose;
  pose.centre = Vec3(0.0, 0.0, 300.0);
  pose.rotation_angle_deg = 0.0;

  const auto bundle = emit_bundle(scene, pose, 0, 512, 7, 1.0);
  for (std::size_t k = 0; k + 1 < bundle.size(); k += 2) {
    const Ray& even = bundle[k];
    const Ray& odd = bundle[k + 1];
    CHECK(std::abs(even.direction.x() + odd.direction.x()) < 1e-12);
    CHECK(std::abs(even.direction.y() - odd.direction.y()) < 1e-12);
    CHECK(std::abs(even.direction.z() - odd.direction.z()) < 1e-12);
  }
}

TEST_CASE("scene frame round trip") {
  const SceneConfig scene = design_envelope_scene();
  MarkerPose pose;
  pose.centre = Vec3(0.0, 0.0, 431.0);
  pose.rotation_angle_deg = -12.5;
  const auto bundle = emit_bundle(scene, pose, 0, 64, 3, 0.8);
  for (const Ray& local : bundle) {
    const Ray scene_ray = to_scene_frame(local, pose);
    // The scene-frame ray originates at the source.
    CHECK((scene_ray.origin - scene.source_offsets[0]).norm() < 1e-9);
  }
}
