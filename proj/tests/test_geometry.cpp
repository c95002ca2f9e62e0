#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "catseye/geometry.hpp"
#include "catseye/rng.hpp"

using namespace catseye;

namespace {

Vec3 random_unit(std::mt19937& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec3 v(normal(gen), normal(gen), normal(gen));
  while (v.norm() < 1e-6) v = Vec3(normal(gen), normal(gen), normal(gen));
  return v.normalized();
}

// Independent transmittance from the Fresnel amplitude coefficients with
// the radiometric (n cos) projection factor.
double transmittance_oracle(double cos_i, double n1, double n2) {
  const double sin2_t = (n1 / n2) * (n1 / n2) * (1.0 - cos_i * cos_i);
  if (sin2_t >= 1.0) return 0.0;
  const double cos_t = std::sqrt(1.0 - sin2_t);
  const double ts = 2.0 * n1 * cos_i / (n1 * cos_i + n2 * cos_t);
  const double tp = 2.0 * n1 * cos_i / (n1 * cos_t + n2 * cos_i);
  const double proj = (n2 * cos_t) / (n1 * cos_i);
  return 0.5 * proj * (ts * ts + tp * tp);
}

}  // namespace

TEST_CASE("intersect: axial ray on plane") {
  Ray ray;
  ray.origin = Vec3(0.0, 0.0, -1.0);
  ray.direction = Vec3(0.0, 0.0, 1.0);
  Surface plane;
  plane.kind = SurfaceKind::planar;
  plane.vertex_z = 0.0;
  plane.aperture_radius = 1.0;
  const Intersection hit = intersect(ray, plane);
  REQUIRE(hit.hit);
  CHECK(hit.point.norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hit.normal.isApprox(Vec3(0.0, 0.0, -1.0), 1e-12));
}

TEST_CASE("intersect: axial ray hits sphere vertex") {
  Ray ray;
  ray.origin = Vec3(0.0, 0.0, -1.0);
  ray.direction = Vec3(0.0, 0.0, 1.0);
  Surface sphere;
  sphere.kind = SurfaceKind::spherical;
  sphere.vertex_z = 0.0;
  sphere.curvature_radius = 0.5;
  sphere.aperture_radius = 0.5;
  const Intersection hit = intersect(ray, sphere);
  REQUIRE(hit.hit);
  CHECK(hit.point.norm() < 1e-12);
  CHECK(hit.normal.dot(ray.direction) < 0.0);
}

TEST_CASE("intersect: aperture clipping") {
  Ray ray;
  ray.origin = Vec3(0.45, 0.0, -1.0);
  ray.direction = Vec3(0.0, 0.0, 1.0);
  Surface sphere;
  sphere.kind = SurfaceKind::spherical;
  sphere.vertex_z = 0.0;
  sphere.curvature_radius = 0.5;
  sphere.aperture_radius = 0.4;
  const Intersection hit = intersect(ray, sphere);
  CHECK_FALSE(hit.hit);
  CHECK(hit.miss_reason == MissReason::outside_aperture);
}

TEST_CASE("intersect: no intersection when sphere is missed") {
  Ray ray;
  ray.origin = Vec3(5.0, 0.0, -1.0);
  ray.direction = Vec3(0.0, 0.0, 1.0);
  Surface sphere;
  sphere.kind = SurfaceKind::spherical;
  sphere.vertex_z = 0.0;
  sphere.curvature_radius = 0.5;
  sphere.aperture_radius = 0.4;
  const Intersection hit = intersect(ray, sphere);
  CHECK_FALSE(hit.hit);
  CHECK(hit.miss_reason == MissReason::no_intersection);
}

TEST_CASE("intersect: hit point lies on surface, normal opposes ray") {
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> uni(-0.3, 0.3);
  Surface sphere;
  sphere.kind = SurfaceKind::spherical;
  sphere.vertex_z = 0.7;
  sphere.curvature_radius = -0.8;
  sphere.aperture_radius = 0.5;
  const Vec3 centre(0.0, 0.0, sphere.vertex_z + sphere.curvature_radius);
  int hits = 0;
  for (int i = 0; i < 500; ++i) {
    Ray ray;
    ray.origin = Vec3(uni(gen), uni(gen), 2.0);
    ray.direction = (Vec3(uni(gen), uni(gen), 0.0) - ray.origin).normalized();
    const Intersection hit = intersect(ray, sphere);
    if (!hit.hit) continue;
    ++hits;
    CHECK(std::abs((hit.point - centre).norm() -
                   std::abs(sphere.curvature_radius)) < 1e-9);
    CHECK(hit.point.head<2>().norm() <= sphere.aperture_radius + 1e-12);
    CHECK(hit.normal.dot(ray.direction) < 0.0);
    CHECK(std::abs(hit.normal.norm() - 1.0) < 1e-12);
  }
  CHECK(hits > 100);
}

TEST_CASE("intersect: translation invariance along the axis") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Surface sphere;
    sphere.kind = SurfaceKind::spherical;
    sphere.vertex_z = uni(gen);
    sphere.curvature_radius = 0.6;
    sphere.aperture_radius = 0.4;
    Ray ray;
    ray.origin = Vec3(0.2 * uni(gen), 0.2 * uni(gen), sphere.vertex_z - 2.0);
    ray.direction = Vec3(0.05 * uni(gen), 0.05 * uni(gen), 1.0).normalized();
    const Intersection base = intersect(ray, sphere);

    const double shift = 3.0 * uni(gen);
    Surface moved = sphere;
    moved.vertex_z += shift;
    Ray moved_ray = ray;
    moved_ray.origin.z() += shift;
    const Intersection shifted = intersect(moved_ray, moved);

    REQUIRE(base.hit == shifted.hit);
    if (base.hit) {
      CHECK((shifted.point - (base.point + Vec3(0, 0, shift))).norm() < 1e-9);
      CHECK((shifted.normal - base.normal).norm() < 1e-12);
    }
  }
}

TEST_CASE("refract: normal incidence passes straight through") {
  const Vec3 dir(0.0, 0.0, 1.0);
  const Vec3 normal(0.0, 0.0, -1.0);
  const Refraction r = refract(dir, normal, 1.0, 1.4585);
  CHECK_FALSE(r.tir);
  CHECK((r.direction - dir).norm() < 1e-12);
}

TEST_CASE("refract: 45 degrees into fused silica") {
  const double inc = deg_to_rad(45.0);
  const Vec3 dir(0.0, std::sin(inc), std::cos(inc));
  const Vec3 normal(0.0, 0.0, -1.0);
  const Refraction r = refract(dir, normal, 1.0, 1.4585);
  REQUIRE_FALSE(r.tir);
  const double out_angle = rad_to_deg(angle_between_rad(r.direction, -normal));
  // asin(sin 45 / 1.4585) = 29.000537 degrees
  CHECK(out_angle == doctest::Approx(29.000537).epsilon(1e-4));
  CHECK(std::abs(out_angle - 29.00) < 0.01);
}

TEST_CASE("refract: total internal reflection past the critical angle") {
  // Critical angle asin(1/1.4585) = 43.2856 degrees.
  const double inc = deg_to_rad(60.0);
  const Vec3 dir(0.0, std::sin(inc), std::cos(inc));
  const Vec3 normal(0.0, 0.0, -1.0);
  const Refraction r = refract(dir, normal, 1.4585, 1.0);
  CHECK(r.tir);
  CHECK((r.direction - reflect(dir, normal)).norm() < 1e-12);

  const double below = deg_to_rad(43.0);
  const Refraction ok = refract(Vec3(0.0, std::sin(below), std::cos(below)),
                                normal, 1.4585, 1.0);
  CHECK_FALSE(ok.tir);
}

TEST_CASE("refract: Snell invariant and unit outputs") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const Vec3 normal = random_unit(gen);
    Vec3 dir = random_unit(gen);
    if (dir.dot(normal) > 0.0) dir = -dir;
    if (std::abs(dir.dot(normal)) < 1e-3) continue;
    const double n1 = 1.0 + uni(gen);
    const double n2 = 1.0 + uni(gen);
    const Refraction r = refract(dir, normal, n1, n2);
    CHECK(std::abs(r.direction.norm() - 1.0) < 1e-12);
    if (r.tir) continue;
    const double sin_i = dir.cross(normal).norm();
    const double sin_t = r.direction.cross(normal).norm();
    CHECK(std::abs(n1 * sin_i - n2 * sin_t) < 1e-12);
    // Transverse component preserved direction-wise.
    const Vec3 ti = (dir - dir.dot(normal) * normal);
    const Vec3 tt = (r.direction - r.direction.dot(normal) * normal);
    if (ti.norm() > 1e-9) CHECK(ti.normalized().dot(tt.normalized()) > 1.0 - 1e-9);
  }
}

TEST_CASE("reflect: trivial cases and involution") {
  CHECK((reflect(Vec3(0, 0, 1), Vec3(0, 0, -1)) - Vec3(0, 0, -1)).norm() <
        1e-12);
  const double s = std::sin(deg_to_rad(45.0));
  const double c = std::cos(deg_to_rad(45.0));
  CHECK((reflect(Vec3(0, s, c), Vec3(0, 0, -1)) - Vec3(0, s, -c)).norm() <
        1e-12);

  std::mt19937 gen(3);
  for (int i = 0; i < 500; ++i) {
    const Vec3 normal = random_unit(gen);
    Vec3 dir = random_unit(gen);
    if (dir.dot(normal) > 0.0) dir = -dir;
    const Vec3 once = reflect(dir, normal);
    CHECK(std::abs(once.norm() - 1.0) < 1e-12);
    CHECK((reflect(once, normal) - dir).norm() < 1e-12);
    // Angle of incidence equals angle of reflection.
    CHECK(std::abs(std::abs(once.dot(normal)) - std::abs(dir.dot(normal))) <
          1e-12);
  }
}

TEST_CASE("fresnel: normal incidence, grazing limit, energy conservation") {
  const double n = 1.4585;
  const double r0 = ((n - 1.0) / (n + 1.0)) * ((n - 1.0) / (n + 1.0));
  CHECK(std::abs(fresnel_unpolarized(1.0, 1.0, n) - r0) < 1e-12);
  CHECK(std::abs(fresnel_unpolarized(1.0, 1.0, n) - 0.03478) < 1e-5);

  CHECK(fresnel_unpolarized(1e-9, 1.0, n) == doctest::Approx(1.0).epsilon(1e-6));

  std::mt19937 gen(17);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double cos_i = 1e-6 + (1.0 - 1e-6) * uni(gen);
    const double n1 = 1.0 + uni(gen);
    const double n2 = 1.0 + uni(gen);
    const double eta = n1 / n2;
    if (eta * eta * (1.0 - cos_i * cos_i) >= 1.0) {
      CHECK(fresnel_unpolarized(cos_i, n1, n2) == 1.0);
      continue;
    }
    const double reflectance = fresnel_unpolarized(cos_i, n1, n2);
    const double transmitted = transmittance_oracle(cos_i, n1, n2);
    CHECK(std::abs(reflectance + transmitted - 1.0) < 1e-12);
    CHECK(reflectance >= 0.0);
    CHECK(reflectance <= 1.0);
  }
}

TEST_CASE("fresnel: monotone in incidence angle for n1 < n2") {
  double prev = fresnel_unpolarized(1.0, 1.0, 1.4585);
  for (int deg = 1; deg <= 89; ++deg) {
    const double r =
        fresnel_unpolarized(std::cos(deg_to_rad(deg)), 1.0, 1.4585);
    CHECK(r >= prev - 1e-15);
    prev = r;
  }
}

TEST_CASE("rotate_about_point: identities and inverse") {
  Ray ray;
  ray.origin = Vec3(1.0, 2.0, 3.0);
  ray.direction = Vec3(0.0, 0.6, 0.8).normalized();
  const Vec3 pivot(0.5, -1.0, 2.0);
  const Vec3 axis = Vec3(0.0, 1.0, 0.0);

  const Ray zero = rotate_about_point(ray, pivot, axis, 0.0);
  CHECK((zero.origin - ray.origin).norm() < 1e-12);
  CHECK((zero.direction - ray.direction).norm() < 1e-12);

  const Ray full = rotate_about_point(ray, pivot, axis, 360.0);
  CHECK((full.origin - ray.origin).norm() < 1e-9);
  CHECK((full.direction - ray.direction).norm() < 1e-9);

  const Ray there = rotate_about_point(ray, pivot, axis, 37.5);
  const Ray back = rotate_about_point(there, pivot, axis, -37.5);
  CHECK((back.origin - ray.origin).norm() < 1e-9);
  CHECK((back.direction - ray.direction).norm() < 1e-9);

  // Rigid: distance to the pivot is preserved.
  CHECK(std::abs((there.origin - pivot).norm() - (ray.origin - pivot).norm()) <
        1e-12);
}

TEST_CASE("counter rng: deterministic, uniform-ish, stream separation") {
  const CounterRng a = CounterRng::keyed(42, 7);
  const CounterRng b = CounterRng::keyed(42, 7);
  const CounterRng c = CounterRng::keyed(42, 8);
  CHECK(a.uniform(123, 0) == b.uniform(123, 0));
  CHECK(a.uniform(123, 0) != c.uniform(123, 0));
  CHECK(a.uniform(123, 0) != a.uniform(124, 0));
  CHECK(a.uniform(123, 0) != a.uniform(123, 1));

  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += a.uniform(i, 0);
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}
