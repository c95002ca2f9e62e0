#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>

// Core vector math and local interface physics for axially symmetric
// optical stacks.
//
// Conventions (used throughout the library):
//   - lengths in millimetres, angles in degrees at API boundaries
//   - the optical axis is +z into the marker; light from the bench
//     arrives travelling towards +z
//   - a spherical surface's curvature_radius is positive when its centre
//     of curvature lies at larger z than the vertex
//   - air has index exactly 1.0

namespace catseye {

using Vec3 = Eigen::Vector3d;

inline constexpr double kAirIndex = 1.0;

// Minimum propagation distance along a ray before a surface hit counts;
// avoids self-intersection after an interaction.
inline constexpr double kMinHitDistance = 1e-9;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Angle between two vectors in radians, accurate near 0 and pi.
inline double angle_between_rad(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

struct Ray {
  Vec3 origin{0.0, 0.0, 0.0};
  Vec3 direction{0.0, 0.0, 1.0};  // unit
  double weight = 1.0;            // radiometric transmittance product, in [0,1]
  double medium_index = kAirIndex;
};

enum class SurfaceKind { spherical, planar };

enum class Interaction { refract, mirror, lambertian, absorb };

// One optical interface on the local axis. n_before/n_after are the media
// on the incoming/outgoing side for the pass this entry describes.
struct Surface {
  SurfaceKind kind = SurfaceKind::planar;
  double vertex_z = 0.0;
  double curvature_radius = 0.0;  // spherical only; signed, see convention above
  double aperture_radius = 1.0;
  double n_before = kAirIndex;
  double n_after = kAirIndex;
  Interaction interaction = Interaction::refract;
  double reflectivity = 1.0;  // mirror/lambertian only
  bool fresnel = false;       // refract only: apply Fresnel transmittance to weight
};

enum class MissReason { none, no_intersection, outside_aperture };

struct Intersection {
  bool hit = false;
  MissReason miss_reason = MissReason::none;
  Vec3 point{0.0, 0.0, 0.0};
  Vec3 normal{0.0, 0.0, -1.0};  // unit, oriented against the incoming ray
  // Distance to the event along the ray; set for hits and for
  // outside-aperture blocks (the surface rim masks the ray there).
  double distance = 0.0;
};

// Ray/surface intersection. Only hits with t > kMinHitDistance count. The
// spherical branch accepts the cap around the vertex (never past the
// equator; aperture_radius <= |curvature_radius| is a Surface invariant).
inline Intersection intersect(const Ray& ray, const Surface& surface) {
  Intersection out;
  if (surface.kind == SurfaceKind::planar) {
    const double dz = ray.direction.z();
    if (dz == 0.0) {
      out.miss_reason = MissReason::no_intersection;
      return out;
    }
    const double t = (surface.vertex_z - ray.origin.z()) / dz;
    if (t <= kMinHitDistance) {
      out.miss_reason = MissReason::no_intersection;
      return out;
    }
    const Vec3 p = ray.origin + t * ray.direction;
    if (p.head<2>().norm() > surface.aperture_radius) {
      out.miss_reason = MissReason::outside_aperture;
      out.distance = t;
      return out;
    }
    out.hit = true;
    out.point = p;
    out.normal = dz > 0.0 ? Vec3(0.0, 0.0, -1.0) : Vec3(0.0, 0.0, 1.0);
    out.distance = t;
    return out;
  }

  const double radius = surface.curvature_radius;
  const Vec3 centre(0.0, 0.0, surface.vertex_z + radius);
  const Vec3 oc = ray.origin - centre;
  const double b = ray.direction.dot(oc);
  const double c = oc.squaredNorm() - radius * radius;
  const double disc = b * b - c;
  if (disc < 0.0) {
    out.miss_reason = MissReason::no_intersection;
    return out;
  }
  const double sq = std::sqrt(disc);
  // Stable quadratic roots, ascending.
  double q = -(b + (b >= 0.0 ? sq : -sq));
  double t0, t1;
  if (q != 0.0) {
    t0 = q;
    t1 = c / q;
  } else {
    t0 = -b - sq;
    t1 = -b + sq;
  }
  if (t0 > t1) std::swap(t0, t1);

  const double side = radius > 0.0 ? 1.0 : -1.0;
  const double cap_tol = 1e-12 * std::max(1.0, std::abs(radius));
  for (double t : {t0, t1}) {
    if (t <= kMinHitDistance) continue;
    const Vec3 p = ray.origin + t * ray.direction;
    // Cap membership: on the vertex side of the sphere's equatorial plane.
    if (side * (p.z() - centre.z()) > cap_tol) continue;
    if (p.head<2>().norm() > surface.aperture_radius) {
      out.miss_reason = MissReason::outside_aperture;
      out.distance = t;
      return out;
    }
    out.hit = true;
    out.point = p;
    Vec3 n = (p - centre) / std::abs(radius);
    if (n.dot(ray.direction) > 0.0) n = -n;
    out.normal = n;
    out.distance = t;
    return out;
  }
  out.miss_reason = MissReason::no_intersection;
  return out;
}

/// Specular reflection of a unit direction about a unit normal.
inline Vec3 reflect(const Vec3& dir, const Vec3& normal) {
  return dir - 2.0 * dir.dot(normal) * normal;
}

struct Refraction {
  Vec3 direction{0.0, 0.0, 1.0};
  bool tir = false;
};

// Vector Snell law. `normal` must oppose `dir` (dot < 0). Beyond the
// critical angle the result is the specular reflection with tir set.
inline Refraction refract(const Vec3& dir, const Vec3& normal, double n1,
                          double n2) {
  Refraction out;
  const double eta = n1 / n2;
  const double cos_i = -dir.dot(normal);
  const double sin2_t = eta * eta * std::max(0.0, 1.0 - cos_i * cos_i);
  if (sin2_t > 1.0) {
    out.direction = reflect(dir, normal);
    out.tir = true;
    return out;
  }
  const double cos_t = std::sqrt(1.0 - sin2_t);
  out.direction = (eta * dir + (eta * cos_i - cos_t) * normal).normalized();
  return out;
}

// Unpolarized Fresnel power reflectance for cos_i in (0,1]. Returns 1
// beyond total internal reflection.
inline double fresnel_unpolarized(double cos_i, double n1, double n2) {
  const double eta = n1 / n2;
  const double sin2_t = eta * eta * std::max(0.0, 1.0 - cos_i * cos_i);
  if (sin2_t >= 1.0) return 1.0;
  const double cos_t = std::sqrt(1.0 - sin2_t);
  const double rs = (n1 * cos_i - n2 * cos_t) / (n1 * cos_i + n2 * cos_t);
  const double rp = (n1 * cos_t - n2 * cos_i) / (n1 * cos_t + n2 * cos_i);
  return 0.5 * (rs * rs + rp * rp);
}

/// Rigid rotation of a ray about an axis through a pivot point; angle in
/// degrees, right-handed about `axis`.
inline Ray rotate_about_point(const Ray& ray, const Vec3& pivot,
                              const Vec3& axis, double angle_deg) {
  const Eigen::AngleAxisd rot(deg_to_rad(angle_deg), axis);
  Ray out = ray;
  out.origin = pivot + rot * (ray.origin - pivot);
  out.direction = rot * ray.direction;
  return out;
}

}  // namespace catseye
