#include "catseye/scene.hpp"

#include <bit>
#include <cmath>
#include <cstdio>

#include "catseye/rng.hpp"

namespace catseye {

namespace {

constexpr std::uint64_t kEmitTag = 0x656d6974ull;  // stream domain tag

std::uint64_t double_bits(double v) {
  return std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v);  // normalize -0
}

std::uint64_t emit_stream(const MarkerPose& pose, std::size_t source_index) {
  std::uint64_t h = kEmitTag;
  h = hash_combine(h, static_cast<std::uint64_t>(source_index));
  h = hash_combine(h, double_bits(pose.centre.x()));
  h = hash_combine(h, double_bits(pose.centre.y()));
  h = hash_combine(h, double_bits(pose.centre.z()));
  h = hash_combine(h, double_bits(pose.rotation_angle_deg));
  return h;
}

}  // namespace

std::vector<double> theta_grid(const ThetaRange& range) {
  std::vector<double> grid;
  if (range.step_deg <= 0.0) return grid;
  const long n =
      std::lround((range.max_deg - range.min_deg) / range.step_deg);
  grid.reserve(n + 1);
  for (long i = 0; i <= n; ++i)
    grid.push_back(range.min_deg + static_cast<double>(i) * range.step_deg);
  return grid;
}

std::string SceneConfig::fingerprint() const {
  char buf[288];
  std::snprintf(buf, sizeof(buf),
                "lens=%.9g sources=%zu dists=%zu theta=[%.9g,%.9g,%.9g] "
                "rays=%lld seed=%llu",
                lens_diameter, source_offsets.size(), working_distances.size(),
                theta_range.min_deg, theta_range.max_deg, theta_range.step_deg,
                static_cast<long long>(rays_per_point),
                static_cast<unsigned long long>(seed));
  std::string out = buf;
  if (pixel_footprint_computed_mm > 0.0) {
    std::snprintf(buf, sizeof(buf), " px_footprint=%.9g",
                  pixel_footprint_computed_mm);
    out += buf;
  }
  return out;
}

SceneConfig design_envelope_scene() {
  SceneConfig s;
  s.working_distances = {300.0, 500.0};
  s.lens_diameter = 50.0;
  s.source_offsets = {Vec3(0.0, 35.0, 0.0)};
  s.theta_range = {-20.0, 20.0, 2.0};
  return s;
}

SceneConfig experiment_scene() {
  SceneConfig s;
  s.working_distances = {300.0, 500.0};
  s.lens_diameter = 30.0;
  const double c = 22.0 / std::sqrt(2.0);  // LEDs at the envelope corners
  s.source_offsets = {Vec3(c, c, 0.0), Vec3(-c, -c, 0.0), Vec3(c, -c, 0.0),
                      Vec3(-c, c, 0.0)};
  s.theta_range = {-20.0, 20.0, 2.0};
  s.pixel_footprint_quoted_mm = 0.4;
  // 1920 px across a 71.2 degree horizontal field of view at 300 mm.
  s.pixel_footprint_computed_mm =
      2.0 * 300.0 * std::tan(deg_to_rad(71.2 / 2.0)) / 1920.0;
  return s;
}

double observation_angle(double offset_mm, double working_distance_mm) {
  return rad_to_deg(std::atan(offset_mm / working_distance_mm));
}

Ray emit_ray(const SceneConfig& scene, const MarkerPose& pose,
             std::size_t source_index, std::uint64_t seed,
             std::uint64_t sample_index, double aperture_diameter) {
  const Vec3 source = scene.source_offsets.at(source_index);
  const CounterRng rng = CounterRng::keyed(seed, emit_stream(pose, source_index));

  // Mirrored index pairs (2k, 2k+1) share the same draw and flip x, so
  // bundles at theta = 0 are symmetric about the meridional plane.
  const std::uint64_t k = sample_index / 2;
  const double u1 = rng.uniform(k, 0);
  const double u2 = rng.uniform(k, 1);
  const double r = 0.5 * aperture_diameter * std::sqrt(u1);
  const double phi = 2.0 * kPi * u2;
  double lx = r * std::cos(phi);
  const double ly = r * std::sin(phi);
  if (sample_index & 1) lx = -lx;

  const Eigen::AngleAxisd tilt(deg_to_rad(pose.rotation_angle_deg),
                               Vec3::UnitY());
  const Vec3 target = pose.centre + tilt * Vec3(lx, ly, 0.0);

  Ray ray;
  ray.origin = source;
  ray.direction = (target - source).normalized();
  ray.weight = 1.0;
  ray.medium_index = kAirIndex;

  // Express in the marker's local frame (aperture vertex at the origin).
  Ray local = rotate_about_point(ray, pose.centre, Vec3::UnitY(),
                                 -pose.rotation_angle_deg);
  local.origin -= pose.centre;
  return local;
}

std::vector<Ray> emit_bundle(const SceneConfig& scene, const MarkerPose& pose,
                             std::size_t source_index, std::int64_t n_rays,
                             std::uint64_t seed, double aperture_diameter) {
  std::vector<Ray> bundle;
  bundle.reserve(static_cast<std::size_t>(n_rays));
  for (std::int64_t i = 0; i < n_rays; ++i)
    bundle.push_back(emit_ray(scene, pose, source_index, seed,
                              static_cast<std::uint64_t>(i),
                              aperture_diameter));
  return bundle;
}

Ray to_scene_frame(const Ray& local_ray, const MarkerPose& pose) {
  Ray shifted = local_ray;
  shifted.origin += pose.centre;
  return rotate_about_point(shifted, pose.centre, Vec3::UnitY(),
                            pose.rotation_angle_deg);
}

}  // namespace catseye
