#include "catseye/tracer.hpp"

#include <cmath>

#include "catseye/rng.hpp"

namespace catseye {

namespace {

constexpr std::uint64_t kLambertTag = 0x6c616d62ull;
constexpr int kMaxBounces = 64;

// Cosine-weighted hemisphere sample about `normal`, driven by the trace
// context so results are reproducible per sample index.
Vec3 cosine_sample(const Vec3& normal, const TraceContext& ctx, int bounce) {
  const CounterRng rng = CounterRng::keyed(ctx.seed, kLambertTag);
  const double u1 =
      rng.uniform(ctx.sample_index, static_cast<std::uint32_t>(2 * bounce + 2));
  const double u2 =
      rng.uniform(ctx.sample_index, static_cast<std::uint32_t>(2 * bounce + 3));
  const double r = std::sqrt(u1);
  const double phi = 2.0 * kPi * u2;
  // Tangent frame about the normal.
  const Vec3 helper =
      std::abs(normal.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
  const Vec3 t1 = normal.cross(helper).normalized();
  const Vec3 t2 = normal.cross(t1);
  return (r * std::cos(phi) * t1 + r * std::sin(phi) * t2 +
          std::sqrt(std::max(0.0, 1.0 - u1)) * normal)
      .normalized();
}

TraceResult finish(Ray r, const TraceContext& ctx,
                   std::optional<std::vector<Vec3>> path) {
  TraceResult res;
  (void)ctx;
  res.outcome = (r.direction.z() < 0.0 && r.medium_index == kAirIndex)
                    ? TraceOutcome::returned
                    : TraceOutcome::lost_miss;
  res.exit_ray = r;
  res.path = std::move(path);
  return res;
}

}  // namespace

const char* to_string(TraceOutcome outcome) {
  switch (outcome) {
    case TraceOutcome::returned: return "returned";
    case TraceOutcome::lost_aperture: return "lost_aperture";
    case TraceOutcome::lost_tir: return "lost_tir";
    case TraceOutcome::lost_miss: return "lost_miss";
    case TraceOutcome::absorbed: return "absorbed";
  }
  return "?";
}

TraceResult trace_unit(const SurfaceStack& stack, const Ray& ray,
                       const TraceContext& ctx) {
  Ray r = ray;
  std::optional<std::vector<Vec3>> path;
  if (ctx.record_path) path.emplace();
  int lambert_bounces = 0;

  for (const Surface& s : stack.sequence) {
    const Intersection hit = intersect(r, s);
    if (!hit.hit) {
      TraceResult res;
      res.outcome = hit.miss_reason == MissReason::outside_aperture
                        ? TraceOutcome::lost_aperture
                        : TraceOutcome::lost_miss;
      res.exit_ray = r;
      res.path = std::move(path);
      return res;
    }
    if (path) path->push_back(hit.point);
    r.origin = hit.point;

    switch (s.interaction) {
      case Interaction::refract: {
        const double cos_i = -r.direction.dot(hit.normal);
        const Refraction rr =
            refract(r.direction, hit.normal, s.n_before, s.n_after);
        if (rr.tir) {
          TraceResult res;
          res.outcome = TraceOutcome::lost_tir;
          res.exit_ray = r;
          res.path = std::move(path);
          return res;
        }
        if (s.fresnel)
          r.weight *= 1.0 - fresnel_unpolarized(cos_i, s.n_before, s.n_after);
        r.direction = rr.direction;
        r.medium_index = s.n_after;
        break;
      }
      case Interaction::mirror:
        r.direction = reflect(r.direction, hit.normal);
        r.weight *= s.reflectivity;
        break;
      case Interaction::lambertian:
        r.direction = cosine_sample(hit.normal, ctx, lambert_bounces++);
        r.weight *= s.reflectivity;
        break;
      case Interaction::absorb: {
        TraceResult res;
        res.outcome = TraceOutcome::absorbed;
        res.exit_ray = r;
        res.path = std::move(path);
        return res;
      }
    }
    if (r.weight == 0.0) {
      TraceResult res;
      res.outcome = TraceOutcome::absorbed;
      res.exit_ray = r;
      res.path = std::move(path);
      return res;
    }
  }
  return finish(r, ctx, std::move(path));
}

TraceResult trace_nonsequential(const SurfaceStack& stack, const Ray& ray,
                                const TraceContext& ctx) {
  Ray r = ray;
  std::optional<std::vector<Vec3>> path;
  if (ctx.record_path) path.emplace();
  int lambert_bounces = 0;

  for (int bounce = 0; bounce < kMaxBounces; ++bounce) {
    // Nearest event wins; an outside-aperture crossing is a terminal block
    // (the rim of the element masks the ray, matching the sequential
    // tracer's aperture accounting).
    const Surface* nearest = nullptr;
    Intersection best;
    for (const Surface& s : stack.physical) {
      const Intersection h = intersect(r, s);
      if (!h.hit && h.miss_reason != MissReason::outside_aperture) continue;
      if (!nearest || h.distance < best.distance) {
        nearest = &s;
        best = h;
      }
    }
    if (!nearest) return finish(r, ctx, std::move(path));
    if (!best.hit) {
      TraceResult res;
      res.outcome = TraceOutcome::lost_aperture;
      res.exit_ray = r;
      res.path = std::move(path);
      return res;
    }

    if (path) path->push_back(best.point);
    r.origin = best.point;

    switch (nearest->interaction) {
      case Interaction::refract: {
        // Media per side of approach: n_before faces -z.
        const bool from_front = r.direction.z() > 0.0;
        const double n1 = from_front ? nearest->n_before : nearest->n_after;
        const double n2 = from_front ? nearest->n_after : nearest->n_before;
        const double cos_i = -r.direction.dot(best.normal);
        const Refraction rr = refract(r.direction, best.normal, n1, n2);
        r.direction = rr.direction;
        if (!rr.tir) {
          if (nearest->fresnel)
            r.weight *= 1.0 - fresnel_unpolarized(cos_i, n1, n2);
          r.medium_index = n2;
        }
        break;
      }
      case Interaction::mirror:
        r.direction = reflect(r.direction, best.normal);
        r.weight *= nearest->reflectivity;
        break;
      case Interaction::lambertian: {
        if (lambert_bounces >= 1) {
          TraceResult res;
          res.outcome = TraceOutcome::absorbed;
          res.exit_ray = r;
          res.path = std::move(path);
          return res;
        }
        r.direction = cosine_sample(best.normal, ctx, lambert_bounces++);
        r.weight *= nearest->reflectivity;
        break;
      }
      case Interaction::absorb: {
        TraceResult res;
        res.outcome = TraceOutcome::absorbed;
        res.exit_ray = r;
        res.path = std::move(path);
        return res;
      }
    }
    if (r.weight == 0.0) {
      TraceResult res;
      res.outcome = TraceOutcome::absorbed;
      res.exit_ray = r;
      res.path = std::move(path);
      return res;
    }
  }
  TraceResult res;
  res.outcome = TraceOutcome::lost_miss;
  res.exit_ray = r;
  res.path = std::move(path);
  return res;
}

void BundleStats::merge(const BundleStats& other) {
  emitted += other.emitted;
  returned += other.returned;
  on_detector += other.on_detector;
  weight_on_detector += other.weight_on_detector;
  weight_emitted += other.weight_emitted;
  for (int i = 0; i < kNumOutcomes; ++i) losses[i] += other.losses[i];
}

namespace {

struct TiledStats {
  BundleStats stats;
  KahanSum detector_weight;
};

BundleStats run_bundle(const UnitDesign& design, const SceneConfig& scene,
                       const MarkerPose& pose, std::size_t source_index,
                       TraceMode mode, const ExecPolicy& policy) {
  const SurfaceStack stack = build_stack(design);
  const double lens_radius = scene.lens_diameter / 2.0;
  const auto count = static_cast<std::size_t>(scene.rays_per_point);

  auto per_tile = [&](std::size_t begin, std::size_t end) {
    TiledStats tile;
    for (std::size_t i = begin; i < end; ++i) {
      const Ray ray = emit_ray(scene, pose, source_index, scene.seed, i,
                               design.a);
      TraceContext ctx;
      ctx.seed = scene.seed;
      ctx.sample_index = i;
      const TraceResult res = mode == TraceMode::sequential
                                  ? trace_unit(stack, ray, ctx)
                                  : trace_nonsequential(stack, ray, ctx);
      tile.stats.emitted += 1;
      tile.stats.weight_emitted += 1.0;
      tile.stats.losses[static_cast<int>(res.outcome)] += 1;
      if (res.outcome != TraceOutcome::returned) continue;
      tile.stats.returned += 1;
      const Ray exit = to_scene_frame(res.exit_ray, pose);
      if (exit.direction.z() >= 0.0) continue;
      const double t = -exit.origin.z() / exit.direction.z();
      if (t <= 0.0) continue;
      const Vec3 p = exit.origin + t * exit.direction;
      if (p.head<2>().norm() <= lens_radius) {
        tile.stats.on_detector += 1;
        tile.detector_weight.add(exit.weight);
      }
    }
    tile.stats.weight_on_detector = tile.detector_weight.value();
    return tile;
  };
  auto merge = [](TiledStats& acc, const TiledStats& tile) {
    BundleStats& a = acc.stats;
    const BundleStats& b = tile.stats;
    a.emitted += b.emitted;
    a.returned += b.returned;
    a.on_detector += b.on_detector;
    a.weight_emitted += b.weight_emitted;
    for (int i = 0; i < kNumOutcomes; ++i) a.losses[i] += b.losses[i];
    acc.detector_weight.add(b.weight_on_detector);
  };

  TiledStats total = run_tiled<TiledStats>(count, kDefaultTileSize, policy,
                                           per_tile, merge);
  total.stats.weight_on_detector = total.detector_weight.value();
  return total.stats;
}

}  // namespace

BundleStats trace_bundle(const UnitDesign& design, const SceneConfig& scene,
                         const MarkerPose& pose, std::size_t source_index,
                         TraceMode mode, const ExecPolicy& policy) {
  return run_bundle(design, scene, pose, source_index, mode, policy);
}

BundleStats trace_nonsequential_mc(const UnitDesign& design,
                                   const SceneConfig& scene,
                                   const MarkerPose& pose,
                                   std::size_t source_index,
                                   const ExecPolicy& policy) {
  return run_bundle(design, scene, pose, source_index,
                    TraceMode::nonsequential, policy);
}

std::vector<RayRecord> trace_records(const UnitDesign& design,
                                     const SceneConfig& scene,
                                     const MarkerPose& pose,
                                     std::size_t source_index,
                                     std::int64_t n_rays, TraceMode mode) {
  const SurfaceStack stack = build_stack(design);
  std::vector<RayRecord> records;
  records.reserve(static_cast<std::size_t>(n_rays));
  for (std::int64_t i = 0; i < n_rays; ++i) {
    const Ray ray = emit_ray(scene, pose, source_index, scene.seed,
                             static_cast<std::uint64_t>(i), design.a);
    TraceContext ctx;
    ctx.seed = scene.seed;
    ctx.sample_index = static_cast<std::uint64_t>(i);
    const TraceResult res = mode == TraceMode::sequential
                                ? trace_unit(stack, ray, ctx)
                                : trace_nonsequential(stack, ray, ctx);
    RayRecord rec;
    rec.sample_index = static_cast<std::uint64_t>(i);
    rec.outcome = res.outcome;
    rec.exit_dir = res.exit_ray.direction;
    rec.weight = res.exit_ray.weight;
    records.push_back(rec);
  }
  return records;
}

}  // namespace catseye
