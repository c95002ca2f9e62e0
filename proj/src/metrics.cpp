#include "catseye/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "catseye/rng.hpp"

namespace catseye {

namespace {

constexpr std::uint64_t kDivergenceTag = 0x64697665ull;

MarkerPose pose_at(double theta_deg, double distance_mm) {
  MarkerPose pose;
  pose.centre = Vec3(0.0, 0.0, distance_mm);
  pose.rotation_angle_deg = theta_deg;
  return pose;
}

std::string curve_metadata(const UnitDesign& design, const SceneConfig& scene) {
  return design.fingerprint() + " | " + scene.fingerprint();
}

}  // namespace

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  KahanSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

double stddev_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  KahanSum s;
  for (double x : xs) s.add((x - m) * (x - m));
  return std::sqrt(s.value() / static_cast<double>(xs.size()));
}

FractionEstimate return_fraction(const UnitDesign& design,
                                 const SceneConfig& scene, double theta_deg,
                                 double distance_mm, TraceMode mode,
                                 const ExecPolicy& policy) {
  const MarkerPose pose = pose_at(theta_deg, distance_mm);
  KahanSum weight_hit;
  double weight_emitted = 0.0;
  for (std::size_t src = 0; src < scene.source_offsets.size(); ++src) {
    const BundleStats stats =
        trace_bundle(design, scene, pose, src, mode, policy);
    weight_hit.add(stats.weight_on_detector);
    weight_emitted += stats.weight_emitted;
  }
  FractionEstimate est;
  if (weight_emitted <= 0.0) return est;
  const double p_raw = weight_hit.value() / weight_emitted;
  est.fraction = design.fill_factor * p_raw;
  est.stderr_ = design.fill_factor *
                std::sqrt(std::max(0.0, p_raw * (1.0 - p_raw)) / weight_emitted);
  return est;
}

ResponseCurve angularity_curve(const UnitDesign& design,
                               const SceneConfig& scene, double distance_mm,
                               TraceMode mode, const ExecPolicy& policy) {
  ResponseCurve curve;
  curve.working_distance_mm = distance_mm;
  curve.metadata = curve_metadata(design, scene);
  for (double theta : theta_grid(scene.theta_range)) {
    const FractionEstimate est =
        return_fraction(design, scene, theta, distance_mm, mode, policy);
    curve.theta_deg.push_back(theta);
    curve.return_fraction.push_back(est.fraction);
    curve.stderr_.push_back(est.stderr_);
  }
  return curve;
}

DivergenceHistogram divergence_histogram(const UnitDesign& design,
                                         std::int64_t n_rays,
                                         std::uint64_t seed,
                                         const ExecPolicy& policy) {
  const SurfaceStack stack = build_stack(design);
  constexpr double kBinWidthDeg = 0.25;
  constexpr int kNumBins = 721;  // 0..180 degrees

  struct Tile {
    std::vector<double> flux = std::vector<double>(kNumBins, 0.0);
    KahanSum total;
  };
  const CounterRng rng = CounterRng::keyed(seed, kDivergenceTag);
  const double ap = design.a / 2.0;
  const Vec3 retro_dir(0.0, 0.0, -1.0);

  auto per_tile = [&](std::size_t begin, std::size_t end) {
    Tile tile;
    for (std::size_t i = begin; i < end; ++i) {
      // Axial illumination, uniform over the aperture disc.
      const std::uint64_t k = i / 2;
      const double r = ap * std::sqrt(rng.uniform(k, 0));
      const double phi = 2.0 * kPi * rng.uniform(k, 1);
      double x = r * std::cos(phi);
      if (i & 1) x = -x;
      Ray ray;
      ray.origin = Vec3(x, r * std::sin(phi), -10.0 * (1.0 + ap));
      ray.direction = Vec3(0.0, 0.0, 1.0);
      TraceContext ctx;
      ctx.seed = seed;
      ctx.sample_index = i;
      const TraceResult res = trace_unit(stack, ray, ctx);
      if (res.outcome != TraceOutcome::returned) continue;
      const double ang =
          rad_to_deg(angle_between_rad(res.exit_ray.direction, retro_dir));
      int bin = static_cast<int>(ang / kBinWidthDeg);
      bin = std::clamp(bin, 0, kNumBins - 1);
      tile.flux[bin] += res.exit_ray.weight;
      tile.total.add(res.exit_ray.weight);
    }
    return tile;
  };
  auto merge = [](Tile& acc, const Tile& tile) {
    for (int b = 0; b < kNumBins; ++b) acc.flux[b] += tile.flux[b];
    acc.total.add(tile.total.value());
  };
  const Tile total = run_tiled<Tile>(static_cast<std::size_t>(n_rays),
                                     kDefaultTileSize, policy, per_tile, merge);

  DivergenceHistogram hist;
  hist.angle_bins_deg.resize(kNumBins);
  for (int b = 0; b < kNumBins; ++b)
    hist.angle_bins_deg[b] = (b + 1) * kBinWidthDeg;
  hist.flux = total.flux;
  hist.total_returned_weight = total.total.value();

  // Full cone containing 80% of the returned flux, interpolated within
  // the crossing bin; cone angle = 2x the half-angle from the retro axis.
  const double target = 0.8 * hist.total_returned_weight;
  double cum = 0.0;
  for (int b = 0; b < kNumBins; ++b) {
    const double next = cum + hist.flux[b];
    if (next >= target && hist.flux[b] > 0.0) {
      const double frac = (target - cum) / hist.flux[b];
      hist.cone_angle_q80 = 2.0 * (b + frac) * kBinWidthDeg;
      break;
    }
    cum = next;
  }
  return hist;
}

std::vector<ResponseCurve> robustness_sweep(
    const UnitDesign& design, const SceneConfig& scene,
    const std::vector<double>& delta_d_list, TraceMode mode,
    const ExecPolicy& policy) {
  std::vector<ResponseCurve> curves;
  for (double delta : delta_d_list) {
    UnitDesign shifted = design;
    shifted.d = design.d + delta;  // R_m held fixed
    if (shifted.d < 0.0)
      throw DesignError("delta_d drives the mirror gap negative");
    char tag[64];
    std::snprintf(tag, sizeof(tag), "%s dd=%+.9g",
                  design.label.empty() ? to_string(design.family)
                                       : design.label.c_str(),
                  delta);
    shifted.label = tag;
    for (double dist : scene.working_distances)
      curves.push_back(angularity_curve(shifted, scene, dist, mode, policy));
  }
  return curves;
}

std::vector<ComparisonEntry> compare_designs(
    const std::vector<UnitDesign>& designs, const SceneConfig& scene,
    TraceMode mode, const ExecPolicy& policy) {
  std::vector<ComparisonEntry> table;
  for (const UnitDesign& design : designs) {
    for (double dist : scene.working_distances) {
      ComparisonEntry entry;
      entry.label =
          design.label.empty() ? to_string(design.family) : design.label;
      entry.working_distance_mm = dist;
      entry.curve = angularity_curve(design, scene, dist, mode, policy);
      table.push_back(std::move(entry));
    }
  }
  return table;
}

double multi_distance_score(const UnitDesign& design, const SceneConfig& scene,
                            TraceMode mode, const ExecPolicy& policy,
                            double uniformity_lambda) {
  KahanSum score;
  for (double dist : scene.working_distances) {
    const ResponseCurve curve =
        angularity_curve(design, scene, dist, mode, policy);
    score.add(mean_of(curve.return_fraction) -
              uniformity_lambda * stddev_of(curve.return_fraction));
  }
  return score.value() / static_cast<double>(scene.working_distances.size());
}

}  // namespace catseye
