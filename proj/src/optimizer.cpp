#include "catseye/optimizer.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace catseye {

std::string OptimizationSpec::fingerprint() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%s footprint=%.9g n=%.9g offsets=%zu fractions=%zu rays=%lld "
                "seed=%llu lambda=%.9g | %s",
                to_string(family), pixel_footprint_mm, n, d_offsets.size(),
                aperture_fractions.size(),
                static_cast<long long>(rays_per_cell),
                static_cast<unsigned long long>(seed), uniformity_lambda,
                scene.fingerprint().c_str());
  return buf;
}

ApertureSizing step1_max_aperture(double pixel_footprint_mm) {
  if (pixel_footprint_mm <= 0.0)
    throw DesignError("pixel footprint must be positive");
  // Units indistinguishable in the camera view: a_max = footprint, and
  // the aperture can only be as large as the lens diameter, R_l = a_max/2.
  return {pixel_footprint_mm, pixel_footprint_mm / 2.0};
}

namespace {

double family_fill_factor(DesignFamily family) {
  switch (family) {
    case DesignFamily::biconvex_A:
    case DesignFamily::planoconvex_B:
      return 0.9069;
    case DesignFamily::ball_C:
    case DesignFamily::previous_flat:
    case DesignFamily::classic_sphere:
      return 0.7854;
    case DesignFamily::full_diffuse:
      return 1.0;
  }
  return 1.0;
}

SceneConfig cell_scene(const SceneConfig& base, std::int64_t rays,
                       std::uint64_t seed) {
  SceneConfig scene = base;
  scene.rays_per_point = rays;
  scene.seed = seed;
  return scene;
}

}  // namespace

UnitDesign make_candidate(const OptimizationSpec& spec, double d_offset,
                          double aperture_fraction) {
  const ApertureSizing sizing = step1_max_aperture(spec.pixel_footprint_mm);
  const ParaxialSummary par = paraxial(spec.family, sizing.R_l, spec.n);
  const double d = par.d_f - d_offset;
  if (d < 0.0) throw DesignError("d offset drives the mirror gap negative");

  UnitDesign u;
  u.family = spec.family;
  u.R_l = sizing.R_l;
  u.n = spec.n;
  u.d = d;
  u.R_m = retro_mirror_radius(spec.family, sizing.R_l, spec.n, d);
  u.a = aperture_fraction * sizing.a_max;
  if (spec.family == DesignFamily::ball_C) u.t = 2.0 * u.R_l;
  u.fill_factor = family_fill_factor(spec.family);
  char label[96];
  std::snprintf(label, sizeof(label), "%s off=%.9g af=%.9g",
                to_string(spec.family), d_offset, aperture_fraction);
  u.label = label;
  return u;
}

std::vector<SweepRow> step2_sweep_distance(DesignFamily family, double R_l,
                                           double n,
                                           const std::vector<double>& d_offsets,
                                           const SceneConfig& scene,
                                           const ExecPolicy& policy) {
  if (d_offsets.empty()) throw DesignError("empty d offset list");
  OptimizationSpec spec;
  spec.family = family;
  spec.pixel_footprint_mm = 2.0 * R_l;
  spec.n = n;
  spec.scene = scene;
  spec.rays_per_cell = scene.rays_per_point;
  spec.seed = scene.seed;

  std::vector<SweepRow> rows;
  for (double offset : d_offsets) {
    const UnitDesign candidate = make_candidate(spec, offset, 1.0);
    rows.push_back(
        {offset, multi_distance_score(candidate, scene, TraceMode::sequential,
                                      policy)});
  }
  return rows;
}

std::vector<SweepRow> step4_sweep_aperture(
    const UnitDesign& design, const std::vector<double>& aperture_fractions,
    const SceneConfig& scene, const ExecPolicy& policy) {
  if (aperture_fractions.empty()) throw DesignError("empty aperture list");
  std::vector<SweepRow> rows;
  for (double fraction : aperture_fractions) {
    if (fraction <= 0.0 || fraction > 1.0)
      throw DesignError("aperture fraction outside (0, 1]");
    UnitDesign candidate = design;
    candidate.a = fraction * design.a;
    rows.push_back({fraction,
                    multi_distance_score(candidate, scene,
                                         TraceMode::sequential, policy)});
  }
  return rows;
}

std::size_t argmax_cell(const std::vector<GridCell>& grid) {
  std::size_t best = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid[i].valid) continue;
    if (best == grid.size()) {
      best = i;
      continue;
    }
    const GridCell& b = grid[best];
    const GridCell& c = grid[i];
    if (c.score > b.score ||
        (c.score == b.score &&
         (c.design.a > b.design.a ||
          (c.design.a == b.design.a &&
           std::abs(c.d_offset) < std::abs(b.d_offset))))) {
      best = i;
    }
  }
  if (best == grid.size()) throw DesignError("optimization grid is empty");
  return best;
}

OptimizationReport optimize(const OptimizationSpec& spec,
                            const ExecPolicy& policy) {
  if (spec.d_offsets.empty() || spec.aperture_fractions.empty())
    throw DesignError("optimization grid is empty");

  const SceneConfig scene =
      cell_scene(spec.scene, spec.rays_per_cell, spec.seed);
  OptimizationReport report;
  report.spec_fingerprint = spec.fingerprint();
  report.seed = spec.seed;

  for (double offset : spec.d_offsets) {
    for (double fraction : spec.aperture_fractions) {
      GridCell cell;
      cell.d_offset = offset;
      cell.aperture_fraction = fraction;
      try {
        cell.design = make_candidate(spec, offset, fraction);
        cell.score = multi_distance_score(cell.design, scene,
                                          TraceMode::sequential, policy,
                                          spec.uniformity_lambda);
      } catch (const DesignError&) {
        cell.valid = false;  // unbuildable candidate, kept for audit
      }
      report.grid.push_back(std::move(cell));
    }
  }
  const std::size_t best = argmax_cell(report.grid);
  report.best = report.grid[best].design;
  report.best_score = report.grid[best].score;
  return report;
}

}  // namespace catseye
