#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "catseye/designs.hpp"
#include "catseye/metrics.hpp"
#include "catseye/scene.hpp"

// The four-step marker design methodology as an executable grid search:
//   1. size the retroreflecting unit from the camera pixel footprint,
//   2. sweep the mirror gap d around the paraxial focus distance,
//   3. hold the retroreflection condition (R_m follows d by construction),
//   4. sweep the aperture within (0, a_max].
// Scores are multi-distance mean return fractions; candidates always
// satisfy their family's mirror condition.

namespace catseye {

struct OptimizationSpec {
  DesignFamily family = DesignFamily::ball_C;
  double pixel_footprint_mm = 0.4;
  double n = kFusedSilicaIndex;
  std::vector<double> d_offsets;          // candidate d_f - d values, mm
  std::vector<double> aperture_fractions; // in (0, 1]
  SceneConfig scene;
  std::int64_t rays_per_cell = 20000;
  std::uint64_t seed = 1;
  double uniformity_lambda = 0.0;  // score = mean - lambda * std

  std::string fingerprint() const;
};

struct GridCell {
  UnitDesign design;
  double d_offset = 0.0;
  double aperture_fraction = 1.0;
  double score = 0.0;
  bool valid = true;  // false when the candidate violates a build invariant
};

struct OptimizationReport {
  UnitDesign best;
  double best_score = 0.0;
  std::vector<GridCell> grid;
  std::string spec_fingerprint;
  std::uint64_t seed = 0;
};

struct ApertureSizing {
  double a_max = 0.0;
  double R_l = 0.0;
};

/// Step 1: unit sizing from the object-space pixel footprint.
ApertureSizing step1_max_aperture(double pixel_footprint_mm);

struct SweepRow {
  double value = 0.0;  // d offset or aperture, by context
  double score = 0.0;
};

// Step 2 (+3): sweep d = d_f - offset at full aperture, mirror radius
// following the family's retroreflection condition.
std::vector<SweepRow> step2_sweep_distance(DesignFamily family, double R_l,
                                           double n,
                                           const std::vector<double>& d_offsets,
                                           const SceneConfig& scene,
                                           const ExecPolicy& policy = {});

/// Step 4: sweep aperture a = fraction * design.a on the full theta range.
std::vector<SweepRow> step4_sweep_aperture(
    const UnitDesign& design, const std::vector<double>& aperture_fractions,
    const SceneConfig& scene, const ExecPolicy& policy = {});

/// Full pipeline: cross-product grid, argmax with manufacturability ties
/// (larger aperture first, then smaller |offset|).
OptimizationReport optimize(const OptimizationSpec& spec,
                            const ExecPolicy& policy = {});

/// Candidate design for one grid cell (exposed for tests).
UnitDesign make_candidate(const OptimizationSpec& spec, double d_offset,
                          double aperture_fraction);

/// Index of the best cell under the report's tie-breaking rules.
std::size_t argmax_cell(const std::vector<GridCell>& grid);

}  // namespace catseye
