#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "catseye/designs.hpp"
#include "catseye/scene.hpp"
#include "catseye/tracer.hpp"

// Derived photogrammetric quantities: return fraction, angularity curves,
// divergence of the retro cone, robustness sweeps and cross-design
// comparisons. Fractions carry the design's array fill factor.

namespace catseye {

struct FractionEstimate {
  double fraction = 0.0;
  double stderr_ = 0.0;  // binomial standard error
};

struct ResponseCurve {
  std::vector<double> theta_deg;
  double working_distance_mm = 0.0;
  std::vector<double> return_fraction;
  std::vector<double> stderr_;
  std::string metadata;  // design + scene fingerprint
};

struct DivergenceHistogram {
  std::vector<double> angle_bins_deg;  // upper bin edges
  std::vector<double> flux;
  double cone_angle_q80 = 0.0;  // full cone containing 80% of returned flux
  double total_returned_weight = 0.0;
};

// Fraction of incident rays (summed over all scene sources) arriving at
// the camera lens disc at entrance angle theta and the given working
// distance.
FractionEstimate return_fraction(const UnitDesign& design,
                                 const SceneConfig& scene, double theta_deg,
                                 double distance_mm,
                                 TraceMode mode = TraceMode::sequential,
                                 const ExecPolicy& policy = {});

/// Return fraction over the scene's theta grid at one working distance.
ResponseCurve angularity_curve(const UnitDesign& design,
                               const SceneConfig& scene, double distance_mm,
                               TraceMode mode = TraceMode::sequential,
                               const ExecPolicy& policy = {});

// Flux-weighted histogram of the angle between exit rays and the retro
// direction under axial illumination.
DivergenceHistogram divergence_histogram(const UnitDesign& design,
                                         std::int64_t n_rays,
                                         std::uint64_t seed,
                                         const ExecPolicy& policy = {});

// One curve per (delta_d, working distance): d replaced by d + delta_d
// with R_m held fixed. Rejects shifts making d negative.
std::vector<ResponseCurve> robustness_sweep(
    const UnitDesign& design, const SceneConfig& scene,
    const std::vector<double>& delta_d_list,
    TraceMode mode = TraceMode::sequential, const ExecPolicy& policy = {});

struct ComparisonEntry {
  std::string label;
  double working_distance_mm = 0.0;
  ResponseCurve curve;
};

/// Aligned angularity curves for several designs, shared emission streams.
std::vector<ComparisonEntry> compare_designs(
    const std::vector<UnitDesign>& designs, const SceneConfig& scene,
    TraceMode mode = TraceMode::sequential, const ExecPolicy& policy = {});

/// Unweighted mean over working distances of the mean-over-theta fraction.
double multi_distance_score(const UnitDesign& design, const SceneConfig& scene,
                            TraceMode mode = TraceMode::sequential,
                            const ExecPolicy& policy = {},
                            double uniformity_lambda = 0.0);

double mean_of(const std::vector<double>& xs);
double stddev_of(const std::vector<double>& xs);  // population form

}  // namespace catseye
