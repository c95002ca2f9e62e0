#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "catseye/designs.hpp"
#include "catseye/geometry.hpp"
#include "catseye/parallel.hpp"
#include "catseye/scene.hpp"

// Ray propagation through a unit's surface stack, sequential (surfaces
// visited in stack order) or non-sequential (nearest intersection wins),
// plus bundle-level radiometric bookkeeping against the camera lens disc.

namespace catseye {

enum class TraceOutcome : int {
  returned = 0,
  lost_aperture = 1,
  lost_tir = 2,
  lost_miss = 3,
  absorbed = 4,
};
inline constexpr int kNumOutcomes = 5;

const char* to_string(TraceOutcome outcome);

struct TraceResult {
  TraceOutcome outcome = TraceOutcome::lost_miss;
  Ray exit_ray;  // meaningful iff outcome == returned
  std::optional<std::vector<Vec3>> path;
};

// Randomness context for stochastic interactions (lambertian bounce) so
// traces stay a pure function of (seed, sample index).
struct TraceContext {
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;
  bool record_path = false;
};

TraceResult trace_unit(const SurfaceStack& stack, const Ray& ray,
                       const TraceContext& ctx = {});

/// Non-sequential variant: surface order discovered by nearest hit;
/// follows TIR and lambertian bounces (single diffuse bounce).
TraceResult trace_nonsequential(const SurfaceStack& stack, const Ray& ray,
                                const TraceContext& ctx = {});

struct BundleStats {
  std::int64_t emitted = 0;
  std::int64_t returned = 0;
  std::int64_t on_detector = 0;
  double weight_on_detector = 0.0;
  double weight_emitted = 0.0;
  std::array<std::int64_t, kNumOutcomes> losses{};  // indexed by TraceOutcome

  void merge(const BundleStats& other);
};

enum class TraceMode { sequential, nonsequential };

// Traces one emitted bundle and counts exit rays whose extension to the
// camera plane lands inside the lens disc. Deterministic for any worker
// count (tiled index ranges, in-order compensated merge).
BundleStats trace_bundle(const UnitDesign& design, const SceneConfig& scene,
                         const MarkerPose& pose, std::size_t source_index,
                         TraceMode mode = TraceMode::sequential,
                         const ExecPolicy& policy = {});

/// Monte Carlo (non-sequential) bundle trace; oracle for trace_bundle and
/// the diffuse baseline.
BundleStats trace_nonsequential_mc(const UnitDesign& design,
                                   const SceneConfig& scene,
                                   const MarkerPose& pose,
                                   std::size_t source_index,
                                   const ExecPolicy& policy = {});

// Per-ray dump record for the trace-dump interface.
struct RayRecord {
  std::uint64_t sample_index = 0;
  TraceOutcome outcome = TraceOutcome::lost_miss;
  Vec3 exit_dir{0.0, 0.0, 0.0};
  double weight = 0.0;
};

std::vector<RayRecord> trace_records(const UnitDesign& design,
                                     const SceneConfig& scene,
                                     const MarkerPose& pose,
                                     std::size_t source_index,
                                     std::int64_t n_rays,
                                     TraceMode mode = TraceMode::sequential);

}  // namespace catseye
