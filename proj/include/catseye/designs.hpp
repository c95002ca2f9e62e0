#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "catseye/geometry.hpp"

// Parametric retroreflective marker families, their paraxial behaviour,
// the mirror-curvature conditions that keep the retro behaviour across
// entrance angles, and compilation of a design into a traceable surface
// stack.
//
// Families:
//   biconvex_A     one convex refracting interface, medium filled to the
//                  mirror
//   planoconvex_B  flat entry, convex exit, air gap to the mirror
//   ball_C         full sphere lens, air gap to the mirror
//   previous_flat  ball lens resting on a flat reflective plate
//   classic_sphere ball lens with a concentric mirror hugging its back
//   full_diffuse   no optics, a single diffuse (lambertian) plane

namespace catseye {

inline constexpr double kFusedSilicaIndex = 1.4585;

enum class DesignFamily {
  biconvex_A,
  planoconvex_B,
  ball_C,
  previous_flat,
  classic_sphere,
  full_diffuse,
};

const char* to_string(DesignFamily family);
DesignFamily design_family_from_string(const std::string& name);

// One retroreflecting element. Lengths in mm; `a` is the aperture
// *diameter*; `d` is the air/medium gap from the last glass vertex
// (biconvex_A: the single refracting vertex; planoconvex_B: the convex
// exit vertex; ball families: the rear sphere vertex) to the mirror
// vertex. R_m uses the paper-style signs returned by
// retro_mirror_radius; 0 encodes a flat mirror.
struct UnitDesign {
  DesignFamily family = DesignFamily::ball_C;
  double R_l = 0.5;
  double R_m = 0.0;
  double d = 0.0;
  double a = 1.0;
  double n = kFusedSilicaIndex;
  double t = 0.0;  // lens thickness, planoconvex_B only (ball families: 2*R_l)
  double mirror_reflectivity = 1.0;
  bool fresnel_enabled = false;
  // Array packing fill factor applied to returned flux when this unit
  // stands in for a packed array (hex-packed lenses vs loose spheres).
  double fill_factor = 1.0;
  std::string label;

  /// Parameter fingerprint used in CSV/JSON metadata.
  std::string fingerprint() const;
};

// Paraxial summary for the focusing element of a design. K values are the
// interface and total powers; d_f is the paraxial focus distance measured
// from the same reference as UnitDesign::d.
struct ParaxialSummary {
  double k1 = 0.0;
  double k2 = 0.0;
  double k = 0.0;
  double f = 0.0;          // effective focal length
  double bfl = 0.0;        // back focal length from the last glass vertex
  double d_f = 0.0;        // paraxial focus distance from the d-reference
  double r_petzval = 0.0;  // signed, paper-style
};

/// Error for physically invalid design parameters.
class DesignError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ParaxialSummary paraxial(DesignFamily family, double R_l, double n,
                         double t = 0.0);

double petzval_radius(DesignFamily family, double R_l, double n);

// Mirror curvature radius fulfilling the family's retroreflection
// condition for a lens R_l and gap d (paper-style signs; build_stack
// transcribes to the local z convention).
double retro_mirror_radius(DesignFamily family, double R_l, double n,
                           double d);

// Ordered interface sequence for one full pass through a unit: forward
// surfaces, the mirror, and the reverse pass. `physical` lists each
// interface once (n_before = medium on the -z side) for non-sequential
// tracing.
struct SurfaceStack {
  std::vector<Surface> sequence;
  std::vector<Surface> physical;
};

SurfaceStack build_stack(const UnitDesign& design);

enum class PresetName {
  previous,
  classic_sphere,
  okotech_B,
  suss_B,
  selected_A,
  selected_C,
  full_diffuse,
};

const char* to_string(PresetName name);
PresetName preset_from_string(const std::string& name);

/// Fully resolved fused-silica design for one of the named presets.
UnitDesign preset(PresetName name);

std::vector<PresetName> all_presets();

}  // namespace catseye
