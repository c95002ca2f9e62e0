#include "catseye/designs.hpp"
#include <algorithm>

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace catseye {

namespace {

constexpr double kIndexEps = 1e-9;

// Array packing fill factors (design decision): hexagonally packed
// lens arrays vs loose-packed spheres.
constexpr double kHexPackFill = 0.9069;
constexpr double kLoosePackFill = 0.7854;

void require(bool ok, const char* msg) {
  if (!ok) throw DesignError(msg);
}

bool is_ball(DesignFamily family) {
  return family == DesignFamily::ball_C ||
         family == DesignFamily::previous_flat ||
         family == DesignFamily::classic_sphere;
}

}  // namespace

const char* to_string(DesignFamily family) {
  switch (family) {
    case DesignFamily::biconvex_A: return "biconvex_A";
    case DesignFamily::planoconvex_B: return "planoconvex_B";
    case DesignFamily::ball_C: return "ball_C";
    case DesignFamily::previous_flat: return "previous_flat";
    case DesignFamily::classic_sphere: return "classic_sphere";
    case DesignFamily::full_diffuse: return "full_diffuse";
  }
  return "?";
}

DesignFamily design_family_from_string(const std::string& name) {
  if (name == "biconvex_A") return DesignFamily::biconvex_A;
  if (name == "planoconvex_B") return DesignFamily::planoconvex_B;
  if (name == "ball_C") return DesignFamily::ball_C;
  if (name == "previous_flat") return DesignFamily::previous_flat;
  if (name == "classic_sphere") return DesignFamily::classic_sphere;
  if (name == "full_diffuse") return DesignFamily::full_diffuse;
  throw DesignError("unknown design family: " + name);
}

std::string UnitDesign::fingerprint() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%s R_l=%.9g R_m=%.9g d=%.9g a=%.9g n=%.9g t=%.9g refl=%.9g "
                "fresnel=%d fill=%.9g",
                to_string(family), R_l, R_m, d, a, n, t, mirror_reflectivity,
                fresnel_enabled ? 1 : 0, fill_factor);
  return buf;
}

ParaxialSummary paraxial(DesignFamily family, double R_l, double n, double t) {
  require(n > 1.0 + kIndexEps, "refractive index must exceed 1 (focal length diverges)");
  require(R_l > 0.0, "lens curvature radius must be positive");
  (void)t;  // catalog datum; the paraxial results below do not depend on it

  ParaxialSummary s;
  const double surface_power = (n - 1.0) / R_l;
  switch (family) {
    case DesignFamily::biconvex_A:
      // Single refracting interface; focus lies inside the medium.
      s.k1 = surface_power;
      s.k2 = 0.0;
      s.k = surface_power;
      s.d_f = n * R_l / (n - 1.0);
      s.f = s.d_f;
      s.bfl = s.d_f;
      s.r_petzval = R_l / (n - 1.0);
      break;
    case DesignFamily::planoconvex_B:
      s.k1 = 0.0;
      s.k2 = surface_power;
      s.k = surface_power;  // k1 + k2 - k1*k2*t/n with k1 = 0
      s.f = R_l / (n - 1.0);
      s.bfl = R_l / (n * (n - 1.0));
      s.d_f = s.bfl;
      s.r_petzval = -n * R_l / (n - 1.0);
      break;
    case DesignFamily::ball_C:
    case DesignFamily::previous_flat:
    case DesignFamily::classic_sphere:
      s.k1 = surface_power;
      s.k2 = surface_power;
      s.k = 2.0 * (n - 1.0) / (n * R_l);
      s.f = n * R_l / (2.0 * (n - 1.0));
      s.bfl = R_l * (2.0 - n) / (2.0 * (n - 1.0));
      s.d_f = s.bfl;
      s.r_petzval = n * R_l / (2.0 * (n - 1.0));
      break;
    case DesignFamily::full_diffuse:
      throw DesignError("full_diffuse has no focusing element");
  }
  return s;
}

double petzval_radius(DesignFamily family, double R_l, double n) {
  return paraxial(family, R_l, n).r_petzval;
}

double retro_mirror_radius(DesignFamily family, double R_l, double n,
                           double d) {
  require(d >= 0.0, "gap d must be non-negative");
  switch (family) {
    case DesignFamily::biconvex_A:
      return d - R_l;
    case DesignFamily::planoconvex_B:
      // R_Petzval - BFL + d; the published collapsed form -R_l(n+1)/n + d
      // drops a sign during simplification and would put the mirror inside
      // its own aperture for near-focus gaps.
      return -R_l * (n * n + 1.0) / (n * (n - 1.0)) + d;
    case DesignFamily::ball_C:
    case DesignFamily::classic_sphere:
      return R_l + d;
    case DesignFamily::previous_flat:
      return 0.0;  // flat plate by construction
    case DesignFamily::full_diffuse:
      return 0.0;
  }
  return 0.0;
}

namespace {

Surface make_sphere(double vertex_z, double local_radius, double ap, double n1,
                    double n2, Interaction kind, double reflectivity,
                    bool fresnel) {
  Surface s;
  s.kind = SurfaceKind::spherical;
  s.vertex_z = vertex_z;
  s.curvature_radius = local_radius;
  // A strongly curved element cannot be wider than its own sphere; rays
  // beyond the rim are aperture losses, not an unbuildable design.
  s.aperture_radius = std::min(ap, std::abs(local_radius));
  s.n_before = n1;
  s.n_after = n2;
  s.interaction = kind;
  s.reflectivity = reflectivity;
  s.fresnel = fresnel;
  return s;
}

Surface make_plane(double vertex_z, double ap, double n1, double n2,
                   Interaction kind, double reflectivity, bool fresnel) {
  Surface s;
  s.kind = SurfaceKind::planar;
  s.vertex_z = vertex_z;
  s.aperture_radius = ap;
  s.n_before = n1;
  s.n_after = n2;
  s.interaction = kind;
  s.reflectivity = reflectivity;
  s.fresnel = fresnel;
  return s;
}

Surface reversed(const Surface& s) {
  Surface r = s;
  r.n_before = s.n_after;
  r.n_after = s.n_before;
  return r;
}

// Mirror with paper-sign curvature R_m transcribed to the local
// convention. `concave_value` is the local curvature radius realizing the
// family's retro condition (see ledger note on sign transcription).
Surface make_mirror(double vertex_z, double local_radius, double ap,
                    double medium, double reflectivity) {
  if (local_radius == 0.0)
    return make_plane(vertex_z, ap, medium, medium, Interaction::mirror,
                      reflectivity, false);
  return make_sphere(vertex_z, local_radius, ap, medium, medium,
                     Interaction::mirror, reflectivity, false);
}

}  // namespace

SurfaceStack build_stack(const UnitDesign& dgn) {
  SurfaceStack stack;
  const double refl = dgn.mirror_reflectivity;
  require(refl >= 0.0 && refl <= 1.0, "mirror reflectivity outside [0,1]");

  if (dgn.family == DesignFamily::full_diffuse) {
    require(dgn.a > 0.0, "aperture must be positive");
    Surface plate = make_plane(0.0, dgn.a / 2.0, kAirIndex, kAirIndex,
                               Interaction::lambertian, refl, false);
    stack.sequence = {plate};
    stack.physical = {plate};
    return stack;
  }

  require(dgn.R_l > 0.0, "lens curvature radius must be positive");
  require(dgn.n > 1.0 + kIndexEps, "refractive index must exceed 1");
  require(dgn.a > 0.0 && dgn.a <= 2.0 * dgn.R_l + 1e-12,
          "aperture diameter must lie in (0, 2*R_l]");
  require(dgn.d >= 0.0, "gap d must be non-negative");
  if (is_ball(dgn.family))
    require(dgn.t == 0.0 || std::abs(dgn.t - 2.0 * dgn.R_l) < 1e-9,
            "ball lens thickness is fixed at 2*R_l");
  if (dgn.family == DesignFamily::previous_flat) {
    require(dgn.R_m == 0.0, "previous_flat requires a flat mirror (R_m = 0)");
    require(dgn.d == 0.0, "previous_flat places the plate at contact (d = 0)");
  }

  const double ap = dgn.a / 2.0;
  const bool fr = dgn.fresnel_enabled;
  const double n = dgn.n;

  switch (dgn.family) {
    case DesignFamily::biconvex_A: {
      // Medium fills the gap to the mirror; one refracting interface.
      Surface lens = make_sphere(0.0, dgn.R_l, ap, kAirIndex, n,
                                 Interaction::refract, 1.0, fr);
      Surface mirror = make_mirror(dgn.d, dgn.R_l - dgn.d, ap, n, refl);
      stack.sequence = {lens, mirror, reversed(lens)};
      stack.physical = {lens, mirror};
      break;
    }
    case DesignFamily::planoconvex_B: {
      require(dgn.t >= 0.0, "lens thickness must be non-negative");
      Surface entry = make_plane(0.0, ap, kAirIndex, n, Interaction::refract,
                                 1.0, fr);
      // Exit curvature R_l/n realizes the design's paraxial back focal
      // length exactly (see ledger); centre of curvature inside the glass.
      Surface exit = make_sphere(dgn.t, -dgn.R_l / n, ap, n, kAirIndex,
                                 Interaction::refract, 1.0, fr);
      Surface mirror = make_mirror(dgn.t + dgn.d, dgn.R_m, ap, kAirIndex, refl);
      stack.sequence = {entry, exit, mirror, reversed(exit), reversed(entry)};
      stack.physical = {entry, exit, mirror};
      break;
    }
    case DesignFamily::classic_sphere: {
      // Mirror in contact with the glass: the rear sphere surface itself
      // reflects inside the medium (a coincident refract+mirror pair is
      // geometrically degenerate and optically equivalent).
      Surface front = make_sphere(0.0, dgn.R_l, ap, kAirIndex, n,
                                  Interaction::refract, 1.0, fr);
      Surface mirror = make_mirror(2.0 * dgn.R_l, -dgn.R_l, ap, n, refl);
      stack.sequence = {front, mirror, reversed(front)};
      stack.physical = {front, mirror};
      break;
    }
    case DesignFamily::ball_C:
    case DesignFamily::previous_flat: {
      Surface front = make_sphere(0.0, dgn.R_l, ap, kAirIndex, n,
                                  Interaction::refract, 1.0, fr);
      Surface rear = make_sphere(2.0 * dgn.R_l, -dgn.R_l, ap, n, kAirIndex,
                                 Interaction::refract, 1.0, fr);
      Surface mirror =
          dgn.family == DesignFamily::previous_flat
              ? make_mirror(2.0 * dgn.R_l, 0.0, ap, kAirIndex, refl)
              : make_mirror(2.0 * dgn.R_l + dgn.d, -(dgn.R_l + dgn.d), ap,
                            kAirIndex, refl);
      stack.sequence = {front, rear, mirror, reversed(rear), reversed(front)};
      stack.physical = {front, rear, mirror};
      break;
    }
    case DesignFamily::full_diffuse:
      break;  // handled above
  }
  return stack;
}

const char* to_string(PresetName name) {
  switch (name) {
    case PresetName::previous: return "previous";
    case PresetName::classic_sphere: return "classic_sphere";
    case PresetName::okotech_B: return "okotech_B";
    case PresetName::suss_B: return "suss_B";
    case PresetName::selected_A: return "selected_A";
    case PresetName::selected_C: return "selected_C";
    case PresetName::full_diffuse: return "full_diffuse";
  }
  return "?";
}

PresetName preset_from_string(const std::string& name) {
  if (name == "previous") return PresetName::previous;
  if (name == "classic_sphere") return PresetName::classic_sphere;
  if (name == "okotech_B") return PresetName::okotech_B;
  if (name == "suss_B") return PresetName::suss_B;
  if (name == "selected_A") return PresetName::selected_A;
  if (name == "selected_C") return PresetName::selected_C;
  if (name == "full_diffuse") return PresetName::full_diffuse;
  throw DesignError("unknown preset: " + name);
}

std::vector<PresetName> all_presets() {
  return {PresetName::previous,   PresetName::classic_sphere,
          PresetName::okotech_B,  PresetName::suss_B,
          PresetName::selected_A, PresetName::selected_C,
          PresetName::full_diffuse};
}

UnitDesign preset(PresetName name) {
  const double n = kFusedSilicaIndex;
  UnitDesign u;
  u.n = n;
  u.label = to_string(name);
  switch (name) {
    case PresetName::previous: {
      u.family = DesignFamily::previous_flat;
      u.R_l = 1.0;
      u.d = 0.0;
      u.R_m = 0.0;
      u.a = 1.2;  // sieve-cover hole diameter; beads are retained by the rim
      u.t = 2.0 * u.R_l;
      u.fresnel_enabled = true;
      u.fill_factor = kLoosePackFill;
      break;
    }
    case PresetName::classic_sphere: {
      u.family = DesignFamily::classic_sphere;
      u.R_l = 1.0;
      u.d = 0.0;
      u.R_m = retro_mirror_radius(u.family, u.R_l, n, u.d);  // = R_l
      u.a = 2.0;
      u.t = 2.0 * u.R_l;
      u.fresnel_enabled = true;
      u.fill_factor = kLoosePackFill;
      break;
    }
    case PresetName::okotech_B: {
      // Catalog lens II; d from this artifact's step-2/3 sweep over the
      // design envelope.
      u.family = DesignFamily::planoconvex_B;
      u.R_l = 0.425;
      u.a = 0.111;
      u.t = 0.05;
      u.d = paraxial(u.family, u.R_l, n).d_f - 0.30;
      u.R_m = retro_mirror_radius(u.family, u.R_l, n, u.d);
      u.fresnel_enabled = true;
      u.fill_factor = kHexPackFill;
      break;
    }
    case PresetName::suss_B: {
      // Catalog lens III; d from this artifact's step-2/3 sweep.
      u.family = DesignFamily::planoconvex_B;
      u.R_l = 0.35;
      u.a = 0.25;
      u.t = 0.9;
      u.d = paraxial(u.family, u.R_l, n).d_f - 0.12;
      u.R_m = retro_mirror_radius(u.family, u.R_l, n, u.d);
      u.fresnel_enabled = true;
      u.fill_factor = kHexPackFill;
      break;
    }
    case PresetName::selected_A: {
      u.family = DesignFamily::biconvex_A;
      u.R_l = 0.2;
      u.a = 0.4;
      u.d = paraxial(u.family, u.R_l, n).d_f - 0.14;
      u.R_m = retro_mirror_radius(u.family, u.R_l, n, u.d);
      u.fresnel_enabled = true;
      u.fill_factor = kHexPackFill;
      break;
    }
    case PresetName::selected_C: {
      u.family = DesignFamily::ball_C;
      u.R_l = 0.5;
      u.a = 1.0;
      u.t = 2.0 * u.R_l;
      u.d = paraxial(u.family, u.R_l, n).d_f - 0.15;
      u.R_m = retro_mirror_radius(u.family, u.R_l, n, u.d);
      u.fresnel_enabled = true;
      u.fill_factor = kLoosePackFill;
      break;
    }
    case PresetName::full_diffuse: {
      u.family = DesignFamily::full_diffuse;
      u.R_l = 1.0;
      u.a = 2.0;
      u.mirror_reflectivity = 0.9;  // white matte baseline
      u.fill_factor = 1.0;
      break;
    }
  }
  return u;
}

}  // namespace catseye
