#include "catseye/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace catseye {

namespace {

using nlohmann::json;

void expect_object(const json& node, const char* ctx) {
  if (!node.is_object())
    throw ConfigError(std::string(ctx) + ": expected an object");
}

void reject_unknown_keys(const json& obj,
                         std::initializer_list<const char*> allowed,
                         const char* ctx) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) known = known || it.key() == key;
    if (!known)
      throw ConfigError(std::string(ctx) + ": unknown key '" + it.key() + "'");
  }
}

double get_number(const json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number())
    throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

double get_number_or(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return get_number(obj, key);
}

double default_aperture(DesignFamily family, double R_l,
                        std::vector<std::string>* notes) {
  switch (family) {
    case DesignFamily::planoconvex_B: {
      // Aperture unstated for the custom plano-convex variant; default to
      // 2*R_l*sin(60 deg) capped by the lens diameter and flag it.
      const double a = std::min(2.0 * R_l * std::sin(deg_to_rad(60.0)), 2.0 * R_l);
      if (notes) notes->push_back("aperture_defaulted");
      return a;
    }
    default:
      return 2.0 * R_l;
  }
}

double family_default_fill(DesignFamily family) {
  switch (family) {
    case DesignFamily::biconvex_A:
    case DesignFamily::planoconvex_B:
      return 0.9069;
    case DesignFamily::full_diffuse:
      return 1.0;
    default:
      return 0.7854;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string csv_header() { return "design,theta_deg,distance_mm,fraction,stderr\n"; }

std::string csv_row(const std::string& design, double theta_deg,
                    double distance_mm, double fraction, double stderr_) {
  return design + "," + format_double(theta_deg) + "," +
         format_double(distance_mm) + "," + format_double(fraction) + "," +
         format_double(stderr_) + "\n";
}

UnitDesign parse_design(const json& node, std::vector<std::string>* notes) {
  expect_object(node, "design");
  if (node.contains("preset")) {
    reject_unknown_keys(node,
                        {"preset", "label", "fresnel", "mirror_reflectivity",
                         "fill_factor", "a", "d", "d_offset"},
                        "design");
    UnitDesign u = preset(preset_from_string(node.at("preset").get<std::string>()));
    if (node.contains("label")) u.label = node.at("label").get<std::string>();
    if (node.contains("fresnel")) u.fresnel_enabled = node.at("fresnel").get<bool>();
    if (node.contains("mirror_reflectivity"))
      u.mirror_reflectivity = get_number(node, "mirror_reflectivity");
    if (node.contains("fill_factor")) u.fill_factor = get_number(node, "fill_factor");
    if (node.contains("a")) u.a = get_number(node, "a");
    if (node.contains("d") && node.contains("d_offset"))
      throw ConfigError("design: give 'd' or 'd_offset', not both");
    if (node.contains("d") || node.contains("d_offset")) {
      if (node.contains("d")) {
        u.d = get_number(node, "d");
      } else {
        const ParaxialSummary p = paraxial(u.family, u.R_l, u.n, u.t);
        u.d = p.d_f - get_number(node, "d_offset");
      }
      if (u.d < 0.0) throw ConfigError("design: gap d is negative");
      u.R_m = retro_mirror_radius(u.family, u.R_l, u.n, u.d);
    }
    return u;
  }

  reject_unknown_keys(node,
                      {"family", "R_l", "R_m", "d", "d_offset", "a", "n", "t",
                       "mirror_reflectivity", "fresnel", "fill_factor",
                       "label"},
                      "design");
  if (!node.contains("family")) throw ConfigError("design: missing 'family'");
  UnitDesign u;
  u.family = design_family_from_string(node.at("family").get<std::string>());
  if (u.family != DesignFamily::full_diffuse && !node.contains("R_l"))
    throw ConfigError("design: missing 'R_l'");
  u.R_l = get_number_or(node, "R_l", 1.0);
  u.n = get_number_or(node, "n", kFusedSilicaIndex);
  u.t = get_number_or(node, "t", 0.0);
  if (u.family == DesignFamily::ball_C ||
      u.family == DesignFamily::previous_flat ||
      u.family == DesignFamily::classic_sphere) {
    if (u.t == 0.0) u.t = 2.0 * u.R_l;
  }

  if (node.contains("d") && node.contains("d_offset"))
    throw ConfigError("design: give 'd' or 'd_offset', not both");
  if (node.contains("d")) {
    u.d = get_number(node, "d");
  } else if (node.contains("d_offset")) {
    const ParaxialSummary p = paraxial(u.family, u.R_l, u.n, u.t);
    u.d = p.d_f - get_number(node, "d_offset");
  } else {
    u.d = 0.0;
  }
  if (u.d < 0.0) throw ConfigError("design: gap d is negative");

  u.R_m = node.contains("R_m") ? get_number(node, "R_m")
                               : retro_mirror_radius(u.family, u.R_l, u.n, u.d);
  u.a = node.contains("a") ? get_number(node, "a")
                           : default_aperture(u.family, u.R_l, notes);
  u.mirror_reflectivity = get_number_or(
      node, "mirror_reflectivity",
      u.family == DesignFamily::full_diffuse ? 0.9 : 1.0);
  u.fresnel_enabled =
      node.contains("fresnel") ? node.at("fresnel").get<bool>() : true;
  u.fill_factor =
      get_number_or(node, "fill_factor", family_default_fill(u.family));
  u.label = node.contains("label") ? node.at("label").get<std::string>()
                                   : to_string(u.family);
  return u;
}

namespace {

ThetaRange parse_theta(const json& node) {
  expect_object(node, "theta");
  reject_unknown_keys(node, {"min", "max", "step"}, "theta");
  ThetaRange range;
  range.min_deg = get_number(node, "min");
  range.max_deg = get_number(node, "max");
  range.step_deg = get_number(node, "step");
  if (range.step_deg <= 0.0) throw ConfigError("theta: step must be positive");
  if (range.max_deg < range.min_deg)
    throw ConfigError("theta: max must be >= min");
  return range;
}

SceneConfig parse_scene(const json& node) {
  expect_object(node, "scene");
  if (node.contains("preset")) {
    reject_unknown_keys(node, {"preset", "theta"}, "scene");
    const std::string name = node.at("preset").get<std::string>();
    SceneConfig scene;
    if (name == "design_envelope") {
      scene = design_envelope_scene();
    } else if (name == "experiment") {
      scene = experiment_scene();
    } else {
      throw ConfigError("scene: unknown preset '" + name + "'");
    }
    if (node.contains("theta")) scene.theta_range = parse_theta(node.at("theta"));
    return scene;
  }
  reject_unknown_keys(
      node, {"working_distances", "lens_diameter", "source_offsets", "theta"},
      "scene");
  SceneConfig scene;
  scene.working_distances.clear();
  for (const auto& v : node.at("working_distances")) {
    const double d = v.get<double>();
    if (d <= 0.0) throw ConfigError("scene: working distances must be positive");
    scene.working_distances.push_back(d);
  }
  if (scene.working_distances.empty())
    throw ConfigError("scene: working_distances is empty");
  scene.lens_diameter = get_number(node, "lens_diameter");
  if (scene.lens_diameter <= 0.0)
    throw ConfigError("scene: lens_diameter must be positive");
  scene.source_offsets.clear();
  for (const auto& v : node.at("source_offsets")) {
    if (!v.is_array() || v.size() != 3)
      throw ConfigError("scene: source offsets must be [x,y,z] triples");
    scene.source_offsets.emplace_back(v[0].get<double>(), v[1].get<double>(),
                                      v[2].get<double>());
  }
  if (scene.source_offsets.empty())
    throw ConfigError("scene: source_offsets is empty");
  if (node.contains("theta")) scene.theta_range = parse_theta(node.at("theta"));
  return scene;
}

SweepSection parse_sweep(const json& node) {
  expect_object(node, "sweep");
  reject_unknown_keys(node, {"axis", "values"}, "sweep");
  SweepSection sweep;
  sweep.axis = node.at("axis").get<std::string>();
  if (sweep.axis != "distance" && sweep.axis != "aperture" &&
      sweep.axis != "delta_d")
    throw ConfigError("sweep: axis must be distance, aperture or delta_d");
  for (const auto& v : node.at("values")) sweep.values.push_back(v.get<double>());
  return sweep;
}

OptimizationSpec parse_optimize(const json& node, const SceneConfig& scene) {
  expect_object(node, "optimize");
  reject_unknown_keys(node,
                      {"family", "pixel_footprint_mm", "n", "d_offsets",
                       "aperture_fractions", "rays_per_cell", "seed",
                       "uniformity_lambda"},
                      "optimize");
  OptimizationSpec spec;
  spec.family = design_family_from_string(node.at("family").get<std::string>());
  spec.pixel_footprint_mm = get_number(node, "pixel_footprint_mm");
  spec.n = get_number_or(node, "n", kFusedSilicaIndex);
  for (const auto& v : node.at("d_offsets")) spec.d_offsets.push_back(v.get<double>());
  if (node.contains("aperture_fractions"))
    for (const auto& v : node.at("aperture_fractions"))
      spec.aperture_fractions.push_back(v.get<double>());
  else
    spec.aperture_fractions = {1.0};
  spec.scene = scene;
  spec.rays_per_cell =
      static_cast<std::int64_t>(get_number_or(node, "rays_per_cell",
                                              static_cast<double>(scene.rays_per_point)));
  spec.seed = static_cast<std::uint64_t>(get_number_or(
      node, "seed", static_cast<double>(scene.seed)));
  spec.uniformity_lambda = get_number_or(node, "uniformity_lambda", 0.0);
  return spec;
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  expect_object(doc, "config");
  reject_unknown_keys(doc, {"design", "designs", "scene", "run"}, "config");

  RunConfig config;
  config.scene = doc.contains("scene") ? parse_scene(doc.at("scene"))
                                       : design_envelope_scene();

  if (doc.contains("design") && doc.contains("designs"))
    throw ConfigError("config: give 'design' or 'designs', not both");
  if (doc.contains("design")) {
    config.designs.push_back(parse_design(doc.at("design"), &config.notes));
  } else if (doc.contains("designs")) {
    for (const auto& node : doc.at("designs"))
      config.designs.push_back(parse_design(node, &config.notes));
  }

  if (doc.contains("run")) {
    const json& run = doc.at("run");
    expect_object(run, "run");
    reject_unknown_keys(run,
                        {"rays", "seed", "workers", "mode", "out", "plot",
                         "sweep", "optimize"},
                        "run");
    if (run.contains("rays")) {
      const double rays = get_number(run, "rays");
      if (rays < 1.0) throw ConfigError("run: rays must be >= 1");
      config.scene.rays_per_point = static_cast<std::int64_t>(rays);
    }
    if (run.contains("seed"))
      config.scene.seed = static_cast<std::uint64_t>(get_number(run, "seed"));
    if (run.contains("workers"))
      config.workers = static_cast<unsigned>(get_number(run, "workers"));
    if (run.contains("mode")) {
      const std::string mode = run.at("mode").get<std::string>();
      if (mode == "sequential")
        config.mode = RunMode::sequential;
      else if (mode == "mc")
        config.mode = RunMode::mc;
      else
        throw ConfigError("run: mode must be 'sequential' or 'mc'");
    }
    if (run.contains("out")) config.out_path = run.at("out").get<std::string>();
    if (run.contains("plot")) config.plot_path = run.at("plot").get<std::string>();
    if (run.contains("sweep")) config.sweep = parse_sweep(run.at("sweep"));
    if (run.contains("optimize"))
      config.optimize = parse_optimize(run.at("optimize"), config.scene);
  }
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_run_config(doc);
}

namespace {

json design_to_json(const UnitDesign& u) {
  return json{{"family", to_string(u.family)},
              {"R_l", u.R_l},
              {"R_m", u.R_m},
              {"d", u.d},
              {"a", u.a},
              {"n", u.n},
              {"t", u.t},
              {"mirror_reflectivity", u.mirror_reflectivity},
              {"fresnel", u.fresnel_enabled},
              {"fill_factor", u.fill_factor},
              {"label", u.label}};
}

}  // namespace

json report_to_json(const OptimizationReport& report) {
  json grid = json::array();
  for (const GridCell& cell : report.grid) {
    grid.push_back(json{{"design", design_to_json(cell.design)},
                        {"d_offset", cell.d_offset},
                        {"aperture_fraction", cell.aperture_fraction},
                        {"score", cell.score},
                        {"valid", cell.valid}});
  }
  return json{{"schema_version", 1},
              {"seed", report.seed},
              {"grid", grid},
              {"best", json{{"design", design_to_json(report.best)},
                            {"score", report.best_score}}},
              {"provenance", json{{"spec_fingerprint", report.spec_fingerprint},
                                  {"seed", report.seed}}}};
}

void validate_report_schema(const json& doc) {
  auto fail = [](const std::string& what) {
    throw ConfigError("report schema violation: " + what);
  };
  if (!doc.is_object()) fail("not an object");
  if (!doc.contains("schema_version") || doc.at("schema_version") != 1)
    fail("schema_version must be 1");
  for (const char* key : {"seed", "grid", "best", "provenance"})
    if (!doc.contains(key)) fail(std::string("missing key '") + key + "'");
  if (!doc.at("grid").is_array() || doc.at("grid").empty())
    fail("grid must be a non-empty array");
  for (const auto& cell : doc.at("grid")) {
    for (const char* key : {"design", "score", "d_offset", "aperture_fraction", "valid"})
      if (!cell.contains(key)) fail(std::string("grid cell missing '") + key + "'");
  }
  const auto& best = doc.at("best");
  if (!best.contains("design") || !best.contains("score")) fail("best incomplete");
  const auto& prov = doc.at("provenance");
  if (!prov.contains("spec_fingerprint") || !prov.contains("seed"))
    fail("provenance incomplete");
  // best.score must equal the max over valid grid scores
  double max_score = -1e300;
  for (const auto& cell : doc.at("grid"))
    if (cell.at("valid").get<bool>())
      max_score = std::max(max_score, cell.at("score").get<double>());
  if (std::abs(best.at("score").get<double>() - max_score) > 1e-12)
    fail("best.score is not the grid maximum");
}

}  // namespace catseye
