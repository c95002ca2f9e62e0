// Command-line front end: paraxial summaries, figure-class sweeps and
// comparisons, the four-step optimizer, the lab-bench experiment recipe
// and per-ray dumps. CSV/JSON/SVG outputs are deterministic under a fixed
// config + seed for any worker count.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "catseye/config.hpp"
#include "catseye/metrics.hpp"
#include "catseye/optimizer.hpp"
#include "catseye/svg.hpp"
#include "catseye/tracer.hpp"

namespace {

using namespace catseye;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPhysics = 3;

struct CommonFlags {
  std::string config_path;
  std::optional<long long> rays;
  std::optional<unsigned long long> seed;
  std::optional<std::string> out;
  std::optional<std::string> plot;
  std::optional<std::string> mode;
  std::optional<unsigned> workers;
};

void add_common(CLI::App* cmd, CommonFlags* flags, bool config_required = true) {
  auto* opt = cmd->add_option("--config", flags->config_path, "JSON run config");
  if (config_required) opt->required();
  cmd->add_option("--rays", flags->rays, "rays per (theta, source, distance) point");
  cmd->add_option("--seed", flags->seed, "RNG seed");
  cmd->add_option("--out", flags->out, "output file (default stdout)");
  cmd->add_option("--plot", flags->plot, "SVG plot output path");
  cmd->add_option("--mode", flags->mode, "tracing mode: sequential | mc");
  cmd->add_option("--workers", flags->workers, "worker threads (0 = auto)");
}

RunConfig load_with_overrides(const CommonFlags& flags) {
  RunConfig config = flags.config_path.empty()
                         ? RunConfig{}
                         : load_run_config(flags.config_path);
  if (flags.rays) {
    if (*flags.rays < 1) throw ConfigError("--rays must be >= 1");
    config.scene.rays_per_point = *flags.rays;
  }
  if (flags.seed) config.scene.seed = *flags.seed;
  if (flags.out) config.out_path = *flags.out;
  if (flags.plot) config.plot_path = *flags.plot;
  if (flags.workers) config.workers = *flags.workers;
  if (flags.mode) {
    if (*flags.mode == "sequential")
      config.mode = RunMode::sequential;
    else if (*flags.mode == "mc")
      config.mode = RunMode::mc;
    else
      throw ConfigError("--mode must be 'sequential' or 'mc'");
  }
  return config;
}

void write_text(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + *path);
  out << text;
}

TraceMode trace_mode(const RunConfig& config) {
  return config.mode == RunMode::mc ? TraceMode::nonsequential
                                    : TraceMode::sequential;
}

const UnitDesign& single_design(const RunConfig& config) {
  if (config.designs.size() != 1)
    throw ConfigError("exactly one design required for this command");
  return config.designs.front();
}

// ---------------------------------------------------------------------
// paraxial

int cmd_paraxial(const CommonFlags& flags) {
  const RunConfig config = load_with_overrides(flags);
  const UnitDesign& u = single_design(config);
  const ParaxialSummary p = paraxial(u.family, u.R_l, u.n, u.t);
  const double rm = retro_mirror_radius(u.family, u.R_l, u.n, u.d);

  char buf[640];
  std::snprintf(buf, sizeof(buf),
                "design: %s (%s)\n"
                "  R_l = %.5f mm, n = %.5f, t = %.5f mm, a = %.5f mm, d = %.5f mm\n"
                "  K1 = %.5f, K2 = %.5f, K = %.5f (1/mm)\n"
                "  f = %.5f mm\n"
                "  BFL = %.5f mm\n"
                "  d_f = %.5f mm\n"
                "  R_petzval = %.5f mm\n",
                u.label.empty() ? to_string(u.family) : u.label.c_str(),
                to_string(u.family), u.R_l, u.n, u.t, u.a, u.d, p.k1, p.k2,
                p.k, p.f, p.bfl, p.d_f, p.r_petzval);
  std::string text = buf;
  if (rm == 0.0) {
    text += "  R_m = flat\n";
  } else {
    std::snprintf(buf, sizeof(buf), "  R_m = %.5f mm\n", rm);
    text += buf;
  }
  write_text(config.out_path, text);
  return kExitOk;
}

// ---------------------------------------------------------------------
// sweep / compare

std::string series_label(const UnitDesign& base, const std::string& axis,
                         double value) {
  char buf[96];
  const char* name = base.label.empty() ? to_string(base.family)
                                        : base.label.c_str();
  if (axis == "distance")
    std::snprintf(buf, sizeof(buf), "%s off=%.9g", name, value);
  else if (axis == "aperture")
    std::snprintf(buf, sizeof(buf), "%s a=%.9g", name, value);
  else
    std::snprintf(buf, sizeof(buf), "%s dd=%.9g", name, value);
  return buf;
}

UnitDesign sweep_variant(const UnitDesign& base, const std::string& axis,
                         double value) {
  UnitDesign u = base;
  if (axis == "distance") {
    const ParaxialSummary p = paraxial(base.family, base.R_l, base.n, base.t);
    u.d = p.d_f - value;
    if (u.d < 0.0) throw DesignError("d offset drives the mirror gap negative");
    u.R_m = retro_mirror_radius(base.family, base.R_l, base.n, u.d);
  } else if (axis == "aperture") {
    u.a = value;
  } else {  // delta_d: gap error with the mirror curvature held fixed
    u.d = base.d + value;
    if (u.d < 0.0) throw DesignError("delta_d drives the mirror gap negative");
  }
  u.label = series_label(base, axis, value);
  return u;
}

int emit_curves_csv(const RunConfig& config,
                    const std::vector<UnitDesign>& designs,
                    const std::string& plot_title) {
  const ExecPolicy policy{config.workers};
  std::string csv = csv_header();
  std::vector<PlotSeries> plot;
  for (const UnitDesign& u : designs) {
    for (double dist : config.scene.working_distances) {
      const ResponseCurve curve =
          angularity_curve(u, config.scene, dist, trace_mode(config), policy);
      PlotSeries series;
      series.label = u.label + " @" + format_double(dist) + "mm";
      for (std::size_t i = 0; i < curve.theta_deg.size(); ++i) {
        csv += csv_row(u.label, curve.theta_deg[i], dist,
                       curve.return_fraction[i], curve.stderr_[i]);
        series.x.push_back(curve.theta_deg[i]);
        series.y.push_back(curve.return_fraction[i]);
      }
      plot.push_back(std::move(series));
    }
  }
  write_text(config.out_path, csv);
  if (config.plot_path)
    write_line_plot(*config.plot_path, plot_title, "entrance angle (deg)",
                    "return fraction", plot);
  return kExitOk;
}

int cmd_sweep(const CommonFlags& flags, const std::string& axis_flag) {
  RunConfig config = load_with_overrides(flags);
  std::string axis = axis_flag;
  std::vector<double> values;
  if (config.sweep) {
    if (axis.empty()) axis = config.sweep->axis;
    values = config.sweep->values;
  }
  if (axis.empty())
    throw ConfigError("sweep: no axis given (flag --axis or run.sweep.axis)");
  if (axis != "distance" && axis != "aperture" && axis != "delta_d")
    throw ConfigError("sweep: axis must be distance, aperture or delta_d");
  if (values.empty()) throw ConfigError("sweep: empty value list");

  const UnitDesign base = single_design(config);
  std::vector<UnitDesign> variants;
  for (double v : values) variants.push_back(sweep_variant(base, axis, v));
  return emit_curves_csv(config, variants, "sweep: " + axis);
}

int cmd_compare(const CommonFlags& flags) {
  const RunConfig config = load_with_overrides(flags);
  if (config.designs.size() < 2)
    throw ConfigError("compare: at least two designs required");
  return emit_curves_csv(config, config.designs, "design comparison");
}

// ---------------------------------------------------------------------
// optimize

int cmd_optimize(const CommonFlags& flags) {
  const RunConfig config = load_with_overrides(flags);
  if (!config.optimize)
    throw ConfigError("optimize: missing run.optimize section");
  OptimizationSpec spec = *config.optimize;
  spec.scene.rays_per_point = config.scene.rays_per_point;
  spec.scene.seed = config.scene.seed;
  const OptimizationReport report = optimize(spec, ExecPolicy{config.workers});
  const nlohmann::json doc = report_to_json(report);
  validate_report_schema(doc);
  write_text(config.out_path, doc.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------
// experiment

int cmd_experiment(const CommonFlags& flags) {
  RunConfig config = load_with_overrides(flags);
  SceneConfig scene = experiment_scene();
  scene.rays_per_point = config.scene.rays_per_point;
  scene.seed = config.scene.seed;
  scene.theta_range = config.scene.theta_range;
  const ExecPolicy policy{config.workers};

  const UnitDesign proposed = preset(PresetName::selected_C);
  const UnitDesign prior = preset(PresetName::previous);

  std::string csv =
      "theta_deg,distance_mm,fraction_selected_C,stderr_selected_C,"
      "fraction_previous,stderr_previous,ratio\n";
  std::vector<PlotSeries> plot;
  for (double dist : scene.working_distances) {
    const ResponseCurve cc =
        angularity_curve(proposed, scene, dist, trace_mode(config), policy);
    const ResponseCurve cp =
        angularity_curve(prior, scene, dist, trace_mode(config), policy);
    PlotSeries sc{"selected_C @" + format_double(dist) + "mm", {}, {}};
    PlotSeries sp{"previous @" + format_double(dist) + "mm", {}, {}};
    for (std::size_t i = 0; i < cc.theta_deg.size(); ++i) {
      const double ratio = cp.return_fraction[i] > 0.0
                               ? cc.return_fraction[i] / cp.return_fraction[i]
                               : 0.0;
      csv += format_double(cc.theta_deg[i]) + "," + format_double(dist) + "," +
             format_double(cc.return_fraction[i]) + "," +
             format_double(cc.stderr_[i]) + "," +
             format_double(cp.return_fraction[i]) + "," +
             format_double(cp.stderr_[i]) + "," + format_double(ratio) + "\n";
      sc.x.push_back(cc.theta_deg[i]);
      sc.y.push_back(cc.return_fraction[i]);
      sp.x.push_back(cp.theta_deg[i]);
      sp.y.push_back(cp.return_fraction[i]);
    }
    plot.push_back(std::move(sc));
    plot.push_back(std::move(sp));
  }
  write_text(config.out_path, csv);
  if (config.plot_path)
    write_line_plot(*config.plot_path, "experiment bench response",
                    "entrance angle (deg)", "return fraction", plot);
  return kExitOk;
}

// ---------------------------------------------------------------------
// trace-dump

int cmd_trace_dump(const CommonFlags& flags, double theta, double distance,
                   std::size_t source_index) {
  RunConfig config = load_with_overrides(flags);
  const UnitDesign& u = single_design(config);
  if (distance <= 0.0) distance = config.scene.working_distances.front();
  if (source_index >= config.scene.source_offsets.size())
    throw ConfigError("trace-dump: source index out of range");

  MarkerPose pose;
  pose.centre = Vec3(0.0, 0.0, distance);
  pose.rotation_angle_deg = theta;
  const auto records =
      trace_records(u, config.scene, pose, source_index,
                    config.scene.rays_per_point, trace_mode(config));
  std::string text;
  for (const RayRecord& rec : records) {
    text += std::to_string(rec.sample_index);
    text += '\t';
    text += to_string(rec.outcome);
    text += '\t';
    text += format_double(rec.exit_dir.x()) + "\t" +
            format_double(rec.exit_dir.y()) + "\t" +
            format_double(rec.exit_dir.z()) + "\t" +
            format_double(rec.weight) + "\n";
  }
  write_text(config.out_path, text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cat's-eye retroreflective marker design toolkit"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string sweep_axis;
  double dump_theta = 0.0;
  double dump_distance = 0.0;
  std::size_t dump_source = 0;

  auto* paraxial_cmd =
      app.add_subcommand("paraxial", "paraxial summary and mirror condition");
  add_common(paraxial_cmd, &flags);

  auto* sweep_cmd =
      app.add_subcommand("sweep", "response curves along a design axis");
  add_common(sweep_cmd, &flags);
  sweep_cmd->add_option("--axis", sweep_axis,
                        "sweep axis: distance | aperture | delta_d");

  auto* compare_cmd =
      app.add_subcommand("compare", "aligned response curves for several designs");
  add_common(compare_cmd, &flags);

  auto* optimize_cmd =
      app.add_subcommand("optimize", "run the four-step design optimization");
  add_common(optimize_cmd, &flags);

  auto* experiment_cmd = app.add_subcommand(
      "experiment", "lab-bench recipe: selected_C vs previous at 300/500 mm");
  add_common(experiment_cmd, &flags, /*config_required=*/false);

  auto* dump_cmd = app.add_subcommand("trace-dump", "per-ray outcome dump");
  add_common(dump_cmd, &flags);
  dump_cmd->add_option("--theta", dump_theta, "entrance angle (deg)");
  dump_cmd->add_option("--distance", dump_distance, "working distance (mm)");
  dump_cmd->add_option("--source", dump_source, "source index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (paraxial_cmd->parsed()) return cmd_paraxial(flags);
    if (sweep_cmd->parsed()) return cmd_sweep(flags, sweep_axis);
    if (compare_cmd->parsed()) return cmd_compare(flags);
    if (optimize_cmd->parsed()) return cmd_optimize(flags);
    if (experiment_cmd->parsed()) return cmd_experiment(flags);
    if (dump_cmd->parsed())
      return cmd_trace_dump(flags, dump_theta, dump_distance, dump_source);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const DesignError& e) {
    std::fprintf(stderr, "physics error: %s\n", e.what());
    return kExitPhysics;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitPhysics;
  }
  return kExitConfig;
}
