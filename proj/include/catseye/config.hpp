#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "catseye/designs.hpp"
#include "catseye/optimizer.hpp"
#include "catseye/scene.hpp"

// Run configuration: a single JSON document with "design"/"designs",
// "scene" and "run" sections. Unknown keys are rejected. All lengths are
// mm, all angles degrees.

namespace catseye {

/// Configuration / schema violations; the CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RunMode { sequential, mc };

struct SweepSection {
  std::string axis;  // distance | aperture | delta_d
  std::vector<double> values;
};

struct RunConfig {
  std::vector<UnitDesign> designs;  // >= 1; "design" or "designs" section
  SceneConfig scene;
  RunMode mode = RunMode::sequential;
  unsigned workers = 0;
  std::optional<std::string> out_path;
  std::optional<std::string> plot_path;
  std::optional<SweepSection> sweep;
  std::optional<OptimizationSpec> optimize;
  // Open-question flag: set when a type B design got the default aperture
  // 2*R_l*sin(60 deg); echoed in output metadata.
  std::vector<std::string> notes;
};

RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

/// Design section parser (exposed for tests): preset name or explicit fields.
UnitDesign parse_design(const nlohmann::json& node, std::vector<std::string>* notes);

nlohmann::json report_to_json(const OptimizationReport& report);

/// Validates an optimization report against its own schema; throws
/// ConfigError describing the first violation.
void validate_report_schema(const nlohmann::json& doc);

// CSV helpers: '.' decimal, '\n' line ends, header row.
std::string csv_header();
std::string csv_row(const std::string& design, double theta_deg,
                    double distance_mm, double fraction, double stderr_);

std::string format_double(double v);

}  // namespace catseye
