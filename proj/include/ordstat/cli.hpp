#pragma once

// Command implementations behind the `ordstat` executable: scenario files,
// the built-in example registry, CSV/SVG/report emission.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordstat/mcsim.hpp"
#include "ordstat/stochorder.hpp"

namespace ordstat::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitHypothesis = 2,
  kExitDominance = 3,
  kExitParse = 64,
};

/// Malformed or invalid scenario input. The message names the line/column
/// (syntax errors) or the JSON pointer of the offending key.
class ScenarioParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct OutputPaths {
  std::string csv;
  std::string svg;
  std::string report;
};

struct ScenarioFile {
  std::string name;
  Scenario scenario;
  /// Empty entries default to <name>.csv / .svg / .txt in the output directory.
  OutputPaths outputs;
};

ScenarioFile parse_scenario_json(const std::string& text, const std::string& name);
/// Throws std::runtime_error if the file cannot be read.
ScenarioFile load_scenario_file(const std::filesystem::path& path);
/// Serialises a scenario in the file schema; parse_scenario_json inverts it exactly.
std::string scenario_to_json(const ScenarioFile& file);

/// The four worked examples, ids 1..4. Throws std::out_of_range otherwise.
ScenarioFile builtin_example(int id);

struct GlobalOptions {
  std::optional<std::size_t> grid_points;
  std::optional<double> u_min;
  std::optional<std::string> out_dir;
};

/// --out-dir, else $ORDSTAT_OUT, else ./ordstat_out.
std::filesystem::path resolve_out_dir(const GlobalOptions& options);

/// Applies --grid-points / --u-min to the scenario grid (u_max kept).
void apply_grid_overrides(Scenario& scenario, const GlobalOptions& options);

/// Header u,x,sf_X,sf_Y,hr_X,hr_Y,source; one row per grid point in
/// ascending u; %.17g values; hazard cells empty unless hr is requested.
std::string render_curves_csv(const Scenario& scenario);

/// Plot of every curve in a curves CSV. Depends only on the CSV text.
std::string render_svg(const std::string& csv_text);

std::string render_report(const ScenarioFile& file, const ComparisonResult& result, int exit_code);

/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// 0 when every gating hypothesis passes and all dominance checks hold;
/// otherwise 3 if a dominance check fails, else 2.
int comparison_exit_code(const ComparisonResult& result);

int cmd_reproduce(int example_id, const GlobalOptions& options, std::ostream& out, std::ostream& err);
int cmd_compare(const std::string& scenario_path, const GlobalOptions& options, std::ostream& out,
                std::ostream& err);
int cmd_oracle_check(int n, int trials, std::uint64_t seed, const std::vector<std::string>& generators,
                     std::ostream& out, std::ostream& err);
int cmd_simulate(const std::string& scenario_path, std::size_t replications, std::uint64_t seed,
                 const GlobalOptions& options, std::ostream& out, std::ostream& err);
int cmd_plot(const std::string& csv_path, const GlobalOptions& options, std::ostream& out, std::ostream& err);
int cmd_export_example(int example_id, const GlobalOptions& options, std::ostream& out, std::ostream& err);

}  // namespace ordstat::cli
