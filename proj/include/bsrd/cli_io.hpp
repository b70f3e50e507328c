#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bsrd/discretization.hpp"
#include "bsrd/functionals.hpp"
#include "bsrd/params.hpp"
#include "bsrd/timestepper.hpp"

namespace bsrd {

/// A parsed and validated configuration file.
struct LoadedConfig {
  RunConfig run;
  std::string output_dir = "out";
  bool write_snapshots = false;
  /// Set when the parameters came from a "dimensional" section.
  std::optional<DimensionalParameters> dimensional;
  std::optional<NondimensionalResult> nondim;
};

/// Strict JSON configuration. Sections: grid, motion, params | dimensional,
/// initial, run, output (optional). Unknown keys are rejected. Throws
/// ParseError (syntax, with line and column, or a wrongly typed key) and
/// ValidationError (constraints).
LoadedConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
LoadedConfig parse_config(const std::filesystem::path& path);

/// Reads dimensional constants from a JSON object (all ten keys required).
DimensionalParameters parse_dimensional(const std::string& json_text,
                                        const std::string& origin = "<input>");

/// %.17g
std::string format_double(double v);

inline constexpr const char* kDiagnosticsHeader =
    "t,M1,M2,dM1_rel,dM2_rel,E,D,E_rel,u_min,u_max,w_min,w_max,z_min,z_max,dt";

std::string format_row(const DiagnosticsRow& row);

/// Streams diagnostics rows to CSV, flushing after each row.
class DiagnosticsWriter {
public:
  explicit DiagnosticsWriter(const std::filesystem::path& path);
  void write(const DiagnosticsRow& row);

private:
  std::filesystem::path path_;
  std::ofstream out_;
};

void write_diagnostics(std::span<const DiagnosticsRow> rows, const std::filesystem::path& path);

/// A numeric CSV table; empty fields are stored as NaN.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Throws ValidationError listing the available columns when absent.
  std::vector<double> column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

struct Snapshot {
  SimulationState state;
  Grid grid;
  MotionPreset preset;
};

/// Writes <stem>_u.csv ((Ny+1) rows of Nx values), <stem>_surface.csv (rows w
/// and z) and the sidecar <stem>.json into `dir`. Returns the sidecar path.
std::filesystem::path write_snapshot(const SimulationState& state, const Grid& grid,
                                     const MotionPreset& preset, const std::filesystem::path& dir,
                                     const std::string& stem);

/// Reads a snapshot back from its sidecar.
Snapshot read_snapshot(const std::filesystem::path& sidecar);

enum class AxisScale { automatic, linear, log };

/// Line chart of `columns` against t as a standalone SVG document.
/// Automatic scaling picks log-y when E_rel is among the columns.
std::string render_plot(const CsvTable& table, std::span<const std::string> columns,
                        AxisScale scale = AxisScale::automatic);

void emit_plot(const std::filesystem::path& csv, std::span<const std::string> columns,
               const std::filesystem::path& out, AxisScale scale = AxisScale::automatic);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace bsrd
