#include "bsrd/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "bsrd/cli_io.hpp"
#include "bsrd/error.hpp"
#include "bsrd/functionals.hpp"
#include "bsrd/timestepper.hpp"
#include "bsrd/verify.hpp"
#include "json.hpp"

namespace bsrd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json params_json(const SystemParameters& p) {
  return {{"delta_omega", p.delta_omega},
          {"delta_gamma", p.delta_gamma},
          {"delta_gamma_p", p.delta_gamma_p},
          {"delta_k", p.delta_k},
          {"delta_kp", p.delta_kp}};
}

json metadata(const LoadedConfig& cfg) {
  const RunConfig& rc = cfg.run;
  json m;
  m["grid"] = {{"Nx", rc.grid.nx}, {"Ny", rc.grid.ny}};
  m["motion"] = {{"kind", to_string(rc.preset.kind)},
                 {"amplitude", rc.preset.amplitude},
                 {"frequency", rc.preset.frequency},
                 {"v_tau", rc.preset.v_tau},
                 {"H", rc.preset.height},
                 {"Px", rc.preset.period}};
  m["params"] = params_json(rc.params);
  if (cfg.nondim) {
    m["nondimensionalization"] = {{"gamma", cfg.nondim->gamma}, {"gamma_p", cfg.nondim->gamma_p}};
  }
  m["run"] = {{"T_final", rc.t_final},
              {"cfl_safety", rc.cfl_safety},
              {"output_every", rc.output_every}};
  return m;
}

int cmd_run(const std::string& config_path, std::ostream& out) {
  const LoadedConfig cfg = parse_config(config_path);
  fs::path dir = cfg.output_dir;
  if (const char* env = std::getenv("BSRD_OUT"); env && *env) dir = env;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  const fs::path snap_dir = dir / "snapshots";
  if (cfg.write_snapshots) {
    fs::create_directories(snap_dir, ec);
    if (ec) throw IoError("cannot create '" + snap_dir.string() + "': " + ec.message());
  }

  json meta = metadata(cfg);
  DiagnosticsWriter writer(dir / "diagnostics.csv");
  std::size_t rows = 0;
  auto observer = [&](const SimulationState& s, const DiagnosticsRow& row) {
    writer.write(row);
    if (cfg.write_snapshots) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "snap_%05zu", rows);
      write_snapshot(s, cfg.run.grid, cfg.run.preset, snap_dir, stem);
    }
    ++rows;
  };

  try {
    run(cfg.run, observer);
  } catch (const Error& e) {
    meta["status"] = category_name(e.category());
    meta["message"] = e.what();
    meta["rows"] = rows;
    write_text(dir / "run.json", meta.dump(2) + "\n");
    throw;
  }
  meta["status"] = "ok";
  meta["rows"] = rows;
  write_text(dir / "run.json", meta.dump(2) + "\n");
  out << "wrote " << rows << " rows to " << (dir / "diagnostics.csv").string() << "\n";
  return 0;
}

int cmd_equilibrium(const std::string& config_path, std::ostream& out) {
  const LoadedConfig cfg = parse_config(config_path);
  const RunConfig& rc = cfg.run;
  const SimulationState s0 = initial_state(rc);
  const MassPair m = masses(s0, rc.grid, rc.preset);
  const DomainMeasures dm = domain_measures(rc.grid, rc.preset, 0.0);
  const EquilibriumState eq = equilibrium(m.M1, m.M2, dm.area_omega, dm.len_gamma);
  json j = {{"M1", m.M1},           {"M2", m.M2},       {"area_omega", dm.area_omega},
            {"len_gamma", dm.len_gamma}, {"u_inf", eq.u_inf}, {"w_inf", eq.w_inf},
            {"z_inf", eq.z_inf}};
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_nondim(const std::string& input, std::ostream& out) {
  std::string text = input;
  std::string origin = "<inline>";
  const auto first = input.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || input[first] != '{') {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw IoError("cannot open '" + input + "'");
    std::ostringstream os;
    os << in.rdbuf();
    text = os.str();
    origin = input;
  }
  const NondimensionalResult r = nondimensionalize(parse_dimensional(text, origin));
  json j = params_json(r.params);
  j["gamma"] = r.gamma;
  j["gamma_p"] = r.gamma_p;
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_verify(const std::string& suite, bool list, std::ostream& out) {
  if (list) {
    for (const auto& n : verify::suite_names()) out << n << "\n";
    return 0;
  }
  const auto results = verify::run_suites(suite);
  std::size_t failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    if (!r.passed) ++failed;
  }
  out << (results.size() - failed) << "/" << results.size() << " checks passed\n";
  if (failed) throw VerificationError(std::to_string(failed) + " verification check(s) failed");
  return 0;
}

int cmd_fit_decay(const std::string& csv, std::optional<double> floor,
                  std::optional<double> ceiling, std::ostream& out) {
  const CsvTable table = read_csv(csv);
  const auto t = table.column("t");
  const auto e = table.column("E_rel");
  std::vector<double> ts, es;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (std::isfinite(e[k])) {
      ts.push_back(t[k]);
      es.push_back(e[k]);
    }
  }
  if (es.empty()) throw FitError("no E_rel values in '" + csv + "'");
  DecayFitOptions opt;
  opt.floor = floor.value_or(1e-10);
  opt.ceiling = ceiling.value_or(es.front() / 10.0);
  const DecayFit fit = fit_decay_rate(ts, es, opt);
  json j = {{"K", fit.K},
            {"r_squared", fit.r_squared},
            {"intercept", fit.intercept},
            {"points", fit.points},
            {"floor", opt.floor},
            {"ceiling", opt.ceiling}};
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_plot(const std::string& csv, const std::vector<std::string>& cols, const std::string& out_path,
             const std::string& scale, std::ostream& out) {
  AxisScale s = AxisScale::automatic;
  if (scale == "linear") s = AxisScale::linear;
  else if (scale == "log") s = AxisScale::log;
  emit_plot(csv, cols, out_path, s);
  out << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bulk-surface receptor-ligand reaction-diffusion solver on a moving strip", "bsrd"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Simulate a configuration and write diagnostics");
  run_cmd->add_option("config", config_path, "JSON configuration file")->required();

  auto* eq_cmd = app.add_subcommand("equilibrium", "Print the equilibrium for a configuration");
  eq_cmd->add_option("config", config_path, "JSON configuration file")->required();

  std::string nondim_input;
  auto* nd_cmd = app.add_subcommand("nondim", "Convert dimensional constants to dimensionless ones");
  nd_cmd->add_option("input", nondim_input, "JSON file or inline JSON object")->required();

  std::string suite = "all";
  bool list_suites = false;
  auto* verify_cmd = app.add_subcommand("verify", "Run the oracle suites");
  verify_cmd->add_option("--suite", suite, "Suite name or 'all'");
  verify_cmd->add_flag("--list", list_suites, "List suite names");

  std::string csv_path;
  std::optional<double> fit_floor, fit_ceiling;
  auto* fit_cmd = app.add_subcommand("fit-decay", "Fit the exponential decay rate of E_rel");
  fit_cmd->add_option("csv", csv_path, "Diagnostics CSV")->required();
  fit_cmd->add_option("--floor", fit_floor, "Drop E_rel values below this (default 1e-10)");
  fit_cmd->add_option("--ceiling", fit_ceiling, "Drop E_rel values above this (default E_rel(0)/10)");

  std::vector<std::string> cols;
  std::string plot_out;
  std::string scale = "auto";
  auto* plot_cmd = app.add_subcommand("plot", "Plot diagnostics columns against t as SVG");
  plot_cmd->add_option("csv", csv_path, "Diagnostics CSV")->required();
  plot_cmd->add_option("--cols", cols, "Columns to plot")->required()->delimiter(',');
  plot_cmd->add_option("-o,--output", plot_out, "Output SVG path")->required();
  plot_cmd->add_option("--scale", scale, "auto, linear or log")
      ->check(CLI::IsMember({"auto", "linear", "log"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (auto* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "ERROR:" << category_name(ErrorCategory::parse) << ": " << e.what() << "\n";
    return exit_code_for(ErrorCategory::parse);
  }

  try {
    if (*run_cmd) return cmd_run(config_path, out);
    if (*eq_cmd) return cmd_equilibrium(config_path, out);
    if (*nd_cmd) return cmd_nondim(nondim_input, out);
    if (*verify_cmd) return cmd_verify(suite, list_suites, out);
    if (*fit_cmd) return cmd_fit_decay(csv_path, fit_floor, fit_ceiling, out);
    if (*plot_cmd) return cmd_plot(csv_path, cols, plot_out, scale, out);
  } catch (const Error& e) {
    err << "ERROR:" << category_name(e.category()) << ": " << e.what() << "\n";
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    err << "ERROR:" << category_name(ErrorCategory::io) << ": " << e.what() << "\n";
    return exit_code_for(ErrorCategory::io);
  }
  return 0;
}

}  // namespace bsrd
