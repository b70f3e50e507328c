#include "bsrd/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "bsrd/error.hpp"
#include "json.hpp"

namespace bsrd {

using nlohmann::json;

namespace {

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < std::min(byte, text.size()); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte points one past the offending character
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    std::string what = e.what();
    const auto pos = what.find("syntax error");
    if (pos != std::string::npos) what = what.substr(pos);
    throw ParseError(origin + ":" + line_col(text, at) + ": " + what);
  }
}

/// Typed access to one JSON object that remembers which keys were used.
class Section {
public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ParseError(where() + "must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double number(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number()) throw ParseError(where(key) + "expected a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : (mark(key), fallback);
  }

  int integer(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number_integer()) throw ParseError(where(key) + "expected an integer");
    const auto raw = v.get<long long>();
    if (raw < std::numeric_limits<int>::min() || raw > std::numeric_limits<int>::max()) {
      throw ValidationError(qualified(key) + " is out of range");
    }
    return static_cast<int>(raw);
  }
  int integer(const std::string& key, int fallback) {
    return has(key) ? integer(key) : (mark(key), fallback);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return mark(key), fallback;
    const json& v = get(key);
    if (!v.is_boolean()) throw ParseError(where(key) + "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string()) throw ParseError(where(key) + "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : (mark(key), fallback);
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = get(key);
    if (!v.is_array()) throw ParseError(where(key) + "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
      if (!e.is_number()) throw ParseError(where(key) + "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  Section child(const std::string& key) { return Section(get(key), qualified(key)); }

  /// Rejects keys that were never looked at.
  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) {
        throw ParseError("unknown key '" + qualified(item.key()) + "'");
      }
    }
  }

private:
  const json& get(const std::string& key) {
    mark(key);
    if (!has(key)) throw ParseError("missing required key '" + qualified(key) + "'");
    return j_.at(key);
  }
  void mark(const std::string& key) { seen_.insert(key); }
  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  std::string where(const std::string& key = {}) const {
    return "key '" + (key.empty() ? (path_.empty() ? std::string("<root>") : path_) : qualified(key)) + "': ";
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ProfileKind profile_kind_from_string(const std::string& s, const std::string& path) {
  if (s == "constant") return ProfileKind::constant;
  if (s == "gaussian") return ProfileKind::gaussian;
  if (s == "cosine") return ProfileKind::cosine;
  if (s == "table") return ProfileKind::table;
  throw ValidationError(path + ".kind must be one of constant, gaussian, cosine, table");
}

FieldProfile parse_profile(Section s, const std::string& path) {
  FieldProfile p;
  p.kind = profile_kind_from_string(s.string("kind", "constant"), path);
  switch (p.kind) {
    case ProfileKind::constant:
      p.value = s.number("value");
      break;
    case ProfileKind::gaussian: {
      p.value = s.number("value", 0.0);
      p.height = s.number("height");
      p.width = s.number("width");
      const auto c = s.numbers("center");
      if (c.size() != 2) throw ValidationError(path + ".center must have 2 entries");
      p.center = {c[0], c[1]};
      break;
    }
    case ProfileKind::cosine:
      p.value = s.number("value");
      p.amplitude = s.number("amplitude");
      p.mode = s.integer("mode", 1);
      break;
    case ProfileKind::table:
      p.table = s.numbers("values");
      break;
  }
  if (s.has("mass")) p.mass = s.number("mass");
  s.finish();
  return p;
}

DimensionalParameters parse_dimensional_section(Section s) {
  DimensionalParameters d;
  d.D_L = s.number("D_L");
  d.D_Gamma = s.number("D_Gamma");
  d.D_GammaP = s.number("D_GammaP");
  d.k_on = s.number("k_on");
  d.k_off = s.number("k_off");
  d.L = s.number("L");
  d.S = s.number("S");
  d.U = s.number("U");
  d.W = s.number("W");
  d.Z = s.number("Z");
  s.finish();
  return d;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

LoadedConfig parse_config_text(const std::string& text, const std::string& origin) {
  const json doc = parse_json(text, origin);
  Section root(doc, "");
  LoadedConfig out;
  RunConfig& rc = out.run;

  {
    Section m = root.child("motion");
    rc.preset.kind = motion_kind_from_string(m.string("kind"));
    rc.preset.amplitude = m.number("amplitude", 0.0);
    rc.preset.frequency = m.number("frequency", 0.0);
    rc.preset.v_tau = m.number("v_tau", 0.0);
    rc.preset.height = m.number("H", 1.0);
    rc.preset.period = m.number("Px", 2.0 * std::numbers::pi);
    m.finish();
  }
  {
    Section g = root.child("grid");
    const int nx = g.integer("Nx");
    const int ny = g.integer("Ny");
    g.finish();
    validate(rc.preset);
    rc.grid = make_grid(nx, ny, rc.preset);
  }

  const bool has_params = root.has("params");
  const bool has_dim = root.has("dimensional");
  if (has_params == has_dim) {
    throw ParseError("config needs exactly one of 'params' or 'dimensional'");
  }
  if (has_params) {
    Section p = root.child("params");
    rc.params.delta_omega = p.number("delta_omega");
    rc.params.delta_gamma = p.number("delta_gamma");
    rc.params.delta_gamma_p = p.number("delta_gamma_p");
    rc.params.delta_k = p.number("delta_k");
    rc.params.delta_kp = p.number("delta_kp");
    p.finish();
  } else {
    out.dimensional = parse_dimensional_section(root.child("dimensional"));
    out.nondim = nondimensionalize(*out.dimensional);
    rc.params = out.nondim->params;
  }

  {
    Section init = root.child("initial");
    rc.initial.u = parse_profile(init.child("u"), "initial.u");
    rc.initial.w = parse_profile(init.child("w"), "initial.w");
    rc.initial.z = parse_profile(init.child("z"), "initial.z");
    init.finish();
  }
  {
    Section r = root.child("run");
    rc.t_final = r.number("T_final");
    rc.cfl_safety = r.number("cfl_safety", 0.4);
    rc.output_every = r.number("output_every", 0.05);
    r.finish();
  }
  if (root.has("output")) {
    Section o = root.child("output");
    out.output_dir = o.string("dir", "out");
    out.write_snapshots = o.boolean("snapshots", false);
    o.finish();
  }
  root.finish();

  validate(rc);
  // sizes of tabulated profiles are checked here, not at the first step
  (void)initial_state(rc);
  return out;
}

LoadedConfig parse_config(const std::filesystem::path& path) {
  return parse_config_text(read_file(path), path.string());
}

DimensionalParameters parse_dimensional(const std::string& json_text, const std::string& origin) {
  const json doc = parse_json(json_text, origin);
  DimensionalParameters d = parse_dimensional_section(Section(doc, "dimensional"));
  validate(d);
  return d;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_row(const DiagnosticsRow& r) {
  std::string s;
  auto put = [&](double v) {
    if (!s.empty()) s += ',';
    s += format_double(v);
  };
  auto put_opt = [&](const std::optional<double>& v) {
    s += ',';
    if (v) s += format_double(*v);
  };
  put(r.t);
  put(r.M1);
  put(r.M2);
  put(r.dM1_rel);
  put(r.dM2_rel);
  put_opt(r.E);
  put_opt(r.D);
  put_opt(r.E_rel);
  put(r.u_min);
  put(r.u_max);
  put(r.w_min);
  put(r.w_max);
  put(r.z_min);
  put(r.z_max);
  put(r.dt);
  return s;
}

DiagnosticsWriter::DiagnosticsWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError("cannot write '" + path.string() + "'");
  out_ << kDiagnosticsHeader << '\n';
  out_.flush();
}

void DiagnosticsWriter::write(const DiagnosticsRow& row) {
  out_ << format_row(row) << '\n';
  out_.flush();
  if (!out_) throw IoError("write failed for '" + path_.string() + "'");
}

void write_diagnostics(std::span<const DiagnosticsRow> rows, const std::filesystem::path& path) {
  DiagnosticsWriter w(path);
  for (const auto& r : rows) w.write(r);
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    std::string avail;
    for (const auto& h : header) avail += (avail.empty() ? "" : ", ") + h;
    throw ValidationError("unknown column '" + name + "'; available columns: " + avail);
  }
  const auto k = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[k]);
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_field(const std::string& s, const std::string& origin, std::size_t line) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(origin + ":" + std::to_string(line) + ": not a number: '" + s + "'");
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  CsvTable t;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (n == 1) {
      t.header = split(line, ',');
      continue;
    }
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line, ',');
    if (fields.size() != t.header.size()) {
      throw ParseError(path.string() + ":" + std::to_string(n) + ": expected " +
                       std::to_string(t.header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_field(f, path.string(), n));
    t.rows.push_back(std::move(row));
  }
  if (n == 0) throw ParseError(path.string() + ": empty file");
  return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::filesystem::path write_snapshot(const SimulationState& state, const Grid& grid,
                                     const MotionPreset& preset, const std::filesystem::path& dir,
                                     const std::string& stem) {
  auto matrix = [&](const std::vector<const std::vector<double>*>& rows_of, int rows, int cols) {
    std::string s;
    for (const auto* f : rows_of) {
      for (int j = 0; j < rows; ++j) {
        for (int i = 0; i < cols; ++i) {
          if (i) s += ',';
          s += format_double((*f)[static_cast<std::size_t>(j) * cols + i]);
        }
        s += '\n';
      }
    }
    return s;
  };
  const std::string u_name = stem + "_u.csv";
  const std::string s_name = stem + "_surface.csv";
  write_text(dir / u_name, matrix({&state.u}, grid.ny + 1, grid.nx));
  write_text(dir / s_name, matrix({&state.w, &state.z}, 1, grid.nx));

  json side;
  side["t"] = state.t;
  side["grid"] = {{"Nx", grid.nx}, {"Ny", grid.ny}, {"Px", preset.period}, {"H", preset.height}};
  side["preset"] = {{"kind", to_string(preset.kind)},
                    {"amplitude", preset.amplitude},
                    {"frequency", preset.frequency},
                    {"v_tau", preset.v_tau}};
  side["files"] = {{"u", u_name}, {"surface", s_name}};
  const auto path = dir / (stem + ".json");
  write_text(path, side.dump(2) + "\n");
  return path;
}

Snapshot read_snapshot(const std::filesystem::path& sidecar) {
  const json doc = parse_json(read_file(sidecar), sidecar.string());
  Section root(doc, "");
  Snapshot snap;
  Section g = root.child("grid");
  snap.preset.period = g.number("Px");
  snap.preset.height = g.number("H");
  const int nx = g.integer("Nx");
  const int ny = g.integer("Ny");
  g.finish();
  Section p = root.child("preset");
  snap.preset.kind = motion_kind_from_string(p.string("kind"));
  snap.preset.amplitude = p.number("amplitude");
  snap.preset.frequency = p.number("frequency");
  snap.preset.v_tau = p.number("v_tau");
  p.finish();
  Section f = root.child("files");
  const std::string u_name = f.string("u");
  const std::string s_name = f.string("surface");
  f.finish();
  const double t = root.number("t");
  root.finish();

  snap.grid = make_grid(nx, ny, snap.preset);
  snap.state = make_state(snap.grid, t);
  const auto dir = sidecar.parent_path();
  auto load = [&](const std::string& name, std::size_t expect_rows) {
    std::ifstream in(dir / name, std::ios::binary);
    if (!in) throw IoError("cannot open '" + (dir / name).string() + "'");
    std::vector<double> values;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      ++n;
      const auto fields = split(line, ',');
      if (fields.size() != static_cast<std::size_t>(nx)) {
        throw ParseError(name + ":" + std::to_string(n) + ": expected " + std::to_string(nx) +
                         " values");
      }
      for (const auto& s : fields) values.push_back(parse_field(s, name, n));
    }
    if (n != expect_rows) {
      throw ParseError(name + ": expected " + std::to_string(expect_rows) + " rows, got " +
                       std::to_string(n));
    }
    return values;
  };
  snap.state.u = load(u_name, static_cast<std::size_t>(ny) + 1);
  const auto surf = load(s_name, 2);
  snap.state.w.assign(surf.begin(), surf.begin() + nx);
  snap.state.z.assign(surf.begin() + nx, surf.end());
  validate(snap.state, snap.grid);
  return snap;
}

namespace {

std::string fmt_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string render_plot(const CsvTable& table, std::span<const std::string> columns,
                        AxisScale scale) {
  if (columns.empty()) throw ValidationError("no columns requested");
  const auto t = table.column("t");
  std::vector<std::vector<double>> ys;
  for (const auto& c : columns) ys.push_back(table.column(c));
  if (table.rows.empty()) throw ValidationError("no data rows");

  bool log_y = scale == AxisScale::log;
  if (scale == AxisScale::automatic) {
    log_y = std::find(columns.begin(), columns.end(), "E_rel") != columns.end();
  }
  auto usable = [&](double v) { return std::isfinite(v) && (!log_y || v > 0.0); };
  auto map_y = [&](double v) { return log_y ? std::log10(v) : v; };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    for (const auto& y : ys) {
      if (!std::isfinite(t[k]) || !usable(y[k])) continue;
      x0 = std::min(x0, t[k]);
      x1 = std::max(x1, t[k]);
      y0 = std::min(y0, map_y(y[k]));
      y1 = std::max(y1, map_y(y[k]));
    }
  }
  if (!std::isfinite(x0)) {
    throw ValidationError(log_y ? "no positive finite values to plot on a log axis"
                                : "no finite values to plot");
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) {
    const double pad = std::max(std::abs(y0) * 0.05, 0.5);
    y0 -= pad;
    y1 += pad;
  }

  constexpr double W = 720, H = 440, L = 80, R = 160, T = 30, B = 50;
  const double pw = W - L - R, ph = H - T - B;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return T + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  constexpr int kTicks = 5;
  for (int k = 0; k <= kTicks; ++k) {
    const double xv = x0 + (x1 - x0) * k / kTicks;
    const double yv = y0 + (y1 - y0) * k / kTicks;
    os << "<line x1=\"" << fmt_coord(px(xv)) << "\" y1=\"" << fmt_coord(T + ph) << "\" x2=\""
       << fmt_coord(px(xv)) << "\" y2=\"" << fmt_coord(T + ph + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fmt_coord(px(xv)) << "\" y=\"" << fmt_coord(T + ph + 20)
       << "\" text-anchor=\"middle\">" << fmt_tick(xv) << "</text>\n";
    os << "<line x1=\"" << fmt_coord(L - 5) << "\" y1=\"" << fmt_coord(py(yv)) << "\" x2=\""
       << fmt_coord(L) << "\" y2=\"" << fmt_coord(py(yv)) << "\" stroke=\"black\"/>\n";
    const std::string label = log_y ? "1e" + fmt_tick(yv) : fmt_tick(yv);
    os << "<text x=\"" << fmt_coord(L - 8) << "\" y=\"" << fmt_coord(py(yv) + 4)
       << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  os << "<text x=\"" << fmt_coord(L + pw / 2) << "\" y=\"" << fmt_coord(H - 10)
     << "\" text-anchor=\"middle\">t</text>\n";
  if (log_y) {
    os << "<text x=\"" << fmt_coord(L) << "\" y=\"" << fmt_coord(T - 10)
       << "\">log scale</text>\n";
  }

  for (std::size_t c = 0; c < ys.size(); ++c) {
    const char* color = kPalette[c % std::size(kPalette)];
    std::string points;
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (!std::isfinite(t[k]) || !usable(ys[c][k])) continue;
      if (!points.empty()) points += ' ';
      points += fmt_coord(px(t[k])) + "," + fmt_coord(py(map_y(ys[c][k])));
    }
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
       << points << "\"/>\n";
    const double ly = T + 10 + 18.0 * static_cast<double>(c);
    os << "<line x1=\"" << fmt_coord(L + pw + 15) << "\" y1=\"" << fmt_coord(ly) << "\" x2=\""
       << fmt_coord(L + pw + 40) << "\" y2=\"" << fmt_coord(ly) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fmt_coord(L + pw + 46) << "\" y=\"" << fmt_coord(ly + 4) << "\">"
       << xml_escape(columns[c]) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_plot(const std::filesystem::path& csv, std::span<const std::string> columns,
               const std::filesystem::path& out, AxisScale scale) {
  const CsvTable table = read_csv(csv);
  write_text(out, render_plot(table, columns, scale));
}

}  // namespace bsrd
