#ifndef KERRMZI_SCENARIO_HPP
#define KERRMZI_SCENARIO_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kerrmzi/metrology.hpp"
#include "kerrmzi/version.hpp"
#include "kerrmzi/witnesses.hpp"

namespace kerrmzi {

enum class SweepAxis { Phi, Chi, Nbar, EtaDet, EtaLoss };

inline const char* sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Phi: return "phi";
    case SweepAxis::Chi: return "chi";
    case SweepAxis::Nbar: return "nbar";
    case SweepAxis::EtaDet: return "eta_det";
    case SweepAxis::EtaLoss: return "eta_loss";
  }
  return "?";
}

/// One figure-style computation: an input, one or both Kerr kinds, a single
/// sweep axis, and a set of observable columns.
struct Scenario {
  std::string name;
  InputSpec input;
  std::vector<KerrKind> kinds;
  double chi = pi / 2.0;
  double phi = 0.0;
  double eta_det = 1.0;
  double eta_loss = 0.0;
  SweepAxis axis = SweepAxis::Phi;
  double sweep_min = 0.0;
  double sweep_max = 0.0;
  int sweep_points = 0;
  std::vector<std::string> columns;
};

// ---------------------------------------------------------------------------
// Config text parsing: flat "key = value" lines, '#' comments. Angles accept
// fractions of pi ("pi/2", "2pi/3", "-pi", "0.4").
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline double parse_plain_number(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t.empty())
    throw ConfigError(ConfigError::Kind::Parse, key, "key \"" + key + "\": empty number");
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError(ConfigError::Kind::Parse, key,
                      "key \"" + key + "\": cannot parse number \"" + t + "\"");
  return value;
}

inline double parse_angle(const std::string& text, const std::string& key) {
  std::string t = trim(text);
  const auto pos = t.find("pi");
  if (pos == std::string::npos) return parse_plain_number(t, key);
  std::string prefix = trim(t.substr(0, pos));
  std::string suffix = trim(t.substr(pos + 2));
  double value = 1.0;
  if (prefix == "-") {
    value = -1.0;
  } else if (!prefix.empty()) {
    if (!prefix.empty() && prefix.back() == '*') prefix = trim(prefix.substr(0, prefix.size() - 1));
    value = parse_plain_number(prefix, key);
  }
  value *= pi;
  if (!suffix.empty()) {
    if (suffix.front() != '/')
      throw ConfigError(ConfigError::Kind::Parse, key,
                        "key \"" + key + "\": cannot parse angle \"" + t + "\"");
    const double denom = parse_plain_number(suffix.substr(1), key);
    if (denom == 0.0)
      throw ConfigError(ConfigError::Kind::Parse, key, "key \"" + key + "\": division by zero");
    value /= denom;
  }
  return value;
}

inline int parse_integer(const std::string& text, const std::string& key) {
  const double v = parse_plain_number(text, key);
  const int i = int(std::llround(v));
  if (std::abs(v - i) > 1e-9)
    throw ConfigError(ConfigError::Kind::Parse, key, "key \"" + key + "\": expected an integer");
  return i;
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(ConfigError::Kind::Parse, "line " + std::to_string(line_no),
                        "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(ConfigError::Kind::Parse, key.empty() ? "line " + std::to_string(line_no) : key,
                        "line " + std::to_string(line_no) + ": empty key or value");
    if (kv.count(key))
      throw ConfigError(ConfigError::Kind::Parse, key, "duplicate key \"" + key + "\"");
    kv[key] = value;
  }
  if (kv.empty())
    throw ConfigError(ConfigError::Kind::Parse, "file", "empty configuration");

  auto take = [&kv](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto require = [&take](const std::string& key) -> std::string {
    auto v = take(key);
    if (!v)
      throw ConfigError(ConfigError::Kind::Parse, key, "missing required key \"" + key + "\"");
    return *v;
  };

  Scenario s;
  s.name = require("name");
  for (char c : s.name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
      throw ConfigError(ConfigError::Kind::Domain, "name",
                        "key \"name\": only [A-Za-z0-9_-] allowed");

  const std::string input_kind = require("input");
  double tail = 1e-10;
  if (auto v = take("tail_tolerance")) tail = detail::parse_plain_number(*v, "tail_tolerance");
  if (!(tail > 0.0 && tail < 1.0))
    throw ConfigError(ConfigError::Kind::Domain, "tail_tolerance",
                      "key \"tail_tolerance\": must lie in (0,1)");
  if (input_kind == "number") {
    s.input = InputSpec::number(detail::parse_integer(require("n"), "n"));
    if (s.input.n < 0)
      throw ConfigError(ConfigError::Kind::Domain, "n", "key \"n\": must be >= 0");
  } else if (input_kind == "coherent" || input_kind == "thermal") {
    const double nbar = detail::parse_plain_number(require("nbar"), "nbar");
    if (nbar < 0.0)
      throw ConfigError(ConfigError::Kind::Domain, "nbar", "key \"nbar\": must be >= 0");
    s.input = input_kind == "coherent" ? InputSpec::coherent(nbar) : InputSpec::thermal(nbar);
  } else {
    throw ConfigError(ConfigError::Kind::Parse, "input",
                      "key \"input\": expected number|coherent|thermal");
  }
  s.input.tail_tolerance = tail;

  const std::string kind = require("kind");
  if (kind == "SK") {
    s.kinds = {KerrKind::SelfKerr};
  } else if (kind == "CK") {
    s.kinds = {KerrKind::CrossKerr};
  } else if (kind == "both") {
    s.kinds = {KerrKind::SelfKerr, KerrKind::CrossKerr};
  } else {
    throw ConfigError(ConfigError::Kind::Parse, "kind", "key \"kind\": expected SK|CK|both");
  }

  if (auto v = take("chi")) s.chi = detail::parse_angle(*v, "chi");
  if (auto v = take("phi")) s.phi = detail::parse_angle(*v, "phi");
  if (auto v = take("eta_det")) s.eta_det = detail::parse_plain_number(*v, "eta_det");
  if (auto v = take("eta_loss")) s.eta_loss = detail::parse_plain_number(*v, "eta_loss");
  if (s.eta_det < 0.0 || s.eta_det > 1.0)
    throw ConfigError(ConfigError::Kind::Domain, "eta_det", "key \"eta_det\": must lie in [0,1]");
  if (s.eta_loss < 0.0 || s.eta_loss > 1.0)
    throw ConfigError(ConfigError::Kind::Domain, "eta_loss", "key \"eta_loss\": must lie in [0,1]");
  if (!std::isfinite(s.chi) || !std::isfinite(s.phi))
    throw ConfigError(ConfigError::Kind::Domain, "chi", "angles must be finite");

  const std::string axis = require("sweep");
  if (axis == "phi") s.axis = SweepAxis::Phi;
  else if (axis == "chi") s.axis = SweepAxis::Chi;
  else if (axis == "nbar") s.axis = SweepAxis::Nbar;
  else if (axis == "eta_det") s.axis = SweepAxis::EtaDet;
  else if (axis == "eta_loss") s.axis = SweepAxis::EtaLoss;
  else
    throw ConfigError(ConfigError::Kind::Parse, "sweep",
                      "key \"sweep\": expected phi|chi|nbar|eta_det|eta_loss");

  const bool angle_axis = s.axis == SweepAxis::Phi || s.axis == SweepAxis::Chi;
  s.sweep_min = angle_axis ? detail::parse_angle(require("sweep_min"), "sweep_min")
                           : detail::parse_plain_number(require("sweep_min"), "sweep_min");
  s.sweep_max = angle_axis ? detail::parse_angle(require("sweep_max"), "sweep_max")
                           : detail::parse_plain_number(require("sweep_max"), "sweep_max");
  s.sweep_points = detail::parse_integer(require("sweep_points"), "sweep_points");
  if (s.sweep_points < 2)
    throw ConfigError(ConfigError::Kind::Domain, "sweep_points",
                      "key \"sweep_points\": need at least 2 points");
  if (!(s.sweep_max > s.sweep_min))
    throw ConfigError(ConfigError::Kind::Domain, "sweep_max",
                      "key \"sweep_max\": must exceed sweep_min");
  if (s.axis == SweepAxis::EtaDet || s.axis == SweepAxis::EtaLoss) {
    if (s.sweep_min < 0.0 || s.sweep_max > 1.0)
      throw ConfigError(ConfigError::Kind::Domain, "sweep_min",
                        "key \"sweep_min\"/\"sweep_max\": efficiency sweep outside [0,1]");
  }
  if (s.axis == SweepAxis::Nbar && s.sweep_min < 0.0)
    throw ConfigError(ConfigError::Kind::Domain, "sweep_min", "key \"sweep_min\": nbar >= 0");
  if (s.axis == SweepAxis::Nbar && s.input.kind == InputKind::Number)
    throw ConfigError(ConfigError::Kind::Domain, "sweep",
                      "key \"sweep\": nbar sweep needs coherent or thermal input");

  s.columns = detail::split_list(require("columns"));
  if (s.columns.empty())
    throw ConfigError(ConfigError::Kind::Parse, "columns", "key \"columns\": empty list");

  if (!kv.empty())
    throw ConfigError(ConfigError::Kind::Parse, kv.begin()->first,
                      "unknown key \"" + kv.begin()->first + "\"");
  return s;
}

// ---------------------------------------------------------------------------
// Columns
// ---------------------------------------------------------------------------

namespace detail {

struct ColumnInfo {
  bool per_kind;       // expands to _sk/_ck when kind = both
  bool needs_phi_axis; // only defined along a phi sweep
};

inline const std::map<std::string, ColumnInfo>& column_registry() {
  static const std::map<std::string, ColumnInfo> registry = {
      {"parity", {true, false}},       {"dphi", {true, false}},
      {"f_single", {true, true}},      {"f_difference", {true, true}},
      {"f_joint", {true, true}},       {"f_parity", {true, true}},
      {"qfi", {true, false}},          {"dphi_min", {true, false}},
      {"ehz", {true, false}},          {"esv", {true, false}},
      {"g2a", {true, false}},          {"g2b", {true, false}},
      {"sql", {false, false}},         {"hl", {false, false}},
      {"f_sql", {false, false}},       {"f_hl", {false, false}},
      {"deficit", {false, false}},
  };
  return registry;
}

inline std::string kind_suffix(KerrKind k) {
  return k == KerrKind::SelfKerr ? "_sk" : "_ck";
}

/// Deterministic, locale-independent number formatting (12 significant
/// digits); infinities render as "inf".
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 12);
  return std::string(buf.data(), ptr);
}

}  // namespace detail

inline void validate_columns(const Scenario& s) {
  for (const std::string& c : s.columns) {
    auto it = detail::column_registry().find(c);
    if (it == detail::column_registry().end())
      throw ConfigError(ConfigError::Kind::Parse, "columns", "unknown column \"" + c + "\"");
    if (it->second.needs_phi_axis && s.axis != SweepAxis::Phi)
      throw ConfigError(ConfigError::Kind::Domain, "columns",
                        "column \"" + c + "\" needs sweep = phi");
  }
}

struct ValidationReport {
  int n_max = 0;
  int sector_count = 0;
  double truncation_deficit = 0.0;
  std::size_t state_bytes = 0;  // dense-block worst case for one density
  std::vector<std::string> header;
};

inline std::vector<std::string> expanded_header(const Scenario& s) {
  std::vector<std::string> header;
  header.push_back(s.axis == SweepAxis::Phi    ? "phi_rad"
                   : s.axis == SweepAxis::Chi  ? "chi_rad"
                                               : sweep_axis_name(s.axis));
  for (const std::string& c : s.columns) {
    const auto& info = detail::column_registry().at(c);
    if (info.per_kind && s.kinds.size() > 1) {
      for (KerrKind k : s.kinds) header.push_back(c + detail::kind_suffix(k));
    } else {
      header.push_back(c);
    }
  }
  return header;
}

inline ValidationReport validate_scenario(const Scenario& s) {
  validate_columns(s);
  ValidationReport report;
  InputSpec probe = s.input;
  if (s.axis == SweepAxis::Nbar) probe.nbar = std::max(s.sweep_min, s.sweep_max);
  report.n_max = required_cutoff(probe);
  report.sector_count = report.n_max + 1;
  std::size_t coeffs = 0;
  for (int n = 0; n <= report.n_max; ++n) coeffs += std::size_t(n + 1) * (n + 1);
  report.state_bytes = coeffs * sizeof(Complex);
  const std::vector<double> weights = number_distribution(probe, report.n_max);
  double mass = 0.0;
  for (double w : weights) mass += w;
  report.truncation_deficit = std::max(0.0, 1.0 - mass);
  report.header = expanded_header(s);
  return report;
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

namespace detail {

struct KindSlice {
  KerrKind kind;
  // phi-sweep state, built once
  std::optional<PhaseScanEngine> engine;
  double qfi_value = 0.0;
  MomentSet witness_moments;
  bool has_witness = false;
};

inline double witness_column(const std::string& id, const MomentSet& m) {
  if (id == "ehz") return hillery_zubairy(m);
  if (id == "esv") return shchukin_vogel(m);
  if (id == "g2a") return g2_zero(m, ModeSelector::ModeA);
  return g2_zero(m, ModeSelector::ModeB);
}

}  // namespace detail

struct RunResult {
  std::filesystem::path csv_path;
  std::filesystem::path json_path;
  int rows = 0;
};

/// Executes the sweep and writes <name>.csv plus a <name>.json summary into
/// out_dir. Output is byte-identical across runs and worker counts: rows are
/// stored by sweep index and formatting is locale-independent.
inline RunResult run_scenario(const Scenario& s, const std::filesystem::path& out_dir,
                              int workers = 1) {
  validate_columns(s);
  const int points = s.sweep_points;
  std::vector<double> sweep(points);
  for (int i = 0; i < points; ++i)
    sweep[i] = s.sweep_min + (s.sweep_max - s.sweep_min) * i / double(points - 1);

  const std::vector<std::string> header = expanded_header(s);
  std::vector<std::vector<double>> rows(points);

  // Anything that does not change along the sweep is computed once per kind.
  const bool phi_axis = s.axis == SweepAxis::Phi;
  std::vector<detail::KindSlice> slices;
  auto circuit_for = [&s](KerrKind kind) {
    CircuitSpec c;
    c.kind = kind;
    c.chi = s.chi;
    c.phi = s.phi;
    c.eta_loss = s.eta_loss;
    return c;
  };
  auto needs = [&s](std::initializer_list<const char*> ids) {
    for (const char* id : ids)
      if (std::find(s.columns.begin(), s.columns.end(), id) != s.columns.end()) return true;
    return false;
  };

  if (phi_axis) {
    SectorDensity input_density = build_input(s.input);
    precompute_beamsplitters(input_density.n_max);
    for (KerrKind kind : s.kinds) {
      detail::KindSlice slice;
      slice.kind = kind;
      slice.engine.emplace(input_density, circuit_for(kind), DetectorModel{s.eta_det});
      if (needs({"qfi", "dphi_min"})) slice.qfi_value = qfi(s.input, circuit_for(kind));
      if (needs({"ehz", "esv", "g2a", "g2b"})) {
        slice.witness_moments =
            compute_moments(state_after_second_bs(input_density, circuit_for(kind)));
        slice.has_witness = true;
      }
      slices.push_back(std::move(slice));
    }
  }

  parallel_for(std::size_t(points), workers, [&](std::size_t i) {
    const double value = sweep[i];
    std::vector<double> row;
    row.push_back(value);

    // Per-point configuration under the sweep axis.
    Scenario point = s;
    switch (s.axis) {
      case SweepAxis::Phi: point.phi = value; break;
      case SweepAxis::Chi: point.chi = value; break;
      case SweepAxis::Nbar: point.input.nbar = value; break;
      case SweepAxis::EtaDet: point.eta_det = value; break;
      case SweepAxis::EtaLoss: point.eta_loss = value; break;
    }
    auto point_circuit = [&point](KerrKind kind) {
      CircuitSpec c;
      c.kind = kind;
      c.chi = point.chi;
      c.phi = point.phi;
      c.eta_loss = point.eta_loss;
      return c;
    };

    struct KindValues {
      std::map<std::string, double> v;
    };
    std::vector<KindValues> per_kind(s.kinds.size());

    for (std::size_t ki = 0; ki < s.kinds.size(); ++ki) {
      const KerrKind kind = s.kinds[ki];
      auto& out = per_kind[ki].v;

      RealMatrix p, dp;
      bool have_tables = false;
      auto tables = [&]() -> void {
        if (have_tables) return;
        if (phi_axis) {
          slices[ki].engine->tables_at(point.phi, p, dp);
        } else {
          PhaseScanEngine engine(build_input(point.input), point_circuit(kind),
                                 DetectorModel{point.eta_det});
          engine.tables_at(point.phi, p, dp);
        }
        have_tables = true;
      };

      for (const std::string& id : s.columns) {
        if (!detail::column_registry().at(id).per_kind) continue;
        if (id == "parity" || id == "dphi") {
          tables();
          double parity = 0.0, slope = 0.0;
          const int n = int(p.rows()) - 1;
          for (int a = 0; a <= n; ++a)
            for (int b = 0; b <= n; ++b) {
              const double sign = b % 2 == 0 ? 1.0 : -1.0;
              parity += sign * p(a, b);
              slope += sign * dp(a, b);
            }
          parity = std::clamp(parity, -1.0, 1.0);
          out["parity"] = parity;
          out["dphi"] = phase_error_from_parity(parity, slope);
        } else if (id == "f_single" || id == "f_difference" || id == "f_joint" ||
                   id == "f_parity") {
          tables();
          if (id == "f_joint") out[id] = classical_fisher(p, dp);
          if (id == "f_single")
            out[id] = classical_fisher(detail::marginal_vector(p, ModeSelector::ModeA),
                                       detail::marginal_vector(dp, ModeSelector::ModeA));
          if (id == "f_difference")
            out[id] = classical_fisher(detail::difference_vector(p),
                                       detail::difference_vector(dp));
          if (id == "f_parity")
            out[id] = classical_fisher(detail::parity_pair(p, ModeSelector::ModeB),
                                       detail::parity_pair(dp, ModeSelector::ModeB));
        } else if (id == "qfi" || id == "dphi_min") {
          double f;
          if (phi_axis) {
            f = slices[ki].qfi_value;
          } else {
            f = qfi(point.input, point_circuit(kind));
          }
          if (id == "qfi") out["qfi"] = f;
          else out["dphi_min"] = f > 0.0 ? 1.0 / std::sqrt(f) : infinite_phase_error;
        } else if (id == "ehz" || id == "esv" || id == "g2a" || id == "g2b") {
          if (phi_axis && slices[ki].has_witness) {
            out[id] = detail::witness_column(id, slices[ki].witness_moments);
          } else {
            MomentSet m = compute_moments(
                state_after_second_bs(build_input(point.input), point_circuit(kind)));
            out[id] = detail::witness_column(id, m);
          }
        }
      }
    }

    double deficit = 0.0;
    if (std::find(s.columns.begin(), s.columns.end(), "deficit") != s.columns.end()) {
      const int n_max = required_cutoff(point.input);
      const std::vector<double> w = number_distribution(point.input, n_max);
      double mass = 0.0;
      for (double x : w) mass += x;
      deficit = std::max(0.0, 1.0 - mass);
    }

    for (const std::string& id : s.columns) {
      const auto& info = detail::column_registry().at(id);
      if (info.per_kind) {
        for (std::size_t ki = 0; ki < s.kinds.size(); ++ki)
          row.push_back(per_kind[ki].v.at(id));
      } else if (id == "sql") {
        row.push_back(sql_phase_error(point.input.nbar));
      } else if (id == "hl") {
        row.push_back(hl_phase_error(point.input.nbar));
      } else if (id == "f_sql") {
        row.push_back(point.input.nbar);
      } else if (id == "f_hl") {
        row.push_back(point.input.nbar * point.input.nbar);
      } else if (id == "deficit") {
        row.push_back(deficit);
      }
    }
    rows[i] = std::move(row);
  });

  std::filesystem::create_directories(out_dir);
  RunResult result;
  result.rows = points;
  result.csv_path = out_dir / (s.name + ".csv");
  result.json_path = out_dir / (s.name + ".json");

  std::ofstream csv(result.csv_path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + result.csv_path.string());
  for (std::size_t c = 0; c < header.size(); ++c)
    csv << (c ? "," : "") << header[c];
  csv << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      csv << (c ? "," : "") << detail::format_double(row[c]);
    csv << "\n";
  }
  csv.close();

  const ValidationReport report = validate_scenario(s);
  nlohmann::ordered_json summary;
  summary["name"] = s.name;
  summary["version"] = version_string;
  summary["input"] = {{"kind", s.input.kind == InputKind::Number     ? "number"
                               : s.input.kind == InputKind::Coherent ? "coherent"
                                                                     : "thermal"},
                      {"n", s.input.n},
                      {"nbar", s.input.nbar},
                      {"tail_tolerance", s.input.tail_tolerance}};
  std::vector<std::string> kind_names;
  for (KerrKind k : s.kinds) kind_names.push_back(kerr_kind_name(k));
  summary["circuit"] = {{"kinds", kind_names},
                        {"chi", s.chi},
                        {"phi", s.phi},
                        {"eta_det", s.eta_det},
                        {"eta_loss", s.eta_loss}};
  summary["sweep"] = {{"axis", sweep_axis_name(s.axis)},
                      {"min", s.sweep_min},
                      {"max", s.sweep_max},
                      {"points", s.sweep_points}};
  summary["resolved"] = {{"n_max", report.n_max},
                         {"sector_count", report.sector_count},
                         {"truncation_deficit", report.truncation_deficit},
                         {"state_bytes_estimate", report.state_bytes},
                         {"columns", header}};
  summary["outputs"] = {{"csv", result.csv_path.filename().string()}, {"rows", points}};

  std::ofstream json_out(result.json_path, std::ios::binary);
  if (!json_out) throw std::runtime_error("cannot write " + result.json_path.string());
  json_out << summary.dump(2) << "\n";
  return result;
}

inline Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError(ConfigError::Kind::Parse, "file",
                      "cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

// ---------------------------------------------------------------------------
// Bundled presets reproducing the reference datasets
// ---------------------------------------------------------------------------

inline const std::vector<std::pair<std::string, std::string>>& preset_table() {
  static const std::vector<std::pair<std::string, std::string>> presets = {
      {"fig1b",
       "# Parity phase error vs phi, thermal input, strong Kerr\n"
       "name = fig1b\ninput = thermal\nnbar = 5\nkind = both\nchi = pi/2\n"
       "eta_det = 1\nsweep = phi\nsweep_min = 0\nsweep_max = 2pi\nsweep_points = 721\n"
       "columns = parity,dphi\n"},
      {"fig1c",
       "# Minimal phase error 1/sqrt(QFI) vs nbar at weak nonlinearity\n"
       "name = fig1c\ninput = thermal\nnbar = 1\nkind = both\nchi = pi/10\n"
       "sweep = nbar\nsweep_min = 0.5\nsweep_max = 5\nsweep_points = 19\n"
       "columns = dphi_min,sql,hl\n"},
      {"fig2",
       "# Fisher information vs phi, thermal input, eta_det = 0.95\n"
       "name = fig2\ninput = thermal\nnbar = 5\nkind = SK\nchi = pi/2\n"
       "eta_det = 0.95\nsweep = phi\nsweep_min = 0\nsweep_max = pi\nsweep_points = 721\n"
       "columns = f_single,f_difference,f_joint,qfi,f_sql,f_hl\n"},
      {"fig3a",
       "# Minimal phase error vs arm loss, thermal nbar = 10\n"
       "name = fig3a\ninput = thermal\nnbar = 10\nkind = both\nchi = pi/2\n"
       "sweep = eta_loss\nsweep_min = 0\nsweep_max = 0.5\nsweep_points = 11\n"
       "columns = dphi_min,sql,hl\n"},
      {"fig3b",
       "# Entanglement witnesses after the second beamsplitter vs chi\n"
       "name = fig3b\ninput = thermal\nnbar = 5\nkind = both\n"
       "sweep = chi\nsweep_min = 0\nsweep_max = pi\nsweep_points = 33\n"
       "columns = ehz,esv\n"},
      {"fig3c",
       "# Second-order coherence of mode a after the second beamsplitter\n"
       "name = fig3c\ninput = thermal\nnbar = 5\nkind = both\n"
       "sweep = chi\nsweep_min = 0\nsweep_max = pi\nsweep_points = 33\n"
       "columns = g2a\n"},
      {"figS2",
       "# Fisher information vs phi, coherent input, near-ideal detectors\n"
       "name = figS2\ninput = coherent\nnbar = 5\nkind = SK\nchi = pi/2\n"
       "eta_det = 0.999\nsweep = phi\nsweep_min = 0\nsweep_max = pi\nsweep_points = 721\n"
       "columns = f_single,f_difference,f_joint,qfi,f_sql,f_hl\n"},
      {"figS3",
       "# Fisher information vs phi, thermal input, eta_det = 0.9\n"
       "name = figS3\ninput = thermal\nnbar = 5\nkind = SK\nchi = pi/2\n"
       "eta_det = 0.9\nsweep = phi\nsweep_min = 0\nsweep_max = pi\nsweep_points = 721\n"
       "columns = f_single,f_difference,f_joint,qfi,f_sql,f_hl\n"},
      {"figS4",
       "# Parity-measurement Fisher information vs phi\n"
       "name = figS4\ninput = thermal\nnbar = 5\nkind = both\nchi = pi/2\n"
       "eta_det = 0.999\nsweep = phi\nsweep_min = 0\nsweep_max = pi\nsweep_points = 721\n"
       "columns = f_parity,qfi,f_sql,f_hl\n"},
  };
  return presets;
}

inline std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : preset_table()) names.push_back(name);
  return names;
}

inline std::optional<std::string> preset_text(const std::string& name) {
  for (const auto& [n, text] : preset_table())
    if (n == name) return text;
  return std::nullopt;
}

}  // namespace kerrmzi

#endif
