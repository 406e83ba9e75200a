#include "phc/spectrum_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "phc/error.hpp"
#include "phc/format.hpp"

namespace phc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Splits "a,b" rows; skips blank lines and '#' comments (returned through `comments`).
std::vector<std::pair<std::string, std::string>> two_column_rows(const std::string& text, const std::string& header,
                                                                 std::vector<std::string>& comments) {
  std::istringstream in(text);
  std::string line;
  bool seen_header = false;
  std::vector<std::pair<std::string, std::string>> rows;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      comments.push_back(trim(line.substr(1)));
      continue;
    }
    if (!seen_header) {
      if (line != header) throw IoError("expected header '" + header + "', got '" + line + "'");
      seen_header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw IoError("line " + std::to_string(line_no) + ": expected two comma-separated values");
    }
    rows.emplace_back(trim(line.substr(0, comma)), trim(line.substr(comma + 1)));
  }
  if (!seen_header) throw IoError("missing header '" + header + "'");
  if (rows.empty()) throw IoError("no data rows");
  return rows;
}

}  // namespace

std::string spectrum_to_csv(const Spectrum& s) {
  validate(s);
  std::string out = s.kind == AxisKind::Frequency_GHz ? "# axis_kind: GHz\n" : "# axis_kind: nm\n";
  out += "axis,value\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += format_double(s.axis[i]) + "," + format_double(s.counts[i]) + "\n";
  }
  return out;
}

Spectrum spectrum_from_csv(const std::string& text) {
  std::vector<std::string> comments;
  const auto rows = two_column_rows(text, "axis,value", comments);
  Spectrum s;
  bool kind_seen = false;
  for (const auto& c : comments) {
    if (c.rfind("axis_kind:", 0) != 0) continue;
    const std::string kind = trim(c.substr(10));
    if (kind == "nm") {
      s.kind = AxisKind::Wavelength_nm;
    } else if (kind == "GHz") {
      s.kind = AxisKind::Frequency_GHz;
    } else {
      throw IoError("unknown axis_kind '" + kind + "' (expected nm or GHz)");
    }
    kind_seen = true;
  }
  if (!kind_seen) throw IoError("missing '# axis_kind: nm|GHz' comment");
  for (const auto& [a, v] : rows) {
    s.axis.push_back(parse_double(a));
    s.counts.push_back(parse_double(v));
  }
  validate(s);
  return s;
}

std::string histogram_to_csv(const TimeTrace& h) {
  if (h.unit != TimeUnit::Nanoseconds) throw DomainError("histogram CSV is in nanoseconds");
  std::string out = "t_ns,counts\n";
  for (std::size_t k = 0; k < h.size(); ++k) out += format_double(h.time(k)) + "," + format_double(h.values[k]) + "\n";
  return out;
}

TimeTrace histogram_from_csv(const std::string& text) {
  std::vector<std::string> comments;
  const auto rows = two_column_rows(text, "t_ns,counts", comments);
  if (rows.size() < 2) throw IoError("histogram needs at least two bins");
  std::vector<double> t;
  TimeTrace h;
  h.unit = TimeUnit::Nanoseconds;
  for (const auto& [a, v] : rows) {
    t.push_back(parse_double(a));
    h.values.push_back(parse_double(v));
  }
  h.t0 = t.front();
  h.dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(h.dt > 0.0)) throw DomainError("histogram times must increase");
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (std::abs(t[k] - h.time(k)) > 1e-6 * h.dt) throw DomainError("histogram bins are not uniformly spaced");
    if (!(h.values[k] >= 0.0)) throw DomainError("histogram counts must be non-negative");
  }
  return h;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace phc
