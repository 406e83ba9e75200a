#include "phc/field_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "phc/error.hpp"
#include "phc/format.hpp"

namespace phc {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int k = 0; k < 4; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xFFu);
  out.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  if (!in) throw IoError("FSNP: truncated header");
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  std::array<char, 8> b{};
  for (int k = 0; k < 8; ++k) b[k] = static_cast<char>((bits >> (8 * k)) & 0xFFu);
  out.write(b.data(), 8);
}

double get_f64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), 8);
  if (!in) throw IoError("FSNP: truncated payload");
  std::uint64_t bits = 0;
  for (int k = 7; k >= 0; --k) bits = (bits << 8) | b[k];
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_raster(std::ostream& out, const Raster& values, Component component) {
  out.write("FSNP", 4);
  put_u32(out, static_cast<std::uint32_t>(values.cols()));
  put_u32(out, static_cast<std::uint32_t>(values.rows()));
  put_u32(out, static_cast<std::uint32_t>(component));
  for (Eigen::Index j = 0; j < values.rows(); ++j) {
    for (Eigen::Index i = 0; i < values.cols(); ++i) put_f64(out, values(j, i));
  }
  if (!out) throw IoError("FSNP: write failed");
}

FieldSnapshot read_raster(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "FSNP", 4) != 0) throw IoError("FSNP: bad magic");
  const std::uint32_t nx = get_u32(in);
  const std::uint32_t ny = get_u32(in);
  const std::uint32_t comp = get_u32(in);
  if (comp > static_cast<std::uint32_t>(Component::EIntensity)) throw IoError("FSNP: unknown component id");
  FieldSnapshot snap;
  snap.component = static_cast<Component>(comp);
  snap.values.resize(ny, nx);
  for (std::uint32_t j = 0; j < ny; ++j) {
    for (std::uint32_t i = 0; i < nx; ++i) snap.values(j, i) = get_f64(in);
  }
  return snap;
}

void write_snapshot(const std::string& path, const FieldSnapshot& snapshot) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path);
  write_raster(out, snapshot.values, snapshot.component);
}

void write_eps(const std::string& path, const Grid2D& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path);
  write_raster(out, grid.eps, Component::Eps);
}

FieldSnapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_raster(in);
}

std::string trace_to_csv(const TimeTrace& trace) {
  const double scale = trace.unit == TimeUnit::Femtoseconds ? 1.0 : 1e6;
  std::string out = "step,time_fs,value\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out += std::to_string(k);
    out += ',';
    out += format_double(trace.time(k) * scale);
    out += ',';
    out += format_double(trace.values[k]);
    out += '\n';
  }
  return out;
}

TimeTrace trace_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("step,time_fs,value", 0) != 0) {
    throw IoError("trace CSV: expected header step,time_fs,value");
  }
  std::vector<double> times;
  TimeTrace tr;
  tr.unit = TimeUnit::Femtoseconds;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string step, t, v;
    if (!std::getline(row, step, ',') || !std::getline(row, t, ',') || !std::getline(row, v)) {
      throw IoError("trace CSV: malformed row '" + line + "'");
    }
    times.push_back(parse_double(t));
    tr.values.push_back(parse_double(v));
  }
  if (times.size() < 2) throw IoError("trace CSV: need at least two samples");
  tr.t0 = times.front();
  tr.dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  return tr;
}

}  // namespace phc
