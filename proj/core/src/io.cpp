#include "pushbutton/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pushbutton/error.hpp"

namespace pushbutton {

std::string format_number(double x) {
  if (x == 0.0) return "0";  // folds -0
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    cells.push_back(cell);
  }
  return cells;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("not a number: '" + s + "'");
  }
  return v;
}

template <typename Row>
void read_rows(std::istream& is, std::string_view header, Row&& row) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw ConfigError("unexpected CSV header '" + line + "', want '" + std::string(header) + "'");
  const std::size_t columns = split_csv_line(line).size();
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (cells.size() != columns) {
      throw ConfigError("CSV line " + std::to_string(lineno) + ": expected " +
                        std::to_string(columns) + " columns");
    }
    row(cells);
  }
}

void put_u32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_bytes(std::istream& is, int n) {
  unsigned char b[8] = {};
  if (!is.read(reinterpret_cast<char*>(b), n)) throw ConfigError("truncated field file");
  std::uint64_t v = 0;
  for (int i = n - 1; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get_bytes(is, 8)); }

constexpr char kMagic[4] = {'P', 'B', 'F', 'G'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
  os << "gap_mm,focal_height_mm,force_mN\n";
  for (std::size_t g = 0; g < sweep.gaps.size(); ++g) {
    for (std::size_t h = 0; h < sweep.focal_heights.size(); ++h) {
      os << format_number(sweep.gaps[g] * 1e3) << ',' << format_number(sweep.focal_heights[h] * 1e3)
         << ',' << format_number(sweep.at(g, h) * 1e3) << '\n';
    }
  }
}

void write_events_csv(std::ostream& os, const std::vector<ButtonEvent>& events) {
  os << "time_s,kind,volts\n";
  for (const auto& e : events) {
    os << format_number(e.time) << ',' << to_string(e.kind) << ',' << format_number(e.voltage) << '\n';
  }
}

void write_commands_csv(std::ostream& os, const std::vector<CommandRecord>& commands) {
  os << "start_s,duration_s,x_mm,y_mm,z_mm\n";
  for (const auto& r : commands) {
    const auto& c = r.command;
    os << format_number(c.start) << ',' << format_number(c.duration) << ','
       << format_number(c.target.x * 1e3) << ',' << format_number(c.target.y * 1e3) << ','
       << format_number(c.target.z * 1e3) << '\n';
  }
}

void write_trace_csv(std::ostream& os, const std::vector<VoltageSample>& trace) {
  os << "time_s,volts\n";
  for (const auto& s : trace) os << format_number(s.time) << ',' << format_number(s.voltage) << '\n';
}

void write_field_csv(std::ostream& os, const FieldGrid& grid) {
  os << "x,y,z,re,im,abs\n";
  for (std::size_t j = 0; j < grid.values.size(); ++j) {
    const Vec3 p = grid.spec.point(j);
    const Complex v = grid.values[j];
    os << format_number(p.x) << ',' << format_number(p.y) << ',' << format_number(p.z) << ','
       << format_number(v.real()) << ',' << format_number(v.imag()) << ','
       << format_number(std::abs(v)) << '\n';
  }
}

std::vector<VoltageSample> read_trace_csv(std::istream& is) {
  std::vector<VoltageSample> out;
  read_rows(is, "time_s,volts", [&](const std::vector<std::string>& c) {
    out.push_back({parse_number(c[1]), parse_number(c[0])});
  });
  return out;
}

std::vector<ButtonEvent> read_events_csv(std::istream& is) {
  std::vector<ButtonEvent> out;
  read_rows(is, "time_s,kind,volts", [&](const std::vector<std::string>& c) {
    const double t = parse_number(c[0]);
    out.push_back({parse_event_kind(c[1]), t, parse_number(c[2]), t});
  });
  return out;
}

void write_field_binary(std::ostream& os, const FieldGrid& grid) {
  os.write(kMagic, 4);
  put_u32(os, kVersion);
  for (auto n : grid.spec.counts) put_u32(os, static_cast<std::uint32_t>(n));
  for (double d : {grid.spec.origin.x, grid.spec.origin.y, grid.spec.origin.z}) put_f64(os, d);
  for (const Vec3& a : grid.spec.axes) {
    put_f64(os, a.x);
    put_f64(os, a.y);
    put_f64(os, a.z);
  }
  for (double s : grid.spec.spacing) put_f64(os, s);
  for (const Complex& v : grid.values) {
    put_f64(os, v.real());
    put_f64(os, v.imag());
  }
}

FieldGrid read_field_binary(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw ConfigError("not a field grid file");
  }
  if (get_bytes(is, 4) != kVersion) throw ConfigError("unsupported field grid version");
  FieldGrid grid;
  for (auto& n : grid.spec.counts) n = get_bytes(is, 4);
  grid.spec.origin = {get_f64(is), get_f64(is), get_f64(is)};
  for (Vec3& a : grid.spec.axes) a = {get_f64(is), get_f64(is), get_f64(is)};
  for (double& s : grid.spec.spacing) s = get_f64(is);
  validate_grid(grid.spec);
  grid.values.resize(grid.spec.size());
  for (Complex& v : grid.values) {
    const double re = get_f64(is);
    v = {re, get_f64(is)};
  }
  return grid;
}

std::vector<VoltageSample> voltage_trace(const SessionLog& log) {
  std::vector<VoltageSample> out;
  out.reserve(log.trace.size());
  for (const auto& s : log.trace) out.push_back({s.voltage, s.time});
  return out;
}

void write_files_atomically(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
  namespace fs = std::filesystem;
  std::vector<fs::path> temps;
  auto cleanup = [&temps] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  for (const auto& [path, content] : files) {
    fs::path tmp = path;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    temps.push_back(tmp);
    if (!out || !out.write(content.data(), static_cast<std::streamsize>(content.size())) ||
        !out.flush()) {
      cleanup();
      throw ConfigError("cannot write '" + path.string() + "'");
    }
  }
  std::vector<fs::path> placed;
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    fs::rename(temps[i], files[i].first, ec);
    if (ec) {
      for (const auto& p : placed) fs::remove(p, ec);
      cleanup();
      throw ConfigError("cannot place '" + files[i].first.string() + "': " + ec.message());
    }
    placed.push_back(files[i].first);
  }
}

}  // namespace pushbutton
