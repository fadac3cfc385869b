#include "wqisa/cloud_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "wqisa/errors.hpp"
#include "wqisa/metrics.hpp"

namespace wqisa {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty())
    throw ParseError(line, "cannot parse '" + std::string(token) + "' as a number");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite value '" + std::string(token) + "'");
  return v;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool skippable(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

}  // namespace

CloudFormat detect_format(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv" ? CloudFormat::Csv : CloudFormat::Xyz;
}

PointCloud parse_xyz(std::istream& in) {
  PointCloud out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (skippable(line)) continue;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.size() != 3)
      throw ParseError(number, "expected 3 values, found " + std::to_string(tokens.size()));
    out.push_back(Point3{parse_number(tokens[0], number), parse_number(tokens[1], number),
                         parse_number(tokens[2], number)});
  }
  if (out.empty()) throw ParseError(0, "point cloud file contains no points");
  return out;
}

PointCloud parse_csv(std::istream& in, const ColumnMapping& columns) {
  std::string line;
  std::size_t number = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++number;
    if (skippable(line)) continue;
    for (auto f : split_on(line, ',')) header.emplace_back(trim(f));
    break;
  }
  if (header.empty()) throw ParseError(0, "CSV file has no header");
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError(number, "CSV header has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t cx = column(columns.x);
  const std::size_t cy = column(columns.y);
  const std::size_t cz = column(columns.z);

  PointCloud out;
  while (std::getline(in, line)) {
    ++number;
    if (skippable(line)) continue;
    const auto fields = split_on(line, ',');
    if (fields.size() != header.size())
      throw ParseError(number, "expected " + std::to_string(header.size()) + " fields, found " +
                                   std::to_string(fields.size()));
    out.push_back(Point3{parse_number(fields[cx], number), parse_number(fields[cy], number),
                         parse_number(fields[cz], number)});
  }
  if (out.empty()) throw ParseError(0, "point cloud file contains no points");
  return out;
}

PointCloud read_cloud(const CloudFile& file) {
  std::ifstream in(file.path);
  if (!in) throw IoError("cannot open point cloud '" + file.path.string() + "'");
  try {
    return file.format == CloudFormat::Csv ? parse_csv(in, file.columns) : parse_xyz(in);
  } catch (const ParseError& e) {
    throw e.in_source(file.path.string());
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_xyz(std::ostream& out, std::span<const Point3> cloud) {
  for (const auto& p : cloud) out << format_double(p.x) << ' ' << format_double(p.y) << ' ' << format_double(p.z) << '\n';
}

void write_cloud(const std::filesystem::path& path, std::span<const Point3> cloud) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_xyz(out, cloud);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_surface_grid(std::ostream& out, const SplineSurface& surface, std::size_t nx, std::size_t ny) {
  const auto samples =
      sample_surface([&](double x, double y) { return surface.evaluate(x, y); }, surface.space().domain(), nx, ny);
  out << "x,y,z\n";
  for (const auto& p : samples) out << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.z) << '\n';
}

void write_surface_grid(const SplineSurface& surface, std::size_t nx, std::size_t ny,
                        const std::filesystem::path& path) {
  if (nx < 2 || ny < 2) throw InvalidArgument("surface grid: resolution must be at least 2 per axis");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_surface_grid(out, surface, nx, ny);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace wqisa
