#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "wqisa/point_cloud.hpp"
#include "wqisa/spline_surface.hpp"

namespace wqisa {

enum class CloudFormat {
  Xyz,  ///< whitespace-separated "x y z" per line; blank lines and '#' comments skipped
  Csv,  ///< comma-separated with a header row naming the columns
};

struct ColumnMapping {
  std::string x = "x";
  std::string y = "y";
  std::string z = "z";
};

struct CloudFile {
  CloudFormat format = CloudFormat::Xyz;
  std::filesystem::path path;
  ColumnMapping columns{};
};

/// Csv for a ".csv" extension (any case), Xyz otherwise.
CloudFormat detect_format(const std::filesystem::path& path);

/// Rows in file order. Throws ParseError (with 1-based line) on malformed rows,
/// non-finite values, unknown CSV columns or an empty file; IoError if unreadable.
PointCloud read_cloud(const CloudFile& file);
PointCloud parse_xyz(std::istream& in);
PointCloud parse_csv(std::istream& in, const ColumnMapping& columns = {});

/// XYZ text with 17 significant digits, one point per line.
void write_xyz(std::ostream& out, std::span<const Point3> cloud);
void write_cloud(const std::filesystem::path& path, std::span<const Point3> cloud);

/// CSV "x,y,z" over a uniform nx by ny grid covering the domain, x varying
/// fastest, 17 significant digits. Throws InvalidArgument when nx or ny < 2.
void write_surface_grid(std::ostream& out, const SplineSurface& surface, std::size_t nx, std::size_t ny);
void write_surface_grid(const SplineSurface& surface, std::size_t nx, std::size_t ny,
                        const std::filesystem::path& path);

/// printf-style %.17g; parses back to the same double.
std::string format_double(double v);

}  // namespace wqisa
