#include "wqisa/surface_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wqisa/errors.hpp"

namespace wqisa {
namespace {

using nlohmann::json;

json spline_json(const SplineSurface& s) {
  const Grid& c = s.coefficients();
  json rows = json::array();
  for (std::size_t i = 0; i < c.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < c.cols; ++j) row.push_back(c(i, j));
    rows.push_back(std::move(row));
  }
  const auto kx = s.space().knots_x().knots();
  const auto ky = s.space().knots_y().knots();
  return json{{"format", "wqisa-spline"},
              {"version", 1},
              {"degree", {s.space().knots_x().degree(), s.space().knots_y().degree()}},
              {"knots_x", std::vector<double>(kx.begin(), kx.end())},
              {"knots_y", std::vector<double>(ky.begin(), ky.end())},
              {"coefficients", std::move(rows)}};
}

SplineSurface spline_from(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "wqisa-spline")
      throw ParseError(0, "not a wqisa-spline document");
    if (j.at("version").get<int>() != 1) throw ParseError(0, "unsupported surface version");
    const auto degree = j.at("degree").get<std::vector<int>>();
    if (degree.size() != 2) throw ParseError(0, "degree must have two entries");
    KnotVector kx(degree[0], j.at("knots_x").get<std::vector<double>>());
    KnotVector ky(degree[1], j.at("knots_y").get<std::vector<double>>());
    const auto rows = j.at("coefficients").get<std::vector<std::vector<double>>>();
    Grid grid(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != grid.cols) throw ParseError(0, "ragged coefficient grid");
      for (std::size_t k = 0; k < grid.cols; ++k) grid(i, k) = rows[i][k];
    }
    return SplineSurface(TensorSplineSpace(std::move(kx), std::move(ky)), std::move(grid));
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("surface JSON: ") + e.what());
  }
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string surface_to_json(const SplineSurface& surface, int indent) { return spline_json(surface).dump(indent); }

SplineSurface surface_from_json(std::string_view text) { return spline_from(parse(text)); }

std::string mba_to_json(const MbaSurface& surface, int indent) {
  json levels = json::array();
  for (const auto& level : surface.levels()) levels.push_back(spline_json(level));
  return json{{"format", "wqisa-mba"}, {"version", 1}, {"levels", std::move(levels)}}.dump(indent);
}

MbaSurface mba_from_json(std::string_view text) {
  const json j = parse(text);
  try {
    if (j.at("format").get<std::string>() != "wqisa-mba") throw ParseError(0, "not a wqisa-mba document");
    std::vector<SplineSurface> levels;
    for (const auto& level : j.at("levels")) levels.push_back(spline_from(level));
    return MbaSurface(std::move(levels));
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("mba JSON: ") + e.what());
  }
}

void write_surface(const std::filesystem::path& path, const SplineSurface& surface) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << surface_to_json(surface, 1) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

SplineSurface read_surface(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open surface '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return surface_from_json(buf.str());
}

}  // namespace wqisa
