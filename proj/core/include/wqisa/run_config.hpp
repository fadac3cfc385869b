#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "wqisa/pipeline.hpp"

namespace wqisa {

/// Everything a CLI run needs, stored as line-oriented `key = value` text.
///
///   # comments and blank lines are ignored
///   weight = knn
///   grid = 1,2,3,4,5,6,7,8,9,10
///   split = random
///   seed = 42
///
/// serialize_run_config writes every key; parse(serialize(c)) == c.
struct RunConfig {
  FitConfig fit;
  std::size_t mba_max_levels = 10;
  std::size_t hausdorff_density = 4;
  std::size_t grid_resolution = 101;
  std::string output_surface;
  std::string output_report;
  std::string output_grid;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ParseError (with line number) for unknown keys, malformed values or
/// duplicate keys, and InvalidArgument when the result fails FitConfig::validate().
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::filesystem::path& path);

std::string serialize_run_config(const RunConfig& config);

}  // namespace wqisa
