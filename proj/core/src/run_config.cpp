#include "wqisa/run_config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "wqisa/cloud_io.hpp"
#include "wqisa/errors.hpp"

namespace wqisa {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double to_double(const std::string& v, std::size_t line) {
  std::string_view s = v;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(out))
    throw ParseError(line, "expected a finite number, got '" + v + "'");
  return out;
}

std::uint64_t to_unsigned(const std::string& v, std::size_t line) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size())
    throw ParseError(line, "expected a nonnegative integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v, std::size_t line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError(line, "expected true or false, got '" + v + "'");
}

std::optional<double> to_auto_double(const std::string& v, std::size_t line) {
  if (v == "auto") return std::nullopt;
  return to_double(v, line);
}



std::optional<double>* tolerance_of(WeightSpec& spec) {
  if (auto* w = std::get_if<IdwWeight>(&spec.kernel)) return &w->coincidence_tolerance;
  if (auto* w = std::get_if<TruncatedIdwWeight>(&spec.kernel)) return &w->coincidence_tolerance;
  return nullptr;
}

const std::optional<double>* tolerance_of(const WeightSpec& spec) {
  if (const auto* w = std::get_if<IdwWeight>(&spec.kernel)) return &w->coincidence_tolerance;
  if (const auto* w = std::get_if<TruncatedIdwWeight>(&spec.kernel)) return &w->coincidence_tolerance;
  return nullptr;
}

// Shortest text that parses back to the same double.
std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, ptr) : format_double(v);
}

WeightSpec default_spec(WeightKind kind) {
  switch (kind) {
    case WeightKind::Indicator: return WeightSpec::indicator(1.0);
    case WeightKind::Gaussian: return WeightSpec::gaussian(1.0);
    case WeightKind::Knn: return WeightSpec::knn(1);
    case WeightKind::Idw: return WeightSpec::idw();
    case WeightKind::TruncatedIdw: return WeightSpec::truncated_idw(500);
  }
  return WeightSpec::knn(1);
}

std::string from_auto_double(const std::optional<double>& v) { return v ? shortest(*v) : "auto"; }

}  // namespace

RunConfig parse_run_config(std::istream& in) {
  // Collect first, then apply in a fixed order so `weight` is known before its options.
  std::map<std::string, std::pair<std::string, std::size_t>> entries;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(number, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(number, "empty key");
    if (!entries.emplace(key, std::make_pair(value, number)).second)
      throw ParseError(number, "duplicate key '" + key + "'");
  }

  RunConfig cfg;
  FitConfig& fit = cfg.fit;
  std::set<std::string> used;
  auto take = [&](const std::string& key, const std::function<void(const std::string&, std::size_t)>& apply) {
    const auto it = entries.find(key);
    if (it == entries.end()) return;
    used.insert(key);
    apply(it->second.first, it->second.second);
  };

  take("weight", [&](const std::string& v, std::size_t line) {
    try {
      fit.weight = default_spec(weight_kind_from_string(v));
    } catch (const InvalidArgument& e) {
      throw ParseError(line, e.what());
    }
  });
  take("weight_parameter", [&](const std::string& v, std::size_t line) {
    if (!fit.weight.parameter()) {
      if (v != "none") throw ParseError(line, "weight '" + to_string(fit.weight.kind()) + "' has no parameter");
      return;
    }
    try {
      fit.weight = fit.weight.with_parameter(to_double(v, line));
    } catch (const InvalidArgument& e) {
      throw ParseError(line, e.what());
    }
  });
  take("gaussian_squared_norm", [&](const std::string& v, std::size_t line) {
    const bool squared = to_bool(v, line);
    if (auto* g = std::get_if<GaussianWeight>(&fit.weight.kernel)) g->squared_norm = squared;
  });
  take("coincidence_tolerance", [&](const std::string& v, std::size_t line) {
    const auto tol = to_auto_double(v, line);
    if (auto* slot = tolerance_of(fit.weight)) *slot = tol;
  });
  take("outlier_filter", [&](const std::string& v, std::size_t line) { fit.weight.filter.enabled = to_bool(v, line); });
  take("outlier_fence", [&](const std::string& v, std::size_t line) { fit.weight.filter.fence = to_double(v, line); });
  take("grid", [&](const std::string& v, std::size_t line) {
    fit.parameter_grid.clear();
    if (v.empty() || v == "none") return;
    std::stringstream ss(v);
    for (std::string item; std::getline(ss, item, ',');) fit.parameter_grid.push_back(to_double(trim(item), line));
  });
  take("degree_x", [&](const std::string& v, std::size_t line) { fit.degree_x = static_cast<int>(to_unsigned(v, line)); });
  take("degree_y", [&](const std::string& v, std::size_t line) { fit.degree_y = static_cast<int>(to_unsigned(v, line)); });
  take("threshold", [&](const std::string& v, std::size_t line) { fit.threshold = to_auto_double(v, line); });
  take("max_iterations", [&](const std::string& v, std::size_t line) { fit.max_iterations = to_unsigned(v, line); });
  take("stagnation_tolerance",
       [&](const std::string& v, std::size_t line) { fit.stagnation_tolerance = to_double(v, line); });
  take("seed", [&](const std::string& v, std::size_t line) { fit.seed = to_unsigned(v, line); });
  take("threads", [&](const std::string& v, std::size_t line) { fit.threads = static_cast<unsigned>(to_unsigned(v, line)); });

  take("split", [&](const std::string& v, std::size_t line) {
    if (v == "random")
      fit.split = RandomSplit{};
    else if (v == "kfold")
      fit.split = KFoldSplit{};
    else if (v == "loo")
      fit.split = LeaveOneOut{};
    else
      throw ParseError(line, "split must be random, kfold or loo, got '" + v + "'");
  });
  auto random_field = [&](const std::string& key, double RandomSplit::*field) {
    take(key, [&](const std::string& v, std::size_t line) {
      const double f = to_double(v, line);
      if (auto* r = std::get_if<RandomSplit>(&fit.split)) r->*field = f;
    });
  };
  random_field("train_fraction", &RandomSplit::train);
  random_field("validation_fraction", &RandomSplit::validation);
  random_field("test_fraction", &RandomSplit::test);
  take("folds", [&](const std::string& v, std::size_t line) {
    const auto k = to_unsigned(v, line);
    if (auto* f = std::get_if<KFoldSplit>(&fit.split)) f->folds = k;
  });

  take("mba_max_levels", [&](const std::string& v, std::size_t line) { cfg.mba_max_levels = to_unsigned(v, line); });
  take("hausdorff_density",
       [&](const std::string& v, std::size_t line) { cfg.hausdorff_density = to_unsigned(v, line); });
  take("grid_resolution", [&](const std::string& v, std::size_t line) { cfg.grid_resolution = to_unsigned(v, line); });
  take("output_surface", [&](const std::string& v, std::size_t) { cfg.output_surface = v; });
  take("output_report", [&](const std::string& v, std::size_t) { cfg.output_report = v; });
  take("output_grid", [&](const std::string& v, std::size_t) { cfg.output_grid = v; });

  for (const auto& [key, value] : entries)
    if (!used.count(key)) throw ParseError(value.second, "unknown key '" + key + "'");

  fit.validate();
  if (cfg.mba_max_levels < 1) throw InvalidArgument("run config: mba_max_levels must be >= 1");
  if (cfg.hausdorff_density < 1) throw InvalidArgument("run config: hausdorff_density must be >= 1");
  if (cfg.grid_resolution < 2) throw InvalidArgument("run config: grid_resolution must be >= 2");
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  try {
    return parse_run_config(in);
  } catch (const ParseError& e) {
    throw e.in_source(path.string());
  }
}

std::string serialize_run_config(const RunConfig& cfg) {
  const FitConfig& fit = cfg.fit;
  std::ostringstream out;
  out << "degree_x = " << fit.degree_x << '\n';
  out << "degree_y = " << fit.degree_y << '\n';
  out << "weight = " << to_string(fit.weight.kind()) << '\n';
  const auto param = fit.weight.parameter();
  out << "weight_parameter = " << (param ? shortest(*param) : std::string("none")) << '\n';
  if (const auto* g = std::get_if<GaussianWeight>(&fit.weight.kernel))
    out << "gaussian_squared_norm = " << (g->squared_norm ? "true" : "false") << '\n';
  if (auto* tol = tolerance_of(fit.weight))
    out << "coincidence_tolerance = " << from_auto_double(*tol) << '\n';
  out << "outlier_filter = " << (fit.weight.filter.enabled ? "true" : "false") << '\n';
  out << "outlier_fence = " << shortest(fit.weight.filter.fence) << '\n';
  out << "grid = ";
  for (std::size_t i = 0; i < fit.parameter_grid.size(); ++i)
    out << (i ? "," : "") << shortest(fit.parameter_grid[i]);
  if (fit.parameter_grid.empty()) out << "none";
  out << '\n';
  out << "threshold = " << from_auto_double(fit.threshold) << '\n';
  out << "max_iterations = " << fit.max_iterations << '\n';
  out << "stagnation_tolerance = " << shortest(fit.stagnation_tolerance) << '\n';
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RandomSplit>) {
          out << "split = random\n";
          out << "train_fraction = " << shortest(s.train) << '\n';
          out << "validation_fraction = " << shortest(s.validation) << '\n';
          out << "test_fraction = " << shortest(s.test) << '\n';
        } else if constexpr (std::is_same_v<T, KFoldSplit>) {
          out << "split = kfold\n";
          out << "folds = " << s.folds << '\n';
        } else {
          out << "split = loo\n";
        }
      },
      fit.split);
  out << "seed = " << fit.seed << '\n';
  out << "threads = " << fit.threads << '\n';
  out << "mba_max_levels = " << cfg.mba_max_levels << '\n';
  out << "hausdorff_density = " << cfg.hausdorff_density << '\n';
  out << "grid_resolution = " << cfg.grid_resolution << '\n';
  out << "output_surface = " << cfg.output_surface << '\n';
  out << "output_report = " << cfg.output_report << '\n';
  out << "output_grid = " << cfg.output_grid << '\n';
  return out.str();
}

}  // namespace wqisa
