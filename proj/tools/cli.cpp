#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wqisa/cloud_io.hpp"
#include "wqisa/errors.hpp"
#include "wqisa/mba.hpp"
#include "wqisa/metrics.hpp"
#include "wqisa/pipeline.hpp"
#include "wqisa/run_config.hpp"
#include "wqisa/surface_io.hpp"
#include "wqisa/synthetic.hpp"

#ifndef WQISA_VERSION
#define WQISA_VERSION "0.0.0"
#endif

namespace wqisa::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct CloudOptions {
  std::string path;
  std::string format = "auto";
  std::string x_col = "x";
  std::string y_col = "y";
  std::string z_col = "z";

  void attach(CLI::App* app) {
    app->add_option("--cloud", path, "Point cloud file (XYZ or CSV)")->required();
    app->add_option("--format", format, "Cloud format")->check(CLI::IsMember({"auto", "xyz", "csv"}));
    app->add_option("--x-col", x_col, "CSV column holding x");
    app->add_option("--y-col", y_col, "CSV column holding y");
    app->add_option("--z-col", z_col, "CSV column holding z");
  }

  PointCloud load() const {
    CloudFile file;
    file.path = path;
    file.format = format == "auto" ? detect_format(path) : (format == "csv" ? CloudFormat::Csv : CloudFormat::Xyz);
    file.columns = ColumnMapping{x_col, y_col, z_col};
    return read_cloud(file);
  }
};

ordered_json stats_json(const ErrorStats& s) {
  return ordered_json{{"mean", s.mean}, {"std", s.std}, {"mse", s.mse}, {"max_abs", s.max_abs}, {"count", s.count}};
}

// Config embedded as its key = value pairs, in serialization order.
ordered_json config_json(const RunConfig& cfg) {
  ordered_json j = ordered_json::object();
  std::istringstream in(serialize_run_config(cfg));
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    j[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return j;
}

ordered_json weight_json(const WeightSpec& w) {
  ordered_json j{{"kind", to_string(w.kind())}};
  if (const auto p = w.parameter()) j["parameter"] = *p;
  if (w.filter.enabled) j["outlier_fence"] = w.filter.fence;
  return j;
}

ordered_json report_json(const FitReport& r) {
  ordered_json iterations = ordered_json::array();
  for (const auto& it : r.iterations)
    iterations.push_back(ordered_json{{"iteration", it.iteration},
                                      {"elements", {it.elements_x, it.elements_y}},
                                      {"coefficients", it.coefficients},
                                      {"weight", weight_json(it.weight)},
                                      {"gmse", it.gmse},
                                      {"flagged_elements", it.flagged_elements}});
  ordered_json j{{"sizes", {{"training", r.training_size}, {"validation", r.validation_size}, {"test", r.test_size}}},
                 {"threshold", r.threshold},
                 {"iterations", std::move(iterations)},
                 {"iteration_count", r.iterations.size()},
                 {"stop_reason", to_string(r.stop_reason)},
                 {"best_iteration", r.best_iteration},
                 {"best_gmse", r.best().gmse},
                 {"best_weight", weight_json(r.best().weight)}};
  if (r.test_stats) {
    j["test_mse"] = r.test_stats->mse;
    j["test"] = stats_json(*r.test_stats);
  }
  return j;
}

ordered_json envelope(const std::string& command) {
  return ordered_json{{"tool", "wqisa"}, {"tool_version", tool_version()}, {"command", command}};
}

void emit(const ordered_json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << text;
  if (!f) throw IoError("write failed for '" + path + "'");
}

RunConfig load_config(const std::string& path) { return path.empty() ? RunConfig{} : load_run_config(path); }

// MBA counterpart of fit_split: training drives the levels, validation picks the
// level count, test assesses.
struct MbaOutcome {
  MbaFitResult fit;
  std::vector<double> test_residuals;
};

MbaOutcome run_mba(const DataSplit& s, const RunConfig& cfg, const Box2& domain) {
  MbaOptions opt;
  opt.max_levels = cfg.mba_max_levels;
  opt.degree_x = cfg.fit.degree_x;
  opt.degree_y = cfg.fit.degree_y;
  opt.domain = domain;
  MbaOutcome o{fit_mba(s.training, s.validation, opt), {}};
  for (const auto& p : s.test) o.test_residuals.push_back(p.z - o.fit.surface.evaluate(p.x, p.y));
  return o;
}

int cmd_split(const CloudOptions& cloud, const std::string& scheme, double ft, double fv, double fte,
              std::size_t folds, std::uint64_t seed, const std::string& prefix, std::ostream& out) {
  const PointCloud pts = cloud.load();
  SplitScheme s = RandomSplit{ft, fv, fte};
  if (scheme == "kfold") s = KFoldSplit{folds};
  if (scheme == "loo") s = LeaveOneOut{};
  const auto parts = split(pts, s, seed);

  ordered_json files = ordered_json::array();
  if (std::holds_alternative<RandomSplit>(s)) {
    const auto& d = parts.front();
    for (const auto& [name, set] : {std::pair{"training", &d.training}, std::pair{"validation", &d.validation},
                                    std::pair{"test", &d.test}}) {
      const std::string path = prefix + "_" + name + ".xyz";
      write_cloud(path, *set);
      files.push_back(ordered_json{{"role", name}, {"path", path}, {"points", set->size()}});
    }
  } else {
    for (const auto& d : parts) {
      const std::string base = prefix + "_fold" + std::to_string(d.fold);
      write_cloud(base + "_training.xyz", d.training);
      write_cloud(base + "_holdout.xyz", d.validation);
      files.push_back(ordered_json{{"fold", d.fold},
                                   {"training", base + "_training.xyz"},
                                   {"holdout", base + "_holdout.xyz"},
                                   {"training_points", d.training.size()},
                                   {"holdout_points", d.validation.size()}});
    }
  }
  ordered_json j = envelope("split");
  j["seed"] = seed;
  j["scheme"] = describe(s);
  j["files"] = std::move(files);
  emit(j, "", out);
  return kExitOk;
}

int cmd_fit(const CloudOptions& cloud, const std::string& config_path, std::optional<std::uint64_t> seed,
            std::string surface_path, std::string report_path, std::string grid_path, std::ostream& out) {
  RunConfig cfg = load_config(config_path);
  if (seed) cfg.fit.seed = *seed;
  if (surface_path.empty()) surface_path = cfg.output_surface;
  if (report_path.empty()) report_path = cfg.output_report;
  if (grid_path.empty()) grid_path = cfg.output_grid;

  const PointCloud pts = cloud.load();
  const FitResult result = fit(pts, cfg.fit);

  ordered_json j = envelope("fit");
  j["seed"] = cfg.fit.seed;
  j["config"] = config_json(cfg);
  j["cloud_points"] = pts.size();
  j["report"] = report_json(result.report);
  if (!std::holds_alternative<RandomSplit>(cfg.fit.split)) {
    const std::size_t folds =
        std::holds_alternative<LeaveOneOut>(cfg.fit.split) ? pts.size() : std::get<KFoldSplit>(cfg.fit.split).folds;
    const auto cv = cross_validate(pts, cfg.fit, folds);
    j["cross_validation"] = ordered_json{{"folds", folds}, {"pooled", stats_json(cv.pooled)}};
  }
  if (!surface_path.empty()) {
    write_surface(surface_path, result.surface);
    j["surface"] = surface_path;
  }
  if (!grid_path.empty()) write_surface_grid(result.surface, cfg.grid_resolution, cfg.grid_resolution, grid_path);
  emit(j, report_path, out);
  return kExitOk;
}

int cmd_eval(const std::string& surface_path, const CloudOptions& cloud, std::size_t density,
             const std::string& out_path, std::ostream& out) {
  const SplineSurface surface = read_surface(surface_path);
  const PointCloud pts = cloud.load();
  const ErrorStats stats = punctual_errors(surface, pts);
  const PointCloud image = surface_point_set(surface, density);
  ordered_json j = envelope("eval");
  j["surface"] = surface_path;
  j["cloud_points"] = pts.size();
  j["stats"] = stats_json(stats);
  j["hausdorff"] = hausdorff(pts, image);
  j["hausdorff_density"] = density;
  j["surface_samples"] = image.size();
  emit(j, out_path, out);
  return kExitOk;
}

struct MethodRow {
  std::string method;
  ErrorStats stats;
  std::optional<double> hausdorff;
  std::size_t iterations;
  std::string mesh;
};

void print_table(const std::vector<MethodRow>& rows, std::ostream& out) {
  out << std::left << std::setw(8) << "Method" << std::right << std::setw(14) << "Mean" << std::setw(14) << "Std"
      << std::setw(14) << "MSE" << std::setw(14) << "Linf" << std::setw(14) << "Hausdorff" << std::setw(8) << "Iter"
      << "  Mesh\n";
  out << std::setprecision(6);
  for (const auto& r : rows) {
    out << std::left << std::setw(8) << r.method << std::right << std::setw(14) << r.stats.mean << std::setw(14)
        << r.stats.std << std::setw(14) << r.stats.mse << std::setw(14) << r.stats.max_abs << std::setw(14);
    if (r.hausdorff)
      out << *r.hausdorff;
    else
      out << "-";
    out << std::setw(8) << r.iterations << "  " << r.mesh << '\n';
  }
}

int cmd_compare(const CloudOptions& cloud, const std::string& config_path, std::optional<std::uint64_t> seed,
                const std::string& out_path, bool table, std::ostream& out) {
  RunConfig cfg = load_config(config_path);
  if (seed) cfg.fit.seed = *seed;
  const PointCloud pts = cloud.load();
  const Box2 domain = bounding_box(pts);
  const auto parts = split(pts, cfg.fit.split, cfg.fit.seed);
  const bool pooled = parts.size() > 1;

  std::vector<double> wq_res;
  std::vector<double> mba_res;
  ordered_json wq_runs = ordered_json::array();
  ordered_json mba_runs = ordered_json::array();
  std::size_t wq_iter = 0;
  std::size_t mba_levels = 0;
  std::string wq_mesh;
  std::string mba_mesh;
  std::optional<double> wq_haus;
  std::optional<double> mba_haus;

  for (const auto& part : parts) {
    const FitResult w = fit_split(part, cfg.fit, domain);
    for (const auto& p : part.test) wq_res.push_back(p.z - w.surface.evaluate(p.x, p.y));
    wq_runs.push_back(report_json(w.report));
    wq_iter = w.report.iterations.size();
    wq_mesh = std::to_string(w.report.best().elements_x) + "x" + std::to_string(w.report.best().elements_y);

    const MbaOutcome m = run_mba(part, cfg, domain);
    mba_res.insert(mba_res.end(), m.test_residuals.begin(), m.test_residuals.end());
    ordered_json levels = ordered_json::array();
    for (const auto& h : m.fit.history)
      levels.push_back(ordered_json{{"level", h.level},
                                    {"elements", h.elements_per_axis},
                                    {"training_rms", h.training_rms},
                                    {"validation_gmse", h.validation_gmse}});
    mba_runs.push_back(ordered_json{{"levels", std::move(levels)}, {"best_level_count", m.fit.best_level_count}});
    mba_levels = m.fit.history.size();
    const std::size_t e = std::size_t{1} << (m.fit.best_level_count - 1);
    mba_mesh = std::to_string(e) + "x" + std::to_string(e);

    if (!pooled) {
      wq_haus = hausdorff(part.test, surface_point_set(w.surface, cfg.hausdorff_density));
      const auto& finest = m.fit.surface.levels().back();
      const auto& sp = finest.space();
      const std::size_t nx = cfg.hausdorff_density * sp.knots_x().element_count() + 1;
      const std::size_t ny = cfg.hausdorff_density * sp.knots_y().element_count() + 1;
      mba_haus = hausdorff(part.test, sample_surface([&](double x, double y) { return m.fit.surface.evaluate(x, y); },
                                                     sp.domain(), nx, ny));
    }
  }

  const std::vector<MethodRow> rows{{"wQISA", error_stats(wq_res), wq_haus, wq_iter, wq_mesh},
                                    {"MBA", error_stats(mba_res), mba_haus, mba_levels, mba_mesh}};
  if (table) {
    print_table(rows, out);
    return kExitOk;
  }
  ordered_json methods = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json m{{"method", r.method}, {"stats", stats_json(r.stats)}, {"gmse", r.stats.mse}};
    if (r.hausdorff) m["hausdorff"] = *r.hausdorff;
    m["iterations"] = r.iterations;
    m["mesh"] = r.mesh;
    methods.push_back(std::move(m));
  }
  ordered_json j = envelope("compare");
  j["seed"] = cfg.fit.seed;
  j["config"] = config_json(cfg);
  j["scheme"] = describe(cfg.fit.split);
  j["assessment"] = pooled ? "pooled holdout residuals" : "test set";
  j["methods"] = std::move(methods);
  j["wqisa_runs"] = std::move(wq_runs);
  j["mba_runs"] = std::move(mba_runs);
  emit(j, out_path, out);
  return kExitOk;
}

int cmd_sample(const std::string& surface_path, std::size_t nx, std::size_t ny, const std::string& out_path,
               std::ostream& out) {
  const SplineSurface surface = read_surface(surface_path);
  if (out_path.empty() || out_path == "-") {
    write_surface_grid(out, surface, nx, ny);
  } else {
    write_surface_grid(surface, nx, ny, out_path);
  }
  return kExitOk;
}

int cmd_synth(const std::string& generator, std::size_t n, std::uint64_t seed, const Perturbation& p,
              const std::string& out_path, std::ostream& out) {
  if (generator != "hemisphere") throw InvalidArgument("unknown generator '" + generator + "'");
  const PointCloud cloud = perturb(hemisphere_cloud(n, seed), p, seed + 1);
  if (out_path.empty() || out_path == "-")
    write_xyz(out, cloud);
  else
    write_cloud(out_path, cloud);
  return kExitOk;
}

}  // namespace

const char* tool_version() { return WQISA_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted quasi-interpolant spline approximation of 2.5D point clouds", "wqisa"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  // split
  auto* split_cmd = app.add_subcommand("split", "Split a cloud into training/validation/test files");
  CloudOptions split_cloud;
  split_cloud.attach(split_cmd);
  std::string scheme = "random";
  double ft = 0.5, fv = 0.25, fte = 0.25;
  std::size_t folds = 10;
  std::uint64_t split_seed = 0;
  std::string prefix;
  split_cmd->add_option("--scheme", scheme, "random, kfold or loo")->check(CLI::IsMember({"random", "kfold", "loo"}));
  split_cmd->add_option("--train", ft, "Training fraction");
  split_cmd->add_option("--validation", fv, "Validation fraction");
  split_cmd->add_option("--test", fte, "Test fraction");
  split_cmd->add_option("--folds", folds, "Number of folds for kfold");
  split_cmd->add_option("--seed", split_seed, "Random seed");
  split_cmd->add_option("--out-prefix", prefix, "Prefix of the output files")->required();

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit a wQISA surface with the data-driven refinement loop");
  CloudOptions fit_cloud;
  fit_cloud.attach(fit_cmd);
  std::string fit_config;
  std::optional<std::uint64_t> fit_seed;
  std::string fit_out, fit_report, fit_grid;
  fit_cmd->add_option("--config", fit_config, "Run configuration (key = value)");
  fit_cmd->add_option("--seed", fit_seed, "Override the configured seed");
  fit_cmd->add_option("--out", fit_out, "Surface JSON output");
  fit_cmd->add_option("--report", fit_report, "Fit report JSON output (stdout if omitted)");
  fit_cmd->add_option("--grid", fit_grid, "Sampled surface CSV output");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Error statistics and Hausdorff distance of a surface");
  std::string eval_surface, eval_out;
  CloudOptions eval_cloud;
  std::size_t density = 4;
  eval_cmd->add_option("--surface", eval_surface, "Surface JSON")->required();
  eval_cloud.attach(eval_cmd);
  eval_cmd->add_option("--density", density, "Surface samples per element and axis")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--out", eval_out, "Report JSON output (stdout if omitted)");

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "Side-by-side wQISA and MBA assessment");
  CloudOptions cmp_cloud;
  cmp_cloud.attach(cmp_cmd);
  std::string cmp_config, cmp_out;
  std::optional<std::uint64_t> cmp_seed;
  bool table = false;
  cmp_cmd->add_option("--config", cmp_config, "Run configuration (key = value)");
  cmp_cmd->add_option("--seed", cmp_seed, "Override the configured seed");
  cmp_cmd->add_option("--out", cmp_out, "Report JSON output (stdout if omitted)");
  cmp_cmd->add_flag("--table", table, "Print a text table instead of JSON");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Sample a surface on a uniform grid (CSV x,y,z)");
  std::string sample_surface, sample_out;
  std::size_t nx = 101, ny = 101;
  sample_cmd->add_option("--surface", sample_surface, "Surface JSON")->required();
  sample_cmd->add_option("--nx", nx, "Samples along x")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  sample_cmd->add_option("--ny", ny, "Samples along y")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  sample_cmd->add_option("--out", sample_out, "CSV output (stdout if omitted)");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic point cloud");
  std::string generator = "hemisphere", synth_out;
  std::size_t n = 1000;
  std::uint64_t synth_seed = 0;
  Perturbation perturbation;
  synth_cmd->add_option("--generator", generator, "Generator name")->check(CLI::IsMember({"hemisphere"}));
  synth_cmd->add_option("-n,--points", n, "Number of points")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth_seed, "Random seed");
  synth_cmd->add_option("--noise", perturbation.noise_std, "Gaussian noise standard deviation on z")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--outliers", perturbation.outlier_fraction, "Fraction of z replaced by outliers")
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--outlier-scale", perturbation.outlier_scale, "Outlier spread relative to the z range")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--out", synth_out, "XYZ output (stdout if omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "wqisa: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (split_cmd->parsed()) return cmd_split(split_cloud, scheme, ft, fv, fte, folds, split_seed, prefix, out);
    if (fit_cmd->parsed()) return cmd_fit(fit_cloud, fit_config, fit_seed, fit_out, fit_report, fit_grid, out);
    if (eval_cmd->parsed()) return cmd_eval(eval_surface, eval_cloud, density, eval_out, out);
    if (cmp_cmd->parsed()) return cmd_compare(cmp_cloud, cmp_config, cmp_seed, cmp_out, table, out);
    if (sample_cmd->parsed()) return cmd_sample(sample_surface, nx, ny, sample_out, out);
    if (synth_cmd->parsed()) return cmd_synth(generator, n, synth_seed, perturbation, synth_out, out);
  } catch (const std::exception& e) {
    err << "wqisa: " << e.what() << '\n';
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace wqisa::cli
