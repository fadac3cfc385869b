#include "wqisa/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "wqisa/errors.hpp"

namespace wqisa {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Independent streams from one seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kSplitStream = 1;

PointCloud gather(std::span<const Point3> cloud, std::vector<std::size_t> ids) {
  std::sort(ids.begin(), ids.end());
  PointCloud out;
  out.reserve(ids.size());
  for (auto i : ids) out.push_back(cloud[i]);
  return out;
}

Box2 merge(const Box2& a, const Box2& b) {
  return Box2{std::min(a.x_min, b.x_min), std::max(a.x_max, b.x_max), std::min(a.y_min, b.y_min),
              std::max(a.y_max, b.y_max)};
}

std::size_t rounded(double v) { return static_cast<std::size_t>(std::llround(v)); }

}  // namespace

std::string describe(const SplitScheme& scheme) {
  return std::visit(Overloaded{
                        [](const RandomSplit& s) {
                          return "random(" + std::to_string(s.train) + "/" + std::to_string(s.validation) + "/" +
                                 std::to_string(s.test) + ")";
                        },
                        [](const KFoldSplit& s) { return "kfold(" + std::to_string(s.folds) + ")"; },
                        [](const LeaveOneOut&) { return std::string("loo"); },
                    },
                    scheme);
}

DataSplit split_random(std::span<const Point3> cloud, const RandomSplit& f, std::uint64_t seed) {
  if (!(f.train > 0 && f.validation > 0 && f.test > 0) || f.train + f.validation + f.test > 1.0 + 1e-9)
    throw InvalidArgument("random split: fractions must be positive with sum <= 1");
  const std::size_t n = cloud.size();
  if (n < 4) throw InvalidArgument("random split: need at least 4 points, got " + std::to_string(n));

  const std::size_t n_train = rounded(f.train * static_cast<double>(n));
  const std::size_t n_val = rounded(f.validation * static_cast<double>(n));
  const std::size_t n_test =
      std::min(rounded(f.test * static_cast<double>(n)), n - std::min(n, n_train + n_val));
  if (n_train == 0 || n_val == 0 || n_test == 0 || n_train + n_val + n_test > n)
    throw InvalidArgument("random split: cloud of " + std::to_string(n) + " points too small for the fractions");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(derive_seed(seed, kSplitStream));
  std::shuffle(order.begin(), order.end(), rng);

  auto take = [&](std::size_t from, std::size_t count) {
    return gather(cloud, std::vector<std::size_t>(order.begin() + static_cast<std::ptrdiff_t>(from),
                                                  order.begin() + static_cast<std::ptrdiff_t>(from + count)));
  };
  DataSplit out;
  out.training = take(0, n_train);
  out.validation = take(n_train, n_val);
  out.test = take(n_train + n_val, n_test);
  out.seed = seed;
  out.scheme = f;
  return out;
}

std::vector<DataSplit> split_folds(std::span<const Point3> cloud, std::size_t folds, std::uint64_t seed) {
  const std::size_t n = cloud.size();
  if (folds < 2) throw InvalidArgument("k-fold split: need at least 2 folds");
  if (n < folds)
    throw InvalidArgument("k-fold split: " + std::to_string(folds) + " folds need at least as many points, got " +
                          std::to_string(n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(derive_seed(seed, kSplitStream));
  std::shuffle(order.begin(), order.end(), rng);

  const SplitScheme scheme = folds == n ? SplitScheme{LeaveOneOut{}} : SplitScheme{KFoldSplit{folds}};
  std::vector<DataSplit> out;
  out.reserve(folds);
  for (std::size_t k = 0; k < folds; ++k) {
    std::vector<std::size_t> hold;
    std::vector<std::size_t> train;
    for (std::size_t pos = 0; pos < n; ++pos) (pos % folds == k ? hold : train).push_back(order[pos]);
    DataSplit s;
    s.training = gather(cloud, std::move(train));
    s.validation = gather(cloud, std::move(hold));
    s.test = s.validation;
    s.seed = seed;
    s.scheme = scheme;
    s.fold = k;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<DataSplit> split(std::span<const Point3> cloud, const SplitScheme& scheme, std::uint64_t seed) {
  return std::visit(Overloaded{
                        [&](const RandomSplit& s) { return std::vector<DataSplit>{split_random(cloud, s, seed)}; },
                        [&](const KFoldSplit& s) { return split_folds(cloud, s.folds, seed); },
                        [&](const LeaveOneOut&) { return split_folds(cloud, cloud.size(), seed); },
                    },
                    scheme);
}

void FitConfig::validate() const {
  if (degree_x < 0 || degree_y < 0 || degree_x > 15 || degree_y > 15)
    throw InvalidArgument("fit config: degrees must lie in [0, 15]");
  if (max_iterations < 1) throw InvalidArgument("fit config: max_iterations must be >= 1");
  if (threshold && !(*threshold >= 0.0)) throw InvalidArgument("fit config: threshold must be >= 0");
  if (!(stagnation_tolerance >= 0.0)) throw InvalidArgument("fit config: stagnation tolerance must be >= 0");
  for (const auto& c : candidates()) c.validate();
  if (const auto* r = std::get_if<RandomSplit>(&split)) {
    if (!(r->train > 0 && r->validation > 0 && r->test > 0) || r->train + r->validation + r->test > 1.0 + 1e-9)
      throw InvalidArgument("fit config: split fractions must be positive with sum <= 1");
  }
  if (const auto* k = std::get_if<KFoldSplit>(&split); k && k->folds < 2)
    throw InvalidArgument("fit config: k-fold needs at least 2 folds");
}

std::vector<WeightSpec> FitConfig::candidates() const {
  if (parameter_grid.empty() || !weight.parameter()) return {weight};
  std::vector<WeightSpec> out;
  out.reserve(parameter_grid.size());
  for (double v : parameter_grid) out.push_back(weight.with_parameter(v));
  return out;
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::GmseIncreased: return "gmse_increased";
    case StopReason::MaxIterations: return "max_iterations";
    case StopReason::ThresholdMet: return "threshold_met";
    case StopReason::Stagnation: return "stagnation";
  }
  return "unknown";
}

TuneResult tune_parameters(const ControlPointEstimator& training, std::span<const Point3> validation,
                           const TensorSplineSpace& space, std::span<const WeightSpec> candidates,
                           unsigned threads) {
  if (candidates.empty()) throw InvalidArgument("tune_parameters: empty candidate grid");
  if (validation.empty()) throw InvalidArgument("tune_parameters: empty validation cloud");
  std::optional<TuneResult> best;
  std::vector<double> scores;
  scores.reserve(candidates.size());
  std::string last_error;
  for (const auto& spec : candidates) {
    std::optional<SplineSurface> surface;
    try {
      surface.emplace(space, training.estimate_grid(space, spec, threads));
    } catch (const ZeroWeight& e) {
      last_error = e.what();
    } catch (const InvalidArgument& e) {
      last_error = e.what();
    }
    if (!surface) {
      scores.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double score = gmse(*surface, validation);
    scores.push_back(score);
    if (!best || score < best->gmse) best.emplace(TuneResult{spec, score, std::move(*surface), {}});
  }
  if (!best) throw ZeroWeight("tune_parameters: every candidate failed (" + last_error + ")");
  best->candidate_gmse = std::move(scores);
  return std::move(*best);
}

TuneResult tune_parameters(std::span<const Point3> training, std::span<const Point3> validation,
                           const TensorSplineSpace& space, std::span<const WeightSpec> candidates,
                           unsigned threads) {
  if (training.empty()) throw InvalidArgument("tune_parameters: empty training cloud");
  return tune_parameters(ControlPointEstimator(PointCloud(training.begin(), training.end())), validation, space,
                         candidates, threads);
}

TensorSplineSpace refine_mesh(const TensorSplineSpace& space, const ElementErrorMap& errors, double threshold) {
  const auto spans_x = space.knots_x().nonempty_spans();
  const auto spans_y = space.knots_y().nonempty_spans();
  if (spans_x != errors.spans_x || spans_y != errors.spans_y || errors.lmse.rows != spans_x.size() ||
      errors.lmse.cols != spans_y.size())
    throw InvalidArgument("refine_mesh: error map does not match the mesh");

  const KnotVector& kx = space.knots_x();
  const KnotVector& ky = space.knots_y();
  std::set<double> mids_x;
  std::set<double> mids_y;
  for (std::size_t a = 0; a < spans_x.size(); ++a) {
    for (std::size_t b = 0; b < spans_y.size(); ++b) {
      if (!(errors.lmse(a, b) > threshold)) continue;
      const double mx = 0.5 * (kx[spans_x[a]] + kx[spans_x[a] + 1]);
      const double my = 0.5 * (ky[spans_y[b]] + ky[spans_y[b] + 1]);
      // Spans at the resolution limit of double cannot be halved.
      if (mx > kx[spans_x[a]] && mx < kx[spans_x[a] + 1]) mids_x.insert(mx);
      if (my > ky[spans_y[b]] && my < ky[spans_y[b] + 1]) mids_y.insert(my);
    }
  }
  KnotVector nx = kx;
  for (double t : mids_x) nx = nx.insert(t);
  KnotVector ny = ky;
  for (double t : mids_y) ny = ny.insert(t);
  return TensorSplineSpace(std::move(nx), std::move(ny));
}

FitResult fit_split(const DataSplit& data, const FitConfig& config, std::optional<Box2> domain) {
  const auto started = std::chrono::steady_clock::now();
  config.validate();
  if (data.training.empty()) throw InvalidArgument("fit: empty training set");
  if (data.validation.empty()) throw InvalidArgument("fit: empty validation set");

  Box2 box = domain.value_or(merge(bounding_box(data.training), bounding_box(data.validation)));
  if (!domain && !data.test.empty()) box = merge(box, bounding_box(data.test));

  const auto candidates = config.candidates();
  const ControlPointEstimator estimator(data.training);

  FitReport report;
  report.threshold = config.threshold.value_or(1e-2 * z_variance(data.training));
  report.training_size = data.training.size();
  report.validation_size = data.validation.size();
  report.test_size = data.test.size();

  auto run_iteration = [&](const TensorSplineSpace& space, std::size_t iteration) {
    try {
      return tune_parameters(estimator, data.validation, space, candidates, config.threads);
    } catch (const Error& e) {
      throw Error("fit: iteration " + std::to_string(iteration) + ": " + e.what());
    }
  };
  auto record = [&](const TensorSplineSpace& space, const TuneResult& t, std::size_t iteration) {
    report.iterations.push_back(IterationRecord{iteration, space.knots_x().element_count(),
                                                space.knots_y().element_count(), space.dimension(), t.weight,
                                                t.gmse, 0});
  };

  TensorSplineSpace space = TensorSplineSpace::single_element(box, config.degree_x, config.degree_y);
  TuneResult best = run_iteration(space, 1);
  record(space, best, 1);
  report.best_iteration = 1;
  report.stop_reason = StopReason::MaxIterations;

  for (std::size_t it = 2; it <= config.max_iterations; ++it) {
    const ElementErrorMap errors = lmse(best.surface, data.validation, space);
    const auto flagged = static_cast<std::size_t>(
        std::count_if(errors.lmse.values.begin(), errors.lmse.values.end(),
                      [&](double v) { return v > report.threshold; }));
    report.iterations.back().flagged_elements = flagged;
    TensorSplineSpace refined = refine_mesh(space, errors, report.threshold);
    if (flagged == 0 || refined == space) {
      report.stop_reason = StopReason::ThresholdMet;
      break;
    }

    TuneResult candidate = run_iteration(refined, it);
    record(refined, candidate, it);
    if (candidate.gmse > best.gmse) {
      report.stop_reason = StopReason::GmseIncreased;
      break;
    }
    const double improvement = best.gmse - candidate.gmse;
    best = std::move(candidate);
    space = std::move(refined);
    report.best_iteration = it;
    if (improvement < config.stagnation_tolerance) {
      report.stop_reason = StopReason::Stagnation;
      break;
    }
  }

  if (!data.test.empty()) report.test_stats = punctual_errors(best.surface, data.test);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return FitResult{std::move(best.surface), std::move(report)};
}

FitResult fit(std::span<const Point3> cloud, const FitConfig& config) {
  if (cloud.empty()) throw InvalidArgument("fit: empty cloud");
  config.validate();
  auto splits = split(cloud, config.split, config.seed);
  return fit_split(splits.front(), config, bounding_box(cloud));
}

CrossValidationResult cross_validate(std::span<const Point3> cloud, const FitConfig& config, std::size_t folds) {
  if (cloud.empty()) throw InvalidArgument("cross_validate: empty cloud");
  const Box2 box = bounding_box(cloud);
  CrossValidationResult out;
  for (const auto& fold : split_folds(cloud, folds, config.seed)) {
    FitResult r = [&] {
      try {
        return fit_split(fold, config, box);
      } catch (const Error& e) {
        throw Error("cross_validate: fold " + std::to_string(fold.fold) + ": " + e.what());
      }
    }();
    for (const auto& p : fold.test) out.residuals.push_back(p.z - r.surface.evaluate(p.x, p.y));
    out.folds.push_back(std::move(r.report));
  }
  out.pooled = error_stats(out.residuals);
  return out;
}

}  // namespace wqisa
