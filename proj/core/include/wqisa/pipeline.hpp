#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wqisa/estimator.hpp"
#include "wqisa/metrics.hpp"
#include "wqisa/point_cloud.hpp"
#include "wqisa/spline_surface.hpp"
#include "wqisa/weights.hpp"

namespace wqisa {

// ---------------------------------------------------------------------------
// Data splitting
// ---------------------------------------------------------------------------

/// Training drawn uniformly at `train`; validation and test drawn from the complement.
struct RandomSplit {
  double train = 0.5;
  double validation = 0.25;
  double test = 0.25;
  friend bool operator==(const RandomSplit&, const RandomSplit&) = default;
};

/// K rotating (training, holdout) pairs; the holdout is both validation and test set.
struct KFoldSplit {
  std::size_t folds = 10;
  friend bool operator==(const KFoldSplit&, const KFoldSplit&) = default;
};

/// K-fold with one point per fold.
struct LeaveOneOut {
  friend bool operator==(const LeaveOneOut&, const LeaveOneOut&) = default;
};

using SplitScheme = std::variant<RandomSplit, KFoldSplit, LeaveOneOut>;

std::string describe(const SplitScheme& scheme);

/// Subsets keep the relative order of the input cloud.
struct DataSplit {
  PointCloud training;
  PointCloud validation;
  PointCloud test;
  std::uint64_t seed = 0;
  SplitScheme scheme = RandomSplit{};
  /// Fold number under KFold / LeaveOneOut, 0 otherwise.
  std::size_t fold = 0;
};

/// Throws InvalidArgument when a subset would be empty (Random needs >= 4 points)
/// or the fractions are not positive with sum <= 1.
DataSplit split_random(std::span<const Point3> cloud, const RandomSplit& fractions, std::uint64_t seed);

/// K folds of sizes differing by at most one, assigned after a seeded shuffle.
/// Throws InvalidArgument unless 2 <= K <= |cloud|.
std::vector<DataSplit> split_folds(std::span<const Point3> cloud, std::size_t folds, std::uint64_t seed);

/// One DataSplit for RandomSplit, one per fold otherwise.
std::vector<DataSplit> split(std::span<const Point3> cloud, const SplitScheme& scheme, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Configuration and reports
// ---------------------------------------------------------------------------

struct FitConfig {
  int degree_x = 2;
  int degree_y = 2;
  /// Weight kind and fixed settings; its tunable parameter is swept over `parameter_grid`.
  WeightSpec weight = WeightSpec::knn(1);
  /// Values tried for the tunable parameter, in order. Empty means "use `weight` as is".
  std::vector<double> parameter_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  /// LMSE refinement threshold; 1e-2 times the training z variance when unset.
  std::optional<double> threshold;
  std::size_t max_iterations = 15;
  /// Stop once the GMSE improves by less than this.
  double stagnation_tolerance = 1e-12;
  SplitScheme split = RandomSplit{};
  std::uint64_t seed = 0;
  /// Worker threads for coefficient estimation.
  unsigned threads = 1;

  /// Throws InvalidArgument on an inconsistent configuration.
  void validate() const;
  /// The weight specs tried by the tuner, in grid order.
  std::vector<WeightSpec> candidates() const;

  friend bool operator==(const FitConfig&, const FitConfig&) = default;
};

enum class StopReason { GmseIncreased, MaxIterations, ThresholdMet, Stagnation };
std::string to_string(StopReason reason);

struct IterationRecord {
  std::size_t iteration = 0;
  std::size_t elements_x = 0;
  std::size_t elements_y = 0;
  std::size_t coefficients = 0;
  WeightSpec weight;
  double gmse = 0.0;
  /// Elements whose LMSE exceeded the threshold after this iteration (0 if not computed).
  std::size_t flagged_elements = 0;
};

struct FitReport {
  std::vector<IterationRecord> iterations;
  StopReason stop_reason = StopReason::MaxIterations;
  /// 1-based iteration whose surface is returned.
  std::size_t best_iteration = 1;
  double threshold = 0.0;
  std::size_t training_size = 0;
  std::size_t validation_size = 0;
  std::size_t test_size = 0;
  /// Generalization error on the test set.
  std::optional<ErrorStats> test_stats;
  double test_mse() const { return test_stats ? test_stats->mse : 0.0; }
  /// Wall-clock time; never serialized, so reports stay reproducible.
  double wall_seconds = 0.0;

  const IterationRecord& best() const { return iterations.at(best_iteration - 1); }
};

struct FitResult {
  SplineSurface surface;
  FitReport report;
};

// ---------------------------------------------------------------------------
// Steps
// ---------------------------------------------------------------------------

struct TuneResult {
  WeightSpec weight;
  double gmse;
  SplineSurface surface;
  /// GMSE per candidate in grid order; NaN where estimation failed.
  std::vector<double> candidate_gmse;
};

/// Exhaustive search: fits one surface per candidate on the training estimator,
/// scores it by validation GMSE, returns the first minimiser. Candidates whose
/// estimation fails are skipped; throws ZeroWeight when all of them fail.
TuneResult tune_parameters(const ControlPointEstimator& training, std::span<const Point3> validation,
                           const TensorSplineSpace& space, std::span<const WeightSpec> candidates,
                           unsigned threads = 1);

TuneResult tune_parameters(std::span<const Point3> training, std::span<const Point3> validation,
                           const TensorSplineSpace& space, std::span<const WeightSpec> candidates,
                           unsigned threads = 1);

/// Inserts the x and y midpoints of every element with LMSE > threshold, each
/// distinct midpoint once. Returns an equal space when nothing is flagged.
/// Throws InvalidArgument if the map does not match the space's elements.
TensorSplineSpace refine_mesh(const TensorSplineSpace& space, const ElementErrorMap& errors, double threshold);

/// Full data-driven fit: split with config.split and config.seed (fold 0 for fold
/// schemes), then refine and retune until the validation GMSE rises, refinement
/// stops, or max_iterations is reached. The mesh starts as one element over the
/// bounding box of the whole cloud.
FitResult fit(std::span<const Point3> cloud, const FitConfig& config);

/// Fit on an existing split. The domain defaults to the bounding box of all subsets.
FitResult fit_split(const DataSplit& split, const FitConfig& config, std::optional<Box2> domain = std::nullopt);

struct CrossValidationResult {
  ErrorStats pooled;
  /// Holdout residuals concatenated fold by fold.
  std::vector<double> residuals;
  std::vector<FitReport> folds;
};

/// K-fold cross-validation (K = |cloud| is leave-one-out): one fit per fold, holdout
/// residuals pooled into a single ErrorStats.
CrossValidationResult cross_validate(std::span<const Point3> cloud, const FitConfig& config, std::size_t folds);

}  // namespace wqisa
