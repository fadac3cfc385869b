#include "wqisa/mba.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "wqisa/errors.hpp"

namespace wqisa {

MbaSurface::MbaSurface(std::vector<SplineSurface> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw InvalidArgument("mba surface: needs at least one level");
  const Box2 d = levels_.front().space().domain();
  for (const auto& level : levels_) {
    const Box2 e = level.space().domain();
    if (e.x_min != d.x_min || e.x_max != d.x_max || e.y_min != d.y_min || e.y_max != d.y_max)
      throw InvalidArgument("mba surface: levels must share one domain");
  }
}

double MbaSurface::evaluate(double x, double y) const {
  double sum = 0.0;
  for (const auto& level : levels_) sum += level.evaluate(x, y);
  return sum;
}

MbaSurface MbaSurface::truncated(std::size_t count) const {
  if (count == 0 || count > levels_.size()) throw InvalidArgument("mba surface: truncation count out of range");
  return MbaSurface(std::vector<SplineSurface>(levels_.begin(), levels_.begin() + static_cast<std::ptrdiff_t>(count)));
}

Grid mba_level_coefficients(std::span<const Point3> cloud, const TensorSplineSpace& space) {
  const KnotVector& kx = space.knots_x();
  const KnotVector& ky = space.knots_y();
  const auto px = static_cast<std::size_t>(kx.degree());
  const auto py = static_cast<std::size_t>(ky.degree());
  Grid num(space.size_x(), space.size_y());
  Grid den(space.size_x(), space.size_y());
  std::array<double, 16> bx{};
  std::array<double, 16> by{};

  for (const auto& p : cloud) {
    if (!space.contains(p.x, p.y)) continue;
    const auto [mu, nu] = space.element_of(p.x, p.y);
    kx.basis_functions(mu, p.x, std::span(bx.data(), px + 1));
    ky.basis_functions(nu, p.y, std::span(by.data(), py + 1));
    double sum_sq = 0.0;
    for (std::size_t a = 0; a <= px; ++a)
      for (std::size_t b = 0; b <= py; ++b) sum_sq += (bx[a] * by[b]) * (bx[a] * by[b]);
    for (std::size_t a = 0; a <= px; ++a) {
      for (std::size_t b = 0; b <= py; ++b) {
        const double bk = bx[a] * by[b];
        if (bk == 0.0) continue;
        const double phi = bk * p.z / sum_sq;
        num(mu - px + a, nu - py + b) += bk * bk * phi;
        den(mu - px + a, nu - py + b) += bk * bk;
      }
    }
  }

  Grid coeffs(space.size_x(), space.size_y());
  for (std::size_t i = 0; i < coeffs.values.size(); ++i)
    coeffs.values[i] = den.values[i] > 0.0 ? num.values[i] / den.values[i] : 0.0;
  return coeffs;
}

MbaFitResult fit_mba(std::span<const Point3> cloud, std::span<const Point3> validation, const MbaOptions& options) {
  if (cloud.empty()) throw InvalidArgument("fit_mba: empty cloud");
  if (options.max_levels < 1) throw InvalidArgument("fit_mba: max_levels must be >= 1");
  if (options.max_levels > 30) throw InvalidArgument("fit_mba: max_levels must be <= 30");

  Box2 box = options.domain.value_or(bounding_box(cloud));
  if (!options.domain && !validation.empty()) {
    const Box2 vb = bounding_box(validation);
    box = Box2{std::min(box.x_min, vb.x_min), std::max(box.x_max, vb.x_max), std::min(box.y_min, vb.y_min),
               std::max(box.y_max, vb.y_max)};
  }

  PointCloud residual(cloud.begin(), cloud.end());
  std::vector<double> val_pred(validation.size(), 0.0);
  std::vector<SplineSurface> levels;
  std::vector<MbaLevelRecord> history;
  double best_gmse = std::numeric_limits<double>::infinity();
  std::size_t best_count = 1;

  for (std::size_t level = 0; level < options.max_levels; ++level) {
    const std::size_t elements = std::size_t{1} << level;
    auto space = TensorSplineSpace::uniform(box, options.degree_x, options.degree_y, elements, elements);
    SplineSurface surface(space, mba_level_coefficients(residual, space));

    double rss = 0.0;
    for (auto& p : residual) {
      p.z -= surface.evaluate(p.x, p.y);
      rss += p.z * p.z;
    }
    MbaLevelRecord rec{level, elements, std::sqrt(rss / static_cast<double>(residual.size())),
                       std::numeric_limits<double>::quiet_NaN()};

    if (!validation.empty()) {
      double sse = 0.0;
      for (std::size_t i = 0; i < validation.size(); ++i) {
        val_pred[i] += surface.evaluate(validation[i].x, validation[i].y);
        const double r = validation[i].z - val_pred[i];
        sse += r * r;
      }
      rec.validation_gmse = sse / static_cast<double>(validation.size());
    }
    levels.push_back(std::move(surface));
    history.push_back(rec);

    if (validation.empty()) {
      best_count = levels.size();
      continue;
    }
    if (rec.validation_gmse > best_gmse) break;
    // Ties keep the coarser surface.
    if (rec.validation_gmse < best_gmse) {
      best_gmse = rec.validation_gmse;
      best_count = levels.size();
    }
  }

  MbaSurface all(std::move(levels));
  return MbaFitResult{all.truncated(best_count), std::move(history), best_count};
}

}  // namespace wqisa
