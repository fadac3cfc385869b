#include "wqisa/spline_surface.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "wqisa/errors.hpp"

namespace wqisa {
namespace {

constexpr std::size_t kMaxOrder = 16;

KnotVector span_knots(int degree, double a, double b) {
  // A degenerate extent still needs a nonempty parametric interval.
  if (!(a < b)) {
    a -= 0.5;
    b += 0.5;
  }
  return KnotVector::uniform(degree, a, b, 1);
}

}  // namespace

TensorSplineSpace::TensorSplineSpace(KnotVector knots_x, KnotVector knots_y)
    : knots_x_(std::move(knots_x)), knots_y_(std::move(knots_y)) {
  if (static_cast<std::size_t>(knots_x_.degree()) >= kMaxOrder ||
      static_cast<std::size_t>(knots_y_.degree()) >= kMaxOrder)
    throw InvalidArgument("tensor spline space: degree must be below 16");
}

TensorSplineSpace TensorSplineSpace::single_element(const Box2& box, int degree_x, int degree_y) {
  return TensorSplineSpace(span_knots(degree_x, box.x_min, box.x_max), span_knots(degree_y, box.y_min, box.y_max));
}

TensorSplineSpace TensorSplineSpace::uniform(const Box2& box, int degree_x, int degree_y, std::size_t ex,
                                             std::size_t ey) {
  const auto base = single_element(box, degree_x, degree_y).domain();
  return TensorSplineSpace(KnotVector::uniform(degree_x, base.x_min, base.x_max, ex),
                           KnotVector::uniform(degree_y, base.y_min, base.y_max, ey));
}

Box2 TensorSplineSpace::domain() const noexcept {
  return Box2{knots_x_.front(), knots_x_.back(), knots_y_.front(), knots_y_.back()};
}

ElementIndex TensorSplineSpace::element_of(double x, double y) const {
  if (!contains(x, y))
    throw OutOfDomain(x, y, "point (" + std::to_string(x) + ", " + std::to_string(y) +
                                ") outside the spline domain");
  return ElementIndex{knots_x_.find_span(x), knots_y_.find_span(y)};
}

SplineSurface::SplineSurface(TensorSplineSpace space, Grid coefficients)
    : space_(std::move(space)), coefficients_(std::move(coefficients)) {
  if (coefficients_.rows != space_.size_x() || coefficients_.cols != space_.size_y() ||
      coefficients_.values.size() != coefficients_.rows * coefficients_.cols)
    throw InvalidArgument("spline surface: coefficient grid is " + std::to_string(coefficients_.rows) + "x" +
                          std::to_string(coefficients_.cols) + ", space needs " + std::to_string(space_.size_x()) +
                          "x" + std::to_string(space_.size_y()));
}

double SplineSurface::evaluate(double x, double y) const {
  const auto [mu, nu] = space_.element_of(x, y);
  const auto px = static_cast<std::size_t>(space_.knots_x().degree());
  const auto py = static_cast<std::size_t>(space_.knots_y().degree());
  std::array<double, kMaxOrder> bx{};
  std::array<double, kMaxOrder> by{};
  space_.knots_x().basis_functions(mu, x, std::span(bx.data(), px + 1));
  space_.knots_y().basis_functions(nu, y, std::span(by.data(), py + 1));

  double sum = 0.0;
  double lo = coefficients_(mu - px, nu - py);
  double hi = lo;
  for (std::size_t a = 0; a <= px; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b <= py; ++b) {
      const double c = coefficients_(mu - px + a, nu - py + b);
      row += c * by[b];
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    sum += row * bx[a];
  }
  return std::clamp(sum, lo, hi);
}

SplineSurface SplineSurface::insert_knot_x(double t) const {
  const KnotVector& kv = space_.knots_x();
  const KnotVector refined = kv.insert(t);
  const auto p = static_cast<std::size_t>(kv.degree());
  const std::size_t k = kv.find_span(t);
  const std::size_t n = kv.size();
  Grid out(n + 1, coefficients_.cols);
  for (std::size_t j = 0; j < coefficients_.cols; ++j) {
    for (std::size_t i = 0; i <= n; ++i) {
      if (i + p <= k) {
        out(i, j) = coefficients_(i, j);
      } else if (i > k) {
        out(i, j) = coefficients_(i - 1, j);
      } else {
        const double alpha = (t - kv[i]) / (kv[i + p] - kv[i]);
        out(i, j) = alpha * coefficients_(i, j) + (1.0 - alpha) * coefficients_(i - 1, j);
      }
    }
  }
  return SplineSurface(TensorSplineSpace(refined, space_.knots_y()), std::move(out));
}

SplineSurface SplineSurface::insert_knot_y(double t) const {
  const KnotVector& kv = space_.knots_y();
  const KnotVector refined = kv.insert(t);
  const auto p = static_cast<std::size_t>(kv.degree());
  const std::size_t k = kv.find_span(t);
  const std::size_t n = kv.size();
  Grid out(coefficients_.rows, n + 1);
  for (std::size_t i = 0; i < coefficients_.rows; ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      if (j + p <= k) {
        out(i, j) = coefficients_(i, j);
      } else if (j > k) {
        out(i, j) = coefficients_(i, j - 1);
      } else {
        const double alpha = (t - kv[j]) / (kv[j + p] - kv[j]);
        out(i, j) = alpha * coefficients_(i, j) + (1.0 - alpha) * coefficients_(i, j - 1);
      }
    }
  }
  return SplineSurface(TensorSplineSpace(space_.knots_x(), refined), std::move(out));
}

}  // namespace wqisa
