#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wqisa/knot_vector.hpp"
#include "wqisa/point_cloud.hpp"

namespace wqisa {

/// Knot-span indices of a mesh element.
struct ElementIndex {
  std::size_t mu = 0;
  std::size_t nu = 0;
  friend bool operator==(const ElementIndex&, const ElementIndex&) = default;
};

/// Tensor-product spline space S_{p,[x,y]} of dimension n_x * n_y.
class TensorSplineSpace {
public:
  TensorSplineSpace(KnotVector knots_x, KnotVector knots_y);

  /// Single-element space over `box` with maximal boundary multiplicities.
  static TensorSplineSpace single_element(const Box2& box, int degree_x, int degree_y);
  /// Uniform mesh with `ex` by `ey` elements over `box`.
  static TensorSplineSpace uniform(const Box2& box, int degree_x, int degree_y,
                                   std::size_t ex, std::size_t ey);

  const KnotVector& knots_x() const noexcept { return knots_x_; }
  const KnotVector& knots_y() const noexcept { return knots_y_; }
  std::size_t size_x() const noexcept { return knots_x_.size(); }
  std::size_t size_y() const noexcept { return knots_y_.size(); }
  std::size_t dimension() const noexcept { return size_x() * size_y(); }

  Box2 domain() const noexcept;
  bool contains(double x, double y) const noexcept {
    return knots_x_.contains(x) && knots_y_.contains(y);
  }

  /// Span indices (mu, nu) of the element holding (x, y). Throws OutOfDomain.
  ElementIndex element_of(double x, double y) const;

  friend bool operator==(const TensorSplineSpace&, const TensorSplineSpace&) = default;

private:
  KnotVector knots_x_;
  KnotVector knots_y_;
};

inline ElementIndex element_of(const TensorSplineSpace& space, double x, double y) {
  return space.element_of(x, y);
}

/// Row-major grid of reals; entry (i, j) lives at i * cols + j.
struct Grid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Grid() = default;
  Grid(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// A tensor-product spline: a space plus its n_x by n_y coefficient grid.
/// Coefficient (i, j) multiplies B_i(x) * B_j(y).
class SplineSurface {
public:
  SplineSurface(TensorSplineSpace space, Grid coefficients);

  const TensorSplineSpace& space() const noexcept { return space_; }
  const Grid& coefficients() const noexcept { return coefficients_; }

  /// Sum over the (p_x+1)(p_y+1) active tensor B-splines at (x, y). The result is
  /// a convex combination of the active coefficients and is kept inside their
  /// range even under round-off. Throws OutOfDomain off the domain rectangle.
  double evaluate(double x, double y) const;
  double operator()(double x, double y) const { return evaluate(x, y); }

  /// Equivalent surface over knots_x with t inserted (Boehm's algorithm).
  SplineSurface insert_knot_x(double t) const;
  SplineSurface insert_knot_y(double t) const;

private:
  TensorSplineSpace space_;
  Grid coefficients_;
};

/// wQISA surfaces are plain tensor splines whose coefficients came from the estimator.
using WqisaSurface = SplineSurface;

inline double evaluate_surface(const SplineSurface& s, double x, double y) { return s.evaluate(x, y); }

}  // namespace wqisa
