#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wqisa {

/// A (p+1)-regular knot vector: nondecreasing, boundary knots repeated exactly
/// p+1 times, interior knots at most p+1 times, at least p+1 basis functions.
///
/// Knot spans are addressed by the index of their left knot, so the nonempty
/// spans have indices in [degree(), size()-1]. Evaluation is right-continuous,
/// with the right end of the domain folded into the last nonempty span.
class KnotVector {
public:
  /// Validates and takes ownership of `knots`. Throws InvalidArgument when the
  /// sequence violates any of the invariants above.
  KnotVector(int degree, std::vector<double> knots);

  /// Open knot vector on [a, b] with `elements` equal spans. Interior knots are
  /// repeated `interior_multiplicity` times (1 for maximal smoothness, up to p+1).
  static KnotVector uniform(int degree, double a, double b, std::size_t elements,
                            int interior_multiplicity = 1);

  int degree() const noexcept { return degree_; }
  /// Number of basis functions n (knot count minus p+1).
  std::size_t size() const noexcept { return knots_.size() - static_cast<std::size_t>(degree_) - 1; }
  std::span<const double> knots() const noexcept { return knots_; }
  double operator[](std::size_t i) const noexcept { return knots_[i]; }
  double front() const noexcept { return knots_.front(); }
  double back() const noexcept { return knots_.back(); }

  bool contains(double t) const noexcept { return t >= front() && t <= back(); }

  /// Index mu with knots[mu] <= t < knots[mu+1]; t == back() maps to the last
  /// nonempty span. Throws OutOfDomain outside [front(), back()].
  std::size_t find_span(double t) const;

  /// Indices of the nonempty spans, ascending.
  std::vector<std::size_t> nonempty_spans() const;
  std::size_t element_count() const;

  /// Values of the p+1 basis functions B_{span-p}, ..., B_{span} at t.
  /// `out` must hold degree()+1 entries.
  void basis_functions(std::size_t span, double t, std::span<double> out) const;

  /// B_i(t) by the Cox-de Boor recursion; 0 outside [knots[i], knots[i+p+1]).
  /// Throws InvalidArgument when i >= size().
  double basis_value(std::size_t i, double t) const;

  /// Greville abscissae (knots[i+1] + ... + knots[i+p]) / p; span midpoints for p = 0.
  std::vector<double> knot_averages() const;

  std::size_t multiplicity(double t) const noexcept;

  /// Copy with t inserted. Requires front() < t < back() and the resulting
  /// multiplicity of t not to exceed p+1.
  KnotVector insert(double t) const;

  friend bool operator==(const KnotVector&, const KnotVector&) = default;

private:
  int degree_;
  std::vector<double> knots_;
};

/// Free-function spellings of the member operations.
inline double basis_value(const KnotVector& kv, std::size_t i, double t) { return kv.basis_value(i, t); }
inline std::vector<double> knot_averages(const KnotVector& kv) { return kv.knot_averages(); }
inline KnotVector insert_knot(const KnotVector& kv, double t) { return kv.insert(t); }

}  // namespace wqisa
