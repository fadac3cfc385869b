#include "wqisa/knot_vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wqisa/errors.hpp"

namespace wqisa {
namespace {

std::size_t run_length(const std::vector<double>& v, std::size_t from) {
  std::size_t end = from;
  while (end < v.size() && v[end] == v[from]) ++end;
  return end - from;
}

}  // namespace

KnotVector::KnotVector(int degree, std::vector<double> knots) : degree_(degree), knots_(std::move(knots)) {
  if (degree_ < 0) throw InvalidArgument("knot vector: negative degree");
  const auto order = static_cast<std::size_t>(degree_) + 1;
  if (knots_.size() < 2 * order)
    throw InvalidArgument("knot vector: need at least " + std::to_string(2 * order) + " knots for degree " +
                          std::to_string(degree_));
  for (double k : knots_)
    if (!std::isfinite(k)) throw InvalidArgument("knot vector: non-finite knot");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (knots_[i] < knots_[i - 1]) throw InvalidArgument("knot vector: knots must be nondecreasing");
  if (!(knots_.front() < knots_.back())) throw InvalidArgument("knot vector: empty domain");

  // Boundary runs must be exactly p+1 long; interior runs at most p+1.
  std::size_t i = 0;
  while (i < knots_.size()) {
    const std::size_t run = run_length(knots_, i);
    const bool boundary = i == 0 || i + run == knots_.size();
    if (boundary && run != order)
      throw InvalidArgument("knot vector: boundary knot " + std::to_string(knots_[i]) + " has multiplicity " +
                            std::to_string(run) + ", expected " + std::to_string(order));
    if (!boundary && run > order)
      throw InvalidArgument("knot vector: interior knot " + std::to_string(knots_[i]) + " has multiplicity " +
                            std::to_string(run) + " > " + std::to_string(order));
    i += run;
  }
}

KnotVector KnotVector::uniform(int degree, double a, double b, std::size_t elements, int interior_multiplicity) {
  if (elements == 0) throw InvalidArgument("uniform knot vector: need at least one element");
  if (degree < 0) throw InvalidArgument("uniform knot vector: negative degree");
  if (interior_multiplicity < 1 || interior_multiplicity > degree + 1)
    throw InvalidArgument("uniform knot vector: interior multiplicity out of [1, p+1]");
  std::vector<double> knots(static_cast<std::size_t>(degree) + 1, a);
  for (std::size_t e = 1; e < elements; ++e) {
    const double t = a + (b - a) * static_cast<double>(e) / static_cast<double>(elements);
    knots.insert(knots.end(), static_cast<std::size_t>(interior_multiplicity), t);
  }
  knots.insert(knots.end(), static_cast<std::size_t>(degree) + 1, b);
  return KnotVector(degree, std::move(knots));
}

std::size_t KnotVector::find_span(double t) const {
  if (!contains(t))
    throw OutOfDomain(t, 0.0, "parameter " + std::to_string(t) + " outside knot domain [" +
                                  std::to_string(front()) + ", " + std::to_string(back()) + "]");
  const std::size_t n = size();
  if (t == back()) return n - 1;
  // First knot strictly greater than t; the span starts one before it.
  const auto it = std::upper_bound(knots_.begin() + degree_, knots_.begin() + static_cast<std::ptrdiff_t>(n) + 1, t);
  return static_cast<std::size_t>(it - knots_.begin()) - 1;
}

std::vector<std::size_t> KnotVector::nonempty_spans() const {
  std::vector<std::size_t> spans;
  for (std::size_t mu = static_cast<std::size_t>(degree_); mu < size(); ++mu)
    if (knots_[mu] < knots_[mu + 1]) spans.push_back(mu);
  return spans;
}

std::size_t KnotVector::element_count() const { return nonempty_spans().size(); }

void KnotVector::basis_functions(std::size_t span, double t, std::span<double> out) const {
  const auto p = static_cast<std::size_t>(degree_);
  // Triangular Cox-de Boor scheme; denominators are bounded below by the span length.
  double left[32];
  double right[32];
  if (p >= 32) throw InvalidArgument("basis_functions: degree too large");
  out[0] = 1.0;
  for (std::size_t j = 1; j <= p; ++j) {
    left[j] = t - knots_[span + 1 - j];
    right[j] = knots_[span + j] - t;
    double saved = 0.0;
    for (std::size_t r = 0; r < j; ++r) {
      const double temp = out[r] / (right[r + 1] + left[j - r]);
      out[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    out[j] = saved;
  }
}

double KnotVector::basis_value(std::size_t i, double t) const {
  if (i >= size())
    throw InvalidArgument("basis_value: index " + std::to_string(i) + " out of range [0, " +
                          std::to_string(size()) + ")");
  if (!contains(t)) return 0.0;
  const std::size_t span = find_span(t);
  const auto p = static_cast<std::size_t>(degree_);
  if (i + p < span || i > span) return 0.0;
  std::vector<double> values(p + 1);
  basis_functions(span, t, values);
  return values[i + p - span];
}

std::vector<double> KnotVector::knot_averages() const {
  const std::size_t n = size();
  std::vector<double> averages(n);
  if (degree_ == 0) {
    for (std::size_t i = 0; i < n; ++i) averages[i] = 0.5 * (knots_[i] + knots_[i + 1]);
    return averages;
  }
  const auto p = static_cast<std::size_t>(degree_);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t l = 1; l <= p; ++l) sum += knots_[i + l];
    // Keep the average inside [front, back] despite rounding.
    averages[i] = std::clamp(sum / static_cast<double>(p), knots_[i + 1], knots_[i + p]);
  }
  return averages;
}

std::size_t KnotVector::multiplicity(double t) const noexcept {
  return static_cast<std::size_t>(std::count(knots_.begin(), knots_.end(), t));
}

KnotVector KnotVector::insert(double t) const {
  if (!(t > front() && t < back()))
    throw InvalidArgument("insert_knot: " + std::to_string(t) + " outside the open domain (" +
                          std::to_string(front()) + ", " + std::to_string(back()) + ")");
  if (multiplicity(t) + 1 > static_cast<std::size_t>(degree_) + 1)
    throw InvalidArgument("insert_knot: multiplicity of " + std::to_string(t) + " would exceed p+1");
  std::vector<double> knots = knots_;
  knots.insert(std::upper_bound(knots.begin(), knots.end(), t), t);
  return KnotVector(degree_, std::move(knots));
}

}  // namespace wqisa
