#include "anticip/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace anticip {

DiscreteMeasure::DiscreteMeasure(std::vector<double> points, std::vector<double> weights) {
  if (points.size() != weights.size()) {
    throw std::invalid_argument("DiscreteMeasure: points and weights differ in length");
  }
  if (points.empty()) throw std::invalid_argument("DiscreteMeasure: empty measure");

  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(points.size());
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i]) || !std::isfinite(weights[i])) {
      throw std::invalid_argument("DiscreteMeasure: non-finite point or weight");
    }
    if (weights[i] < 0.0) throw std::invalid_argument("DiscreteMeasure: negative weight");
    atoms.emplace_back(points[i], weights[i]);
    total += weights[i];
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("DiscreteMeasure: weights must sum to 1");
  }
  std::sort(atoms.begin(), atoms.end());
  for (const auto& [x, w] : atoms) {
    if (!points_.empty() && points_.back() == x) {
      weights_.back() += w;
    } else {
      points_.push_back(x);
      weights_.push_back(w);
    }
  }
}

DiscreteMeasure DiscreteMeasure::translated(double c) const {
  std::vector<double> shifted(points_.begin(), points_.end());
  for (double& x : shifted) x += c;
  return DiscreteMeasure(std::move(shifted), weights_);
}

}  // namespace anticip
