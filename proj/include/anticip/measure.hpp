#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace anticip {

// Finite point measure on the real line in standard scale (T / hbar = 1).
// Points are kept sorted ascending and distinct; weights are nonnegative and
// sum to one within 1e-12.
class DiscreteMeasure {
 public:
  // Sorts the points and merges exact duplicates. Throws std::invalid_argument
  // on size mismatch, empty input, non-finite values, negative weights or a
  // total weight off by more than 1e-12.
  DiscreteMeasure(std::vector<double> points, std::vector<double> weights);

  std::span<const double> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return points_.size(); }

  // Same weights at points shifted by c.
  DiscreteMeasure translated(double c) const;

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
};

}  // namespace anticip
