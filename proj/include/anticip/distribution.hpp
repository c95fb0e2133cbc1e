#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "anticip/moments.hpp"

namespace anticip {

// One mixture component of a sampling law: uniform on [lo, hi] carrying
// `mass`, or an atom at lo when lo == hi.
struct LawSegment {
  double lo = 0.0;
  double hi = 0.0;
  double mass = 0.0;
};

// Law F of a single normalized spectral difference yhat on [-1, 1].
// Every law is a finite mixture of atoms and uniform segments, sampled by
// inverse CDF from one uniform variate.
class SamplingDistribution {
 public:
  // Uniform on [-1, 1]: m2 = 1/3, m4 = 1/5.
  static SamplingDistribution uniform();
  // +-y0 with equal mass: m2 = y0^2, m4 = y0^4.
  static SamplingDistribution two_point(double y0);
  // Throws std::invalid_argument if a segment leaves [-1, 1], has lo > hi or
  // negative mass, if masses do not sum to 1 within 1e-9, or if the law is
  // declared symmetric but m1 or m3 is nonzero.
  static SamplingDistribution table(std::vector<LawSegment> segments,
                                    bool declared_symmetric = false);
  // Rows "lo,hi,mass"; '#' starts a comment, a non-numeric first row is a header.
  static SamplingDistribution from_table_file(const std::string& path);
  // "uniform" | "two-point:<y0>" | "table:<path>"
  static SamplingDistribution parse(std::string_view spec);

  // Inverse CDF at u in [0, 1).
  double quantile(double u) const;

  const MomentTuple& moments() const { return moments_; }
  const std::vector<LawSegment>& segments() const { return segments_; }
  bool symmetric() const { return symmetric_; }
  const std::string& name() const { return name_; }

  // P(|yhat| < eps)
  double near_zero_probability(double eps) const;

 private:
  SamplingDistribution(std::vector<LawSegment> segments, bool symmetric, std::string name);

  std::vector<LawSegment> segments_;
  std::vector<double> cumulative_;  // upper CDF edge of each segment
  MomentTuple moments_;
  bool symmetric_ = false;
  std::string name_;
};

}  // namespace anticip
