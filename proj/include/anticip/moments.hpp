#pragma once

namespace anticip {

// Raw moments m_k = E(z^k), k = 1..4, of a law on [-1, 1].
struct MomentTuple {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;

  double variance() const { return m2 - m1 * m1; }

  // Central moments, used by the exact quadratic-form variance.
  double central3() const { return m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1; }
  double central4() const {
    return m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
  }

  // Throws std::invalid_argument unless m2 >= m1^2 and m4 >= m2^2 (up to tol).
  void validate(double tol = 1e-12) const;

  // Moments of the point mass at y: m_k = y^k.
  static MomentTuple point_mass(double y) { return {y, y * y, y * y * y, y * y * y * y}; }
};

}  // namespace anticip
