#pragma once

#include <cmath>
#include <span>

#include "qcoh/state.hpp"

namespace qcoh {

// l1 norm of coherence in the computational basis: sum of the moduli of
// all off-diagonal entries.
inline double l1_coherence(const Matrix& m) {
  double sum = 0.0;
  for (int i = 0; i < m.side(); ++i)
    for (int j = 0; j < m.side(); ++j) {
      if (i == j) continue;
      const Complex& z = m(i, j);
      sum += std::hypot(z.real(), z.imag());
    }
  return sum;
}

inline double l1_coherence(const State& s) { return l1_coherence(s.matrix()); }

// Coherence of a tensor product from the factor coherences.
inline double product_law(double ca, double cb) { return ca + cb + ca * cb; }

// Fold of product_law; equals prod(1 + c_i) - 1.
inline double product_law_n(std::span<const double> values) {
  double acc = 0.0;
  for (double c : values) acc = product_law(acc, c);
  return acc;
}

inline double product_law_n(std::initializer_list<double> values) {
  return product_law_n(std::span<const double>(values.begin(), values.size()));
}

// Upper bound for cx*cy: ((cx+cy)/2)^2.
inline double am_gm_bound(double cx, double cy) {
  const double s = cx + cy;
  return s * s / 4.0;
}

}  // namespace qcoh
