#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "qcoh/state.hpp"
#include "qcoh/state_zoo.hpp"

namespace qcoh::testing {

inline State plus_state_3q() {
  std::vector<Complex> amps(8, Complex(1.0 / std::sqrt(8.0), 0.0));
  return make_pure(amps, three_qubits());
}

inline State bell_phi_plus() {
  std::vector<Complex> amps(4, 0.0);
  amps[0] = amps[3] = 1.0 / std::sqrt(2.0);
  return make_pure(amps, Dims({2, 2}));
}

// |0><0| (x) |phi+><phi+| on three qubits
inline State zero_times_bell() {
  std::vector<Complex> amps(8, 0.0);
  amps[0] = amps[3] = 1.0 / std::sqrt(2.0);
  return make_pure(amps, three_qubits());
}

inline State single_qubit(double a, Complex b) {
  Matrix m(2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = std::conj(b);
  m(1, 1) = 1.0 - a;
  return State(std::move(m), Dims({2}));
}

inline bool entries_close(const State& x, const State& y, double tol) {
  return x.matrix().max_abs_diff(y.matrix()) <= tol;
}

inline const std::vector<Dims>& small_dims_pool() {
  static const std::vector<Dims> pool = {
      Dims({2}), Dims({3}), Dims({2, 2}), Dims({2, 3}), Dims({3, 3})};
  return pool;
}

}  // namespace qcoh::testing
