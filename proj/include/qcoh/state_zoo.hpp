#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qcoh/decomposition.hpp"
#include "qcoh/state.hpp"

namespace qcoh {

// ---------------------------------------------------------------------------
// Named three-qubit / four-qubit / three-qutrit states
// ---------------------------------------------------------------------------

inline const Dims& three_qubits() {
  static const Dims d(std::vector<int>{2, 2, 2});
  return d;
}

inline const Dims& four_qubits() {
  static const Dims d(std::vector<int>{2, 2, 2, 2});
  return d;
}

inline const Dims& three_qutrits() {
  static const Dims d(std::vector<int>{3, 3, 3});
  return d;
}

// (|100> + |010> + |001|)/sqrt(3)
inline State w_state() {
  std::vector<Complex> amps(8, 0.0);
  const double a = 1.0 / std::sqrt(3.0);
  amps[4] = amps[2] = amps[1] = a;
  return make_pure(amps, three_qubits());
}

// cos(theta)|000> + e^{i delta} sin(theta)|111>
inline State ghz_state(double theta, double delta) {
  std::vector<Complex> amps(8, 0.0);
  amps[0] = std::cos(theta);
  amps[7] = std::polar(std::sin(theta), delta);
  return make_pure(amps, three_qubits());
}

// l0|101> + l1|110> + l2|111>, product across the A cut
inline State bisep_pure(double l0, double l1, double l2, double tol = 1e-9) {
  std::vector<Complex> amps(8, 0.0);
  amps[5] = l0;
  amps[6] = l1;
  amps[7] = l2;
  const double n2 = l0 * l0 + l1 * l1 + l2 * l2;
  if (std::abs(std::sqrt(n2) - 1.0) > tol)
    fail(ErrorKind::not_normalized, "coefficients must satisfy sum of squares 1");
  return make_pure(amps, three_qubits());
}

// a0|000> + a1|100> + |111>/sqrt(2); requires a0^2 + a1^2 = 1/2
inline State tilted_ghz(double a0, double a1, double tol = 1e-9) {
  if (std::abs(a0 * a0 + a1 * a1 - 0.5) > tol)
    fail(ErrorKind::normalization_violated,
         "coefficients must satisfy a0^2 + a1^2 = 1/2");
  std::vector<Complex> amps(8, 0.0);
  amps[0] = a0;
  amps[4] = a1;
  amps[7] = 1.0 / std::sqrt(2.0);
  return make_pure(amps, three_qubits());
}

inline State diagonal_projector(const Dims& dims, int basis_index) {
  std::vector<Complex> amps(static_cast<size_t>(dims.total()), 0.0);
  amps[static_cast<size_t>(basis_index)] = 1.0;
  return make_pure(amps, dims);
}

// q |0><0|_A (x) |phi+><phi+|_BC + (1-q) |1><1|_B (x) |phi-><phi-|_AC,
// with zero weight on the C cut to keep the canonical three-term shape.
inline Decomposition bell_mixture(double q) {
  if (q < 0.0 || q > 1.0)
    fail(ErrorKind::weight_out_of_range, "q must lie in [0,1]");
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<Complex> v1(8, 0.0);
  v1[0] = s;  // |000>
  v1[3] = s;  // |011>
  std::vector<Complex> v2(8, 0.0);
  v2[2] = s;   // |010>
  v2[7] = -s;  // |111>
  std::vector<Component> comps;
  comps.emplace_back(q, make_pure(v1, three_qubits()), Cut{0});
  comps.emplace_back(1.0 - q, make_pure(v2, three_qubits()), Cut{1});
  comps.emplace_back(0.0, diagonal_projector(three_qubits(), 0), Cut{2});
  return Decomposition(std::move(comps));
}

// q GHZ + (1-q) W, tagged with the canonical weights (q on the A cut,
// 1-q on the B cut, zero on the C cut).
inline Decomposition ghz_w_mixture(double q) {
  if (q < 0.0 || q > 1.0)
    fail(ErrorKind::weight_out_of_range, "q must lie in [0,1]");
  std::vector<Component> comps;
  comps.emplace_back(q, ghz_state(std::numbers::pi / 4.0, 0.0), Cut{0});
  comps.emplace_back(1.0 - q, w_state(), Cut{1});
  comps.emplace_back(0.0, diagonal_projector(three_qubits(), 0), Cut{2});
  return Decomposition(std::move(comps));
}

// Four-qubit mixed state, half |0><0|_A (x) |phi+><phi+|_BCD and half
// |1><1|_B (x) |phi-><phi-|_ACD, with the canonical zero-weight tail.
inline Decomposition four_qubit_bisep() {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<Complex> v1(16, 0.0);
  v1[4] = s;  // |0100>
  v1[2] = s;  // |0010>
  std::vector<Complex> v2(16, 0.0);
  v2[12] = s;  // |1100>
  v2[6] = -s;  // |0110>
  std::vector<Component> comps;
  comps.emplace_back(0.5, make_pure(v1, four_qubits()), Cut{0});
  comps.emplace_back(0.5, make_pure(v2, four_qubits()), Cut{1});
  comps.emplace_back(0.0, diagonal_projector(four_qubits(), 0), Cut{2});
  comps.emplace_back(0.0, diagonal_projector(four_qubits(), 0), Cut{3});
  return Decomposition(std::move(comps));
}

// Equal diagonal mixture of |0000>, |0011>, |1000>, |1111>
inline State four_qubit_diag() {
  Matrix m(16);
  m(0, 0) = 0.25;
  m(3, 3) = 0.25;
  m(8, 8) = 0.25;
  m(15, 15) = 0.25;
  return State(std::move(m), four_qubits(), Purity::mixed);
}

// |0> (x) (|12> + |01> + |20>)/sqrt(3) on three qutrits
inline State qutrit_bisep() {
  std::vector<Complex> amps(27, 0.0);
  const double a = 1.0 / std::sqrt(3.0);
  amps[1 * 3 + 2] = a;  // |012>
  amps[0 * 3 + 1] = a;  // |001>
  amps[2 * 3 + 0] = a;  // |020>
  return make_pure(amps, three_qutrits());
}

struct AppendixSet {
  Decomposition four_qubit_mixed;
  State four_qubit_diagonal;
  State qutrit_pure;
};

inline AppendixSet appendix_states() {
  return AppendixSet{four_qubit_bisep(), four_qubit_diag(), qutrit_bisep()};
}

// ---------------------------------------------------------------------------
// Seeded random samplers for property tests
// ---------------------------------------------------------------------------

// Deterministic across platforms: uniforms from the raw engine stream,
// normals by Box-Muller.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex complex_normal() { return Complex(normal(), normal()); }

  int below(int n) { return static_cast<int>(uniform() * n) % n; }

private:
  std::mt19937_64 eng_;
};

inline State random_pure_state(const Dims& dims, Rng& rng) {
  const int n = dims.total();
  std::vector<Complex> amps(static_cast<size_t>(n));
  double norm2 = 0.0;
  for (auto& a : amps) {
    a = rng.complex_normal();
    norm2 += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& a : amps) a *= inv;
  return make_pure(amps, dims);
}

// Convex mixture of a few random pure states.
inline State random_mixed_state(const Dims& dims, Rng& rng) {
  const int k = 2 + rng.below(3);
  std::vector<std::pair<double, State>> parts;
  std::vector<double> w(static_cast<size_t>(k));
  double wsum = 0.0;
  for (double& x : w) {
    x = -std::log(1.0 - rng.uniform());
    wsum += x;
  }
  for (int i = 0; i < k; ++i)
    parts.emplace_back(w[static_cast<size_t>(i)] / wsum,
                       random_pure_state(dims, rng));
  return mix(parts);
}

inline State random_state(const Dims& dims, Rng& rng, bool pure) {
  return pure ? random_pure_state(dims, rng) : random_mixed_state(dims, rng);
}

// Kronecker product of independent random pure single-party factors.
inline State random_product(const Dims& dims, std::uint64_t seed) {
  Rng rng(seed);
  State acc = random_pure_state(Dims({dims.local(0)}), rng);
  for (int k = 1; k < dims.count(); ++k)
    acc = kron(acc, random_pure_state(Dims({dims.local(k)}), rng));
  return acc;
}

inline std::vector<double> dirichlet_weights(int k, Rng& rng) {
  std::vector<double> w(static_cast<size_t>(k));
  double sum = 0.0;
  for (double& x : w) {
    x = -std::log(1.0 - rng.uniform());
    sum += x;
  }
  for (double& x : w) x /= sum;
  return w;
}

// k components, each a product across a uniformly chosen one-vs-rest cut;
// even components use pure sides, odd components mixed sides.
inline Decomposition random_bisep_ensemble(const Dims& dims, int k,
                                           std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<double> w = dirichlet_weights(k, rng);
  std::vector<Component> comps;
  for (int i = 0; i < k; ++i) {
    const Cut cut{rng.below(dims.count())};
    std::vector<int> rest_dims;
    for (int j = 0; j < dims.count(); ++j)
      if (j != cut.solo) rest_dims.push_back(dims.local(j));
    const bool pure = (i % 2 == 0);
    State solo = random_state(Dims({dims.local(cut.solo)}), rng, pure);
    State rest = random_state(Dims(rest_dims), rng, pure);
    comps.emplace_back(w[static_cast<size_t>(i)],
                       product_at(solo, rest, cut.solo), cut);
  }
  return Decomposition(std::move(comps));
}

// k components, each a product of random single-party states.
inline Decomposition random_sep_ensemble(const Dims& dims, int k,
                                         std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<double> w = dirichlet_weights(k, rng);
  std::vector<Component> comps;
  for (int i = 0; i < k; ++i) {
    const bool pure = (i % 2 == 0);
    std::vector<State> factors;
    for (int j = 0; j < dims.count(); ++j)
      factors.push_back(random_state(Dims({dims.local(j)}), rng, pure));
    Component c = product_component(w[static_cast<size_t>(i)], std::move(factors));
    comps.push_back(std::move(c));
  }
  return Decomposition(std::move(comps));
}

}  // namespace qcoh
