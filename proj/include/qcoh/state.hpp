#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qcoh/matrix.hpp"

namespace qcoh {

enum class Purity { pure, mixed, unknown };

struct Tolerances {
  double hermit = 1e-9;  // hermiticity and trace
  double psd = 1e-8;     // smallest eigenvalue
};

enum class Validation { none, basic, full };

struct ValidationReport {
  double hermiticity_dev = 0.0;
  double trace_dev = 0.0;
  double min_eigenvalue = 0.0;
  bool hermitian = false;
  bool unit_trace = false;
  bool positive = false;

  bool ok() const { return hermitian && unit_trace && positive; }
};

// Density matrix tagged with per-subsystem dimensions.
//
// Validation::basic (the default) checks hermiticity and unit trace;
// Validation::full adds the positive-semidefiniteness eigencheck.
// Validation::none admits sub-normalized blocks used by tests.
class State {
public:
  State(Matrix m, Dims dims, Purity purity = Purity::unknown,
        Validation validation = Validation::basic, Tolerances tol = {})
      : m_(std::move(m)), dims_(std::move(dims)), purity_(purity) {
    if (m_.side() != dims_.total())
      fail(ErrorKind::dims_mismatch, "matrix side " + std::to_string(m_.side()) +
                                         " does not match dims " + dims_.to_string());
    if (validation != Validation::none) check(validation == Validation::full, tol);
  }

  const Matrix& matrix() const { return m_; }
  const Dims& dims() const { return dims_; }
  Purity purity() const { return purity_; }
  int side() const { return m_.side(); }
  int parties() const { return dims_.count(); }

  const Complex& entry(int i, int j) const { return m_(i, j); }

  // tr(rho^2); equals sum |rho_ij|^2 for hermitian rho
  double purity_trace() const {
    double s = 0.0;
    for (const Complex& x : m_.data()) s += std::norm(x);
    return s;
  }

  bool is_pure(double tol = 1e-9) const {
    if (purity_ == Purity::pure) return true;
    return purity_trace() >= 1.0 - tol;
  }

private:
  void check(bool with_psd, Tolerances tol) const;

  Matrix m_;
  Dims dims_;
  Purity purity_;
};

inline ValidationReport validate(const State& s, Tolerances tol = {}) {
  ValidationReport r;
  const Matrix& m = s.matrix();
  r.hermiticity_dev = m.hermiticity_deviation();
  r.trace_dev = std::abs(m.trace() - 1.0);
  r.hermitian = r.hermiticity_dev <= tol.hermit;
  r.unit_trace = r.trace_dev <= tol.hermit;

  const int n = m.side();
  Eigen::MatrixXcd h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h,
                                                         Eigen::EigenvaluesOnly);
  r.min_eigenvalue = solver.eigenvalues().minCoeff();
  r.positive = r.min_eigenvalue >= -tol.psd;
  return r;
}

inline void State::check(bool with_psd, Tolerances tol) const {
  const double hdev = m_.hermiticity_deviation();
  if (hdev > tol.hermit)
    fail(ErrorKind::invalid_state,
         "matrix is not hermitian (deviation " + std::to_string(hdev) + ")");
  const double tdev = std::abs(m_.trace() - 1.0);
  if (tdev > tol.hermit)
    fail(ErrorKind::invalid_state,
         "trace deviates from 1 by " + std::to_string(tdev));
  if (with_psd) {
    ValidationReport r = validate(*this, tol);
    if (!r.positive)
      fail(ErrorKind::invalid_state, "matrix is not positive semidefinite (min "
                                     "eigenvalue " +
                                         std::to_string(r.min_eigenvalue) + ")");
  }
}

// |psi><psi| from an amplitude vector.
inline State make_pure(std::span<const Complex> amplitudes, const Dims& dims,
                       double tol = 1e-9) {
  if (static_cast<int>(amplitudes.size()) != dims.total())
    fail(ErrorKind::length_mismatch,
         "amplitude vector length " + std::to_string(amplitudes.size()) +
             " does not match dims " + dims.to_string());
  double norm2 = 0.0;
  for (const Complex& a : amplitudes) norm2 += std::norm(a);
  if (std::abs(std::sqrt(norm2) - 1.0) > tol)
    fail(ErrorKind::not_normalized,
         "amplitude vector norm " + std::to_string(std::sqrt(norm2)) + " is not 1");
  const int n = dims.total();
  Matrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = amplitudes[static_cast<size_t>(i)] *
                                          std::conj(amplitudes[static_cast<size_t>(j)]);
  return State(std::move(m), dims, Purity::pure, Validation::none);
}

inline State kron(const State& a, const State& b) {
  std::vector<int> d = a.dims().list();
  const std::vector<int>& db = b.dims().list();
  d.insert(d.end(), db.begin(), db.end());
  Purity p = Purity::unknown;
  if (a.purity() == Purity::pure && b.purity() == Purity::pure)
    p = Purity::pure;
  else if (a.purity() != Purity::unknown && b.purity() != Purity::unknown)
    p = Purity::mixed;
  return State(kron(a.matrix(), b.matrix()), Dims(d), p, Validation::none);
}

// Reduced state on the kept subsystems, in their original order.
inline State partial_trace(const State& s, std::span<const int> keep) {
  const int n = s.parties();
  if (keep.empty()) fail(ErrorKind::empty_keep_set, "keep set is empty");
  std::vector<int> ks(keep.begin(), keep.end());
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  for (int k : ks)
    if (k < 0 || k >= n)
      fail(ErrorKind::index_out_of_range,
           "keep index " + std::to_string(k) + " out of range");
  if (static_cast<int>(ks.size()) == n)
    fail(ErrorKind::index_out_of_range, "keep set must be a proper subset");

  std::vector<int> traced;
  for (int k = 0; k < n; ++k)
    if (!std::binary_search(ks.begin(), ks.end(), k)) traced.push_back(k);

  std::vector<int> kd, td;
  for (int k : ks) kd.push_back(s.dims().local(k));
  for (int k : traced) td.push_back(s.dims().local(k));
  const Dims kept_dims(kd);
  const int dk = kept_dims.total();
  int dt = 1;
  for (int x : td) dt *= x;

  // strides of each subsystem in the flattened full index
  std::vector<int> stride(static_cast<size_t>(n), 1);
  for (int k = n - 2; k >= 0; --k)
    stride[static_cast<size_t>(k)] =
        stride[static_cast<size_t>(k + 1)] * s.dims().local(k + 1);

  auto full_index = [&](const std::vector<int>& kept_digits,
                        const std::vector<int>& traced_digits) {
    int idx = 0;
    for (size_t a = 0; a < ks.size(); ++a)
      idx += kept_digits[a] * stride[static_cast<size_t>(ks[a])];
    for (size_t a = 0; a < traced.size(); ++a)
      idx += traced_digits[a] * stride[static_cast<size_t>(traced[a])];
    return idx;
  };

  auto digits_of = [](int index, const std::vector<int>& dims) {
    std::vector<int> out(dims.size());
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
      out[static_cast<size_t>(k)] = index % dims[static_cast<size_t>(k)];
      index /= dims[static_cast<size_t>(k)];
    }
    return out;
  };

  Matrix out(dk);
  for (int r = 0; r < dk; ++r) {
    const std::vector<int> rd = digits_of(r, kd);
    for (int c = 0; c < dk; ++c) {
      const std::vector<int> cd = digits_of(c, kd);
      Complex sum = 0.0;
      for (int t = 0; t < dt; ++t) {
        const std::vector<int> tdg = digits_of(t, td);
        sum += s.matrix()(full_index(rd, tdg), full_index(cd, tdg));
      }
      out(r, c) = sum;
    }
  }
  return State(std::move(out), kept_dims, Purity::unknown, Validation::none);
}

inline State partial_trace(const State& s, std::initializer_list<int> keep) {
  return partial_trace(s, std::span<const int>(keep.begin(), keep.size()));
}

// Convex combination; weights must lie in [0,1] and sum to 1.
inline State mix(std::span<const std::pair<double, State>> components,
                 double tol = 1e-9) {
  if (components.empty())
    fail(ErrorKind::weight_sum_invalid, "mixture has no components");
  double wsum = 0.0;
  for (const auto& [w, st] : components) {
    if (w < -tol || w > 1.0 + tol)
      fail(ErrorKind::weight_out_of_range,
           "weight " + std::to_string(w) + " outside [0,1]");
    wsum += w;
    if (st.dims() != components.front().second.dims())
      fail(ErrorKind::dims_mismatch, "mixture components disagree on dims");
  }
  if (std::abs(wsum - 1.0) > tol)
    fail(ErrorKind::weight_sum_invalid,
         "weights sum to " + std::to_string(wsum) + ", expected 1");
  Matrix acc(components.front().second.side());
  for (const auto& [w, st] : components) acc += st.matrix().scaled(w);
  return State(std::move(acc), components.front().second.dims(), Purity::mixed,
               Validation::none);
}

inline State mix(const std::vector<std::pair<double, State>>& components,
                 double tol = 1e-9) {
  return mix(std::span<const std::pair<double, State>>(components), tol);
}

// Product of a single-party state with a state on the remaining parties,
// laid out on the full party ordering: subsystem `solo_pos` comes from
// `solo`, the rest (ascending) from `rest`.
inline State product_at(const State& solo, const State& rest, int solo_pos) {
  if (solo.parties() != 1)
    fail(ErrorKind::dims_mismatch, "solo factor must be a single subsystem");
  const int n_rest = rest.parties();
  std::vector<int> d;
  for (int k = 0; k <= n_rest; ++k) {
    if (k == solo_pos)
      d.push_back(solo.dims().local(0));
    if (k < n_rest) d.push_back(rest.dims().local(k));
  }
  if (solo_pos < 0 || solo_pos > n_rest)
    fail(ErrorKind::index_out_of_range, "solo position out of range");
  const Dims dims(d);
  const int n = dims.count();
  const int total = dims.total();

  std::vector<int> stride(static_cast<size_t>(n), 1);
  for (int k = n - 2; k >= 0; --k)
    stride[static_cast<size_t>(k)] = stride[static_cast<size_t>(k + 1)] * dims.local(k + 1);

  auto split = [&](int idx, int& solo_digit, int& rest_index) {
    solo_digit = 0;
    rest_index = 0;
    for (int k = 0; k < n; ++k) {
      const int digit = (idx / stride[static_cast<size_t>(k)]) % dims.local(k);
      if (k == solo_pos)
        solo_digit = digit;
      else
        rest_index = rest_index * dims.local(k) + digit;
    }
  };

  Matrix out(total);
  for (int i = 0; i < total; ++i) {
    int si, ri;
    split(i, si, ri);
    for (int j = 0; j < total; ++j) {
      int sj, rj;
      split(j, sj, rj);
      out(i, j) = solo.matrix()(si, sj) * rest.matrix()(ri, rj);
    }
  }
  Purity p = Purity::unknown;
  if (solo.purity() == Purity::pure && rest.purity() == Purity::pure)
    p = Purity::pure;
  return State(std::move(out), dims, p, Validation::none);
}

}  // namespace qcoh
