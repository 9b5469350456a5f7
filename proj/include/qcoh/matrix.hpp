#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "qcoh/errors.hpp"

namespace qcoh {

using Complex = std::complex<double>;

// Hard cap on matrix side length; covers every supported party count
// (up to four parties of local dimension <= 4).
inline constexpr int kMaxSide = 256;

// Local dimension of each subsystem, leftmost ket symbol first.
// Subsystem 0 is the slowest-varying index of the flattened basis.
class Dims {
public:
  Dims() = default;
  explicit Dims(std::vector<int> d) : d_(std::move(d)) {
    long long total = 1;
    for (int x : d_) {
      if (x < 2) fail(ErrorKind::unsupported_dims, "local dimension must be >= 2");
      total *= x;
      if (total > kMaxSide)
        fail(ErrorKind::unsupported_dims,
             "total dimension exceeds " + std::to_string(kMaxSide));
    }
    if (d_.empty()) fail(ErrorKind::unsupported_dims, "dims must be nonempty");
  }

  int count() const { return static_cast<int>(d_.size()); }
  int local(int k) const { return d_[static_cast<size_t>(k)]; }
  const std::vector<int>& list() const { return d_; }

  int total() const {
    return std::accumulate(d_.begin(), d_.end(), 1, std::multiplies<int>());
  }

  bool operator==(const Dims& o) const { return d_ == o.d_; }
  bool operator!=(const Dims& o) const { return !(*this == o); }

  // Digits of a flattened basis index, one per subsystem.
  std::vector<int> digits(int index) const {
    std::vector<int> out(d_.size());
    for (int k = count() - 1; k >= 0; --k) {
      out[static_cast<size_t>(k)] = index % d_[static_cast<size_t>(k)];
      index /= d_[static_cast<size_t>(k)];
    }
    return out;
  }

  int index(const std::vector<int>& digits) const {
    int i = 0;
    for (int k = 0; k < count(); ++k) i = i * local(k) + digits[static_cast<size_t>(k)];
    return i;
  }

  std::string to_string() const {
    std::string s = "[";
    for (size_t i = 0; i < d_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(d_[i]);
    }
    return s + "]";
  }

private:
  std::vector<int> d_;
};

// Dense square complex matrix, row-major.
class Matrix {
public:
  Matrix() : side_(0) {}
  explicit Matrix(int side) : side_(side), a_(static_cast<size_t>(side) * side) {
    if (side < 1 || side > kMaxSide)
      fail(ErrorKind::unsupported_dims, "matrix side out of range");
  }

  static Matrix identity(int side) {
    Matrix m(side);
    for (int i = 0; i < side; ++i) m(i, i) = 1.0;
    return m;
  }

  int side() const { return side_; }

  Complex& operator()(int i, int j) { return a_[static_cast<size_t>(i) * side_ + j]; }
  const Complex& operator()(int i, int j) const {
    return a_[static_cast<size_t>(i) * side_ + j];
  }

  const std::vector<Complex>& data() const { return a_; }

  Complex trace() const {
    Complex t = 0.0;
    for (int i = 0; i < side_; ++i) t += (*this)(i, i);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }

  Matrix& operator*=(double s) {
    for (auto& x : a_) x *= s;
    return *this;
  }

  Matrix scaled(double s) const {
    Matrix m = *this;
    m *= s;
    return m;
  }

  double max_abs_diff(const Matrix& o) const {
    double m = 0.0;
    for (size_t i = 0; i < a_.size(); ++i) m = std::max(m, std::abs(a_[i] - o.a_[i]));
    return m;
  }

  // max |a_ij - conj(a_ji)|
  double hermiticity_deviation() const {
    double dev = 0.0;
    for (int i = 0; i < side_; ++i)
      for (int j = i; j < side_; ++j)
        dev = std::max(dev, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return dev;
  }

private:
  int side_;
  std::vector<Complex> a_;
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
  const int sa = a.side(), sb = b.side();
  if (static_cast<long long>(sa) * sb > kMaxSide)
    fail(ErrorKind::unsupported_dims, "kron result exceeds supported side");
  Matrix c(sa * sb);
  for (int i = 0; i < sa; ++i)
    for (int j = 0; j < sa; ++j) {
      const Complex aij = a(i, j);
      if (aij == 0.0) continue;
      for (int k = 0; k < sb; ++k)
        for (int l = 0; l < sb; ++l) c(i * sb + k, j * sb + l) = aij * b(k, l);
    }
  return c;
}

}  // namespace qcoh
