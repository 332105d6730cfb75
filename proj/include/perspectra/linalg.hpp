#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "perspectra/errors.hpp"

namespace perspectra {

/// Element of R^n. Coordinates are expected to be finite; entry points that
/// accept user data validate with check_finite().
using Vec = std::vector<double>;

inline void check_finite(const Vec& v, const char* what = "vector") {
  for (double c : v)
    if (!std::isfinite(c)) throw BadParam(std::string(what) + ": coordinates must be finite");
}

inline double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw BadParam("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double euclidean_norm(const Vec& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

inline Vec scaled(const Vec& v, double lambda) {
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = lambda * v[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw BadParam("sub: dimension mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec add(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw BadParam("add: dimension mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

// a + lambda * b
inline Vec axpy(const Vec& a, double lambda, const Vec& b) {
  if (a.size() != b.size()) throw BadParam("axpy: dimension mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + lambda * b[i];
  return r;
}

inline bool is_zero(const Vec& v) {
  for (double c : v)
    if (c != 0.0) return false;
  return true;
}

inline Vec zeros(std::size_t n) { return Vec(n, 0.0); }

/// Dense row-major matrix, just enough for linear precomposition and the
/// affine maps x |-> (<x,u> - rho, Lx - r).
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), a_(std::move(data)) {
    if (rows_ == 0 || cols_ == 0 || a_.size() != rows_ * cols_)
      throw BadParam("Matrix: shape/data mismatch");
    check_finite(a_, "matrix");
  }

  Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
      if (r.size() != cols_) throw BadParam("Matrix: ragged rows");
      a_.insert(a_.end(), r.begin(), r.end());
    }
    if (rows_ == 0 || cols_ == 0) throw BadParam("Matrix: empty");
  }

  static Matrix identity(std::size_t n) {
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] = 1.0;
    return Matrix(n, n, std::move(a));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Vec apply(const Vec& x) const {
    if (x.size() != cols_) throw BadParam("Matrix::apply: dimension mismatch");
    Vec y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) s += a_[i * cols_ + j] * x[j];
      y[i] = s;
    }
    return y;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> a_;
};

/// Kahan compensated accumulator. Divergence sums hover near zero where
/// naive accumulation would lose the signal.
class CompensatedSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace perspectra
