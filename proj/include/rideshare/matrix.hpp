#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace rideshare {

using Vec = std::vector<double>;

// Dense square matrix of doubles, row-major. Region counts are tiny here
// (r <= 16 or so), so everything stays flat and simple.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n, double fill = 0.0)
      : n_(n), a_(static_cast<std::size_t>(n) * n, fill) {}

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<int>(rows.size()));
    int i = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != m.n_)
        throw std::invalid_argument("Matrix::from_rows: ragged rows");
      int j = 0;
      for (double v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  int size() const { return n_; }
  bool empty() const { return n_ == 0; }

  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  double row_sum(int i) const {
    double s = 0;
    for (int j = 0; j < n_; ++j) s += (*this)(i, j);
    return s;
  }
  double col_sum(int j) const {
    double s = 0;
    for (int i = 0; i < n_; ++i) s += (*this)(i, j);
    return s;
  }
  double total() const {
    double s = 0;
    for (double v : a_) s += v;
    return s;
  }

  std::vector<double>& data() { return a_; }
  const std::vector<double>& data() const { return a_; }

  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.n_ == y.n_ && x.a_ == y.a_;
  }

 private:
  int n_ = 0;
  std::vector<double> a_;
};

// Integer counterpart used for car counts.
class CountMatrix {
 public:
  CountMatrix() = default;
  explicit CountMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0) {}

  int size() const { return n_; }
  std::int64_t& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  std::int64_t operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  std::int64_t total() const {
    std::int64_t s = 0;
    for (auto v : a_) s += v;
    return s;
  }
  std::int64_t col_sum(int j) const {
    std::int64_t s = 0;
    for (int i = 0; i < n_; ++i) s += (*this)(i, j);
    return s;
  }

  const std::vector<std::int64_t>& data() const { return a_; }

 private:
  int n_ = 0;
  std::vector<std::int64_t> a_;
};

inline double max_abs_diff(const Matrix& x, const Matrix& y) {
  double d = 0;
  for (std::size_t k = 0; k < x.data().size(); ++k) {
    double v = x.data()[k] - y.data()[k];
    if (v < 0) v = -v;
    if (v > d) d = v;
  }
  return d;
}

}  // namespace rideshare
