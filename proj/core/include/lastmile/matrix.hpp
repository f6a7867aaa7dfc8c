#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "lastmile/errors.hpp"

namespace lastmile {

/// Dense row-major matrix of doubles. Used for travel times, transition
/// probabilities, cost matrices and adjacency matrices alike.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix square(std::size_t n, double fill = 0.0) { return Matrix(n, n, fill); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool all_finite() const {
    for (double v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline void require_square(const Matrix& m, const char* what) {
  if (!m.is_square()) {
    throw InvalidInput(std::string(what) + ": expected a square matrix, got " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

inline void require_square(const Matrix& m, std::size_t n, const char* what) {
  if (!m.is_square() || m.rows() != n) {
    throw InvalidInput(std::string(what) + ": expected a " + std::to_string(n) + "x" +
                       std::to_string(n) + " matrix, got " + std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()));
  }
}

}  // namespace lastmile
