#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ipds/errors.hpp"

namespace ipds {

// Network-wide decision variable: one row of length cols per worker.
struct StackedPoint {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  StackedPoint() = default;
  StackedPoint(int m, int d, double fill = 0.0)
      : rows(m), cols(d), data(static_cast<std::size_t>(m) * d, fill) {}

  std::span<double> row(int i) { return {data.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)}; }
  std::span<const double> row(int i) const {
    return {data.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)};
  }

  void fill(double v) { data.assign(data.size(), v); }

  bool same_shape(const StackedPoint& o) const { return rows == o.rows && cols == o.cols; }
};

inline void require_shape(const StackedPoint& x, int rows, int cols, const char* what) {
  if (x.rows != rows || x.cols != cols)
    throw DimensionError(std::string(what) + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                         ", got " + std::to_string(x.rows) + "x" + std::to_string(x.cols));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double nrm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double sqdist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scal(double alpha, std::span<double> x) {
  for (double& v : x) v *= alpha;
}

inline void copy_to(std::span<const double> src, std::span<double> dst) {
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
}

inline double frobenius_norm(const StackedPoint& x) {
  return nrm2(std::span<const double>(x.data.data(), x.data.size()));
}

inline bool all_finite(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

inline bool all_finite(const StackedPoint& x) {
  return all_finite(std::span<const double>(x.data.data(), x.data.size()));
}

}  // namespace ipds
