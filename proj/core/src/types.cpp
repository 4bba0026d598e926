#include "ltrgen/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ltrgen {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  Matrix out(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != out.cols_) throw ShapeError("Matrix::from_rows: ragged rows");
    std::copy(rows[r].begin(), rows[r].end(), out.row(r).begin());
  }
  return out;
}

Vector Matrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) {
    throw ShapeError("Matrix::multiply: expected length " + std::to_string(cols_) + ", got " +
                     std::to_string(x.size()));
  }
  Vector y(rows_);
  for (std::size_t r = 0; r < rows_; ++r) y[r] = dot(row(r), x);
  return y;
}

Vector Matrix::multiply_transposed(std::span<const double> x) const {
  if (x.size() != rows_) {
    throw ShapeError("Matrix::multiply_transposed: expected length " + std::to_string(rows_) +
                     ", got " + std::to_string(x.size()));
  }
  Vector y(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    auto rr = row(r);
    for (std::size_t c = 0; c < cols_; ++c) y[c] += xr * rr[c];
  }
  return y;
}

std::string to_string(NormKind kind) { return kind == NormKind::L2 ? "L2" : "L1"; }

NormKind norm_kind_from_string(const std::string& text) {
  if (text == "L2" || text == "l2") return NormKind::L2;
  if (text == "L1" || text == "l1") return NormKind::L1;
  throw std::invalid_argument("unknown norm kind '" + text + "' (expected L2 or L1)");
}

QueryInstance::QueryInstance(Matrix features, Vector labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.rows() < 1 || features_.cols() < 1) {
    throw ShapeError("QueryInstance: need m >= 1 and d >= 1");
  }
  if (labels_.size() != features_.rows()) {
    throw ShapeError("QueryInstance: " + std::to_string(labels_.size()) + " labels for " +
                     std::to_string(features_.rows()) + " documents");
  }
  for (double x : features_.data()) {
    if (!std::isfinite(x)) throw std::invalid_argument("QueryInstance: non-finite feature");
  }
  for (double y : labels_) {
    if (!std::isfinite(y)) throw std::invalid_argument("QueryInstance: non-finite label");
  }
}

Dataset::Dataset(std::vector<QueryInstance> instances) : instances_(std::move(instances)) {
  if (instances_.empty()) throw std::invalid_argument("Dataset: need at least one instance");
  const std::size_t d = instances_.front().dim();
  for (const auto& q : instances_) {
    if (q.dim() != d) {
      throw ShapeError("Dataset: mixed feature dimensions " + std::to_string(d) + " and " +
                       std::to_string(q.dim()));
    }
  }
}

std::size_t Dataset::max_docs() const {
  std::size_t m = 0;
  for (const auto& q : instances_) m = std::max(m, q.num_docs());
  return m;
}

void ClassSpec::validate() const {
  if (!(weight_radius > 0.0) || !std::isfinite(weight_radius)) {
    throw std::invalid_argument("ClassSpec: weight radius must be positive");
  }
  if (!(input_radius > 0.0) || !std::isfinite(input_radius)) {
    throw std::invalid_argument("ClassSpec: input radius must be positive");
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_l1(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

double norm_l2(std::span<const double> x) {
  // Scaled accumulation so that huge or tiny entries do not overflow/underflow.
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double v : x) {
    const double t = v / scale;
    s += t * t;
  }
  return scale * std::sqrt(s);
}

double norm_linf(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

double norm_p(std::span<const double> x, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("norm_p: p must be >= 1");
  if (std::isinf(p)) return norm_linf(x);
  if (p == 1.0) return norm_l1(x);
  if (p == 2.0) return norm_l2(x);
  const double scale = norm_linf(x);
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v) / scale, p);
  return scale * std::pow(s, 1.0 / p);
}

}  // namespace ltrgen
