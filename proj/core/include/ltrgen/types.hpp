#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ltrgen {

using Vector = std::vector<double>;

/// Raised when vector/matrix shapes disagree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operation is not defined for the given loss kind.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when a closed-form expression leaves its domain (e.g. log of a value <= 1).
class NumericalDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Dense row-major matrix. Rows are the atomic unit (one document per row).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  /// y = M x
  Vector multiply(std::span<const double> x) const;
  /// y = M^T x
  Vector multiply_transposed(std::span<const double> x) const;

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class NormKind { L2, L1 };

std::string to_string(NormKind kind);
NormKind norm_kind_from_string(const std::string& text);

/// One query: an m x d feature matrix and its m relevance labels.
class QueryInstance {
 public:
  QueryInstance(Matrix features, Vector labels);

  const Matrix& features() const { return features_; }
  const Vector& labels() const { return labels_; }
  std::size_t num_docs() const { return features_.rows(); }
  std::size_t dim() const { return features_.cols(); }

  bool operator==(const QueryInstance& other) const = default;

 private:
  Matrix features_;
  Vector labels_;
};

/// An ordered sample of queries sharing the feature dimension d. Document
/// counts may differ between queries.
class Dataset {
 public:
  explicit Dataset(std::vector<QueryInstance> instances);

  std::size_t size() const { return instances_.size(); }
  std::size_t dim() const { return instances_.front().dim(); }
  std::size_t max_docs() const;

  const QueryInstance& operator[](std::size_t i) const { return instances_[i]; }
  const std::vector<QueryInstance>& instances() const { return instances_; }

  auto begin() const { return instances_.begin(); }
  auto end() const { return instances_.end(); }

  bool operator==(const Dataset& other) const = default;

 private:
  std::vector<QueryInstance> instances_;
};

/// Linear scorer X -> Xw, or X -> Xw + (1^T X v) 1 when v is present.
struct ScoringParams {
  Vector w;
  std::optional<Vector> v;
};

/// Hypothesis class: an l2 ball (radius W2, row l2 radius R_X) or an l1 ball
/// (radius W1, row l-infinity radius R̄_X).
struct ClassSpec {
  NormKind norm_kind = NormKind::L2;
  double weight_radius = 1.0;
  double input_radius = 1.0;

  void validate() const;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm_l1(std::span<const double> x);
double norm_l2(std::span<const double> x);
double norm_linf(std::span<const double> x);
/// p-norm for p in [1, inf]; p = +infinity selects the max norm.
double norm_p(std::span<const double> x, double p);

}  // namespace ltrgen
