#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ltrgen/types.hpp"

namespace ltrgen {

/// 0-based permutation of degree m. Applying it to rows of X puts row
/// perm[j] of the input at position j of the output.
using Permutation = std::vector<std::size_t>;

/// Scores of one query under a linear scorer. With v present the scores are
/// Xw + (1^T X v) 1, the full permutation-equivariant linear class.
Vector score(const ScoringParams& params, const QueryInstance& instance);
Vector score(const ScoringParams& params, const Matrix& features);

bool is_permutation(std::span<const std::size_t> perm);
Permutation inverse(std::span<const std::size_t> perm);
/// out[j] = values[perm[j]]
Vector permute(std::span<const std::size_t> perm, std::span<const double> values);
Matrix permute_rows(std::span<const std::size_t> perm, const Matrix& x);
QueryInstance apply_permutation(std::span<const std::size_t> perm, const QueryInstance& instance);

struct InvarianceCheck {
  bool invariant = false;
  /// max_j |perm(f(X))_j - f(perm X)_j|
  double deviation = 0.0;
};

using MatrixScorer = std::function<Vector(const Matrix&)>;

/// Tests perm(f(X)) == f(perm X) with tolerance 1e-12 * (1 + ||f(X)||_inf).
InvarianceCheck check_invariance(const MatrixScorer& scorer, const Matrix& features,
                                 std::span<const std::size_t> perm);
InvarianceCheck check_invariance(const ScoringParams& params, const QueryInstance& instance,
                                 std::span<const std::size_t> perm);

/// Unrestricted linear map R^{m x d} -> R^m, f(X)_i = <X, W_i>.
class FullLinearMap {
 public:
  explicit FullLinearMap(std::vector<Matrix> weights);
  Vector operator()(const Matrix& x) const;
  std::size_t num_docs() const { return weights_.size(); }

 private:
  std::vector<Matrix> weights_;
};

/// Document indices in descending score order; ties keep ascending index.
Permutation rank_from_scores(std::span<const double> scores);

/// NDCG@k with gain 2^y - 1 and discount 1/log2(1 + rank). Returns 1 when
/// every label has zero gain.
double ndcg_at_k(std::span<const double> scores, std::span<const double> labels, std::size_t k);

/// Max row l2 norm (L2) or max row l-infinity norm (L1) over the dataset.
double input_radius(const Dataset& dataset, NormKind kind);
double input_radius(const Matrix& features, NormKind kind);

Vector project_l2(std::span<const double> w, double radius);
/// Euclidean projection onto the l1 ball by the sort-and-threshold method.
Vector project_l1(std::span<const double> w, double radius);
Vector project(std::span<const double> w, const ClassSpec& spec);
double weight_norm(std::span<const double> w, NormKind kind);

}  // namespace ltrgen
