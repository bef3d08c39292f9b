#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <span>
#include <string>

#include "blockess/corrmodel.hpp"

namespace blockess {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Pivots at or below this value are reported as not positive definite.
inline constexpr double kPivotTolerance = 1e-12;

/// Lower Cholesky factor L of a symmetric positive definite A = L L^T.
class CholeskyFactor {
 public:
  std::size_t order() const noexcept { return static_cast<std::size_t>(lower_.rows()); }
  const Matrix& lower() const noexcept { return lower_; }

 private:
  friend CholeskyFactor cholesky(Matrix a, const std::string& context);
  explicit CholeskyFactor(Matrix lower) : lower_(std::move(lower)) {}
  Matrix lower_;
};

/// R restricted to the given rows and columns (0-based point indices).
Matrix materialize_block(const CorrelationModel& model, const PointGeometry& geom,
                         std::span<const std::size_t> rows,
                         std::span<const std::size_t> cols);

/// Throws NotPositiveDefinite with the first failing pivot. `context` is
/// appended to the error message.
CholeskyFactor cholesky(Matrix a, const std::string& context = {});

/// x with A x = rhs, by forward and back substitution.
Vector solve_spd(const CholeskyFactor& factor, const Vector& rhs);

/// left^T * block * right, accumulated row by row in index order.
double quad_form(const Vector& left, const Matrix& block, const Vector& right);

}  // namespace blockess
