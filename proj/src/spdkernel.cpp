#include "blockess/spdkernel.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <sstream>

#include "blockess/errors.hpp"

namespace blockess {

Matrix materialize_block(const CorrelationModel& model, const PointGeometry& geom,
                         std::span<const std::size_t> rows,
                         std::span<const std::size_t> cols) {
  const std::size_t n = geom.size();
  for (std::size_t i : rows)
    if (i >= n) throw InvalidArgument("materialize_block: row index out of range");
  for (std::size_t j : cols)
    if (j >= n) throw InvalidArgument("materialize_block: column index out of range");

  Matrix block(static_cast<Eigen::Index>(rows.size()),
               static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < rows.size(); ++r)
      block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          model.entry(geom, rows[r], cols[c]);
  return block;
}

CholeskyFactor cholesky(Matrix a, const std::string& context) {
  if (a.rows() != a.cols())
    throw InvalidArgument("cholesky: matrix is not square");
  if (!a.allFinite()) throw NotPositiveDefinite(0, context + " (non-finite entry)");

  Matrix lower = std::move(a);
  // Eigen's blocked in-place routine reports the failing column, which the
  // public LLT wrapper hides.
  const Eigen::Index failed =
      Eigen::internal::llt_inplace<double, Eigen::Lower>::blocked(lower);
  const Eigen::Index order = lower.rows();
  const Eigen::Index limit = failed >= 0 ? failed : order;
  for (Eigen::Index i = 0; i < limit; ++i) {
    const double d = lower(i, i);
    if (!std::isfinite(d) || d * d <= kPivotTolerance)
      throw NotPositiveDefinite(static_cast<std::size_t>(i), context);
  }
  if (failed >= 0) throw NotPositiveDefinite(static_cast<std::size_t>(failed), context);
  lower.triangularView<Eigen::StrictlyUpper>().setZero();
  return CholeskyFactor(std::move(lower));
}

Vector solve_spd(const CholeskyFactor& factor, const Vector& rhs) {
  if (static_cast<std::size_t>(rhs.size()) != factor.order())
    throw InvalidArgument("solve_spd: dimension mismatch");
  Vector x = factor.lower().triangularView<Eigen::Lower>().solve(rhs);
  factor.lower().triangularView<Eigen::Lower>().transpose().solveInPlace(x);
  return x;
}

double quad_form(const Vector& left, const Matrix& block, const Vector& right) {
  if (left.size() != block.rows() || right.size() != block.cols()) {
    std::ostringstream os;
    os << "quad_form: dimension mismatch (" << left.size() << ", " << block.rows()
       << "x" << block.cols() << ", " << right.size() << ")";
    throw InvalidArgument(os.str());
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < block.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < block.cols(); ++j) row += block(i, j) * right(j);
    total += left(i) * row;
  }
  return total;
}

}  // namespace blockess
