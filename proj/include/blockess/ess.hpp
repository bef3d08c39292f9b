#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "blockess/blocking.hpp"
#include "blockess/corrmodel.hpp"
#include "blockess/spdkernel.hpp"

namespace blockess {

/// How an ESS value was obtained.
enum class EssMethod {
  DenseFull,
  DenseBlock,
  Stationary1D,
  Stationary2D,
  ClosedAr1Full,
  ClosedAr1Row,
  ClosedAr1Col,
  Kronecker,
  B2Stationary,
};

const char* to_string(EssMethod method) noexcept;

struct EssReport {
  double value = 0.0;
  EssMethod method = EssMethod::DenseFull;
  double wall_time = 0.0;  // seconds
};

/// Which likelihood a structured path evaluates: full, or block likelihood
/// under row-wise or column-wise blocking.
enum class Scheme { Full, Row, Col };

const char* to_string(Scheme scheme) noexcept;

/// Size caps for the dense paths.
struct DenseLimits {
  std::size_t max_full = 20000;   // points in ess_full
  std::size_t max_block = 5000;   // points per block in the block paths
};

/// The block-pair quadratic forms lambda_uv.
///
/// DenseByPair stores all m x m values. Offset1D stores lambda(d) for
/// d = 0..m-1. Offset2D stores lambda(d1, d2) for d1 = 0..m1-1 and
/// d2 = -(m2-1)..m2-1, without the d1 = 0, d2 < 0 half; at() fills that half
/// in from lambda(d) = lambda(-d).
class LambdaTable {
 public:
  enum class Layout { DenseByPair, Offset1D, Offset2D };

  static LambdaTable dense_by_pair(std::size_t m);
  static LambdaTable offset_1d(std::size_t m);
  static LambdaTable offset_2d(std::size_t m1, std::size_t m2);

  Layout layout() const noexcept { return layout_; }
  std::size_t m1() const noexcept { return m1_; }
  std::size_t m2() const noexcept { return m2_; }

  double& pair(std::size_t u, std::size_t v) { return values_[u * m1_ + v]; }
  double pair(std::size_t u, std::size_t v) const { return values_[u * m1_ + v]; }
  double& offset(std::size_t d) { return values_[d]; }
  double offset(std::size_t d) const { return values_[d]; }
  double offset(long d1, long d2) const;
  double& offset_slot(long d1, long d2);

  const std::vector<double>& values() const noexcept { return values_; }

 private:
  LambdaTable(Layout layout, std::size_t m1, std::size_t m2, std::size_t count)
      : layout_(layout), m1_(m1), m2_(m2), values_(count, 0.0) {}
  std::size_t slot_2d(long d1, long d2) const;

  Layout layout_;
  std::size_t m1_;
  std::size_t m2_;
  std::vector<double> values_;
};

/// {(1 - h) 1_a + h psi_a} / (1 + h); psi_a has ones at both ends.
Vector y_vector(std::size_t a, double h);

/// z^T R^{-1} z (z = 1_n by default) from one Cholesky factorization of R.
EssReport ess_full(const CorrelationModel& model, const PointGeometry& geom,
                   std::optional<std::span<const double>> weights = std::nullopt,
                   const DenseLimits& limits = {});

// Closed forms under AR(1) on n equispaced points. All accept
// 0 <= rho <= kMaxClosedFormRho and return n exactly at rho = 0.
inline constexpr double kMaxClosedFormRho = 0.999999;

double ess_full_ar1_closed(std::size_t n, double rho);
/// 1_n^T R 1_n.
double one_r_one_ar1(std::size_t n, double rho);
/// Common value of the row- and column-wise ESS for block sizes 1 and 2.
double ess_b1_b2_ar1_closed(std::size_t n, double rho);
double ess_row_ar1_closed(std::size_t n, std::size_t b, std::size_t m, double rho);
double ess_col_ar1_closed(std::size_t n, std::size_t b, std::size_t m, double rho);

/// Block-likelihood ESS from the definition: one Cholesky per block, then
/// every lambda_uv. `weights` replaces the vector of ones.
EssReport ess_block_dense(const CorrelationModel& model, const PointGeometry& geom,
                          const Blocking& blocking,
                          std::optional<std::span<const double>> weights = std::nullopt,
                          LambdaTable* table = nullptr,
                          const DenseLimits& limits = {});

/// ess_block_dense with a predictor vector z in place of the ones.
EssReport ess_block_generic_weighted(const CorrelationModel& model,
                                     const PointGeometry& geom,
                                     const Blocking& blocking,
                                     std::span<const double> z,
                                     const DenseLimits& limits = {});

/// Row- or column-wise ESS for an index-stationary 1D model: one shared
/// block solve, then lambda(d) for d = 0..m-1.
EssReport ess_block_stationary_1d(const CorrelationModel& model, std::size_t n,
                                  std::size_t m, std::size_t b, Scheme scheme,
                                  LambdaTable* table = nullptr,
                                  const DenseLimits& limits = {});

/// n^2 / (1^T R 1), the block-size-two value for any stationary 1D model.
EssReport ess_b2_stationary(const CorrelationModel& model, std::size_t n);

/// Row- or column-wise ESS for a 2D stationary model on an
/// (m1 b1) x (m2 b2) grid. Offsets are evaluated on `workers` threads
/// (0 = hardware concurrency); the result does not depend on the count.
EssReport ess_block_stationary_2d(const CorrelationModel& model, std::size_t n1,
                                  std::size_t n2, std::size_t m1, std::size_t b1,
                                  std::size_t m2, std::size_t b2, Scheme scheme,
                                  unsigned workers = 0,
                                  LambdaTable* table = nullptr,
                                  const DenseLimits& limits = {});

/// Product of the 1D values of the two Kronecker factors. For Scheme::Full
/// the m/b arguments only fix n1 = m1 b1 and n2 = m2 b2.
EssReport ess_kronecker(const CorrelationModel& model, Scheme scheme,
                        std::size_t m1, std::size_t b1, std::size_t m2,
                        std::size_t b2, const DenseLimits& limits = {});

/// ESS of a 1D model under the given scheme with m blocks of size b, using
/// the cheapest applicable path (closed form, stationary, dense).
EssReport ess_1d(const CorrelationModel& model, Scheme scheme, std::size_t m,
                 std::size_t b, const DenseLimits& limits = {});

}  // namespace blockess
