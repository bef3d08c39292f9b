#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace blockess {

/// Coordinates of a point on a 2D grid, 0-based.
struct GridPoint {
  std::size_t i1 = 0;
  std::size_t i2 = 0;
};

/// The index set of the observed points.
///
/// Points are addressed by a 0-based linear index. On a 2D grid the
/// linearization is row-major: (i1, i2) maps to i1 * n2 + i2.
class PointGeometry {
 public:
  enum class Shape { Equispaced1D, Positions1D, Grid2D };

  static PointGeometry equispaced(std::size_t n);
  static PointGeometry positions(std::vector<double> s);
  static PointGeometry grid(std::size_t n1, std::size_t n2);

  Shape shape() const noexcept { return shape_; }
  bool is_1d() const noexcept { return shape_ != Shape::Grid2D; }
  bool is_grid() const noexcept { return shape_ == Shape::Grid2D; }

  std::size_t size() const noexcept { return n1_ * n2_; }
  std::size_t n1() const noexcept { return n1_; }
  std::size_t n2() const noexcept { return n2_; }
  const std::vector<double>& point_positions() const noexcept { return positions_; }

  GridPoint coords(std::size_t index) const noexcept {
    return {index / n2_, index % n2_};
  }
  std::size_t linear(std::size_t i1, std::size_t i2) const noexcept {
    return i1 * n2_ + i2;
  }

 private:
  PointGeometry(Shape shape, std::size_t n1, std::size_t n2,
                std::vector<double> positions)
      : shape_(shape), n1_(n1), n2_(n2), positions_(std::move(positions)) {}

  Shape shape_;
  std::size_t n1_;
  std::size_t n2_;
  std::vector<double> positions_;
};

enum class ModelKind {
  AR1,
  Linear,
  InverseLinear,
  AR1Positions,
  MaternL1,
  MaternL2Half,
  MaternL2ThreeHalf,
  Kronecker,
};

const char* to_string(ModelKind kind) noexcept;

/// rho^d with 0^0 = 1, evaluated as exp(d log rho).
double rho_power(double rho, double d) noexcept;

/// A correlation family together with its parameters.
///
/// Entries are produced on demand; the full matrix is never stored here.
/// One-dimensional kinds (AR1, Linear, InverseLinear, AR1Positions) act on
/// 1D geometries, the Matérn kinds and Kronecker products act on grids.
/// For the Matérn kinds rho = exp(-1/phi).
class CorrelationModel {
 public:
  static CorrelationModel ar1(double rho);
  static CorrelationModel linear(double rho);
  static CorrelationModel inverse_linear(double rho);
  static CorrelationModel ar1_positions(double rho, std::vector<double> positions);
  static CorrelationModel matern_l1(double rho);
  static CorrelationModel matern_l2_half(double rho);
  static CorrelationModel matern_l2_three_half(double rho);
  static CorrelationModel kronecker(const CorrelationModel& first,
                                    const CorrelationModel& second);

  ModelKind kind() const noexcept { return kind_; }
  double rho() const noexcept { return rho_; }
  /// Matérn range parameter, -1/log(rho). Infinite-free only for 0 < rho < 1.
  double phi() const;
  const std::vector<double>& positions() const noexcept { return positions_; }
  bool is_1d() const noexcept;
  bool is_2d() const noexcept { return !is_1d(); }

  const CorrelationModel& first_factor() const;
  const CorrelationModel& second_factor() const;

  /// Checks that the parameters are admissible on `geom` (dimension,
  /// point count, Linear's n-dependent rho bound). Throws InvalidArgument.
  void validate(const PointGeometry& geom) const;

  /// r_ij for 0-based point indices. Does not re-run validate().
  double entry(const PointGeometry& geom, std::size_t i, std::size_t j) const;

  /// Correlation at integer lag d for a 1D index-stationary model.
  double lag(std::size_t d) const;
  /// Correlation at coordinate difference (d1, d2) for a 2D stationary model.
  double lag2(long d1, long d2) const;

  /// Canonical spec string, e.g. "ar1:rho=0.6".
  std::string describe() const;

 private:
  CorrelationModel(ModelKind kind, double rho) : kind_(kind), rho_(rho) {}

  double entry_1d(std::size_t i, std::size_t j) const;

  ModelKind kind_;
  double rho_;
  std::vector<double> positions_;
  std::shared_ptr<const CorrelationModel> first_;
  std::shared_ptr<const CorrelationModel> second_;
};

/// Free-function form of CorrelationModel::entry with index checks.
double entry(const CorrelationModel& model, const PointGeometry& geom,
             std::size_t i, std::size_t j);

/// r_ij depends on i and j only through |i - j|.
bool is_stationary_1d(const CorrelationModel& model) noexcept;

/// Grid correlation depends only on the coordinate differences.
bool is_stationary_2d(const CorrelationModel& model) noexcept;

/// The 1D factors when the 2D model is a Kronecker product.
std::optional<std::pair<CorrelationModel, CorrelationModel>> as_kronecker(
    const CorrelationModel& model);

/// Geometry a Kronecker factor lives on for a grid dimension of size n.
PointGeometry factor_geometry(const CorrelationModel& factor, std::size_t n);

}  // namespace blockess
