#include "blockess/corrmodel.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "blockess/errors.hpp"

namespace blockess {

namespace {

bool finite(double x) { return std::isfinite(x); }

void require_unit_interval(double rho, const char* name) {
  if (!finite(rho) || rho < 0.0 || rho >= 1.0) {
    std::ostringstream os;
    os << name << ": rho must satisfy 0 <= rho < 1, got " << rho;
    throw InvalidArgument(os.str());
  }
}

void require_positive(double rho, const char* name) {
  if (!finite(rho) || rho <= 0.0) {
    std::ostringstream os;
    os << name << ": rho must be positive, got " << rho;
    throw InvalidArgument(os.str());
  }
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

PointGeometry PointGeometry::equispaced(std::size_t n) {
  if (n < 1) throw InvalidArgument("geometry: n must be at least 1");
  return PointGeometry(Shape::Equispaced1D, n, 1, {});
}

PointGeometry PointGeometry::positions(std::vector<double> s) {
  if (s.empty()) throw InvalidArgument("geometry: empty positions list");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!finite(s[i])) throw InvalidArgument("geometry: non-finite position");
    if (i > 0 && !(s[i] > s[i - 1]))
      throw InvalidArgument("geometry: positions must be strictly increasing");
  }
  const std::size_t n = s.size();
  return PointGeometry(Shape::Positions1D, n, 1, std::move(s));
}

PointGeometry PointGeometry::grid(std::size_t n1, std::size_t n2) {
  if (n1 < 2 || n2 < 2)
    throw InvalidArgument("geometry: grid dimensions must both be at least 2");
  return PointGeometry(Shape::Grid2D, n1, n2, {});
}

const char* to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::AR1: return "ar1";
    case ModelKind::Linear: return "linear";
    case ModelKind::InverseLinear: return "invlin";
    case ModelKind::AR1Positions: return "ar1pos";
    case ModelKind::MaternL1: return "matern-l1";
    case ModelKind::MaternL2Half: return "matern-l2-0.5";
    case ModelKind::MaternL2ThreeHalf: return "matern-l2-1.5";
    case ModelKind::Kronecker: return "kron";
  }
  return "?";
}

double rho_power(double rho, double d) noexcept {
  if (d == 0.0) return 1.0;
  if (rho == 0.0) return 0.0;
  return std::exp(d * std::log(rho));
}

CorrelationModel CorrelationModel::ar1(double rho) {
  require_unit_interval(rho, "ar1");
  return CorrelationModel(ModelKind::AR1, rho);
}

CorrelationModel CorrelationModel::linear(double rho) {
  require_positive(rho, "linear");
  return CorrelationModel(ModelKind::Linear, rho);
}

CorrelationModel CorrelationModel::inverse_linear(double rho) {
  require_positive(rho, "invlin");
  return CorrelationModel(ModelKind::InverseLinear, rho);
}

CorrelationModel CorrelationModel::ar1_positions(double rho,
                                                 std::vector<double> positions) {
  require_unit_interval(rho, "ar1pos");
  // Reuse the geometry checks for ordering and finiteness.
  (void)PointGeometry::positions(positions);
  CorrelationModel model(ModelKind::AR1Positions, rho);
  model.positions_ = std::move(positions);
  return model;
}

CorrelationModel CorrelationModel::matern_l1(double rho) {
  require_unit_interval(rho, "matern-l1");
  return CorrelationModel(ModelKind::MaternL1, rho);
}

CorrelationModel CorrelationModel::matern_l2_half(double rho) {
  require_unit_interval(rho, "matern-l2-0.5");
  return CorrelationModel(ModelKind::MaternL2Half, rho);
}

CorrelationModel CorrelationModel::matern_l2_three_half(double rho) {
  require_unit_interval(rho, "matern-l2-1.5");
  return CorrelationModel(ModelKind::MaternL2ThreeHalf, rho);
}

CorrelationModel CorrelationModel::kronecker(const CorrelationModel& first,
                                             const CorrelationModel& second) {
  if (!first.is_1d() || !second.is_1d())
    throw InvalidArgument("kron: both factors must be one-dimensional models");
  CorrelationModel model(ModelKind::Kronecker, 0.0);
  model.first_ = std::make_shared<const CorrelationModel>(first);
  model.second_ = std::make_shared<const CorrelationModel>(second);
  return model;
}

double CorrelationModel::phi() const {
  if (rho_ <= 0.0 || rho_ >= 1.0)
    throw InvalidArgument("phi is defined only for 0 < rho < 1");
  return -1.0 / std::log(rho_);
}

bool CorrelationModel::is_1d() const noexcept {
  switch (kind_) {
    case ModelKind::AR1:
    case ModelKind::Linear:
    case ModelKind::InverseLinear:
    case ModelKind::AR1Positions:
      return true;
    default:
      return false;
  }
}

const CorrelationModel& CorrelationModel::first_factor() const {
  if (!first_) throw InvalidArgument("model has no Kronecker factors");
  return *first_;
}

const CorrelationModel& CorrelationModel::second_factor() const {
  if (!second_) throw InvalidArgument("model has no Kronecker factors");
  return *second_;
}

PointGeometry factor_geometry(const CorrelationModel& factor, std::size_t n) {
  if (factor.kind() == ModelKind::AR1Positions)
    return PointGeometry::positions(factor.positions());
  return PointGeometry::equispaced(n);
}

void CorrelationModel::validate(const PointGeometry& geom) const {
  if (is_1d()) {
    if (!geom.is_1d())
      throw InvalidArgument(std::string(to_string(kind_)) +
                            ": one-dimensional model needs a 1D geometry");
    const std::size_t n = geom.size();
    if (kind_ == ModelKind::AR1Positions) {
      if (positions_.size() != n)
        throw InvalidArgument("ar1pos: positions length does not match n");
      if (geom.shape() == PointGeometry::Shape::Positions1D &&
          geom.point_positions() != positions_)
        throw InvalidArgument("ar1pos: geometry positions differ from model");
      return;
    }
    if (geom.shape() != PointGeometry::Shape::Equispaced1D)
      throw InvalidArgument(std::string(to_string(kind_)) +
                            ": index-based model needs an equispaced geometry");
    if (kind_ == ModelKind::Linear && n > 1) {
      // Tolerate the last ulp so that rho = 1/(n-1) computed either way passes.
      const double bound = 1.0 / static_cast<double>(n - 1);
      if (rho_ > bound * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "linear: rho must satisfy rho <= 1/(n-1) = " << bound << ", got "
           << rho_;
        throw InvalidArgument(os.str());
      }
    }
    return;
  }
  if (!geom.is_grid())
    throw InvalidArgument(std::string(to_string(kind_)) +
                          ": two-dimensional model needs a grid geometry");
  if (kind_ == ModelKind::Kronecker) {
    first_->validate(factor_geometry(*first_, geom.n1()));
    second_->validate(factor_geometry(*second_, geom.n2()));
  }
}

double CorrelationModel::entry_1d(std::size_t i, std::size_t j) const {
  if (i == j) return 1.0;
  const std::size_t d = i > j ? i - j : j - i;
  switch (kind_) {
    case ModelKind::AR1:
    case ModelKind::Linear:
    case ModelKind::InverseLinear:
      return lag(d);
    case ModelKind::AR1Positions:
      return rho_power(rho_, std::fabs(positions_[i] - positions_[j]));
    default:
      throw InvalidArgument("entry_1d called on a 2D model");
  }
}

double CorrelationModel::lag(std::size_t d) const {
  if (d == 0) return 1.0;
  const double dd = static_cast<double>(d);
  switch (kind_) {
    case ModelKind::AR1:
      return rho_power(rho_, dd);
    case ModelKind::Linear:
      return 1.0 - rho_ * dd;
    case ModelKind::InverseLinear:
      return 1.0 / (1.0 + rho_ * dd);
    case ModelKind::AR1Positions:
      if (is_stationary_1d(*this)) return rho_power(rho_, dd);
      break;
    default:
      break;
  }
  throw InvalidArgument(std::string(to_string(kind_)) +
                        ": model is not stationary in 1D index space");
}

double CorrelationModel::lag2(long d1, long d2) const {
  if (d1 == 0 && d2 == 0) return 1.0;
  const double a = static_cast<double>(std::labs(d1));
  const double b = static_cast<double>(std::labs(d2));
  switch (kind_) {
    case ModelKind::MaternL1:
      return rho_power(rho_, a + b);
    case ModelKind::MaternL2Half:
      return rho_power(rho_, std::sqrt(a * a + b * b));
    case ModelKind::MaternL2ThreeHalf: {
      if (rho_ == 0.0) return 0.0;
      const double dist = std::sqrt(a * a + b * b);
      return (1.0 - dist * std::log(rho_)) * rho_power(rho_, dist);
    }
    case ModelKind::Kronecker:
      return first_->lag(static_cast<std::size_t>(std::labs(d1))) *
             second_->lag(static_cast<std::size_t>(std::labs(d2)));
    default:
      throw InvalidArgument(std::string(to_string(kind_)) +
                            ": lag2 needs a two-dimensional model");
  }
}

double CorrelationModel::entry(const PointGeometry& geom, std::size_t i,
                               std::size_t j) const {
  if (is_1d()) return entry_1d(i, j);
  const GridPoint p = geom.coords(i);
  const GridPoint q = geom.coords(j);
  if (kind_ == ModelKind::Kronecker)
    return first_->entry_1d(p.i1, q.i1) * second_->entry_1d(p.i2, q.i2);
  return lag2(static_cast<long>(p.i1) - static_cast<long>(q.i1),
              static_cast<long>(p.i2) - static_cast<long>(q.i2));
}

std::string CorrelationModel::describe() const {
  switch (kind_) {
    case ModelKind::Kronecker:
      return "kron:(" + first_->describe() + ")x(" + second_->describe() + ")";
    case ModelKind::AR1Positions:
      return "ar1pos:rho=" + format_double(rho_) +
             ",n=" + std::to_string(positions_.size());
    default:
      return std::string(to_string(kind_)) + ":rho=" + format_double(rho_);
  }
}

double entry(const CorrelationModel& model, const PointGeometry& geom,
             std::size_t i, std::size_t j) {
  const std::size_t n = geom.size();
  if (i >= n || j >= n) {
    std::ostringstream os;
    os << "entry: index (" << i << ", " << j << ") out of range for n = " << n;
    throw InvalidArgument(os.str());
  }
  return model.entry(geom, i, j);
}

bool is_stationary_1d(const CorrelationModel& model) noexcept {
  switch (model.kind()) {
    case ModelKind::AR1:
    case ModelKind::Linear:
    case ModelKind::InverseLinear:
      return true;
    case ModelKind::AR1Positions: {
      const auto& s = model.positions();
      for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] - s[i - 1] != 1.0) return false;
      return true;
    }
    default:
      return false;
  }
}

bool is_stationary_2d(const CorrelationModel& model) noexcept {
  switch (model.kind()) {
    case ModelKind::MaternL1:
    case ModelKind::MaternL2Half:
    case ModelKind::MaternL2ThreeHalf:
      return true;
    case ModelKind::Kronecker:
      return is_stationary_1d(model.first_factor()) &&
             is_stationary_1d(model.second_factor());
    default:
      return false;
  }
}

std::optional<std::pair<CorrelationModel, CorrelationModel>> as_kronecker(
    const CorrelationModel& model) {
  switch (model.kind()) {
    case ModelKind::MaternL1:
      return std::make_pair(CorrelationModel::ar1(model.rho()),
                            CorrelationModel::ar1(model.rho()));
    case ModelKind::Kronecker:
      return std::make_pair(model.first_factor(), model.second_factor());
    default:
      return std::nullopt;
  }
}

}  // namespace blockess
