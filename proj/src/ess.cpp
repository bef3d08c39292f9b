#include "blockess/ess.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <string>

#include "blockess/errors.hpp"
#include "blockess/parallel.hpp"

namespace blockess {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void check_closed_rho(double rho, const char* name) {
  if (!std::isfinite(rho) || rho < 0.0 || rho > kMaxClosedFormRho) {
    std::ostringstream os;
    os << name << ": rho must satisfy 0 <= rho <= " << kMaxClosedFormRho
       << ", got " << rho;
    throw InvalidArgument(os.str());
  }
}

void check_n(std::size_t n, const char* name) {
  if (n < 1) throw InvalidArgument(std::string(name) + ": n must be at least 1");
}

void check_factorization(std::size_t n, std::size_t m, std::size_t b,
                         const char* name) {
  if (m < 1 || b < 1 || m * b != n) {
    std::ostringstream os;
    os << name << ": need n = m*b (n=" << n << ", m=" << m << ", b=" << b << ")";
    throw InvalidArgument(os.str());
  }
}

// 1 - rho^k without cancellation near rho = 1.
double one_minus_pow(double rho, double k) {
  if (k == 0.0) return 0.0;
  if (rho == 0.0) return 1.0;
  return -std::expm1(k * std::log(rho));
}

Vector weight_vector(std::optional<std::span<const double>> weights, std::size_t n) {
  if (!weights) return Vector::Ones(static_cast<Eigen::Index>(n));
  if (weights->size() != n) {
    std::ostringstream os;
    os << "weights: expected " << n << " values, got " << weights->size();
    throw InvalidArgument(os.str());
  }
  Vector z(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite((*weights)[i]))
      throw InvalidArgument("weights: non-finite value");
    z(static_cast<Eigen::Index>(i)) = (*weights)[i];
  }
  return z;
}

double block_ess_from_sums(double diagonal, double total) {
  return diagonal * diagonal / total;
}

// Stride of the block index (s) and of the within-block index (t) in point
// coordinates: row-wise blocks are runs, column-wise blocks are strided.
struct Strides {
  long block;
  long within;
};

Strides strides_for(Scheme scheme, std::size_t m, std::size_t b) {
  if (scheme == Scheme::Row) return {static_cast<long>(b), 1};
  return {1, static_cast<long>(m)};
}

void require_block_scheme(Scheme scheme, const char* name) {
  if (scheme == Scheme::Full)
    throw InvalidArgument(std::string(name) + ": needs a row or column scheme");
}

}  // namespace

const char* to_string(EssMethod method) noexcept {
  switch (method) {
    case EssMethod::DenseFull: return "dense-full";
    case EssMethod::DenseBlock: return "dense-block";
    case EssMethod::Stationary1D: return "stationary-1d";
    case EssMethod::Stationary2D: return "stationary-2d";
    case EssMethod::ClosedAr1Full: return "closed-ar1-full";
    case EssMethod::ClosedAr1Row: return "closed-ar1-row";
    case EssMethod::ClosedAr1Col: return "closed-ar1-col";
    case EssMethod::Kronecker: return "kronecker";
    case EssMethod::B2Stationary: return "b2-stationary";
  }
  return "?";
}

const char* to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::Full: return "full";
    case Scheme::Row: return "row";
    case Scheme::Col: return "col";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// LambdaTable

LambdaTable LambdaTable::dense_by_pair(std::size_t m) {
  return LambdaTable(Layout::DenseByPair, m, m, m * m);
}

LambdaTable LambdaTable::offset_1d(std::size_t m) {
  return LambdaTable(Layout::Offset1D, m, 1, m);
}

LambdaTable LambdaTable::offset_2d(std::size_t m1, std::size_t m2) {
  return LambdaTable(Layout::Offset2D, m1, m2, m2 + (m1 - 1) * (2 * m2 - 1));
}

std::size_t LambdaTable::slot_2d(long d1, long d2) const {
  if (d1 < 0 || (d1 == 0 && d2 < 0)) {
    d1 = -d1;
    d2 = -d2;
  }
  const long m1 = static_cast<long>(m1_);
  const long m2 = static_cast<long>(m2_);
  if (d1 >= m1 || d2 <= -m2 || d2 >= m2)
    throw InvalidArgument("LambdaTable: offset out of range");
  if (d1 == 0) return static_cast<std::size_t>(d2);
  return static_cast<std::size_t>(m2 + (d1 - 1) * (2 * m2 - 1) + (d2 + m2 - 1));
}

double LambdaTable::offset(long d1, long d2) const { return values_[slot_2d(d1, d2)]; }
double& LambdaTable::offset_slot(long d1, long d2) { return values_[slot_2d(d1, d2)]; }

// ---------------------------------------------------------------------------
// Full likelihood

Vector y_vector(std::size_t a, double h) {
  if (a < 2) throw InvalidArgument("y_vector: length must be at least 2");
  if (!std::isfinite(h) || h < 0.0) throw InvalidArgument("y_vector: need h >= 0");
  Vector y = Vector::Constant(static_cast<Eigen::Index>(a), (1.0 - h) / (1.0 + h));
  y(0) = 1.0 / (1.0 + h);
  y(static_cast<Eigen::Index>(a) - 1) = 1.0 / (1.0 + h);
  return y;
}

EssReport ess_full(const CorrelationModel& model, const PointGeometry& geom,
                   std::optional<std::span<const double>> weights,
                   const DenseLimits& limits) {
  Stopwatch clock;
  model.validate(geom);
  const std::size_t n = geom.size();
  if (n > limits.max_full) {
    std::ostringstream os;
    os << "ess_full: n = " << n << " exceeds the dense limit of " << limits.max_full
       << " points; use a closed-form, Kronecker or stationary block path";
    throw Unsupported(os.str());
  }
  const Vector z = weight_vector(weights, n);
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  const CholeskyFactor factor =
      cholesky(materialize_block(model, geom, all, all), "full correlation matrix");
  const Vector x = solve_spd(factor, z);
  return {z.dot(x), EssMethod::DenseFull, clock.seconds()};
}

double ess_full_ar1_closed(std::size_t n, double rho) {
  check_n(n, "ess_full_ar1_closed");
  check_closed_rho(rho, "ess_full_ar1_closed");
  const double nd = static_cast<double>(n);
  if (rho == 0.0) return nd;
  return (nd * (1.0 - rho) + 2.0 * rho) / (1.0 + rho);
}

double one_r_one_ar1(std::size_t n, double rho) {
  check_n(n, "one_r_one_ar1");
  check_closed_rho(rho, "one_r_one_ar1");
  const double nd = static_cast<double>(n);
  if (rho == 0.0) return nd;
  const double q = 1.0 - rho;
  return (nd * (1.0 - rho * rho) - 2.0 * rho * one_minus_pow(rho, nd)) / (q * q);
}

double ess_b1_b2_ar1_closed(std::size_t n, double rho) {
  check_n(n, "ess_b1_b2_ar1_closed");
  check_closed_rho(rho, "ess_b1_b2_ar1_closed");
  const double nd = static_cast<double>(n);
  if (rho == 0.0) return nd;
  const double q = 1.0 - rho;
  return nd * nd * q * q /
         (nd * (1.0 - rho * rho) - 2.0 * rho * one_minus_pow(rho, nd));
}

double ess_row_ar1_closed(std::size_t n, std::size_t b, std::size_t m, double rho) {
  check_factorization(n, m, b, "ess_row_ar1_closed");
  check_closed_rho(rho, "ess_row_ar1_closed");
  const double nd = static_cast<double>(n);
  if (rho == 0.0) return nd;
  if (b == 1) return ess_b1_b2_ar1_closed(n, rho);
  const double md = static_cast<double>(m);
  const double bd = static_cast<double>(b);
  const double lead = nd * (1.0 - rho) + 2.0 * md * rho;
  const double qb = one_minus_pow(rho, bd);
  const double tail = 2.0 * rho * (1.0 + rho) / qb * (md - one_minus_pow(rho, nd) / qb);
  return lead * lead / ((1.0 + rho) * (lead + tail));
}

double ess_col_ar1_closed(std::size_t n, std::size_t b, std::size_t m, double rho) {
  check_factorization(n, m, b, "ess_col_ar1_closed");
  check_closed_rho(rho, "ess_col_ar1_closed");
  const double nd = static_cast<double>(n);
  if (rho == 0.0) return nd;
  // The column expression needs b >= 2; singletons share the b = 2 value.
  if (b == 1) return ess_b1_b2_ar1_closed(n, rho);
  const double md = static_cast<double>(m);
  const double q = 1.0 - rho;
  const double qm = one_minus_pow(rho, md);
  const double lead = nd * qm + 2.0 * md * (1.0 - qm);
  const double denom = (1.0 - rho * rho) * ((nd - 2.0 * md) * qm * qm + 2.0 * md) -
                       2.0 * rho * one_minus_pow(rho, 2.0 * md);
  return lead * lead * q * q / denom;
}

// ---------------------------------------------------------------------------
// Dense block likelihood

EssReport ess_block_dense(const CorrelationModel& model, const PointGeometry& geom,
                          const Blocking& blocking,
                          std::optional<std::span<const double>> weights,
                          LambdaTable* table, const DenseLimits& limits) {
  Stopwatch clock;
  model.validate(geom);
  const std::size_t n = geom.size();
  validate_partition(blocking, n);
  const Vector z = weight_vector(weights, n);
  const std::size_t m = blocking.block_count();

  std::vector<Vector> w(m);
  std::vector<double> diag(m);
  for (std::size_t u = 0; u < m; ++u) {
    const auto& block = blocking.blocks[u];
    if (block.size() > limits.max_block) {
      std::ostringstream os;
      os << "ess_block_dense: block " << u + 1 << " has " << block.size()
         << " points, above the limit of " << limits.max_block;
      throw Unsupported(os.str());
    }
    Vector zu(static_cast<Eigen::Index>(block.size()));
    for (std::size_t k = 0; k < block.size(); ++k)
      zu(static_cast<Eigen::Index>(k)) = z(static_cast<Eigen::Index>(block[k]));
    const CholeskyFactor factor = cholesky(materialize_block(model, geom, block, block),
                                           "block " + std::to_string(u + 1));
    w[u] = solve_spd(factor, zu);
    diag[u] = zu.dot(w[u]);
  }

  if (table) *table = LambdaTable::dense_by_pair(m);
  double diagonal = 0.0;
  double total = 0.0;
  for (std::size_t u = 0; u < m; ++u) {
    diagonal += diag[u];
    total += diag[u];
    if (table) table->pair(u, u) = diag[u];
    for (std::size_t v = u + 1; v < m; ++v) {
      const Matrix cross =
          materialize_block(model, geom, blocking.blocks[u], blocking.blocks[v]);
      const double lambda = quad_form(w[u], cross, w[v]);
      total += 2.0 * lambda;
      if (table) {
        table->pair(u, v) = lambda;
        table->pair(v, u) = lambda;
      }
    }
  }
  return {block_ess_from_sums(diagonal, total), EssMethod::DenseBlock, clock.seconds()};
}

EssReport ess_block_generic_weighted(const CorrelationModel& model,
                                     const PointGeometry& geom,
                                     const Blocking& blocking,
                                     std::span<const double> z,
                                     const DenseLimits& limits) {
  bool nonzero = false;
  for (double value : z) nonzero = nonzero || value != 0.0;
  if (!nonzero) throw InvalidArgument("weights: predictor vector is identically zero");
  return ess_block_dense(model, geom, blocking, z, nullptr, limits);
}

// ---------------------------------------------------------------------------
// Stationary fast paths
//
// With w the solution of the shared diagonal block, lambda for two blocks
// whose offset is d reduces to a sum over within-block lags delta:
//   lambda(d) = sum_delta c(delta) r(d * s + delta * t),
// where c is the autocorrelation of w and (s, t) are the strides above.

EssReport ess_block_stationary_1d(const CorrelationModel& model, std::size_t n,
                                  std::size_t m, std::size_t b, Scheme scheme,
                                  LambdaTable* table, const DenseLimits& limits) {
  Stopwatch clock;
  require_block_scheme(scheme, "ess_block_stationary_1d");
  if (!is_stationary_1d(model))
    throw InvalidArgument("ess_block_stationary_1d: model " + model.describe() +
                          " is not stationary in 1D index space");
  check_factorization(n, m, b, "ess_block_stationary_1d");
  model.validate(factor_geometry(model, n));
  if (b > limits.max_block)
    throw Unsupported("ess_block_stationary_1d: block size above the dense limit");

  const Strides stride = strides_for(scheme, m, b);
  const auto bi = static_cast<Eigen::Index>(b);
  Matrix shared(bi, bi);
  for (Eigen::Index i = 0; i < bi; ++i)
    for (Eigen::Index j = 0; j < bi; ++j)
      shared(i, j) = model.lag(static_cast<std::size_t>(std::labs(i - j) * stride.within));
  const Vector w = solve_spd(cholesky(std::move(shared), "shared block"),
                             Vector::Ones(bi));

  std::vector<double> autocorr(b, 0.0);
  for (std::size_t delta = 0; delta < b; ++delta)
    for (std::size_t j = 0; j + delta < b; ++j)
      autocorr[delta] += w(static_cast<Eigen::Index>(j)) *
                         w(static_cast<Eigen::Index>(j + delta));

  const long bl = static_cast<long>(b);
  std::vector<double> lambda(m, 0.0);
  lambda[0] = w.sum();
  for (std::size_t d = 1; d < m; ++d) {
    double value = 0.0;
    for (long delta = -(bl - 1); delta <= bl - 1; ++delta) {
      const long lag = static_cast<long>(d) * stride.block + delta * stride.within;
      value += autocorr[static_cast<std::size_t>(std::labs(delta))] *
               model.lag(static_cast<std::size_t>(std::labs(lag)));
    }
    lambda[d] = value;
  }

  const double md = static_cast<double>(m);
  double total = md * lambda[0];
  for (std::size_t d = 1; d < m; ++d)
    total += 2.0 * static_cast<double>(m - d) * lambda[d];
  if (table) {
    *table = LambdaTable::offset_1d(m);
    for (std::size_t d = 0; d < m; ++d) table->offset(d) = lambda[d];
  }
  return {block_ess_from_sums(md * lambda[0], total), EssMethod::Stationary1D,
          clock.seconds()};
}

EssReport ess_b2_stationary(const CorrelationModel& model, std::size_t n) {
  Stopwatch clock;
  if (!is_stationary_1d(model))
    throw InvalidArgument("ess_b2_stationary: model is not stationary in 1D");
  check_n(n, "ess_b2_stationary");
  model.validate(factor_geometry(model, n));
  double one_r_one = static_cast<double>(n);
  for (std::size_t d = 1; d < n; ++d)
    one_r_one += 2.0 * static_cast<double>(n - d) * model.lag(d);
  const double nd = static_cast<double>(n);
  return {nd * nd / one_r_one, EssMethod::B2Stationary, clock.seconds()};
}

EssReport ess_block_stationary_2d(const CorrelationModel& model, std::size_t n1,
                                  std::size_t n2, std::size_t m1, std::size_t b1,
                                  std::size_t m2, std::size_t b2, Scheme scheme,
                                  unsigned workers, LambdaTable* table,
                                  const DenseLimits& limits) {
  Stopwatch clock;
  require_block_scheme(scheme, "ess_block_stationary_2d");
  if (!is_stationary_2d(model))
    throw InvalidArgument("ess_block_stationary_2d: model " + model.describe() +
                          " is not stationary on the grid");
  check_factorization(n1, m1, b1, "ess_block_stationary_2d (dimension 1)");
  check_factorization(n2, m2, b2, "ess_block_stationary_2d (dimension 2)");
  model.validate(PointGeometry::grid(n1, n2));
  const std::size_t b = b1 * b2;
  if (b > limits.max_block)
    throw Unsupported("ess_block_stationary_2d: block size above the dense limit");

  const Strides s1 = strides_for(scheme, m1, b1);
  const Strides s2 = strides_for(scheme, m2, b2);

  // Shared diagonal block; local point (j1, j2) sits at row j1 * b2 + j2.
  const auto bi = static_cast<Eigen::Index>(b);
  Matrix shared(bi, bi);
  for (Eigen::Index p = 0; p < bi; ++p) {
    const long p1 = static_cast<long>(p) / static_cast<long>(b2);
    const long p2 = static_cast<long>(p) % static_cast<long>(b2);
    for (Eigen::Index q = 0; q < bi; ++q) {
      const long q1 = static_cast<long>(q) / static_cast<long>(b2);
      const long q2 = static_cast<long>(q) % static_cast<long>(b2);
      shared(p, q) = model.lag2((p1 - q1) * s1.within, (p2 - q2) * s2.within);
    }
  }
  const Vector w = solve_spd(cholesky(std::move(shared), "shared block"),
                             Vector::Ones(bi));

  // Autocorrelation over within-block lags (delta1, delta2), stored with
  // delta1 in [-(b1-1), b1-1] and delta2 in [-(b2-1), b2-1].
  const long lb1 = static_cast<long>(b1);
  const long lb2 = static_cast<long>(b2);
  const long width = 2 * lb2 - 1;
  std::vector<double> autocorr(static_cast<std::size_t>((2 * lb1 - 1) * width), 0.0);
  auto weight = [&](long j1, long j2) { return w(static_cast<Eigen::Index>(j1 * lb2 + j2)); };
  for (long d1 = -(lb1 - 1); d1 <= lb1 - 1; ++d1) {
    for (long d2 = -(lb2 - 1); d2 <= lb2 - 1; ++d2) {
      double sum = 0.0;
      for (long j1 = std::max(0L, -d1); j1 < std::min(lb1, lb1 - d1); ++j1)
        for (long j2 = std::max(0L, -d2); j2 < std::min(lb2, lb2 - d2); ++j2)
          sum += weight(j1, j2) * weight(j1 + d1, j2 + d2);
      autocorr[static_cast<std::size_t>((d1 + lb1 - 1) * width + (d2 + lb2 - 1))] = sum;
    }
  }

  // Half-space of block offsets: (0, 0..m2-1), then (d1 >= 1, -(m2-1)..m2-1).
  const long lm1 = static_cast<long>(m1);
  const long lm2 = static_cast<long>(m2);
  struct Offset {
    long d1;
    long d2;
  };
  std::vector<Offset> offsets;
  offsets.reserve(static_cast<std::size_t>(lm2 + (lm1 - 1) * (2 * lm2 - 1)));
  for (long d2 = 0; d2 < lm2; ++d2) offsets.push_back({0, d2});
  for (long d1 = 1; d1 < lm1; ++d1)
    for (long d2 = -(lm2 - 1); d2 <= lm2 - 1; ++d2) offsets.push_back({d1, d2});

  std::vector<double> lambda(offsets.size(), 0.0);
  lambda[0] = w.sum();
  parallel_for(offsets.size() - 1, workers, [&](std::size_t k) {
    const Offset off = offsets[k + 1];
    double value = 0.0;
    const double* c = autocorr.data();
    for (long d1 = -(lb1 - 1); d1 <= lb1 - 1; ++d1) {
      const long x = off.d1 * s1.block + d1 * s1.within;
      for (long d2 = -(lb2 - 1); d2 <= lb2 - 1; ++d2, ++c) {
        const long y = off.d2 * s2.block + d2 * s2.within;
        value += *c * model.lag2(x, y);
      }
    }
    lambda[k + 1] = value;
  });

  const double count = static_cast<double>(m1 * m2);
  double total = count * lambda[0];
  for (std::size_t k = 1; k < offsets.size(); ++k) {
    const double pairs = static_cast<double>(lm1 - std::labs(offsets[k].d1)) *
                         static_cast<double>(lm2 - std::labs(offsets[k].d2));
    total += 2.0 * pairs * lambda[k];
  }
  if (table) {
    *table = LambdaTable::offset_2d(m1, m2);
    for (std::size_t k = 0; k < offsets.size(); ++k)
      table->offset_slot(offsets[k].d1, offsets[k].d2) = lambda[k];
  }
  return {block_ess_from_sums(count * lambda[0], total), EssMethod::Stationary2D,
          clock.seconds()};
}

// ---------------------------------------------------------------------------
// Kronecker products

EssReport ess_1d(const CorrelationModel& model, Scheme scheme, std::size_t m,
                 std::size_t b, const DenseLimits& limits) {
  Stopwatch clock;
  if (!model.is_1d()) throw InvalidArgument("ess_1d: needs a one-dimensional model");
  const std::size_t n = m * b;
  check_factorization(n, m, b, "ess_1d");
  const PointGeometry geom = factor_geometry(model, n);
  const bool closed = model.kind() == ModelKind::AR1 && model.rho() <= kMaxClosedFormRho;
  switch (scheme) {
    case Scheme::Full:
      if (closed)
        return {ess_full_ar1_closed(n, model.rho()), EssMethod::ClosedAr1Full,
                clock.seconds()};
      return ess_full(model, geom, std::nullopt, limits);
    case Scheme::Row:
      if (closed)
        return {ess_row_ar1_closed(n, b, m, model.rho()), EssMethod::ClosedAr1Row,
                clock.seconds()};
      break;
    case Scheme::Col:
      if (closed)
        return {ess_col_ar1_closed(n, b, m, model.rho()), EssMethod::ClosedAr1Col,
                clock.seconds()};
      break;
  }
  if (is_stationary_1d(model))
    return ess_block_stationary_1d(model, n, m, b, scheme, nullptr, limits);
  const Blocking blocking = scheme == Scheme::Row ? rw_1d(n, m, b) : cw_1d(n, m, b);
  return ess_block_dense(model, geom, blocking, std::nullopt, nullptr, limits);
}

EssReport ess_kronecker(const CorrelationModel& model, Scheme scheme,
                        std::size_t m1, std::size_t b1, std::size_t m2,
                        std::size_t b2, const DenseLimits& limits) {
  Stopwatch clock;
  const auto factors = as_kronecker(model);
  if (!factors)
    throw InvalidArgument("ess_kronecker: model " + model.describe() +
                          " is not a Kronecker product");
  const std::size_t n1 = m1 * b1;
  const std::size_t n2 = m2 * b2;
  check_factorization(n1, m1, b1, "ess_kronecker (dimension 1)");
  check_factorization(n2, m2, b2, "ess_kronecker (dimension 2)");
  model.validate(PointGeometry::grid(n1, n2));
  const double first = ess_1d(factors->first, scheme, m1, b1, limits).value;
  const double second = ess_1d(factors->second, scheme, m2, b2, limits).value;
  return {first * second, EssMethod::Kronecker, clock.seconds()};
}

}  // namespace blockess
