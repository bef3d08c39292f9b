#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blockess/blocking.hpp"
#include "blockess/corrmodel.hpp"
#include "blockess/ess.hpp"

namespace blockess {

// ---------------------------------------------------------------------------
// Blocking descriptions

enum class BlockingKind { RW, CW, MCW, PRW, Custom, RW2D, CW2D };

/// A blocking described independently of the geometry it will be applied to.
/// RW/CW with n not divisible by m fall back to the near-equal constructions.
struct BlockingSpec {
  BlockingKind kind = BlockingKind::RW;
  std::size_t m = 0;   // RW, CW, MCW
  std::size_t g = 0;   // PRW
  std::size_t m1 = 0;  // RW2D, CW2D
  std::size_t m2 = 0;
  std::string file;    // Custom

  static BlockingSpec rw(std::size_t m) { return make(BlockingKind::RW, m); }
  static BlockingSpec cw(std::size_t m) { return make(BlockingKind::CW, m); }
  static BlockingSpec mcw(std::size_t m) { return make(BlockingKind::MCW, m); }
  static BlockingSpec prw(std::size_t g) {
    BlockingSpec s = make(BlockingKind::PRW, 0);
    s.g = g;
    return s;
  }
  static BlockingSpec rw2d(std::size_t m1, std::size_t m2) {
    return make_2d(BlockingKind::RW2D, m1, m2);
  }
  static BlockingSpec cw2d(std::size_t m1, std::size_t m2) {
    return make_2d(BlockingKind::CW2D, m1, m2);
  }
  static BlockingSpec custom(std::string path) {
    BlockingSpec s = make(BlockingKind::Custom, 0);
    s.file = std::move(path);
    return s;
  }

  /// Canonical spec string, e.g. "cw:m=30".
  std::string label() const;

 private:
  static BlockingSpec make(BlockingKind kind, std::size_t m) {
    BlockingSpec s;
    s.kind = kind;
    s.m = m;
    return s;
  }
  static BlockingSpec make_2d(BlockingKind kind, std::size_t m1, std::size_t m2) {
    BlockingSpec s = make(kind, 0);
    s.m1 = m1;
    s.m2 = m2;
    return s;
  }
};

Blocking build_blocking(const BlockingSpec& spec, const PointGeometry& geom);

// ---------------------------------------------------------------------------
// Evaluation with automatic path selection

struct EvalOptions {
  unsigned workers = 0;  // 0 = hardware concurrency
  DenseLimits limits;
};

/// Full-likelihood ESS by the cheapest exact path: AR(1) closed form,
/// Kronecker product, or dense. Weighted runs always use the dense path.
EssReport evaluate_full(const CorrelationModel& model, const PointGeometry& geom,
                        std::optional<std::span<const double>> weights = std::nullopt,
                        const EvalOptions& options = {});

/// Block-likelihood ESS by the cheapest exact path for the blocking.
EssReport evaluate_block(const CorrelationModel& model, const PointGeometry& geom,
                         const BlockingSpec& spec,
                         std::optional<std::span<const double>> weights = std::nullopt,
                         const EvalOptions& options = {});

// ---------------------------------------------------------------------------
// Efficiency and sweeps

/// ess_block / ess_full; both must be positive.
double efficiency(double ess_block, double ess_full);
/// 100 (ess_col - ess_row) / ess_row.
double percent_gain(double ess_col, double ess_row);

/// A correlation family indexed by one scalar grid value. For the linear
/// model the grid value is (n-1) rho, otherwise it is rho itself.
struct ModelFamily {
  std::string name;
  std::function<CorrelationModel(double grid_value, const PointGeometry& geom)> make;

  static ModelFamily ar1();
  static ModelFamily linear_scaled();
  static ModelFamily inverse_linear();
  static ModelFamily ar1_positions(std::vector<double> positions);
  static ModelFamily matern_l1();
  static ModelFamily matern_l2_half();
  static ModelFamily matern_l2_three_half();
};

/// Strictly increasing list of grid values.
struct RhoGrid {
  std::vector<double> values;

  /// first, first + step, ..., last. Values are snapped to the decimal
  /// lattice of `step` so that e.g. 0.6 is exactly the literal 0.6.
  static RhoGrid range(double first, double last, double step);
  static RhoGrid of(std::vector<double> values);
};

struct SweepRow {
  std::string model;
  double rho = 0.0;  // grid value
  std::size_t n = 0;
  std::optional<std::size_t> n1, n2;
  std::optional<std::size_t> b, m;
  std::optional<std::size_t> b1, m1, b2, m2;
  std::string blocking;
  double ess_full = 0.0;
  double ess_block = 0.0;
  double eff = 0.0;
};

/// One row per (grid value, blocking), in grid-major order.
std::vector<SweepRow> sweep(const ModelFamily& family, const RhoGrid& grid,
                            const PointGeometry& geom,
                            const std::vector<BlockingSpec>& blockings,
                            std::optional<std::span<const double>> weights = std::nullopt,
                            const EvalOptions& options = {});

struct GridExtremum {
  double rho = 0.0;
  double value = 0.0;
};

/// Smallest efficiency over the grid; ties go to the smaller grid value.
GridExtremum min_eff(const ModelFamily& family, const PointGeometry& geom,
                     const BlockingSpec& blocking, const RhoGrid& grid,
                     const EvalOptions& options = {});

/// Largest ESS - ESS_B over the grid; ties go to the smaller grid value.
GridExtremum max_diff(const ModelFamily& family, const PointGeometry& geom,
                      const BlockingSpec& blocking, const RhoGrid& grid,
                      const EvalOptions& options = {});

struct MonotonicityViolation {
  std::size_t b_from = 0;
  std::size_t b_to = 0;
  double ess_from = 0.0;
  double ess_to = 0.0;
};

struct MonotonicityRow {
  double rho = 0.0;
  std::vector<std::size_t> block_sizes;  // divisors of n, ascending
  std::vector<double> ess;                // ESS_B at each block size
  std::vector<MonotonicityViolation> violations;
  bool monotone() const noexcept { return violations.empty(); }
};

/// For each grid value, ESS_B under `scheme` at every divisor b of n, and
/// every consecutive pair where it decreases.
std::vector<MonotonicityRow> monotonicity_report(const ModelFamily& family,
                                                 std::size_t n, const RhoGrid& grid,
                                                 Scheme scheme,
                                                 std::size_t max_n = 100000);

// ---------------------------------------------------------------------------
// Tables for the 2D Matérn models

enum class MaternModel { L1Half, L2Half, L2ThreeHalf };

const char* to_string(MaternModel model) noexcept;
CorrelationModel make_matern(MaternModel model, double rho);

struct GridCase {
  std::size_t b1, b2, m1, m2;
  std::size_t n() const noexcept { return b1 * b2 * m1 * m2; }
};

struct EffPair {
  double row = 0.0;
  double col = 0.0;
};

/// (Eff_row, Eff_col) on a (m1 b1) x (m2 b2) grid.
EffPair grid_efficiencies(MaternModel model, double rho, const GridCase& grid,
                          const EvalOptions& options = {});

struct Table1Entry {
  GridCase grid;
  MaternModel model;
  double rho;
  EffPair eff;
};

/// The three grid cases of the efficiency table.
std::vector<GridCase> table1_cases();
std::vector<Table1Entry> table1(const EvalOptions& options = {});
std::string format_table1(const std::vector<Table1Entry>& entries);

struct Table2Entry {
  MaternModel model;
  double rho;
  double ess_row;
  double ess_col;
  double gain;
};

/// The large-grid case; `scale` > 1 divides m1 and m2 (never below 2).
GridCase table2_case(std::size_t scale = 1);
/// Percentage gains for the three models and rho = 0.1..0.9. `progress`,
/// when set, is called after each entry.
std::vector<Table2Entry> table2(const EvalOptions& options = {}, std::size_t scale = 1,
                                const std::function<void(const Table2Entry&)>& progress = {});
std::string format_table2(const std::vector<Table2Entry>& entries, const GridCase& grid);

// ---------------------------------------------------------------------------
// Oracle equivalence

struct OracleReport {
  std::size_t passed = 0;
  std::size_t total = 0;
  std::vector<std::string> failures;
};

/// Random small cases comparing every fast path with the dense definition.
/// Reproducible for a given seed.
OracleReport oracle_check(std::uint64_t seed, std::size_t cases,
                          const EvalOptions& options = {});

}  // namespace blockess
