#include "blockess/analysis.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "blockess/errors.hpp"
#include "blockess/parallel.hpp"

namespace blockess {

namespace {

bool closed_form_ar1(const CorrelationModel& model, const PointGeometry& geom) {
  return model.kind() == ModelKind::AR1 &&
         geom.shape() == PointGeometry::Shape::Equispaced1D &&
         model.rho() <= kMaxClosedFormRho;
}

std::size_t require_1d(const PointGeometry& geom, const BlockingSpec& spec) {
  if (!geom.is_1d())
    throw InvalidArgument("blocking " + spec.label() + " needs a 1D geometry");
  return geom.size();
}

void require_grid(const PointGeometry& geom, const BlockingSpec& spec) {
  if (!geom.is_grid())
    throw InvalidArgument("blocking " + spec.label() + " needs a 2D grid geometry");
  if (spec.m1 < 1 || spec.m2 < 1 || geom.n1() % spec.m1 != 0 ||
      geom.n2() % spec.m2 != 0) {
    std::ostringstream os;
    os << "blocking " << spec.label() << ": m1 must divide n1 = " << geom.n1()
       << " and m2 must divide n2 = " << geom.n2();
    throw InvalidArgument(os.str());
  }
}

EssReport timed(double value, EssMethod method,
                std::chrono::steady_clock::time_point start) {
  return {value, method,
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()};
}

void fill_dims(SweepRow& row, const PointGeometry& geom, const BlockingSpec& spec) {
  row.n = geom.size();
  if (geom.is_grid()) {
    row.n1 = geom.n1();
    row.n2 = geom.n2();
  }
  switch (spec.kind) {
    case BlockingKind::RW:
    case BlockingKind::CW:
    case BlockingKind::MCW:
      row.m = spec.m;
      if (spec.m > 0 && row.n % spec.m == 0) row.b = row.n / spec.m;
      break;
    case BlockingKind::PRW:
      row.b = 2;
      row.m = row.n / 2;
      break;
    case BlockingKind::RW2D:
    case BlockingKind::CW2D:
      row.m1 = spec.m1;
      row.m2 = spec.m2;
      row.b1 = geom.n1() / spec.m1;
      row.b2 = geom.n2() / spec.m2;
      row.m = spec.m1 * spec.m2;
      row.b = *row.b1 * *row.b2;
      break;
    case BlockingKind::Custom:
      break;
  }
}

struct PairValues {
  double full = 0.0;
  double block = 0.0;
};

std::vector<PairValues> evaluate_grid(const ModelFamily& family,
                                      const PointGeometry& geom,
                                      const BlockingSpec& blocking, const RhoGrid& grid,
                                      const EvalOptions& options) {
  std::vector<PairValues> values(grid.values.size());
  EvalOptions inner = options;
  inner.workers = grid.values.size() > 1 ? 1 : options.workers;
  parallel_for(grid.values.size(), options.workers, [&](std::size_t k) {
    const CorrelationModel model = family.make(grid.values[k], geom);
    values[k].full = evaluate_full(model, geom, std::nullopt, inner).value;
    values[k].block = evaluate_block(model, geom, blocking, std::nullopt, inner).value;
  });
  return values;
}

double snap(double value, double step) {
  const double inverse = 1.0 / step;
  const double rounded = std::round(inverse);
  if (std::fabs(inverse - rounded) < 1e-9 * rounded)
    return std::round(value * rounded) / rounded;
  return value;
}

}  // namespace

// ---------------------------------------------------------------------------
// Blocking descriptions

std::string BlockingSpec::label() const {
  switch (kind) {
    case BlockingKind::RW: return "rw:m=" + std::to_string(m);
    case BlockingKind::CW: return "cw:m=" + std::to_string(m);
    case BlockingKind::MCW: return "mcw:m=" + std::to_string(m);
    case BlockingKind::PRW: return "prw:g=" + std::to_string(g);
    case BlockingKind::RW2D:
      return "rw2d:m1=" + std::to_string(m1) + ",m2=" + std::to_string(m2);
    case BlockingKind::CW2D:
      return "cw2d:m1=" + std::to_string(m1) + ",m2=" + std::to_string(m2);
    case BlockingKind::Custom: return "custom:file=" + file;
  }
  return "?";
}

Blocking build_blocking(const BlockingSpec& spec, const PointGeometry& geom) {
  switch (spec.kind) {
    case BlockingKind::RW:
    case BlockingKind::CW:
    case BlockingKind::MCW: {
      const std::size_t n = require_1d(geom, spec);
      if (spec.m < 1 || spec.m > n)
        throw InvalidArgument("blocking " + spec.label() + ": need 1 <= m <= n");
      if (n % spec.m == 0) {
        const std::size_t b = n / spec.m;
        if (spec.kind == BlockingKind::RW) return rw_1d(n, spec.m, b);
        if (spec.kind == BlockingKind::CW) return cw_1d(n, spec.m, b);
        return mcw_1d(n, spec.m, b);
      }
      if (spec.kind == BlockingKind::RW) return rw_1d_unequal(n, spec.m);
      if (spec.kind == BlockingKind::CW) return cw_1d_unequal(n, spec.m);
      throw InvalidArgument("blocking " + spec.label() + ": m must divide n");
    }
    case BlockingKind::PRW:
      return prw(require_1d(geom, spec), spec.g);
    case BlockingKind::Custom:
      return load_blocking_file(spec.file, geom.size());
    case BlockingKind::RW2D:
    case BlockingKind::CW2D: {
      require_grid(geom, spec);
      const std::size_t b1 = geom.n1() / spec.m1;
      const std::size_t b2 = geom.n2() / spec.m2;
      if (spec.kind == BlockingKind::RW2D)
        return rw_2d(geom.n1(), geom.n2(), spec.m1, b1, spec.m2, b2);
      return cw_2d(geom.n1(), geom.n2(), spec.m1, b1, spec.m2, b2);
    }
  }
  throw InvalidArgument("unknown blocking kind");
}

// ---------------------------------------------------------------------------
// Evaluation

EssReport evaluate_full(const CorrelationModel& model, const PointGeometry& geom,
                        std::optional<std::span<const double>> weights,
                        const EvalOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  model.validate(geom);
  if (!weights) {
    if (closed_form_ar1(model, geom))
      return timed(ess_full_ar1_closed(geom.size(), model.rho()),
                   EssMethod::ClosedAr1Full, start);
    if (geom.is_grid() && as_kronecker(model))
      return ess_kronecker(model, Scheme::Full, 1, geom.n1(), 1, geom.n2(),
                           options.limits);
  }
  return ess_full(model, geom, weights, options.limits);
}

EssReport evaluate_block(const CorrelationModel& model, const PointGeometry& geom,
                         const BlockingSpec& spec,
                         std::optional<std::span<const double>> weights,
                         const EvalOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  model.validate(geom);
  if (!weights) {
    if ((spec.kind == BlockingKind::RW || spec.kind == BlockingKind::CW) &&
        geom.is_1d() && spec.m >= 1 && geom.size() % spec.m == 0) {
      const std::size_t n = geom.size();
      const std::size_t m = spec.m;
      const std::size_t b = n / m;
      const Scheme scheme = spec.kind == BlockingKind::RW ? Scheme::Row : Scheme::Col;
      if (closed_form_ar1(model, geom)) {
        if (scheme == Scheme::Row)
          return timed(ess_row_ar1_closed(n, b, m, model.rho()),
                       EssMethod::ClosedAr1Row, start);
        return timed(ess_col_ar1_closed(n, b, m, model.rho()), EssMethod::ClosedAr1Col,
                     start);
      }
      if (is_stationary_1d(model))
        return ess_block_stationary_1d(model, n, m, b, scheme, nullptr, options.limits);
    }
    if (spec.kind == BlockingKind::RW2D || spec.kind == BlockingKind::CW2D) {
      require_grid(geom, spec);
      const std::size_t b1 = geom.n1() / spec.m1;
      const std::size_t b2 = geom.n2() / spec.m2;
      const Scheme scheme = spec.kind == BlockingKind::RW2D ? Scheme::Row : Scheme::Col;
      if (as_kronecker(model))
        return ess_kronecker(model, scheme, spec.m1, b1, spec.m2, b2, options.limits);
      if (is_stationary_2d(model))
        return ess_block_stationary_2d(model, geom.n1(), geom.n2(), spec.m1, b1,
                                       spec.m2, b2, scheme, options.workers, nullptr,
                                       options.limits);
    }
  }
  return ess_block_dense(model, geom, build_blocking(spec, geom), weights, nullptr,
                         options.limits);
}

// ---------------------------------------------------------------------------
// Efficiency and sweeps

double efficiency(double ess_block, double ess_full) {
  if (!(ess_block > 0.0) || !(ess_full > 0.0))
    throw InvalidArgument("efficiency: both ESS values must be positive");
  return ess_block / ess_full;
}

double percent_gain(double ess_col, double ess_row) {
  if (!(ess_row > 0.0)) throw InvalidArgument("percent_gain: ESS_row must be positive");
  return 100.0 * (ess_col - ess_row) / ess_row;
}

ModelFamily ModelFamily::ar1() {
  return {"ar1", [](double v, const PointGeometry&) { return CorrelationModel::ar1(v); }};
}

ModelFamily ModelFamily::linear_scaled() {
  return {"linear", [](double v, const PointGeometry& geom) {
            const std::size_t n = geom.size();
            if (n < 2) throw InvalidArgument("linear family needs n >= 2");
            return CorrelationModel::linear(v / static_cast<double>(n - 1));
          }};
}

ModelFamily ModelFamily::inverse_linear() {
  return {"invlin",
          [](double v, const PointGeometry&) { return CorrelationModel::inverse_linear(v); }};
}

ModelFamily ModelFamily::ar1_positions(std::vector<double> positions) {
  return {"ar1pos", [positions = std::move(positions)](double v, const PointGeometry&) {
            return CorrelationModel::ar1_positions(v, positions);
          }};
}

ModelFamily ModelFamily::matern_l1() {
  return {"matern-l1",
          [](double v, const PointGeometry&) { return CorrelationModel::matern_l1(v); }};
}

ModelFamily ModelFamily::matern_l2_half() {
  return {"matern-l2-0.5", [](double v, const PointGeometry&) {
            return CorrelationModel::matern_l2_half(v);
          }};
}

ModelFamily ModelFamily::matern_l2_three_half() {
  return {"matern-l2-1.5", [](double v, const PointGeometry&) {
            return CorrelationModel::matern_l2_three_half(v);
          }};
}

RhoGrid RhoGrid::range(double first, double last, double step) {
  if (!(step > 0.0) || !std::isfinite(first) || !std::isfinite(last) || last < first)
    throw InvalidArgument("rho grid: need first <= last and step > 0");
  RhoGrid grid;
  const auto count = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9)) + 1;
  grid.values.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    grid.values.push_back(snap(first + static_cast<double>(k) * step, step));
  return grid;
}

RhoGrid RhoGrid::of(std::vector<double> values) {
  for (std::size_t k = 1; k < values.size(); ++k)
    if (!(values[k] > values[k - 1]))
      throw InvalidArgument("rho grid: values must be strictly increasing");
  return RhoGrid{std::move(values)};
}

std::vector<SweepRow> sweep(const ModelFamily& family, const RhoGrid& grid,
                            const PointGeometry& geom,
                            const std::vector<BlockingSpec>& blockings,
                            std::optional<std::span<const double>> weights,
                            const EvalOptions& options) {
  const std::size_t per_rho = blockings.size();
  std::vector<SweepRow> rows(grid.values.size() * per_rho);
  EvalOptions inner = options;
  inner.workers = grid.values.size() > 1 ? 1 : options.workers;
  parallel_for(grid.values.size(), options.workers, [&](std::size_t k) {
    const double value = grid.values[k];
    const CorrelationModel model = family.make(value, geom);
    const double full = evaluate_full(model, geom, weights, inner).value;
    for (std::size_t s = 0; s < per_rho; ++s) {
      SweepRow& row = rows[k * per_rho + s];
      row.model = family.name;
      row.rho = value;
      fill_dims(row, geom, blockings[s]);
      row.blocking = blockings[s].label();
      row.ess_full = full;
      row.ess_block = evaluate_block(model, geom, blockings[s], weights, inner).value;
      row.eff = efficiency(row.ess_block, row.ess_full);
    }
  });
  return rows;
}

GridExtremum min_eff(const ModelFamily& family, const PointGeometry& geom,
                     const BlockingSpec& blocking, const RhoGrid& grid,
                     const EvalOptions& options) {
  if (grid.values.empty()) throw InvalidArgument("min_eff: empty grid");
  const auto values = evaluate_grid(family, geom, blocking, grid, options);
  GridExtremum best{grid.values[0], efficiency(values[0].block, values[0].full)};
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double eff = efficiency(values[k].block, values[k].full);
    if (eff < best.value) best = {grid.values[k], eff};
  }
  return best;
}

GridExtremum max_diff(const ModelFamily& family, const PointGeometry& geom,
                      const BlockingSpec& blocking, const RhoGrid& grid,
                      const EvalOptions& options) {
  if (grid.values.empty()) throw InvalidArgument("max_diff: empty grid");
  const auto values = evaluate_grid(family, geom, blocking, grid, options);
  GridExtremum best{grid.values[0], values[0].full - values[0].block};
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double diff = values[k].full - values[k].block;
    if (diff > best.value) best = {grid.values[k], diff};
  }
  return best;
}

std::vector<MonotonicityRow> monotonicity_report(const ModelFamily& family,
                                                 std::size_t n, const RhoGrid& grid,
                                                 Scheme scheme, std::size_t max_n) {
  if (scheme == Scheme::Full)
    throw InvalidArgument("monotonicity_report: needs a row or column scheme");
  if (n < 1) throw InvalidArgument("monotonicity_report: n must be at least 1");
  if (n > max_n)
    throw Unsupported("monotonicity_report: n = " + std::to_string(n) +
                      " exceeds the limit of " + std::to_string(max_n));
  std::vector<std::size_t> divisors;
  for (std::size_t b = 1; b <= n; ++b)
    if (n % b == 0) divisors.push_back(b);

  const PointGeometry geom = PointGeometry::equispaced(n);
  std::vector<MonotonicityRow> report;
  report.reserve(grid.values.size());
  for (double value : grid.values) {
    const CorrelationModel model = family.make(value, geom);
    MonotonicityRow row;
    row.rho = value;
    row.block_sizes = divisors;
    for (std::size_t b : divisors) row.ess.push_back(ess_1d(model, scheme, n / b, b).value);
    for (std::size_t k = 0; k + 1 < divisors.size(); ++k) {
      const double slack = 1e-9 * std::max(1.0, std::fabs(row.ess[k]));
      if (row.ess[k + 1] < row.ess[k] - slack)
        row.violations.push_back(
            {divisors[k], divisors[k + 1], row.ess[k], row.ess[k + 1]});
    }
    report.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Tables

const char* to_string(MaternModel model) noexcept {
  switch (model) {
    case MaternModel::L1Half: return "matern-l1";
    case MaternModel::L2Half: return "matern-l2-0.5";
    case MaternModel::L2ThreeHalf: return "matern-l2-1.5";
  }
  return "?";
}

CorrelationModel make_matern(MaternModel model, double rho) {
  switch (model) {
    case MaternModel::L1Half: return CorrelationModel::matern_l1(rho);
    case MaternModel::L2Half: return CorrelationModel::matern_l2_half(rho);
    case MaternModel::L2ThreeHalf: return CorrelationModel::matern_l2_three_half(rho);
  }
  throw InvalidArgument("unknown Matérn model");
}

EffPair grid_efficiencies(MaternModel model, double rho, const GridCase& grid,
                          const EvalOptions& options) {
  const PointGeometry geom = PointGeometry::grid(grid.b1 * grid.m1, grid.b2 * grid.m2);
  const CorrelationModel correlation = make_matern(model, rho);
  const double full = evaluate_full(correlation, geom, std::nullopt, options).value;
  const double row = evaluate_block(correlation, geom,
                                    BlockingSpec::rw2d(grid.m1, grid.m2), std::nullopt,
                                    options)
                         .value;
  const double col = evaluate_block(correlation, geom,
                                    BlockingSpec::cw2d(grid.m1, grid.m2), std::nullopt,
                                    options)
                         .value;
  return {efficiency(row, full), efficiency(col, full)};
}

std::vector<GridCase> table1_cases() {
  return {{6, 4, 3, 3}, {8, 6, 7, 5}, {5, 8, 6, 10}};
}

std::vector<Table1Entry> table1(const EvalOptions& options) {
  const MaternModel models[] = {MaternModel::L1Half, MaternModel::L2Half,
                                MaternModel::L2ThreeHalf};
  const double rhos[] = {0.6, 0.7, 0.8, 0.9};
  std::vector<Table1Entry> entries;
  for (const GridCase& grid : table1_cases())
    for (MaternModel model : models)
      for (double rho : rhos) entries.push_back({grid, model, rho, {}});
  parallel_for(entries.size(), options.workers, [&](std::size_t k) {
    EvalOptions inner = options;
    inner.workers = 1;
    entries[k].eff = grid_efficiencies(entries[k].model, entries[k].rho,
                                       entries[k].grid, inner);
  });
  return entries;
}

std::string format_table1(const std::vector<Table1Entry>& entries) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-6s %-16s %-14s", "n", "(b1,b2,m1,m2)", "model");
  os << line;
  // Columns follow the order in which rho values first appear.
  std::vector<double> rhos;
  for (const auto& e : entries)
    if (std::find(rhos.begin(), rhos.end(), e.rho) == rhos.end()) rhos.push_back(e.rho);
  for (double rho : rhos) {
    std::snprintf(line, sizeof line, " rho=%-12.1f", rho);
    os << line;
  }
  os << '\n';
  for (std::size_t k = 0; k < entries.size(); k += rhos.size()) {
    const auto& first = entries[k];
    char dims[64];
    std::snprintf(dims, sizeof dims, "(%zu,%zu,%zu,%zu)", first.grid.b1, first.grid.b2,
                  first.grid.m1, first.grid.m2);
    std::snprintf(line, sizeof line, "%-6zu %-16s %-14s", first.grid.n(), dims,
                  to_string(first.model));
    os << line;
    for (std::size_t r = 0; r < rhos.size() && k + r < entries.size(); ++r) {
      std::snprintf(line, sizeof line, " (%.3f, %.3f)", entries[k + r].eff.row,
                    entries[k + r].eff.col);
      os << line;
    }
    os << '\n';
  }
  return os.str();
}

GridCase table2_case(std::size_t scale) {
  if (scale < 1) throw InvalidArgument("table2: scale must be at least 1");
  const std::size_t m = std::max<std::size_t>(2, 104 / scale);
  return {54, 36, m, m};
}

std::vector<Table2Entry> table2(const EvalOptions& options, std::size_t scale,
                                const std::function<void(const Table2Entry&)>& progress) {
  const GridCase grid = table2_case(scale);
  const PointGeometry geom = PointGeometry::grid(grid.b1 * grid.m1, grid.b2 * grid.m2);
  std::vector<Table2Entry> entries;
  for (MaternModel model :
       {MaternModel::L1Half, MaternModel::L2Half, MaternModel::L2ThreeHalf}) {
    for (int k = 1; k <= 9; ++k) {
      const double rho = k / 10.0;
      const CorrelationModel correlation = make_matern(model, rho);
      const double row = evaluate_block(correlation, geom,
                                        BlockingSpec::rw2d(grid.m1, grid.m2),
                                        std::nullopt, options)
                             .value;
      const double col = evaluate_block(correlation, geom,
                                        BlockingSpec::cw2d(grid.m1, grid.m2),
                                        std::nullopt, options)
                             .value;
      entries.push_back({model, rho, row, col, percent_gain(col, row)});
      if (progress) progress(entries.back());
    }
  }
  return entries;
}

std::string format_table2(const std::vector<Table2Entry>& entries, const GridCase& grid) {
  std::ostringstream os;
  char line[128];
  std::snprintf(line, sizeof line, "n = %zu, (b1,b2,m1,m2) = (%zu,%zu,%zu,%zu)\n",
                grid.n(), grid.b1, grid.b2, grid.m1, grid.m2);
  os << line;
  std::snprintf(line, sizeof line, "%-14s", "model");
  os << line;
  for (int k = 1; k <= 9; ++k) {
    std::snprintf(line, sizeof line, " %7.1f", k / 10.0);
    os << line;
  }
  os << '\n';
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k % 9 == 0) {
      if (k > 0) os << '\n';
      std::snprintf(line, sizeof line, "%-14s", to_string(entries[k].model));
      os << line;
    }
    std::snprintf(line, sizeof line, " %7.2f", entries[k].gain);
    os << line;
  }
  if (!entries.empty()) os << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Oracle equivalence

namespace {

struct OracleCase {
  std::string description;
  std::vector<std::pair<std::string, double>> fast;  // path name, value
  double oracle = 0.0;
};

bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

template <class Rng>
std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

template <class Rng>
double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

template <class Rng>
CorrelationModel random_1d_model(Rng& rng, std::size_t n) {
  switch (pick(rng, 0, 2)) {
    case 0: return CorrelationModel::ar1(uniform(rng, 0.0, 0.95));
    case 1:
      return CorrelationModel::linear(uniform(rng, 0.05, 1.0) /
                                      static_cast<double>(std::max<std::size_t>(n - 1, 1)));
    default: return CorrelationModel::inverse_linear(uniform(rng, 0.05, 3.0));
  }
}

template <class Rng>
std::pair<std::size_t, std::size_t> random_factorization(Rng& rng, std::size_t n) {
  std::vector<std::size_t> divisors;
  for (std::size_t b = 1; b <= n; ++b)
    if (n % b == 0) divisors.push_back(b);
  const std::size_t b = divisors[pick(rng, 0, divisors.size() - 1)];
  return {n / b, b};
}

template <class Rng>
OracleCase stationary_1d_case(Rng& rng, const DenseLimits& limits) {
  const std::size_t n = pick(rng, 4, 60);
  const auto [m, b] = random_factorization(rng, n);
  const CorrelationModel model = random_1d_model(rng, n);
  const Scheme scheme = pick(rng, 0, 1) == 0 ? Scheme::Row : Scheme::Col;
  const PointGeometry geom = PointGeometry::equispaced(n);
  const Blocking blocking = scheme == Scheme::Row ? rw_1d(n, m, b) : cw_1d(n, m, b);

  OracleCase c;
  c.description = model.describe() + " n=" + std::to_string(n) + " m=" +
                  std::to_string(m) + " " + to_string(scheme);
  c.oracle = ess_block_dense(model, geom, blocking, std::nullopt, nullptr, limits).value;
  c.fast.push_back({"stationary-1d",
                    ess_block_stationary_1d(model, n, m, b, scheme, nullptr, limits).value});
  if (model.kind() == ModelKind::AR1) {
    const double closed = scheme == Scheme::Row
                              ? ess_row_ar1_closed(n, b, m, model.rho())
                              : ess_col_ar1_closed(n, b, m, model.rho());
    c.fast.push_back({"closed-ar1", closed});
  }
  if (b == 2) c.fast.push_back({"b2-stationary", ess_b2_stationary(model, n).value});
  return c;
}

template <class Rng>
OracleCase full_1d_case(Rng& rng, const DenseLimits& limits) {
  const std::size_t n = pick(rng, 1, 80);
  const double rho = uniform(rng, 0.0, 0.95);
  const CorrelationModel model = CorrelationModel::ar1(rho);
  OracleCase c;
  c.description = model.describe() + " n=" + std::to_string(n) + " full";
  c.oracle = ess_full(model, PointGeometry::equispaced(n), std::nullopt, limits).value;
  c.fast.push_back({"closed-ar1-full", ess_full_ar1_closed(n, rho)});
  return c;
}

template <class Rng>
OracleCase grid_case(Rng& rng, const EvalOptions& options) {
  const std::size_t m1 = pick(rng, 1, 4);
  const std::size_t b1 = pick(rng, 1, 12 / m1);
  const std::size_t m2 = pick(rng, 1, 4);
  const std::size_t b2 = pick(rng, 1, 12 / m2);
  const std::size_t n1 = std::max<std::size_t>(m1 * b1, 2);
  const std::size_t n2 = std::max<std::size_t>(m2 * b2, 2);
  // Re-derive block sizes in case a dimension was bumped up to 2.
  const std::size_t bb1 = n1 / m1;
  const std::size_t bb2 = n2 / m2;
  const std::size_t mm1 = n1 / bb1;
  const std::size_t mm2 = n2 / bb2;

  CorrelationModel model = CorrelationModel::matern_l1(0.5);
  const double rho = uniform(rng, 0.0, 0.95);
  switch (pick(rng, 0, 3)) {
    case 0: model = CorrelationModel::matern_l1(rho); break;
    case 1: model = CorrelationModel::matern_l2_half(rho); break;
    case 2: model = CorrelationModel::matern_l2_three_half(rho); break;
    default:
      model = CorrelationModel::kronecker(random_1d_model(rng, n1), random_1d_model(rng, n2));
      break;
  }
  const Scheme scheme = pick(rng, 0, 1) == 0 ? Scheme::Row : Scheme::Col;
  const PointGeometry geom = PointGeometry::grid(n1, n2);
  const Blocking blocking = scheme == Scheme::Row ? rw_2d(n1, n2, mm1, bb1, mm2, bb2)
                                                  : cw_2d(n1, n2, mm1, bb1, mm2, bb2);
  OracleCase c;
  c.description = model.describe() + " grid " + std::to_string(n1) + "x" +
                  std::to_string(n2) + " m=(" + std::to_string(mm1) + "," +
                  std::to_string(mm2) + ") " + to_string(scheme);
  c.oracle =
      ess_block_dense(model, geom, blocking, std::nullopt, nullptr, options.limits).value;
  c.fast.push_back({"stationary-2d",
                    ess_block_stationary_2d(model, n1, n2, mm1, bb1, mm2, bb2, scheme,
                                            options.workers, nullptr, options.limits)
                        .value});
  if (as_kronecker(model))
    c.fast.push_back(
        {"kronecker",
         ess_kronecker(model, scheme, mm1, bb1, mm2, bb2, options.limits).value});
  return c;
}

}  // namespace

OracleReport oracle_check(std::uint64_t seed, std::size_t cases,
                          const EvalOptions& options) {
  constexpr double kTolerance = 1e-9;
  std::mt19937_64 rng(seed);
  OracleReport report;
  report.total = cases;
  for (std::size_t k = 0; k < cases; ++k) {
    OracleCase c;
    try {
      switch (pick(rng, 0, 3)) {
        case 0:
        case 1: c = stationary_1d_case(rng, options.limits); break;
        case 2: c = full_1d_case(rng, options.limits); break;
        default: c = grid_case(rng, options); break;
      }
    } catch (const std::exception& error) {
      report.failures.push_back("case " + std::to_string(k + 1) + ": " + error.what());
      continue;
    }
    bool ok = true;
    for (const auto& [path, value] : c.fast) {
      if (!close_rel(value, c.oracle, kTolerance)) {
        std::ostringstream os;
        os.precision(17);
        os << "case " << k + 1 << " (" << c.description << "): " << path << " = "
           << value << ", dense = " << c.oracle;
        report.failures.push_back(os.str());
        ok = false;
      }
    }
    if (ok) ++report.passed;
  }
  return report;
}

}  // namespace blockess
