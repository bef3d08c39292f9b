// blockess: effective sample sizes under full and block likelihoods.
//
// Exit status: 0 ok, 1 usage error, 2 non-positive-definite matrix or failed
// oracle check, 3 dense-size cap exceeded.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blockess/analysis.hpp"
#include "blockess/errors.hpp"
#include "blockess/specs.hpp"

using namespace blockess;

namespace {

// Shortest text that parses back to the same double; for grid values.
std::string shortest(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

struct Options {
  std::string model;
  std::vector<std::string> blockings;
  std::optional<std::size_t> n, n1, n2;
  std::string weights_file;
  std::string rho_grid;
  std::optional<int> round;
  unsigned workers = 0;
  std::size_t scale = 1;
  bool csv = false;
  std::uint64_t seed = 1;
  std::size_t cases = 100;
};

// Geometry from --n / --n1,--n2, or from a positions list when the model has one.
PointGeometry resolve_geometry(const Options& o, const std::optional<std::vector<double>>& positions) {
  if (positions) {
    if (o.n1 || o.n2) throw InvalidArgument("a positions model is 1D; drop --n1/--n2");
    if (o.n && *o.n != positions->size())
      throw InvalidArgument("--n " + std::to_string(*o.n) + " does not match the " +
                            std::to_string(positions->size()) + " positions");
    return PointGeometry::positions(*positions);
  }
  if (o.n1 || o.n2) {
    if (!o.n1 || !o.n2) throw InvalidArgument("--n1 and --n2 go together");
    if (o.n && *o.n != *o.n1 * *o.n2)
      throw InvalidArgument("--n must equal n1 * n2");
    return PointGeometry::grid(*o.n1, *o.n2);
  }
  if (o.n) return PointGeometry::equispaced(*o.n);
  throw InvalidArgument("give --n for 1D or --n1/--n2 for a grid");
}

std::optional<std::vector<double>> read_weights(const Options& o) {
  if (o.weights_file.empty()) return std::nullopt;
  return read_values_file(o.weights_file);
}

std::optional<std::span<const double>> as_span(const std::optional<std::vector<double>>& w) {
  if (!w) return std::nullopt;
  return std::span<const double>(*w);
}

std::vector<BlockingSpec> parse_blockings(const Options& o) {
  if (o.blockings.empty()) throw InvalidArgument("at least one --blocking is required");
  std::vector<BlockingSpec> specs;
  for (const auto& text : o.blockings) specs.push_back(parse_blocking(text));
  return specs;
}

EvalOptions eval_options(const Options& o) {
  EvalOptions options;
  options.workers = o.workers;
  return options;
}

void require(bool present, const char* flag) {
  if (!present) throw InvalidArgument(std::string(flag) + " is required");
}

// A fixed model seen as a one-point family, so fixed-rho runs can share the
// sweep CSV writer.
ModelFamily constant_family(const std::string& name, const CorrelationModel& model) {
  return {name, [model](double, const PointGeometry&) { return model; }};
}

struct FixedRun {
  CorrelationModel model;
  PointGeometry geom;
  std::optional<std::vector<double>> weights;
};

FixedRun fixed_run(const Options& o) {
  require(!o.model.empty(), "--model");
  CorrelationModel model = parse_model(o.model);
  std::optional<std::vector<double>> positions;
  if (model.kind() == ModelKind::AR1Positions) positions = model.positions();
  PointGeometry geom = resolve_geometry(o, positions);
  model.validate(geom);
  return {std::move(model), std::move(geom), read_weights(o)};
}

int run_ess(const Options& o) {
  const FixedRun r = fixed_run(o);
  const double value = evaluate_full(r.model, r.geom, as_span(r.weights), eval_options(o)).value;
  std::cout << format_number(value, o.round) << '\n';
  return 0;
}

int run_block(const Options& o, bool as_efficiency) {
  const FixedRun r = fixed_run(o);
  const auto specs = parse_blockings(o);
  if (o.csv) {
    const auto rows = sweep(constant_family(o.model, r.model), RhoGrid::of({r.model.rho()}),
                            r.geom, specs, as_span(r.weights), eval_options(o));
    write_sweep_csv(std::cout, rows, o.round);
    return 0;
  }
  const EvalOptions options = eval_options(o);
  std::optional<double> full;
  if (as_efficiency) full = evaluate_full(r.model, r.geom, as_span(r.weights), options).value;
  std::string line;
  for (const auto& spec : specs) {
    const double block = evaluate_block(r.model, r.geom, spec, as_span(r.weights), options).value;
    const double shown = full ? efficiency(block, *full) : block;
    if (as_efficiency) {
      line += (line.empty() ? "" : "\t") + spec.label() + '\t' + format_number(shown, o.round);
    } else {
      std::cout << spec.label() << '\t' << format_number(shown, o.round) << '\n';
    }
  }
  if (as_efficiency) std::cout << line << '\n';
  return 0;
}

struct FamilyRun {
  ModelFamily family;
  PointGeometry geom;
  RhoGrid grid;
};

FamilyRun family_run(const Options& o) {
  require(!o.model.empty(), "--model");
  require(!o.rho_grid.empty(), "--rho-grid");
  ModelFamily family = parse_family(o.model);
  PointGeometry geom = resolve_geometry(o, spec_positions(o.model));
  return {std::move(family), std::move(geom), parse_rho_grid(o.rho_grid)};
}

int run_sweep(const Options& o) {
  const FamilyRun r = family_run(o);
  const auto weights = read_weights(o);
  const auto rows = sweep(r.family, r.grid, r.geom, parse_blockings(o), as_span(weights),
                          eval_options(o));
  write_sweep_csv(std::cout, rows, o.round);
  return 0;
}

int run_extremum(const Options& o, bool minimum) {
  if (!o.weights_file.empty()) throw InvalidArgument("--weights is not supported here");
  const FamilyRun r = family_run(o);
  const auto specs = parse_blockings(o);
  if (o.csv) std::cout << "blocking,rho," << (minimum ? "min_eff" : "max_diff") << '\n';
  for (const auto& spec : specs) {
    const GridExtremum e = minimum ? min_eff(r.family, r.geom, spec, r.grid, eval_options(o))
                                   : max_diff(r.family, r.geom, spec, r.grid, eval_options(o));
    const char sep = o.csv ? ',' : '\t';
    std::cout << spec.label() << sep << (o.csv ? format_number(e.rho) : shortest(e.rho)) << sep
              << format_number(e.value, o.round) << '\n';
  }
  return 0;
}

int run_mono(const Options& o) {
  require(!o.model.empty(), "--model");
  require(!o.rho_grid.empty(), "--rho-grid");
  require(o.n.has_value(), "--n");
  if (o.blockings.size() != 1 || (o.blockings[0] != "rw" && o.blockings[0] != "cw"))
    throw InvalidArgument("mono takes exactly one --blocking, either rw or cw");
  const Scheme scheme = o.blockings[0] == "rw" ? Scheme::Row : Scheme::Col;
  const auto rows = monotonicity_report(parse_family(o.model), *o.n,
                                        parse_rho_grid(o.rho_grid), scheme);
  for (const auto& row : rows) {
    std::cout << "rho=" << shortest(row.rho);
    if (row.monotone()) {
      std::cout << " monotone\n";
      continue;
    }
    std::cout << " violations:";
    for (const auto& v : row.violations)
      std::cout << " b=" << v.b_from << "->" << v.b_to << " (" << format_number(v.ess_from, o.round)
                << " -> " << format_number(v.ess_to, o.round) << ")";
    std::cout << '\n';
  }
  return 0;
}

int run_table1(const Options& o) {
  std::cout << format_table1(table1(eval_options(o)));
  return 0;
}

int run_table2(const Options& o) {
  if (o.scale < 1) throw InvalidArgument("--scale must be at least 1");
  const GridCase grid = table2_case(o.scale);
  std::cerr << "table2: n = " << grid.n() << '\n';
  const auto entries = table2(eval_options(o), o.scale, [](const Table2Entry& e) {
    std::cerr << "  " << to_string(e.model) << " rho=" << format_number(e.rho, 1)
              << " gain=" << format_number(e.gain, 4) << std::endl;
  });
  std::cout << format_table2(entries, grid);
  return 0;
}

int run_oracle(const Options& o) {
  const OracleReport report = oracle_check(o.seed, o.cases, eval_options(o));
  for (const auto& failure : report.failures) std::cerr << failure << '\n';
  std::cout << report.passed << '/' << report.total << " passed\n";
  return report.passed == report.total ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective sample size under full and block likelihoods"};
  app.require_subcommand(1);
  Options o;

  auto geometry = [&](CLI::App* sub) {
    sub->add_option("--n", o.n, "Number of 1D points");
    sub->add_option("--n1", o.n1, "Grid rows");
    sub->add_option("--n2", o.n2, "Grid columns");
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--round", o.round, "Show D decimals")->check(CLI::NonNegativeNumber);
    sub->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
  };
  auto model = [&](CLI::App* sub, bool family) {
    sub->add_option("--model", o.model,
                    family ? "Model spec without rho, e.g. ar1" : "Model spec, e.g. ar1:rho=0.6")
        ->required();
  };
  auto blocking = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--blocking", o.blockings, "Blocking spec (repeatable)");
    if (required) opt->required();
  };
  auto weights = [&](CLI::App* sub) {
    sub->add_option("--weights", o.weights_file, "Predictor values, one per line")
        ->check(CLI::ExistingFile);
  };
  auto csv = [&](CLI::App* sub) { sub->add_flag("--csv", o.csv, "CSV output"); };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--rho-grid", o.rho_grid, "Grid a:b:step")->required();
  };

  auto* ess = app.add_subcommand("ess", "Full-likelihood ESS");
  model(ess, false), geometry(ess), weights(ess), common(ess);
  auto* essb = app.add_subcommand("essb", "Block-likelihood ESS per blocking");
  model(essb, false), geometry(essb), blocking(essb, true), weights(essb), csv(essb), common(essb);
  auto* eff = app.add_subcommand("eff", "Efficiency ESS_B / ESS per blocking, on one line");
  model(eff, false), geometry(eff), blocking(eff, true), weights(eff), csv(eff), common(eff);
  auto* sw = app.add_subcommand("sweep", "CSV rows over a rho grid");
  model(sw, true), geometry(sw), blocking(sw, true), weights(sw), grid(sw), common(sw);
  auto* mineff = app.add_subcommand("mineff", "Smallest efficiency over a rho grid");
  model(mineff, true), geometry(mineff), blocking(mineff, true), grid(mineff), csv(mineff),
      common(mineff);
  auto* maxdiff = app.add_subcommand("maxdiff", "Largest ESS - ESS_B over a rho grid");
  model(maxdiff, true), geometry(maxdiff), blocking(maxdiff, true), grid(maxdiff),
      csv(maxdiff), common(maxdiff);
  auto* mono = app.add_subcommand("mono", "ESS_B over all divisor block sizes of n");
  model(mono, true), blocking(mono, true), grid(mono), common(mono);
  mono->add_option("--n", o.n, "Number of points")->required();
  auto* t1 = app.add_subcommand("table1", "Row/column efficiencies on the three small grids");
  common(t1);
  auto* t2 = app.add_subcommand("table2", "Percentage gains of CW over RW on the large grid");
  common(t2);
  t2->add_option("--scale", o.scale, "Divide m1, m2 by S (never below 2)");
  auto* oracle = app.add_subcommand("oracle-check", "Compare fast paths with the dense oracle");
  common(oracle);
  oracle->add_option("--seed", o.seed, "Random seed");
  oracle->add_option("--cases", o.cases, "Number of random cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : 1;
  }

  try {
    if (*ess) return run_ess(o);
    if (*essb) return run_block(o, false);
    if (*eff) return run_block(o, true);
    if (*sw) return run_sweep(o);
    if (*mineff) return run_extremum(o, true);
    if (*maxdiff) return run_extremum(o, false);
    if (*mono) return run_mono(o);
    if (*t1) return run_table1(o);
    if (*t2) return run_table2(o);
    if (*oracle) return run_oracle(o);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NotPositiveDefinite& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Unsupported& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
