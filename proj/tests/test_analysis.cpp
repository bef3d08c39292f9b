#include <cmath>
#include <vector>

#include "blockess/analysis.hpp"
#include "blockess/errors.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace blockess;

namespace {

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

RhoGrid tenths() { return RhoGrid::range(0.1, 0.9, 0.1); }

}  // namespace

TEST_CASE("efficiency and percentage gain") {
  CHECK(efficiency(225.75, 225.75) == 1.0);
  CHECK(efficiency(1.0, 4.0) == 0.25);
  CHECK_THROWS_AS(efficiency(0.0, 4.0), InvalidArgument);
  CHECK_THROWS_AS(efficiency(1.0, -4.0), InvalidArgument);
  CHECK(percent_gain(3.0, 3.0) == 0.0);
  CHECK(percent_gain(1.2132 * 7.0, 7.0) == doctest::Approx(21.32).epsilon(1e-12));
  CHECK_THROWS_AS(percent_gain(1.0, 0.0), InvalidArgument);
}

TEST_CASE("rho grids") {
  const RhoGrid grid = RhoGrid::range(0.001, 0.999, 0.001);
  REQUIRE(grid.values.size() == 999);
  CHECK(grid.values[599] == 0.6);
  CHECK(grid.values.back() == 0.999);
  CHECK(tenths().values == std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
  CHECK(RhoGrid::range(0.5, 0.5, 0.1).values == std::vector<double>{0.5});
  CHECK_THROWS_AS(RhoGrid::range(0.5, 0.4, 0.1), InvalidArgument);
  CHECK_THROWS_AS(RhoGrid::range(0.1, 0.4, 0.0), InvalidArgument);
  CHECK_THROWS_AS(RhoGrid::of({0.2, 0.2}), InvalidArgument);
}

TEST_CASE("blocking specs resolve against the geometry") {
  const auto line = PointGeometry::equispaced(17);
  CHECK(build_blocking(BlockingSpec::rw(3), line).tag == BlockingTag::RW1DUnequal);
  CHECK(build_blocking(BlockingSpec::cw(3), line).tag == BlockingTag::CW1DUnequal);
  CHECK_THROWS_AS(build_blocking(BlockingSpec::mcw(3), line), InvalidArgument);
  CHECK_THROWS_AS(build_blocking(BlockingSpec::rw(18), line), InvalidArgument);
  CHECK_THROWS_AS(build_blocking(BlockingSpec::rw2d(2, 2), line), InvalidArgument);
  CHECK(build_blocking(BlockingSpec::rw(3), PointGeometry::equispaced(15)).tag == BlockingTag::RW1D);
  CHECK_THROWS_AS(build_blocking(BlockingSpec::cw2d(3, 2), PointGeometry::grid(8, 6)),
                  InvalidArgument);
  CHECK(BlockingSpec::cw(30).label() == "cw:m=30");
  CHECK(BlockingSpec::rw2d(3, 4).label() == "rw2d:m1=3,m2=4");
  CHECK(BlockingSpec::prw(2).label() == "prw:g=2");
}

TEST_CASE("path selection") {
  const auto line = PointGeometry::equispaced(900);
  CHECK(evaluate_full(CorrelationModel::ar1(0.6), line).method == EssMethod::ClosedAr1Full);
  CHECK(evaluate_block(CorrelationModel::ar1(0.6), line, BlockingSpec::cw(30)).method ==
        EssMethod::ClosedAr1Col);
  CHECK(evaluate_block(CorrelationModel::inverse_linear(0.6), line, BlockingSpec::cw(30)).method ==
        EssMethod::Stationary1D);
  CHECK(evaluate_block(CorrelationModel::ar1(0.6), line, BlockingSpec::mcw(30)).method ==
        EssMethod::DenseBlock);
  const auto grid = PointGeometry::grid(12, 12);
  CHECK(evaluate_full(CorrelationModel::matern_l1(0.6), grid).method == EssMethod::Kronecker);
  CHECK(evaluate_block(CorrelationModel::matern_l1(0.6), grid, BlockingSpec::rw2d(3, 4)).method ==
        EssMethod::Kronecker);
  CHECK(evaluate_block(CorrelationModel::matern_l2_half(0.6), grid, BlockingSpec::rw2d(3, 4))
            .method == EssMethod::Stationary2D);
  CHECK(evaluate_full(CorrelationModel::matern_l2_half(0.6), grid).method == EssMethod::DenseFull);
  // weights always take the dense route
  const std::vector<double> z(900, 2.0);
  CHECK(evaluate_block(CorrelationModel::ar1(0.6), line, BlockingSpec::cw(30), std::span(z)).method ==
        EssMethod::DenseBlock);
}

TEST_CASE("sweep over AR(1) reproduces the efficiency pairs") {
  const auto rows = sweep(ModelFamily::ar1(), RhoGrid::range(0.6, 0.9, 0.1),
                          PointGeometry::equispaced(900), {BlockingSpec::rw(30), BlockingSpec::cw(30)});
  REQUIRE(rows.size() == 8);
  const double expected[][2] = {{0.961, 0.999}, {0.941, 0.998}, {0.919, 0.996}, {0.913, 0.992}};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(rows[2 * k].blocking == "rw:m=30");
    CHECK(rows[2 * k + 1].blocking == "cw:m=30");
    CHECK(round3(rows[2 * k].eff) == expected[k][0]);
    CHECK(round3(rows[2 * k + 1].eff) == expected[k][1]);
    CHECK(rows[2 * k].b == 30u);
    CHECK(rows[2 * k].m == 30u);
    CHECK_FALSE(rows[2 * k].n1.has_value());
  }
  CHECK(sweep(ModelFamily::ar1(), RhoGrid{}, PointGeometry::equispaced(900), {BlockingSpec::rw(30)})
            .empty());
}

TEST_CASE("sweep over the linear model uses (n-1) rho as the grid value") {
  const auto rows = sweep(ModelFamily::linear_scaled(), RhoGrid::of({0.4, 0.6, 0.8, 1.0}),
                          PointGeometry::equispaced(900), {BlockingSpec::rw(30), BlockingSpec::cw(30)});
  const double expected[][2] = {{0.923, 0.995}, {0.875, 0.991}, {0.819, 0.986}, {0.751, 0.979}};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(round3(rows[2 * k].eff) == expected[k][0]);
    CHECK(round3(rows[2 * k + 1].eff) == expected[k][1]);
  }
}

TEST_CASE("sweep invariants") {
  const auto geom = PointGeometry::equispaced(120);
  const std::vector<BlockingSpec> specs{BlockingSpec::rw(8), BlockingSpec::cw(8),
                                        BlockingSpec::mcw(8), BlockingSpec::prw(3),
                                        BlockingSpec::rw(7)};
  EvalOptions one, four;
  one.workers = 1;
  four.workers = 4;
  for (const auto& family : {ModelFamily::ar1(), ModelFamily::inverse_linear()}) {
    const auto a = sweep(family, tenths(), geom, specs, std::nullopt, one);
    const auto b = sweep(family, tenths(), geom, specs, std::nullopt, four);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      REQUIRE(a[k].eff == b[k].eff);
      REQUIRE(a[k].blocking == b[k].blocking);
      REQUIRE(a[k].rho == b[k].rho);
      REQUIRE(a[k].eff > 0.0);
      REQUIRE(a[k].eff <= 1.0 + 1e-9);
      REQUIRE(a[k].eff == a[k].ess_block / a[k].ess_full);
    }
  }
}

TEST_CASE("AR(1) sweep rows: closed forms equal the stationary path") {
  const std::size_t n = 120;
  const auto geom = PointGeometry::equispaced(n);
  const auto grid = RhoGrid::range(0.01, 0.99, 0.01);
  const auto rows = sweep(ModelFamily::ar1(), grid, geom, {BlockingSpec::rw(12), BlockingSpec::cw(12)});
  for (const auto& row : rows) {
    const Scheme scheme = row.blocking[0] == 'r' ? Scheme::Row : Scheme::Col;
    const double stationary =
        ess_block_stationary_1d(CorrelationModel::ar1(row.rho), n, 12, 10, scheme).value;
    REQUIRE(oracle::close(row.ess_block, stationary, 1e-9));
  }
}

TEST_CASE("min_eff and max_diff") {
  const auto geom = PointGeometry::equispaced(200);
  const auto fine = RhoGrid::range(0.001, 0.999, 0.001);
  CHECK(round3(min_eff(ModelFamily::ar1(), geom, BlockingSpec::rw(10), fine).value) == 0.879);
  CHECK(round3(min_eff(ModelFamily::ar1(), geom, BlockingSpec::cw(10), fine).value) == 0.980);

  const auto n900 = PointGeometry::equispaced(900);
  CHECK(round3(max_diff(ModelFamily::ar1(), n900, BlockingSpec::rw(30), fine).value) == 9.366);
  CHECK(round3(max_diff(ModelFamily::ar1(), n900, BlockingSpec::cw(30), fine).value) == 0.415);

  const auto model_one = RhoGrid::range(0.1, 1.0, 0.1);
  CHECK(round3(min_eff(ModelFamily::linear_scaled(), n900, BlockingSpec::rw(30), model_one).value) ==
        0.751);
  CHECK(round3(min_eff(ModelFamily::linear_scaled(), n900, BlockingSpec::cw(30), model_one).value) ==
        0.979);

  // one-point grids
  const auto single = RhoGrid::of({0.6});
  const auto point = min_eff(ModelFamily::ar1(), n900, BlockingSpec::rw(30), single);
  CHECK(point.rho == 0.6);
  CHECK(point.value == ess_row_ar1_closed(900, 30, 30, 0.6) / ess_full_ar1_closed(900, 0.6));
  CHECK(max_diff(ModelFamily::ar1(), n900, BlockingSpec::rw(30), RhoGrid::of({0.0})).value == 0.0);

  // ties go to the smaller grid value
  const ModelFamily flat{"flat", [](double, const PointGeometry&) { return CorrelationModel::ar1(0.5); }};
  CHECK(min_eff(flat, geom, BlockingSpec::rw(10), tenths()).rho == 0.1);
  CHECK(max_diff(flat, geom, BlockingSpec::rw(10), tenths()).rho == 0.1);
  CHECK_THROWS_AS(min_eff(ModelFamily::ar1(), geom, BlockingSpec::rw(10), RhoGrid{}), InvalidArgument);
}

TEST_CASE("extrema over a sub-grid are bounded by the full grid") {
  const auto geom = PointGeometry::equispaced(120);
  const auto full = RhoGrid::range(0.01, 0.99, 0.01);
  const auto sub = RhoGrid::range(0.05, 0.95, 0.05);
  for (const auto& spec : {BlockingSpec::rw(12), BlockingSpec::cw(12), BlockingSpec::mcw(12)}) {
    CHECK(min_eff(ModelFamily::ar1(), geom, spec, full).value <=
          min_eff(ModelFamily::ar1(), geom, spec, sub).value);
    CHECK(max_diff(ModelFamily::ar1(), geom, spec, full).value >=
          max_diff(ModelFamily::ar1(), geom, spec, sub).value);
  }
}

TEST_CASE("monotonicity in the block size") {
  const auto rw = monotonicity_report(ModelFamily::ar1(), 100, RhoGrid::of({0.6}), Scheme::Row);
  REQUIRE(rw.size() == 1);
  CHECK(rw[0].block_sizes == std::vector<std::size_t>{1, 2, 4, 5, 10, 20, 25, 50, 100});
  CHECK_FALSE(rw[0].monotone());
  bool saw_4_5 = false, saw_5_10 = false;
  for (const auto& v : rw[0].violations) {
    if (v.b_from == 4 && v.b_to == 5) {
      saw_4_5 = true;
      CHECK(round3(v.ess_from) == 24.977);
      CHECK(round3(v.ess_to) == 24.763);
    }
    if (v.b_from == 5 && v.b_to == 10) {
      saw_5_10 = true;
      CHECK(round3(v.ess_to) == 24.361);
    }
  }
  CHECK(saw_4_5);
  CHECK(saw_5_10);

  for (const auto& row : monotonicity_report(ModelFamily::ar1(), 100, tenths(), Scheme::Col))
    CHECK(row.monotone());

  // prime n: only b = 1 and b = n
  const auto prime = monotonicity_report(ModelFamily::ar1(), 97, tenths(), Scheme::Row);
  for (const auto& row : prime) {
    CHECK(row.block_sizes == std::vector<std::size_t>{1, 97});
    CHECK(row.monotone());
    CHECK(row.ess[1] == doctest::Approx(ess_full_ar1_closed(97, row.rho)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(monotonicity_report(ModelFamily::ar1(), 100001, tenths(), Scheme::Row), Unsupported);
  CHECK_THROWS_AS(monotonicity_report(ModelFamily::ar1(), 10, tenths(), Scheme::Full), InvalidArgument);
}

TEST_CASE("grid efficiencies") {
  const EffPair pair = grid_efficiencies(MaternModel::L1Half, 0.6, {6, 4, 3, 3});
  CHECK(round3(pair.row) == 0.888);
  CHECK(round3(pair.col) == 0.943);
  CHECK(table1_cases().size() == 3);
  CHECK(table1_cases()[2].n() == 2400);
}

TEST_CASE("scaled large-grid table") {
  CHECK(table2_case(1).n() == 21026304);
  CHECK(table2_case(8).m1 == 13);
  CHECK(table2_case(1000).m1 == 2);
  CHECK_THROWS_AS(table2_case(0), InvalidArgument);

  std::size_t calls = 0;
  const auto entries = table2({}, 52, [&](const Table2Entry&) { ++calls; });
  REQUIRE(entries.size() == 27);
  CHECK(calls == 27);
  for (const auto& e : entries) {
    CHECK(e.gain == doctest::Approx(percent_gain(e.ess_col, e.ess_row)));
    CHECK(e.ess_row > 0.0);
  }
  const std::string text = format_table2(entries, table2_case(52));
  CHECK(text.find("matern-l2-1.5") != std::string::npos);
}

TEST_CASE("oracle check is reproducible and passes") {
  const auto a = oracle_check(7, 60);
  const auto b = oracle_check(7, 60);
  CHECK(a.total == 60);
  CHECK(a.passed == 60);
  CHECK(a.failures.empty());
  CHECK(a.passed == b.passed);
}
