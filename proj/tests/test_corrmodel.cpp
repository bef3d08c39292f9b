#include <cmath>
#include <random>
#include <vector>

#include "blockess/corrmodel.hpp"
#include "blockess/errors.hpp"
#include "doctest.h"

using namespace blockess;

namespace {

std::vector<CorrelationModel> one_d_models(std::size_t n) {
  return {CorrelationModel::ar1(0.0),          CorrelationModel::ar1(0.5),
          CorrelationModel::ar1(0.95),         CorrelationModel::linear(1.0 / double(n - 1)),
          CorrelationModel::linear(0.3 / double(n - 1)),
          CorrelationModel::inverse_linear(0.2), CorrelationModel::inverse_linear(2.0)};
}

std::vector<CorrelationModel> two_d_models() {
  return {CorrelationModel::matern_l1(0.6), CorrelationModel::matern_l2_half(0.6),
          CorrelationModel::matern_l2_three_half(0.3),
          CorrelationModel::kronecker(CorrelationModel::ar1(0.4),
                                      CorrelationModel::inverse_linear(0.7))};
}

}  // namespace

TEST_CASE("entry values") {
  const auto line = PointGeometry::equispaced(10);
  CHECK(entry(CorrelationModel::ar1(0.5), line, 3, 5) == doctest::Approx(0.25).epsilon(1e-15));

  // r_1n = 0 at the largest admissible rho of the linear model
  const auto linear = CorrelationModel::linear(1.0 / 9.0);
  CHECK(std::fabs(entry(linear, line, 0, 9)) < 1e-15);
  CHECK(entry(linear, line, 0, 3) == doctest::Approx(1.0 - 3.0 / 9.0));

  CHECK(entry(CorrelationModel::inverse_linear(0.5), line, 2, 6) == doctest::Approx(1.0 / 3.0));

  const auto grid = PointGeometry::grid(4, 5);
  CHECK(entry(CorrelationModel::matern_l2_three_half(0.5), grid, 7, 7) == 1.0);
  // (1,1) and (2,3) in 1-based coordinates: d1 = 3
  CHECK(entry(CorrelationModel::matern_l1(0.6), grid, grid.linear(0, 0), grid.linear(1, 2)) ==
        doctest::Approx(0.216).epsilon(1e-14));
  const double d2 = std::sqrt(5.0);
  CHECK(entry(CorrelationModel::matern_l2_half(0.6), grid, grid.linear(0, 0), grid.linear(1, 2)) ==
        doctest::Approx(std::pow(0.6, d2)).epsilon(1e-14));
  CHECK(entry(CorrelationModel::matern_l2_three_half(0.6), grid, grid.linear(0, 0),
              grid.linear(1, 2)) ==
        doctest::Approx((1.0 - d2 * std::log(0.6)) * std::pow(0.6, d2)).epsilon(1e-14));

  const auto pos = PointGeometry::positions({0.0, 0.5, 2.0});
  CHECK(entry(CorrelationModel::ar1_positions(0.4, {0.0, 0.5, 2.0}), pos, 0, 2) ==
        doctest::Approx(std::pow(0.4, 2.0)));
}

TEST_CASE("rho = 0 gives the identity, with 0^0 = 1") {
  const auto line = PointGeometry::equispaced(6);
  const auto ar1 = CorrelationModel::ar1(0.0);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) CHECK(entry(ar1, line, i, j) == (i == j ? 1.0 : 0.0));
  CHECK(rho_power(0.0, 0.0) == 1.0);
  CHECK(rho_power(0.0, 2.0) == 0.0);
}

TEST_CASE("symmetry and unit diagonal, exhaustive on small sizes") {
  for (std::size_t n : {2u, 7u, 50u}) {
    const auto line = PointGeometry::equispaced(n);
    for (const auto& model : one_d_models(n)) {
      model.validate(line);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(entry(model, line, i, i) == 1.0);
        for (std::size_t j = 0; j < i; ++j)
          REQUIRE(entry(model, line, i, j) == entry(model, line, j, i));
      }
    }
  }
  const auto grid = PointGeometry::grid(7, 7);
  for (const auto& model : two_d_models()) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(entry(model, grid, i, i) == 1.0);
      for (std::size_t j = 0; j < i; ++j)
        REQUIRE(entry(model, grid, i, j) == entry(model, grid, j, i));
    }
  }
}

TEST_CASE("symmetry on randomized large index pairs") {
  std::mt19937_64 rng(11);
  const auto line = PointGeometry::equispaced(5000);
  const auto grid = PointGeometry::grid(300, 200);
  std::uniform_int_distribution<std::size_t> pick1(0, 4999), pick2(0, grid.size() - 1);
  for (int k = 0; k < 2000; ++k) {
    const std::size_t i = pick1(rng), j = pick1(rng);
    for (const auto& model : one_d_models(5000))
      REQUIRE(entry(model, line, i, j) == entry(model, line, j, i));
    const std::size_t p = pick2(rng), q = pick2(rng);
    for (const auto& model : two_d_models())
      REQUIRE(entry(model, grid, p, q) == entry(model, grid, q, p));
  }
}

TEST_CASE("entries decay with lag for the 1D stationary models") {
  const std::size_t n = 50;
  const auto line = PointGeometry::equispaced(n);
  for (const auto& model : one_d_models(n))
    for (std::size_t d = 1; d < n; ++d)
      REQUIRE(entry(model, line, 0, d) <= entry(model, line, 0, d - 1));
}

TEST_CASE("Kronecker factors reproduce the 2D entries") {
  std::mt19937_64 rng(3);
  const auto grid = PointGeometry::grid(9, 13);
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  for (const auto& model :
       {CorrelationModel::matern_l1(0.7),
        CorrelationModel::kronecker(CorrelationModel::linear(0.1),
                                    CorrelationModel::inverse_linear(0.5))}) {
    const auto factors = as_kronecker(model);
    REQUIRE(factors.has_value());
    const auto g1 = PointGeometry::equispaced(9), g2 = PointGeometry::equispaced(13);
    for (int k = 0; k < 500; ++k) {
      const std::size_t p = pick(rng), q = pick(rng);
      const auto a = grid.coords(p), b = grid.coords(q);
      const double product =
          entry(factors->first, g1, a.i1, b.i1) * entry(factors->second, g2, a.i2, b.i2);
      REQUIRE(std::fabs(entry(model, grid, p, q) - product) <= 1e-14);
    }
  }
}

TEST_CASE("structural traits") {
  CHECK(is_stationary_1d(CorrelationModel::ar1(0.3)));
  CHECK(is_stationary_1d(CorrelationModel::linear(0.01)));
  CHECK(is_stationary_1d(CorrelationModel::inverse_linear(0.3)));
  CHECK_FALSE(is_stationary_1d(CorrelationModel::ar1_positions(0.3, {0.0, 0.8, 1.8, 3.0})));
  // unit gaps are index-stationary; equal gaps of another size are not
  CHECK(is_stationary_1d(CorrelationModel::ar1_positions(0.3, {2.0, 3.0, 4.0, 5.0})));
  CHECK_FALSE(is_stationary_1d(CorrelationModel::ar1_positions(0.3, {0.0, 2.0, 4.0})));
  CHECK_FALSE(is_stationary_1d(CorrelationModel::matern_l1(0.3)));

  CHECK(is_stationary_2d(CorrelationModel::matern_l1(0.3)));
  CHECK(is_stationary_2d(CorrelationModel::matern_l2_half(0.3)));
  CHECK(is_stationary_2d(CorrelationModel::matern_l2_three_half(0.3)));
  CHECK(is_stationary_2d(
      CorrelationModel::kronecker(CorrelationModel::ar1(0.3), CorrelationModel::ar1(0.5))));
  CHECK_FALSE(is_stationary_2d(CorrelationModel::ar1(0.3)));

  const auto l1 = as_kronecker(CorrelationModel::matern_l1(0.7));
  REQUIRE(l1);
  CHECK(l1->first.kind() == ModelKind::AR1);
  CHECK(l1->first.rho() == 0.7);
  CHECK(l1->second.kind() == ModelKind::AR1);
  CHECK(l1->second.rho() == 0.7);
  CHECK_FALSE(as_kronecker(CorrelationModel::matern_l2_half(0.7)));
  CHECK_FALSE(as_kronecker(CorrelationModel::matern_l2_three_half(0.7)));
  const auto mixed = as_kronecker(CorrelationModel::kronecker(
      CorrelationModel::linear(0.1), CorrelationModel::inverse_linear(0.4)));
  REQUIRE(mixed);
  CHECK(mixed->first.kind() == ModelKind::Linear);
  CHECK(mixed->second.kind() == ModelKind::InverseLinear);
}

TEST_CASE("positions with unit gaps match AR(1) exactly") {
  std::vector<double> s;
  for (int i = 0; i < 30; ++i) s.push_back(3.0 + i);
  const auto pos = PointGeometry::positions(s);
  const auto line = PointGeometry::equispaced(30);
  for (double rho : {0.0, 0.2, 0.6, 0.9}) {
    const auto a = CorrelationModel::ar1_positions(rho, s);
    const auto b = CorrelationModel::ar1(rho);
    for (std::size_t i = 0; i < 30; ++i)
      for (std::size_t j = 0; j < 30; ++j) REQUIRE(entry(a, pos, i, j) == entry(b, line, i, j));
  }
}

TEST_CASE("parameter and index validation") {
  CHECK_THROWS_AS(CorrelationModel::ar1(1.0), InvalidArgument);
  CHECK_THROWS_AS(CorrelationModel::ar1(1.5), InvalidArgument);
  CHECK_THROWS_AS(CorrelationModel::ar1(-0.1), InvalidArgument);
  CHECK_THROWS_AS(CorrelationModel::linear(0.0), InvalidArgument);
  CHECK_THROWS_AS(CorrelationModel::inverse_linear(0.0), InvalidArgument);
  CHECK_THROWS_AS(CorrelationModel::matern_l2_half(1.0), InvalidArgument);
  CHECK_THROWS_AS(CorrelationModel::ar1(std::nan("")), InvalidArgument);
  CHECK_THROWS_AS(PointGeometry::positions({0.0, 1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(PointGeometry::grid(1, 5), InvalidArgument);
  CHECK_THROWS_AS(PointGeometry::equispaced(0), InvalidArgument);

  // linear: rho <= 1/(n-1)
  CHECK_NOTHROW(CorrelationModel::linear(1.0 / 9.0).validate(PointGeometry::equispaced(10)));
  CHECK_THROWS_AS(CorrelationModel::linear(0.2).validate(PointGeometry::equispaced(10)),
                  InvalidArgument);
  // dimension mismatch
  CHECK_THROWS_AS(CorrelationModel::ar1(0.2).validate(PointGeometry::grid(3, 3)),
                  InvalidArgument);
  CHECK_THROWS_AS(CorrelationModel::matern_l1(0.2).validate(PointGeometry::equispaced(9)),
                  InvalidArgument);
  CHECK_THROWS_AS(CorrelationModel::ar1_positions(0.2, {0.0, 1.0, 2.5})
                      .validate(PointGeometry::equispaced(4)),
                  InvalidArgument);
  CHECK_THROWS_AS(entry(CorrelationModel::ar1(0.2), PointGeometry::equispaced(4), 0, 4),
                  InvalidArgument);
}

TEST_CASE("Matérn range parameter") {
  const auto model = CorrelationModel::matern_l2_half(std::exp(-1.0 / 2.5));
  CHECK(model.phi() == doctest::Approx(2.5).epsilon(1e-14));
  CHECK_THROWS_AS(CorrelationModel::matern_l2_half(0.0).phi(), InvalidArgument);
}
