#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "blockess/blocking.hpp"
#include "blockess/errors.hpp"
#include "doctest.h"

using namespace blockess;

namespace {

using Blocks = std::vector<std::vector<std::size_t>>;

// Blocks written 1-based, as in the worked examples.
Blocks one_based(const Blocking& blocking) {
  Blocks out = blocking.blocks;
  for (auto& block : out)
    for (auto& i : block) ++i;
  return out;
}

bool is_partition(const Blocking& blocking, std::size_t n) {
  std::vector<std::size_t> all;
  for (const auto& block : blocking.blocks) {
    if (block.empty() || !std::is_sorted(block.begin(), block.end())) return false;
    all.insert(all.end(), block.begin(), block.end());
  }
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expected(n);
  std::iota(expected.begin(), expected.end(), 0);
  return all == expected;
}

std::vector<std::size_t> sizes(const Blocking& blocking) {
  std::vector<std::size_t> out;
  for (const auto& block : blocking.blocks) out.push_back(block.size());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("row-wise") {
  CHECK(one_based(rw_1d(15, 3, 5)) ==
        Blocks{{1, 2, 3, 4, 5}, {6, 7, 8, 9, 10}, {11, 12, 13, 14, 15}});
  CHECK(one_based(rw_1d(6, 3, 2)) == Blocks{{1, 2}, {3, 4}, {5, 6}});
  CHECK(one_based(rw_1d(4, 1, 4)) == Blocks{{1, 2, 3, 4}});
  CHECK(rw_1d(6, 3, 2).tag == BlockingTag::RW1D);
  CHECK_THROWS_AS(rw_1d(7, 3, 2), InvalidArgument);
}

TEST_CASE("column-wise") {
  CHECK(one_based(cw_1d(15, 3, 5)) ==
        Blocks{{1, 4, 7, 10, 13}, {2, 5, 8, 11, 14}, {3, 6, 9, 12, 15}});
  CHECK(one_based(cw_1d(6, 3, 2)) == Blocks{{1, 4}, {2, 5}, {3, 6}});
  CHECK(one_based(cw_1d(4, 4, 1)) == Blocks{{1}, {2}, {3}, {4}});
  CHECK_THROWS_AS(cw_1d(6, 4, 2), InvalidArgument);
}

TEST_CASE("modified column-wise") {
  CHECK(one_based(mcw_1d(15, 3, 5)) ==
        Blocks{{1, 6, 7, 12, 13}, {2, 5, 8, 11, 14}, {3, 4, 9, 10, 15}});
  CHECK(mcw_1d(7, 7, 1).blocks == cw_1d(7, 7, 1).blocks);
  CHECK(one_based(mcw_1d(5, 1, 5)) == Blocks{{1, 2, 3, 4, 5}});
  CHECK(mcw_1d(7, 7, 1).tag == BlockingTag::MCW1D);
}

TEST_CASE("pairs with wrapped ends") {
  CHECK(one_based(prw(12, 2)) == Blocks{{1, 12}, {2, 11}, {3, 4}, {5, 6}, {7, 8}, {9, 10}});
  CHECK(one_based(prw(12, 1)) == Blocks{{1, 12}, {2, 3}, {4, 5}, {6, 7}, {8, 9}, {10, 11}});
  CHECK(one_based(prw(8, 3)) == Blocks{{1, 8}, {2, 7}, {3, 6}, {4, 5}});
  CHECK_THROWS_AS(prw(11, 2), InvalidArgument);
  CHECK_THROWS_AS(prw(12, 0), InvalidArgument);
  CHECK_THROWS_AS(prw(12, 6), InvalidArgument);
}

TEST_CASE("near-equal blocks") {
  CHECK(one_based(rw_1d_unequal(17, 3)) ==
        Blocks{{1, 2, 3, 4, 5, 6}, {7, 8, 9, 10, 11, 12}, {13, 14, 15, 16, 17}});
  CHECK(one_based(cw_1d_unequal(17, 3)) ==
        Blocks{{1, 4, 7, 10, 13, 16}, {2, 5, 8, 11, 14, 17}, {3, 6, 9, 12, 15}});
  CHECK(cw_1d_unequal(15, 3).blocks == cw_1d(15, 3, 5).blocks);
  CHECK(rw_1d_unequal(15, 3).blocks == rw_1d(15, 3, 5).blocks);
  CHECK_THROWS_AS(rw_1d_unequal(5, 6), InvalidArgument);
  CHECK_THROWS_AS(cw_1d_unequal(5, 0), InvalidArgument);
}

TEST_CASE("2D blockings on an 8 x 6 grid") {
  // point (i1, i2), 1-based, has linear index (i1 - 1) * 6 + (i2 - 1)
  auto pair_code = [](std::size_t index) { return (index / 6 + 1) * 10 + index % 6 + 1; };
  auto first_block_codes = [&](const Blocking& blocking) {
    std::vector<std::size_t> codes;
    for (auto i : blocking.blocks.front()) codes.push_back(pair_code(i));
    return codes;
  };
  const Blocking cw = cw_2d(8, 6, 2, 4, 2, 3);
  CHECK(first_block_codes(cw) ==
        std::vector<std::size_t>{11, 13, 15, 31, 33, 35, 51, 53, 55, 71, 73, 75});
  const Blocking rw = rw_2d(8, 6, 2, 4, 2, 3);
  CHECK(first_block_codes(rw) ==
        std::vector<std::size_t>{11, 12, 13, 21, 22, 23, 31, 32, 33, 41, 42, 43});
  CHECK(rw.block_count() == 4);
  CHECK(cw.block_count() == 4);
  CHECK(rw_2d(8, 6, 1, 8, 1, 6).block_count() == 1);
  CHECK_THROWS_AS(rw_2d(8, 6, 3, 3, 2, 3), InvalidArgument);
}

TEST_CASE("every constructor yields a partition") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> small(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = small(rng), b = small(rng), n = m * b;
    for (const auto& blocking : {rw_1d(n, m, b), cw_1d(n, m, b), mcw_1d(n, m, b),
                                 rw_1d_unequal(n + b / 2, m), cw_1d_unequal(n + b / 2, m)}) {
      const std::size_t total = blocking.point_count();
      REQUIRE(is_partition(blocking, total));
    }
    REQUIRE(rw_1d(n, m, b).point_count() == n);
    REQUIRE(sizes(mcw_1d(n, m, b)) == sizes(cw_1d(n, m, b)));
    if (m >= 2) {
      const std::size_t g = 1 + rng() % (m - 1);
      REQUIRE(is_partition(prw(2 * m, g), 2 * m));
    }

    const std::size_t m1 = 1 + rng() % 4, b1 = 1 + rng() % 4;
    const std::size_t m2 = 1 + rng() % 4, b2 = 1 + rng() % 4;
    const std::size_t n1 = m1 * b1, n2 = m2 * b2;
    if (n1 < 2 || n2 < 2) continue;
    for (const auto& blocking :
         {rw_2d(n1, n2, m1, b1, m2, b2), cw_2d(n1, n2, m1, b1, m2, b2)}) {
      REQUIRE(is_partition(blocking, n1 * n2));
      REQUIRE(blocking.block_count() == m1 * m2);
      for (const auto& block : blocking.blocks) REQUIRE(block.size() == b1 * b2);
    }
  }
}

TEST_CASE("unequal sizes: larger blocks first") {
  const Blocking blocking = cw_1d_unequal(890, 30);
  REQUIRE(blocking.block_count() == 30);
  // 890 = 30 * 29 + 20
  for (std::size_t u = 0; u < 30; ++u) CHECK(blocking.blocks[u].size() == (u < 20 ? 30u : 29u));
}

TEST_CASE("size-2 blocks differ between row- and column-wise") {
  for (std::size_t m = 2; m < 8; ++m) CHECK(rw_1d(2 * m, m, 2).blocks != cw_1d(2 * m, m, 2).blocks);
}

TEST_CASE("custom blockings") {
  const Blocking custom = custom_blocking({{3, 0}, {1, 2}}, 4);
  CHECK(custom.blocks == Blocks{{0, 3}, {1, 2}});
  CHECK(custom.tag == BlockingTag::Custom);
  CHECK_THROWS_AS(custom_blocking({{0, 1}, {1, 2}}, 3), InvalidArgument);
  CHECK_THROWS_AS(custom_blocking({{0, 1}}, 3), InvalidArgument);
  CHECK_THROWS_AS(custom_blocking({{0, 1}, {}}, 2), InvalidArgument);
  CHECK_THROWS_AS(custom_blocking({{0, 5}}, 2), InvalidArgument);

  const std::string path = "blockess_test_blocking.txt";
  {
    std::ofstream out(path);
    out << "1 6\n2 5\n\n3 4\n";
  }
  CHECK(one_based(load_blocking_file(path, 6)) == Blocks{{1, 6}, {2, 5}, {3, 4}});
  CHECK_THROWS_AS(load_blocking_file(path, 7), InvalidArgument);
  {
    std::ofstream out(path);
    out << "0 1\n";
  }
  CHECK_THROWS_AS(load_blocking_file(path, 2), InvalidArgument);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_blocking_file("no/such/file", 2), InvalidArgument);
}
