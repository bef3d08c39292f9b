#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace blockess {

enum class BlockingTag {
  RW1D,
  CW1D,
  MCW1D,
  PRW,
  RW1DUnequal,
  CW1DUnequal,
  RW2D,
  CW2D,
  Custom,
};

const char* to_string(BlockingTag tag) noexcept;

/// An ordered partition of the point indices {0, ..., n-1} into blocks.
///
/// Indices are 0-based linear indices under the geometry's linearization.
/// Each block is non-empty and sorted ascending.
struct Blocking {
  std::vector<std::vector<std::size_t>> blocks;
  BlockingTag tag = BlockingTag::Custom;

  std::size_t block_count() const noexcept { return blocks.size(); }
  std::size_t point_count() const noexcept;
  friend bool operator==(const Blocking&, const Blocking&) = default;
};

/// Row-wise: m consecutive runs of length b.
Blocking rw_1d(std::size_t n, std::size_t m, std::size_t b);
/// Column-wise: block u holds u, u + m, u + 2m, ...
Blocking cw_1d(std::size_t n, std::size_t m, std::size_t b);
/// Column-wise after reversing every second row of the b x m arrangement.
Blocking mcw_1d(std::size_t n, std::size_t m, std::size_t b);
/// Size-2 blocks for n = 2m: g end-wrapping pairs, then consecutive pairs.
Blocking prw(std::size_t n, std::size_t g);

/// Near-equal blocks: f = n - m*floor(n/m) blocks of size floor(n/m)+1 first.
Blocking rw_1d_unequal(std::size_t n, std::size_t m);
Blocking cw_1d_unequal(std::size_t n, std::size_t m);

/// Cartesian products of 1D RW (resp. CW) blockings in each grid dimension,
/// ordered lexicographically by (u1, u2).
Blocking rw_2d(std::size_t n1, std::size_t n2, std::size_t m1, std::size_t b1,
               std::size_t m2, std::size_t b2);
Blocking cw_2d(std::size_t n1, std::size_t n2, std::size_t m1, std::size_t b1,
               std::size_t m2, std::size_t b2);

/// Normalizes and checks a user-supplied partition of {0, ..., n-1}.
Blocking custom_blocking(std::vector<std::vector<std::size_t>> blocks,
                         std::size_t n);

/// Reads one block per line of whitespace-separated 1-based indices.
Blocking load_blocking_file(const std::string& path, std::size_t n);

/// Throws InvalidArgument unless `blocking` partitions {0, ..., n-1} into
/// non-empty ascending blocks.
void validate_partition(const Blocking& blocking, std::size_t n);

}  // namespace blockess
