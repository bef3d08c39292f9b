#include "blockess/blocking.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "blockess/errors.hpp"

namespace blockess {

namespace {

void require_factorization(std::size_t n, std::size_t m, std::size_t b,
                           const char* name) {
  if (m < 1 || b < 1 || m * b != n) {
    std::ostringstream os;
    os << name << ": need n = m*b with m, b >= 1 (n=" << n << ", m=" << m
       << ", b=" << b << ")";
    throw InvalidArgument(os.str());
  }
}

Blocking product_blocking(const Blocking& first, const Blocking& second,
                          std::size_t n2, BlockingTag tag) {
  Blocking out;
  out.tag = tag;
  out.blocks.reserve(first.blocks.size() * second.blocks.size());
  for (const auto& rows : first.blocks) {
    for (const auto& cols : second.blocks) {
      std::vector<std::size_t> block;
      block.reserve(rows.size() * cols.size());
      for (std::size_t i1 : rows)
        for (std::size_t i2 : cols) block.push_back(i1 * n2 + i2);
      out.blocks.push_back(std::move(block));
    }
  }
  return out;
}

}  // namespace

const char* to_string(BlockingTag tag) noexcept {
  switch (tag) {
    case BlockingTag::RW1D: return "rw";
    case BlockingTag::CW1D: return "cw";
    case BlockingTag::MCW1D: return "mcw";
    case BlockingTag::PRW: return "prw";
    case BlockingTag::RW1DUnequal: return "rw-unequal";
    case BlockingTag::CW1DUnequal: return "cw-unequal";
    case BlockingTag::RW2D: return "rw2d";
    case BlockingTag::CW2D: return "cw2d";
    case BlockingTag::Custom: return "custom";
  }
  return "?";
}

std::size_t Blocking::point_count() const noexcept {
  std::size_t total = 0;
  for (const auto& block : blocks) total += block.size();
  return total;
}

Blocking rw_1d(std::size_t n, std::size_t m, std::size_t b) {
  require_factorization(n, m, b, "rw");
  Blocking out;
  out.tag = BlockingTag::RW1D;
  out.blocks.resize(m);
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t j = 0; j < b; ++j) out.blocks[u].push_back(u * b + j);
  return out;
}

Blocking cw_1d(std::size_t n, std::size_t m, std::size_t b) {
  require_factorization(n, m, b, "cw");
  Blocking out;
  out.tag = BlockingTag::CW1D;
  out.blocks.resize(m);
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t j = 0; j < b; ++j) out.blocks[u].push_back(u + j * m);
  return out;
}

Blocking mcw_1d(std::size_t n, std::size_t m, std::size_t b) {
  require_factorization(n, m, b, "mcw");
  Blocking out;
  out.tag = BlockingTag::MCW1D;
  out.blocks.resize(m);
  // Row j of the b x m array; odd rows (0-based) run right to left.
  for (std::size_t j = 0; j < b; ++j) {
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t u = (j % 2 == 0) ? c : m - 1 - c;
      out.blocks[u].push_back(j * m + c);
    }
  }
  for (auto& block : out.blocks) std::sort(block.begin(), block.end());
  return out;
}

Blocking prw(std::size_t n, std::size_t g) {
  if (n < 4 || n % 2 != 0)
    throw InvalidArgument("prw: n must be even and at least 4");
  const std::size_t m = n / 2;
  if (g < 1 || g > m - 1) {
    std::ostringstream os;
    os << "prw: g must satisfy 1 <= g <= " << m - 1 << ", got " << g;
    throw InvalidArgument(os.str());
  }
  Blocking out;
  out.tag = BlockingTag::PRW;
  for (std::size_t u = 0; u < g; ++u) out.blocks.push_back({u, n - 1 - u});
  for (std::size_t u = 0; u < m - g; ++u)
    out.blocks.push_back({g + 2 * u, g + 2 * u + 1});
  return out;
}

Blocking rw_1d_unequal(std::size_t n, std::size_t m) {
  if (m < 1 || m > n) throw InvalidArgument("rw-unequal: need 1 <= m <= n");
  const std::size_t b = n / m;
  const std::size_t f = n - m * b;
  Blocking out;
  out.tag = BlockingTag::RW1DUnequal;
  out.blocks.resize(m);
  std::size_t next = 0;
  for (std::size_t u = 0; u < m; ++u) {
    const std::size_t size = u < f ? b + 1 : b;
    for (std::size_t j = 0; j < size; ++j) out.blocks[u].push_back(next++);
  }
  return out;
}

Blocking cw_1d_unequal(std::size_t n, std::size_t m) {
  if (m < 1 || m > n) throw InvalidArgument("cw-unequal: need 1 <= m <= n");
  Blocking out;
  out.tag = BlockingTag::CW1DUnequal;
  out.blocks.resize(m);
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t i = u; i < n; i += m) out.blocks[u].push_back(i);
  return out;
}

Blocking rw_2d(std::size_t n1, std::size_t n2, std::size_t m1, std::size_t b1,
               std::size_t m2, std::size_t b2) {
  return product_blocking(rw_1d(n1, m1, b1), rw_1d(n2, m2, b2), n2,
                          BlockingTag::RW2D);
}

Blocking cw_2d(std::size_t n1, std::size_t n2, std::size_t m1, std::size_t b1,
               std::size_t m2, std::size_t b2) {
  return product_blocking(cw_1d(n1, m1, b1), cw_1d(n2, m2, b2), n2,
                          BlockingTag::CW2D);
}

void validate_partition(const Blocking& blocking, std::size_t n) {
  std::vector<char> seen(n, 0);
  std::size_t total = 0;
  for (std::size_t u = 0; u < blocking.blocks.size(); ++u) {
    const auto& block = blocking.blocks[u];
    if (block.empty())
      throw InvalidArgument("blocking: block " + std::to_string(u + 1) + " is empty");
    for (std::size_t k = 0; k < block.size(); ++k) {
      const std::size_t i = block[k];
      if (i >= n)
        throw InvalidArgument("blocking: index " + std::to_string(i + 1) +
                              " exceeds n = " + std::to_string(n));
      if (k > 0 && block[k - 1] >= i)
        throw InvalidArgument("blocking: block " + std::to_string(u + 1) +
                              " is not strictly increasing");
      if (seen[i])
        throw InvalidArgument("blocking: index " + std::to_string(i + 1) +
                              " appears twice");
      seen[i] = 1;
      ++total;
    }
  }
  if (total != n)
    throw InvalidArgument("blocking: covers " + std::to_string(total) + " of " +
                          std::to_string(n) + " points");
}

Blocking custom_blocking(std::vector<std::vector<std::size_t>> blocks,
                         std::size_t n) {
  Blocking out;
  out.tag = BlockingTag::Custom;
  out.blocks = std::move(blocks);
  for (auto& block : out.blocks) std::sort(block.begin(), block.end());
  validate_partition(out, n);
  return out;
}

Blocking load_blocking_file(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("blocking: cannot open " + path);
  std::vector<std::vector<std::size_t>> blocks;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::size_t> block;
    std::string token;
    while (fields >> token) {
      std::size_t pos = 0;
      unsigned long long value = 0;
      try {
        value = std::stoull(token, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != token.size() || value == 0 || token[0] == '-')
        throw InvalidArgument(path + ":" + std::to_string(line_no) +
                              ": expected a positive 1-based index, got '" +
                              token + "'");
      block.push_back(static_cast<std::size_t>(value - 1));
    }
    if (!block.empty()) blocks.push_back(std::move(block));
  }
  return custom_blocking(std::move(blocks), n);
}

}  // namespace blockess
