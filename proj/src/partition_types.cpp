#include "bsom/partition_types.hpp"

#include <algorithm>
#include <unordered_map>

#include "bsom/error.hpp"

namespace bsom {

std::vector<std::vector<std::size_t>> Partition::blocks() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(std::max(block_count, 0)));
  for (std::size_t i = 0; i < block_of.size(); ++i) out.at(block_of[i]).push_back(i);
  return out;
}

std::vector<int> canonical_labels(const std::vector<int>& block_of) {
  std::unordered_map<int, int> relabel;
  std::vector<int> out;
  out.reserve(block_of.size());
  for (int b : block_of) {
    auto [it, inserted] = relabel.try_emplace(b, static_cast<int>(relabel.size()));
    out.push_back(it->second);
  }
  return out;
}

Partition make_partition(int rows, int cols, const std::vector<int>& block_of) {
  if (rows < 1 || cols < 1 || block_of.size() != static_cast<std::size_t>(rows) * cols)
    throw Error(ErrorCode::InvalidArgument, "block assignment does not match grid shape");
  Partition p;
  p.rows = rows;
  p.cols = cols;
  p.block_of = canonical_labels(block_of);
  p.block_count = p.block_of.empty() ? 0 : *std::max_element(p.block_of.begin(), p.block_of.end()) + 1;
  return p;
}

std::vector<std::size_t> grid_neighbors(int rows, int cols, std::size_t index) {
  const int r = static_cast<int>(index) / cols;
  const int c = static_cast<int>(index) % cols;
  std::vector<std::size_t> out;
  out.reserve(4);
  if (r > 0) out.push_back(index - cols);
  if (c > 0) out.push_back(index - 1);
  if (c + 1 < cols) out.push_back(index + 1);
  if (r + 1 < rows) out.push_back(index + cols);
  return out;
}

bool is_valid_partition(const Partition& p, std::string* why) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (p.rows < 1 || p.cols < 1) return fail("empty grid");
  if (p.block_of.size() != static_cast<std::size_t>(p.rows) * p.cols)
    return fail("assignment size differs from grid size");
  std::vector<std::size_t> block_size(static_cast<std::size_t>(std::max(p.block_count, 0)), 0);
  for (int b : p.block_of) {
    if (b < 0 || b >= p.block_count) return fail("block id out of range");
    ++block_size[b];
  }
  for (auto s : block_size)
    if (s == 0) return fail("block ids are not dense");

  // Flood fill each block from its first PE; every member must be reached.
  std::vector<bool> reached(p.block_of.size(), false);
  std::vector<bool> block_started(block_size.size(), false);
  for (std::size_t start = 0; start < p.block_of.size(); ++start) {
    const int b = p.block_of[start];
    if (block_started[b]) {
      if (!reached[start]) return fail("block is not 4-connected");
      continue;
    }
    block_started[b] = true;
    std::vector<std::size_t> stack{start};
    reached[start] = true;
    while (!stack.empty()) {
      auto i = stack.back();
      stack.pop_back();
      for (auto nb : grid_neighbors(p.rows, p.cols, i)) {
        if (!reached[nb] && p.block_of[nb] == b) {
          reached[nb] = true;
          stack.push_back(nb);
        }
      }
    }
  }
  return true;
}

}  // namespace bsom
