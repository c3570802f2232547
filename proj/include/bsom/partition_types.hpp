#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace bsom {

/// Assignment of every PE of a rows x cols grid (row-major) to a block.
struct Partition {
  int rows = 0;
  int cols = 0;
  std::vector<int> block_of;
  int block_count = 0;
  /// Cost under the parameters that produced the partition; 0 for
  /// partitions built without a cost function.
  double cost = 0.0;

  std::size_t size() const noexcept { return block_of.size(); }
  int block_at(int r, int c) const { return block_of[static_cast<std::size_t>(r) * cols + c]; }
  /// PE indices of every block, each list ascending.
  std::vector<std::vector<std::size_t>> blocks() const;
};

/// Relabels blocks in order of first appearance (row-major) and recomputes
/// block_count. Two partitions that group PEs identically become equal.
std::vector<int> canonical_labels(const std::vector<int>& block_of);
Partition make_partition(int rows, int cols, const std::vector<int>& block_of);

/// True iff every PE is assigned, ids are dense and each block is
/// 4-connected. `why` receives the first violation when non-null.
bool is_valid_partition(const Partition& p, std::string* why = nullptr);

/// Grid neighbors sharing an edge.
std::vector<std::size_t> grid_neighbors(int rows, int cols, std::size_t index);

}  // namespace bsom
