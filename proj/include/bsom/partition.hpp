#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "bsom/bayes_cost.hpp"
#include "bsom/partition_types.hpp"
#include "bsom/som.hpp"

namespace bsom {

/// Half-open rectangle of PEs: rows [row0, row1), cols [col0, col1).
struct Region {
  int row0 = 0;
  int row1 = 0;
  int col0 = 0;
  int col1 = 0;

  int height() const noexcept { return row1 - row0; }
  int width() const noexcept { return col1 - col0; }
  std::vector<std::size_t> pe_indices(int grid_cols) const;

  bool operator==(const Region&) const = default;
};

/// Recursive quadtree split: a region is divided (rows and cols at
/// ceil(n/2); a 1-wide axis is left whole) whenever the best cost reachable
/// by splitting its children is strictly below its own cost. Returns the leaves.
std::vector<Region> quadtree_split(const SomMap& map, const CostParams& params);

/// Merges a tiling of rectangular regions: regions are ordered by the
/// (column, row) of their upper-left PE, and each region absorbs any
/// later edge-adjacent region whose union is strictly cheaper, until a full
/// pass makes no change.
Partition merge_regions(const std::vector<Region>& regions, const SomMap& map,
                        const CostParams& params);

/// Same merge loop, starting from the blocks of an existing partition.
Partition merge_blocks(const Partition& start, const SomMap& map, const CostParams& params);

/// Split then merge; `cost` is the partition cost under `params`.
Partition partition_som(const SomMap& map, const CostParams& params);

struct ExhaustiveResult {
  Partition best;
  std::size_t candidates = 0;
};

/// Visits every partition of a rows x cols grid into 4-connected blocks,
/// as canonical labelings in lexicographic order.
std::size_t enumerate_connected_partitions(int rows, int cols,
                                           const std::function<void(const std::vector<int>&)>& visit);

/// Minimum-cost connected partition by enumeration; ties resolve to the
/// lexicographically smallest labeling. Throws Error(TooLarge) above
/// `cell_limit` PEs.
ExhaustiveResult exhaustive_partition(const SomMap& map, const CostParams& params,
                                      int cell_limit = 9);

}  // namespace bsom
