#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bsom/data_model.hpp"
#include "bsom/partition_types.hpp"
#include "bsom/som.hpp"

namespace bsom {

struct BoundaryEdge {
  std::size_t a;  ///< lower PE index
  std::size_t b;  ///< right or lower neighbor of `a`
  /// Euclidean distance between the two PE means; absent when either PE is empty.
  std::optional<double> strength;
};

struct BoundaryMap {
  int rows = 0;
  int cols = 0;
  std::vector<BoundaryEdge> edges;

  std::optional<double> strength(std::size_t a, std::size_t b) const;
  std::string to_csv() const;
};

/// Boundary strengths from PE attribute means. With `normalize`, each
/// attribute difference is divided by the attribute's span first.
BoundaryMap umatrix_boundaries(const SomMap& map, bool normalize = false);

/// Cuts every edge stronger than `threshold` (and every edge touching an
/// empty PE); blocks are the remaining connected components.
Partition threshold_partition(const SomMap& map, double threshold, bool normalize = false);
Partition threshold_partition(const BoundaryMap& boundaries, double threshold);

/// Majority class of each PE's members (ties to the lowest class id);
/// -1 for empty PEs.
std::vector<ClassId> pe_majority_labels(const SomMap& map, const std::vector<ClassId>& labels,
                                        std::size_t class_count);

/// Best PE-constant labeling: components of equal majority class, with empty
/// PEs absorbed into the lowest-numbered adjacent block.
Partition oracle_partition(const SomMap& map, const std::vector<ClassId>& labels,
                           std::size_t class_count);

}  // namespace bsom
