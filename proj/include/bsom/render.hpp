#pragma once

#include <string>
#include <vector>

#include "bsom/data_model.hpp"
#include "bsom/partition_types.hpp"
#include "bsom/som.hpp"

namespace bsom {

/// ASCII/box-drawing view of the map: each cell shows its block id (when a
/// partition is given) and the per-class populations of its members (or the
/// plain population without labels). Boundaries are drawn only between
/// cells of different blocks.
std::string render_map(const SomMap& map, const Partition* partition = nullptr,
                       const Dataset* labeled = nullptr);

}  // namespace bsom
