#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "bsom/bayes_cost.hpp"
#include "bsom/partition_types.hpp"

namespace bsom {

/// A partition artifact: the partition plus how it was produced.
struct PartitionFile {
  Partition partition;
  std::string method;      ///< "bayes", "threshold", "oracle", "exhaustive"
  nlohmann::json params;   ///< echo of the producing parameters
};

nlohmann::json cost_params_to_json(const CostParams& params);

std::string partition_to_json(const PartitionFile& file);
PartitionFile partition_from_json(const std::string& text);
void save_partition(const PartitionFile& file, const std::string& path);
PartitionFile load_partition(const std::string& path);

/// Writes any text artifact atomically (temporary file, then rename).
void write_text_file(const std::string& path, const std::string& content);

}  // namespace bsom
