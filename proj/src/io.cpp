#include "bsom/io.hpp"

#include "bsom/error.hpp"
#include "bsom/version.hpp"
#include "io_util.hpp"

namespace bsom {

using nlohmann::json;

json cost_params_to_json(const CostParams& params) {
  const auto& s = params.settings;
  return {{"range_rule", to_string(s.range_rule)},
          {"range_exponent", to_string(s.range_exponent)},
          {"n_scale_rule", to_string(s.scale_rule)},
          {"sigma_const", s.sigma_const},
          {"sigma_floor_frac", s.sigma_floor_frac},
          {"f_R", s.f_range},
          {"f_sigma", s.f_sigma},
          {"R", params.range},
          {"sigma_floor", params.sigma_floor}};
}

std::string partition_to_json(const PartitionFile& file) {
  const auto& p = file.partition;
  json doc = {{"format", "bsom-partition"},
              {"format_version", kPartitionFormatVersion},
              {"provenance", {{"tool", kToolName}, {"version", kVersion}}},
              {"method", file.method},
              {"rows", p.rows},
              {"cols", p.cols},
              {"K", p.block_count},
              {"cost", p.cost},
              {"block_of", p.block_of},
              {"params", file.params.is_null() ? json::object() : file.params}};
  return doc.dump(1) + "\n";
}

PartitionFile partition_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != "bsom-partition")
      throw Error(ErrorCode::Parse, "not a partition file");
    if (doc.at("format_version").get<int>() != kPartitionFormatVersion)
      throw Error(ErrorCode::VersionMismatch, "unsupported partition format version");
    PartitionFile f;
    f.method = doc.at("method").get<std::string>();
    f.params = doc.at("params");
    f.partition.rows = doc.at("rows").get<int>();
    f.partition.cols = doc.at("cols").get<int>();
    f.partition.block_count = doc.at("K").get<int>();
    f.partition.cost = doc.at("cost").get<double>();
    f.partition.block_of = doc.at("block_of").get<std::vector<int>>();
    std::string why;
    if (!is_valid_partition(f.partition, &why))
      throw Error(ErrorCode::Parse, "partition file is invalid: " + why);
    return f;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed partition file: ") + e.what());
  }
}

void save_partition(const PartitionFile& file, const std::string& path) {
  detail::write_file_atomic(path, partition_to_json(file));
}

PartitionFile load_partition(const std::string& path) {
  return partition_from_json(detail::read_file(path));
}

void write_text_file(const std::string& path, const std::string& content) {
  detail::write_file_atomic(path, content);
}

}  // namespace bsom
