#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bsom/data_model.hpp"

namespace bsom {

/// Neighborhood half-width in effect from `epoch_fraction` of training onward.
struct NeighborhoodStep {
  double epoch_fraction;
  int half_width;

  bool operator==(const NeighborhoodStep&) const = default;
};

struct SomConfig {
  int rows = 5;
  int cols = 5;
  int epochs = 200;
  double lr_start = 0.5;
  double lr_end = 0.02;
  /// 3x3 neighborhood for the first half of training, 1x1 afterwards.
  std::vector<NeighborhoodStep> neighborhood{{0.0, 1}, {0.5, 0}};
  double conscience_beta = 1e-4;
  double conscience_gamma = 1.0;
  std::uint64_t seed = 1;

  /// Throws Error(InvalidArgument) describing the first violated constraint.
  void validate() const;
  int half_width_at(int epoch) const;

  bool operator==(const SomConfig&) const = default;
};

struct GridPos {
  int row = 0;
  int col = 0;

  bool operator==(const GridPos&) const = default;
};

struct PeStats {
  GridPos pos;
  std::vector<double> weight;
  std::vector<std::size_t> member_ids;
  /// Member attribute means; empty when the PE won no samples.
  std::vector<double> mean;
  /// Sample standard deviations (n-1 denominator); zeros when n <= 1.
  std::vector<double> stddev;

  std::size_t n() const noexcept { return member_ids.size(); }
  bool empty() const noexcept { return member_ids.empty(); }

  bool operator==(const PeStats&) const = default;
};

/// Trained map. PEs are stored row-major; `summary` holds the attribute
/// ranges of the training data, which the cost function's range estimate needs.
struct SomMap {
  int rows = 0;
  int cols = 0;
  std::vector<PeStats> pes;
  std::vector<std::string> attribute_names;
  AttributeSummary summary;
  SomConfig config;

  std::size_t size() const noexcept { return pes.size(); }
  std::size_t dim() const noexcept { return attribute_names.size(); }
  std::size_t index(int r, int c) const { return static_cast<std::size_t>(r) * cols + c; }
  const PeStats& at(int r, int c) const { return pes[index(r, c)]; }
  std::size_t sample_count() const;

  bool operator==(const SomMap&) const = default;
};

SomMap train(const Dataset& dataset, const SomConfig& config);

/// Map whose weights are the seeded initial draws, with no learning applied.
/// Used as the baseline for training diagnostics.
SomMap initial_map(const Dataset& dataset, const SomConfig& config);

/// Index of the PE whose weight is nearest `x` (lowest index on ties).
std::size_t nearest_pe(const SomMap& map, std::span<const double> x);

/// Recomputes member lists and statistics from scratch against `dataset`.
void assign_samples(SomMap& map, const Dataset& dataset);

double quantization_error(const SomMap& map, const Dataset& dataset);

void save_map(const SomMap& map, const std::string& path);
SomMap load_map(const std::string& path);
std::string map_to_json(const SomMap& map);
SomMap map_from_json(const std::string& text);

}  // namespace bsom
