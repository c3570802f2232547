#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bsom/data_model.hpp"
#include "bsom/partition_types.hpp"
#include "bsom/som.hpp"

namespace bsom {

/// How the per-attribute range R is estimated from the training data.
enum class RangeRule {
  TwoSpan,  ///< 2 (max - min)
  TwoMax,   ///< 2 max
};

/// How many factors of 1/R a block's marginal likelihood carries.
enum class RangeExponent {
  PerBlock,  ///< one factor per block (the uniform prior on the block value)
  PerPe,     ///< N - 1 factors for a block of N PEs
};

/// Block-size scale applied to the PE standard deviations.
enum class ScaleRule {
  SqrtN,
  Unit,
  LinearN,
};

/// User-facing knobs; resolved against an attribute summary into CostParams.
struct CostSettings {
  RangeRule range_rule = RangeRule::TwoMax;
  RangeExponent range_exponent = RangeExponent::PerBlock;
  ScaleRule scale_rule = ScaleRule::SqrtN;
  double sigma_const = 12.0;
  double sigma_floor_frac = 0.01;
  double f_range = 1.0;
  double f_sigma = 1.0;

  void validate() const;
  bool operator==(const CostSettings&) const = default;
};

struct CostParams {
  CostSettings settings;
  /// Per-attribute range R (attribute units).
  std::vector<double> range;
  /// Per-attribute lower bound on sigma (attribute units).
  std::vector<double> sigma_floor;

  void validate() const;
  std::size_t dim() const noexcept { return range.size(); }
};

std::vector<double> range_estimate(const AttributeSummary& summary, const CostSettings& settings);
CostParams resolve_cost_params(const AttributeSummary& summary, const CostSettings& settings);

double block_scale(std::size_t block_size, ScaleRule rule);

/// Width parameter of one non-empty PE inside a block of `block_size`
/// non-empty PEs.
std::vector<double> sigma_estimate(const PeStats& pe, std::size_t block_size,
                                   const CostParams& params);

struct BlockMember {
  std::span<const double> mean;
  std::span<const double> sigma;
};

/// Per-attribute sufficient statistics of a block.
struct BlockStat {
  double precision_sum;  ///< sum of 1 / sigma^2
  double weighted_mean;  ///< precision-weighted mean of the member means
  double resid;          ///< sum of (m - weighted_mean)^2 / sigma^2
};

BlockStat block_stat(std::span<const BlockMember> members, std::size_t attribute);

/// Negative log marginal likelihood of one block, summed over attributes.
double block_cost(std::span<const BlockMember> members, const CostParams& params);

/// Cost of the PEs `pe_indices` of `map` treated as one block. Empty PEs are
/// skipped; sigma uses the block's non-empty count. A block without
/// non-empty PEs costs 0.
double region_cost(const SomMap& map, std::span<const std::size_t> pe_indices,
                   const CostParams& params);

struct CostDiagnostics {
  /// Blocks that contain no non-empty PE (contribute 0).
  std::vector<int> empty_blocks;
};

double partition_cost(const Partition& partition, const SomMap& map, const CostParams& params,
                      CostDiagnostics* diagnostics = nullptr);

std::string to_string(RangeRule rule);
std::string to_string(RangeExponent exponent);
std::string to_string(ScaleRule rule);
RangeRule parse_range_rule(const std::string& text);
RangeExponent parse_range_exponent(const std::string& text);
ScaleRule parse_scale_rule(const std::string& text);

}  // namespace bsom
