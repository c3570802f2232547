#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bsom/bayes_cost.hpp"
#include "bsom/partition_types.hpp"
#include "bsom/som.hpp"

namespace bsom {

struct SweepSpec {
  std::vector<double> f_range;
  std::vector<double> f_sigma;
  CostSettings base;
  /// Worker threads for grid evaluation; results do not depend on it.
  unsigned threads = 1;

  /// `points` log-spaced factors from 10^lo_exp to 10^hi_exp, with 1.0
  /// inserted if the spacing misses it.
  static std::vector<double> log_grid(int points = 13, double lo_exp = -1.5, double hi_exp = 1.5);
  static SweepSpec defaults(const CostSettings& base = {});
  void validate() const;
};

struct StabilityPoint {
  double f_range;
  double f_sigma;
  std::vector<int> signature;  ///< canonical block labeling
  int block_count;
  bool equal_to_reference;
};

struct StabilityMap {
  std::vector<double> f_range;
  std::vector<double> f_sigma;
  /// Row-major over (f_range index, f_sigma index).
  std::vector<StabilityPoint> points;
  std::vector<int> reference;

  const StabilityPoint& at(std::size_t ri, std::size_t si) const {
    return points[ri * f_sigma.size() + si];
  }
  std::string to_csv() const;
};

/// FNV-1a over the canonical labeling.
std::uint64_t signature_hash(const std::vector<int>& signature);

StabilityMap sweep(const SomMap& map, const SweepSpec& spec);

struct StableSpan {
  double f_range_span = 1.0;
  double f_sigma_span = 1.0;
  double f_range_lo = 1.0, f_range_hi = 1.0;
  double f_sigma_lo = 1.0, f_sigma_hi = 1.0;
};

/// Largest (by grid-point count) axis-aligned rectangle of points equal to
/// the reference that contains the (1, 1) point; ties prefer the larger
/// smaller-side span. Spans are hi / lo factor ratios.
StableSpan stable_region(const StabilityMap& stability);

}  // namespace bsom
