#pragma once

// Builders for small synthetic maps and cost parameters shared by the tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bsom/bayes_cost.hpp"
#include "bsom/som.hpp"

namespace testing {

inline std::string source_path(const std::string& relative) {
  return std::string(BSOM_SOURCE_DIR) + "/" + relative;
}

// One mean vector per PE in row-major order; an empty vector marks an empty PE.
inline bsom::SomMap synthetic_map(int rows, int cols, const std::vector<std::vector<double>>& means,
                                  double s = 1.0, std::size_t members_per_pe = 4) {
  bsom::SomMap map;
  map.rows = rows;
  map.cols = cols;
  std::size_t dim = 0;
  for (const auto& m : means) dim = std::max(dim, m.size());
  for (std::size_t j = 0; j < dim; ++j) map.attribute_names.push_back("a" + std::to_string(j));
  map.summary.min.assign(dim, 0.0);
  map.summary.max.assign(dim, 0.0);
  bool first = true;
  std::size_t next_id = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const auto& m = means[static_cast<std::size_t>(r) * cols + c];
      bsom::PeStats pe;
      pe.pos = {r, c};
      pe.weight = m.empty() ? std::vector<double>(dim, 0.0) : m;
      if (!m.empty()) {
        for (std::size_t k = 0; k < members_per_pe; ++k) pe.member_ids.push_back(next_id++);
        pe.mean = m;
        pe.stddev.assign(dim, s);
        for (std::size_t j = 0; j < dim; ++j) {
          map.summary.min[j] = first ? m[j] : std::min(map.summary.min[j], m[j]);
          map.summary.max[j] = first ? m[j] : std::max(map.summary.max[j], m[j]);
        }
        first = false;
      }
      map.pes.push_back(std::move(pe));
    }
  }
  return map;
}

// Parameters under which every PE sigma equals its stored stddev exactly.
inline bsom::CostParams plain_params(std::size_t dim, double range,
                                     bsom::RangeExponent exponent = bsom::RangeExponent::PerBlock) {
  bsom::CostParams p;
  p.settings.range_exponent = exponent;
  p.settings.scale_rule = bsom::ScaleRule::Unit;
  p.settings.sigma_const = 1.0;
  p.range.assign(dim, range);
  p.sigma_floor.assign(dim, 1e-12);
  return p;
}

inline bsom::SomMap random_map(std::mt19937_64& gen, int max_side = 6, std::size_t dim = 2,
                               double empty_fraction = 0.15) {
  std::uniform_int_distribution<int> side(1, max_side);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int rows = side(gen), cols = side(gen);
  if (rows * cols < 2) cols = 2;
  std::vector<std::vector<double>> means(static_cast<std::size_t>(rows) * cols);
  // A few smooth clusters plus noise, so partitions are neither trivial nor all singletons.
  const int clusters = 1 + static_cast<int>(unit(gen) * 3);
  std::vector<std::vector<double>> centers(clusters, std::vector<double>(dim));
  for (auto& c : centers)
    for (auto& v : c) v = 1.0 + 10.0 * unit(gen);
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (i > 0 && unit(gen) < empty_fraction) continue;
    const auto& c = centers[(i * clusters) / means.size()];
    means[i].resize(dim);
    for (std::size_t j = 0; j < dim; ++j) means[i][j] = c[j] + 0.3 * (unit(gen) - 0.5);
  }
  auto map = synthetic_map(rows, cols, means, 0.05 + 0.3 * unit(gen));
  std::uniform_real_distribution<double> s(0.0, 0.4);
  for (auto& pe : map.pes)
    for (auto& v : pe.stddev) v = s(gen);
  return map;
}

// Structured families with a known optimal partition.
inline bsom::SomMap stripes(int rows, int cols, double s = 0.3) {
  std::vector<std::vector<double>> means;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) means.push_back({c < (cols + 1) / 2 ? 1.0 : 9.0});
  return synthetic_map(rows, cols, means, s);
}

inline bsom::SomMap quadrants(int side, double s) {
  std::vector<std::vector<double>> means;
  const int h = (side + 1) / 2;
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) means.push_back({10.0 * ((r >= h) * 2 + (c >= h))});
  return synthetic_map(side, side, means, s);
}

inline bsom::SomMap uniform(int rows, int cols) {
  return synthetic_map(rows, cols, std::vector<std::vector<double>>(rows * cols, {4.0, 2.0}), 0.5);
}

inline bsom::CostParams iris_like_params(const bsom::SomMap& map, bsom::CostSettings settings = {}) {
  return bsom::resolve_cost_params(map.summary, settings);
}

}  // namespace testing
