#include "bsom/partition.hpp"

#include <algorithm>
#include <tuple>

#include "bsom/error.hpp"

namespace bsom {
namespace {

struct Group {
  std::vector<std::size_t> pes;
  int key_col;
  int key_row;
  double cost;
  std::size_t populated;
};

bool key_less(const Group& a, const Group& b) {
  return std::tie(a.key_col, a.key_row) < std::tie(b.key_col, b.key_row);
}

Group make_group(std::vector<std::size_t> pes, const SomMap& map, const CostParams& params) {
  std::sort(pes.begin(), pes.end());
  Group g{std::move(pes), map.cols, map.rows, 0.0, 0};
  for (auto i : g.pes) {
    const int r = static_cast<int>(i) / map.cols;
    const int c = static_cast<int>(i) % map.cols;
    if (std::tie(c, r) < std::tie(g.key_col, g.key_row)) {
      g.key_col = c;
      g.key_row = r;
    }
  }
  for (auto i : g.pes)
    if (map.pes[i].member_ids.size() > 0) ++g.populated;
  g.cost = region_cost(map, g.pes, params);
  return g;
}

// Returns the cheapest cost reachable for `region` by quadtree splitting and
// appends the corresponding leaves. A region is split only when its best
// subdivision is strictly cheaper than keeping it whole.
double split_recursive(const Region& region, const SomMap& map, const CostParams& params,
                       std::vector<Region>& leaves) {
  const double whole = region_cost(map, region.pe_indices(map.cols), params);
  if (region.height() <= 1 && region.width() <= 1) {
    leaves.push_back(region);
    return whole;
  }
  const int row_mid = region.row0 + (region.height() + 1) / 2;
  const int col_mid = region.col0 + (region.width() + 1) / 2;

  std::vector<Region> sub;
  double split = 0.0;
  for (auto [r0, r1] : {std::pair{region.row0, row_mid}, std::pair{row_mid, region.row1}})
    for (auto [c0, c1] : {std::pair{region.col0, col_mid}, std::pair{col_mid, region.col1}})
      if (r1 > r0 && c1 > c0) split += split_recursive({r0, r1, c0, c1}, map, params, sub);

  if (whole > split) {
    leaves.insert(leaves.end(), sub.begin(), sub.end());
    return split;
  }
  leaves.push_back(region);
  return whole;
}

Partition run_merge(std::vector<Group> groups, const SomMap& map, const CostParams& params) {
  std::stable_sort(groups.begin(), groups.end(), key_less);

  std::vector<std::size_t> owner(map.size());
  auto reown = [&] {
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (auto i : groups[g].pes) owner[i] = g;
  };
  auto adjacent = [&](std::size_t a, std::size_t b) {
    for (auto i : groups[a].pes)
      for (auto nb : grid_neighbors(map.rows, map.cols, i))
        if (owner[nb] == b) return true;
    return false;
  };
  reown();

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      std::size_t j = i + 1;
      while (j < groups.size()) {
        if (adjacent(i, j)) {
          std::vector<std::size_t> joined = groups[i].pes;
          joined.insert(joined.end(), groups[j].pes.begin(), groups[j].pes.end());
          Group candidate = make_group(std::move(joined), map, params);
          // A region of empty PEs costs nothing and is absorbed by any neighbor.
          const bool absorb = groups[i].populated == 0 || groups[j].populated == 0;
          if (absorb || candidate.cost < groups[i].cost + groups[j].cost) {
            // The union keeps region i's key, so the ordering is preserved.
            groups[i] = std::move(candidate);
            groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(j));
            reown();
            changed = true;
            j = i + 1;
            continue;
          }
        }
        ++j;
      }
    }
  }

  std::vector<int> block_of(map.size(), -1);
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (auto i : groups[g].pes) block_of[i] = static_cast<int>(g);
  Partition p = make_partition(map.rows, map.cols, block_of);
  p.cost = partition_cost(p, map, params);
  return p;
}

void check_map(const SomMap& map, const CostParams& params) {
  if (map.rows < 1 || map.cols < 1 || map.size() != static_cast<std::size_t>(map.rows) * map.cols)
    throw Error(ErrorCode::InvalidArgument, "map grid is degenerate");
  if (map.dim() != params.dim())
    throw Error(ErrorCode::InvalidArgument, "map dimension differs from cost parameters");
}

}  // namespace

std::vector<std::size_t> Region::pe_indices(int grid_cols) const {
  std::vector<std::size_t> out;
  out.reserve(static_cast<std::size_t>(std::max(0, height() * width())));
  for (int r = row0; r < row1; ++r)
    for (int c = col0; c < col1; ++c) out.push_back(static_cast<std::size_t>(r) * grid_cols + c);
  return out;
}

std::vector<Region> quadtree_split(const SomMap& map, const CostParams& params) {
  check_map(map, params);
  std::vector<Region> leaves;
  split_recursive({0, map.rows, 0, map.cols}, map, params, leaves);
  return leaves;
}

Partition merge_regions(const std::vector<Region>& regions, const SomMap& map,
                        const CostParams& params) {
  check_map(map, params);
  std::vector<int> cover(map.size(), 0);
  std::vector<Group> groups;
  groups.reserve(regions.size());
  for (const auto& region : regions) {
    if (region.row0 < 0 || region.col0 < 0 || region.row1 > map.rows || region.col1 > map.cols ||
        region.height() < 1 || region.width() < 1)
      throw Error(ErrorCode::InvalidArgument, "region outside grid or empty");
    auto pes = region.pe_indices(map.cols);
    for (auto i : pes) ++cover[i];
    groups.push_back(make_group(std::move(pes), map, params));
  }
  for (int c : cover)
    if (c != 1) throw Error(ErrorCode::InvalidArgument, "regions overlap or do not cover the grid");
  return run_merge(std::move(groups), map, params);
}

Partition merge_blocks(const Partition& start, const SomMap& map, const CostParams& params) {
  check_map(map, params);
  std::string why;
  if (start.rows != map.rows || start.cols != map.cols || !is_valid_partition(start, &why))
    throw Error(ErrorCode::InvalidArgument, "invalid starting partition: " + why);
  std::vector<Group> groups;
  for (auto& pes : start.blocks()) groups.push_back(make_group(std::move(pes), map, params));
  return run_merge(std::move(groups), map, params);
}

Partition partition_som(const SomMap& map, const CostParams& params) {
  return merge_regions(quadtree_split(map, params), map, params);
}

std::size_t enumerate_connected_partitions(
    int rows, int cols, const std::function<void(const std::vector<int>&)>& visit) {
  const auto n = static_cast<std::size_t>(rows) * cols;
  std::vector<int> labels(n, 0);
  std::size_t count = 0;
  Partition probe;
  probe.rows = rows;
  probe.cols = cols;

  // Restricted growth strings in lexicographic order enumerate every set
  // partition exactly once, already in canonical form.
  std::function<void(std::size_t, int)> recurse = [&](std::size_t k, int used) {
    if (k == n) {
      probe.block_of = labels;
      probe.block_count = used;
      if (is_valid_partition(probe)) {
        ++count;
        visit(labels);
      }
      return;
    }
    for (int b = 0; b <= used; ++b) {
      labels[k] = b;
      recurse(k + 1, std::max(used, b + 1));
    }
  };
  if (n > 0) recurse(0, 0);
  return count;
}

ExhaustiveResult exhaustive_partition(const SomMap& map, const CostParams& params, int cell_limit) {
  check_map(map, params);
  if (map.size() > static_cast<std::size_t>(std::max(cell_limit, 0)))
    throw Error(ErrorCode::TooLarge, "grid of " + std::to_string(map.size()) +
                                         " PEs exceeds exhaustive cell limit " +
                                         std::to_string(cell_limit));
  ExhaustiveResult result;
  bool have = false;
  result.candidates = enumerate_connected_partitions(map.rows, map.cols, [&](const std::vector<int>& labels) {
    Partition p = make_partition(map.rows, map.cols, labels);
    p.cost = partition_cost(p, map, params);
    if (!have || p.cost < result.best.cost) {
      result.best = std::move(p);
      have = true;
    }
  });
  return result;
}

}  // namespace bsom
