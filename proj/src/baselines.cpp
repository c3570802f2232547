#include "bsom/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "bsom/error.hpp"

namespace bsom {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

Partition from_components(int rows, int cols, DisjointSets& sets) {
  std::vector<int> block_of(static_cast<std::size_t>(rows) * cols);
  for (std::size_t i = 0; i < block_of.size(); ++i) block_of[i] = static_cast<int>(sets.find(i));
  return make_partition(rows, cols, block_of);
}

}  // namespace

std::optional<double> BoundaryMap::strength(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  for (const auto& e : edges)
    if (e.a == a && e.b == b) return e.strength;
  throw Error(ErrorCode::InvalidArgument, "PEs are not grid neighbors");
}

std::string BoundaryMap::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "row_a,col_a,row_b,col_b,strength\n";
  for (const auto& e : edges) {
    out << e.a / cols << ',' << e.a % cols << ',' << e.b / cols << ',' << e.b % cols << ',';
    if (e.strength)
      out << *e.strength;
    else
      out << "NA";
    out << '\n';
  }
  return out.str();
}

BoundaryMap umatrix_boundaries(const SomMap& map, bool normalize) {
  BoundaryMap out;
  out.rows = map.rows;
  out.cols = map.cols;
  const std::size_t m = map.dim();
  std::vector<double> scale(m, 1.0);
  if (normalize)
    for (std::size_t j = 0; j < m; ++j)
      if (map.summary.span(j) > 0.0) scale[j] = map.summary.span(j);

  auto edge = [&](std::size_t a, std::size_t b) {
    BoundaryEdge e{a, b, std::nullopt};
    const auto& pa = map.pes[a];
    const auto& pb = map.pes[b];
    if (!pa.empty() && !pb.empty()) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double d = (pa.mean[j] - pb.mean[j]) / scale[j];
        d2 += d * d;
      }
      e.strength = std::sqrt(d2);
    }
    out.edges.push_back(e);
  };
  for (int r = 0; r < map.rows; ++r) {
    for (int c = 0; c < map.cols; ++c) {
      if (c + 1 < map.cols) edge(map.index(r, c), map.index(r, c + 1));
      if (r + 1 < map.rows) edge(map.index(r, c), map.index(r + 1, c));
    }
  }
  return out;
}

Partition threshold_partition(const BoundaryMap& boundaries, double threshold) {
  if (!(threshold >= 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be >= 0");
  DisjointSets sets(static_cast<std::size_t>(boundaries.rows) * boundaries.cols);
  for (const auto& e : boundaries.edges)
    if (e.strength && *e.strength <= threshold) sets.unite(e.a, e.b);
  return from_components(boundaries.rows, boundaries.cols, sets);
}

Partition threshold_partition(const SomMap& map, double threshold, bool normalize) {
  return threshold_partition(umatrix_boundaries(map, normalize), threshold);
}

std::vector<ClassId> pe_majority_labels(const SomMap& map, const std::vector<ClassId>& labels,
                                        std::size_t class_count) {
  std::vector<ClassId> out(map.size(), -1);
  std::vector<std::size_t> counts(class_count);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const auto& pe = map.pes[i];
    if (pe.empty()) continue;
    std::fill(counts.begin(), counts.end(), 0);
    for (auto id : pe.member_ids) {
      if (id >= labels.size()) throw Error(ErrorCode::InvalidArgument, "labels do not cover map members");
      const ClassId c = labels[id];
      if (c < 0 || static_cast<std::size_t>(c) >= class_count)
        throw Error(ErrorCode::InvalidArgument, "class id out of range");
      ++counts[c];
    }
    out[i] = static_cast<ClassId>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  }
  return out;
}

Partition oracle_partition(const SomMap& map, const std::vector<ClassId>& labels,
                           std::size_t class_count) {
  if (labels.empty() || class_count == 0)
    throw Error(ErrorCode::InvalidArgument, "oracle partition needs class labels");
  const auto majority = pe_majority_labels(map, labels, class_count);
  if (std::all_of(majority.begin(), majority.end(), [](ClassId c) { return c < 0; }))
    throw Error(ErrorCode::InvalidArgument, "map has no populated PEs");

  DisjointSets sets(map.size());
  for (std::size_t i = 0; i < map.size(); ++i)
    for (auto nb : grid_neighbors(map.rows, map.cols, i))
      if (majority[i] >= 0 && majority[i] == majority[nb]) sets.unite(i, nb);

  std::vector<int> block_of(map.size(), -1);
  for (std::size_t i = 0; i < map.size(); ++i)
    if (majority[i] >= 0) block_of[i] = static_cast<int>(sets.find(i));
  block_of = [&] {
    // Dense ids for populated PEs in row-major first-appearance order.
    std::vector<int> dense(block_of.size(), -1);
    std::vector<int> remap(block_of.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < block_of.size(); ++i) {
      if (block_of[i] < 0) continue;
      auto& r = remap[static_cast<std::size_t>(block_of[i])];
      if (r < 0) r = next++;
      dense[i] = r;
    }
    return dense;
  }();

  // Grow blocks into empty PEs one ring at a time.
  bool pending = true;
  while (pending) {
    pending = false;
    auto next = block_of;
    for (std::size_t i = 0; i < map.size(); ++i) {
      if (block_of[i] >= 0) continue;
      int best = std::numeric_limits<int>::max();
      for (auto nb : grid_neighbors(map.rows, map.cols, i))
        if (block_of[nb] >= 0) best = std::min(best, block_of[nb]);
      if (best != std::numeric_limits<int>::max())
        next[i] = best;
      else
        pending = true;
    }
    block_of = std::move(next);
  }
  return make_partition(map.rows, map.cols, block_of);
}

}  // namespace bsom
