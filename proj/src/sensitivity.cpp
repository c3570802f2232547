#include "bsom/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "bsom/error.hpp"
#include "bsom/partition.hpp"

namespace bsom {
namespace {

std::size_t index_of_one(const std::vector<double>& grid) {
  auto it = std::find(grid.begin(), grid.end(), 1.0);
  if (it == grid.end()) throw Error(ErrorCode::InvalidArgument, "sweep grid must contain 1.0");
  return static_cast<std::size_t>(it - grid.begin());
}

}  // namespace

std::vector<double> SweepSpec::log_grid(int points, double lo_exp, double hi_exp) {
  if (points < 1 || !(hi_exp >= lo_exp))
    throw Error(ErrorCode::InvalidArgument, "invalid sweep grid");
  std::vector<double> out;
  for (int k = 0; k < points; ++k) {
    const double e = points == 1 ? lo_exp : lo_exp + (hi_exp - lo_exp) * k / (points - 1);
    out.push_back(std::abs(e) < 1e-12 ? 1.0 : std::pow(10.0, e));
  }
  if (std::find(out.begin(), out.end(), 1.0) == out.end()) {
    out.push_back(1.0);
    std::sort(out.begin(), out.end());
  }
  return out;
}

SweepSpec SweepSpec::defaults(const CostSettings& base) {
  SweepSpec s;
  s.f_range = log_grid();
  s.f_sigma = log_grid();
  s.base = base;
  return s;
}

void SweepSpec::validate() const {
  base.validate();
  for (const auto* grid : {&f_range, &f_sigma}) {
    if (grid->empty()) throw Error(ErrorCode::InvalidArgument, "sweep grid is empty");
    if (!std::is_sorted(grid->begin(), grid->end()))
      throw Error(ErrorCode::InvalidArgument, "sweep grid must be ascending");
    for (double f : *grid)
      if (!(f > 0.0)) throw Error(ErrorCode::InvalidArgument, "sweep factors must be positive");
    index_of_one(*grid);
  }
}

std::uint64_t signature_hash(const std::vector<int>& signature) {
  std::uint64_t h = 14695981039346656037ull;
  for (int v : signature) {
    auto u = static_cast<std::uint32_t>(v);
    for (int byte = 0; byte < 4; ++byte) {
      h ^= (u >> (8 * byte)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

StabilityMap sweep(const SomMap& map, const SweepSpec& spec) {
  spec.validate();
  StabilityMap out;
  out.f_range = spec.f_range;
  out.f_sigma = spec.f_sigma;
  out.points.resize(spec.f_range.size() * spec.f_sigma.size());

  auto evaluate = [&](std::size_t k) {
    const std::size_t ri = k / spec.f_sigma.size();
    const std::size_t si = k % spec.f_sigma.size();
    CostSettings s = spec.base;
    s.f_range *= spec.f_range[ri];
    s.f_sigma *= spec.f_sigma[si];
    const Partition p = partition_som(map, resolve_cost_params(map.summary, s));
    out.points[k] = {spec.f_range[ri], spec.f_sigma[si], p.block_of, p.block_count, false};
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(spec.threads, out.points.size()));
  if (workers == 1) {
    for (std::size_t k = 0; k < out.points.size(); ++k) evaluate(k);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = w; k < out.points.size(); k += workers) evaluate(k);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  const std::size_t ref = index_of_one(spec.f_range) * spec.f_sigma.size() + index_of_one(spec.f_sigma);
  out.reference = out.points[ref].signature;
  for (auto& p : out.points) p.equal_to_reference = p.signature == out.reference;
  return out;
}

std::string StabilityMap::to_csv() const {
  std::ostringstream csv;
  csv.precision(17);
  csv << "f_R,f_sigma,equal_to_reference,signature_hash,n_blocks\n";
  for (const auto& p : points) {
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(signature_hash(p.signature)));
    csv << p.f_range << ',' << p.f_sigma << ',' << (p.equal_to_reference ? 1 : 0) << ',' << hash
        << ',' << p.block_count << '\n';
  }
  return csv.str();
}

StableSpan stable_region(const StabilityMap& stability) {
  const std::size_t nr = stability.f_range.size();
  const std::size_t ns = stability.f_sigma.size();
  const std::size_t r1 = index_of_one(stability.f_range);
  const std::size_t s1 = index_of_one(stability.f_sigma);

  // Prefix counts of stable points for O(1) rectangle checks.
  std::vector<std::size_t> pre((nr + 1) * (ns + 1), 0);
  auto P = [&](std::size_t r, std::size_t s) -> std::size_t& { return pre[r * (ns + 1) + s]; };
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t s = 0; s < ns; ++s)
      P(r + 1, s + 1) = P(r, s + 1) + P(r + 1, s) - P(r, s) +
                        (stability.at(r, s).equal_to_reference ? 1 : 0);

  StableSpan best;
  std::size_t best_area = 0;
  double best_min_span = 0.0;
  for (std::size_t rlo = 0; rlo <= r1; ++rlo)
    for (std::size_t rhi = r1; rhi < nr; ++rhi)
      for (std::size_t slo = 0; slo <= s1; ++slo)
        for (std::size_t shi = s1; shi < ns; ++shi) {
          const std::size_t area = (rhi - rlo + 1) * (shi - slo + 1);
          const std::size_t stable = P(rhi + 1, shi + 1) - P(rlo, shi + 1) - P(rhi + 1, slo) + P(rlo, slo);
          if (stable != area || area < best_area) continue;
          StableSpan cand;
          cand.f_range_lo = stability.f_range[rlo];
          cand.f_range_hi = stability.f_range[rhi];
          cand.f_sigma_lo = stability.f_sigma[slo];
          cand.f_sigma_hi = stability.f_sigma[shi];
          cand.f_range_span = cand.f_range_hi / cand.f_range_lo;
          cand.f_sigma_span = cand.f_sigma_hi / cand.f_sigma_lo;
          const double min_span = std::min(cand.f_range_span, cand.f_sigma_span);
          if (area > best_area || min_span > best_min_span) {
            best = cand;
            best_area = area;
            best_min_span = min_span;
          }
        }
  return best;
}

}  // namespace bsom
