#include "bsom/bayes_cost.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bsom/error.hpp"
#include "kahan.hpp"

namespace bsom {
namespace {

using detail::CompensatedSum;

const double kLogPi = std::log(std::numbers::pi);

void check_members(std::span<const BlockMember> members, std::size_t dim) {
  if (members.empty()) throw Error(ErrorCode::InvalidArgument, "block has no members");
  for (const auto& m : members) {
    if (m.mean.size() != dim || m.sigma.size() != dim)
      throw Error(ErrorCode::InvalidArgument, "block member dimension mismatch");
    for (double s : m.sigma)
      if (!(s > 0.0) || !std::isfinite(s))
        throw Error(ErrorCode::Numeric, "sigma must be positive and finite");
  }
}

// Per-attribute pieces of the block likelihood. Precisions are expressed
// relative to the largest sigma so a lone member yields exact cancellation.
struct AttributeTerms {
  double log_sigma_sum;     // sum of ln sigma_i
  double half_log_prec;     // 0.5 ln(sum 1/sigma_i^2)
  double weighted_mean;
  double resid;
  double precision_sum;
};

AttributeTerms attribute_terms(std::span<const BlockMember> members, std::size_t j) {
  double sigma_max = 0.0;
  for (const auto& m : members) sigma_max = std::max(sigma_max, m.sigma[j]);

  CompensatedSum log_sigma, rel_prec, weighted;
  for (const auto& m : members) {
    const double ratio = sigma_max / m.sigma[j];
    const double w = ratio * ratio;
    log_sigma += std::log(m.sigma[j]);
    rel_prec += w;
    weighted += w * m.mean[j];
  }
  const double w_total = rel_prec.value();
  const double x = weighted.value() / w_total;

  CompensatedSum resid;
  for (const auto& m : members) {
    const double d = (m.mean[j] - x) / m.sigma[j];
    resid += d * d;
  }

  AttributeTerms t;
  t.log_sigma_sum = log_sigma.value();
  t.half_log_prec = 0.5 * std::log(w_total) - std::log(sigma_max);
  t.weighted_mean = x;
  t.resid = resid.value();
  t.precision_sum = w_total / (sigma_max * sigma_max);
  return t;
}

}  // namespace

void CostSettings::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(sigma_const)) throw Error(ErrorCode::InvalidArgument, "sigma_const must be > 0");
  if (!positive(sigma_floor_frac))
    throw Error(ErrorCode::InvalidArgument, "sigma_floor_frac must be > 0");
  if (!positive(f_range) || !positive(f_sigma))
    throw Error(ErrorCode::InvalidArgument, "sweep factors must be > 0");
}

void CostParams::validate() const {
  settings.validate();
  if (range.empty() || range.size() != sigma_floor.size())
    throw Error(ErrorCode::InvalidArgument, "cost parameter vectors are inconsistent");
  for (double r : range)
    if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "range must be > 0");
  for (double f : sigma_floor)
    if (!(f > 0.0) || !std::isfinite(f))
      throw Error(ErrorCode::InvalidArgument, "sigma floor must be > 0");
}

std::vector<double> range_estimate(const AttributeSummary& summary, const CostSettings& settings) {
  settings.validate();
  std::vector<double> range(summary.dim());
  for (std::size_t j = 0; j < summary.dim(); ++j) {
    if (settings.range_rule == RangeRule::TwoSpan) {
      if (!(summary.span(j) > 0.0))
        throw Error(ErrorCode::Degenerate,
                    "attribute " + std::to_string(j) + " has zero span; two_span range undefined");
      range[j] = settings.f_range * 2.0 * summary.span(j);
    } else {
      if (!(summary.max[j] > 0.0))
        throw Error(ErrorCode::Degenerate,
                    "attribute " + std::to_string(j) + " has non-positive maximum; two_max range undefined");
      range[j] = settings.f_range * 2.0 * summary.max[j];
    }
  }
  return range;
}

CostParams resolve_cost_params(const AttributeSummary& summary, const CostSettings& settings) {
  CostParams params;
  params.settings = settings;
  params.range = range_estimate(summary, settings);
  params.sigma_floor.resize(summary.dim());
  for (std::size_t j = 0; j < summary.dim(); ++j) {
    // Constant attributes fall back to the magnitude of the value itself.
    double scale = summary.span(j);
    if (!(scale > 0.0)) scale = std::fabs(summary.max[j]) > 0.0 ? std::fabs(summary.max[j]) : 1.0;
    params.sigma_floor[j] = settings.sigma_floor_frac * scale;
  }
  params.validate();
  return params;
}

double block_scale(std::size_t block_size, ScaleRule rule) {
  const auto n = static_cast<double>(block_size);
  switch (rule) {
    case ScaleRule::SqrtN: return std::sqrt(n);
    case ScaleRule::Unit: return 1.0;
    case ScaleRule::LinearN: return n;
  }
  return 1.0;
}

std::vector<double> sigma_estimate(const PeStats& pe, std::size_t block_size,
                                   const CostParams& params) {
  if (pe.empty()) throw Error(ErrorCode::InvalidArgument, "sigma_estimate on empty PE");
  if (block_size == 0) throw Error(ErrorCode::InvalidArgument, "block size must be positive");
  if (pe.stddev.size() != params.dim())
    throw Error(ErrorCode::InvalidArgument, "PE dimension differs from cost parameters");
  const auto& s = params.settings;
  const double factor = s.f_sigma * s.sigma_const * block_scale(block_size, s.scale_rule);
  std::vector<double> sigma(params.dim());
  for (std::size_t j = 0; j < sigma.size(); ++j)
    sigma[j] = std::max(params.sigma_floor[j], factor * pe.stddev[j]);
  return sigma;
}

BlockStat block_stat(std::span<const BlockMember> members, std::size_t attribute) {
  if (members.empty()) throw Error(ErrorCode::InvalidArgument, "block has no members");
  check_members(members, members.front().mean.size());
  auto t = attribute_terms(members, attribute);
  return {t.precision_sum, t.weighted_mean, t.resid};
}

double block_cost(std::span<const BlockMember> members, const CostParams& params) {
  check_members(members, params.dim());
  const double n_minus_1 = static_cast<double>(members.size() - 1);
  CompensatedSum total;
  for (std::size_t j = 0; j < params.dim(); ++j) {
    const auto t = attribute_terms(members, j);
    const double log_r = std::log(params.range[j]);
    if (params.settings.range_exponent == RangeExponent::PerBlock) {
      total += log_r;
      total += 0.5 * n_minus_1 * kLogPi;
    } else {
      total += n_minus_1 * (log_r + 0.5 * kLogPi);
    }
    total += t.log_sigma_sum;
    total += t.half_log_prec;
    total += t.resid;
  }
  return total.value();
}

double region_cost(const SomMap& map, std::span<const std::size_t> pe_indices,
                   const CostParams& params) {
  std::size_t filled = 0;
  for (auto i : pe_indices)
    if (!map.pes.at(i).empty()) ++filled;
  if (filled == 0) return 0.0;

  std::vector<std::vector<double>> sigmas;
  sigmas.reserve(filled);
  std::vector<BlockMember> members;
  members.reserve(filled);
  for (auto i : pe_indices) {
    const auto& pe = map.pes[i];
    if (pe.empty()) continue;
    sigmas.push_back(sigma_estimate(pe, filled, params));
    members.push_back({pe.mean, sigmas.back()});
  }
  return block_cost(members, params);
}

double partition_cost(const Partition& partition, const SomMap& map, const CostParams& params,
                      CostDiagnostics* diagnostics) {
  if (partition.rows != map.rows || partition.cols != map.cols)
    throw Error(ErrorCode::InvalidArgument, "partition shape differs from map shape");
  if (diagnostics) diagnostics->empty_blocks.clear();
  CompensatedSum total;
  const auto blocks = partition.blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const bool any = std::any_of(blocks[b].begin(), blocks[b].end(),
                                 [&](std::size_t i) { return !map.pes[i].empty(); });
    if (!any) {
      if (diagnostics) diagnostics->empty_blocks.push_back(static_cast<int>(b));
      continue;
    }
    total += region_cost(map, blocks[b], params);
  }
  return total.value();
}

std::string to_string(RangeRule rule) {
  return rule == RangeRule::TwoSpan ? "two_span" : "two_max";
}

std::string to_string(RangeExponent exponent) {
  return exponent == RangeExponent::PerBlock ? "per_block" : "per_pe";
}

std::string to_string(ScaleRule rule) {
  switch (rule) {
    case ScaleRule::SqrtN: return "sqrt_n";
    case ScaleRule::Unit: return "unit";
    case ScaleRule::LinearN: return "linear_n";
  }
  return "sqrt_n";
}

RangeRule parse_range_rule(const std::string& text) {
  if (text == "two_span") return RangeRule::TwoSpan;
  if (text == "two_max") return RangeRule::TwoMax;
  throw Error(ErrorCode::InvalidArgument, "unknown range_rule '" + text + "'");
}

RangeExponent parse_range_exponent(const std::string& text) {
  if (text == "per_block") return RangeExponent::PerBlock;
  if (text == "per_pe") return RangeExponent::PerPe;
  throw Error(ErrorCode::InvalidArgument, "unknown range_exponent '" + text + "'");
}

ScaleRule parse_scale_rule(const std::string& text) {
  if (text == "sqrt_n") return ScaleRule::SqrtN;
  if (text == "unit") return ScaleRule::Unit;
  if (text == "linear_n") return ScaleRule::LinearN;
  throw Error(ErrorCode::InvalidArgument, "unknown n_scale_rule '" + text + "'");
}

}  // namespace bsom
