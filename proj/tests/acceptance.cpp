// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "bsom/baselines.hpp"
#include "bsom/bayes_cost.hpp"
#include "bsom/evaluate.hpp"
#include "bsom/partition.hpp"
#include "bsom/sensitivity.hpp"
#include "bsom/som.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace bsom;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failed;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failed += (failed.empty() ? "" : ", ") + what;
    }
  }
};

const Dataset& iris() {
  static const Dataset d = load_csv(testing::source_path("data/iris.csv"), "class");
  return d;
}

const SomMap& fixture() {
  static const SomMap m = load_map(testing::source_path("tests/fixtures/iris_5x5_seed1.json"));
  return m;
}

const std::vector<SomMap>& seeded_maps() {
  static const std::vector<SomMap> maps = [] {
    std::vector<SomMap> out;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      SomConfig cfg;
      cfg.seed = seed;
      out.push_back(train(iris(), cfg));
    }
    return out;
  }();
  return maps;
}

double block_cost_1d(const std::vector<double>& m, const std::vector<double>& s, const CostParams& p) {
  std::vector<BlockMember> members;
  for (std::size_t i = 0; i < m.size(); ++i) members.push_back({std::span(&m[i], 1), std::span(&s[i], 1)});
  return block_cost(members, p);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome cost_calibration() {
  Outcome o;
  std::mt19937_64 gen(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  double worst_single = 0.0;
  for (int t = 0; t < 50; ++t) {
    const double m = 10.0 * u(gen), s = 0.01 + 3.0 * u(gen), r = 1.0 + 30.0 * u(gen);
    auto pb = testing::plain_params(1, r);
    auto pp = testing::plain_params(1, r, RangeExponent::PerPe);
    worst_single = std::max(worst_single, std::fabs(block_cost_1d({m}, {s}, pb) - std::log(r)));
    worst_single = std::max(worst_single, std::fabs(block_cost_1d({m}, {s}, pp)));
  }
  o.require(worst_single <= 1e-9, "singleton cost");

  const double range = 10.0;
  const auto params = testing::plain_params(1, range);
  auto gain = [&](double s) { return block_cost_1d({0.0, 0.0}, {s, s}, params) - 2.0 * block_cost_1d({0.0}, {s}, params); };
  double lo = 1e-3, hi = 1e3;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (gain(mid) < 0.0 ? lo : hi) = mid;
  }
  const double crossing_err = std::fabs(lo * std::sqrt(2.0 * std::numbers::pi) - range);
  o.require(std::fabs(lo - range / std::sqrt(2.0 * std::numbers::pi)) <= 1e-6, "merge crossing");

  double worst_rel = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + t % 3;
    std::vector<double> m, s;
    for (std::size_t i = 0; i < n; ++i) {
      m.push_back(4.0 * u(gen));
      s.push_back(0.1 + 1.5 * u(gen));
    }
    const bool per_pe = t % 2 == 1;
    const auto p = testing::plain_params(1, 2.0 + 20.0 * u(gen), per_pe ? RangeExponent::PerPe : RangeExponent::PerBlock);
    const double want = testing::oracle_attribute_cost(m, s, p.range[0], per_pe);
    worst_rel = std::max(worst_rel, std::fabs(block_cost_1d(m, s, p) - want) / std::max(1.0, std::fabs(want)));
  }
  o.require(worst_rel <= 1e-6, "integration oracle");
  o.detail << "singleton max err " << fmt("%.1e", worst_single) << ", crossing |sigma*sqrt(2pi)-R| "
           << fmt("%.1e", crossing_err) << ", oracle max rel err " << fmt("%.1e", worst_rel);
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const std::size_t n22 = enumerate_connected_partitions(2, 2, [](const std::vector<int>&) {});
  o.require(n22 == 12, "2x2 count");
  bool counts_ok = true;
  for (int r = 1; r <= 3; ++r)
    for (int c = 1; c <= 3; ++c)
      counts_ok &= enumerate_connected_partitions(r, c, [](const std::vector<int>&) {}) ==
                   testing::count_connected_partitions(r, c);
  o.require(counts_ok, "enumeration counts");

  int structured = 0, structured_hit = 0;
  auto check_family = [&](const SomMap& map, double range) {
    const auto params = testing::plain_params(map.dim(), range);
    ++structured;
    if (std::fabs(partition_som(map, params).cost - exhaustive_partition(map, params).best.cost) <= 1e-9)
      ++structured_hit;
  };
  for (int r = 1; r <= 3; ++r)
    for (int c = 1; c <= 3; ++c) {
      if (r * c < 2) continue;
      check_family(testing::stripes(r, c), 20.0);
      check_family(testing::uniform(r, c), 20.0);
    }
  check_family(testing::quadrants(2, 0.3), 60.0);
  check_family(testing::quadrants(3, 0.3), 60.0);
  o.require(structured_hit == structured, "structured optimum");

  std::mt19937_64 gen(7);
  int random = 0, random_opt = 0;
  bool bounded = true;
  double max_gap = 0.0;
  while (random < 100) {
    const auto map = testing::random_map(gen, 3);
    if (map.size() > 9) continue;
    ++random;
    const auto params = testing::iris_like_params(map);
    const auto p = partition_som(map, params);
    const double gap = p.cost - exhaustive_partition(map, params).best.cost;
    max_gap = std::max(max_gap, gap);
    if (gap <= 1e-9) ++random_opt;
    std::vector<int> singles(map.size()), whole(map.size(), 0);
    for (std::size_t i = 0; i < singles.size(); ++i) singles[i] = static_cast<int>(i);
    const double bound = std::min(partition_cost(make_partition(map.rows, map.cols, singles), map, params),
                                  partition_cost(make_partition(map.rows, map.cols, whole), map, params));
    bounded &= p.cost <= bound + 1e-9;
  }
  o.require(bounded, "trivial bound");
  o.detail << "2x2 count " << n22 << ", structured optimum " << structured_hit << "/" << structured
           << ", random optimum " << random_opt << "/" << random << " (max gap " << fmt("%.4f", max_gap) << ")";
  return o;
}

Outcome iris_end_to_end() {
  Outcome o;
  const CostSettings settings;
  int good = 0;
  std::ostringstream runs;
  for (std::size_t k = 0; k < seeded_maps().size(); ++k) {
    const auto& map = seeded_maps()[k];
    const auto p = partition_som(map, resolve_cost_params(map.summary, settings));
    const auto r = score(p, map, iris());
    const bool ok = p.block_count >= 2 && p.block_count <= 4 && r.p_o >= 0.80 && r.kappa >= 0.65;
    good += ok;
    runs << (k ? " " : "") << p.block_count << "/" << fmt("%.3f", r.p_o);
  }
  o.require(good >= 8, "seed band");
  const auto p = partition_som(fixture(), resolve_cost_params(fixture().summary, settings));
  const auto r = score(p, fixture(), iris());
  o.require(p.block_count == 3, "fixture block count");
  o.require(r.p_o >= 0.80 && r.p_o <= 0.95, "fixture accuracy");
  o.detail << good << "/10 seeds in band (blocks/accuracy: " << runs.str() << "); fixture " << p.block_count
           << " blocks, accuracy " << fmt("%.4f", r.p_o) << ", kappa " << fmt("%.4f", r.kappa);
  return o;
}

Outcome oracle_quality() {
  Outcome o;
  double min_acc = 1.0, min_kappa = 1.0;
  bool dominates = true;
  for (const auto& map : seeded_maps()) {
    const auto oracle = score(oracle_partition(map, iris().labels(), iris().class_count()), map, iris());
    const auto bayes = score(partition_som(map, resolve_cost_params(map.summary, {})), map, iris());
    min_acc = std::min(min_acc, oracle.p_o);
    min_kappa = std::min(min_kappa, oracle.kappa);
    dominates &= oracle.p_o >= bayes.p_o && oracle.kappa >= bayes.kappa;
  }
  o.require(min_acc >= 0.95, "accuracy");
  o.require(min_kappa >= 0.92, "kappa");
  o.require(dominates, "oracle >= bayes");
  o.detail << "min accuracy " << fmt("%.4f", min_acc) << ", min kappa " << fmt("%.4f", min_kappa)
           << ", oracle >= Bayesian on every seed: " << (dominates ? "yes" : "no");
  return o;
}

Outcome threshold_fragility() {
  Outcome o;
  const auto& map = fixture();
  const auto b = umatrix_boundaries(map);
  double max_strength = 0.0;
  for (const auto& e : b.edges)
    if (e.strength) max_strength = std::max(max_strength, *e.strength);

  bool monotone = true;
  int prev = std::numeric_limits<int>::max();
  for (int k = 0; k < 50; ++k) {
    const int blocks = threshold_partition(b, 1.05 * max_strength * k / 49.0).block_count;
    monotone &= blocks <= prev;
    prev = blocks;
  }
  o.require(monotone, "monotone");

  double found_t = -1.0, found_acc = 0.0;
  int found_blocks = 0, found_up = 0, found_down = 0;
  // Scan from the coarse end so the reported T is the largest fragile one.
  for (int k = 1000; k >= 1 && found_t < 0.0; --k) {
    const double t = max_strength * k / 1000.0;
    const auto p = threshold_partition(b, t);
    if (p.block_count < 5) continue;
    const double acc = score(p, map, iris()).p_o;
    const int up = threshold_partition(b, t * 1.05).block_count;
    const int down = threshold_partition(b, t * 0.95).block_count;
    if (acc >= 0.6 && (up != p.block_count || down != p.block_count)) {
      found_t = t;
      found_acc = acc;
      found_blocks = p.block_count;
      found_up = up;
      found_down = down;
    }
  }
  o.require(found_t > 0.0, "fragile threshold");
  o.detail << "T=" << fmt("%.4f", found_t) << " gives " << found_blocks << " blocks at accuracy "
           << fmt("%.4f", found_acc) << "; 0.95T -> " << found_down << ", 1.05T -> " << found_up
           << "; 50-point staircase monotone: " << (monotone ? "yes" : "no");
  return o;
}

Outcome stability_region() {
  Outcome o;
  auto spec = SweepSpec::defaults();
  spec.threads = 4;
  const auto block = stable_region(sweep(fixture(), spec));
  spec.base.range_exponent = RangeExponent::PerPe;
  const auto pe = stable_region(sweep(fixture(), spec));
  o.require(block.f_range_span >= 10.0 && block.f_sigma_span >= 10.0, "per_block spans");
  o.detail << "per_block spans f_R x" << fmt("%.3g", block.f_range_span) << ", f_sigma x"
           << fmt("%.3g", block.f_sigma_span) << "; per_pe (reported only) f_R x"
           << fmt("%.3g", pe.f_range_span) << ", f_sigma x" << fmt("%.3g", pe.f_sigma_span);
  return o;
}

Outcome property_suites() {
  Outcome o;
  std::mt19937_64 gen(31337);
  int valid = 0;
  double worst_additivity = 0.0, worst_permutation = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto map = testing::random_map(gen);
    const auto params = testing::iris_like_params(map);
    const auto p = partition_som(map, params);
    valid += is_valid_partition(p);
    double sum = 0.0;
    auto blocks = p.blocks();
    for (const auto& blk : blocks) sum += region_cost(map, blk, params);
    worst_additivity = std::max(worst_additivity, std::fabs(sum - partition_cost(p, map, params)));
    std::vector<int> relabeled(p.block_of.size());
    for (std::size_t i = 0; i < relabeled.size(); ++i) relabeled[i] = p.block_count - 1 - p.block_of[i];
    Partition q = p;
    q.block_of = relabeled;
    worst_permutation = std::max(worst_permutation, std::fabs(partition_cost(q, map, params) - p.cost));
    for (auto blk : blocks) {
      const double fwd = region_cost(map, blk, params);
      std::shuffle(blk.begin(), blk.end(), gen);
      worst_permutation = std::max(worst_permutation, std::fabs(region_cost(map, blk, params) - fwd));
    }
  }
  o.require(valid == 200, "validity");
  o.require(worst_additivity <= 1e-12, "additivity");
  o.require(worst_permutation <= 1e-12, "permutation");

  const auto k = agreement_from_confusion({{40, 5, 5}, {5, 40, 5}, {5, 5, 40}});
  const double kappa_err = std::fabs(k.kappa - 0.7);
  o.require(kappa_err <= 1e-12, "kappa hand case");

  SomConfig cfg;
  cfg.seed = 99;
  const bool deterministic = train(iris(), cfg) == train(iris(), cfg);
  o.require(deterministic, "determinism");

  std::vector<double> values;
  for (int i = 0; i < 10; ++i) values.insert(values.end(), {0.7, 1.9, -3.0});
  const Dataset same({"a", "b", "c"}, values);
  cfg.rows = cfg.cols = 3;
  const auto map = train(same, cfg);
  double drift = 0.0;
  for (const auto& pe : map.pes)
    for (std::size_t j = 0; j < 3; ++j) drift = std::max(drift, std::fabs(pe.weight[j] - values[j]));
  o.require(drift <= 1e-6, "identical-sample convergence");

  o.detail << "valid " << valid << "/200, additivity err " << fmt("%.1e", worst_additivity) << ", permutation err "
           << fmt("%.1e", worst_permutation) << ", kappa err " << fmt("%.1e", kappa_err)
           << ", deterministic " << (deterministic ? "yes" : "no") << ", drift " << fmt("%.1e", drift);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double time_limit_s;
    std::function<Outcome()> run;
  };
  const double unlimited = std::numeric_limits<double>::infinity();
  const Criterion criteria[] = {
      {1, "cost-function calibration", 1.0, cost_calibration},
      {2, "oracle equivalence on small grids", 30.0, oracle_equivalence},
      {3, "iris end-to-end Bayesian partition", 60.0, iris_end_to_end},
      {4, "oracle partition quality", unlimited, oracle_quality},
      {5, "threshold baseline fragility", unlimited, threshold_fragility},
      {6, "stability region", 120.0, stability_region},
      {7, "property suites", unlimited, property_suites},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.failed = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.time_limit_s) {
      out.require(false, "runtime over " + fmt("%g", c.time_limit_s) + " s");
    }
    failures += !out.pass;
    std::string line = out.detail.str();
    if (!out.failed.empty()) line += " [failed: " + out.failed + "]";
    std::printf("%s %d %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", c.id, c.name, line.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of 7 criteria passed\n", 7 - failures);
  return failures == 0 ? 0 : 1;
}
