#include "bsom/som.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "bsom/error.hpp"
#include "bsom/random.hpp"
#include "bsom/version.hpp"
#include "io_util.hpp"

namespace bsom {
namespace {

using nlohmann::json;

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double t = a[j] - b[j];
    d += t * t;
  }
  return d;
}

// Sample indices sorted by attribute values, so that presentation order and
// initial draws do not depend on how the dataset happens to be stored.
std::vector<std::size_t> canonical_order(const Dataset& dataset) {
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto x = dataset.sample(a);
    auto y = dataset.sample(b);
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  });
  return order;
}

SomMap empty_map(const Dataset& dataset, const SomConfig& config) {
  SomMap map;
  map.rows = config.rows;
  map.cols = config.cols;
  map.attribute_names = dataset.attribute_names();
  map.summary = summarize(dataset);
  map.config = config;
  map.pes.resize(static_cast<std::size_t>(config.rows) * config.cols);
  for (int r = 0; r < config.rows; ++r)
    for (int c = 0; c < config.cols; ++c) map.pes[map.index(r, c)].pos = {r, c};
  return map;
}

void initialize_weights(SomMap& map, const Dataset& dataset,
                        const std::vector<std::size_t>& order, Rng& rng) {
  for (auto& pe : map.pes) {
    auto x = dataset.sample(order[rng.below(order.size())]);
    pe.weight.assign(x.begin(), x.end());
  }
}

void check_trainable(const Dataset& dataset, const SomConfig& config) {
  config.validate();
  if (dataset.empty()) throw Error(ErrorCode::InvalidArgument, "cannot train on an empty dataset");
}

}  // namespace

void SomConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); };
  if (rows < 1 || cols < 1) fail("rows and cols must be positive");
  if (rows * cols < 2) fail("map needs at least two PEs");
  if (epochs < 1) fail("epochs must be positive");
  if (!(lr_start > 0.0 && lr_start <= 1.0) || !(lr_end > 0.0 && lr_end <= 1.0))
    fail("learning rates must lie in (0, 1]");
  if (lr_start < lr_end) fail("lr_start must be >= lr_end");
  if (neighborhood.empty()) fail("neighborhood schedule is empty");
  for (std::size_t k = 0; k < neighborhood.size(); ++k) {
    const auto& s = neighborhood[k];
    if (s.half_width < 0) fail("neighborhood half-width must be non-negative");
    if (!(s.epoch_fraction >= 0.0 && s.epoch_fraction <= 1.0))
      fail("neighborhood epoch fraction must lie in [0, 1]");
    if (k > 0 && (s.epoch_fraction < neighborhood[k - 1].epoch_fraction ||
                  s.half_width > neighborhood[k - 1].half_width))
      fail("neighborhood schedule must be sorted with non-increasing half-widths");
  }
  if (!(conscience_beta >= 0.0) || !(conscience_gamma >= 0.0))
    fail("conscience constants must be non-negative");
}

int SomConfig::half_width_at(int epoch) const {
  const double progress = static_cast<double>(epoch) / epochs;
  int hw = neighborhood.front().half_width;
  for (const auto& s : neighborhood)
    if (s.epoch_fraction <= progress) hw = s.half_width;
  return hw;
}

std::size_t SomMap::sample_count() const {
  std::size_t n = 0;
  for (const auto& pe : pes) n += pe.n();
  return n;
}

std::size_t nearest_pe(const SomMap& map, std::span<const double> x) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < map.pes.size(); ++i) {
    const double d = squared_distance(map.pes[i].weight, x);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

void assign_samples(SomMap& map, const Dataset& dataset) {
  if (dataset.dim() != map.dim())
    throw Error(ErrorCode::InvalidArgument, "dataset dimension differs from map dimension");
  for (auto& pe : map.pes) {
    pe.member_ids.clear();
    pe.mean.clear();
    pe.stddev.clear();
  }
  for (std::size_t i = 0; i < dataset.size(); ++i)
    map.pes[nearest_pe(map, dataset.sample(i))].member_ids.push_back(i);

  const std::size_t m = map.dim();
  for (auto& pe : map.pes) {
    if (pe.empty()) continue;
    pe.mean.assign(m, 0.0);
    pe.stddev.assign(m, 0.0);
    for (auto id : pe.member_ids) {
      auto x = dataset.sample(id);
      for (std::size_t j = 0; j < m; ++j) pe.mean[j] += x[j];
    }
    const auto n = static_cast<double>(pe.n());
    for (auto& v : pe.mean) v /= n;
    if (pe.n() <= 1) continue;
    for (auto id : pe.member_ids) {
      auto x = dataset.sample(id);
      for (std::size_t j = 0; j < m; ++j) {
        const double d = x[j] - pe.mean[j];
        pe.stddev[j] += d * d;
      }
    }
    for (auto& v : pe.stddev) v = std::sqrt(v / (n - 1.0));
  }
}

SomMap initial_map(const Dataset& dataset, const SomConfig& config) {
  check_trainable(dataset, config);
  SomMap map = empty_map(dataset, config);
  Rng rng(config.seed);
  initialize_weights(map, dataset, canonical_order(dataset), rng);
  assign_samples(map, dataset);
  return map;
}

SomMap train(const Dataset& dataset, const SomConfig& config) {
  check_trainable(dataset, config);
  SomMap map = empty_map(dataset, config);
  Rng rng(config.seed);
  const auto order = canonical_order(dataset);
  initialize_weights(map, dataset, order, rng);

  const std::size_t pe_count = map.pes.size();
  const double fair_share = 1.0 / static_cast<double>(pe_count);
  std::vector<double> win_freq(pe_count, fair_share);

  const std::size_t total_steps = static_cast<std::size_t>(config.epochs) * dataset.size();
  std::size_t step = 0;
  std::vector<std::size_t> presentation = order;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const int hw = config.half_width_at(epoch);
    presentation = order;
    rng.shuffle(presentation);

    for (auto id : presentation) {
      const double t = total_steps > 1 ? static_cast<double>(step) / (total_steps - 1) : 0.0;
      const double lr = config.lr_start + (config.lr_end - config.lr_start) * t;
      auto x = dataset.sample(id);

      // Conscience: rarely-winning PEs get their distance reduced.
      std::size_t winner = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < pe_count; ++i) {
        const double bias = config.conscience_gamma * (fair_share - win_freq[i]);
        const double d = squared_distance(map.pes[i].weight, x) - bias;
        if (d < best) {
          best = d;
          winner = i;
        }
      }
      for (std::size_t i = 0; i < pe_count; ++i)
        win_freq[i] += config.conscience_beta * ((i == winner ? 1.0 : 0.0) - win_freq[i]);

      const int wr = static_cast<int>(winner) / map.cols;
      const int wc = static_cast<int>(winner) % map.cols;
      for (int r = std::max(0, wr - hw); r <= std::min(map.rows - 1, wr + hw); ++r) {
        for (int c = std::max(0, wc - hw); c <= std::min(map.cols - 1, wc + hw); ++c) {
          auto& w = map.pes[map.index(r, c)].weight;
          for (std::size_t j = 0; j < w.size(); ++j) {
            w[j] += lr * (x[j] - w[j]);
            if (!std::isfinite(w[j]))
              throw Error(ErrorCode::Numeric,
                          "non-finite weight during training (divergent learning rate?)");
          }
        }
      }
      ++step;
    }
  }

  assign_samples(map, dataset);
  return map;
}

double quantization_error(const SomMap& map, const Dataset& dataset) {
  if (dataset.dim() != map.dim())
    throw Error(ErrorCode::InvalidArgument, "dataset dimension differs from map dimension");
  if (dataset.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    auto x = dataset.sample(i);
    total += std::sqrt(squared_distance(map.pes[nearest_pe(map, x)].weight, x));
  }
  return total / static_cast<double>(dataset.size());
}

// -- serialization ----------------------------------------------------------

namespace {

json config_to_json(const SomConfig& c) {
  json schedule = json::array();
  for (const auto& s : c.neighborhood)
    schedule.push_back({{"epoch_fraction", s.epoch_fraction}, {"half_width", s.half_width}});
  return {{"rows", c.rows},
          {"cols", c.cols},
          {"epochs", c.epochs},
          {"lr_start", c.lr_start},
          {"lr_end", c.lr_end},
          {"neighborhood", schedule},
          {"conscience_beta", c.conscience_beta},
          {"conscience_gamma", c.conscience_gamma}};
}

SomConfig config_from_json(const json& j, std::uint64_t seed) {
  SomConfig c;
  c.rows = j.at("rows").get<int>();
  c.cols = j.at("cols").get<int>();
  c.epochs = j.at("epochs").get<int>();
  c.lr_start = j.at("lr_start").get<double>();
  c.lr_end = j.at("lr_end").get<double>();
  c.neighborhood.clear();
  for (const auto& s : j.at("neighborhood"))
    c.neighborhood.push_back({s.at("epoch_fraction").get<double>(), s.at("half_width").get<int>()});
  c.conscience_beta = j.at("conscience_beta").get<double>();
  c.conscience_gamma = j.at("conscience_gamma").get<double>();
  c.seed = seed;
  return c;
}

}  // namespace

std::string map_to_json(const SomMap& map) {
  json pes = json::array();
  for (const auto& pe : map.pes) {
    json entry = {{"r", pe.pos.row},         {"c", pe.pos.col}, {"weight", pe.weight},
                  {"member_ids", pe.member_ids}, {"n", pe.n()}};
    entry["mean"] = pe.empty() ? json(nullptr) : json(pe.mean);
    entry["std"] = pe.empty() ? json(nullptr) : json(pe.stddev);
    pes.push_back(std::move(entry));
  }
  json doc = {{"format", "bsom-map"},
              {"format_version", kMapFormatVersion},
              {"provenance", {{"tool", kToolName}, {"version", kVersion}}},
              {"rows", map.rows},
              {"cols", map.cols},
              {"seed", map.config.seed},
              {"config", config_to_json(map.config)},
              {"attributes",
               {{"names", map.attribute_names},
                {"min", map.summary.min},
                {"max", map.summary.max}}},
              {"pes", pes}};
  return doc.dump(1) + "\n";
}

SomMap map_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed map file: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "bsom-map")
      throw Error(ErrorCode::Parse, "not a map file");
    const int version = doc.at("format_version").get<int>();
    if (version != kMapFormatVersion)
      throw Error(ErrorCode::VersionMismatch,
                  "map format version " + std::to_string(version) + " unsupported (expected " +
                      std::to_string(kMapFormatVersion) + ")");
    SomMap map;
    map.rows = doc.at("rows").get<int>();
    map.cols = doc.at("cols").get<int>();
    map.config = config_from_json(doc.at("config"), doc.at("seed").get<std::uint64_t>());
    const auto& attrs = doc.at("attributes");
    map.attribute_names = attrs.at("names").get<std::vector<std::string>>();
    map.summary.min = attrs.at("min").get<std::vector<double>>();
    map.summary.max = attrs.at("max").get<std::vector<double>>();

    const std::size_t m = map.attribute_names.size();
    if (map.rows < 1 || map.cols < 1 || m == 0 || map.summary.min.size() != m ||
        map.summary.max.size() != m)
      throw Error(ErrorCode::Parse, "map header is inconsistent");
    const auto& pes = doc.at("pes");
    if (pes.size() != static_cast<std::size_t>(map.rows) * map.cols)
      throw Error(ErrorCode::Parse, "map has wrong number of PEs");
    map.pes.resize(pes.size());
    std::vector<bool> seen(pes.size(), false);
    for (const auto& entry : pes) {
      const int r = entry.at("r").get<int>();
      const int c = entry.at("c").get<int>();
      if (r < 0 || r >= map.rows || c < 0 || c >= map.cols || seen[map.index(r, c)])
        throw Error(ErrorCode::Parse, "PE grid position invalid or repeated");
      seen[map.index(r, c)] = true;
      PeStats& pe = map.pes[map.index(r, c)];
      pe.pos = {r, c};
      pe.weight = entry.at("weight").get<std::vector<double>>();
      pe.member_ids = entry.at("member_ids").get<std::vector<std::size_t>>();
      if (entry.at("n").get<std::size_t>() != pe.n())
        throw Error(ErrorCode::Parse, "PE population does not match member list");
      if (!pe.empty()) {
        pe.mean = entry.at("mean").get<std::vector<double>>();
        pe.stddev = entry.at("std").get<std::vector<double>>();
      }
      if (pe.weight.size() != m || (!pe.empty() && (pe.mean.size() != m || pe.stddev.size() != m)))
        throw Error(ErrorCode::Parse, "PE vector length differs from attribute count");
    }
    return map;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed map file: ") + e.what());
  }
}

void save_map(const SomMap& map, const std::string& path) {
  detail::write_file_atomic(path, map_to_json(map));
}

SomMap load_map(const std::string& path) { return map_from_json(detail::read_file(path)); }

}  // namespace bsom
