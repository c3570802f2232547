#include "bsom/bsom.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "bsom/baselines.hpp"
#include "bsom/error.hpp"
#include "bsom/evaluate.hpp"
#include "bsom/io.hpp"
#include "bsom/partition.hpp"
#include "bsom/render.hpp"
#include "bsom/sensitivity.hpp"
#include "bsom/som.hpp"
#include "bsom/version.hpp"

struct bsom_dataset {
  bsom::Dataset value;
};

struct bsom_map {
  bsom::SomMap value;
};

struct bsom_partition {
  bsom::PartitionFile value;
};

namespace {

thread_local std::string g_last_error;

bsom_status to_status(bsom::ErrorCode code) {
  switch (code) {
    case bsom::ErrorCode::InvalidArgument: return BSOM_ERR_INVALID_ARGUMENT;
    case bsom::ErrorCode::Io: return BSOM_ERR_IO;
    case bsom::ErrorCode::Parse: return BSOM_ERR_PARSE;
    case bsom::ErrorCode::Numeric: return BSOM_ERR_NUMERIC;
    case bsom::ErrorCode::Degenerate: return BSOM_ERR_DEGENERATE;
    case bsom::ErrorCode::TooLarge: return BSOM_ERR_TOO_LARGE;
    case bsom::ErrorCode::VersionMismatch: return BSOM_ERR_VERSION_MISMATCH;
  }
  return BSOM_ERR_INTERNAL;
}

template <class F>
bsom_status guarded(F&& body) {
  try {
    body();
    return BSOM_OK;
  } catch (const bsom::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return BSOM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BSOM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return BSOM_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw bsom::Error(bsom::ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

bsom::SomConfig from_c(const bsom_som_config& c) {
  bsom::SomConfig out;
  out.rows = c.rows;
  out.cols = c.cols;
  out.epochs = c.epochs;
  out.lr_start = c.lr_start;
  out.lr_end = c.lr_end;
  require(c.neighborhood_steps >= 1 && c.neighborhood_steps <= BSOM_MAX_NEIGHBORHOOD_STEPS,
          "neighborhood_steps out of range");
  out.neighborhood.clear();
  for (size_t k = 0; k < c.neighborhood_steps; ++k)
    out.neighborhood.push_back({c.neighborhood_fraction[k], c.neighborhood_half_width[k]});
  out.conscience_beta = c.conscience_beta;
  out.conscience_gamma = c.conscience_gamma;
  out.seed = c.seed;
  return out;
}

bsom::CostSettings from_c(const bsom_cost_settings& c) {
  bsom::CostSettings s;
  require(c.range_rule == BSOM_RANGE_TWO_SPAN || c.range_rule == BSOM_RANGE_TWO_MAX,
          "unknown range rule");
  require(c.range_exponent == BSOM_EXPONENT_PER_BLOCK || c.range_exponent == BSOM_EXPONENT_PER_PE,
          "unknown range exponent");
  s.range_rule = c.range_rule == BSOM_RANGE_TWO_SPAN ? bsom::RangeRule::TwoSpan : bsom::RangeRule::TwoMax;
  s.range_exponent = c.range_exponent == BSOM_EXPONENT_PER_BLOCK ? bsom::RangeExponent::PerBlock
                                                                 : bsom::RangeExponent::PerPe;
  switch (c.scale_rule) {
    case BSOM_SCALE_SQRT_N: s.scale_rule = bsom::ScaleRule::SqrtN; break;
    case BSOM_SCALE_UNIT: s.scale_rule = bsom::ScaleRule::Unit; break;
    case BSOM_SCALE_LINEAR_N: s.scale_rule = bsom::ScaleRule::LinearN; break;
    default: require(false, "unknown scale rule");
  }
  s.sigma_const = c.sigma_const;
  s.sigma_floor_frac = c.sigma_floor_frac;
  s.f_range = c.f_range;
  s.f_sigma = c.f_sigma;
  s.validate();
  return s;
}

double parse_double(const char* key, const char* value) {
  char* end = nullptr;
  const double v = std::strtod(value, &end);
  if (end == value || *end != '\0')
    throw bsom::Error(bsom::ErrorCode::InvalidArgument,
                      std::string("value for ") + key + " is not a number: '" + value + "'");
  return v;
}

}  // namespace

extern "C" {

const char* bsom_version(void) { return bsom::kVersion; }

const char* bsom_last_error(void) { return g_last_error.c_str(); }

const char* bsom_status_name(bsom_status status) {
  switch (status) {
    case BSOM_OK: return "ok";
    case BSOM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BSOM_ERR_IO: return "i/o error";
    case BSOM_ERR_PARSE: return "parse error";
    case BSOM_ERR_NUMERIC: return "numeric error";
    case BSOM_ERR_DEGENERATE: return "degenerate input";
    case BSOM_ERR_TOO_LARGE: return "input too large";
    case BSOM_ERR_VERSION_MISMATCH: return "version mismatch";
    case BSOM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void bsom_string_free(char* s) { std::free(s); }

bsom_status bsom_write_text_file(const char* path, const char* content) {
  return guarded([&] {
    require(path && content, "null argument");
    bsom::write_text_file(path, content);
  });
}

// -- datasets ---------------------------------------------------------------

bsom_status bsom_dataset_load_csv(const char* path, const char* label_column, bsom_dataset** out) {
  return guarded([&] {
    require(path && out, "null argument");
    std::optional<std::string> label;
    if (label_column) label = label_column;
    *out = new bsom_dataset{bsom::load_csv(path, label)};
  });
}

void bsom_dataset_free(bsom_dataset* dataset) { delete dataset; }
size_t bsom_dataset_size(const bsom_dataset* d) { return d ? d->value.size() : 0; }
size_t bsom_dataset_dim(const bsom_dataset* d) { return d ? d->value.dim() : 0; }
int bsom_dataset_has_labels(const bsom_dataset* d) { return d && d->value.has_labels() ? 1 : 0; }
size_t bsom_dataset_class_count(const bsom_dataset* d) { return d ? d->value.class_count() : 0; }

bsom_status bsom_dataset_summary(const bsom_dataset* dataset, double* min_out, double* max_out) {
  return guarded([&] {
    require(dataset && min_out && max_out, "null argument");
    const auto s = bsom::summarize(dataset->value);
    std::copy(s.min.begin(), s.min.end(), min_out);
    std::copy(s.max.begin(), s.max.end(), max_out);
  });
}

// -- maps -------------------------------------------------------------------

void bsom_som_config_default(bsom_som_config* config) {
  if (!config) return;
  const bsom::SomConfig d;
  *config = bsom_som_config{};
  config->rows = d.rows;
  config->cols = d.cols;
  config->epochs = d.epochs;
  config->lr_start = d.lr_start;
  config->lr_end = d.lr_end;
  config->neighborhood_steps = d.neighborhood.size();
  for (size_t k = 0; k < d.neighborhood.size(); ++k) {
    config->neighborhood_fraction[k] = d.neighborhood[k].epoch_fraction;
    config->neighborhood_half_width[k] = d.neighborhood[k].half_width;
  }
  config->conscience_beta = d.conscience_beta;
  config->conscience_gamma = d.conscience_gamma;
  config->seed = d.seed;
}

bsom_status bsom_train(const bsom_dataset* dataset, const bsom_som_config* config, bsom_map** out) {
  return guarded([&] {
    require(dataset && config && out, "null argument");
    *out = new bsom_map{bsom::train(dataset->value, from_c(*config))};
  });
}

bsom_status bsom_map_load(const char* path, bsom_map** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new bsom_map{bsom::load_map(path)};
  });
}

bsom_status bsom_map_save(const bsom_map* map, const char* path) {
  return guarded([&] {
    require(map && path, "null argument");
    bsom::save_map(map->value, path);
  });
}

void bsom_map_free(bsom_map* map) { delete map; }
int bsom_map_rows(const bsom_map* map) { return map ? map->value.rows : 0; }
int bsom_map_cols(const bsom_map* map) { return map ? map->value.cols : 0; }

bsom_status bsom_map_population(const bsom_map* map, int row, int col, size_t* out) {
  return guarded([&] {
    require(map && out, "null argument");
    require(row >= 0 && row < map->value.rows && col >= 0 && col < map->value.cols,
            "PE position outside grid");
    *out = map->value.at(row, col).n();
  });
}

bsom_status bsom_map_quantization_error(const bsom_map* map, const bsom_dataset* dataset,
                                        double* out) {
  return guarded([&] {
    require(map && dataset && out, "null argument");
    *out = bsom::quantization_error(map->value, dataset->value);
  });
}

// -- cost settings ----------------------------------------------------------

void bsom_cost_settings_default(bsom_cost_settings* settings) {
  if (!settings) return;
  const bsom::CostSettings d;
  settings->range_rule = d.range_rule == bsom::RangeRule::TwoSpan ? BSOM_RANGE_TWO_SPAN : BSOM_RANGE_TWO_MAX;
  settings->range_exponent = d.range_exponent == bsom::RangeExponent::PerBlock
                                 ? BSOM_EXPONENT_PER_BLOCK
                                 : BSOM_EXPONENT_PER_PE;
  settings->scale_rule = BSOM_SCALE_SQRT_N;
  settings->sigma_const = d.sigma_const;
  settings->sigma_floor_frac = d.sigma_floor_frac;
  settings->f_range = d.f_range;
  settings->f_sigma = d.f_sigma;
}

bsom_status bsom_cost_settings_set(bsom_cost_settings* settings, const char* key, const char* value) {
  return guarded([&] {
    require(settings && key && value, "null argument");
    const std::string k = key;
    if (k == "range_rule") {
      settings->range_rule = bsom::parse_range_rule(value) == bsom::RangeRule::TwoSpan
                                 ? BSOM_RANGE_TWO_SPAN
                                 : BSOM_RANGE_TWO_MAX;
    } else if (k == "range_exponent") {
      settings->range_exponent = bsom::parse_range_exponent(value) == bsom::RangeExponent::PerBlock
                                     ? BSOM_EXPONENT_PER_BLOCK
                                     : BSOM_EXPONENT_PER_PE;
    } else if (k == "n_scale_rule") {
      switch (bsom::parse_scale_rule(value)) {
        case bsom::ScaleRule::SqrtN: settings->scale_rule = BSOM_SCALE_SQRT_N; break;
        case bsom::ScaleRule::Unit: settings->scale_rule = BSOM_SCALE_UNIT; break;
        case bsom::ScaleRule::LinearN: settings->scale_rule = BSOM_SCALE_LINEAR_N; break;
      }
    } else if (k == "sigma_const") {
      settings->sigma_const = parse_double(key, value);
    } else if (k == "sigma_floor_frac") {
      settings->sigma_floor_frac = parse_double(key, value);
    } else if (k == "f_R") {
      settings->f_range = parse_double(key, value);
    } else if (k == "f_sigma") {
      settings->f_sigma = parse_double(key, value);
    } else {
      throw bsom::Error(bsom::ErrorCode::InvalidArgument, "unknown cost key '" + k + "'");
    }
  });
}

// -- partitions -------------------------------------------------------------

bsom_status bsom_partition_som(const bsom_map* map, const bsom_cost_settings* settings,
                               bsom_partition** out) {
  return guarded([&] {
    require(map && settings && out, "null argument");
    const auto params = bsom::resolve_cost_params(map->value.summary, from_c(*settings));
    auto p = bsom::partition_som(map->value, params);
    *out = new bsom_partition{{std::move(p), "bayes", bsom::cost_params_to_json(params)}};
  });
}

bsom_status bsom_partition_exhaustive(const bsom_map* map, const bsom_cost_settings* settings,
                                      int cell_limit, bsom_partition** out, size_t* candidates) {
  return guarded([&] {
    require(map && settings && out, "null argument");
    const auto params = bsom::resolve_cost_params(map->value.summary, from_c(*settings));
    auto r = bsom::exhaustive_partition(map->value, params, cell_limit);
    auto echo = bsom::cost_params_to_json(params);
    echo["cell_limit"] = cell_limit;
    if (candidates) *candidates = r.candidates;
    *out = new bsom_partition{{std::move(r.best), "exhaustive", std::move(echo)}};
  });
}

bsom_status bsom_partition_threshold(const bsom_map* map, double threshold, int normalize,
                                     bsom_partition** out) {
  return guarded([&] {
    require(map && out, "null argument");
    auto p = bsom::threshold_partition(map->value, threshold, normalize != 0);
    nlohmann::json echo = {{"threshold", threshold}, {"normalize", normalize != 0}};
    *out = new bsom_partition{{std::move(p), "threshold", std::move(echo)}};
  });
}

bsom_status bsom_partition_oracle(const bsom_map* map, const bsom_dataset* dataset,
                                  bsom_partition** out) {
  return guarded([&] {
    require(map && dataset && out, "null argument");
    const auto& d = dataset->value;
    auto p = bsom::oracle_partition(map->value, d.labels(), d.class_count());
    nlohmann::json echo = {{"class_names", d.class_names()}};
    *out = new bsom_partition{{std::move(p), "oracle", std::move(echo)}};
  });
}

bsom_status bsom_partition_load(const char* path, bsom_partition** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new bsom_partition{bsom::load_partition(path)};
  });
}

bsom_status bsom_partition_save(const bsom_partition* partition, const char* path) {
  return guarded([&] {
    require(partition && path, "null argument");
    bsom::save_partition(partition->value, path);
  });
}

void bsom_partition_free(bsom_partition* partition) { delete partition; }

int bsom_partition_block_count(const bsom_partition* p) {
  return p ? p->value.partition.block_count : 0;
}

double bsom_partition_cost(const bsom_partition* p) { return p ? p->value.partition.cost : 0.0; }

bsom_status bsom_partition_block_of(const bsom_partition* partition, int* out, size_t len) {
  return guarded([&] {
    require(partition && out, "null argument");
    const auto& b = partition->value.partition.block_of;
    require(len == b.size(), "output length must equal rows * cols");
    std::copy(b.begin(), b.end(), out);
  });
}

bsom_status bsom_partition_evaluate_cost(const bsom_partition* partition, const bsom_map* map,
                                         const bsom_cost_settings* settings, double* out) {
  return guarded([&] {
    require(partition && map && settings && out, "null argument");
    const auto params = bsom::resolve_cost_params(map->value.summary, from_c(*settings));
    *out = bsom::partition_cost(partition->value.partition, map->value, params);
  });
}

bsom_status bsom_boundaries_csv(const bsom_map* map, int normalize, char** out) {
  return guarded([&] {
    require(map && out, "null argument");
    *out = dup_string(bsom::umatrix_boundaries(map->value, normalize != 0).to_csv());
  });
}

// -- evaluation -------------------------------------------------------------

bsom_status bsom_evaluate(const bsom_partition* partition, const bsom_map* map,
                          const bsom_dataset* dataset, bsom_format format,
                          bsom_eval_summary* summary, char** report) {
  return guarded([&] {
    require(partition && map && dataset, "null argument");
    const auto r = bsom::score(partition->value.partition, map->value, dataset->value);
    if (summary) {
      summary->n_samples = r.n_samples;
      summary->correct = r.correct();
      summary->blocks = static_cast<int>(r.block_labels.size());
      summary->accuracy = r.p_o;
      summary->p_e = r.p_e;
      summary->kappa = r.kappa;
    }
    if (report)
      *report = dup_string(format == BSOM_FORMAT_JSON ? bsom::report_to_json(r) + "\n"
                                                      : bsom::render_report(r));
  });
}

// -- sensitivity ------------------------------------------------------------

void bsom_sweep_spec_default(bsom_sweep_spec* spec) {
  if (!spec) return;
  spec->points = 13;
  spec->lo_exp = -1.5;
  spec->hi_exp = 1.5;
  spec->threads = 1;
}

bsom_status bsom_sweep(const bsom_map* map, const bsom_cost_settings* base,
                       const bsom_sweep_spec* spec, char** csv, double* span_range,
                       double* span_sigma) {
  return guarded([&] {
    require(map && base && spec, "null argument");
    bsom::SweepSpec s;
    s.base = from_c(*base);
    s.f_range = bsom::SweepSpec::log_grid(spec->points, spec->lo_exp, spec->hi_exp);
    s.f_sigma = s.f_range;
    s.threads = spec->threads;
    const auto stability = bsom::sweep(map->value, s);
    const auto span = bsom::stable_region(stability);
    if (span_range) *span_range = span.f_range_span;
    if (span_sigma) *span_sigma = span.f_sigma_span;
    if (csv) *csv = dup_string(stability.to_csv());
  });
}

// -- rendering --------------------------------------------------------------

bsom_status bsom_render_map(const bsom_map* map, const bsom_partition* partition,
                            const bsom_dataset* dataset, char** out) {
  return guarded([&] {
    require(map && out, "null argument");
    *out = dup_string(bsom::render_map(map->value, partition ? &partition->value.partition : nullptr,
                                       dataset ? &dataset->value : nullptr));
  });
}

}  // extern "C"
