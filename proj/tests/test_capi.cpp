#include <cstdio>
#include <cstring>
#include <string>

#include "bsom/bsom.h"
#include "doctest.h"

namespace {

std::string src(const char* relative) { return std::string(BSOM_SOURCE_DIR) + "/" + relative; }

std::string take(char* s) {
  std::string out = s ? s : "";
  bsom_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(bsom_version()) == "0.1.0");
  CHECK(std::string(bsom_status_name(BSOM_OK)) == "ok");
  CHECK(std::string(bsom_status_name(BSOM_ERR_TOO_LARGE)).size() > 0);
}

TEST_CASE("errors come back as status codes with a message") {
  bsom_dataset* d = nullptr;
  CHECK(bsom_dataset_load_csv("/nonexistent.csv", nullptr, &d) == BSOM_ERR_IO);
  CHECK(d == nullptr);
  CHECK(std::strlen(bsom_last_error()) > 0);
  CHECK(bsom_dataset_load_csv(nullptr, nullptr, &d) == BSOM_ERR_INVALID_ARGUMENT);

  bsom_cost_settings s;
  bsom_cost_settings_default(&s);
  CHECK(bsom_cost_settings_set(&s, "no_such_key", "1") == BSOM_ERR_INVALID_ARGUMENT);
  CHECK(bsom_cost_settings_set(&s, "range_rule", "sideways") != BSOM_OK);
  CHECK(bsom_cost_settings_set(&s, "f_R", "2.5") == BSOM_OK);
  CHECK(s.f_range == 2.5);

  bsom_map* m = nullptr;
  CHECK(bsom_map_load(src("tests/fixtures/iris_5x5_seed1.json").c_str(), &m) == BSOM_OK);
  bsom_partition* p = nullptr;
  bsom_cost_settings_default(&s);
  CHECK(bsom_partition_exhaustive(m, &s, 9, &p, nullptr) == BSOM_ERR_TOO_LARGE);
  CHECK(p == nullptr);
  bsom_map_free(m);
}

TEST_CASE("end to end through the C interface") {
  bsom_dataset* d = nullptr;
  REQUIRE(bsom_dataset_load_csv(src("data/iris.csv").c_str(), "class", &d) == BSOM_OK);
  CHECK(bsom_dataset_size(d) == 150);
  CHECK(bsom_dataset_dim(d) == 4);
  CHECK(bsom_dataset_class_count(d) == 3);

  bsom_som_config cfg;
  bsom_som_config_default(&cfg);
  bsom_map* trained = nullptr;
  REQUIRE(bsom_train(d, &cfg, &trained) == BSOM_OK);
  bsom_map* fixture = nullptr;
  REQUIRE(bsom_map_load(src("tests/fixtures/iris_5x5_seed1.json").c_str(), &fixture) == BSOM_OK);
  CHECK(bsom_map_rows(trained) == 5);
  CHECK(bsom_map_cols(trained) == 5);
  std::size_t total = 0, empty = 0;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) {
      std::size_t a = 0, b = 0;
      CHECK(bsom_map_population(trained, r, c, &a) == BSOM_OK);
      CHECK(bsom_map_population(fixture, r, c, &b) == BSOM_OK);
      CHECK(a == b);
      total += a;
      empty += a == 0;
    }
  CHECK(total == 150);

  bsom_cost_settings s;
  bsom_cost_settings_default(&s);
  bsom_partition* bayes = nullptr;
  REQUIRE(bsom_partition_som(fixture, &s, &bayes) == BSOM_OK);
  double cost = 0.0;
  CHECK(bsom_partition_evaluate_cost(bayes, fixture, &s, &cost) == BSOM_OK);
  CHECK(cost == doctest::Approx(bsom_partition_cost(bayes)).epsilon(1e-12));

  bsom_partition* oracle = nullptr;
  REQUIRE(bsom_partition_oracle(fixture, d, &oracle) == BSOM_OK);
  bsom_eval_summary summary{};
  char* report = nullptr;
  REQUIRE(bsom_evaluate(oracle, fixture, d, BSOM_FORMAT_JSON, &summary, &report) == BSOM_OK);
  CHECK(summary.n_samples == 150);
  CHECK(summary.accuracy >= 0.95);
  CHECK(take(report).find("\"kappa\"") != std::string::npos);

  bsom_partition* threshold = nullptr;
  REQUIRE(bsom_partition_threshold(fixture, 1e9, 0, &threshold) == BSOM_OK);
  // Edges at empty PEs are always cut; the fixture's empty PEs each end up alone.
  CHECK(bsom_partition_block_count(threshold) == 1 + static_cast<int>(empty));

  const std::string path = "capi_partition.json";
  REQUIRE(bsom_partition_save(bayes, path.c_str()) == BSOM_OK);
  bsom_partition* back = nullptr;
  REQUIRE(bsom_partition_load(path.c_str(), &back) == BSOM_OK);
  CHECK(bsom_partition_block_count(back) == bsom_partition_block_count(bayes));
  int labels_a[25], labels_b[25];
  CHECK(bsom_partition_block_of(back, labels_a, 25) == BSOM_OK);
  CHECK(bsom_partition_block_of(bayes, labels_b, 25) == BSOM_OK);
  CHECK(std::memcmp(labels_a, labels_b, sizeof labels_a) == 0);
  CHECK(bsom_partition_block_of(bayes, labels_b, 24) == BSOM_ERR_INVALID_ARGUMENT);
  std::remove(path.c_str());

  char* text = nullptr;
  REQUIRE(bsom_render_map(fixture, bayes, d, &text) == BSOM_OK);
  CHECK(take(text).rfind("populations: (Iris-setosa, Iris-versicolor, Iris-virginica)\n", 0) == 0);

  bsom_sweep_spec spec;
  bsom_sweep_spec_default(&spec);
  spec.points = 5;
  spec.lo_exp = -1.0;
  spec.hi_exp = 1.0;
  char* csv = nullptr;
  double span_r = 0.0, span_s = 0.0;
  REQUIRE(bsom_sweep(fixture, &s, &spec, &csv, &span_r, &span_s) == BSOM_OK);
  CHECK(take(csv).find("f_R,f_sigma") != std::string::npos);
  CHECK(span_r >= 1.0);
  CHECK(span_s >= 1.0);

  for (auto* p : {bayes, oracle, threshold, back}) bsom_partition_free(p);
  bsom_map_free(trained);
  bsom_map_free(fixture);
  bsom_dataset_free(d);
  bsom_partition_free(nullptr);
}
