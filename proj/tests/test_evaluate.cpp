#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bsom/error.hpp"
#include "bsom/evaluate.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bsom;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Golden files are rewritten instead of compared when BSOM_UPDATE_GOLDEN is set.
void check_golden(const std::string& relative, const std::string& actual) {
  const auto path = testing::source_path(relative);
  if (std::getenv("BSOM_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << actual;
    return;
  }
  CHECK(actual == read_text(path));
}

}  // namespace

TEST_CASE("kappa hand case: balanced classes, 120 of 150, uniform marginals") {
  const auto r = agreement_from_confusion({{40, 5, 5}, {5, 40, 5}, {5, 5, 40}});
  CHECK(r.n_samples == 150);
  CHECK(r.correct() == 120);
  CHECK(std::fabs(r.p_o - 0.8) <= 1e-15);
  CHECK(std::fabs(r.p_e - 1.0 / 3.0) <= 1e-15);
  CHECK(std::fabs(r.kappa - 0.7) <= 1e-12);
}

TEST_CASE("perfect agreement") {
  const auto r = agreement_from_confusion({{10, 0}, {0, 30}});
  CHECK(r.p_o == 1.0);
  CHECK(r.kappa == 1.0);
  CHECK(render_report(r).find("kappa: 1.000000") != std::string::npos);
  // Single-class data: chance agreement is 1 and kappa is defined as 1.
  const auto single = agreement_from_confusion({{5}});
  CHECK(single.p_e == 1.0);
  CHECK(single.kappa == 1.0);
}

TEST_CASE("empty class row renders as zeros") {
  auto r = agreement_from_confusion({{10, 0, 0}, {0, 0, 0}, {2, 0, 8}});
  r.class_names = {"a", "b", "c"};
  CHECK(std::isfinite(r.kappa));
  const auto text = render_report(r);
  CHECK(text.find("nan") == std::string::npos);
}

TEST_CASE("kappa invariants on random confusion matrices") {
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> cell(0, 30);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + trial % 4;
    std::vector<std::vector<std::size_t>> m(k, std::vector<std::size_t>(k));
    for (auto& row : m)
      for (auto& v : row) v = cell(gen);
    m[0][0] += 1;
    const auto r = agreement_from_confusion(m);
    CHECK(r.kappa <= r.p_o + 1e-15);
    CHECK(r.p_e >= 0.0);
    CHECK(r.p_e <= 1.0);
    CHECK(r.kappa == doctest::Approx((r.p_o - r.p_e) / (1.0 - r.p_e)).epsilon(1e-12));

    // Relabel classes consistently in truth and prediction.
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) perm[i] = (i + 1) % k;
    auto pm = m;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) pm[perm[a]][perm[b]] = m[a][b];
    const auto rp = agreement_from_confusion(pm);
    CHECK(rp.p_o == doctest::Approx(r.p_o).epsilon(1e-15));
    CHECK(rp.p_e == doctest::Approx(r.p_e).epsilon(1e-14));
    CHECK(rp.kappa == doctest::Approx(r.kappa).epsilon(1e-13));
  }
}

TEST_CASE("score on a synthetic map") {
  // Three PEs in a row, four samples each.
  const auto map = testing::synthetic_map(1, 3, {{1.0}, {2.0}, {3.0}});
  const std::vector<ClassId> labels{0, 0, 0, 0, 1, 1, 1, 0, 1, 1, 1, 1};
  const std::vector<std::string> names{"x", "y"};

  const auto exact = score(make_partition(1, 3, {0, 1, 1}), map, labels, names);
  CHECK(exact.block_labels == std::vector<ClassId>{0, 1});
  CHECK(exact.correct() == 11);
  CHECK(exact.confusion == std::vector<std::vector<std::size_t>>{{4, 1}, {0, 7}});

  // Splitting a block whose parts share a majority label changes nothing.
  const auto split = score(make_partition(1, 3, {0, 1, 2}), map, labels, names);
  CHECK(split.confusion == exact.confusion);
  CHECK(split.kappa == exact.kappa);
  CHECK(split.p_e == exact.p_e);

  // Block majority ties go to the lowest class id.
  const std::vector<ClassId> tied{0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 1, 1};
  CHECK(score(make_partition(1, 3, {0, 0, 0}), map, tied, names).block_labels == std::vector<ClassId>{0});

  CHECK_THROWS_AS(score(Partition{}, map, labels, names), Error);
  const Dataset unlabeled({"v"}, std::vector<double>(12, 0.0));
  CHECK_THROWS_AS(score(make_partition(1, 3, {0, 1, 1}), map, unlabeled), Error);
}

TEST_CASE("report golden text and json footer") {
  auto r = agreement_from_confusion({{45, 5, 0}, {3, 40, 7}, {0, 0, 50}});
  r.class_names = {"setosa", "versicolor", "virginica"};
  r.block_labels = {0, 1, -1, 2};
  const auto text = render_report(r);
  check_golden("tests/fixtures/report_3x3.txt", text);

  const auto footer = text.substr(text.find("# data: ") + 8);
  const auto parsed = nlohmann::json::parse(footer);
  CHECK(parsed.at("kappa").get<double>() == r.kappa);
  CHECK(parsed.at("p_e").get<double>() == r.p_e);
  CHECK(parsed.at("confusion").get<std::vector<std::vector<std::size_t>>>() == r.confusion);
  CHECK(nlohmann::json::parse(report_to_json(r)) == parsed);
}
