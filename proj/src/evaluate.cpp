#include "bsom/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bsom/error.hpp"

namespace bsom {

std::size_t EvalReport::correct() const {
  std::size_t t = 0;
  for (std::size_t c = 0; c < confusion.size(); ++c) t += confusion[c][c];
  return t;
}

EvalReport agreement_from_confusion(std::vector<std::vector<std::size_t>> confusion) {
  EvalReport r;
  const std::size_t k = confusion.size();
  for (const auto& row : confusion)
    if (row.size() != k) throw Error(ErrorCode::InvalidArgument, "confusion matrix is not square");
  r.confusion = std::move(confusion);

  std::vector<std::size_t> row_tot(k, 0), col_tot(k, 0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      row_tot[a] += r.confusion[a][b];
      col_tot[b] += r.confusion[a][b];
      r.n_samples += r.confusion[a][b];
    }
  if (r.n_samples == 0) throw Error(ErrorCode::InvalidArgument, "no samples to score");

  const auto n = static_cast<double>(r.n_samples);
  r.p_o = static_cast<double>(r.correct()) / n;
  double pe = 0.0;
  for (std::size_t c = 0; c < k; ++c)
    pe += (static_cast<double>(row_tot[c]) / n) * (static_cast<double>(col_tot[c]) / n);
  r.p_e = pe;
  // Chance agreement of 1 means one class everywhere, predicted everywhere.
  r.kappa = r.p_e < 1.0 ? (r.p_o - r.p_e) / (1.0 - r.p_e) : 1.0;
  return r;
}

EvalReport score(const Partition& partition, const SomMap& map, const std::vector<ClassId>& labels,
                 const std::vector<std::string>& class_names) {
  if (partition.block_count < 1 || partition.block_of.empty())
    throw Error(ErrorCode::InvalidArgument, "empty partition");
  if (partition.rows != map.rows || partition.cols != map.cols)
    throw Error(ErrorCode::InvalidArgument, "partition shape differs from map shape");
  if (labels.empty() || class_names.empty())
    throw Error(ErrorCode::InvalidArgument, "scoring needs a labeled dataset");
  const std::size_t k = class_names.size();

  std::vector<std::vector<std::size_t>> block_counts(partition.block_count,
                                                     std::vector<std::size_t>(k, 0));
  std::size_t members = 0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (auto id : map.pes[i].member_ids) {
      if (id >= labels.size())
        throw Error(ErrorCode::InvalidArgument, "labels do not cover every map member");
      const ClassId c = labels[id];
      if (c < 0 || static_cast<std::size_t>(c) >= k)
        throw Error(ErrorCode::InvalidArgument, "class id out of range");
      ++block_counts[partition.block_of[i]][c];
      ++members;
    }
  }
  if (members != labels.size())
    throw Error(ErrorCode::InvalidArgument, "map members do not match the labeled dataset");

  std::vector<ClassId> block_labels(partition.block_count, -1);
  for (std::size_t b = 0; b < block_counts.size(); ++b) {
    const auto& cnt = block_counts[b];
    if (std::all_of(cnt.begin(), cnt.end(), [](std::size_t v) { return v == 0; })) continue;
    block_labels[b] = static_cast<ClassId>(std::max_element(cnt.begin(), cnt.end()) - cnt.begin());
  }

  std::vector<std::vector<std::size_t>> confusion(k, std::vector<std::size_t>(k, 0));
  for (std::size_t b = 0; b < block_counts.size(); ++b)
    for (std::size_t c = 0; c < k; ++c)
      if (block_counts[b][c] > 0) confusion[c][block_labels[b]] += block_counts[b][c];

  EvalReport r = agreement_from_confusion(std::move(confusion));
  r.class_names = class_names;
  r.block_labels = std::move(block_labels);
  return r;
}

EvalReport score(const Partition& partition, const SomMap& map, const Dataset& dataset) {
  return score(partition, map, dataset.labels(), dataset.class_names());
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j = {{"n_samples", report.n_samples},
                      {"correct", report.correct()},
                      {"accuracy", report.p_o},
                      {"p_o", report.p_o},
                      {"p_e", report.p_e},
                      {"kappa", report.kappa},
                      {"class_names", report.class_names},
                      {"block_labels", report.block_labels},
                      {"confusion", report.confusion}};
  return j.dump();
}

std::string render_report(const EvalReport& report) {
  auto fixed = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "samples: " << report.n_samples << '\n';
  out << "correct: " << report.correct() << '\n';
  out << "blocks: " << report.block_labels.size() << '\n';
  out << "accuracy: " << fixed(report.p_o) << '\n';
  out << "p_e: " << fixed(report.p_e) << '\n';
  out << "kappa: " << fixed(report.kappa) << '\n';

  std::vector<std::string> names = report.class_names;
  if (names.size() < report.confusion.size())
    for (std::size_t c = names.size(); c < report.confusion.size(); ++c)
      names.push_back("class" + std::to_string(c));
  std::size_t width = 6;
  for (const auto& n : names) width = std::max(width, n.size());
  auto pad = [&](const std::string& s) { return s + std::string(width - std::min(width, s.size()), ' '); };
  auto lpad = [&](const std::string& s) { return std::string(width - std::min(width, s.size()), ' ') + s; };

  out << "confusion (rows = truth, cols = predicted):\n";
  out << pad("");
  for (const auto& n : names) out << "  " << lpad(n);
  out << '\n';
  for (std::size_t a = 0; a < report.confusion.size(); ++a) {
    out << pad(names[a]);
    for (std::size_t b = 0; b < report.confusion[a].size(); ++b)
      out << "  " << lpad(std::to_string(report.confusion[a][b]));
    out << '\n';
  }
  out << "block labels:";
  for (std::size_t b = 0; b < report.block_labels.size(); ++b) {
    const ClassId c = report.block_labels[b];
    out << ' ' << b << '=' << (c < 0 ? std::string("-") : names[c]);
  }
  out << '\n';
  out << "# data: " << report_to_json(report) << '\n';
  return out.str();
}

}  // namespace bsom
