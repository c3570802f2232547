#include "bsom/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "bsom/error.hpp"

namespace bsom {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_real(std::string_view cell, const std::string& origin, std::size_t line_no) {
  double value = 0.0;
  auto first = cell.data();
  auto last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorCode::Parse, origin + ":" + std::to_string(line_no) +
                                      ": non-numeric attribute cell '" +
                                      std::string(cell) + "'");
  }
  return value;
}

bool looks_numeric(std::string_view cell) {
  double value = 0.0;
  auto first = cell.data();
  auto last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return !cell.empty() && ec != std::errc::invalid_argument && ptr == last;
}

}  // namespace

Dataset::Dataset(std::vector<std::string> attribute_names, std::vector<double> values)
    : attribute_names_(std::move(attribute_names)), values_(std::move(values)) {
  if (attribute_names_.empty())
    throw Error(ErrorCode::InvalidArgument, "dataset needs at least one attribute");
  if (values_.size() % attribute_names_.size() != 0)
    throw Error(ErrorCode::InvalidArgument, "ragged sample matrix");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite attribute value");
}

Dataset::Dataset(std::vector<std::string> attribute_names, std::vector<double> values,
                 std::vector<std::string> class_names, std::vector<ClassId> labels)
    : Dataset(std::move(attribute_names), std::move(values)) {
  if (labels.size() != size())
    throw Error(ErrorCode::InvalidArgument, "label count differs from sample count");
  for (ClassId c : labels)
    if (c < 0 || static_cast<std::size_t>(c) >= class_names.size())
      throw Error(ErrorCode::InvalidArgument, "class id out of range");
  class_names_ = std::move(class_names);
  labels_ = std::move(labels);
}

const std::vector<ClassId>& Dataset::labels() const {
  if (!labels_) throw Error(ErrorCode::InvalidArgument, "dataset has no labels");
  return *labels_;
}

Dataset parse_csv(const std::string& text, const std::optional<std::string>& label_column,
                  const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    for (auto f : split_fields(line)) header.emplace_back(f);
    break;
  }
  if (header.empty()) throw Error(ErrorCode::Parse, origin + ": missing header row");

  std::optional<std::size_t> label_index;
  if (label_column) {
    auto it = std::find(header.begin(), header.end(), *label_column);
    if (it == header.end())
      throw Error(ErrorCode::InvalidArgument,
                  origin + ": label column '" + *label_column + "' absent");
    label_index = static_cast<std::size_t>(it - header.begin());
  }

  struct Row {
    std::size_t line_no;
    std::vector<std::string> fields;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw Error(ErrorCode::Parse, origin + ":" + std::to_string(line_no) + ": expected " +
                                        std::to_string(header.size()) + " fields, found " +
                                        std::to_string(fields.size()));
    rows.push_back({line_no, {fields.begin(), fields.end()}});
  }

  // Without a named label column, columns holding only text (such as an
  // unused class column) are skipped; a column mixing text and numbers is
  // still a parse error.
  std::vector<bool> skip(header.size(), false);
  if (!label_column && !rows.empty()) {
    for (std::size_t k = 0; k < header.size(); ++k)
      skip[k] = std::all_of(rows.begin(), rows.end(),
                            [&](const Row& r) { return !looks_numeric(r.fields[k]); });
  }

  std::vector<std::string> attribute_names;
  for (std::size_t k = 0; k < header.size(); ++k)
    if (k != label_index && !skip[k]) attribute_names.push_back(header[k]);
  if (attribute_names.empty())
    throw Error(ErrorCode::InvalidArgument, origin + ": no attribute columns");

  std::vector<double> values;
  std::vector<std::string> raw_labels;
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.fields.size(); ++k) {
      if (k == label_index)
        raw_labels.push_back(row.fields[k]);
      else if (!skip[k])
        values.push_back(parse_real(row.fields[k], origin, row.line_no));
    }
  }
  if (values.empty()) throw Error(ErrorCode::Parse, origin + ": zero data rows");

  if (!label_index) return Dataset(std::move(attribute_names), std::move(values));

  std::vector<std::string> class_names(raw_labels);
  std::sort(class_names.begin(), class_names.end());
  class_names.erase(std::unique(class_names.begin(), class_names.end()), class_names.end());
  std::vector<ClassId> labels;
  labels.reserve(raw_labels.size());
  for (const auto& l : raw_labels)
    labels.push_back(static_cast<ClassId>(
        std::lower_bound(class_names.begin(), class_names.end(), l) - class_names.begin()));
  return Dataset(std::move(attribute_names), std::move(values), std::move(class_names),
                 std::move(labels));
}

Dataset load_csv(const std::string& path, const std::optional<std::string>& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), label_column, path);
}

AttributeSummary summarize(const Dataset& dataset) {
  if (dataset.empty()) throw Error(ErrorCode::InvalidArgument, "cannot summarize empty dataset");
  AttributeSummary out;
  auto first = dataset.sample(0);
  out.min.assign(first.begin(), first.end());
  out.max.assign(first.begin(), first.end());
  for (std::size_t i = 1; i < dataset.size(); ++i) {
    auto x = dataset.sample(i);
    for (std::size_t j = 0; j < x.size(); ++j) {
      out.min[j] = std::min(out.min[j], x[j]);
      out.max[j] = std::max(out.max[j], x[j]);
    }
  }
  return out;
}

}  // namespace bsom
