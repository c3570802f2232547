#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bsom {

/// Class identifiers are dense indices into Dataset::class_names.
using ClassId = int;

/// Numeric samples stored row-major, one row of `dim()` attributes per sample.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> attribute_names, std::vector<double> values);
  Dataset(std::vector<std::string> attribute_names, std::vector<double> values,
          std::vector<std::string> class_names, std::vector<ClassId> labels);

  std::size_t size() const noexcept { return dim() == 0 ? 0 : values_.size() / dim(); }
  std::size_t dim() const noexcept { return attribute_names_.size(); }
  bool empty() const noexcept { return size() == 0; }

  std::span<const double> sample(std::size_t i) const {
    return {values_.data() + i * dim(), dim()};
  }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<std::string>& attribute_names() const noexcept { return attribute_names_; }

  bool has_labels() const noexcept { return labels_.has_value(); }
  /// Throws Error(InvalidArgument) when the dataset is unlabeled.
  const std::vector<ClassId>& labels() const;
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }
  std::size_t class_count() const noexcept { return class_names_.size(); }

 private:
  std::vector<std::string> attribute_names_;
  std::vector<double> values_;
  std::vector<std::string> class_names_;
  std::optional<std::vector<ClassId>> labels_;
};

struct AttributeSummary {
  std::vector<double> min;
  std::vector<double> max;

  std::size_t dim() const noexcept { return min.size(); }
  double span(std::size_t j) const { return max[j] - min[j]; }
  bool operator==(const AttributeSummary&) const = default;
};

/// Reads a comma-separated file with a header row. Every column other than
/// `label_column` must hold finite reals; when no label column is named,
/// columns that contain only text are skipped. Class ids are assigned in sorted
/// order of the distinct label strings.
Dataset load_csv(const std::string& path,
                 const std::optional<std::string>& label_column = std::nullopt);

/// Same as load_csv, reading from an in-memory buffer; `origin` names the
/// source in error messages.
Dataset parse_csv(const std::string& text,
                  const std::optional<std::string>& label_column,
                  const std::string& origin = "<memory>");

AttributeSummary summarize(const Dataset& dataset);

}  // namespace bsom
