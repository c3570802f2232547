#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bsom/data_model.hpp"
#include "bsom/partition_types.hpp"
#include "bsom/som.hpp"

namespace bsom {

struct EvalReport {
  std::vector<std::string> class_names;
  /// Majority class of each block's samples; -1 for blocks without samples.
  std::vector<ClassId> block_labels;
  /// confusion[truth][predicted]
  std::vector<std::vector<std::size_t>> confusion;
  std::size_t n_samples = 0;
  double p_o = 0.0;
  double p_e = 0.0;
  double kappa = 0.0;

  std::size_t correct() const;
  double accuracy() const noexcept { return p_o; }
};

/// Observed agreement, chance agreement and Cohen's kappa of a square
/// confusion matrix (rows = truth).
EvalReport agreement_from_confusion(std::vector<std::vector<std::size_t>> confusion);

/// Labels each block by the majority class of its samples and scores the
/// resulting per-sample predictions.
EvalReport score(const Partition& partition, const SomMap& map, const std::vector<ClassId>& labels,
                 const std::vector<std::string>& class_names);
EvalReport score(const Partition& partition, const SomMap& map, const Dataset& dataset);

/// Human-readable table followed by a one-line JSON footer (prefixed
/// "# data: ") holding every number at full precision.
std::string render_report(const EvalReport& report);
std::string report_to_json(const EvalReport& report);

}  // namespace bsom
