#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "krvqr/jsonl.hpp"
#include "krvqr/types.hpp"

namespace krvqr {

// Modal answer per qtype over the given pairs; frequency ties go to the
// lexicographically smallest answer. Qtypes absent from the input are
// absent from the map. Callers decide which split to feed in.
std::map<int, std::string> qtype_baseline(const Dataset &train);

struct CellScore {
  uint64_t total = 0;
  uint64_t correct = 0;

  double accuracy() const {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
  }
};

struct AccuracyReport {
  uint64_t total = 0;
  uint64_t correct = 0;
  uint64_t missing = 0;              // gold ids without a prediction (scored wrong)
  uint64_t unmatched_predictions = 0;  // prediction ids absent from gold (ignored)

  // Keyed by (kb_related, qtype); totals over the cells equal `total`.
  std::map<std::pair<bool, int>, CellScore> cells;

  double overall() const {  // sample-weighted
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
  }
  double cell_averaged() const;
};

// Normalized exact match (lowercase, trimmed) of predictions against gold.
// Duplicate prediction ids: the last record wins.
AccuracyReport score_predictions(const std::vector<Prediction> &preds, const Dataset &gold);

// Aligned text table: qtype columns 0..6 for image-only questions, 2..6 for
// KB-related ones, then the overall numbers.
std::string accuracy_table(const AccuracyReport &r);

std::string accuracy_to_json(const AccuracyReport &r);

}  // namespace krvqr
