#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "krvqr/types.hpp"

namespace krvqr {

// Assigns train/val/test labels by image: every pair of one image lands in
// the same split. Image ids are sorted, shuffled deterministically from the
// seed, and dealt out by largest-remainder quotas; any split with a positive
// ratio is guaranteed at least one image. Throws TooFewImages for fewer than
// three distinct images and InvalidConfig for bad ratios.
void assign_splits(Dataset &d, const std::array<double, 3> &ratios, uint64_t seed);

struct StatsReport {
  uint64_t total = 0;
  std::array<std::array<uint64_t, 3>, 7> qtype_split_counts{};  // [qtype][split]
  std::array<uint64_t, 7> qtype_totals{};
  std::array<uint64_t, 3> split_totals{};
  uint64_t kb_related_total = 0;

  // Distinct answer strings, split by whether the question consults the KB.
  uint64_t answer_vocab_kb_related = 0;
  uint64_t answer_vocab_image_only = 0;
  std::map<std::string, uint64_t> answer_frequency;

  // Question length in whitespace-separated words.
  int question_len_min = 0;
  int question_len_max = 0;
  double question_len_mean = 0.0;

  uint64_t distinct_knowledge_used = 0;  // distinct KB triplets across reasons

  // Fraction of val/test pairs whose answer also occurs as a train answer.
  // Reported as 1 for datasets without val/test pairs.
  double answer_train_coverage = 1.0;
};

StatsReport stats(const Dataset &d);

std::string stats_to_json(const StatsReport &r);

// One row per qtype with split breakdowns, plus a total row.
std::string stats_to_csv(const StatsReport &r);

}  // namespace krvqr
