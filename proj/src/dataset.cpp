#include "krvqr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "krvqr/error.hpp"
#include "krvqr/rng.hpp"

namespace krvqr {

namespace {

// floor quotas, then hand out the leftover seats by largest fractional
// remainder; earlier splits win ties.
std::array<size_t, 3> quota_counts(size_t n, const std::array<double, 3> &ratios) {
  std::array<size_t, 3> counts{};
  std::array<double, 3> fracs{};
  size_t assigned = 0;
  for (int s = 0; s < 3; ++s) {
    double quota = ratios[s] * static_cast<double>(n);
    counts[s] = static_cast<size_t>(std::floor(quota));
    fracs[s] = quota - static_cast<double>(counts[s]);
    assigned += counts[s];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fracs[a] > fracs[b]; });
  for (size_t i = 0; assigned < n; ++i) {
    ++counts[order[i % 3]];
    ++assigned;
  }
  return counts;
}

}  // namespace

void assign_splits(Dataset &d, const std::array<double, 3> &ratios, uint64_t seed) {
  double sum = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(sum - 1.0) > 1e-9 || ratios[0] < 0 || ratios[1] < 0 || ratios[2] < 0)
    throw Error(ErrorCode::InvalidConfig, "split ratios must be non-negative and sum to 1");

  std::set<std::string> id_set;
  for (const QAPair &p : d.pairs) id_set.insert(p.image_id);
  if (id_set.size() < 3)
    throw Error(ErrorCode::TooFewImages,
                "need at least 3 distinct images to split, have " + std::to_string(id_set.size()));

  std::vector<std::string> ids(id_set.begin(), id_set.end());
  Rng rng(mix_seed(seed, "split"));
  shuffle_deterministic(ids, rng);

  std::array<size_t, 3> counts = quota_counts(ids.size(), ratios);

  // Rounding can starve a split even when its ratio is positive; feed it one
  // image from the fullest split.
  for (int s = 0; s < 3; ++s) {
    while (ratios[s] > 0 && counts[s] == 0) {
      int donor = 0;
      for (int t = 1; t < 3; ++t)
        if (counts[t] > counts[donor]) donor = t;
      --counts[donor];
      ++counts[s];
    }
  }

  std::unordered_map<std::string, Split> by_image;
  size_t cursor = 0;
  for (int s = 0; s < 3; ++s)
    for (size_t i = 0; i < counts[s]; ++i) by_image[ids[cursor++]] = static_cast<Split>(s);
  for (QAPair &p : d.pairs) p.split = by_image.at(p.image_id);
}

StatsReport stats(const Dataset &d) {
  StatsReport r;
  r.total = d.pairs.size();

  std::set<std::string> kb_answers, plain_answers, knowledge_used, train_answers;
  uint64_t len_sum = 0;
  uint64_t holdout = 0, holdout_covered = 0;

  for (const QAPair &p : d.pairs) {
    int s = static_cast<int>(p.split);
    ++r.qtype_split_counts[p.qtype][s];
    ++r.qtype_totals[p.qtype];
    ++r.split_totals[s];
    if (p.kb_related) {
      ++r.kb_related_total;
      kb_answers.insert(p.answer);
    } else {
      plain_answers.insert(p.answer);
    }
    ++r.answer_frequency[p.answer];
    for (const Fact &f : p.reason)
      if (f.origin == Origin::Kb) knowledge_used.insert(f.key());
    if (p.split == Split::Train) train_answers.insert(p.answer);

    int words = 0;
    std::istringstream iss(p.question);
    for (std::string w; iss >> w;) ++words;
    len_sum += static_cast<uint64_t>(words);
    if (r.question_len_min == 0 || words < r.question_len_min) r.question_len_min = words;
    if (words > r.question_len_max) r.question_len_max = words;
  }

  r.answer_vocab_kb_related = kb_answers.size();
  r.answer_vocab_image_only = plain_answers.size();
  r.distinct_knowledge_used = knowledge_used.size();
  if (r.total > 0) r.question_len_mean = static_cast<double>(len_sum) / static_cast<double>(r.total);

  for (const QAPair &p : d.pairs) {
    if (p.split == Split::Train) continue;
    ++holdout;
    if (train_answers.count(p.answer) > 0) ++holdout_covered;
  }
  if (holdout > 0)
    r.answer_train_coverage = static_cast<double>(holdout_covered) / static_cast<double>(holdout);

  return r;
}

std::string stats_to_json(const StatsReport &r) {
  nlohmann::ordered_json j;
  j["total"] = r.total;
  for (int q = 0; q < 7; ++q) {
    nlohmann::ordered_json row;
    row["train"] = r.qtype_split_counts[q][0];
    row["val"] = r.qtype_split_counts[q][1];
    row["test"] = r.qtype_split_counts[q][2];
    row["total"] = r.qtype_totals[q];
    j["qtype"][std::to_string(q)] = row;
  }
  j["split_totals"] = {{"train", r.split_totals[0]},
                       {"val", r.split_totals[1]},
                       {"test", r.split_totals[2]}};
  j["kb_related_total"] = r.kb_related_total;
  j["answer_vocab"] = {{"kb_related", r.answer_vocab_kb_related},
                       {"image_only", r.answer_vocab_image_only}};
  j["question_length"] = {{"min", r.question_len_min},
                          {"max", r.question_len_max},
                          {"mean", r.question_len_mean}};
  j["distinct_knowledge_used"] = r.distinct_knowledge_used;
  j["answer_train_coverage"] = r.answer_train_coverage;
  nlohmann::ordered_json freq = nlohmann::ordered_json::object();
  for (const auto &[answer, count] : r.answer_frequency) freq[answer] = count;
  j["answer_frequency"] = freq;
  return j.dump(2);
}

std::string stats_to_csv(const StatsReport &r) {
  std::ostringstream out;
  out << "qtype,train,val,test,total\n";
  for (int q = 0; q < 7; ++q)
    out << q << ',' << r.qtype_split_counts[q][0] << ',' << r.qtype_split_counts[q][1] << ','
        << r.qtype_split_counts[q][2] << ',' << r.qtype_totals[q] << '\n';
  out << "all," << r.split_totals[0] << ',' << r.split_totals[1] << ',' << r.split_totals[2] << ','
      << r.total << '\n';
  return out.str();
}

}  // namespace krvqr
