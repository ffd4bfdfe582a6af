#include "krvqr/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace krvqr {

namespace {

std::string normalize_answer(const std::string &raw) {
  size_t begin = 0, end = raw.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(raw[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;
  std::string out = raw.substr(begin, end - begin);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::map<int, std::string> qtype_baseline(const Dataset &train) {
  std::map<int, std::map<std::string, uint64_t>> counts;
  for (const QAPair &p : train.pairs) ++counts[p.qtype][p.answer];

  std::map<int, std::string> best;
  for (const auto &[qtype, answers] : counts) {
    const std::string *winner = nullptr;
    uint64_t winner_count = 0;
    // std::map iterates answers in ascending order, so on a tie the first
    // (lexicographically smallest) one sticks.
    for (const auto &[answer, count] : answers) {
      if (winner == nullptr || count > winner_count) {
        winner = &answer;
        winner_count = count;
      }
    }
    best[qtype] = *winner;
  }
  return best;
}

double AccuracyReport::cell_averaged() const {
  if (cells.empty()) return 0.0;
  double sum = 0.0;
  for (const auto &[key, cell] : cells) sum += cell.accuracy();
  return sum / static_cast<double>(cells.size());
}

AccuracyReport score_predictions(const std::vector<Prediction> &preds, const Dataset &gold) {
  std::unordered_map<std::string, std::string> by_id;
  for (const Prediction &p : preds) by_id[p.id] = p.answer;  // last record wins

  AccuracyReport r;
  std::unordered_map<std::string, bool> used;
  for (const QAPair &g : gold.pairs) {
    ++r.total;
    CellScore &cell = r.cells[{g.kb_related, g.qtype}];
    ++cell.total;
    auto it = by_id.find(g.id);
    if (it == by_id.end()) {
      ++r.missing;
      continue;
    }
    used[g.id] = true;
    if (normalize_answer(it->second) == normalize_answer(g.answer)) {
      ++r.correct;
      ++cell.correct;
    }
  }
  for (const Prediction &p : preds)
    if (used.find(p.id) == used.end()) ++r.unmatched_predictions;
  return r;
}

namespace {

std::string fixed2(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << v;
  return out.str();
}

}  // namespace

std::string accuracy_table(const AccuracyReport &r) {
  const int width = 8;
  std::ostringstream out;

  auto group_header = [&](const std::string &name, int columns) {
    int total = columns * width;
    int pad = total - static_cast<int>(name.size());
    int left = pad / 2;
    out << std::string(std::max(0, left), ' ') << name
        << std::string(std::max(0, pad - left), ' ');
  };

  out << std::string(6, ' ');
  group_header("image-only", 7);
  out << " | ";
  group_header("kb-related", 5);
  out << " | overall\n";

  out << std::string(6, ' ');
  for (int q = 0; q <= 6; ++q) out << std::setw(width) << q;
  out << " | ";
  for (int q = 2; q <= 6; ++q) out << std::setw(width) << q;
  out << " |\n";

  auto cell_text = [&](bool kb, int q) {
    auto it = r.cells.find({kb, q});
    if (it == r.cells.end() || it->second.total == 0) return std::string("-");
    return fixed2(it->second.accuracy());
  };

  out << std::left << std::setw(6) << "acc" << std::right;
  for (int q = 0; q <= 6; ++q) out << std::setw(width) << cell_text(false, q);
  out << " | ";
  for (int q = 2; q <= 6; ++q) out << std::setw(width) << cell_text(true, q);
  out << " | " << fixed2(r.overall()) << '\n';

  out << "overall " << fixed2(r.overall()) << " (sample-weighted), " << fixed2(r.cell_averaged())
      << " (cell-averaged) over " << r.total << " questions";
  if (r.missing > 0) out << "; " << r.missing << " missing predictions scored wrong";
  if (r.unmatched_predictions > 0)
    out << "; " << r.unmatched_predictions << " predictions matched no question";
  out << '\n';
  return out.str();
}

std::string accuracy_to_json(const AccuracyReport &r) {
  nlohmann::ordered_json j;
  j["total"] = r.total;
  j["correct"] = r.correct;
  j["missing"] = r.missing;
  j["unmatched_predictions"] = r.unmatched_predictions;
  j["overall"] = fixed2(r.overall());
  j["cell_averaged"] = fixed2(r.cell_averaged());
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto &[key, cell] : r.cells) {
    nlohmann::ordered_json jc;
    jc["kb_related"] = key.first;
    jc["qtype"] = key.second;
    jc["total"] = cell.total;
    jc["correct"] = cell.correct;
    jc["accuracy"] = fixed2(cell.accuracy());
    cells.push_back(std::move(jc));
  }
  j["cells"] = cells;
  return j.dump(2);
}

}  // namespace krvqr
