#include "krvqr/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

namespace krvqr {

namespace {

// Question scaffolding, relation-phrase vocabulary, and function words.
// Image predicates are additionally caught by the gerund rule.
const std::unordered_set<std::string> &stop_words() {
  static const std::unordered_set<std::string> words = {
      // template scaffolding
      "what", "is", "the", "of", "and", "that", "object", "relationship", "relation",
      // relation-phrase words from the built-in rendering table
      "used", "for", "capable", "kind", "found", "at", "located", "near", "described", "as",
      "part", "made", "related", "to", "created", "by", "able", "be", "desire", "symbol",
      "category", "compared", "with", "than", "faster", "slower", "bigger", "smaller", "larger",
      "taller", "heavier", "on", "in", "under", "behind", "above", "below", "beside", "along",
      "inside", "next", "front",
      // function words
      "a", "an", "are", "was", "were", "it", "its", "this", "these", "those", "there", "has",
      "have", "had", "do", "does", "did", "not", "no", "or", "but", "if", "then", "so", "up",
      "down", "out", "off", "over", "into", "onto", "from",
  };
  return words;
}

}  // namespace

std::vector<std::string> question_tokens(const std::string &question) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : question) {
    unsigned char uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      current.push_back(static_cast<char>(std::tolower(uc)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

bool is_noun_token(const std::string &token) {
  if (token.empty()) return false;
  if (stop_words().count(token) > 0) return false;
  if (token.size() >= 5 && token.compare(token.size() - 3, 3, "ing") == 0) return false;
  return true;
}

TfIdfIndex::TfIdfIndex(const std::vector<std::string> &corpus) : documents_(corpus.size()) {
  for (const std::string &doc : corpus) {
    std::set<std::string> distinct;
    for (const std::string &token : question_tokens(doc)) distinct.insert(token);
    for (const std::string &token : distinct) ++df_[token];
  }
}

double TfIdfIndex::idf(const std::string &token) const {
  auto it = df_.find(token);
  int df = it == df_.end() ? 0 : it->second;
  return std::log(static_cast<double>(documents_) / (1.0 + static_cast<double>(df)));
}

std::vector<RankedNoun> rank_nouns(const std::string &question, const TfIdfIndex &index) {
  std::map<std::string, int> tf;
  for (const std::string &token : question_tokens(question))
    if (is_noun_token(token)) ++tf[token];

  std::vector<RankedNoun> ranked;
  ranked.reserve(tf.size());
  for (const auto &[token, count] : tf)
    ranked.push_back(RankedNoun{token, static_cast<double>(count) * index.idf(token)});
  std::sort(ranked.begin(), ranked.end(), [](const RankedNoun &a, const RankedNoun &b) {
    if (a.tf_idf != b.tf_idf) return a.tf_idf > b.tf_idf;
    return a.noun < b.noun;
  });
  return ranked;
}

std::vector<RankedNoun> rank_nouns(const std::string &question,
                                   const std::vector<std::string> &corpus) {
  return rank_nouns(question, TfIdfIndex(corpus));
}

std::vector<KnowledgeTriplet> retrieve_facts(const std::vector<RankedNoun> &nouns,
                                             const KnowledgeBase &kb, size_t k) {
  std::vector<KnowledgeTriplet> out;
  std::set<std::string> seen;
  for (const RankedNoun &noun : nouns) {
    if (out.size() >= k) break;
    if (!kb.has_entity(noun.noun)) continue;
    std::vector<uint32_t> incident = kb.incident(noun.noun);
    std::sort(incident.begin(), incident.end(), [&](uint32_t a, uint32_t b) {
      return kb.triplet(a).key() < kb.triplet(b).key();
    });
    for (uint32_t index : incident) {
      if (out.size() >= k) break;
      const KnowledgeTriplet &t = kb.triplet(index);
      if (!seen.insert(t.key()).second) continue;
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace krvqr
