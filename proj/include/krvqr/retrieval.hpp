#pragma once

#include <map>
#include <string>
#include <vector>

#include "krvqr/types.hpp"

namespace krvqr {

// Lowercased alphanumeric tokens of a question, in order of appearance.
std::vector<std::string> question_tokens(const std::string &question);

// True for tokens the noun extractor keeps: not on the stop list (question
// scaffolding, common relation-phrase words, function words) and not a
// gerund-shaped token (length ≥ 5 ending in "ing", which is how image
// predicates surface in rendered questions).
bool is_noun_token(const std::string &token);

struct RankedNoun {
  std::string noun;
  double tf_idf = 0.0;
};

// Document frequencies of a question corpus, built once and shared across
// rank_nouns calls.
class TfIdfIndex {
 public:
  explicit TfIdfIndex(const std::vector<std::string> &corpus);

  size_t documents() const { return documents_; }
  // ln(N / (1 + df)); tokens absent from the corpus get df = 0.
  double idf(const std::string &token) const;

 private:
  size_t documents_ = 0;
  std::map<std::string, int> df_;
};

// Noun tokens of the question scored by tf-idf against the corpus:
// tf = occurrences in this question, idf = ln(N / (1 + df)) with df counting
// corpus questions containing the token. Descending score, ties alphabetical.
std::vector<RankedNoun> rank_nouns(const std::string &question, const TfIdfIndex &index);
std::vector<RankedNoun> rank_nouns(const std::string &question,
                                   const std::vector<std::string> &corpus);

// Walks nouns in rank order; each noun that exactly matches a KB entity
// contributes its incident triplets in key order until k triplets are
// collected. A triplet incident to several matched nouns is kept once, at
// the first position it appears.
std::vector<KnowledgeTriplet> retrieve_facts(const std::vector<RankedNoun> &nouns,
                                             const KnowledgeBase &kb, size_t k = 16);

}  // namespace krvqr
