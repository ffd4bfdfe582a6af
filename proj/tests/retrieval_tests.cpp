#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "krvqr/retrieval.hpp"
#include "krvqr/types.hpp"
#include "support/fixtures.hpp"

using namespace krvqr;

namespace {

std::vector<std::string> keys_of(const std::vector<KnowledgeTriplet> &facts) {
  std::vector<std::string> out;
  for (const KnowledgeTriplet &f : facts) out.push_back(f.key());
  return out;
}

// Mirrors the documented retrieval walk with independent bookkeeping:
// nouns in rank order, incident facts in key order, dedup, cap at k.
std::vector<std::string> oracle_retrieve(const std::vector<RankedNoun> &nouns,
                                         const KnowledgeBase &kb, size_t k) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const RankedNoun &noun : nouns) {
    std::vector<std::string> candidates;
    for (size_t i = 0; i < kb.size(); ++i) {
      const KnowledgeTriplet &t = kb.triplet(static_cast<uint32_t>(i));
      if (t.head.str() == noun.noun || t.tail.str() == noun.noun) candidates.push_back(t.key());
    }
    std::sort(candidates.begin(), candidates.end());
    for (const std::string &key : candidates) {
      if (out.size() >= k) return out;
      if (seen.insert(key).second) out.push_back(key);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("question_tokens lowercases and splits on every non-alphanumeric") {
  CHECK(question_tokens("What is the Girl holding?") ==
        std::vector<std::string>{"what", "is", "the", "girl", "holding"});
  CHECK(question_tokens("e-mail, 42nd!") == std::vector<std::string>{"e", "mail", "42nd"});
  CHECK(question_tokens("girl's hotdog") == std::vector<std::string>{"girl", "s", "hotdog"});
  CHECK(question_tokens("").empty());
  CHECK(question_tokens("  ?!  ").empty());
  CHECK(question_tokens("dog") == std::vector<std::string>{"dog"});
}

TEST_CASE("is_noun_token drops stop words and gerund-shaped tokens") {
  for (const char *stop : {"what", "is", "the", "of", "and", "relation", "relationship",
                           "object", "on", "near", "faster", "than", "used", "for", "at"})
    CHECK_FALSE(is_noun_token(stop));

  CHECK(is_noun_token("girl"));
  CHECK(is_noun_token("hotdog"));
  CHECK(is_noun_token("42nd"));

  // Length >= 5 ending in "ing" is treated as an image predicate.
  CHECK_FALSE(is_noun_token("holding"));
  CHECK_FALSE(is_noun_token("chasing"));
  CHECK_FALSE(is_noun_token("thing"));
  // Short -ing words survive.
  CHECK(is_noun_token("ring"));
  CHECK(is_noun_token("king"));

  CHECK_FALSE(is_noun_token(""));
}

namespace {

std::vector<std::string> small_corpus() {
  return {
      "what is the girl holding?",
      "what is the relationship of the girl and the hotdog?",
      "what is faster than bicycle?",
      "what is the dog chasing?",
  };
}

}  // namespace

TEST_CASE("TfIdfIndex counts each document once per token") {
  TfIdfIndex index(small_corpus());
  CHECK(index.documents() == 4);

  // girl appears in 2 documents, dog and hotdog in 1, "what" in all 4.
  CHECK(index.idf("girl") == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-15));
  CHECK(index.idf("dog") == doctest::Approx(std::log(4.0 / 2.0)).epsilon(1e-15));
  CHECK(index.idf("hotdog") == doctest::Approx(std::log(4.0 / 2.0)).epsilon(1e-15));
  CHECK(index.idf("what") == doctest::Approx(std::log(4.0 / 5.0)).epsilon(1e-15));
  CHECK(index.idf("what") < 0.0);
  // Unseen tokens get df = 0.
  CHECK(index.idf("zebra") == doctest::Approx(std::log(4.0)).epsilon(1e-15));

  // Repeats inside one document do not inflate the document frequency.
  TfIdfIndex repeated({"dog dog dog", "cat"});
  CHECK(repeated.idf("dog") == doctest::Approx(std::log(2.0 / 2.0)).epsilon(1e-15));
}

TEST_CASE("rank_nouns orders by tf times idf with alphabetical ties") {
  TfIdfIndex index(small_corpus());

  SUBCASE("single-occurrence nouns sort by idf, equal scores alphabetically") {
    auto ranked = rank_nouns("what is the girl holding near the dog and the hotdog?", index);
    REQUIRE(ranked.size() == 3);
    // dog and hotdog share df = 1, so the tie breaks alphabetically.
    CHECK(ranked[0].noun == "dog");
    CHECK(ranked[1].noun == "hotdog");
    CHECK(ranked[2].noun == "girl");
    CHECK(ranked[0].tf_idf == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(ranked[1].tf_idf == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(ranked[2].tf_idf == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-15));
  }

  SUBCASE("term frequency multiplies the score") {
    auto ranked = rank_nouns("dog dog girl hotdog", index);
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].noun == "dog");
    CHECK(ranked[0].tf_idf == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
    CHECK(ranked[1].noun == "hotdog");
    CHECK(ranked[2].noun == "girl");
  }

  SUBCASE("stop words and gerunds never appear") {
    auto ranked = rank_nouns("what is the girl holding?", index);
    REQUIRE(ranked.size() == 1);
    CHECK(ranked[0].noun == "girl");
  }

  SUBCASE("question with no noun tokens ranks nothing") {
    CHECK(rank_nouns("what is the relation of and?", index).empty());
  }

  SUBCASE("corpus overload matches the index form") {
    auto via_corpus = rank_nouns("dog dog girl hotdog", small_corpus());
    auto via_index = rank_nouns("dog dog girl hotdog", index);
    REQUIRE(via_corpus.size() == via_index.size());
    for (size_t i = 0; i < via_corpus.size(); ++i) {
      CHECK(via_corpus[i].noun == via_index[i].noun);
      CHECK(via_corpus[i].tf_idf == via_index[i].tf_idf);
    }
  }
}

namespace {

KnowledgeBase fact_kb() {
  KnowledgeBase kb;
  // Insertion order differs from key order on purpose.
  kb.add(fixtures::triplet("d", "isa", "b"));
  kb.add(fixtures::triplet("a", "isa", "b"));
  kb.add(fixtures::triplet("b", "isa", "c"));
  kb.add(fixtures::triplet("a", "isa", "d"));
  return kb;
}

std::vector<RankedNoun> nouns(std::initializer_list<const char *> names) {
  std::vector<RankedNoun> out;
  double score = static_cast<double>(names.size());
  for (const char *n : names) out.push_back(RankedNoun{n, score--});
  return out;
}

}  // namespace

TEST_CASE("retrieve_facts walks nouns in order and sorts incident facts by key") {
  KnowledgeBase kb = fact_kb();

  auto facts = retrieve_facts(nouns({"b", "a"}), kb);
  CHECK(keys_of(facts) == std::vector<std::string>{
                              "a\tisa\tb",  // b's incidents in key order, not insertion order
                              "b\tisa\tc",
                              "d\tisa\tb",
                              "a\tisa\td",  // a's remaining incident, (a, isa, b) deduplicated
                          });
  CHECK(keys_of(facts) == oracle_retrieve(nouns({"b", "a"}), kb, 16));
}

TEST_CASE("retrieve_facts caps at k and skips unknown nouns") {
  KnowledgeBase kb = fact_kb();

  CHECK(keys_of(retrieve_facts(nouns({"b", "a"}), kb, 3)) ==
        std::vector<std::string>{"a\tisa\tb", "b\tisa\tc", "d\tisa\tb"});
  CHECK(retrieve_facts(nouns({"b"}), kb, 0).empty());
  CHECK(retrieve_facts(nouns({"zebra"}), kb).empty());
  CHECK(keys_of(retrieve_facts(nouns({"zebra", "c"}), kb)) ==
        std::vector<std::string>{"b\tisa\tc"});
  CHECK(retrieve_facts({}, kb).empty());
}

TEST_CASE("retrieve_facts matches the oracle on a crafted corpus with full recall") {
  // Twelve questions, each mentioning one distinctive entity; the shared
  // noun "table" appears everywhere so its idf is negative.
  std::vector<std::string> entities = {"apple", "banana",   "carrot", "donut",  "egg",  "fig",
                                       "grape", "hamster",  "iron",   "jacket", "kite", "lemon"};
  std::vector<std::string> corpus;
  for (const std::string &e : entities)
    corpus.push_back("what is the " + e + " on the table?");

  KnowledgeBase kb;
  for (const std::string &e : entities) {
    kb.add(fixtures::triplet(e, "isa", "item"));
    kb.add(fixtures::triplet(e, "atlocation", "kitchen"));
    kb.add(fixtures::triplet(e, "madeof", "matter"));
  }

  TfIdfIndex index(corpus);
  size_t recalled = 0;
  for (size_t i = 0; i < corpus.size(); ++i) {
    auto ranked = rank_nouns(corpus[i], index);
    REQUIRE_FALSE(ranked.empty());
    CHECK(ranked[0].noun == entities[i]);  // distinctive entity outranks "table"

    auto facts = retrieve_facts(ranked, kb, 16);
    CHECK(keys_of(facts) == oracle_retrieve(ranked, kb, 16));

    std::string groundtruth = entities[i] + "\tisa\titem";
    auto keys = keys_of(facts);
    if (std::find(keys.begin(), keys.end(), groundtruth) != keys.end()) ++recalled;
  }
  CHECK(recalled == corpus.size());
}
