#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "krvqr/program.hpp"
#include "krvqr/symbols.hpp"

namespace krvqr {

struct SceneObject {
  int instance_id = 0;
  SynsetId synset;
  std::string display_name;
  std::optional<std::array<double, 4>> bbox;  // pass-through metadata

  std::string lemma() const { return lemma_of(synset.str()); }
};

// Directed edge between two object instances of one image.
struct SceneTriplet {
  int subject = 0;
  RelationId predicate;  // predicate class label (synset when annotated)
  int object = 0;

  friend bool operator==(const SceneTriplet &, const SceneTriplet &) = default;

  std::string predicate_lemma() const { return lemma_of(predicate.str()); }
};

class SceneGraph {
 public:
  std::string image_id;
  std::vector<SceneObject> objects;  // sorted by instance_id, ids unique
  std::vector<SceneTriplet> edges;   // deduplicated

  const SceneObject *object_by_id(int instance_id) const;
  // Lemmas of all object synsets present in the image.
  std::set<std::string> object_lemmas() const;
  std::set<std::string> predicate_lemmas() const;
  bool has_object_lemma(const std::string &lemma) const;
};

enum class KnowledgeSource { WebChild, ConceptNet, DBpedia, Synthetic };

const char *to_string(KnowledgeSource s);
std::optional<KnowledgeSource> knowledge_source_from(std::string_view name);

struct KnowledgeTriplet {
  EntityId head;
  RelationId relation;
  EntityId tail;
  std::string surface_text;
  KnowledgeSource source = KnowledgeSource::Synthetic;

  std::string key() const { return head.str() + "\t" + relation.str() + "\t" + tail.str(); }
  Fact fact() const { return Fact{head.str(), relation.str(), tail.str(), Origin::Kb}; }
};

// Global triplet store with lookup indexes for the six query kinds and for
// entity-incidence retrieval. Append-only.
class KnowledgeBase {
 public:
  // Validates head != tail unless allow_reflexive; surface must be non-empty.
  // Returns the triplet index. Duplicate (head, relation, tail) rows are kept
  // so that import counts are exact.
  uint32_t add(KnowledgeTriplet triplet, bool allow_reflexive = false);

  size_t size() const { return triplets_.size(); }
  const KnowledgeTriplet &triplet(uint32_t index) const { return triplets_.at(index); }
  const std::vector<KnowledgeTriplet> &triplets() const { return triplets_; }

  size_t entity_count() const { return entities_.size(); }
  size_t relation_count() const { return relations_.size(); }
  bool has_entity(const std::string &label) const { return entities_.count(label) > 0; }
  bool has_relation(const std::string &label) const { return relations_.count(label) > 0; }

  // Entity labels in first-seen order (head first, then tail, per triplet).
  const std::vector<std::string> &entity_labels() const { return entity_order_; }
  const std::vector<std::string> &relation_labels() const { return relation_order_; }

  // Matching triplet indices for a fully concrete elementary query.
  std::vector<uint32_t> match_head_tail(const std::string &head, const std::string &tail) const;
  std::vector<uint32_t> match_head_relation(const std::string &head, const std::string &rel) const;
  std::vector<uint32_t> match_relation_tail(const std::string &rel, const std::string &tail) const;

  // All triplets whose head or tail equals the entity, in insertion order.
  std::vector<uint32_t> incident(const std::string &entity) const;

 private:
  std::vector<KnowledgeTriplet> triplets_;
  std::set<std::string> entities_;
  std::set<std::string> relations_;
  std::vector<std::string> entity_order_;
  std::vector<std::string> relation_order_;
  std::unordered_map<std::string, std::vector<uint32_t>> by_head_tail_;
  std::unordered_map<std::string, std::vector<uint32_t>> by_head_relation_;
  std::unordered_map<std::string, std::vector<uint32_t>> by_relation_tail_;
  std::unordered_map<std::string, std::vector<uint32_t>> by_entity_;
};

// A scene graph extended with every KB triplet that shares an entity with
// one of its object lemmas.
struct ImageKnowledgeGraph {
  SceneGraph scene;
  std::vector<uint32_t> kb_edges;  // indices into the KnowledgeBase, sorted by (h, r, t)

  size_t edge_count() const { return scene.edges.size() + kb_edges.size(); }
};

enum class Split { Train, Val, Test };

const char *to_string(Split s);
std::optional<Split> split_from(std::string_view name);

struct QAPair {
  std::string id;
  std::string image_id;
  std::string question;
  std::string answer;
  int qtype = 0;       // 0..6, determined by the program shape
  int step = 1;        // number of reason triplets
  bool kb_related = false;
  Program program;
  std::vector<Fact> reason;
  Split split = Split::Train;
};

struct Dataset {
  std::vector<QAPair> pairs;

  size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

struct GenerationConfig {
  uint64_t seed = 0;
  int max_route_len = 2;
  int answer_cap = 100;
  std::array<double, 3> split_ratios{0.6, 0.2, 0.2};
  int max_attempts_per_image = 200;
  std::set<int> enforce_triplet_once_qtypes{2, 3, 5};
  bool strict_render = false;

  void validate() const;  // throws InvalidConfig
};

struct Violation {
  std::string code;
  std::string message;
};

// Checks every QAPair invariant; an empty result means the pair is valid.
// Violations are data, not errors.
std::vector<Violation> validate_qa(const QAPair &pair);

}  // namespace krvqr
