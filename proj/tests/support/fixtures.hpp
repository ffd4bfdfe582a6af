#pragma once

#include <string>
#include <vector>

#include "krvqr/graph.hpp"
#include "krvqr/types.hpp"

namespace krvqr::fixtures {

KnowledgeTriplet triplet(const std::string &head, const std::string &relation,
                         const std::string &tail);

struct EdgeSpec {
  int subject;
  std::string predicate;
  int object;
};

struct ObjectSpec {
  int id;
  std::string synset;
};

SceneGraph make_scene(const std::string &image_id, const std::vector<ObjectSpec> &objects,
                      const std::vector<EdgeSpec> &edges);

// 50 images over a 20-synset vocabulary plus a 300-triplet KB whose entities
// overlap the synset lemmas. Deterministic.
struct Corpus {
  std::vector<SceneGraph> scenes;
  KnowledgeBase kb;
};
Corpus acceptance_corpus();

// 100 entities, 2 relations, one tail per (head, relation): 200 triplets.
KnowledgeBase embedding_kb();

// One QA pair per image over `n` images, split-fixture style.
Dataset image_grid_dataset(size_t n);

}  // namespace krvqr::fixtures
