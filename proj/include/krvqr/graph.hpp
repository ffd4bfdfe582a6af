#pragma once

#include <optional>
#include <string>
#include <vector>

#include "krvqr/types.hpp"

namespace krvqr {

// Scene-graph annotations as they arrive from the source files, before any
// cleaning. Synset lists may be empty; indices reference raw object ids.
struct RawObject {
  int id = 0;
  std::string name;
  std::vector<std::string> synsets;
  std::optional<std::array<double, 4>> bbox;
};

struct RawRelation {
  int subject_id = 0;
  std::string predicate;
  std::vector<std::string> synsets;
  int object_id = 0;
};

struct RawSceneGraph {
  std::string image_id;
  std::vector<RawObject> objects;
  std::vector<RawRelation> relations;
};

// Keeps exactly the objects carrying a synset and the relations whose
// predicate has a synset and whose endpoints both survived. The synset is
// the class label; the first listed synset wins when there are several.
// Duplicate (subject, predicate, object) edges collapse to one. Idempotent.
SceneGraph clean_scene_graph(const RawSceneGraph &raw);

// Attaches every KB triplet whose head or tail equals the lemma of some
// scene object. kb_edges come out sorted by (head, relation, tail).
ImageKnowledgeGraph merge_knowledge(const SceneGraph &scene, const KnowledgeBase &kb);

struct ImportReport {
  size_t parsed = 0;
  size_t skipped = 0;
  std::vector<std::string> skip_messages;  // capped; see max_messages

  void note_skip(std::string message, size_t max_messages = 20);
};

// Visual-Genome-style scene graph JSON: an array (or {"images": [...]}) of
// records with objects / relationships.
std::vector<RawSceneGraph> import_vg(const std::string &path, ImportReport &report);

// KB rows as JSONL with keys head, relation, tail, surface, source, or TSV
// in that column order. Malformed rows are counted and skipped.
KnowledgeBase import_kb(const std::string &path, ImportReport &report);

}  // namespace krvqr
