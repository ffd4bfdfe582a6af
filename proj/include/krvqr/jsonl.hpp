#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "krvqr/generator.hpp"
#include "krvqr/types.hpp"

namespace krvqr {

// One QA record per line, keys always in this order:
// id, image_id, question, answer, qtype, step, kb_related, program,
// reason (list of [head, relation, tail, origin]), split.
void write_dataset(std::ostream &out, const Dataset &d);
void write_dataset_file(const std::string &path, const Dataset &d);
Dataset read_dataset(std::istream &in, const std::string &source_name);
Dataset read_dataset_file(const std::string &path);

// Scene records: {"image_id", "objects": [{"id", "synset", "name", "bbox"?}],
// "relations": [{"subject", "predicate", "object"}]}.
void write_scenes(std::ostream &out, const std::vector<SceneGraph> &scenes);
void write_scenes_file(const std::string &path, const std::vector<SceneGraph> &scenes);
std::vector<SceneGraph> read_scenes(std::istream &in, const std::string &source_name);
std::vector<SceneGraph> read_scenes_file(const std::string &path);

// KB records: {"head", "relation", "tail", "surface", "source"}.
void write_kb(std::ostream &out, const KnowledgeBase &kb);
void write_kb_file(const std::string &path, const KnowledgeBase &kb);

// Prediction records: {"id", "answer"}.
struct Prediction {
  std::string id;
  std::string answer;
};
void write_predictions(std::ostream &out, const std::vector<Prediction> &preds);
std::vector<Prediction> read_predictions(std::istream &in, const std::string &source_name);
std::vector<Prediction> read_predictions_file(const std::string &path);

std::string report_to_json(const GenerationReport &r);

}  // namespace krvqr
