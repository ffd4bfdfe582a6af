#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "krvqr/types.hpp"

namespace krvqr {

// Everything that supports one answer value: the satisfying triplet chains
// (length 1 or 2) and, for image-side entity answers, the object instances
// that realized the value. Instances drive instance-sharing when an image
// query feeds another image query.
struct AnswerSupport {
  std::vector<std::vector<Fact>> chains;
  std::set<int> instances;
};

// Deduplicated by normalized label; ordered map keeps iteration stable.
struct AnswerSet {
  std::map<std::string, AnswerSupport> values;

  bool empty() const { return values.empty(); }
  size_t size() const { return values.size(); }
  bool unique() const { return values.size() == 1; }
  const std::string &sole() const { return values.begin()->first; }
  bool contains(const std::string &v) const { return values.count(v) > 0; }
};

// Executes one concrete elementary query. IMAGE-domain queries range over
// the scene edges only and answer at the label level; KB-domain queries
// range over the full knowledge base. Throws UnknownEntity when an operand
// label appears in neither the graph nor the KB.
AnswerSet execute_query(const Query &q, const ImageKnowledgeGraph &g, const KnowledgeBase &kb);

// Executes a full program. Depth-1 programs delegate to execute_query.
// Depth-2 programs evaluate the inner query first, then the outer query once
// per inner answer, and union the results; provenance chains both triplets.
// When both queries are image queries the shared middle entity must be the
// same object instance, not merely the same label.
AnswerSet execute(const Program &p, const ImageKnowledgeGraph &g, const KnowledgeBase &kb);

}  // namespace krvqr
