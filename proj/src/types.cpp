#include "krvqr/types.hpp"

#include <algorithm>
#include <cmath>

namespace krvqr {

const SceneObject *SceneGraph::object_by_id(int instance_id) const {
  auto it = std::lower_bound(objects.begin(), objects.end(), instance_id,
                             [](const SceneObject &o, int id) { return o.instance_id < id; });
  if (it == objects.end() || it->instance_id != instance_id) return nullptr;
  return &*it;
}

std::set<std::string> SceneGraph::object_lemmas() const {
  std::set<std::string> out;
  for (const auto &o : objects) out.insert(o.lemma());
  return out;
}

std::set<std::string> SceneGraph::predicate_lemmas() const {
  std::set<std::string> out;
  for (const auto &e : edges) out.insert(e.predicate_lemma());
  return out;
}

bool SceneGraph::has_object_lemma(const std::string &lemma) const {
  return std::any_of(objects.begin(), objects.end(),
                     [&](const SceneObject &o) { return o.lemma() == lemma; });
}

const char *to_string(KnowledgeSource s) {
  switch (s) {
    case KnowledgeSource::WebChild: return "webchild";
    case KnowledgeSource::ConceptNet: return "conceptnet";
    case KnowledgeSource::DBpedia: return "dbpedia";
    case KnowledgeSource::Synthetic: return "synthetic";
  }
  return "synthetic";
}

std::optional<KnowledgeSource> knowledge_source_from(std::string_view name) {
  std::string n = normalize_label(name);
  if (n == "webchild") return KnowledgeSource::WebChild;
  if (n == "conceptnet") return KnowledgeSource::ConceptNet;
  if (n == "dbpedia") return KnowledgeSource::DBpedia;
  if (n == "synthetic") return KnowledgeSource::Synthetic;
  return std::nullopt;
}

uint32_t KnowledgeBase::add(KnowledgeTriplet triplet, bool allow_reflexive) {
  if (triplet.head.empty() || triplet.relation.empty() || triplet.tail.empty())
    throw Error(ErrorCode::FormatError, "knowledge triplet with empty entry");
  if (!allow_reflexive && triplet.head == triplet.tail)
    throw Error(ErrorCode::FormatError,
                "reflexive knowledge triplet: " + triplet.head.str() + " -> " + triplet.tail.str());
  if (triplet.surface_text.empty())
    throw Error(ErrorCode::FormatError, "knowledge triplet without surface text");

  uint32_t index = static_cast<uint32_t>(triplets_.size());
  const std::string &h = triplet.head.str();
  const std::string &r = triplet.relation.str();
  const std::string &t = triplet.tail.str();

  if (entities_.insert(h).second) entity_order_.push_back(h);
  if (entities_.insert(t).second) entity_order_.push_back(t);
  if (relations_.insert(r).second) relation_order_.push_back(r);

  by_head_tail_[h + "\t" + t].push_back(index);
  by_head_relation_[h + "\t" + r].push_back(index);
  by_relation_tail_[r + "\t" + t].push_back(index);
  by_entity_[h].push_back(index);
  if (t != h) by_entity_[t].push_back(index);

  triplets_.push_back(std::move(triplet));
  return index;
}

namespace {
std::vector<uint32_t> lookup(const std::unordered_map<std::string, std::vector<uint32_t>> &index,
                             const std::string &key) {
  auto it = index.find(key);
  if (it == index.end()) return {};
  return it->second;
}
}  // namespace

std::vector<uint32_t> KnowledgeBase::match_head_tail(const std::string &head,
                                                     const std::string &tail) const {
  return lookup(by_head_tail_, head + "\t" + tail);
}

std::vector<uint32_t> KnowledgeBase::match_head_relation(const std::string &head,
                                                         const std::string &rel) const {
  return lookup(by_head_relation_, head + "\t" + rel);
}

std::vector<uint32_t> KnowledgeBase::match_relation_tail(const std::string &rel,
                                                         const std::string &tail) const {
  return lookup(by_relation_tail_, rel + "\t" + tail);
}

std::vector<uint32_t> KnowledgeBase::incident(const std::string &entity) const {
  return lookup(by_entity_, entity);
}

const char *to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "train";
}

std::optional<Split> split_from(std::string_view name) {
  std::string n = normalize_label(name);
  if (n == "train") return Split::Train;
  if (n == "val" || n == "validation") return Split::Val;
  if (n == "test") return Split::Test;
  return std::nullopt;
}

void GenerationConfig::validate() const {
  if (max_route_len != 1 && max_route_len != 2)
    throw Error(ErrorCode::InvalidConfig, "max_route_len must be 1 or 2");
  if (answer_cap < 1) throw Error(ErrorCode::InvalidConfig, "answer_cap must be >= 1");
  if (max_attempts_per_image < 1)
    throw Error(ErrorCode::InvalidConfig, "max_attempts_per_image must be >= 1");
  double sum = 0.0;
  for (double r : split_ratios) {
    if (r <= 0.0) throw Error(ErrorCode::InvalidConfig, "split ratios must be positive");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidConfig, "split ratios must sum to 1");
  for (int q : enforce_triplet_once_qtypes) {
    if (q < 0 || q > 6)
      throw Error(ErrorCode::InvalidConfig, "triplet-once qtypes must be in 0..6");
  }
}

std::vector<Violation> validate_qa(const QAPair &pair) {
  std::vector<Violation> out;
  auto flag = [&](std::string code, std::string message) {
    out.push_back({std::move(code), std::move(message)});
  };

  if (pair.qtype < 0 || pair.qtype > 6)
    flag("qtype_range", "qtype " + std::to_string(pair.qtype) + " outside 0..6");
  if (pair.step != 1 && pair.step != 2)
    flag("step_range", "step " + std::to_string(pair.step) + " outside {1, 2}");
  if (pair.answer.empty()) flag("empty_answer", "answer is empty");
  if (pair.question.empty()) flag("empty_question", "question is empty");

  if (static_cast<size_t>(pair.step) != pair.reason.size())
    flag("step_reason_mismatch", "step " + std::to_string(pair.step) + " but " +
                                     std::to_string(pair.reason.size()) + " reason triplets");

  int expected_step = pair.qtype <= 2 ? 1 : 2;
  if (pair.qtype >= 0 && pair.qtype <= 6 && pair.step != expected_step)
    flag("step_qtype_mismatch", "qtype " + std::to_string(pair.qtype) + " implies step " +
                                    std::to_string(expected_step));

  bool any_kb = std::any_of(pair.reason.begin(), pair.reason.end(),
                            [](const Fact &f) { return f.origin == Origin::Kb; });
  if (pair.kb_related != any_kb)
    flag("kb_related_mismatch", pair.kb_related
                                    ? "kb_related set but no KB reason triplet"
                                    : "KB reason triplet present but kb_related unset");

  try {
    int shape_qtype = qtype_of(pair.program);
    if (shape_qtype != pair.qtype)
      flag("qtype_shape_mismatch", "program shape implies qtype " +
                                       std::to_string(shape_qtype) + ", pair says " +
                                       std::to_string(pair.qtype));
    if (program_depth(pair.program.root) != expected_step && pair.qtype >= 0 && pair.qtype <= 6)
      flag("depth_step_mismatch", "program depth disagrees with qtype step");
  } catch (const Error &e) {
    flag("invalid_program", e.what());
  }

  if (pair.reason.size() == 2 && pair.reason[0].tail != pair.reason[1].head)
    flag("chain_break", "reason triplets do not share the middle entity");

  for (const Fact &f : pair.reason) {
    if (f.head.empty() || f.relation.empty() || f.tail.empty())
      flag("empty_reason_entry", "reason triplet with empty entry");
  }

  return out;
}

}  // namespace krvqr
