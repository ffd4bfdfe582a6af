#include "krvqr/executor.hpp"

#include <algorithm>

namespace krvqr {

namespace {

bool known_entity(const std::string &label, const ImageKnowledgeGraph &g,
                  const KnowledgeBase &kb) {
  return g.scene.has_object_lemma(label) || kb.has_entity(label);
}

bool known_relation(const std::string &label, const ImageKnowledgeGraph &g,
                    const KnowledgeBase &kb) {
  if (kb.has_relation(label)) return true;
  return std::any_of(g.scene.edges.begin(), g.scene.edges.end(),
                     [&](const SceneTriplet &e) { return e.predicate_lemma() == label; });
}

void check_operands(const Query &q, const ImageKnowledgeGraph &g, const KnowledgeBase &kb) {
  auto require = [&](const std::string &label, bool entity) {
    bool ok = entity ? known_entity(label, g, kb) : known_relation(label, g, kb);
    if (!ok)
      throw Error(ErrorCode::UnknownEntity,
                  "operand \"" + label + "\" appears in neither the image graph nor the KB");
  };
  switch (q.kind) {
    case QueryKind::AB:
      require(operand_label(q.first), true);
      require(operand_label(q.second), true);
      break;
    case QueryKind::AR:
      require(operand_label(q.first), true);
      require(operand_label(q.second), false);
      break;
    case QueryKind::RB:
      require(operand_label(q.first), false);
      require(operand_label(q.second), true);
      break;
  }
}

void add_answer(AnswerSet &out, const std::string &value, Fact fact, int instance = -1) {
  AnswerSupport &support = out.values[value];
  support.chains.push_back({std::move(fact)});
  if (instance >= 0) support.instances.insert(instance);
}

// Optional instance restriction on one endpoint: used when the operand was
// produced by an inner image query.
struct InstanceFilter {
  bool active = false;
  const std::set<int> *instances = nullptr;

  bool admits(int instance) const { return !active || instances->count(instance) > 0; }
};

AnswerSet execute_image_query(const Query &q, const SceneGraph &scene,
                              const InstanceFilter &first_filter,
                              const InstanceFilter &second_filter) {
  AnswerSet out;
  const std::string &a = operand_label(q.first);
  const std::string &b = operand_label(q.second);
  for (const SceneTriplet &edge : scene.edges) {
    const SceneObject *subj = scene.object_by_id(edge.subject);
    const SceneObject *obj = scene.object_by_id(edge.object);
    if (!subj || !obj) continue;
    std::string subj_lemma = subj->lemma();
    std::string obj_lemma = obj->lemma();
    std::string pred_lemma = edge.predicate_lemma();
    Fact fact{subj_lemma, pred_lemma, obj_lemma, Origin::Image};
    switch (q.kind) {
      case QueryKind::AB:
        if (subj_lemma == a && obj_lemma == b && first_filter.admits(edge.subject) &&
            second_filter.admits(edge.object))
          add_answer(out, pred_lemma, std::move(fact));
        break;
      case QueryKind::AR:
        if (subj_lemma == a && pred_lemma == b && first_filter.admits(edge.subject))
          add_answer(out, obj_lemma, std::move(fact), edge.object);
        break;
      case QueryKind::RB:
        if (pred_lemma == a && obj_lemma == b && second_filter.admits(edge.object))
          add_answer(out, subj_lemma, std::move(fact), edge.subject);
        break;
    }
  }
  return out;
}

AnswerSet execute_kb_query(const Query &q, const KnowledgeBase &kb) {
  AnswerSet out;
  const std::string &a = operand_label(q.first);
  const std::string &b = operand_label(q.second);
  std::vector<uint32_t> hits;
  switch (q.kind) {
    case QueryKind::AB: hits = kb.match_head_tail(a, b); break;
    case QueryKind::AR: hits = kb.match_head_relation(a, b); break;
    case QueryKind::RB: hits = kb.match_relation_tail(a, b); break;
  }
  for (uint32_t idx : hits) {
    const KnowledgeTriplet &t = kb.triplet(idx);
    std::string value;
    switch (q.kind) {
      case QueryKind::AB: value = t.relation.str(); break;
      case QueryKind::AR: value = t.tail.str(); break;
      case QueryKind::RB: value = t.head.str(); break;
    }
    add_answer(out, value, t.fact());
  }
  return out;
}

AnswerSet execute_concrete(const Query &q, const ImageKnowledgeGraph &g, const KnowledgeBase &kb,
                           const InstanceFilter &first_filter,
                           const InstanceFilter &second_filter) {
  check_operands(q, g, kb);
  if (q.domain == Domain::Image) return execute_image_query(q, g.scene, first_filter, second_filter);
  return execute_kb_query(q, kb);
}

}  // namespace

AnswerSet execute_query(const Query &q, const ImageKnowledgeGraph &g, const KnowledgeBase &kb) {
  if (is_nested(q.first) || is_nested(q.second))
    throw Error(ErrorCode::InvalidProgram, "execute_query requires concrete operands");
  return execute_concrete(q, g, kb, {}, {});
}

AnswerSet execute(const Program &p, const ImageKnowledgeGraph &g, const KnowledgeBase &kb) {
  if (auto why = check_program_shape(p.root)) throw Error(ErrorCode::InvalidProgram, *why);
  NestedSlot slot = nested_slot(p.root);
  if (slot == NestedSlot::None) return execute_query(p.root, g, kb);

  const Query &inner = operand_query(slot == NestedSlot::First ? p.root.first : p.root.second);
  AnswerSet inner_answers = execute_concrete(inner, g, kb, {}, {});

  AnswerSet out;
  bool share_instances = inner.domain == Domain::Image && p.root.domain == Domain::Image;
  for (const auto &[value, support] : inner_answers.values) {
    Query outer = p.root;
    (slot == NestedSlot::First ? outer.first : outer.second) = Operand{value};

    InstanceFilter filter;
    if (share_instances) {
      filter.active = true;
      filter.instances = &support.instances;
    }
    InstanceFilter first_filter = slot == NestedSlot::First ? filter : InstanceFilter{};
    InstanceFilter second_filter = slot == NestedSlot::Second ? filter : InstanceFilter{};
    AnswerSet step = execute_concrete(outer, g, kb, first_filter, second_filter);

    for (const auto &[outer_value, outer_support] : step.values) {
      AnswerSupport &merged = out.values[outer_value];
      for (const auto &outer_chain : outer_support.chains) {
        for (const auto &inner_chain : support.chains) {
          // Chains are stored in traversal order (a,r1,b) then (b,r2,c):
          // with the inner in the head slot it covers the first triplet,
          // in the tail slot it covers the second.
          std::vector<Fact> chain;
          if (slot == NestedSlot::First) {
            chain = inner_chain;
            chain.insert(chain.end(), outer_chain.begin(), outer_chain.end());
          } else {
            chain = outer_chain;
            chain.insert(chain.end(), inner_chain.begin(), inner_chain.end());
          }
          merged.chains.push_back(std::move(chain));
        }
      }
      merged.instances.insert(outer_support.instances.begin(), outer_support.instances.end());
    }
  }
  return out;
}

}  // namespace krvqr
