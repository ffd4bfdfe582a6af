#include "krvqr/generator.hpp"

#include <algorithm>
#include <cstdio>

#include "krvqr/dataset.hpp"
#include "krvqr/error.hpp"
#include "krvqr/graph.hpp"

namespace krvqr {

RouteSampler::RouteSampler(const ImageKnowledgeGraph &g, const KnowledgeBase &kb) {
  edges_.reserve(g.edge_count());
  for (const SceneTriplet &e : g.scene.edges) {
    const SceneObject *subj = g.scene.object_by_id(e.subject);
    const SceneObject *obj = g.scene.object_by_id(e.object);
    Edge edge;
    edge.fact = Fact{subj->lemma(), e.predicate_lemma(), obj->lemma(), Origin::Image};
    edge.subject_instance = e.subject;
    edge.object_instance = e.object;
    edges_.push_back(std::move(edge));
  }
  for (uint32_t index : g.kb_edges) {
    Edge edge;
    edge.fact = kb.triplet(index).fact();
    edges_.push_back(std::move(edge));
  }
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
    by_head_label_[edges_[i].fact.head].push_back(i);
    if (edges_[i].subject_instance >= 0)
      by_subject_instance_[edges_[i].subject_instance].push_back(i);
  }
}

std::vector<int> RouteSampler::successors(int index) const {
  const Edge &first = edges_[index];
  std::vector<int> out;
  if (first.object_instance >= 0) {
    // Scene edge: scene successors must continue from the same object
    // instance; KB successors match the lemma.
    auto inst = by_subject_instance_.find(first.object_instance);
    if (inst != by_subject_instance_.end())
      out.insert(out.end(), inst->second.begin(), inst->second.end());
    auto lbl = by_head_label_.find(first.fact.tail);
    if (lbl != by_head_label_.end())
      for (int i : lbl->second)
        if (edges_[i].subject_instance < 0) out.push_back(i);
  } else {
    auto lbl = by_head_label_.find(first.fact.tail);
    if (lbl != by_head_label_.end()) out = lbl->second;
  }
  // Scene edges precede KB edges in the numbering, so a final sort keeps the
  // extension order canonical.
  std::sort(out.begin(), out.end());
  return out;
}

TripletChain RouteSampler::sample(Rng &rng, int max_len) const {
  if (edges_.empty()) throw Error(ErrorCode::NoRoute, "graph has no edges to sample from");
  int first = static_cast<int>(rand_below(rng, edges_.size()));
  TripletChain chain;
  chain.facts.push_back(edges_[first].fact);
  if (max_len < 2) return chain;

  std::vector<int> ext = successors(first);
  size_t choice = rand_below(rng, 1 + ext.size());
  if (choice > 0) chain.facts.push_back(edges_[ext[choice - 1]].fact);
  return chain;
}

TripletChain sample_route(const ImageKnowledgeGraph &g, const KnowledgeBase &kb, Rng &rng,
                          int max_len) {
  return RouteSampler(g, kb).sample(rng, max_len);
}

namespace {

Query leaf_query(const Fact &f, QueryKind kind) {
  Domain dom = domain_of(f.origin);
  switch (kind) {
    case QueryKind::AB: return Query{kind, dom, f.head, f.tail};
    case QueryKind::AR: return Query{kind, dom, f.head, f.relation};
    default: return Query{kind, dom, f.relation, f.tail};
  }
}

}  // namespace

Program compose_program(const TripletChain &chain, const std::vector<QueryKind> &kinds) {
  if (kinds.size() != chain.length())
    throw Error(ErrorCode::IncompatibleKinds, "need exactly one query kind per fact");

  if (chain.length() == 1) {
    const Fact &f = chain.facts[0];
    if (f.origin == Origin::Kb && kinds[0] != QueryKind::RB)
      throw Error(ErrorCode::IncompatibleKinds,
                  "a lone KB fact is only probed by head (RB); other probes drop the image");
    return Program{leaf_query(f, kinds[0]), chain.facts};
  }
  if (chain.length() != 2)
    throw Error(ErrorCode::IncompatibleKinds, "chains longer than 2 are not supported");

  const Fact &t1 = chain.facts[0];
  const Fact &t2 = chain.facts[1];
  // The inner query recovers the shared middle entity: AR on the first fact
  // or RB on the second. Exactly one of the two kinds may do so.
  bool first_targets_middle = kinds[0] == QueryKind::AR;
  bool second_targets_middle = kinds[1] == QueryKind::RB;
  if (first_targets_middle && second_targets_middle)
    throw Error(ErrorCode::IncompatibleKinds, "both kinds target the shared entity");
  if (!first_targets_middle && !second_targets_middle)
    throw Error(ErrorCode::IncompatibleKinds, "no kind targets the shared entity");
  bool inner_first = first_targets_middle;

  if (inner_first) {
    // Inner AR over t1 feeds the head slot of the outer query over t2.
    Query inner = leaf_query(t1, QueryKind::AR);
    Query outer;
    outer.kind = kinds[1];
    outer.domain = domain_of(t2.origin);
    outer.first = detail::Box<Query>(std::move(inner));
    outer.second = kinds[1] == QueryKind::AB ? t2.tail : t2.relation;
    return Program{std::move(outer), chain.facts};
  }

  // Inner RB over t2 feeds the tail slot of the outer query over t1.
  Query inner = leaf_query(t2, QueryKind::RB);
  Query outer;
  outer.kind = kinds[0];
  outer.domain = domain_of(t1.origin);
  outer.first = kinds[0] == QueryKind::AB ? t1.head : t1.relation;
  outer.second = detail::Box<Query>(std::move(inner));
  return Program{std::move(outer), chain.facts};
}

std::vector<std::vector<QueryKind>> kind_choices(const TripletChain &chain) {
  if (chain.length() == 1) {
    if (chain.facts[0].origin == Origin::Kb) return {{QueryKind::RB}};
    return {{QueryKind::AB}, {QueryKind::AR}, {QueryKind::RB}};
  }
  // In qtype order 3, 4, 5, 6.
  return {{QueryKind::AR, QueryKind::AB},
          {QueryKind::AB, QueryKind::RB},
          {QueryKind::AR, QueryKind::AR},
          {QueryKind::RB, QueryKind::RB}};
}

namespace {

bool consults_kb(const Program &p) {
  for (const Fact &f : p.support)
    if (f.origin == Origin::Kb) return true;
  return false;
}

// For qtype 5 with a KB inner query (Qar over the first fact): the KB must
// offer at least two candidate middle entities with exactly one of them
// visible in the scene, so the image is what disambiguates the question.
bool grounded_choice(const TripletChain &chain, const ImageKnowledgeGraph &g,
                     const KnowledgeBase &kb) {
  const Fact &t1 = chain.facts[0];
  std::set<std::string> tails;
  for (uint32_t index : kb.match_head_relation(t1.head, t1.relation))
    tails.insert(kb.triplet(index).tail.str());
  if (tails.size() < 2) return false;
  int in_scene = 0;
  for (const std::string &tail : tails)
    if (g.scene.has_object_lemma(tail)) ++in_scene;
  return in_scene == 1;
}

}  // namespace

AdmitDecision admit(const Candidate &candidate, const AnswerSet &result, ConstraintLedger &ledger,
                    const ImageKnowledgeGraph &g, const KnowledgeBase &kb,
                    const GenerationConfig &cfg) {
  std::string emitted_key = ConstraintLedger::emitted_key(candidate.image_id, candidate.question);
  if (ledger.emitted.count(emitted_key) > 0) return {false, reject::kDuplicate, ""};

  if (!result.unique()) return {false, reject::kNotUnique, ""};
  std::string answer = result.sole();

  bool kb_related = consults_kb(candidate.program);
  if (kb_related) {
    auto count = ledger.answer_counts.find({candidate.qtype, answer});
    if (count != ledger.answer_counts.end() && count->second >= cfg.answer_cap)
      return {false, reject::kAnswerCap, ""};
  }

  std::vector<std::string> kb_keys;
  for (const Fact &f : candidate.chain.facts)
    if (f.origin == Origin::Kb) kb_keys.push_back(f.key());
  if (cfg.enforce_triplet_once_qtypes.count(candidate.qtype) > 0)
    for (const std::string &key : kb_keys)
      if (ledger.used_knowledge.count(key) > 0) return {false, reject::kTripletReuse, ""};

  if (kb_related && g.scene.has_object_lemma(answer)) {
    if (candidate.qtype == 5) {
      // Scene answer means the outer query runs over scene edges. When the
      // inner query is the KB side, it must single out one visible object.
      // When the KB side is the outer query instead, the scene answer is a
      // coincidence of labels, not something the image resolves.
      bool inner_is_kb = candidate.chain.facts[0].origin == Origin::Kb;
      if (!inner_is_kb) return {false, reject::kUngrounded, ""};
      if (!grounded_choice(candidate.chain, g, kb)) return {false, reject::kUngrounded, ""};
    }
    // Qtype 2 over the KB needs no extra test here: a unique answer that
    // names a scene object is already the grounding this check asks for.
  }

  if (kb_related) ++ledger.answer_counts[{candidate.qtype, answer}];
  if (cfg.enforce_triplet_once_qtypes.count(candidate.qtype) > 0)
    for (const std::string &key : kb_keys) ledger.used_knowledge.insert(key);
  ledger.emitted.insert(emitted_key);
  return {true, "", answer};
}

namespace {

std::string format_id(uint64_t n) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "q%06llu", static_cast<unsigned long long>(n));
  return buf;
}

}  // namespace

Dataset generate(const std::vector<SceneGraph> &corpus, const KnowledgeBase &kb,
                 const GenerationConfig &cfg, const RelationRenderer &renderer,
                 GenerationReport *report) {
  cfg.validate();

  std::vector<const SceneGraph *> order;
  order.reserve(corpus.size());
  for (const SceneGraph &scene : corpus) order.push_back(&scene);
  std::sort(order.begin(), order.end(),
            [](const SceneGraph *a, const SceneGraph *b) { return a->image_id < b->image_id; });

  Dataset dataset;
  ConstraintLedger ledger;
  GenerationReport local;
  GenerationReport &rep = report ? *report : local;
  rep = GenerationReport{};

  for (const SceneGraph *scene : order) {
    ++rep.images;
    ImageKnowledgeGraph g = merge_knowledge(*scene, kb);
    RouteSampler sampler(g, kb);
    if (sampler.empty()) {
      ++rep.images_without_edges;
      continue;
    }
    Rng rng(mix_seed(cfg.seed, scene->image_id));

    for (int attempt = 0; attempt < cfg.max_attempts_per_image; ++attempt) {
      ++rep.attempts;
      TripletChain chain = sampler.sample(rng, cfg.max_route_len);
      auto choices = kind_choices(chain);
      Program program = compose_program(chain, choices[rand_below(rng, choices.size())]);
      int qtype = qtype_of(program);

      Candidate candidate;
      candidate.qtype = qtype;
      candidate.image_id = scene->image_id;
      candidate.chain = chain;
      try {
        candidate.question = render_question(program, qtype, renderer, cfg.strict_render);
      } catch (const Error &e) {
        if (e.code() == ErrorCode::MissingSurfaceForm) {
          ++rep.rejected[reject::kMissingSurface];
          continue;
        }
        throw;
      }
      candidate.program = std::move(program);

      AnswerSet result = execute(candidate.program, g, kb);
      AdmitDecision verdict = admit(candidate, result, ledger, g, kb, cfg);
      if (!verdict.accepted) {
        ++rep.rejected[verdict.reason];
        continue;
      }

      QAPair pair;
      pair.id = format_id(dataset.pairs.size());
      pair.image_id = scene->image_id;
      pair.question = candidate.question;
      pair.answer = verdict.answer;
      pair.qtype = qtype;
      pair.step = static_cast<int>(chain.length());
      pair.kb_related = false;
      for (const Fact &f : chain.facts)
        if (f.origin == Origin::Kb) pair.kb_related = true;
      pair.program = std::move(candidate.program);
      pair.reason = chain.facts;
      dataset.pairs.push_back(std::move(pair));

      ++rep.accepted;
      ++rep.accepted_by_qtype[qtype];
      if (dataset.pairs.back().kb_related) ++rep.kb_related;
    }
  }

  if (!dataset.empty()) {
    std::set<std::string> images;
    for (const QAPair &p : dataset.pairs) images.insert(p.image_id);
    if (images.size() >= 3) assign_splits(dataset, cfg.split_ratios, cfg.seed);
  }
  return dataset;
}

}  // namespace krvqr
