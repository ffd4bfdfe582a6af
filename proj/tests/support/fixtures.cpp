#include "fixtures.hpp"

#include <cassert>

#include "krvqr/rng.hpp"

namespace krvqr::fixtures {

KnowledgeTriplet triplet(const std::string &head, const std::string &relation,
                         const std::string &tail) {
  KnowledgeTriplet t;
  t.head = EntityId::from_raw(head);
  t.relation = RelationId::from_raw(relation);
  t.tail = EntityId::from_raw(tail);
  t.surface_text = head + " " + relation + " " + tail;
  t.source = KnowledgeSource::Synthetic;
  return t;
}

SceneGraph make_scene(const std::string &image_id, const std::vector<ObjectSpec> &objects,
                      const std::vector<EdgeSpec> &edges) {
  RawSceneGraph raw;
  raw.image_id = image_id;
  for (const ObjectSpec &o : objects)
    raw.objects.push_back(RawObject{o.id, "", {o.synset}, {}});
  for (const EdgeSpec &e : edges)
    raw.relations.push_back(RawRelation{e.subject, e.predicate, {e.predicate}, e.object});
  return clean_scene_graph(raw);
}

Corpus acceptance_corpus() {
  const std::vector<std::string> nouns = {
      "person", "dog",   "cat",  "car",   "bicycle", "tree",  "table", "chair", "ball",  "book",
      "cup",    "hat",   "bag",  "phone", "lamp",    "plate", "shoe",  "bench", "bird",  "horse"};
  const std::vector<std::string> predicates = {"holds", "near", "on",     "under",
                                               "behind", "wears", "beside"};

  Corpus corpus;

  // Scenes: 3-5 distinct objects, 2-4 edges per image, fixed seed.
  Rng rng(mix_seed(99, "fixture"));
  for (int i = 0; i < 50; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "fix%03d", i);
    size_t n_objects = 3 + rand_below(rng, 3);
    std::vector<ObjectSpec> objects;
    std::vector<size_t> pool(nouns.size());
    for (size_t k = 0; k < pool.size(); ++k) pool[k] = k;
    shuffle_deterministic(pool, rng);
    for (size_t k = 0; k < n_objects; ++k)
      objects.push_back({int(k + 1), nouns[pool[k]] + ".n.01"});

    size_t n_edges = 2 + rand_below(rng, 3);
    std::vector<EdgeSpec> edges;
    for (size_t k = 0; k < n_edges; ++k) {
      int a = int(1 + rand_below(rng, n_objects));
      int b = int(1 + rand_below(rng, n_objects));
      if (a == b) b = a % int(n_objects) + 1;
      edges.push_back({a, predicates[rand_below(rng, predicates.size())], b});
    }
    corpus.scenes.push_back(make_scene(id, objects, edges));
  }

  // KB: per noun a block of facts over shared category/place/material pools,
  // then chains off the category entities. Exactly 300 rows.
  const std::vector<std::string> categories = {"animal", "vehicle", "furniture", "clothing",
                                               "container"};
  const std::vector<std::string> places = {"park", "street", "kitchen", "office", "farm",
                                           "garage"};
  const std::vector<std::string> materials = {"wood", "metal", "plastic", "cloth"};
  const std::vector<std::string> abilities = {"move", "carry", "support", "cover"};

  size_t rows = 0;
  auto add = [&](const std::string &h, const std::string &r, const std::string &t) {
    corpus.kb.add(triplet(h, r, t));
    ++rows;
  };
  for (size_t i = 0; i < nouns.size(); ++i) {
    const std::string &n = nouns[i];
    add(n, "isa", categories[i % categories.size()]);
    add(n, "isa", categories[(i + 1) % categories.size()]);
    add(n, "atlocation", places[i % places.size()]);
    add(n, "atlocation", places[(i + 2) % places.size()]);
    add(n, "madeof", materials[i % materials.size()]);
    add(n, "capableof", abilities[i % abilities.size()]);
    add(n, "usedfor", abilities[(i + 1) % abilities.size()]);
    add(n, "partof", "scene " + std::to_string(i % 4));
  }
  for (const std::string &c : categories) {
    add(c, "atlocation", places[rows % places.size()]);
    add(c, "capableof", abilities[rows % abilities.size()]);
  }
  for (const std::string &p : places) add(p, "isa", "location");
  for (const std::string &m : materials) add(m, "isa", "substance");
  // Pad with distinct-tail variety rows up to exactly 300.
  size_t k = 0;
  while (rows < 300) {
    add(nouns[k % nouns.size()], "relatedto", nouns[(k + 3) % nouns.size()]);
    ++k;
  }
  assert(corpus.kb.size() == 300);
  return corpus;
}

KnowledgeBase embedding_kb() {
  KnowledgeBase kb;
  char a[16], b[16];
  for (int i = 0; i < 100; ++i) {
    std::snprintf(a, sizeof a, "e%03d", i);
    std::snprintf(b, sizeof b, "e%03d", (i + 1) % 100);
    kb.add(triplet(a, "succ", b));
  }
  for (int i = 0; i < 100; ++i) {
    std::snprintf(a, sizeof a, "e%03d", i);
    std::snprintf(b, sizeof b, "e%03d", (i + 13) % 100);
    kb.add(triplet(a, "skip", b));
  }
  assert(kb.size() == 200);
  return kb;
}

Dataset image_grid_dataset(size_t n) {
  Dataset d;
  for (size_t i = 0; i < n; ++i) {
    char img[32];
    std::snprintf(img, sizeof img, "img%04zu", i);
    QAPair p;
    p.id = "q" + std::to_string(i);
    p.image_id = img;
    p.question = "what is the relationship of the a and the b?";
    p.answer = "on";
    p.qtype = 0;
    p.step = 1;
    p.kb_related = false;
    p.program = parse_program("(Qab_I a b)");
    p.reason = {Fact{"a", "on", "b", Origin::Image}};
    p.split = Split::Train;
    d.pairs.push_back(std::move(p));
  }
  return d;
}

}  // namespace krvqr::fixtures
