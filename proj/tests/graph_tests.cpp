#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "krvqr/graph.hpp"
#include "support/fixtures.hpp"

using namespace krvqr;
using fixtures::triplet;

namespace {

RawSceneGraph messy_raw() {
  RawSceneGraph raw;
  raw.image_id = "img9";
  raw.objects = {
      {7, "hotdog", {"Hot_Dog.n.01"}, {}},
      {3, "girl", {}, {}},                      // no synset, this record is skipped
      {3, "girl", {"", "girl.n.01"}, {}},       // same id, first usable synset wins
      {7, "", {"sausage.n.01"}, {}},            // duplicate id, earlier record wins
      {9, "table", {"table.n.01"}, {}},
      {11, "", {}, {}},                         // never labeled, dropped
  };
  raw.relations = {
      {3, "HOLDS", {"HOLDS"}, 7},
      {3, "holds", {"holds"}, 7},  // duplicate edge after normalization
      {7, "on", {"on"}, 9},
      {9, "on", {"on"}, 9},        // reflexive, dropped
      {3, "near", {"near"}, 42},   // dangling object id, dropped
      {11, "on", {"on"}, 9},       // endpoint has no label, dropped
  };
  return raw;
}

}  // namespace

TEST_CASE("clean_scene_graph fixes the known defects") {
  SceneGraph g = clean_scene_graph(messy_raw());
  // Expected surviving objects: 3 (girl), 7 (hot dog), 9 (table).
  REQUIRE(g.objects.size() == 3);
  CHECK(g.objects[0].instance_id == 3);
  CHECK(g.objects[0].synset.str() == "girl.n.01");
  CHECK(g.objects[1].instance_id == 7);
  CHECK(g.objects[1].synset.str() == "hot dog.n.01");
  CHECK(g.objects[2].instance_id == 9);

  // Expected surviving edges: 3-holds-7 once, 7-on-9.
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0].subject == 3);
  CHECK(g.edges[0].predicate.str() == "holds");
  CHECK(g.edges[0].object == 7);
  CHECK(g.edges[1].subject == 7);
  CHECK(g.edges[1].predicate.str() == "on");
  CHECK(g.edges[1].object == 9);

  CHECK(g.object_lemmas() == std::set<std::string>{"girl", "hot dog", "table"});
  CHECK(g.has_object_lemma("hot dog"));
  CHECK_FALSE(g.has_object_lemma("sausage"));
}

TEST_CASE("cleaning is idempotent") {
  SceneGraph once = clean_scene_graph(messy_raw());
  RawSceneGraph again;
  again.image_id = once.image_id;
  for (const SceneObject &o : once.objects)
    again.objects.push_back(RawObject{o.instance_id, o.display_name, {o.synset.str()}, o.bbox});
  for (const SceneTriplet &e : once.edges)
    again.relations.push_back(RawRelation{e.subject, e.predicate.str(), {e.predicate.str()}, e.object});
  SceneGraph twice = clean_scene_graph(again);
  REQUIRE(twice.objects.size() == once.objects.size());
  REQUIRE(twice.edges.size() == once.edges.size());
  for (size_t i = 0; i < once.objects.size(); ++i) {
    CHECK(twice.objects[i].instance_id == once.objects[i].instance_id);
    CHECK(twice.objects[i].synset == once.objects[i].synset);
  }
  for (size_t i = 0; i < once.edges.size(); ++i) {
    CHECK(twice.edges[i].subject == once.edges[i].subject);
    CHECK(twice.edges[i].predicate == once.edges[i].predicate);
    CHECK(twice.edges[i].object == once.edges[i].object);
  }
}

TEST_CASE("merge_knowledge keeps exactly the incident triplets") {
  SceneGraph scene = fixtures::make_scene(
      "imgA", {{1, "girl.n.01"}, {2, "hotdog.n.01"}, {3, "table.n.01"}},
      {{1, "holds", 2}, {2, "on", 3}});

  KnowledgeBase kb;
  kb.add(triplet("hotdog", "isa", "food"));          // head matches
  kb.add(triplet("plane", "faster", "car"));         // no endpoint matches
  kb.add(triplet("food", "atlocation", "kitchen"));  // no endpoint matches
  kb.add(triplet("wood", "partof", "table"));        // tail matches
  kb.add(triplet("girl", "isa", "person"));          // head matches

  ImageKnowledgeGraph g = merge_knowledge(scene, kb);

  // Brute-force oracle: any triplet with head or tail in {girl, hotdog, table}.
  std::vector<uint32_t> expected;
  for (uint32_t i = 0; i < kb.size(); ++i) {
    const KnowledgeTriplet &t = kb.triplet(i);
    if (scene.has_object_lemma(t.head.str()) || scene.has_object_lemma(t.tail.str()))
      expected.push_back(i);
  }
  REQUIRE(g.kb_edges.size() == expected.size());
  CHECK(std::is_permutation(g.kb_edges.begin(), g.kb_edges.end(), expected.begin()));

  // Sorted by (head, relation, tail): girl-isa-person, hotdog-isa-food, wood-partof-table.
  REQUIRE(g.kb_edges.size() == 3);
  CHECK(kb.triplet(g.kb_edges[0]).head.str() == "girl");
  CHECK(kb.triplet(g.kb_edges[1]).head.str() == "hotdog");
  CHECK(kb.triplet(g.kb_edges[2]).head.str() == "wood");
}

TEST_CASE("KnowledgeBase lookups agree with a linear scan") {
  KnowledgeBase kb;
  kb.add(triplet("a", "r1", "b"));
  kb.add(triplet("a", "r1", "c"));
  kb.add(triplet("a", "r2", "b"));
  kb.add(triplet("b", "r1", "c"));
  kb.add(triplet("a", "r1", "b"));  // duplicate row kept

  CHECK(kb.size() == 5);
  CHECK(kb.entity_count() == 3);
  CHECK(kb.relation_count() == 2);
  CHECK(kb.match_head_tail("a", "b").size() == 3);   // r1, r2, r1-dup
  CHECK(kb.match_head_relation("a", "r1").size() == 3);
  CHECK(kb.match_relation_tail("r1", "c").size() == 2);
  CHECK(kb.match_head_tail("b", "a").empty());
  CHECK(kb.incident("b").size() == 4);
  CHECK(kb.incident("zzz").empty());

  // First-seen entity order: heads before tails per row.
  CHECK(kb.entity_labels() == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("KnowledgeBase rejects reflexive rows unless allowed") {
  KnowledgeBase kb;
  CHECK_THROWS_AS(kb.add(triplet("a", "r", "a")), Error);
  CHECK(kb.add(triplet("a", "r", "a"), true) == 0);
  CHECK(kb.size() == 1);
}
