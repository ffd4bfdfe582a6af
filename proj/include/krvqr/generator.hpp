#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "krvqr/executor.hpp"
#include "krvqr/rng.hpp"
#include "krvqr/templates.hpp"
#include "krvqr/types.hpp"

namespace krvqr {

// One or two linked facts. Length-2 chains satisfy
// facts[0].tail == facts[1].head (the shared middle entity).
struct TripletChain {
  std::vector<Fact> facts;

  size_t length() const { return facts.size(); }
};

// Global bookkeeping that makes admission decisions history-dependent:
//  - answer_counts caps how often a (qtype, answer) pair may occur among
//    KB-related questions;
//  - used_knowledge enforces that a knowledge triplet backs at most one
//    question across the configured qtypes;
//  - emitted suppresses repeated question text within one image.
struct ConstraintLedger {
  std::map<std::pair<int, std::string>, int> answer_counts;
  std::set<std::string> used_knowledge;
  std::set<std::string> emitted;

  static std::string emitted_key(const std::string &image_id, const std::string &question) {
    return image_id + "\t" + question;
  }
};

// Draws routes of length 1..max_len from an image knowledge graph. Scene
// edges come first in the edge numbering, KB edges after, so draws are
// reproducible for a fixed graph and seed. Consecutive scene edges are
// linked through the same object instance; any link involving a KB edge
// matches by label.
class RouteSampler {
 public:
  RouteSampler(const ImageKnowledgeGraph &g, const KnowledgeBase &kb);

  bool empty() const { return edges_.empty(); }
  size_t edge_count() const { return edges_.size(); }

  // Uniform over the starting edge, then uniform over {stop} plus the
  // one-step extensions of that edge.
  TripletChain sample(Rng &rng, int max_len) const;

 private:
  struct Edge {
    Fact fact;
    int subject_instance = -1;  // -1 for KB edges
    int object_instance = -1;
  };

  std::vector<int> successors(int index) const;

  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::vector<int>> by_head_label_;
  std::unordered_map<int, std::vector<int>> by_subject_instance_;
};

// Convenience wrapper that builds a sampler for a single draw.
// Throws NoRoute when the graph has no edges.
TripletChain sample_route(const ImageKnowledgeGraph &g, const KnowledgeBase &kb, Rng &rng,
                          int max_len);

// Builds the nested query program for a chain. kinds holds one query kind
// per fact. For a single fact the kind is the probe: AB asks the relation,
// AR the tail, RB the head; a lone KB fact only supports RB, because
// probing its relation or tail would leave the image out of the question
// entirely. For a 2-chain exactly one kind must recover the shared middle
// entity (AR on the first fact or RB on the second); that query nests
// inside the other. The four workable kind pairs map onto qtypes 3..6:
//   (AR, AB) -> 3   (AB, RB) -> 4   (AR, AR) -> 5   (RB, RB) -> 6
// Throws IncompatibleKinds for any other combination.
Program compose_program(const TripletChain &chain, const std::vector<QueryKind> &kinds);

// Kind combinations compose_program accepts for a chain, in qtype order.
std::vector<std::vector<QueryKind>> kind_choices(const TripletChain &chain);

struct Candidate {
  Program program;
  TripletChain chain;
  int qtype = 0;
  std::string image_id;
  std::string question;
};

struct AdmitDecision {
  bool accepted = false;
  std::string reason;  // one of the RejectReason names below when rejected
  std::string answer;  // filled when accepted
};

// Rejection reason names, also used as report counter keys.
namespace reject {
inline constexpr const char *kDuplicate = "duplicate_question";
inline constexpr const char *kNotUnique = "not_unique_answer";
inline constexpr const char *kAnswerCap = "answer_cap";
inline constexpr const char *kTripletReuse = "triplet_reuse";
inline constexpr const char *kUngrounded = "ungrounded";
inline constexpr const char *kMissingSurface = "missing_surface_form";
}  // namespace reject

// Applies the admission rules in order:
//   duplicate question text for the image;
//   the program must have exactly one answer;
//   KB-related (qtype, answer) pairs may occur at most answer_cap times;
//   a KB triplet may back at most one question across the configured qtypes;
//   grounding: for qtypes 2 and 5, when the answer names a scene object and
//   the program consults the KB, the KB side must pick out that object
//   unambiguously (at least two KB candidates, exactly one in the scene).
// Accepting commits all ledger updates at once.
AdmitDecision admit(const Candidate &candidate, const AnswerSet &result, ConstraintLedger &ledger,
                    const ImageKnowledgeGraph &g, const KnowledgeBase &kb,
                    const GenerationConfig &cfg);

struct GenerationReport {
  uint64_t images = 0;
  uint64_t images_without_edges = 0;
  uint64_t attempts = 0;
  uint64_t accepted = 0;
  uint64_t kb_related = 0;
  std::array<uint64_t, 7> accepted_by_qtype{};
  std::map<std::string, uint64_t> rejected;  // keyed by reject reason
};

// Generates QA pairs for every scene. Images are processed in sorted
// image_id order with a per-image rng stream split from cfg.seed, so output
// is byte-identical for identical inputs. Split labels are assigned by
// image at the end using cfg.split_ratios.
Dataset generate(const std::vector<SceneGraph> &corpus, const KnowledgeBase &kb,
                 const GenerationConfig &cfg, const RelationRenderer &renderer,
                 GenerationReport *report = nullptr);

}  // namespace krvqr
