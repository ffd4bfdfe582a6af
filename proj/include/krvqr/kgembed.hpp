#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "krvqr/types.hpp"

namespace krvqr {

using Vec = std::vector<double>;

// Componentwise complex rotation: each entity is a d-dimensional complex
// vector split into real and imaginary parts, each relation a d-dimensional
// unit-modulus rotation. Relations are stored as angles, so the modulus is
// exactly 1 by construction; cos/sin views are derived on demand.
class KgEmbedding {
 public:
  KgEmbedding() = default;
  KgEmbedding(std::vector<std::string> entity_labels, std::vector<std::string> relation_labels,
              int dim);

  int dim() const { return dim_; }
  size_t entity_count() const { return entity_labels_.size(); }
  size_t relation_count() const { return relation_labels_.size(); }
  const std::vector<std::string> &entity_labels() const { return entity_labels_; }
  const std::vector<std::string> &relation_labels() const { return relation_labels_; }
  std::optional<uint32_t> entity_index(const std::string &label) const;
  std::optional<uint32_t> relation_index(const std::string &label) const;

  Vec &entity_re(uint32_t e) { return ent_re_[e]; }
  Vec &entity_im(uint32_t e) { return ent_im_[e]; }
  Vec &relation_angle(uint32_t r) { return rel_angle_[r]; }
  const Vec &entity_re(uint32_t e) const { return ent_re_[e]; }
  const Vec &entity_im(uint32_t e) const { return ent_im_[e]; }
  const Vec &relation_angle(uint32_t r) const { return rel_angle_[r]; }

  Vec relation_cos(uint32_t r) const;
  Vec relation_sin(uint32_t r) const;

  // Squared distance between the rotated head and the tail.
  double score(uint32_t head, uint32_t relation, uint32_t tail) const;

 private:
  int dim_ = 0;
  std::vector<std::string> entity_labels_;
  std::vector<std::string> relation_labels_;
  std::unordered_map<std::string, uint32_t> entity_index_;
  std::unordered_map<std::string, uint32_t> relation_index_;
  std::vector<Vec> ent_re_, ent_im_;
  std::vector<Vec> rel_angle_;
};

// Componentwise rotation of the head by the relation:
//   t = h·cos r − h_i·sin r_i,  t_i = h·sin r_i + h_i·cos r
std::pair<Vec, Vec> infer_tail(const Vec &h, const Vec &h_i, const Vec &cos_r, const Vec &sin_ri);

// Rotation recovered from a (head, tail) pair; the whole numerator is
// divided by the head modulus:
//   cos r = (h·t + h_i·t_i) / (h² + h_i²),  sin r_i = (h·t_i − h_i·t) / (h² + h_i²)
// Throws ZeroModulus when any component modulus falls below 1e-12.
std::pair<Vec, Vec> infer_relation(const Vec &h, const Vec &h_i, const Vec &t, const Vec &t_i);

// Inverse rotation of the tail:
//   h = t·cos r + t_i·sin r_i,  h_i = t_i·cos r − t·sin r_i
std::pair<Vec, Vec> infer_head(const Vec &t, const Vec &t_i, const Vec &cos_r, const Vec &sin_ri);

double score(const Vec &h, const Vec &h_i, const Vec &cos_r, const Vec &sin_ri, const Vec &t,
             const Vec &t_i);

struct TrainOptions {
  int dim = 50;
  int epochs = 50;
  double lr = 0.05;
  int negatives_per_positive = 4;
  uint64_t seed = 0;
  double margin = 6.0;

  void validate() const;  // throws InvalidHyperparameter
};

// Indices of one training triplet within an embedding.
struct EmbeddedTriple {
  uint32_t head = 0;
  uint32_t relation = 0;
  uint32_t tail = 0;
};

// Sparse gradient of the margin loss, keyed by parameter row. Shared rows
// (the relation, or an entity appearing on both sides) accumulate.
struct PairGradient {
  std::map<uint32_t, Vec> ent_re;
  std::map<uint32_t, Vec> ent_im;
  std::map<uint32_t, Vec> rel_angle;
};

double pair_loss(const KgEmbedding &emb, const EmbeddedTriple &pos, const EmbeddedTriple &neg,
                 double margin);

// Same loss, plus analytic gradients; the trainer applies exactly these, so
// a finite-difference check of this function covers the training step.
double pair_loss_grad(const KgEmbedding &emb, const EmbeddedTriple &pos, const EmbeddedTriple &neg,
                      double margin, PairGradient &grad);

// Margin-ranking SGD with uniform negative sampling (head or tail corrupted
// with probability 1/2 each). Deterministic under opts.seed. Entities are
// initialized uniformly in [−0.5/d, 0.5/d], angles uniformly in [−π, π).
KgEmbedding train(const KnowledgeBase &kb, const TrainOptions &opts);

struct LinkPredictionResult {
  double mean_rank = 0.0;  // 1-based
  double hits_at_1 = 0.0;
  size_t queries = 0;
};

// Tail prediction over all entities, ranked by ascending score. Score ties
// count against the true tail (it is placed after every tied candidate).
LinkPredictionResult link_predict_eval(const KgEmbedding &emb, const KnowledgeBase &kb_test);

void save_embedding(const std::string &path, const KgEmbedding &emb);
KgEmbedding load_embedding(const std::string &path);

}  // namespace krvqr
