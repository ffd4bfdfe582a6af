#include "krvqr/kgembed.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "krvqr/error.hpp"
#include "krvqr/rng.hpp"

namespace krvqr {

namespace {

constexpr double kModulusEps = 1e-12;

void require_same_dim(size_t a, size_t b, const char *what) {
  if (a != b)
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": " + std::to_string(a) +
                                                  " vs " + std::to_string(b));
}

}  // namespace

KgEmbedding::KgEmbedding(std::vector<std::string> entity_labels,
                         std::vector<std::string> relation_labels, int dim)
    : dim_(dim),
      entity_labels_(std::move(entity_labels)),
      relation_labels_(std::move(relation_labels)) {
  if (dim <= 0) throw Error(ErrorCode::InvalidHyperparameter, "dimension must be positive");
  for (uint32_t i = 0; i < entity_labels_.size(); ++i) entity_index_[entity_labels_[i]] = i;
  for (uint32_t i = 0; i < relation_labels_.size(); ++i) relation_index_[relation_labels_[i]] = i;
  ent_re_.assign(entity_labels_.size(), Vec(dim_, 0.0));
  ent_im_.assign(entity_labels_.size(), Vec(dim_, 0.0));
  rel_angle_.assign(relation_labels_.size(), Vec(dim_, 0.0));
}

std::optional<uint32_t> KgEmbedding::entity_index(const std::string &label) const {
  auto it = entity_index_.find(label);
  if (it == entity_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<uint32_t> KgEmbedding::relation_index(const std::string &label) const {
  auto it = relation_index_.find(label);
  if (it == relation_index_.end()) return std::nullopt;
  return it->second;
}

Vec KgEmbedding::relation_cos(uint32_t r) const {
  Vec out(dim_);
  for (int k = 0; k < dim_; ++k) out[k] = std::cos(rel_angle_[r][k]);
  return out;
}

Vec KgEmbedding::relation_sin(uint32_t r) const {
  Vec out(dim_);
  for (int k = 0; k < dim_; ++k) out[k] = std::sin(rel_angle_[r][k]);
  return out;
}

double KgEmbedding::score(uint32_t head, uint32_t relation, uint32_t tail) const {
  const Vec &h = ent_re_[head];
  const Vec &hi = ent_im_[head];
  const Vec &theta = rel_angle_[relation];
  const Vec &t = ent_re_[tail];
  const Vec &ti = ent_im_[tail];
  double s = 0.0;
  for (int k = 0; k < dim_; ++k) {
    double ch = std::cos(theta[k]);
    double sh = std::sin(theta[k]);
    double u = h[k] * ch - hi[k] * sh - t[k];
    double v = h[k] * sh + hi[k] * ch - ti[k];
    s += u * u + v * v;
  }
  return s;
}

std::pair<Vec, Vec> infer_tail(const Vec &h, const Vec &h_i, const Vec &cos_r, const Vec &sin_ri) {
  require_same_dim(h.size(), h_i.size(), "head parts");
  require_same_dim(cos_r.size(), sin_ri.size(), "rotation parts");
  require_same_dim(h.size(), cos_r.size(), "head vs rotation");
  size_t d = h.size();
  Vec t(d), t_i(d);
  for (size_t k = 0; k < d; ++k) {
    t[k] = h[k] * cos_r[k] - h_i[k] * sin_ri[k];
    t_i[k] = h[k] * sin_ri[k] + h_i[k] * cos_r[k];
  }
  return {std::move(t), std::move(t_i)};
}

std::pair<Vec, Vec> infer_relation(const Vec &h, const Vec &h_i, const Vec &t, const Vec &t_i) {
  require_same_dim(h.size(), h_i.size(), "head parts");
  require_same_dim(t.size(), t_i.size(), "tail parts");
  require_same_dim(h.size(), t.size(), "head vs tail");
  size_t d = h.size();
  Vec cos_r(d), sin_ri(d);
  for (size_t k = 0; k < d; ++k) {
    double modulus = h[k] * h[k] + h_i[k] * h_i[k];
    if (modulus < kModulusEps)
      throw Error(ErrorCode::ZeroModulus,
                  "head component " + std::to_string(k) + " has modulus below 1e-12");
    cos_r[k] = (h[k] * t[k] + h_i[k] * t_i[k]) / modulus;
    sin_ri[k] = (h[k] * t_i[k] - h_i[k] * t[k]) / modulus;
  }
  return {std::move(cos_r), std::move(sin_ri)};
}

std::pair<Vec, Vec> infer_head(const Vec &t, const Vec &t_i, const Vec &cos_r, const Vec &sin_ri) {
  require_same_dim(t.size(), t_i.size(), "tail parts");
  require_same_dim(cos_r.size(), sin_ri.size(), "rotation parts");
  require_same_dim(t.size(), cos_r.size(), "tail vs rotation");
  size_t d = t.size();
  Vec h(d), h_i(d);
  for (size_t k = 0; k < d; ++k) {
    h[k] = t[k] * cos_r[k] + t_i[k] * sin_ri[k];
    h_i[k] = t_i[k] * cos_r[k] - t[k] * sin_ri[k];
  }
  return {std::move(h), std::move(h_i)};
}

double score(const Vec &h, const Vec &h_i, const Vec &cos_r, const Vec &sin_ri, const Vec &t,
             const Vec &t_i) {
  require_same_dim(h.size(), h_i.size(), "head parts");
  require_same_dim(cos_r.size(), sin_ri.size(), "rotation parts");
  require_same_dim(t.size(), t_i.size(), "tail parts");
  require_same_dim(h.size(), cos_r.size(), "head vs rotation");
  require_same_dim(h.size(), t.size(), "head vs tail");
  double s = 0.0;
  for (size_t k = 0; k < h.size(); ++k) {
    double u = h[k] * cos_r[k] - h_i[k] * sin_ri[k] - t[k];
    double v = h[k] * sin_ri[k] + h_i[k] * cos_r[k] - t_i[k];
    s += u * u + v * v;
  }
  return s;
}

void TrainOptions::validate() const {
  if (dim <= 0) throw Error(ErrorCode::InvalidHyperparameter, "dim must be positive");
  if (epochs < 0) throw Error(ErrorCode::InvalidHyperparameter, "epochs must be non-negative");
  if (!(lr > 0) || !std::isfinite(lr))
    throw Error(ErrorCode::InvalidHyperparameter, "lr must be positive and finite");
  if (negatives_per_positive <= 0)
    throw Error(ErrorCode::InvalidHyperparameter, "negatives_per_positive must be positive");
  if (margin < 0 || !std::isfinite(margin))
    throw Error(ErrorCode::InvalidHyperparameter, "margin must be non-negative and finite");
}

namespace {

// d(score)/d(parameters) for one triple, scaled by `sign` and accumulated.
// u + iv is the rotated head minus the tail, componentwise.
void accumulate_score_grad(const KgEmbedding &emb, const EmbeddedTriple &triple, double sign,
                           PairGradient &grad) {
  int d = emb.dim();
  const Vec &h = emb.entity_re(triple.head);
  const Vec &hi = emb.entity_im(triple.head);
  const Vec &theta = emb.relation_angle(triple.relation);
  const Vec &t = emb.entity_re(triple.tail);
  const Vec &ti = emb.entity_im(triple.tail);

  auto row = [&](std::map<uint32_t, Vec> &m, uint32_t idx) -> Vec & {
    auto [it, inserted] = m.try_emplace(idx, Vec(d, 0.0));
    return it->second;
  };
  Vec &g_h = row(grad.ent_re, triple.head);
  Vec &g_hi = row(grad.ent_im, triple.head);
  Vec &g_t = row(grad.ent_re, triple.tail);
  Vec &g_ti = row(grad.ent_im, triple.tail);
  Vec &g_theta = row(grad.rel_angle, triple.relation);

  for (int k = 0; k < d; ++k) {
    double ch = std::cos(theta[k]);
    double sh = std::sin(theta[k]);
    double u = h[k] * ch - hi[k] * sh - t[k];
    double v = h[k] * sh + hi[k] * ch - ti[k];
    g_h[k] += sign * 2.0 * (u * ch + v * sh);
    g_hi[k] += sign * 2.0 * (-u * sh + v * ch);
    g_t[k] += sign * -2.0 * u;
    g_ti[k] += sign * -2.0 * v;
    g_theta[k] += sign * (2.0 * u * (-h[k] * sh - hi[k] * ch) + 2.0 * v * (h[k] * ch - hi[k] * sh));
  }
}

}  // namespace

double pair_loss(const KgEmbedding &emb, const EmbeddedTriple &pos, const EmbeddedTriple &neg,
                 double margin) {
  double value = margin + emb.score(pos.head, pos.relation, pos.tail) -
                 emb.score(neg.head, neg.relation, neg.tail);
  return value > 0 ? value : 0.0;
}

double pair_loss_grad(const KgEmbedding &emb, const EmbeddedTriple &pos, const EmbeddedTriple &neg,
                      double margin, PairGradient &grad) {
  double loss = pair_loss(emb, pos, neg, margin);
  if (loss <= 0) return 0.0;
  accumulate_score_grad(emb, pos, +1.0, grad);
  accumulate_score_grad(emb, neg, -1.0, grad);
  return loss;
}

KgEmbedding train(const KnowledgeBase &kb, const TrainOptions &opts) {
  opts.validate();
  if (kb.size() == 0)
    throw Error(ErrorCode::InvalidHyperparameter, "cannot train on an empty knowledge base");
  if (kb.entity_count() < 2)
    throw Error(ErrorCode::InvalidHyperparameter,
                "need at least 2 entities to sample negatives");

  KgEmbedding emb(kb.entity_labels(), kb.relation_labels(), opts.dim);
  Rng rng(mix_seed(opts.seed, "kgembed"));

  double span = 0.5 / static_cast<double>(opts.dim);
  for (uint32_t e = 0; e < emb.entity_count(); ++e) {
    for (int k = 0; k < opts.dim; ++k) emb.entity_re(e)[k] = rand_range(rng, -span, span);
    for (int k = 0; k < opts.dim; ++k) emb.entity_im(e)[k] = rand_range(rng, -span, span);
  }
  for (uint32_t r = 0; r < emb.relation_count(); ++r)
    for (int k = 0; k < opts.dim; ++k)
      emb.relation_angle(r)[k] = rand_range(rng, -std::numbers::pi, std::numbers::pi);

  std::vector<EmbeddedTriple> triples;
  triples.reserve(kb.size());
  for (const KnowledgeTriplet &t : kb.triplets())
    triples.push_back(EmbeddedTriple{*emb.entity_index(t.head.str()),
                                     *emb.relation_index(t.relation.str()),
                                     *emb.entity_index(t.tail.str())});

  std::vector<size_t> order(triples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  size_t n_entities = emb.entity_count();
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    shuffle_deterministic(order, rng);
    for (size_t idx : order) {
      const EmbeddedTriple &pos = triples[idx];
      for (int n = 0; n < opts.negatives_per_positive; ++n) {
        bool corrupt_head = rand_below(rng, 2) == 0;
        uint32_t original = corrupt_head ? pos.head : pos.tail;
        uint32_t replacement = original;
        while (replacement == original)
          replacement = static_cast<uint32_t>(rand_below(rng, n_entities));
        EmbeddedTriple neg = pos;
        (corrupt_head ? neg.head : neg.tail) = replacement;

        PairGradient grad;
        if (pair_loss_grad(emb, pos, neg, opts.margin, grad) <= 0) continue;
        for (auto &[e, g] : grad.ent_re)
          for (int k = 0; k < opts.dim; ++k) emb.entity_re(e)[k] -= opts.lr * g[k];
        for (auto &[e, g] : grad.ent_im)
          for (int k = 0; k < opts.dim; ++k) emb.entity_im(e)[k] -= opts.lr * g[k];
        for (auto &[r, g] : grad.rel_angle)
          for (int k = 0; k < opts.dim; ++k) emb.relation_angle(r)[k] -= opts.lr * g[k];
      }
    }
  }
  return emb;
}

LinkPredictionResult link_predict_eval(const KgEmbedding &emb, const KnowledgeBase &kb_test) {
  LinkPredictionResult result;
  uint64_t rank_sum = 0;
  uint64_t hits = 0;
  for (const KnowledgeTriplet &triplet : kb_test.triplets()) {
    auto h = emb.entity_index(triplet.head.str());
    auto r = emb.relation_index(triplet.relation.str());
    auto t = emb.entity_index(triplet.tail.str());
    if (!h || !t)
      throw Error(ErrorCode::UnknownEntity, "entity of test triplet " + triplet.key() +
                                                " is not embedded");
    if (!r)
      throw Error(ErrorCode::UnknownEntity,
                  "relation of test triplet " + triplet.key() + " is not embedded");

    double true_score = emb.score(*h, *r, *t);
    uint64_t rank = 1;
    for (uint32_t e = 0; e < emb.entity_count(); ++e) {
      if (e == *t) continue;
      if (emb.score(*h, *r, e) <= true_score) ++rank;  // ties count against the true tail
    }
    rank_sum += rank;
    if (rank == 1) ++hits;
    ++result.queries;
  }
  if (result.queries > 0) {
    result.mean_rank = static_cast<double>(rank_sum) / static_cast<double>(result.queries);
    result.hits_at_1 = static_cast<double>(hits) / static_cast<double>(result.queries);
  }
  return result;
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_embedding(const std::string &path, const KgEmbedding &emb) {
  std::ofstream out(path);
  if (!out) throw io_error(path, "cannot open for writing");
  out << "embedding " << emb.entity_count() << ' ' << emb.relation_count() << ' ' << emb.dim()
      << '\n';
  // Entity rows carry the real parts then the imaginary parts (2d values);
  // relation rows carry the d angles, which keeps reloads exact.
  for (uint32_t e = 0; e < emb.entity_count(); ++e) {
    out << "E\t" << emb.entity_labels()[e];
    for (double v : emb.entity_re(e)) out << '\t' << fmt17(v);
    for (double v : emb.entity_im(e)) out << '\t' << fmt17(v);
    out << '\n';
  }
  for (uint32_t r = 0; r < emb.relation_count(); ++r) {
    out << "R\t" << emb.relation_labels()[r];
    for (double v : emb.relation_angle(r)) out << '\t' << fmt17(v);
    out << '\n';
  }
}

KgEmbedding load_embedding(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw io_error(path, "cannot open for reading");
  std::string magic;
  size_t n_entities = 0, n_relations = 0;
  int dim = 0;
  if (!(in >> magic >> n_entities >> n_relations >> dim) || magic != "embedding")
    throw format_error(path, "expected header: embedding <entities> <relations> <dim>");
  in.ignore();  // trailing newline

  std::vector<std::string> entity_labels, relation_labels;
  std::vector<Vec> ent_values, rel_values;
  std::string line;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    size_t start = 0;
    while (true) {
      size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    std::string where = path + ":" + std::to_string(line_no);
    if (cols.size() < 3 || (cols[0] != "E" && cols[0] != "R"))
      throw format_error(where, "expected E or R row with label and values");
    bool is_entity = cols[0] == "E";
    size_t expected = is_entity ? 2 + 2 * static_cast<size_t>(dim) : 2 + static_cast<size_t>(dim);
    if (cols.size() != expected)
      throw format_error(where, "expected " + std::to_string(expected) + " columns, got " +
                                    std::to_string(cols.size()));
    Vec values(cols.size() - 2);
    for (size_t i = 2; i < cols.size(); ++i) {
      try {
        size_t used = 0;
        values[i - 2] = std::stod(cols[i], &used);
        if (used != cols[i].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception &) {
        throw format_error(where, "bad numeric value \"" + cols[i] + "\"");
      }
    }
    if (is_entity) {
      entity_labels.push_back(cols[1]);
      ent_values.push_back(std::move(values));
    } else {
      relation_labels.push_back(cols[1]);
      rel_values.push_back(std::move(values));
    }
  }
  if (entity_labels.size() != n_entities || relation_labels.size() != n_relations)
    throw format_error(path, "row counts do not match the header");

  KgEmbedding emb(std::move(entity_labels), std::move(relation_labels), dim);
  for (uint32_t e = 0; e < emb.entity_count(); ++e) {
    for (int k = 0; k < dim; ++k) {
      emb.entity_re(e)[k] = ent_values[e][k];
      emb.entity_im(e)[k] = ent_values[e][dim + k];
    }
  }
  for (uint32_t r = 0; r < emb.relation_count(); ++r)
    for (int k = 0; k < dim; ++k) emb.relation_angle(r)[k] = rel_values[r][k];
  return emb;
}

}  // namespace krvqr
