#include "krvqr/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace krvqr {

using nlohmann::json;

SceneGraph clean_scene_graph(const RawSceneGraph &raw) {
  SceneGraph out;
  out.image_id = raw.image_id;

  std::unordered_set<int> kept_ids;
  for (const RawObject &obj : raw.objects) {
    std::string synset;
    for (const std::string &s : obj.synsets) {
      if (!normalize_label(s).empty()) {
        synset = s;
        break;
      }
    }
    if (synset.empty()) continue;
    if (kept_ids.count(obj.id)) continue;  // first record wins for a duplicated id
    SceneObject so;
    so.instance_id = obj.id;
    so.synset = SynsetId::from_raw(synset);
    so.display_name = normalize_label(obj.name);
    so.bbox = obj.bbox;
    out.objects.push_back(std::move(so));
    kept_ids.insert(obj.id);
  }
  std::sort(out.objects.begin(), out.objects.end(),
            [](const SceneObject &a, const SceneObject &b) { return a.instance_id < b.instance_id; });

  std::set<std::tuple<int, std::string, int>> seen;
  for (const RawRelation &rel : raw.relations) {
    std::string synset;
    for (const std::string &s : rel.synsets) {
      if (!normalize_label(s).empty()) {
        synset = s;
        break;
      }
    }
    if (synset.empty()) continue;
    if (!kept_ids.count(rel.subject_id) || !kept_ids.count(rel.object_id)) continue;
    if (rel.subject_id == rel.object_id) continue;
    RelationId predicate = RelationId::from_raw(synset);
    auto key = std::make_tuple(rel.subject_id, predicate.str(), rel.object_id);
    if (!seen.insert(key).second) continue;
    out.edges.push_back(SceneTriplet{rel.subject_id, std::move(predicate), rel.object_id});
  }
  std::sort(out.edges.begin(), out.edges.end(), [](const SceneTriplet &a, const SceneTriplet &b) {
    return std::tie(a.subject, a.predicate, a.object) < std::tie(b.subject, b.predicate, b.object);
  });
  return out;
}

ImageKnowledgeGraph merge_knowledge(const SceneGraph &scene, const KnowledgeBase &kb) {
  ImageKnowledgeGraph out;
  out.scene = scene;

  std::set<std::string> lemmas = scene.object_lemmas();
  std::set<uint32_t> matched;
  for (const std::string &lemma : lemmas) {
    for (uint32_t idx : kb.incident(lemma)) matched.insert(idx);
  }
  out.kb_edges.assign(matched.begin(), matched.end());
  std::sort(out.kb_edges.begin(), out.kb_edges.end(), [&](uint32_t a, uint32_t b) {
    const KnowledgeTriplet &ta = kb.triplet(a);
    const KnowledgeTriplet &tb = kb.triplet(b);
    auto ka = std::tie(ta.head, ta.relation, ta.tail);
    auto kb_ = std::tie(tb.head, tb.relation, tb.tail);
    if (ka != kb_) return ka < kb_;
    return a < b;
  });
  return out;
}

void ImportReport::note_skip(std::string message, size_t max_messages) {
  ++skipped;
  if (skip_messages.size() < max_messages) skip_messages.push_back(std::move(message));
}

namespace {

std::optional<std::array<double, 4>> bbox_from(const json &rec) {
  if (rec.contains("x") && rec.contains("y") && rec.contains("w") && rec.contains("h")) {
    return std::array<double, 4>{rec["x"].get<double>(), rec["y"].get<double>(),
                                 rec["w"].get<double>(), rec["h"].get<double>()};
  }
  if (rec.contains("bbox") && rec["bbox"].is_array() && rec["bbox"].size() == 4) {
    std::array<double, 4> box{};
    for (size_t i = 0; i < 4; ++i) box[i] = rec["bbox"][i].get<double>();
    return box;
  }
  return std::nullopt;
}

std::vector<std::string> string_list(const json &rec, const char *key) {
  std::vector<std::string> out;
  if (!rec.contains(key)) return out;
  const json &v = rec[key];
  if (v.is_string()) {
    out.push_back(v.get<std::string>());
  } else if (v.is_array()) {
    for (const auto &item : v)
      if (item.is_string()) out.push_back(item.get<std::string>());
  }
  return out;
}

// Relationship endpoints appear either as plain ids or as nested objects.
std::optional<int> endpoint_id(const json &rec, const char *id_key, const char *obj_key) {
  if (rec.contains(id_key) && rec[id_key].is_number()) return rec[id_key].get<int>();
  if (rec.contains(obj_key) && rec[obj_key].is_object()) {
    const json &o = rec[obj_key];
    if (o.contains("object_id") && o["object_id"].is_number()) return o["object_id"].get<int>();
  }
  return std::nullopt;
}

std::string image_id_of(const json &rec) {
  if (rec.contains("image_id")) {
    const json &v = rec["image_id"];
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
  }
  if (rec.contains("id") && rec["id"].is_number_integer())
    return std::to_string(rec["id"].get<long long>());
  return "";
}

RawSceneGraph raw_graph_from(const json &rec) {
  RawSceneGraph g;
  g.image_id = image_id_of(rec);
  if (rec.contains("objects")) {
    for (const auto &o : rec["objects"]) {
      RawObject obj;
      if (o.contains("object_id") && o["object_id"].is_number())
        obj.id = o["object_id"].get<int>();
      else if (o.contains("id") && o["id"].is_number())
        obj.id = o["id"].get<int>();
      if (o.contains("name") && o["name"].is_string()) obj.name = o["name"].get<std::string>();
      else {
        auto names = string_list(o, "names");
        if (!names.empty()) obj.name = names.front();
      }
      obj.synsets = string_list(o, "synsets");
      if (obj.synsets.empty()) obj.synsets = string_list(o, "synset");
      obj.bbox = bbox_from(o);
      g.objects.push_back(std::move(obj));
    }
  }
  const char *rel_key = rec.contains("relationships") ? "relationships" : "relations";
  if (rec.contains(rel_key)) {
    for (const auto &r : rec[rel_key]) {
      RawRelation rel;
      auto subj = endpoint_id(r, "subject_id", "subject");
      auto obj = endpoint_id(r, "object_id", "object");
      if (!subj || !obj) continue;
      rel.subject_id = *subj;
      rel.object_id = *obj;
      if (r.contains("predicate") && r["predicate"].is_string())
        rel.predicate = r["predicate"].get<std::string>();
      rel.synsets = string_list(r, "synsets");
      if (rel.synsets.empty()) rel.synsets = string_list(r, "synset");
      g.relations.push_back(std::move(rel));
    }
  }
  return g;
}

}  // namespace

std::vector<RawSceneGraph> import_vg(const std::string &path, ImportReport &report) {
  std::ifstream in(path);
  if (!in) throw io_error(path, "cannot open for reading");

  std::vector<RawSceneGraph> out;
  auto consume = [&](const json &rec, size_t ordinal) {
    if (!rec.is_object()) {
      report.note_skip(path + ": record " + std::to_string(ordinal) + " is not an object");
      return;
    }
    RawSceneGraph g = raw_graph_from(rec);
    if (g.image_id.empty()) {
      report.note_skip(path + ": record " + std::to_string(ordinal) + " lacks an image id");
      return;
    }
    ++report.parsed;
    out.push_back(std::move(g));
  };

  // Either one JSON document (array, or {"images": [...]}) or JSONL.
  char first = '\0';
  in >> std::ws;
  first = static_cast<char>(in.peek());
  if (first == '[' || first == '{') {
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error &e) {
      throw format_error(path, e.what());
    }
    if (doc.is_object() && doc.contains("images")) doc = doc["images"];
    if (doc.is_object()) {
      consume(doc, 0);
    } else if (doc.is_array()) {
      size_t ordinal = 0;
      for (const auto &rec : doc) consume(rec, ordinal++);
    } else {
      throw format_error(path, "expected a JSON array of scene graphs");
    }
  } else {
    throw format_error(path, "expected a JSON document");
  }
  return out;
}

namespace {

bool kb_row_from_json(const std::string &line, KnowledgeTriplet &out, std::string &why) {
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::parse_error &e) {
    why = e.what();
    return false;
  }
  if (!rec.is_object()) {
    why = "row is not a JSON object";
    return false;
  }
  for (const char *key : {"head", "relation", "tail", "surface"}) {
    if (!rec.contains(key) || !rec[key].is_string()) {
      why = std::string("missing string field \"") + key + "\"";
      return false;
    }
  }
  try {
    out.head = EntityId::from_raw(rec["head"].get<std::string>());
    out.relation = RelationId::from_raw(rec["relation"].get<std::string>());
    out.tail = EntityId::from_raw(rec["tail"].get<std::string>());
  } catch (const Error &e) {
    why = e.what();
    return false;
  }
  out.surface_text = rec["surface"].get<std::string>();
  out.source = KnowledgeSource::Synthetic;
  if (rec.contains("source") && rec["source"].is_string()) {
    if (auto s = knowledge_source_from(rec["source"].get<std::string>())) out.source = *s;
  }
  return true;
}

bool kb_row_from_tsv(const std::string &line, KnowledgeTriplet &out, std::string &why) {
  std::vector<std::string> cols;
  std::string col;
  std::istringstream ss(line);
  while (std::getline(ss, col, '\t')) cols.push_back(col);
  if (cols.size() < 4) {
    why = "expected at least 4 tab-separated columns (head, relation, tail, surface)";
    return false;
  }
  try {
    out.head = EntityId::from_raw(cols[0]);
    out.relation = RelationId::from_raw(cols[1]);
    out.tail = EntityId::from_raw(cols[2]);
  } catch (const Error &e) {
    why = e.what();
    return false;
  }
  out.surface_text = cols[3];
  out.source = KnowledgeSource::Synthetic;
  if (cols.size() >= 5) {
    if (auto s = knowledge_source_from(cols[4])) out.source = *s;
  }
  return true;
}

}  // namespace

KnowledgeBase import_kb(const std::string &path, ImportReport &report) {
  std::ifstream in(path);
  if (!in) throw io_error(path, "cannot open for reading");

  bool tsv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".tsv") == 0;
  KnowledgeBase kb;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    KnowledgeTriplet triplet;
    std::string why;
    bool ok = tsv ? kb_row_from_tsv(line, triplet, why) : kb_row_from_json(line, triplet, why);
    if (ok) {
      try {
        kb.add(std::move(triplet));
        ++report.parsed;
        continue;
      } catch (const Error &e) {
        why = e.what();
      }
    }
    report.note_skip(path + ":" + std::to_string(line_no) + ": " + why);
  }
  return kb;
}

}  // namespace krvqr
