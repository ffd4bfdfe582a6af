#include "krvqr/jsonl.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "krvqr/error.hpp"
#include "krvqr/graph.hpp"

namespace krvqr {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string location(const std::string &source, size_t line) {
  return source + ":" + std::to_string(line);
}

ordered_json parse_line(const std::string &line, const std::string &source, size_t line_no) {
  ordered_json j = ordered_json::parse(line, nullptr, false);
  if (j.is_discarded()) throw format_error(location(source, line_no), "invalid JSON record");
  if (!j.is_object()) throw format_error(location(source, line_no), "record is not an object");
  return j;
}

template <typename Fn>
void for_each_line(std::istream &in, Fn &&fn) {
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    fn(line, line_no);
  }
}

std::ifstream open_input(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw io_error(path, "cannot open for reading");
  return in;
}

std::ofstream open_output(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw io_error(path, "cannot open for writing");
  return out;
}

}  // namespace

void write_dataset(std::ostream &out, const Dataset &d) {
  for (const QAPair &p : d.pairs) {
    ordered_json j;
    j["id"] = p.id;
    j["image_id"] = p.image_id;
    j["question"] = p.question;
    j["answer"] = p.answer;
    j["qtype"] = p.qtype;
    j["step"] = p.step;
    j["kb_related"] = p.kb_related;
    j["program"] = print_program(p.program);
    ordered_json reason = ordered_json::array();
    for (const Fact &f : p.reason)
      reason.push_back(ordered_json::array({f.head, f.relation, f.tail, to_string(f.origin)}));
    j["reason"] = reason;
    j["split"] = to_string(p.split);
    out << j.dump() << '\n';
  }
}

void write_dataset_file(const std::string &path, const Dataset &d) {
  auto out = open_output(path);
  write_dataset(out, d);
}

Dataset read_dataset(std::istream &in, const std::string &source_name) {
  Dataset d;
  for_each_line(in, [&](const std::string &line, size_t line_no) {
    ordered_json j = parse_line(line, source_name, line_no);
    try {
      QAPair p;
      p.id = j.at("id").get<std::string>();
      p.image_id = j.at("image_id").get<std::string>();
      p.question = j.at("question").get<std::string>();
      p.answer = j.at("answer").get<std::string>();
      p.qtype = j.at("qtype").get<int>();
      p.step = j.at("step").get<int>();
      p.kb_related = j.at("kb_related").get<bool>();
      p.program = parse_program(j.at("program").get<std::string>());
      for (const auto &row : j.at("reason")) {
        if (!row.is_array() || row.size() != 4)
          throw format_error(location(source_name, line_no),
                             "reason rows are [head, relation, tail, origin]");
        auto origin = origin_from(row[3].get<std::string>());
        if (!origin)
          throw format_error(location(source_name, line_no),
                             "unknown origin \"" + row[3].get<std::string>() + "\"");
        p.reason.push_back(Fact{row[0].get<std::string>(), row[1].get<std::string>(),
                                row[2].get<std::string>(), *origin});
      }
      auto split = split_from(j.at("split").get<std::string>());
      if (!split)
        throw format_error(location(source_name, line_no),
                           "unknown split \"" + j.at("split").get<std::string>() + "\"");
      p.split = *split;
      d.pairs.push_back(std::move(p));
    } catch (const ordered_json::exception &e) {
      throw format_error(location(source_name, line_no), e.what());
    }
  });
  return d;
}

Dataset read_dataset_file(const std::string &path) {
  auto in = open_input(path);
  return read_dataset(in, path);
}

void write_scenes(std::ostream &out, const std::vector<SceneGraph> &scenes) {
  for (const SceneGraph &g : scenes) {
    ordered_json j;
    j["image_id"] = g.image_id;
    ordered_json objects = ordered_json::array();
    for (const SceneObject &o : g.objects) {
      ordered_json jo;
      jo["id"] = o.instance_id;
      jo["synset"] = o.synset.str();
      jo["name"] = o.display_name;
      if (o.bbox) jo["bbox"] = *o.bbox;
      objects.push_back(std::move(jo));
    }
    j["objects"] = objects;
    ordered_json relations = ordered_json::array();
    for (const SceneTriplet &e : g.edges) {
      ordered_json je;
      je["subject"] = e.subject;
      je["predicate"] = e.predicate.str();
      je["object"] = e.object;
      relations.push_back(std::move(je));
    }
    j["relations"] = relations;
    out << j.dump() << '\n';
  }
}

void write_scenes_file(const std::string &path, const std::vector<SceneGraph> &scenes) {
  auto out = open_output(path);
  write_scenes(out, scenes);
}

std::vector<SceneGraph> read_scenes(std::istream &in, const std::string &source_name) {
  std::vector<SceneGraph> scenes;
  for_each_line(in, [&](const std::string &line, size_t line_no) {
    ordered_json j = parse_line(line, source_name, line_no);
    try {
      RawSceneGraph raw;
      raw.image_id = j.at("image_id").is_string() ? j.at("image_id").get<std::string>()
                                                  : j.at("image_id").dump();
      for (const auto &jo : j.at("objects")) {
        RawObject o;
        o.id = jo.at("id").get<int>();
        o.synsets.push_back(jo.at("synset").get<std::string>());
        if (jo.contains("name")) o.name = jo.at("name").get<std::string>();
        if (jo.contains("bbox")) o.bbox = jo.at("bbox").get<std::array<double, 4>>();
        raw.objects.push_back(std::move(o));
      }
      for (const auto &je : j.at("relations")) {
        RawRelation r;
        r.subject_id = je.at("subject").get<int>();
        r.synsets.push_back(je.at("predicate").get<std::string>());
        r.object_id = je.at("object").get<int>();
        raw.relations.push_back(std::move(r));
      }
      // Cleaning is idempotent, so re-running it on cleaned records only
      // re-checks the invariants.
      scenes.push_back(clean_scene_graph(raw));
    } catch (const ordered_json::exception &e) {
      throw format_error(location(source_name, line_no), e.what());
    }
  });
  return scenes;
}

std::vector<SceneGraph> read_scenes_file(const std::string &path) {
  auto in = open_input(path);
  return read_scenes(in, path);
}

void write_kb(std::ostream &out, const KnowledgeBase &kb) {
  for (const KnowledgeTriplet &t : kb.triplets()) {
    ordered_json j;
    j["head"] = t.head.str();
    j["relation"] = t.relation.str();
    j["tail"] = t.tail.str();
    j["surface"] = t.surface_text;
    j["source"] = to_string(t.source);
    out << j.dump() << '\n';
  }
}

void write_kb_file(const std::string &path, const KnowledgeBase &kb) {
  auto out = open_output(path);
  write_kb(out, kb);
}

void write_predictions(std::ostream &out, const std::vector<Prediction> &preds) {
  for (const Prediction &p : preds) {
    ordered_json j;
    j["id"] = p.id;
    j["answer"] = p.answer;
    out << j.dump() << '\n';
  }
}

std::vector<Prediction> read_predictions(std::istream &in, const std::string &source_name) {
  std::vector<Prediction> preds;
  for_each_line(in, [&](const std::string &line, size_t line_no) {
    ordered_json j = parse_line(line, source_name, line_no);
    try {
      preds.push_back(
          Prediction{j.at("id").get<std::string>(), j.at("answer").get<std::string>()});
    } catch (const ordered_json::exception &e) {
      throw format_error(location(source_name, line_no), e.what());
    }
  });
  return preds;
}

std::vector<Prediction> read_predictions_file(const std::string &path) {
  auto in = open_input(path);
  return read_predictions(in, path);
}

std::string report_to_json(const GenerationReport &r) {
  ordered_json j;
  j["images"] = r.images;
  j["images_without_edges"] = r.images_without_edges;
  j["attempts"] = r.attempts;
  j["accepted"] = r.accepted;
  j["kb_related"] = r.kb_related;
  ordered_json by_qtype = ordered_json::array();
  for (uint64_t n : r.accepted_by_qtype) by_qtype.push_back(n);
  j["accepted_by_qtype"] = by_qtype;
  ordered_json rejected = ordered_json::object();
  for (const auto &[reason, count] : r.rejected) rejected[reason] = count;
  j["rejected"] = rejected;
  return j.dump(2);
}

}  // namespace krvqr
