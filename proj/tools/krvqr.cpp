#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "krvqr/config.hpp"
#include "krvqr/dataset.hpp"
#include "krvqr/error.hpp"
#include "krvqr/evaluation.hpp"
#include "krvqr/executor.hpp"
#include "krvqr/generator.hpp"
#include "krvqr/graph.hpp"
#include "krvqr/jsonl.hpp"
#include "krvqr/kgembed.hpp"
#include "krvqr/retrieval.hpp"

namespace {

using namespace krvqr;

void print_import_report(const std::string &what, const ImportReport &report) {
  std::cout << what << ": parsed " << report.parsed << ", skipped " << report.skipped << '\n';
  for (const std::string &message : report.skip_messages) std::cout << "  " << message << '\n';
  if (report.skip_messages.size() < report.skipped)
    std::cout << "  (further skip messages suppressed)\n";
}

KnowledgeBase load_kb(const std::string &path) {
  ImportReport report;
  KnowledgeBase kb = import_kb(path, report);
  if (report.skipped > 0)
    std::cerr << "warning: skipped " << report.skipped << " malformed KB rows in " << path
              << '\n';
  return kb;
}

const SceneGraph &find_scene(const std::vector<SceneGraph> &scenes, const std::string &image_id) {
  for (const SceneGraph &g : scenes)
    if (g.image_id == image_id) return g;
  throw Error(ErrorCode::UnknownEntity, "image \"" + image_id + "\" not found");
}

std::ofstream open_out(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw io_error(path, "cannot open for writing");
  return out;
}

// Writes to the file when a path is set, to stdout otherwise.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string &path) {
    if (!path.empty()) file_ = open_out(path);
  }
  std::ostream &stream() { return file_ ? *file_ : std::cout; }

 private:
  std::optional<std::ofstream> file_;
};

struct ImportArgs {
  std::string scenes, out_scenes, kb, out_kb;
};

int run_import(const ImportArgs &a) {
  if (a.scenes.empty() && a.kb.empty())
    throw CLI::ValidationError("import", "nothing to do: pass --scenes and/or --kb");
  if (!a.scenes.empty()) {
    ImportReport report;
    std::vector<RawSceneGraph> raw = import_vg(a.scenes, report);
    std::vector<SceneGraph> cleaned;
    size_t dropped = 0;
    for (const RawSceneGraph &r : raw) {
      SceneGraph g = clean_scene_graph(r);
      if (g.objects.empty()) {
        ++dropped;
        continue;
      }
      cleaned.push_back(std::move(g));
    }
    write_scenes_file(a.out_scenes, cleaned);
    print_import_report("scenes", report);
    std::cout << "kept " << cleaned.size() << " images";
    if (dropped > 0) std::cout << " (dropped " << dropped << " with no labeled objects)";
    std::cout << '\n';
  }
  if (!a.kb.empty()) {
    ImportReport report;
    KnowledgeBase kb = import_kb(a.kb, report);
    write_kb_file(a.out_kb, kb);
    print_import_report("kb", report);
    std::cout << "kb triplets " << kb.size() << ", entities " << kb.entity_count()
              << ", relations " << kb.relation_count() << '\n';
  }
  return 0;
}

struct MergeArgs {
  std::string scenes, kb, image, out;
};

int run_merge(const MergeArgs &a) {
  std::vector<SceneGraph> scenes = read_scenes_file(a.scenes);
  KnowledgeBase kb = load_kb(a.kb);
  OutputTarget target(a.out);
  for (const SceneGraph &scene : scenes) {
    if (!a.image.empty() && scene.image_id != a.image) continue;
    ImageKnowledgeGraph g = merge_knowledge(scene, kb);
    nlohmann::ordered_json j;
    j["image_id"] = scene.image_id;
    j["scene_edges"] = g.scene.edges.size();
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (uint32_t index : g.kb_edges) {
      const KnowledgeTriplet &t = kb.triplet(index);
      edges.push_back(
          nlohmann::ordered_json::array({t.head.str(), t.relation.str(), t.tail.str()}));
    }
    j["kb_edges"] = edges;
    target.stream() << j.dump() << '\n';
  }
  return 0;
}

struct GenerateArgs {
  std::string scenes, kb, out, report_path, config_path, relations;
  uint64_t seed = 0;
  bool seed_set = false;
  bool strict_render = false;
};

int run_generate(const GenerateArgs &a) {
  GenerationConfig cfg;
  if (!a.config_path.empty()) cfg = parse_generation_config(a.config_path);
  if (a.seed_set) cfg.seed = a.seed;
  if (a.strict_render) cfg.strict_render = true;

  std::vector<SceneGraph> scenes = read_scenes_file(a.scenes);
  KnowledgeBase kb = load_kb(a.kb);
  RelationRenderer renderer =
      a.relations.empty() ? RelationRenderer::builtin() : RelationRenderer::load(a.relations);

  GenerationReport report;
  Dataset dataset = generate(scenes, kb, cfg, renderer, &report);
  write_dataset_file(a.out, dataset);
  if (!a.report_path.empty()) open_out(a.report_path) << report_to_json(report) << '\n';

  std::cout << "generated " << report.accepted << " pairs (" << report.kb_related
            << " kb-related) from " << report.images << " images in " << report.attempts
            << " attempts\n";
  return 0;
}

struct StatsArgs {
  std::string dataset, json_path, csv_path;
};

int run_stats(const StatsArgs &a) {
  Dataset d = read_dataset_file(a.dataset);
  StatsReport report = stats(d);
  if (!a.json_path.empty()) open_out(a.json_path) << stats_to_json(report) << '\n';
  if (!a.csv_path.empty()) open_out(a.csv_path) << stats_to_csv(report);
  if (a.json_path.empty() && a.csv_path.empty()) std::cout << stats_to_json(report) << '\n';
  return 0;
}

struct SplitArgs {
  std::string dataset, out;
  std::vector<double> ratios{0.6, 0.2, 0.2};
  uint64_t seed = 0;
};

int run_split(const SplitArgs &a) {
  Dataset d = read_dataset_file(a.dataset);
  if (a.ratios.size() != 3)
    throw CLI::ValidationError("--ratios", "needs exactly three values");
  assign_splits(d, {a.ratios[0], a.ratios[1], a.ratios[2]}, a.seed);
  write_dataset_file(a.out, d);
  StatsReport report = stats(d);
  std::cout << "train " << report.split_totals[0] << ", val " << report.split_totals[1]
            << ", test " << report.split_totals[2] << '\n';
  return 0;
}

struct OracleArgs {
  std::string scenes, kb, image, program;
};

int run_oracle(const OracleArgs &a) {
  std::vector<SceneGraph> scenes = read_scenes_file(a.scenes);
  const SceneGraph &scene = find_scene(scenes, a.image);
  KnowledgeBase kb;
  if (!a.kb.empty()) kb = load_kb(a.kb);
  ImageKnowledgeGraph g = merge_knowledge(scene, kb);
  Program program = parse_program(a.program);
  AnswerSet answers = execute(program, g, kb);
  for (const auto &[value, support] : answers.values) std::cout << value << '\n';
  return 0;
}

struct EmbedTrainArgs {
  std::string kb, out;
  TrainOptions opts;
};

int run_embed_train(const EmbedTrainArgs &a) {
  KnowledgeBase kb = load_kb(a.kb);
  KgEmbedding emb = train(kb, a.opts);
  save_embedding(a.out, emb);
  std::cout << "trained dim " << emb.dim() << ", entities " << emb.entity_count()
            << ", relations " << emb.relation_count() << ", epochs " << a.opts.epochs << '\n';
  return 0;
}

struct EmbedEvalArgs {
  std::string embedding, kb;
};

int run_embed_eval(const EmbedEvalArgs &a) {
  KgEmbedding emb = load_embedding(a.embedding);
  KnowledgeBase kb = load_kb(a.kb);
  LinkPredictionResult result = link_predict_eval(emb, kb);
  std::printf("mean_rank %.4f\nhits_at_1 %.4f\nqueries %zu\n", result.mean_rank,
              result.hits_at_1, result.queries);
  return 0;
}

struct RetrieveArgs {
  std::string dataset, kb, id, out;
  size_t k = 16;
};

int run_retrieve(const RetrieveArgs &a) {
  Dataset d = read_dataset_file(a.dataset);
  KnowledgeBase kb = load_kb(a.kb);
  std::vector<std::string> corpus;
  corpus.reserve(d.pairs.size());
  for (const QAPair &p : d.pairs) corpus.push_back(p.question);
  TfIdfIndex index(corpus);

  OutputTarget target(a.out);
  for (const QAPair &p : d.pairs) {
    if (!a.id.empty() && p.id != a.id) continue;
    std::vector<KnowledgeTriplet> facts = retrieve_facts(rank_nouns(p.question, index), kb, a.k);
    nlohmann::ordered_json j;
    j["id"] = p.id;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const KnowledgeTriplet &t : facts)
      rows.push_back(
          nlohmann::ordered_json::array({t.head.str(), t.relation.str(), t.tail.str()}));
    j["facts"] = rows;
    target.stream() << j.dump() << '\n';
  }
  return 0;
}

struct BaselineArgs {
  std::string dataset, out;
};

int run_baseline(const BaselineArgs &a) {
  Dataset d = read_dataset_file(a.dataset);
  Dataset train;
  for (const QAPair &p : d.pairs)
    if (p.split == Split::Train) train.pairs.push_back(p);
  std::map<int, std::string> baseline = qtype_baseline(train);

  std::vector<Prediction> preds;
  preds.reserve(d.pairs.size());
  for (const QAPair &p : d.pairs) {
    auto it = baseline.find(p.qtype);
    preds.push_back(Prediction{p.id, it == baseline.end() ? "" : it->second});
  }
  auto out = open_out(a.out);
  write_predictions(out, preds);
  for (const auto &[qtype, answer] : baseline)
    std::cout << "qtype " << qtype << " -> " << answer << '\n';
  return 0;
}

struct ScoreArgs {
  std::string dataset, predictions, json_path;
};

int run_score(const ScoreArgs &a) {
  Dataset gold = read_dataset_file(a.dataset);
  std::vector<Prediction> preds = read_predictions_file(a.predictions);
  AccuracyReport report = score_predictions(preds, gold);
  std::cout << accuracy_table(report);
  if (!a.json_path.empty()) open_out(a.json_path) << accuracy_to_json(report) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  if (const char *threads = std::getenv("KRVQR_THREADS")) {
    char *end = nullptr;
    long v = std::strtol(threads, &end, 10);
    if (end == threads || *end != '\0' || v < 1) {
      std::cerr << "usage error: KRVQR_THREADS must be a positive integer, got \"" << threads
                << "\"\n";
      return 2;
    }
    // Every pipeline stage currently runs on one thread, so any cap >= 1 is
    // honored as-is.
  }

  CLI::App app{"scene-graph + knowledge-base VQA dataset toolkit"};
  app.require_subcommand(1);

  ImportArgs import_args;
  auto *cmd_import = app.add_subcommand(
      "import", "Import raw scene graphs and KB files into cleaned JSONL form");
  auto *opt_scenes = cmd_import->add_option("--scenes", import_args.scenes,
                                            "raw scene-graph JSON (array or {\"images\": [...]})");
  auto *opt_out_scenes =
      cmd_import->add_option("--out-scenes", import_args.out_scenes, "cleaned scenes JSONL");
  auto *opt_kb = cmd_import->add_option("--kb", import_args.kb, "KB JSONL or TSV");
  auto *opt_out_kb = cmd_import->add_option("--out-kb", import_args.out_kb, "normalized KB JSONL");
  opt_scenes->needs(opt_out_scenes);
  opt_out_scenes->needs(opt_scenes);
  opt_kb->needs(opt_out_kb);
  opt_out_kb->needs(opt_kb);
  cmd_import->callback([&] { run_import(import_args); });

  MergeArgs merge_args;
  auto *cmd_merge =
      app.add_subcommand("merge", "Attach KB triplets incident to each image's objects");
  cmd_merge->add_option("--scenes", merge_args.scenes, "cleaned scenes JSONL")->required();
  cmd_merge->add_option("--kb", merge_args.kb, "KB JSONL or TSV")->required();
  cmd_merge->add_option("--image", merge_args.image, "only this image id");
  cmd_merge->add_option("--out", merge_args.out, "output JSONL (default stdout)");
  cmd_merge->callback([&] { run_merge(merge_args); });

  GenerateArgs generate_args;
  auto *cmd_generate = app.add_subcommand("generate", "Generate a QA dataset");
  cmd_generate->add_option("--scenes", generate_args.scenes, "cleaned scenes JSONL")->required();
  cmd_generate->add_option("--kb", generate_args.kb, "KB JSONL or TSV")->required();
  cmd_generate->add_option("--out", generate_args.out, "dataset JSONL")->required();
  cmd_generate->add_option("--report", generate_args.report_path, "generation report JSON");
  cmd_generate->add_option("--config", generate_args.config_path, "key=value settings file");
  cmd_generate
      ->add_option_function<uint64_t>(
          "--seed",
          [&](uint64_t v) {
            generate_args.seed = v;
            generate_args.seed_set = true;
          },
          "master seed (overrides the config file)")
      ->expected(1);
  cmd_generate->add_option("--relations", generate_args.relations,
                           "relation phrase table (relation<TAB>phrase)");
  cmd_generate->add_flag("--strict-render", generate_args.strict_render,
                         "reject questions whose relation lacks a phrase entry");
  cmd_generate->callback([&] { run_generate(generate_args); });

  StatsArgs stats_args;
  auto *cmd_stats = app.add_subcommand("stats", "Dataset statistics");
  cmd_stats->add_option("--dataset", stats_args.dataset, "dataset JSONL")->required();
  cmd_stats->add_option("--json", stats_args.json_path, "write the JSON report here");
  cmd_stats->add_option("--csv", stats_args.csv_path, "write the per-qtype CSV here");
  cmd_stats->callback([&] { run_stats(stats_args); });

  SplitArgs split_args;
  auto *cmd_split = app.add_subcommand("split", "Reassign train/val/test by image");
  cmd_split->add_option("--dataset", split_args.dataset, "dataset JSONL")->required();
  cmd_split->add_option("--out", split_args.out, "output JSONL")->required();
  cmd_split->add_option("--ratios", split_args.ratios, "train,val,test ratios")
      ->delimiter(',')
      ->expected(3);
  cmd_split->add_option("--seed", split_args.seed, "shuffle seed");
  cmd_split->callback([&] { run_split(split_args); });

  OracleArgs oracle_args;
  auto *cmd_oracle = app.add_subcommand("oracle", "Execute a program against one image");
  cmd_oracle->add_option("--scenes", oracle_args.scenes, "cleaned scenes JSONL")->required();
  cmd_oracle->add_option("--kb", oracle_args.kb, "KB JSONL or TSV");
  cmd_oracle->add_option("--image", oracle_args.image, "image id")->required();
  cmd_oracle->add_option("--program", oracle_args.program, "program text, e.g. (Qar_I girl holds)")
      ->required();
  cmd_oracle->callback([&] { run_oracle(oracle_args); });

  EmbedTrainArgs embed_train_args;
  auto *cmd_embed_train = app.add_subcommand("embed-train", "Train the rotation embedding");
  cmd_embed_train->add_option("--kb", embed_train_args.kb, "KB JSONL or TSV")->required();
  cmd_embed_train->add_option("--out", embed_train_args.out, "embedding file")->required();
  cmd_embed_train->add_option("--dim", embed_train_args.opts.dim, "embedding dimension");
  cmd_embed_train->add_option("--epochs", embed_train_args.opts.epochs, "training epochs");
  cmd_embed_train->add_option("--lr", embed_train_args.opts.lr, "SGD learning rate");
  cmd_embed_train->add_option("--negatives", embed_train_args.opts.negatives_per_positive,
                              "negative samples per positive");
  cmd_embed_train->add_option("--margin", embed_train_args.opts.margin, "ranking margin");
  cmd_embed_train->add_option("--seed", embed_train_args.opts.seed, "init/sampling seed");
  cmd_embed_train->callback([&] { run_embed_train(embed_train_args); });

  EmbedEvalArgs embed_eval_args;
  auto *cmd_embed_eval = app.add_subcommand("embed-eval", "Tail link-prediction evaluation");
  cmd_embed_eval->add_option("--embedding", embed_eval_args.embedding, "embedding file")
      ->required();
  cmd_embed_eval->add_option("--kb", embed_eval_args.kb, "test triplets (JSONL or TSV)")
      ->required();
  cmd_embed_eval->callback([&] { run_embed_eval(embed_eval_args); });

  RetrieveArgs retrieve_args;
  auto *cmd_retrieve = app.add_subcommand("retrieve", "TF-IDF supporting-fact retrieval");
  cmd_retrieve->add_option("--dataset", retrieve_args.dataset, "dataset JSONL")->required();
  cmd_retrieve->add_option("--kb", retrieve_args.kb, "KB JSONL or TSV")->required();
  cmd_retrieve->add_option("--k", retrieve_args.k, "facts per question");
  cmd_retrieve->add_option("--id", retrieve_args.id, "only this question id");
  cmd_retrieve->add_option("--out", retrieve_args.out, "output JSONL (default stdout)");
  cmd_retrieve->callback([&] { run_retrieve(retrieve_args); });

  BaselineArgs baseline_args;
  auto *cmd_baseline =
      app.add_subcommand("baseline", "Per-qtype modal-answer predictions from the train split");
  cmd_baseline->add_option("--dataset", baseline_args.dataset, "dataset JSONL")->required();
  cmd_baseline->add_option("--out", baseline_args.out, "predictions JSONL")->required();
  cmd_baseline->callback([&] { run_baseline(baseline_args); });

  ScoreArgs score_args;
  auto *cmd_score = app.add_subcommand("score", "Score predictions against a dataset");
  cmd_score->add_option("--dataset", score_args.dataset, "gold dataset JSONL")->required();
  cmd_score->add_option("--predictions", score_args.predictions, "predictions JSONL")->required();
  cmd_score->add_option("--json", score_args.json_path, "write the JSON report here");
  cmd_score->callback([&] { run_score(score_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
