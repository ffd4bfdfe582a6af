#include "krvqr/templates.hpp"

#include <fstream>

#include "krvqr/symbols.hpp"

namespace krvqr {

namespace {

// Common Visual-Genome predicates and FVQA relations. Keys are normalized
// relation lemmas.
const std::pair<const char *, const char *> kBuiltinPhrases[] = {
    // image predicates (gerunds / prepositions)
    {"hold", "holding"},
    {"holds", "holding"},
    {"wear", "wearing"},
    {"wears", "wearing"},
    {"carry", "carrying"},
    {"carries", "carrying"},
    {"ride", "riding"},
    {"rides", "riding"},
    {"eat", "eating"},
    {"eats", "eating"},
    {"drink", "drinking"},
    {"push", "pushing"},
    {"pull", "pulling"},
    {"touch", "touching"},
    {"watch", "watching"},
    {"use", "using"},
    {"sit", "sitting on"},
    {"sit on", "sitting on"},
    {"stand on", "standing on"},
    {"stand", "standing on"},
    {"walk on", "walking on"},
    {"lie on", "lying on"},
    {"look at", "looking at"},
    {"park", "parked at"},
    {"cover", "covering"},
    {"contain", "containing"},
    {"contains", "containing"},
    {"on", "on"},
    {"in", "in"},
    {"near", "near"},
    {"under", "under"},
    {"behind", "behind"},
    {"above", "above"},
    {"below", "below"},
    {"beside", "beside"},
    {"along", "along"},
    {"inside", "inside"},
    {"next to", "next to"},
    {"in front of", "in front of"},
    {"attach", "attached to"},
    {"have", "having"},
    {"has", "having"},
    // KB relations (FVQA phrasing)
    {"usedfor", "used for"},
    {"used for", "used for"},
    {"capableof", "capable of"},
    {"isa", "a kind of"},
    {"is a", "a kind of"},
    {"atlocation", "found at"},
    {"locatednear", "located near"},
    {"hasproperty", "described as"},
    {"partof", "part of"},
    {"hasa", "having"},
    {"madeof", "made of"},
    {"relatedto", "related to"},
    {"createdby", "created by"},
    {"receivesaction", "able to be"},
    {"desires", "desiring"},
    {"desireof", "desire of"},
    {"symbolof", "a symbol of"},
    {"hassubevent", "involving"},
    {"category", "in the category of"},
    {"comparative", "compared with"},
    {"faster", "faster than"},
    {"slower", "slower than"},
    {"bigger", "bigger than"},
    {"smaller", "smaller than"},
    {"larger", "larger than"},
    {"taller", "taller than"},
    {"heavier", "heavier than"},
};

}  // namespace

RelationRenderer RelationRenderer::builtin() {
  RelationRenderer r;
  for (const auto &[relation, phrase] : kBuiltinPhrases) r.table_[relation] = phrase;
  return r;
}

RelationRenderer RelationRenderer::load(const std::string &path) {
  RelationRenderer r = builtin();
  std::ifstream in(path);
  if (!in) throw io_error(path, "cannot open relation table");
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw format_error(path + ":" + std::to_string(line_no), "expected relation<TAB>phrase");
    std::string relation = normalize_label(line.substr(0, tab));
    std::string phrase = line.substr(tab + 1);
    if (relation.empty() || phrase.empty())
      throw format_error(path + ":" + std::to_string(line_no), "empty relation or phrase");
    r.table_[relation] = phrase;
  }
  return r;
}

void RelationRenderer::set(const std::string &relation, const std::string &phrase) {
  table_[normalize_label(relation)] = phrase;
}

std::string RelationRenderer::phrase(const std::string &relation, bool strict) const {
  auto it = table_.find(relation);
  if (it != table_.end()) return it->second;
  if (strict)
    throw Error(ErrorCode::MissingSurfaceForm,
                "no surface form for relation \"" + relation + "\"");
  return relation;
}

namespace {

std::string entity_slot(const std::string &lemma, Origin origin) {
  // Scene objects read as definite references; KB entities stay bare.
  if (origin == Origin::Image) return "the " + lemma;
  return lemma;
}

}  // namespace

std::string render_question(const Program &p, int qtype, const RelationRenderer &renderer,
                            bool strict) {
  if (qtype != qtype_of(p))
    throw Error(ErrorCode::InvalidProgram, "qtype does not match the program shape");
  const std::vector<Fact> &support = p.support;
  if (support.size() != static_cast<size_t>(qtype <= 2 ? 1 : 2))
    throw Error(ErrorCode::InvalidProgram, "program lacks its supporting triplets");

  auto rel = [&](const Fact &f) { return renderer.phrase(f.relation, strict); };

  if (qtype <= 2) {
    const Fact &t = support[0];
    switch (qtype) {
      case 0:
        return "what is the relationship of " + entity_slot(t.head, t.origin) + " and " +
               entity_slot(t.tail, t.origin) + "?";
      case 1:
        return "what is " + entity_slot(t.head, t.origin) + " " + rel(t) + "?";
      default:
        return "what is " + rel(t) + " " + entity_slot(t.tail, t.origin) + "?";
    }
  }

  const Fact &t1 = support[0];
  const Fact &t2 = support[1];
  // Forward clause names the head and its relation; backward clause names
  // the relation and the tail. Which one appears depends on where the
  // nested query sits.
  std::string forward_clause = "the object that " + entity_slot(t1.head, t1.origin) + " is " + rel(t1);
  std::string backward_clause = "the object that is " + rel(t2) + " " + entity_slot(t2.tail, t2.origin);
  switch (qtype) {
    case 3:
      return "what is the relation of " + forward_clause + " and " +
             entity_slot(t2.tail, t2.origin) + "?";
    case 4:
      return "what is the relation of " + entity_slot(t1.head, t1.origin) + " and " +
             backward_clause + "?";
    case 5:
      return "what is " + forward_clause + " " + rel(t2) + "?";
    default:
      return "what is " + rel(t1) + " " + backward_clause + "?";
  }
}

std::string question_template_regex(int qtype) {
  switch (qtype) {
    case 0: return R"(^what is the relationship of .+ and .+\?$)";
    case 1: return R"(^what is .+ .+\?$)";
    case 2: return R"(^what is .+ .+\?$)";
    case 3: return R"(^what is the relation of the object that .+ is .+ and .+\?$)";
    case 4: return R"(^what is the relation of .+ and the object that is .+\?$)";
    case 5: return R"(^what is the object that .+ is .+\?$)";
    case 6: return R"(^what is .+ the object that is .+\?$)";
    default: throw Error(ErrorCode::InvalidProgram, "qtype outside 0..6");
  }
}

}  // namespace krvqr
