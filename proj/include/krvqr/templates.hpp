#pragma once

#include <map>
#include <string>

#include "krvqr/types.hpp"

namespace krvqr {

// Surface forms for relations as they appear inside questions: gerunds for
// image predicates ("hold" -> "holding"), FVQA-style phrasing for KB
// relations ("usedfor" -> "used for"). Unlisted relations fall back to the
// raw label unless strict mode is on, in which case rendering throws
// MissingSurfaceForm.
class RelationRenderer {
 public:
  // Table with the built-in entries only.
  static RelationRenderer builtin();
  // Built-ins plus rows from a "relation<TAB>phrase" file; file rows win.
  static RelationRenderer load(const std::string &path);

  void set(const std::string &relation, const std::string &phrase);
  std::string phrase(const std::string &relation, bool strict) const;
  bool has(const std::string &relation) const { return table_.count(relation) > 0; }

 private:
  std::map<std::string, std::string> table_;
};

// Fixed question templates, one per question type:
//   0  what is the relationship of {A} and {B}?
//   1  what is {A} {r}?
//   2  what is {r} {B}?
//   3  what is the relation of the object that {A} is {r1} and {C}?
//   4  what is the relation of {A} and the object that is {r2} {C}?
//   5  what is the object that {A} is {r1} {r2}?
//   6  what is {r1} the object that is {r2} {C}?
// Entity slots filled from image triplets carry a "the" prefix; KB-side
// entity slots are rendered bare. {r} slots use RelationRenderer phrases.
//
// The program must carry its supporting triplets (program.support), since
// slot origins come from them. qtype must equal qtype_of(program).
std::string render_question(const Program &p, int qtype, const RelationRenderer &renderer,
                            bool strict = false);

// Anchored regex for one question type with every slot replaced by ".+".
std::string question_template_regex(int qtype);

}  // namespace krvqr
