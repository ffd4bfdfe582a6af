#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "krvqr/error.hpp"

namespace krvqr {

enum class QueryKind { AB, AR, RB };
enum class Domain { Image, Kb };
enum class Origin { Image, Kb };

inline Domain domain_of(Origin o) { return o == Origin::Image ? Domain::Image : Domain::Kb; }

inline const char *to_string(Origin o) { return o == Origin::Image ? "image" : "kb"; }

inline std::optional<Origin> origin_from(std::string_view name) {
  if (name == "image") return Origin::Image;
  if (name == "kb") return Origin::Kb;
  return std::nullopt;
}

// A triplet at the label level, tagged with where it came from.
struct Fact {
  std::string head;
  std::string relation;
  std::string tail;
  Origin origin = Origin::Image;

  friend bool operator==(const Fact &, const Fact &) = default;
  friend auto operator<=>(const Fact &, const Fact &) = default;

  std::string key() const { return head + "\t" + relation + "\t" + tail; }
};

namespace detail {

// Value-semantic heap box so Query can hold an optional nested Query.
template <typename T>
class Box {
 public:
  Box() = default;
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box &other) : ptr_(other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr) {}
  Box(Box &&) noexcept = default;
  Box &operator=(const Box &other) {
    if (this != &other) ptr_ = other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr;
    return *this;
  }
  Box &operator=(Box &&) noexcept = default;

  const T &operator*() const { return *ptr_; }
  T &operator*() { return *ptr_; }
  const T *operator->() const { return ptr_.get(); }
  T *operator->() { return ptr_.get(); }

  friend bool operator==(const Box &a, const Box &b) {
    if (!a.ptr_ || !b.ptr_) return !a.ptr_ && !b.ptr_;
    return *a.ptr_ == *b.ptr_;
  }

 private:
  std::unique_ptr<T> ptr_;
};

}  // namespace detail

struct Query;

// An operand is either a concrete label or a nested query feeding the slot.
using Operand = std::variant<std::string, detail::Box<Query>>;

inline bool is_nested(const Operand &op) { return op.index() == 1; }
inline const std::string &operand_label(const Operand &op) { return std::get<std::string>(op); }
inline const Query &operand_query(const Operand &op) { return *std::get<detail::Box<Query>>(op); }

// One elementary lookup: two known entries of a triplet, asking for the third.
//   AB = (head, tail) -> relation
//   AR = (head, relation) -> tail
//   RB = (relation, tail) -> head
struct Query {
  QueryKind kind = QueryKind::AR;
  Domain domain = Domain::Image;
  Operand first;
  Operand second;

  friend bool operator==(const Query &, const Query &) = default;
};

// Groundtruth reasoning layout: one query, or two chained through the
// entity shared by two linked triplets. `support` carries the sampled
// triplets when the program came out of the generator; it is empty for
// programs parsed back from their text form.
struct Program {
  Query root;
  std::vector<Fact> support;

  friend bool operator==(const Program &a, const Program &b) { return a.root == b.root; }
};

int program_depth(const Query &root);

// Position of the nested operand in the root query, if any.
enum class NestedSlot { None, First, Second };
NestedSlot nested_slot(const Query &root);

// Shape -> question type:
//   depth 1:  AB -> 0, AR -> 1, RB -> 2
//   depth 2:  AB with nested head -> 3, AB with nested tail -> 4,
//             AR with nested head -> 5, RB with nested tail -> 6
// Throws InvalidProgram for shapes outside this table (e.g. a query nested
// in a relation slot).
int qtype_of(const Query &root);

inline int qtype_of(const Program &p) { return qtype_of(p.root); }

// Structural validity: depth <= 2, nested operand never in a relation slot,
// inner operands concrete. Returns an explanation for invalid shapes.
std::optional<std::string> check_program_shape(const Query &root);

// Text form, e.g. `(Qar_K (Qar_I girl holds) UsedFor)`. Printing and parsing
// round-trip bit-exactly; labels containing spaces, quotes or parentheses
// are double-quoted with backslash escapes.
std::string print_program(const Program &p);
std::string print_query(const Query &q);
Program parse_program(std::string_view text);  // throws FormatError / InvalidProgram

const char *query_token(QueryKind kind, Domain domain);

}  // namespace krvqr
