#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "krvqr/error.hpp"

namespace krvqr {

// Canonical form shared by every identifier in the toolkit: trimmed,
// ASCII-lowercased, underscores turned into spaces, whitespace runs
// collapsed to a single space.
std::string normalize_label(std::string_view raw);

// "bicycle.n.01" -> "bicycle". Labels that do not end in a
// ".<letter>.<digits>" sense suffix are returned unchanged.
std::string lemma_of(std::string_view label);

bool is_synset_form(std::string_view label);

// Interned handle into a SymbolTable. Equal ids <=> equal strings.
struct Symbol {
  uint32_t id = 0;

  friend bool operator==(Symbol, Symbol) = default;
  friend auto operator<=>(Symbol, Symbol) = default;
};

// Append-only interner. Normalizes on insert; resolve() returns the
// normalized string. Numeric ids are stable within a run only; anything
// persisted is serialized as strings.
class SymbolTable {
 public:
  Symbol intern(std::string_view raw);
  // Lookup without inserting; returns false when the label was never interned.
  bool find(std::string_view raw, Symbol &out) const;
  const std::string &resolve(Symbol s) const;
  size_t size() const { return labels_.size(); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, uint32_t> index_;
};

namespace detail {

template <typename Tag>
class TaggedLabel {
 public:
  TaggedLabel() = default;

  static TaggedLabel from_raw(std::string_view raw) {
    std::string normalized = normalize_label(raw);
    if (normalized.empty()) throw empty_label_error(std::string(raw));
    TaggedLabel out;
    out.value_ = std::move(normalized);
    return out;
  }

  const std::string &str() const { return value_; }
  bool empty() const { return value_.empty(); }

  friend bool operator==(const TaggedLabel &, const TaggedLabel &) = default;
  friend auto operator<=>(const TaggedLabel &, const TaggedLabel &) = default;

 private:
  std::string value_;
};

}  // namespace detail

// Class label of a scene object or predicate, e.g. "girl.n.01".
using SynsetId = detail::TaggedLabel<struct SynsetTag>;
// Knowledge-base entity lemma, e.g. "umbrella" or "keep out rain".
using EntityId = detail::TaggedLabel<struct EntityTag>;
// Relation name, image predicate lemma or KB relation, e.g. "hold", "usedfor".
using RelationId = detail::TaggedLabel<struct RelationTag>;

}  // namespace krvqr
