#include "krvqr/symbols.hpp"

#include <cctype>

namespace krvqr {

std::string normalize_label(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u == '_' || std::isspace(u)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(u)));
  }
  return out;
}

namespace {

// Finds the start of a trailing ".<letter>.<digits>" sense suffix, or npos.
size_t sense_suffix_pos(std::string_view label) {
  size_t last = label.rfind('.');
  if (last == std::string_view::npos || last + 1 >= label.size()) return std::string_view::npos;
  for (size_t i = last + 1; i < label.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(label[i]))) return std::string_view::npos;
  }
  if (last < 2 || label[last - 2] != '.') return std::string_view::npos;
  if (!std::isalpha(static_cast<unsigned char>(label[last - 1]))) return std::string_view::npos;
  size_t pos_dot = last - 2;
  if (pos_dot == 0) return std::string_view::npos;  // ".n.01" alone has no lemma
  return pos_dot;
}

}  // namespace

std::string lemma_of(std::string_view label) {
  size_t pos = sense_suffix_pos(label);
  if (pos == std::string_view::npos) return std::string(label);
  return std::string(label.substr(0, pos));
}

bool is_synset_form(std::string_view label) {
  return sense_suffix_pos(label) != std::string_view::npos;
}

Symbol SymbolTable::intern(std::string_view raw) {
  std::string normalized = normalize_label(raw);
  if (normalized.empty()) throw empty_label_error(std::string(raw));
  auto it = index_.find(normalized);
  if (it != index_.end()) return Symbol{it->second};
  uint32_t id = static_cast<uint32_t>(labels_.size());
  index_.emplace(normalized, id);
  labels_.push_back(std::move(normalized));
  return Symbol{id};
}

bool SymbolTable::find(std::string_view raw, Symbol &out) const {
  std::string normalized = normalize_label(raw);
  auto it = index_.find(normalized);
  if (it == index_.end()) return false;
  out = Symbol{it->second};
  return true;
}

const std::string &SymbolTable::resolve(Symbol s) const {
  return labels_.at(s.id);
}

}  // namespace krvqr
