#include "krvqr/config.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "krvqr/error.hpp"

namespace krvqr {

namespace {

std::string trim(std::string_view s) {
  size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return "";
  size_t end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_commas(const std::string &value) {
  std::vector<std::string> parts;
  std::string current;
  std::istringstream in(value);
  while (std::getline(in, current, ',')) parts.push_back(trim(current));
  return parts;
}

uint64_t parse_u64(const std::string &value, const std::string &where) {
  try {
    size_t used = 0;
    uint64_t v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception &) {
    throw format_error(where, "expected an unsigned integer, got \"" + value + "\"");
  }
}

int parse_int(const std::string &value, const std::string &where) {
  try {
    size_t used = 0;
    int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception &) {
    throw format_error(where, "expected an integer, got \"" + value + "\"");
  }
}

double parse_double(const std::string &value, const std::string &where) {
  try {
    size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception &) {
    throw format_error(where, "expected a number, got \"" + value + "\"");
  }
}

bool parse_bool(const std::string &value, const std::string &where) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw format_error(where, "expected true or false, got \"" + value + "\"");
}

}  // namespace

GenerationConfig parse_generation_config_text(std::string_view text,
                                              const std::string &source_name,
                                              const GenerationConfig &base) {
  GenerationConfig cfg = base;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string where = source_name + ":" + std::to_string(line_no);
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string stripped = trim(line);
    if (stripped.empty()) continue;
    size_t eq = stripped.find('=');
    if (eq == std::string::npos) throw format_error(where, "expected key = value");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) throw format_error(where, "empty key or value");

    if (key == "seed") {
      cfg.seed = parse_u64(value, where);
    } else if (key == "max_route_len") {
      cfg.max_route_len = parse_int(value, where);
    } else if (key == "answer_cap") {
      cfg.answer_cap = parse_int(value, where);
    } else if (key == "max_attempts_per_image") {
      cfg.max_attempts_per_image = parse_int(value, where);
    } else if (key == "strict_render") {
      cfg.strict_render = parse_bool(value, where);
    } else if (key == "split_ratios") {
      auto parts = split_commas(value);
      if (parts.size() != 3)
        throw format_error(where, "split_ratios needs exactly 3 comma-separated numbers");
      for (int i = 0; i < 3; ++i) cfg.split_ratios[i] = parse_double(parts[i], where);
    } else if (key == "enforce_triplet_once_qtypes") {
      cfg.enforce_triplet_once_qtypes.clear();
      if (value != "none")
        for (const std::string &part : split_commas(value))
          cfg.enforce_triplet_once_qtypes.insert(parse_int(part, where));
    } else {
      throw format_error(where, "unknown setting \"" + key + "\"");
    }
  }
  cfg.validate();
  return cfg;
}

GenerationConfig parse_generation_config(const std::string &path, const GenerationConfig &base) {
  std::ifstream in(path);
  if (!in) throw io_error(path, "cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_generation_config_text(buffer.str(), path, base);
}

}  // namespace krvqr
