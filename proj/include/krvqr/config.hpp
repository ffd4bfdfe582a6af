#pragma once

#include <string>
#include <string_view>

#include "krvqr/types.hpp"

namespace krvqr {

// Key/value generation settings, one `key = value` per line, `#` comments.
// Recognized keys: seed, max_route_len, answer_cap, split_ratios (three
// comma-separated numbers), max_attempts_per_image,
// enforce_triplet_once_qtypes (comma-separated qtypes), strict_render
// (true/false). Unknown keys are format errors so typos surface early.
// Settings start from `base`, so flags can still override afterwards.
GenerationConfig parse_generation_config_text(std::string_view text,
                                              const std::string &source_name,
                                              const GenerationConfig &base = {});

GenerationConfig parse_generation_config(const std::string &path,
                                         const GenerationConfig &base = {});

}  // namespace krvqr
