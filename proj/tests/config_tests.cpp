#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>

#include "krvqr/config.hpp"
#include "krvqr/error.hpp"
#include "krvqr/types.hpp"

using namespace krvqr;

TEST_CASE("every setting parses and overrides the base") {
  std::string text =
      "# full example\n"
      "seed = 42\n"
      "max_route_len = 2\n"
      "answer_cap = 7   # inline comment\n"
      "max_attempts_per_image = 33\n"
      "strict_render = true\n"
      "split_ratios = 0.5, 0.25, 0.25\n"
      "enforce_triplet_once_qtypes = 2, 5\n"
      "\n";
  GenerationConfig cfg = parse_generation_config_text(text, "test.conf");
  CHECK(cfg.seed == 42);
  CHECK(cfg.max_route_len == 2);
  CHECK(cfg.answer_cap == 7);
  CHECK(cfg.max_attempts_per_image == 33);
  CHECK(cfg.strict_render == true);
  CHECK(cfg.split_ratios[0] == 0.5);
  CHECK(cfg.split_ratios[1] == 0.25);
  CHECK(cfg.split_ratios[2] == 0.25);
  CHECK(cfg.enforce_triplet_once_qtypes == std::set<int>{2, 5});
}

TEST_CASE("unset keys keep the base values") {
  GenerationConfig base;
  base.seed = 9;
  base.answer_cap = 3;
  GenerationConfig cfg = parse_generation_config_text("seed = 10\n", "test.conf", base);
  CHECK(cfg.seed == 10);
  CHECK(cfg.answer_cap == 3);
  CHECK(cfg.max_route_len == 2);

  GenerationConfig untouched = parse_generation_config_text("", "test.conf", base);
  CHECK(untouched.seed == 9);
  CHECK(untouched.answer_cap == 3);
}

TEST_CASE("none clears the triplet-once qtype set") {
  GenerationConfig cfg =
      parse_generation_config_text("enforce_triplet_once_qtypes = none\n", "test.conf");
  CHECK(cfg.enforce_triplet_once_qtypes.empty());
}

TEST_CASE("comments and blank lines are ignored") {
  std::string text =
      "\n"
      "   \n"
      "# whole-line comment\n"
      "seed = 5 # trailing comment\n"
      "  # indented comment\n";
  CHECK(parse_generation_config_text(text, "test.conf").seed == 5);
}

namespace {

void expect_parse_error(const std::string &text, const std::string &fragment) {
  try {
    parse_generation_config_text(text, "test.conf");
    FAIL("expected a parse failure for: " << text);
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find(fragment) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("malformed lines report the source location") {
  expect_parse_error("just words\n", "test.conf:1");
  expect_parse_error("seed = 1\nbad line\n", "test.conf:2");
  expect_parse_error("= 5\n", "empty key or value");
  expect_parse_error("seed =\n", "empty key or value");
  expect_parse_error("seed = # comment ate the value\n", "empty key or value");
}

TEST_CASE("unknown settings are rejected by name") {
  expect_parse_error("sede = 4\n", "unknown setting \"sede\"");
}

TEST_CASE("values must parse completely") {
  expect_parse_error("seed = 4x\n", "expected an unsigned integer");
  expect_parse_error("answer_cap = 1.5\n", "expected an integer");
  expect_parse_error("strict_render = yes\n", "expected true or false");
  expect_parse_error("split_ratios = 0.5, 0.5\n", "exactly 3");
  expect_parse_error("split_ratios = 0.5, 0.25, zz\n", "expected a number");
  expect_parse_error("enforce_triplet_once_qtypes = 2, x\n", "expected an integer");
}

TEST_CASE("boolean accepts the 0/1 spellings") {
  CHECK(parse_generation_config_text("strict_render = 1\n", "t").strict_render);
  CHECK_FALSE(parse_generation_config_text("strict_render = 0\n", "t").strict_render);
  CHECK_FALSE(parse_generation_config_text("strict_render = false\n", "t").strict_render);
}

TEST_CASE("the parsed config is validated") {
  CHECK_THROWS_AS(parse_generation_config_text("split_ratios = 0.5, 0.3, 0.1\n", "t"), Error);
  CHECK_THROWS_AS(parse_generation_config_text("split_ratios = 1.0, 0.0, 0.0\n", "t"), Error);
  CHECK_THROWS_AS(parse_generation_config_text("max_route_len = 3\n", "t"), Error);
  CHECK_THROWS_AS(parse_generation_config_text("answer_cap = 0\n", "t"), Error);
  CHECK_THROWS_AS(parse_generation_config_text("max_attempts_per_image = -1\n", "t"), Error);
  CHECK_THROWS_AS(parse_generation_config_text("enforce_triplet_once_qtypes = 9\n", "t"), Error);
}

TEST_CASE("missing config files raise io errors") {
  CHECK_THROWS_AS(parse_generation_config("/nonexistent/path.conf"), Error);
}
