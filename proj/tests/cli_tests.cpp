#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// KRVQR_CLI_PATH and KRVQR_DEMO_DIR are injected by the build.

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string &args, const std::string &env_prefix = "") {
  std::string command = env_prefix + KRVQR_CLI_PATH " " + args + " 2>&1";
  FILE *pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  std::array<char, 4096> buffer;
  size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    result.output.append(buffer.data(), n);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path p =
        fs::temp_directory_path() / ("krvqr_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string q(const fs::path &p) { return "\"" + p.string() + "\""; }

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::string kScenes = std::string(KRVQR_DEMO_DIR) + "/scenes.jsonl";
const std::string kKb = std::string(KRVQR_DEMO_DIR) + "/kb.jsonl";

}  // namespace

TEST_CASE("--help exits 0 and lists the subcommands") {
  RunResult r = run_cli("--help");
  CHECK(r.exit_code == 0);
  for (const char *name : {"generate", "oracle", "split", "score", "embed-train", "retrieve"})
    CHECK(r.output.find(name) != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("bogus-subcommand").exit_code == 2);
  CHECK(run_cli("generate").exit_code == 2);       // missing required options
  CHECK(run_cli("oracle --image img1").exit_code == 2);
}

TEST_CASE("data errors exit with 1") {
  CHECK(run_cli("stats --dataset /nonexistent/d.jsonl").exit_code == 1);
  RunResult r = run_cli("oracle --scenes " + kScenes + " --image img1 --program \"(Qar_I\"");
  CHECK(r.exit_code == 1);  // malformed program
}

TEST_CASE("KRVQR_THREADS must be a positive integer") {
  CHECK(run_cli("--help", "KRVQR_THREADS=abc ").exit_code == 2);
  CHECK(run_cli("--help", "KRVQR_THREADS=0 ").exit_code == 2);
  CHECK(run_cli("--help", "KRVQR_THREADS=4 ").exit_code == 0);
}

TEST_CASE("oracle answers a program against the demo scene") {
  RunResult r = run_cli("oracle --scenes " + kScenes + " --kb " + kKb +
                        " --image img1 --program \"(Qar_I girl holds)\"");
  CHECK(r.exit_code == 0);
  CHECK(r.output == "hotdog\n");

  // Nested program pulling in the knowledge base.
  r = run_cli("oracle --scenes " + kScenes + " --kb " + kKb +
              " --image img2 --program \"(Qrb_K faster (Qar_I man rides))\"");
  CHECK(r.exit_code == 0);
  CHECK(r.output == "car\n");

  r = run_cli("oracle --scenes " + kScenes + " --image img9 --program \"(Qar_I girl holds)\"");
  CHECK(r.exit_code == 1);  // unknown image id
}

TEST_CASE("generate is deterministic per seed and feeds the downstream tools") {
  fs::path a = scratch_dir() / "a.jsonl";
  fs::path b = scratch_dir() / "b.jsonl";
  fs::path c = scratch_dir() / "c.jsonl";
  std::string common = "generate --scenes " + kScenes + " --kb " + kKb + " ";

  CHECK(run_cli(common + "--seed 7 --out " + q(a)).exit_code == 0);
  CHECK(run_cli(common + "--seed 7 --out " + q(b)).exit_code == 0);
  CHECK(run_cli(common + "--seed 8 --out " + q(c)).exit_code == 0);

  std::string text_a = slurp(a);
  CHECK(text_a == slurp(b));
  CHECK(text_a != slurp(c));
  CHECK(text_a.find("\"qtype\"") != std::string::npos);

  SUBCASE("stats reads the dataset back") {
    RunResult r = run_cli("stats --dataset " + q(a));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"total\"") != std::string::npos);
  }

  SUBCASE("split reassigns by image deterministically") {
    fs::path s1 = scratch_dir() / "s1.jsonl";
    fs::path s2 = scratch_dir() / "s2.jsonl";
    std::string split = "split --dataset " + q(a) + " --ratios 0.5,0.25,0.25 --seed 3 --out ";
    CHECK(run_cli(split + q(s1)).exit_code == 0);
    CHECK(run_cli(split + q(s2)).exit_code == 0);
    CHECK(slurp(s1) == slurp(s2));
  }

  SUBCASE("a dataset used as its own predictions scores 100") {
    RunResult r = run_cli("score --dataset " + q(a) + " --predictions " + q(a));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("overall 100.00 (sample-weighted)") != std::string::npos);
  }

  SUBCASE("baseline predictions score above zero") {
    fs::path preds = scratch_dir() / "preds.jsonl";
    CHECK(run_cli("baseline --dataset " + q(a) + " --out " + q(preds)).exit_code == 0);
    RunResult r = run_cli("score --dataset " + q(a) + " --predictions " + q(preds));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("overall 0.00") == std::string::npos);
  }

  SUBCASE("retrieve emits facts for the kb-related questions") {
    RunResult r = run_cli("retrieve --dataset " + q(a) + " --kb " + kKb + " --k 4");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"facts\"") != std::string::npos);
  }
}

TEST_CASE("embedding round-trip through train and eval") {
  fs::path emb = scratch_dir() / "demo.emb";
  RunResult t = run_cli("embed-train --kb " + kKb + " --out " + q(emb) +
                        " --dim 8 --epochs 40 --seed 1");
  CHECK(t.exit_code == 0);
  CHECK(t.output.find("trained dim 8") != std::string::npos);

  RunResult e = run_cli("embed-eval --embedding " + q(emb) + " --kb " + kKb);
  CHECK(e.exit_code == 0);
  CHECK(e.output.find("mean_rank") != std::string::npos);
  CHECK(e.output.find("queries 16") != std::string::npos);

  CHECK(run_cli("embed-train --kb " + kKb + " --out " + q(emb) + " --dim 0").exit_code == 1);
}
