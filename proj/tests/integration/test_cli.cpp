// End-to-end exercise of the installed binary: builds a small fixture on
// disk, drives preprocess/train/report/analyze through the real CLI, and
// checks exit codes, output presence and rerun stability.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef AGENDA_CLI_PATH
#error "AGENDA_CLI_PATH must point at the agenda binary"
#endif

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    std::cerr << "FAIL: " << what << "\n";
    ++failures;
  }
}

int run(const std::string& args) {
  const std::string command =
      std::string(AGENDA_CLI_PATH) + " " + args + " 2>>cli_test.log";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_fixture(const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream records(dir / "records.jsonl");
  // Small but non-degenerate: five corpora in the usual shape, three seed
  // topics with distinct word pools, varied document lengths so the pair
  // regressions have full rank.
  const std::vector<std::vector<std::string>> pools = {
      {"steuern", "schulden", "haushalt", "geld", "abgaben", "zins"},
      {"daten", "ueberwachung", "freiheit", "netz", "dienst", "schutz"},
      {"schule", "bildung", "lehrer", "unterricht", "kinder", "abschluss"}};
  int id = 0;
  auto emit = [&](const std::string& corpus, int topic, int length,
                  bool labeled, const std::string& stratum) {
    Json j;
    j["id"] = "r" + std::to_string(id++);
    const auto& pool = pools[static_cast<std::size_t>(topic - 1)];
    std::string text;
    for (int w = 0; w < length; ++w) {
      if (!text.empty()) text += ' ';
      text += pool[static_cast<std::size_t>((id * 3 + w * 5 + topic)) %
                   pool.size()];
    }
    j["text"] = text;
    j["corpus"] = corpus;
    if (labeled) j["seed_code"] = std::to_string(topic * 100 + 11);
    j["timestamp"] = "2013-09-1" + std::to_string(id % 5);
    if (!stratum.empty()) j["stratum"] = stratum;
    records << j.dump() << "\n";
  };
  for (int i = 0; i < 30; ++i) {
    emit("survey", i % 3 + 1, 3 + i % 3, true, "");
  }
  const char* social[4] = {"fb", "tw", "fbaud", "twaud"};
  const int counts[4] = {9, 12, 14, 18};
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < counts[c]; ++i) {
      emit(social[c], (i + c) % 3 + 1, 4 + (i + c) % 4, false,
           i % 2 ? "p1" : "p2");
    }
  }
  records.close();

  std::ofstream(dir / "scheme.tsv")
      << "1XX\tFinance\n2XX\tPrivacy\n3XX\tEducation\n";
  std::ofstream(dir / "stop.txt") << "und\n";

  Json config;
  config["paths"] = {{"records", (dir / "records.jsonl").string()},
                     {"seed_scheme", (dir / "scheme.tsv").string()},
                     {"stopwords", (dir / "stop.txt").string()}};
  config["corpora"] = Json::array(
      {Json{{"tag", "survey"}, {"medium", "none"}, {"actor", "survey"}, {"labeled", true}},
       Json{{"tag", "fb"}, {"medium", "facebook"}, {"actor", "politicians"}},
       Json{{"tag", "tw"}, {"medium", "twitter"}, {"actor", "politicians"}},
       Json{{"tag", "fbaud"}, {"medium", "facebook"}, {"actor", "audience"}},
       Json{{"tag", "twaud"}, {"medium", "twitter"}, {"actor", "audience"}}});
  config["balance"] = Json::array({Json{{"target", "fb"}, {"pool", "fbaud"}},
                                   Json{{"target", "tw"}, {"pool", "twaud"}}});
  config["preprocess"] = {{"min_doc_frequency", 1},
                          {"max_doc_frequency_fraction", 1.0}};
  config["model"] = {{"alpha", 1.0}, {"beta", 1.5}, {"sweeps", 5}, {"rng_seed", 11}};
  config["analytics"] = {{"prune", true}, {"hc", "HC1"}, {"top_n", 5}};
  std::ofstream(dir / "config.json") << config.dump(2) << "\n";
}

}  // namespace

int main() {
  const fs::path root =
      fs::temp_directory_path() / ("agenda-cli-test-" + std::to_string(::getpid()));
  fs::remove_all(root);
  write_fixture(root);
  const std::string config = (root / "config.json").string();
  const std::string out_a = (root / "out-a").string();
  const std::string out_b = (root / "out-b").string();

  // happy path
  expect(run("preprocess --config " + config + " --out " + out_a) == 0,
         "preprocess exits 0");
  expect(fs::exists(fs::path(out_a) / "tokens.jsonl"), "tokens written");
  expect(fs::exists(fs::path(out_a) / "vocabulary.jsonl"), "vocabulary written");
  expect(run("train --config " + config + " --out " + out_a) == 0,
         "train exits 0");
  expect(fs::exists(fs::path(out_a) / "state.jsonl"), "state written");
  expect(fs::exists(fs::path(out_a) / "diagnostics.jsonl"), "diagnostics written");
  expect(run("report --config " + config + " --out " + out_a) == 0,
         "report exits 0");
  expect(run("analyze --config " + config + " --out " + out_a) == 0,
         "analyze exits 0");
  for (const char* name :
       {"salience.tsv", "correlations.tsv", "top_words.txt", "daily_volume.tsv",
        "similarity_grid.tsv", "similarity_cells.jsonl", "regression_model1.tsv",
        "regression_model5.tsv", "prune_report.json", "labeling_report.txt"}) {
    expect(fs::exists(fs::path(out_a) / name), std::string(name) + " written");
  }

  // rerun determinism, file by file
  expect(run("preprocess --config " + config + " --out " + out_b) == 0,
         "second preprocess exits 0");
  expect(run("train --config " + config + " --out " + out_b) == 0,
         "second train exits 0");
  expect(run("analyze --config " + config + " --out " + out_b) == 0,
         "second analyze exits 0");
  for (const char* name : {"tokens.jsonl", "vocabulary.jsonl", "state.jsonl",
                           "salience.tsv", "similarity_grid.tsv"}) {
    expect(slurp(fs::path(out_a) / name) == slurp(fs::path(out_b) / name),
           std::string(name) + " byte-identical across reruns");
  }

  // seed override changes assignments but still succeeds
  const std::string out_c = (root / "out-c").string();
  expect(run("preprocess --config " + config + " --out " + out_c) == 0,
         "preprocess (seed run) exits 0");
  expect(run("train --config " + config + " --seed 99 --out " + out_c) == 0,
         "train with --seed exits 0");
  expect(slurp(fs::path(out_a) / "state.jsonl") !=
             slurp(fs::path(out_c) / "state.jsonl"),
         "different seed changes the state file");

  // resume: 2 sweeps then continue to 5 equals a straight 5-sweep run
  const std::string out_d = (root / "out-d").string();
  expect(run("preprocess --config " + config + " --out " + out_d) == 0,
         "preprocess (resume run) exits 0");
  expect(run("train --config " + config + " --sweeps 2 --out " + out_d) == 0,
         "short train exits 0");
  expect(run("train --config " + config + " --sweeps 5 --out " + out_d +
             " --resume " + (fs::path(out_d) / "state.jsonl").string()) == 0,
         "resumed train exits 0");
  expect(slurp(fs::path(out_d) / "state.jsonl") ==
             slurp(fs::path(out_a) / "state.jsonl"),
         "resumed run reproduces the uninterrupted state");

  // error classes
  {
    std::ofstream empty(root / "empty.jsonl");
    Json bad_config = Json::parse(slurp(root / "config.json"));
    bad_config["paths"]["records"] = (root / "empty.jsonl").string();
    std::ofstream(root / "config_empty.json") << bad_config.dump() << "\n";
    expect(run("preprocess --config " + (root / "config_empty.json").string() +
               " --out " + (root / "out-e").string()) == 3,
           "empty records file exits with the data-error code");

    Json missing = Json::parse(slurp(root / "config.json"));
    missing["paths"]["records"] = (root / "nope.jsonl").string();
    std::ofstream(root / "config_missing.json") << missing.dump() << "\n";
    expect(run("preprocess --config " + (root / "config_missing.json").string() +
               " --out " + (root / "out-f").string()) == 2,
           "missing records file exits with the config-error code");

    expect(run("analyze --config " + config + " --out " + out_a + " --state " +
               (root / "nope-state.jsonl").string()) == 3,
           "missing state file exits with the data-error code");
  }

  // environment variable supplies the default config path
  {
    const std::string command = std::string("AGENDA_CONFIG=") + config + " " +
                                AGENDA_CLI_PATH + " preprocess --out " +
                                (root / "out-env").string() +
                                " 2>>cli_test.log";
    const int status = std::system(command.c_str());
    expect(WIFEXITED(status) && WEXITSTATUS(status) == 0,
           "AGENDA_CONFIG env var picks the config");
  }

  if (failures == 0) {
    std::cout << "cli integration: all checks passed\n";
    fs::remove_all(root);
    return 0;
  }
  std::cerr << failures << " cli integration failure(s); fixture kept at "
            << root << "\n";
  return 1;
}
