#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "agenda/app/commands.hpp"
#include "agenda/app/run_config.hpp"
#include "agenda/core/errors.hpp"

using namespace agenda;
namespace fs = std::filesystem;

namespace {

// Three seeded word pools; optionally a fourth pool that exists only on the
// social corpora, so a new topic reliably forms and survives pruning.
struct CommandFixture {
  fs::path root;
  std::string config_path;
  std::string meta_path;

  explicit CommandFixture(bool with_alien_topic) {
    root = fs::temp_directory_path() /
           ("agenda-cmd-test-" + std::to_string(::getpid()) +
            (with_alien_topic ? "-a" : "-b"));
    fs::remove_all(root);
    fs::create_directories(root);

    const std::vector<std::vector<std::string>> pools = {
        {"steuern", "schulden", "haushalt", "geld", "sparen"},
        {"daten", "netz", "freiheit", "schutz", "dienste"},
        {"schule", "lehrer", "kinder", "studium", "unterricht"},
        {"wahlkampf", "plakate", "helfer", "termin", "buehne"}};

    std::ofstream records(root / "records.jsonl");
    int id = 0;
    auto emit = [&](const std::string& corpus, int topic, bool labeled) {
      const auto& pool = pools[std::size_t(topic - 1)];
      std::string text;
      for (int w = 0; w < 4 + (id % 3); ++w) {
        if (!text.empty()) text += ' ';
        text += pool[std::size_t((id * 7 + w * 3 + topic)) % pool.size()];
      }
      Json j;
      j["id"] = "r" + std::to_string(id++);
      j["text"] = text;
      j["corpus"] = corpus;
      if (labeled) j["seed_code"] = std::to_string(topic * 100 + 23);
      j["timestamp"] = "2013-09-2" + std::to_string(id % 8);
      records << j.dump() << '\n';
    };
    for (int i = 0; i < 36; ++i) emit("survey", 1 + i % 3, true);
    for (int i = 0; i < 48; ++i) {
      emit("fb", with_alien_topic && i % 2 ? 4 : 1 + i % 3, false);
    }
    for (int i = 0; i < 48; ++i) {
      emit("tw", with_alien_topic && i % 2 ? 4 : 1 + i % 3, false);
    }
    records.close();

    std::ofstream(root / "scheme.tsv") << "1XX\tone\n2XX\ttwo\n3XX\tthree\n";
    meta_path = (root / "topic_meta.jsonl").string();

    Json config;
    config["paths"] = {{"records", (root / "records.jsonl").string()},
                       {"seed_scheme", (root / "scheme.tsv").string()},
                       {"topic_meta", meta_path},
                       {"out_dir", (root / "out").string()}};
    config["corpora"] = Json::array(
        {Json{{"tag", "survey"}, {"medium", "none"}, {"actor", "survey"}, {"labeled", true}},
         Json{{"tag", "fb"}, {"medium", "facebook"}, {"actor", "politicians"}},
         Json{{"tag", "tw"}, {"medium", "twitter"}, {"actor", "politicians"}}});
    config["preprocess"] = {{"min_doc_frequency", 1},
                            {"max_doc_frequency_fraction", 1.0}};
    config["model"] = {{"alpha", 1.0}, {"beta", 1.5}, {"sweeps", 10}, {"rng_seed", 3}};
    config["analytics"] = {{"prune", true}, {"hc", "HC1"}, {"top_n", 6}};
    config_path = (root / "config.json").string();
    std::ofstream(config_path) << config.dump(2) << '\n';
  }

  ~CommandFixture() { fs::remove_all(root); }

  app::RunConfig load() const {
    return app::RunConfig::load(config_path, app::CliOverrides{});
  }
};

}  // namespace

TEST_SUITE_BEGIN("commands");

TEST_CASE("analyze requires metadata for retained new topics") {
  CommandFixture fixture(/*with_alien_topic=*/true);
  std::ostringstream log;
  app::RunConfig config = fixture.load();
  app::cmd_preprocess(config, log);
  app::cmd_train(config, log);
  app::cmd_report(config, log);
  CHECK(fs::exists(fs::path(config.out_dir) / "labeling_report.txt"));

  // without metadata: the error names the topic and carries its top words
  try {
    app::cmd_analyze(config, log);
    FAIL("expected ConfigError for the unlabeled new topic");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("top words:") != std::string::npos);
    CHECK(what.find("wahlkampf") != std::string::npos);
  }

  // supply metadata; the full bundle comes out
  int new_topic = 0;
  {
    std::ifstream report(fs::path(config.out_dir) / "labeling_report.txt");
    std::string line;
    while (std::getline(report, line)) {
      if (line.find("NEW, unlabeled") != std::string::npos) {
        new_topic = std::stoi(line.substr(6));
        break;
      }
    }
    REQUIRE(new_topic > 3);
    std::ofstream meta(fixture.meta_path);
    meta << Json{{"topic", new_topic}, {"label", "campaign"}, {"type", "policy"}}
                .dump()
         << '\n';
  }
  app::RunConfig with_meta = fixture.load();
  app::cmd_analyze(with_meta, log);
  for (const char* name : {"salience.tsv", "correlations.tsv", "top_words.txt",
                           "similarity_grid.tsv", "regression_model1.tsv"}) {
    CHECK(fs::exists(fs::path(with_meta.out_dir) / name));
  }

  // the salience table renders the survey cell of the new topic blank
  std::ifstream salience(fs::path(with_meta.out_dir) / "salience.tsv");
  std::string line;
  bool saw_blank = false;
  while (std::getline(salience, line)) {
    if (line.find("campaign") != std::string::npos) {
      saw_blank = line.find("new\t\t") != std::string::npos;
    }
  }
  CHECK(saw_blank);
}

TEST_CASE("analyze with zero new topics still emits the bundle") {
  CommandFixture fixture(/*with_alien_topic=*/false);
  std::ostringstream log;
  app::RunConfig config = fixture.load();
  app::cmd_preprocess(config, log);
  app::cmd_train(config, log);
  app::cmd_analyze(config, log);  // no metadata file exists, none needed
  for (const char* name : {"salience.tsv", "correlations.tsv",
                           "regression_model1.tsv", "regression_model5.tsv"}) {
    CHECK(fs::exists(fs::path(config.out_dir) / name));
  }
  // the new-topic dummy is constant and must have been dropped with a note
  std::ifstream regression(fs::path(config.out_dir) / "regression_model1.tsv");
  std::string all((std::istreambuf_iterator<char>(regression)),
                  std::istreambuf_iterator<char>());
  CHECK(all.find("dropped constant/duplicate predictor(s):") != std::string::npos);
  CHECK(all.find("new_topic") != std::string::npos);
}

TEST_SUITE_END();
