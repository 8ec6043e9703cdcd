#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "agenda/core/errors.hpp"
#include "agenda/model/persistence.hpp"
#include "agenda/model/sampler.hpp"
#include "agenda/oracle/synthetic.hpp"

using namespace agenda;
using namespace agenda::model;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() /
         (std::string("agenda-test-") + name + "-" +
          std::to_string(::getpid()));
}

oracle::SyntheticCorpus small_corpus(std::uint64_t seed) {
  oracle::SyntheticSpec spec;
  spec.seed_topics = 3;
  spec.extra_topics = 2;
  spec.vocab_size = 30;
  spec.labeled_docs = 12;
  spec.unlabeled_corpora = {{"m1", 30}, {"m2", 20}};
  spec.mean_length = 5.0;
  spec.rng_seed = seed;
  return oracle::generate_synthetic(spec);
}

}  // namespace

TEST_SUITE_BEGIN("persistence");

TEST_CASE("rng state round trips through text") {
  Rng a(42);
  for (int i = 0; i < 100; ++i) a.uniform01();
  Rng b = Rng::deserialize(a.serialize());
  CHECK(a == b);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
}

TEST_CASE("state file round trip with replay verification") {
  const auto corpus = small_corpus(1);
  ModelParams params;
  params.sweeps = 6;
  params.rng_seed = 44;
  auto run = run_inference(corpus.documents, params, 30, 3);

  const auto path = temp_file("state");
  FileHeader header;
  header.config_hash = "cafe";
  header.run_id = "cafe";
  header.seed = params.rng_seed;
  save_model_state(path.string(), run.state, run.rng, params.sweeps, 0xabcdull,
                   header);

  LoadedState loaded = load_model_state(path.string(), corpus.documents);
  CHECK(loaded.info.completed_sweeps == 6);
  CHECK(loaded.info.vocab_hash == 0xabcdull);
  CHECK(loaded.info.params.rng_seed == 44);
  CHECK(loaded.rng == run.rng);
  REQUIRE(loaded.state.document_count() == run.state.document_count());
  for (std::size_t i = 0; i < run.state.document_count(); ++i) {
    CHECK(loaded.state.assignment(i) == run.state.assignment(i));
  }
  CHECK(loaded.state.next_topic_id() == run.state.next_topic_id());
  CHECK_FALSE(loaded.state.verify_consistency().has_value());
  std::filesystem::remove(path);
}

TEST_CASE("tampered count tables fail the replay check") {
  const auto corpus = small_corpus(2);
  ModelParams params;
  params.sweeps = 3;
  params.rng_seed = 5;
  auto run = run_inference(corpus.documents, params, 30, 3);

  const auto path = temp_file("tampered");
  FileHeader header;
  save_model_state(path.string(), run.state, run.rng, 3, 0, header);

  // corrupt one token tally in the first topic line
  std::ifstream in(path);
  std::stringstream buffer;
  std::string line;
  bool corrupted = false;
  while (std::getline(in, line)) {
    if (!corrupted && line.find("\"tokens_labeled\":") != std::string::npos) {
      const auto pos = line.find("\"tokens_labeled\":");
      line.insert(pos + std::string("\"tokens_labeled\":").size(), "1");
      corrupted = true;
    }
    buffer << line << '\n';
  }
  in.close();
  REQUIRE(corrupted);
  std::ofstream out(path, std::ios::trunc);
  out << buffer.str();
  out.close();

  CHECK_THROWS_AS(load_model_state(path.string(), corpus.documents),
                  InvariantError);
  std::filesystem::remove(path);
}

TEST_CASE("missing documents are a data error") {
  const auto corpus = small_corpus(3);
  ModelParams params;
  params.sweeps = 2;
  auto run = run_inference(corpus.documents, params, 30, 3);
  const auto path = temp_file("missing");
  FileHeader header;
  save_model_state(path.string(), run.state, run.rng, 2, 0, header);

  auto fewer = corpus.documents;
  fewer.pop_back();
  CHECK_THROWS_AS(load_model_state(path.string(), fewer), DataError);
  std::filesystem::remove(path);
}

TEST_CASE("resumed inference equals an uninterrupted run") {
  const auto corpus = small_corpus(4);
  ModelParams params;
  params.sweeps = 10;
  params.rng_seed = 99;
  const auto full = run_inference(corpus.documents, params, 30, 3);

  // first half
  ModelParams half = params;
  half.sweeps = 5;
  auto part = run_inference(corpus.documents, half, 30, 3);
  const auto path = temp_file("resume");
  FileHeader header;
  save_model_state(path.string(), part.state, part.rng, 5, 0, header);

  // second half after reload
  LoadedState loaded = load_model_state(path.string(), corpus.documents);
  continue_inference(loaded.state, loaded.rng, 6, 10);

  for (std::size_t i = 0; i < full.state.document_count(); ++i) {
    CHECK(loaded.state.assignment(i) == full.state.assignment(i));
  }
  CHECK(loaded.rng == full.rng);
  std::filesystem::remove(path);
}

TEST_SUITE_END();
