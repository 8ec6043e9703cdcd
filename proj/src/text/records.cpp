#include "agenda/text/records.hpp"

#include "agenda/core/errors.hpp"

namespace agenda::text {

namespace {

std::optional<std::string> opt_string(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) return std::nullopt;
  std::string value = it->get<std::string>();
  if (value.empty()) return std::nullopt;
  return value;
}

}  // namespace

std::vector<RawRecord> read_raw_records(const std::string& path) {
  JsonlReader reader(path);
  std::vector<RawRecord> records;
  Json j;
  std::size_t n = 0;
  while (reader.next(j)) {
    ++n;
    RawRecord r;
    try {
      r.id = j.at("id").get<std::string>();
      r.text = j.at("text").get<std::string>();
      r.corpus = j.at("corpus").get<std::string>();
    } catch (const Json::exception& e) {
      throw DataError(path + ": record " + std::to_string(n) +
                      " missing id/text/corpus: " + e.what());
    }
    r.seed_code = opt_string(j, "seed_code");
    r.timestamp = opt_string(j, "timestamp");
    r.stratum = opt_string(j, "stratum");
    records.push_back(std::move(r));
  }
  return records;
}

Json token_document_to_json(const TokenDocument& doc) {
  Json j;
  j["id"] = doc.id;
  j["corpus"] = doc.corpus;
  j["tokens"] = doc.tokens;
  if (doc.seed_topic) j["seed_topic"] = *doc.seed_topic;
  if (doc.timestamp) j["timestamp"] = *doc.timestamp;
  if (doc.stratum) j["stratum"] = *doc.stratum;
  return j;
}

TokenDocument token_document_from_json(const Json& j) {
  TokenDocument doc;
  doc.id = j.at("id").get<std::string>();
  doc.corpus = j.at("corpus").get<std::string>();
  doc.tokens = j.at("tokens").get<std::vector<std::uint32_t>>();
  if (j.contains("seed_topic")) doc.seed_topic = j["seed_topic"].get<int>();
  doc.timestamp = [&]() -> std::optional<std::string> {
    auto it = j.find("timestamp");
    if (it == j.end()) return std::nullopt;
    return it->get<std::string>();
  }();
  doc.stratum = [&]() -> std::optional<std::string> {
    auto it = j.find("stratum");
    if (it == j.end()) return std::nullopt;
    return it->get<std::string>();
  }();
  return doc;
}

void write_token_documents(const std::string& path,
                           const std::vector<TokenDocument>& docs,
                           const FileHeader& header) {
  JsonlWriter writer(path, header);
  for (const TokenDocument& doc : docs) {
    writer.write(token_document_to_json(doc));
  }
  writer.close();
}

std::vector<TokenDocument> read_token_documents(
    const std::string& path, std::optional<FileHeader>* header) {
  JsonlReader reader(path);
  if (header) *header = reader.header();
  std::vector<TokenDocument> docs;
  Json j;
  std::size_t n = 0;
  while (reader.next(j)) {
    ++n;
    try {
      docs.push_back(token_document_from_json(j));
    } catch (const Json::exception& e) {
      throw DataError(path + ": document " + std::to_string(n) + ": " +
                      e.what());
    }
  }
  return docs;
}

}  // namespace agenda::text
