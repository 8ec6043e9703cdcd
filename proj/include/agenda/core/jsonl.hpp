#pragma once

#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

namespace agenda {

using Json = nlohmann::json;

// First line of every file this project writes: identifies the format and the
// run that produced it, so downstream stages can detect mismatched inputs.
struct FileHeader {
  std::string format;
  int version = 1;
  std::string config_hash;
  std::string run_id;
  std::uint64_t seed = 0;
  Json extra = Json::object();

  Json to_json() const;
  static FileHeader from_json(const Json& j);
};

class JsonlWriter {
 public:
  JsonlWriter(const std::string& path, const FileHeader& header);
  void write(const Json& record);
  void close();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

class JsonlReader {
 public:
  explicit JsonlReader(const std::string& path);

  // Header of the file, if the first line carried one.
  const std::optional<FileHeader>& header() const { return header_; }

  // Next data record; false at end of file. Blank lines are skipped.
  bool next(Json& record);

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::optional<FileHeader> header_;
  std::optional<std::string> pending_;
  std::size_t line_number_ = 0;
};

}  // namespace agenda
