#include "agenda/core/jsonl.hpp"

#include "agenda/core/errors.hpp"

namespace agenda {

Json FileHeader::to_json() const {
  Json h;
  h["format"] = format;
  h["version"] = version;
  h["config_hash"] = config_hash;
  h["run_id"] = run_id;
  h["seed"] = seed;
  if (!extra.empty()) h["extra"] = extra;
  return Json{{"_header", h}};
}

FileHeader FileHeader::from_json(const Json& j) {
  const Json& h = j.at("_header");
  FileHeader header;
  header.format = h.value("format", "");
  header.version = h.value("version", 0);
  header.config_hash = h.value("config_hash", "");
  header.run_id = h.value("run_id", "");
  header.seed = h.value("seed", std::uint64_t{0});
  header.extra = h.value("extra", Json::object());
  return header;
}

JsonlWriter::JsonlWriter(const std::string& path, const FileHeader& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) {
    throw DataError("cannot open output file: " + path);
  }
  out_ << header.to_json().dump() << '\n';
}

void JsonlWriter::write(const Json& record) {
  out_ << record.dump() << '\n';
  if (!out_) {
    throw DataError("write failed: " + path_);
  }
}

void JsonlWriter::close() {
  if (out_.is_open()) {
    out_.flush();
    out_.close();
  }
}

JsonlReader::JsonlReader(const std::string& path)
    : path_(path), in_(path, std::ios::binary) {
  if (!in_) {
    throw DataError("cannot open input file: " + path);
  }
  std::string line;
  while (std::getline(in_, line)) {
    ++line_number_;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw DataError(path + ":" + std::to_string(line_number_) +
                      ": invalid JSON: " + e.what());
    }
    if (j.is_object() && j.contains("_header")) {
      header_ = FileHeader::from_json(j);
    } else {
      pending_ = line;
    }
    return;
  }
}

bool JsonlReader::next(Json& record) {
  std::string line;
  if (pending_) {
    line = *pending_;
    pending_.reset();
  } else {
    do {
      if (!std::getline(in_, line)) return false;
      ++line_number_;
    } while (line.empty());
  }
  try {
    record = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw DataError(path_ + ":" + std::to_string(line_number_) +
                    ": invalid JSON: " + e.what());
  }
  return true;
}

}  // namespace agenda
