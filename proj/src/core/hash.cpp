#include "agenda/core/hash.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "agenda/core/errors.hpp"

namespace agenda {

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return std::string(buf);
}

std::uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot read file for hashing: " + path);
  }
  std::uint64_t state = kFnv64Offset;
  char buf[1 << 14];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    state = fnv1a64(std::string_view(buf, static_cast<size_t>(in.gcount())),
                    state);
  }
  return state;
}

}  // namespace agenda
