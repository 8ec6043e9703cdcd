#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace agenda {

// 64-bit FNV-1a, used to fingerprint configs and input files so outputs can be
// stamped with the exact run identity. Not a cryptographic hash.
constexpr std::uint64_t kFnv64Offset = 1469598103934665603ull;
constexpr std::uint64_t kFnv64Prime = 1099511628211ull;

constexpr std::uint64_t fnv1a64(std::string_view data,
                                std::uint64_t state = kFnv64Offset) {
  for (char c : data) {
    state ^= static_cast<unsigned char>(c);
    state *= kFnv64Prime;
  }
  return state;
}

std::string hex64(std::uint64_t value);

// Fingerprint of a whole file; throws DataError when the file cannot be read.
std::uint64_t hash_file(const std::string& path);

}  // namespace agenda
