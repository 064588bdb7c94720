#pragma once

#include <cstdint>
#include <string>

namespace audex {

// FNV-1a 64-bit. Content fingerprinting for run manifests, not security.
std::uint64_t fnv1a64(const void* bytes, std::size_t len);
std::uint64_t fnv1a64_file(const std::string& path);
std::string hash_hex(std::uint64_t h);

}  // namespace audex
