#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace smnet {

// SHA-256 (FIPS 180-4), used for artifact hashes in run manifests.
std::string sha256_hex(std::string_view data);
std::string sha256_file_hex(const std::string& path);

}  // namespace smnet
