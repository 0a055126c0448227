#pragma once

#include <string>
#include <string_view>

namespace tfr {

/// Lowercase hex SHA-256 digest (64 characters).
std::string sha256_hex(std::string_view data);

/// Digest of a file's contents; throws on I/O failure.
std::string sha256_file(const std::string& path);

}  // namespace tfr
