#pragma once

#include <map>
#include <string>
#include <string_view>

namespace agriopt {

/// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

/// Digest over files keyed by name. Each entry contributes its name, its
/// size and its bytes, in name order, so the result is independent of how
/// the files were discovered.
std::string content_hash(const std::map<std::string, std::string>& files);

}  // namespace agriopt
