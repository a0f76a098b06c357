#pragma once

#include <string>

namespace rpaths {

// Lowercase hex SHA-1 digest of the bytes.
std::string sha1_hex(const std::string& data);

// Git blob hash: sha1("blob <size>\0" + data).
std::string git_blob_hash(const std::string& data);

}  // namespace rpaths
