#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace solbench::corpus {

struct SourceFile {
  std::string path;
  std::string text;

  friend bool operator==(const SourceFile&, const SourceFile&) = default;
};

class EmptyFileSetError : public std::invalid_argument {
 public:
  EmptyFileSetError() : std::invalid_argument("content_hash: empty file set") {}
};

/// Drops a UTF-8 BOM, turns CRLF / CR into LF, strips trailing whitespace on
/// every line and trailing blank lines. Identifiers and comments are untouched.
[[nodiscard]] std::string normalize_for_hash(std::string_view text);

/// Lowercase hex SHA-256.
[[nodiscard]] std::string sha256_hex(std::string_view data);

/// Digest of the path-sorted, normalized files (path and text both hashed).
[[nodiscard]] std::string content_hash(std::span<const SourceFile> files);

/// Digest of one normalized file body, path excluded; used for the unique-file count.
[[nodiscard]] std::string file_hash(std::string_view text);

}  // namespace solbench::corpus
