#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace solbench::frontend {

/// Region of one source file. Byte offsets are half-open [begin, end); line and
/// column are 1-based, counted in bytes, and `end_*` names the last byte.
struct SourceSpan {
  std::uint32_t file_id = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::uint32_t start_line = 1;
  std::uint32_t start_col = 1;
  std::uint32_t end_line = 1;
  std::uint32_t end_col = 1;

  [[nodiscard]] bool empty() const { return end <= begin; }
  [[nodiscard]] bool contains(const SourceSpan& other) const {
    return file_id == other.file_id && begin <= other.begin && other.end <= end;
  }
  [[nodiscard]] bool overlaps(const SourceSpan& other) const {
    return file_id == other.file_id && begin < other.end && other.begin < end;
  }

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Smallest span covering both `a` and `b`.
[[nodiscard]] inline SourceSpan cover(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan out = a;
  if (b.begin < a.begin) {
    out.begin = b.begin;
    out.start_line = b.start_line;
    out.start_col = b.start_col;
  }
  if (b.end > a.end) {
    out.end = b.end;
    out.end_line = b.end_line;
    out.end_col = b.end_col;
  }
  return out;
}

}  // namespace solbench::frontend
