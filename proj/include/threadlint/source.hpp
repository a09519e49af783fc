#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace threadlint {

/// A position in a source file. Lines and columns are 1-based; columns count
/// code points, not bytes.
struct SourcePos {
  std::uint32_t offset = 0;
  std::uint32_t line = 1;
  std::uint32_t column = 1;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

/// Half-open byte range [begin.offset, end.offset) with the line/column of
/// both ends.
struct SourceSpan {
  SourcePos begin;
  SourcePos end;

  bool empty() const { return begin.offset == end.offset; }
  bool contains(const SourceSpan& other) const {
    return begin.offset <= other.begin.offset && other.end.offset <= end.offset;
  }

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct SourceFile {
  std::string path;
  std::string content;

  /// Reads `path` from disk. Throws IoError when it cannot be read and
  /// ParseError when the bytes are not valid UTF-8.
  static SourceFile load(const std::string& path);
  /// Builds an in-memory file; validates UTF-8.
  static SourceFile from_string(std::string path, std::string content);
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, std::uint32_t line, std::uint32_t column,
             std::string message);

  const std::string& path() const { return path_; }
  std::uint32_t line() const { return line_; }
  std::uint32_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string path_;
  std::uint32_t line_;
  std::uint32_t column_;
  std::string message_;
};

/// Returns the byte offset of the first invalid UTF-8 sequence, or npos.
std::size_t find_invalid_utf8(std::string_view bytes);

}  // namespace threadlint
