#include "threadlint/source.hpp"

#include <fstream>
#include <sstream>

namespace threadlint {

ParseError::ParseError(std::string path, std::uint32_t line, std::uint32_t column,
                       std::string message)
    : std::runtime_error(path + ":" + std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      path_(std::move(path)),
      line_(line),
      column_(column),
      message_(std::move(message)) {}

std::size_t find_invalid_utf8(std::string_view bytes) {
  std::size_t i = 0;
  while (i < bytes.size()) {
    auto c = static_cast<unsigned char>(bytes[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > bytes.size()) return i;
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(bytes[i + k]);
      if ((cc & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong encodings, surrogates and out-of-range code points.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      return i;
    i += len;
  }
  return std::string_view::npos;
}

SourceFile SourceFile::from_string(std::string path, std::string content) {
  if (path.empty()) throw IoError("source path must not be empty");
  auto bad = find_invalid_utf8(content);
  if (bad != std::string_view::npos) {
    std::uint32_t line = 1, col = 1;
    for (std::size_t i = 0; i < bad; ++i) {
      if (content[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(content[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
    throw ParseError(path, line, col, "invalid UTF-8 byte sequence");
  }
  return SourceFile{std::move(path), std::move(content)};
}

SourceFile SourceFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path);
  return from_string(path, buf.str());
}

}  // namespace threadlint
