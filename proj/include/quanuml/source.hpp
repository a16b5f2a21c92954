#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace quml {

/// Half-open source region, 1-based lines and columns.
struct SourceSpan {
  std::string file;
  int startLine = 1;
  int startCol = 1;
  int endLine = 1;
  int endCol = 1;

  std::string to_string() const {
    return file + ":" + std::to_string(startLine) + ":" + std::to_string(startCol);
  }
};

/// Base of all toolchain errors that carry a position.
class Error : public std::runtime_error {
public:
  Error(std::string code, SourceSpan span, const std::string& message)
      : std::runtime_error(span.to_string() + ": error[" + code + "]: " + message),
        code_(std::move(code)),
        span_(std::move(span)),
        message_(message) {}

  const std::string& code() const { return code_; }
  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }

private:
  std::string code_;
  SourceSpan span_;
  std::string message_;
};

/// First-syntax-violation parse failure. No recovery is attempted.
class ParseError : public Error {
public:
  ParseError(SourceSpan span, std::vector<std::string> expected, std::string found)
      : Error("parse", span, render(expected, found)),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

private:
  static std::string render(const std::vector<std::string>& expected, const std::string& found) {
    std::string s = "expected ";
    for (size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) s += i + 1 == expected.size() ? " or " : ", ";
      s += expected[i];
    }
    s += ", found " + (found.empty() ? std::string("end of input") : "'" + found + "'");
    return s;
  }

  std::vector<std::string> expected_;
  std::string found_;
};

}  // namespace quml
