#pragma once

#include <stdexcept>
#include <string>

namespace trigrow {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text. Carries "file:line: message" context when available.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, int line, const std::string& msg)
      : Error(path + ":" + std::to_string(line) + ": " + msg),
        path_(path),
        line_(line) {}
  explicit ParseError(const std::string& msg) : Error(msg), line_(0) {}

  const std::string& path() const { return path_; }
  int line() const { return line_; }

 private:
  std::string path_;
  int line_ = 0;
};

// Input that parses but violates a documented precondition
// (duplicate ids, descriptor length, infeasible partition, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Degenerate or conflicting geometry: collinear triangles, points on a
// forced segment, crossing constraints, singular fits.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Filesystem problems: missing or unreadable/unwritable files.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace trigrow
