#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace svmf {

// Base of every exception thrown by the library. `kind()` is a stable
// machine-readable tag used by the CLI error reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("DomainError", what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error("DimensionMismatch", what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : Error("ParseError", path + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ZeroRowError : public Error {
 public:
  explicit ZeroRowError(std::vector<std::size_t> rows);
  const std::vector<std::size_t>& rows() const noexcept { return rows_; }

 private:
  std::vector<std::size_t> rows_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("IoError", what) {}
};

class ZeroResultant : public Error {
 public:
  ZeroResultant() : Error("ZeroResultant", "weighted resultant vanishes; directional mean undefined") {}
};

class InitFailure : public Error {
 public:
  explicit InitFailure(const std::string& what) : Error("InitFailure", what) {}
};

class CannotSparsify : public Error {
 public:
  explicit CannotSparsify(const std::string& what) : Error("CannotSparsify", what) {}
};

class NotBracketed : public Error {
 public:
  explicit NotBracketed(const std::string& what) : Error("NotBracketed", what) {}
};

class NoIncrementAvailable : public Error {
 public:
  NoIncrementAvailable()
      : Error("NoIncrementAvailable", "no coordinate survives the current penalty") {}
};

}  // namespace svmf
