#pragma once

#include <stdexcept>
#include <string>

namespace carnot {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition: mismatched rings, bad indices, non-homogeneous or
// non-Rumin input, invalid witness chains, ...
class DomainError : public Error {
 public:
  using Error::Error;
};

// A linear solve would need unknowns beyond the coefficient-degree cap.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int needed, int cap)
      : Error(what), needed_(needed), cap_(cap) {}
  int needed() const { return needed_; }
  int cap() const { return cap_; }

 private:
  int needed_;
  int cap_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace carnot
