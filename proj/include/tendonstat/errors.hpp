#pragma once

#include <stdexcept>
#include <string>

namespace tendonstat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed description document (not valid JSON, wrong value types).
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Document parses but violates the schema (missing key, bad range).
class SchemaError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A precondition on an argument does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A joint angle lies outside the bevel-derived limit.
class BendLimitError : public DomainError {
 public:
  BendLimitError(double angle, double lower, double upper, const std::string& where);
  double angle() const noexcept { return angle_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double angle_;
  double lower_;
  double upper_;
};

/// A cable tension would become negative (or friction would lock the cable).
class SlackCableError : public Error {
 public:
  SlackCableError(int cable_id, int hole_index, const std::string& what)
      : Error(what), cable_id_(cable_id), hole_index_(hole_index) {}
  int cable_id() const noexcept { return cable_id_; }
  int hole_index() const noexcept { return hole_index_; }

 private:
  int cable_id_;
  int hole_index_;
};

/// Requested shape cannot be produced within the cable limits.
class InfeasiblePlanError : public Error {
 public:
  using Error::Error;
};

}  // namespace tendonstat
