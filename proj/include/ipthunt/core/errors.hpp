#pragma once

#include <stdexcept>
#include <string>

namespace ipthunt {

// Base of every error raised by the toolkit. Callers that only care about
// "operation failed" catch this; the subclasses carry the specific kind.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StorageIoError : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& invariant)
      : Error("invariant violated: " + invariant), invariant_(invariant) {}
  const std::string& invariant() const { return invariant_; }

 private:
  std::string invariant_;
};

class MalformedUrl : public Error {
 public:
  explicit MalformedUrl(const std::string& url) : Error("malformed url: " + url) {}
};

class DegenerateDataset : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InsufficientLabelSupport : public Error {
 public:
  InsufficientLabelSupport(const std::string& label, std::size_t count, std::size_t needed = 5)
      : Error("insufficient support for label '" + label + "': " + std::to_string(count) +
              " samples (need >= " + std::to_string(needed) + ")"),
        label_(label) {}
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

class EmptyEvaluationSet : public Error {
 public:
  EmptyEvaluationSet() : Error("evaluation set is empty") {}
};

class RateLimited : public Error {
 public:
  using Error::Error;
};

class NetworkError : public Error {
 public:
  using Error::Error;
};

class UnknownHandle : public Error {
 public:
  explicit UnknownHandle(const std::string& handle) : Error("unknown handle: " + handle) {}
};

class MissingCounterpart : public Error {
 public:
  using Error::Error;
};

class UnreadableRanking : public Error {
 public:
  using Error::Error;
};

class EmptyStore : public Error {
 public:
  using Error::Error;
};

class ModelFormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace ipthunt
