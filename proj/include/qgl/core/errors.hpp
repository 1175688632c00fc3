#pragma once

#include <stdexcept>
#include <string>

namespace qgl {

// Argument and index errors use std::invalid_argument / std::out_of_range.
// The types below cover the failure classes that callers handle separately.

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        message_(what),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }
  /// The description without the offset suffix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t offset_;
};

class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A NaN or Inf reached a loss. Training aborts the run; the campaign records it.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Paired-seed or campaign-structure violation.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IncompleteCampaignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qgl
