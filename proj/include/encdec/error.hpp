#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace encdec {

// Malformed input text. `location` is a 1-based line number or a 0-based
// character offset depending on the format being read.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t location)
      : std::runtime_error(what), location_(location) {}
  std::size_t location() const { return location_; }

 private:
  std::size_t location_;
};

// Well-formed input whose structure breaks a domain invariant
// (cycles, multiple roots, empty constituents, ragged vectors).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition: illegal action, wrong
// dimensions, out-of-range ids, backward without forward.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The gold structure cannot be derived by the transition system.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Predicted and gold treebanks do not line up.
class AlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training diverged (non-finite loss or gradient).
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Greedy decoding ran past its step budget.
class RunawayDecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace encdec
