#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tiersynth {

// Bad input: malformed files, schema violations, broken domain properties,
// goal lists that are not tiered. CLI exit code 2.
class SemanticError : public std::runtime_error {
public:
  explicit SemanticError(const std::string& what) : std::runtime_error(what) {}
};

// Formula text that does not parse. Carries the byte offset of the failure
// and the tokens that would have been accepted there.
class SyntaxError : public SemanticError {
public:
  SyntaxError(const std::string& what, std::size_t offset, std::string expected)
      : SemanticError(what), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

private:
  std::size_t offset_;
  std::string expected_;
};

// A configured cap was exceeded (alphabet size, state count, oracle limits).
// CLI exit code 3.
class ResourceError : public std::runtime_error {
public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem / IO trouble. CLI exit code 1.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Construction caps, overridable through TIERSYNTH_CAP_STATES.
struct Limits {
  std::size_t max_letters = std::size_t{1} << 20;
  std::size_t max_states = std::size_t{1} << 20;
};

}  // namespace tiersynth
