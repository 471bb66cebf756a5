#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pcfi {

// Base of every error raised by the library. The CLI maps each subclass to a
// process exit code: InputError -> 2, IoError -> 3, InvariantError -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A numerical guarantee that should hold under the preconditions failed.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Raised when one or more channels have no reachable source node.
class NoSourceError : public InputError {
 public:
  explicit NoSourceError(std::vector<int> channels);

  const std::vector<int>& channels() const noexcept { return channels_; }

 private:
  std::vector<int> channels_;
};

}  // namespace pcfi
