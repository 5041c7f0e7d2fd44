#pragma once

#include <stdexcept>
#include <string>

namespace modalssc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (bad shapes, indices, knowledge that
// empties the pattern class).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Exact minimum zero forcing search refused because the graph is too large.
class SearchLimitError : public Error {
 public:
  using Error::Error;
};

// Rejection sampling ran out of attempts for a block.
class SamplingInfeasibleError : public Error {
 public:
  SamplingInfeasibleError(const std::string& what, int block)
      : Error(what), block_(block) {}
  int block() const { return block_; }

 private:
  int block_;
};

// The witness construction found no real eigenvalue candidate that leaves a
// stalled white set. Happens when the characteristic vector is looser than
// the pattern (a '?' tag on a node whose diagonal cannot reach the
// eigenvalue).
class WitnessUnavailableError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace modalssc
