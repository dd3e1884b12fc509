// Copyright 2026 The gwgen Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef GWGEN_ERROR_HPP_
#define GWGEN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace gwgen {

// Input violates a documented precondition. `rule()` names the violated rule
// so the CLI can report it.
class PreconditionError : public std::invalid_argument {
 public:
  PreconditionError(std::string rule, const std::string& detail)
      : std::invalid_argument(rule + ": " + detail), rule_(std::move(rule)) {}
  const std::string& rule() const noexcept { return rule_; }

 private:
  std::string rule_;
};

// A numerical method failed to reach its tolerance (step underflow,
// quadrature nonconvergence, unstable bootstrap, no stabilization).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Monte Carlo run aborted (population cap, acceptance floor).
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const char* rule, const std::string& detail) {
  if (!ok) throw PreconditionError(rule, detail);
}

}  // namespace gwgen

#endif  // GWGEN_ERROR_HPP_
