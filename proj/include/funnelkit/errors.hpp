#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace funnelkit {

// Model file does not parse or violates a structural invariant.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A utility target lies outside [0, sum_i H(X_i)]: no mechanism can meet it.
class InfeasibleModelError : public std::runtime_error {
 public:
  InfeasibleModelError(const std::string& what, std::vector<std::size_t> tasks)
      : std::runtime_error(what), violated_tasks(std::move(tasks)) {}

  std::vector<std::size_t> violated_tasks;
};

}  // namespace funnelkit
