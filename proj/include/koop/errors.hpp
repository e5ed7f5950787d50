// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace koop
{

// A caller broke a documented precondition (shape mismatch, bad parameter,
// duplicate nodes, ...).
class ContractViolation : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// A factorization or solve failed to produce a usable result.
class NumericalFailure : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// The data cannot support the requested computation (all-zero observables,
// rank-deficient dictionaries, empty truncations).
class DegenerateData : public NumericalFailure
{
public:
  using NumericalFailure::NumericalFailure;
};

// A trajectory left the representable range.
class DivergenceError : public NumericalFailure
{
public:
  DivergenceError(const std::string &what, std::size_t step)
    : NumericalFailure(what + " (step " + std::to_string(step) + ")"), step_(step)
  {
  }
  std::size_t step() const { return step_; }

private:
  std::size_t step_;
};

// File could not be read or written.
class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

#define KOOP_REQUIRE(cond, msg)                                                            \
  do                                                                                       \
  {                                                                                        \
    if (!(cond))                                                                           \
    {                                                                                      \
      throw ::koop::ContractViolation(msg);                                                \
    }                                                                                      \
  } while (false)

}  // namespace koop
