#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pdp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the operation's domain (bad segment index, m > n, ...).
struct DomainError : Error {
  using Error::Error;
};

// A trajectory leg needs more angular speed than the defender has.
struct FeasibilityError : Error {
  FeasibilityError(int defender_id, std::size_t leg, const std::string& what)
      : Error(what), defender_id(defender_id), leg(leg) {}
  int defender_id;
  std::size_t leg;
};

// Some task column can only be matched through forbidden entries.
struct InfeasibleAssignmentError : Error {
  InfeasibleAssignmentError(std::vector<int> columns, const std::string& what)
      : Error(what), columns(std::move(columns)) {}
  std::vector<int> columns;
};

// Numerically degenerate input or update (silent pattern, zero potential).
struct DegenerateError : Error {
  using Error::Error;
};

// Network initialization could not find a sample of the required polarity.
struct InitError : Error {
  InitError(std::vector<int> zones, const std::string& what)
      : Error(what), zones(std::move(zones)) {}
  std::vector<int> zones;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// Mismatched zone counts between a model and a dataset.
struct ShapeError : Error {
  using Error::Error;
};

}  // namespace pdp
