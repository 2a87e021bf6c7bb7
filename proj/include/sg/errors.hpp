#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sg {

/// Bad input: configuration fields, arguments outside an operation's domain,
/// malformed files. Maps to CLI exit status 1.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The Bohmian velocity is undefined where both spinor components vanish.
class UndefinedVelocityError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Trajectory integration produced a non-finite state.
class IntegrationError : public std::runtime_error {
public:
  IntegrationError(const std::string& what, std::size_t atom_index)
      : std::runtime_error(what + " (atom " + std::to_string(atom_index) + ")"),
        atom_index_(atom_index) {}

  std::size_t atom_index() const noexcept { return atom_index_; }

private:
  std::size_t atom_index_;
};

/// Grid evolution leaked probability into the periodic boundary.
class BoundaryMassError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace sg
