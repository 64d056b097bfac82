#pragma once

#include <stdexcept>
#include <string>

namespace joinrelax {

// Shape or structure contract violated (mismatched dimensions, malformed plans, bad indices).
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Non-finite value produced where a finite one is required.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Requested work exceeds a configured cap (enumeration size, row counts, overflow).
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace joinrelax
