#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "joinrelax/plan/plan.hpp"
#include "joinrelax/tensor/matrix.hpp"

namespace joinrelax {

using tensor::Matrix;

// encode(plan)(i, j) == 1 iff node i is joined into node j. The root's row is all zeros.
// Operand order is not representable: (a ⋈ b) and (b ⋈ a) encode identically.
Matrix encode(const Plan& plan);

enum class ViolationKind {
  kEvenDimension,     // N is not of the form 2n-1
  kNonBinaryEntry,    // entry other than 0 or 1
  kSelfLoop,          // diagonal entry
  kPatternInEdge,     // a triple-pattern node receives an edge
  kOutDegree,         // non-root node without exactly one out-edge
  kRootOutEdge,       // root has an out-edge
  kJoinInDegree,      // join node without exactly two in-edges
  kCycle,
  kDisconnected,      // node that does not reach the root
};

struct Violation {
  ViolationKind kind;
  std::vector<std::size_t> nodes;  // 0-based offending node indices
  std::string message;
};

struct DecodeResult {
  std::optional<Plan> plan;          // set iff violations is empty
  std::vector<Violation> violations;  // every violation found, not only the first
};

// Full structural check of a candidate plan matrix (leaf slots map to patterns 0..n-1).
DecodeResult decode_checked(const Matrix& matrix);

// Plan of a valid matrix in canonical operand order; throws PlanDecodeError otherwise.
Plan decode(const Matrix& matrix);

class PlanDecodeError : public std::runtime_error {
 public:
  explicit PlanDecodeError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// (1 - alpha) * p1 + alpha * p2, entrywise.
Matrix interpolate(const Matrix& p1, const Matrix& p2, double alpha);

}  // namespace joinrelax
