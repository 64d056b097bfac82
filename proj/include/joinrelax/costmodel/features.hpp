#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "joinrelax/plan/plan.hpp"
#include "joinrelax/plan/query.hpp"
#include "joinrelax/storage/triple_store.hpp"
#include "joinrelax/tensor/matrix.hpp"

namespace joinrelax::costmodel {

using tensor::Mask;
using tensor::Matrix;

// Node feature layout. Entity block e_x = v | embedding (embedding_dim) | c, pattern row
// e_s | e_p | e_o | i with i = 0; join rows are zero except i = 1.
struct FeatureLayout {
  std::size_t embedding_dim = 8;
  std::uint64_t embedding_seed = 0x9b1f3a2cULL;

  std::size_t entity_width() const { return embedding_dim + 2; }
  std::size_t width() const { return 3 * entity_width() + 1; }

  bool operator==(const FeatureLayout&) const = default;
};

// Deterministic pseudo-embedding of an entity label: unit-norm vector seeded by the label
// hash and the layout seed.
Eigen::RowVectorXd entity_embedding(std::string_view label, const FeatureLayout& layout);

// One row per query pattern (n x F).
Matrix pattern_features(const Query& query, const TripleStore& store, const FeatureLayout& layout);

// Full feature matrix of the query's plan graph: n pattern rows, then n-1 join rows.
Matrix build_features(const Query& query, const TripleStore& store, const FeatureLayout& layout);

// Feature matrix for a (possibly partial) plan: leaf rows taken from `pattern_rows` by the
// plan's pattern indices, followed by join rows.
Matrix plan_features(const Matrix& pattern_rows, const Plan& plan);

}  // namespace joinrelax::costmodel
