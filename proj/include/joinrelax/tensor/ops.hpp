#pragma once

#include <cstdint>
#include <random>

#include "joinrelax/tensor/tape.hpp"

namespace joinrelax::tensor {

// Shape mismatches throw StructuralError naming both shapes.

Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);  // elementwise
Var scale(Var a, double s);
Var add_scalar(Var a, double s);
// s (1x1) times every entry of a.
Var scale_by(Var s, Var a);
// Adds a 1xC row vector to every row of an RxC matrix.
Var add_row(Var a, Var row);
Var transpose(Var a);
Var slice(Var a, Eigen::Index row, Eigen::Index col, Eigen::Index rows, Eigen::Index cols);

Var relu(Var a);
Var abs(Var a);
Var square(Var a);

// Softmax over each row. Masked entries (mask true) are excluded and come out exactly 0;
// a fully masked row comes out all zeros. `mask` may be null.
Var row_softmax(Var a, const Mask* mask = nullptr);

inline constexpr double kLayerNormEpsilon = 1e-5;
// Normalises every row over its columns, then applies gain and bias (both 1xC).
Var layer_norm(Var x, Var gain, Var bias, double eps = kLayerNormEpsilon);

// Inverted dropout: zeroes entries with probability `rate` and scales survivors by
// 1/(1-rate). Identity when not training or rate is 0.
Var dropout(Var a, double rate, bool training, std::mt19937_64& rng);

Var sum_all(Var a);   // 1x1
Var sum_rows(Var a);  // Rx1, each row summed
Var sum_cols(Var a);  // 1xC, each column summed

// tr(exp(A)) by the power series sum_k tr(A^k)/k!, truncated at K >= dim(A) terms and
// extended until the newest term is negligible. Exact for adjacency matrices of DAGs
// (A is nilpotent). The adjoint is the transposed partial sum up to K-1.
Var trace_expm(Var a);

// Value only, for oracles and diagnostics.
struct TraceExpmSeries {
  double trace = 0.0;
  int terms = 0;
};
TraceExpmSeries trace_expm_value(const Matrix& a);

}  // namespace joinrelax::tensor
