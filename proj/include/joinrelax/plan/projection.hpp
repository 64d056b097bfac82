#pragma once

#include "joinrelax/plan/plan.hpp"
#include "joinrelax/tensor/matrix.hpp"

namespace joinrelax {

// Best-first extraction of a left-linear plan from a soft adjacency matrix of dimension
// 2n-1 (n >= 2). Starting at the root join c, repeatedly attach the free join j and free
// pattern k maximising A(j,c) + A(k,c), then descend to c = j; the last join receives the
// two remaining patterns. Ties go to the lowest index. Always returns a valid plan, in
// canonical form.
Plan project_discrete(const tensor::Matrix& soft);

}  // namespace joinrelax
