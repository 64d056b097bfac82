#include "joinrelax/discrete/cost_function.hpp"

#include "joinrelax/costmodel/features.hpp"
#include "joinrelax/plan/matrix.hpp"

namespace joinrelax::discrete {

double ExactCost::evaluate(const Plan& plan) { return c_out(*oracle_, plan).total; }

double LearnedCost::output(const Plan& plan) const {
  return costmodel::forward_value(*model_, costmodel::plan_features(pattern_rows_, plan), encode(plan));
}

double LearnedCost::evaluate(const Plan& plan) { return costmodel::to_cost(*model_, output(plan)); }

}  // namespace joinrelax::discrete
