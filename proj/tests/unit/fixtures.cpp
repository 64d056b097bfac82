#include "fixtures.hpp"

#include <algorithm>
#include <numeric>

namespace fixtures {

std::vector<Plan> all_left_linear(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Plan> plans;
  do {
    plans.push_back(Plan::left_linear(order));
  } while (std::next_permutation(order.begin(), order.end()));
  return plans;
}

}  // namespace fixtures
