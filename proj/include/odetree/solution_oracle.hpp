#pragma once

#include <functional>
#include <vector>

#include "odetree/branching_tree.hpp"
#include "odetree/tensor.hpp"

namespace odetree {

// Reference evaluator along the true solution: deriv_at gives the tensor
// D^order c evaluated at x(s) for c in {f-line, g-line}, and x_at gives
// x(s) itself. Backed by closed-form solutions.
struct SolutionOracle {
  int dim = 1;
  std::function<Tensor(MarkBase base, int order, double s)> deriv_at;
  std::function<std::vector<double>(double s)> x_at;
};

}  // namespace odetree
