#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "odetree/tensor.hpp"

namespace odetree {

// Evaluator of the dense derivative tensors of a smooth map at a point.
// Tensors must be symmetric in their argument slots.
struct DerivativeOracle {
  int dim = 1;        // input dimension d
  int out_dim = 1;    // output dimension (d for f, m for a test map g)
  int max_order = -1; // highest supported order, -1 = unlimited
  std::function<Tensor(int order, const std::vector<double>& x)> eval;

  Tensor derivatives(int order, const std::vector<double>& x) const {
    if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
    if (max_order >= 0 && order > max_order)
      throw std::runtime_error("derivative oracle does not provide order " +
                               std::to_string(order));
    return eval(order, x);
  }
};

}  // namespace odetree
