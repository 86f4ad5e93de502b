#pragma once

#include <cassert>
#include <cstddef>
#include <utility>
#include <vector>

namespace odetree {

// Dense derivative tensor of shape out_dim x in_dim^order, row-major:
// entry (i; j1..jk) sits at ((i*in+j1)*in+j2)*in + ... + jk.
// Order 0 is a plain vector of size out_dim.
struct Tensor {
  int out_dim = 0;
  int in_dim = 1;
  int order = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(int out, int in, int k)
      : out_dim(out), in_dim(in), order(k),
        data(static_cast<std::size_t>(out) * pow_size(in, k), 0.0) {}

  static Tensor vector(std::vector<double> v) {
    Tensor t;
    t.out_dim = static_cast<int>(v.size());
    t.in_dim = static_cast<int>(v.size());
    t.order = 0;
    t.data = std::move(v);
    return t;
  }

  static std::size_t pow_size(int base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
    return r;
  }

  const std::vector<double>& as_vector() const {
    assert(order == 0);
    return data;
  }

  // Contract the last argument slot with v (size in_dim).
  Tensor contract_last(const std::vector<double>& v) const {
    assert(order >= 1);
    assert(static_cast<int>(v.size()) == in_dim);
    Tensor r(out_dim, in_dim, order - 1);
    const std::size_t blocks = r.data.size();
    for (std::size_t b = 0; b < blocks; ++b) {
      double s = 0.0;
      const double* row = data.data() + b * in_dim;
      for (int j = 0; j < in_dim; ++j) s += row[j] * v[j];
      r.data[b] = s;
    }
    return r;
  }

  // Largest absolute entry.
  double max_abs() const {
    double m = 0.0;
    for (double x : data) {
      double a = x < 0 ? -x : x;
      if (a > m) m = a;
    }
    return m;
  }
};

}  // namespace odetree
