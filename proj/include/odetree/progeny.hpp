#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "odetree/branching_tree.hpp"

namespace odetree {

// Total-progeny law of the binary branching chain with exponential(lambda)
// lifetimes: P(N_t = 2n+1) = e^{-lambda t} (1 - e^{-lambda t})^n, zero on
// even counts.
double yule_progeny_pmf(double lambda, double t, long long m);

// P(N_t >= n), in closed form.
double yule_progeny_tail(double lambda, double t, long long n);

// Generating function E[z^{N_t}] = z e^{-lambda t} / (1 - (1-e^{-lambda t}) z^2),
// valid for |z| below the convergence radius (1-e^{-lambda t})^{-1/2}.
double yule_pgf(double lambda, double t, double z);

struct EmpiricalProgeny {
  long long n_samples = 0;
  std::vector<long long> histogram;  // histogram[m] = #samples with total m

  double pmf(long long m) const;
  double tail(long long n) const;  // empirical P(N >= n)
};

EmpiricalProgeny empirical_progeny(const std::vector<long long>& totals);

// Total-variation distance between the empirical law and the exponential
// chain's law, over counts up to the histogram range.
double tv_distance(const EmpiricalProgeny& emp, double lambda, double t);

struct DominanceResult {
  bool pass = false;
  long long worst_n = 0;
  double worst_margin = 0.0;  // max over n of empirical - analytic - 3 se
  std::vector<double> empirical_tail;
  std::vector<double> analytic_tail;
};

// Pointwise tail comparison: empirical P(N >= n) must not exceed the
// exponential chain's tail by more than three binomial standard errors,
// for every n <= n_max.
DominanceResult check_dominance(const EmpiricalProgeny& emp, double lambda,
                                double t, long long n_max);

struct MarkedProgenyResult {
  double estimate = 0.0;
  double std_error = 0.0;
  double bound = 0.0;  // e^{-lambda t} sigma(j) / (1 - (1-e^{-lambda t}) gamma delta sigma(0))^{1+(j-1)/gamma}
  long long n_samples = 0;
  long long n_rejected = 0;
};

// Monte Carlo mean of the multiplicative progeny prod_k sigma(mark_k) over
// marked exponential trees rooted at j, next to its analytic bound.
// Requires gamma > 1, delta > 0, sigma(0) < 1/((1-e^{-lambda t}) gamma delta)
// and sigma(k) < (k-2+gamma) delta for k >= 1.
MarkedProgenyResult marked_progeny_mean(double lambda, double t, int j,
                                        const std::function<double(int)>& sigma,
                                        double gamma, double delta,
                                        long long n_samples,
                                        std::uint64_t seed,
                                        long long node_cap, int workers);

}  // namespace odetree
