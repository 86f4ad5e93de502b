#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "odetree/branching_tree.hpp"
#include "odetree/butcher.hpp"
#include "odetree/lifetime_density.hpp"
#include "odetree/oracle.hpp"
#include "odetree/solution_oracle.hpp"

namespace odetree {

// Value of the weighted tree functional on one sample: the boundary-mark
// composition at x0 times 1/tail(t - birth) per boundary branch and
// 1/rho(lifetime) per interior branch.
struct FunctionalValue {
  std::vector<double> value;
  double boundary_weight = 1.0;
  double interior_weight = 1.0;
};

FunctionalValue evaluate_functional(const TreeSample& sample,
                                    const DerivativeOracle& oracle_f,
                                    const DerivativeOracle* oracle_g,
                                    const std::vector<double>& x0,
                                    const LifetimeDensity& rho);

struct Estimate {
  std::vector<double> mean;
  std::vector<double> std_error;  // per-component sample standard error
  long long n_samples = 0;
  long long n_accepted = 0;
  long long n_rejected = 0;  // node-cap explosions, excluded from the mean
  double horizon = 0.0;
};

// Monte Carlo mean of the tree functional over independent samples rooted
// at the identity mark. Bitwise identical for fixed (seed, n_samples)
// regardless of the worker count: samples are reduced block-wise in a
// fixed order. Throws when more than half the samples hit the node cap,
// which is the signature of an uncertified configuration.
Estimate monte_carlo_solve(const DerivativeOracle& oracle_f,
                           const std::vector<double>& x0, double t,
                           const LifetimeDensity& rho, long long n_samples,
                           std::uint64_t seed, long long node_cap,
                           int workers);

// Sample mean of |H_t|^q (max norm across components). The root mark
// defaults to the identity; pass Mark::deriv(MarkBase::F, 0) to estimate
// the moment the integrability bound refers to.
Estimate estimate_q_moment(const DerivativeOracle& oracle_f,
                           const std::vector<double>& x0, double t,
                           const LifetimeDensity& rho, double q,
                           long long n_samples, std::uint64_t seed,
                           long long node_cap, int workers,
                           Mark root_mark = Mark::identity());

enum class TruncationVariant { Plain, Tilde };

// Generation-truncated functional: branches of generation <= n contribute
// their usual factors, and every generation-(n+1) branch is replaced by a
// deterministic leaf value. Plain: the solution-oracle tensor at the
// branch's birth time. Tilde: same for f-line marks, while g-line marks
// are evaluated through oracle_g at the solution point x(birth).
std::vector<double> truncated_functional(const TreeSample& sample, int n,
                                         const SolutionOracle& solution,
                                         TruncationVariant variant,
                                         const DerivativeOracle& oracle_f,
                                         const DerivativeOracle* oracle_g,
                                         const std::vector<double>& x0,
                                         const LifetimeDensity& rho);

// Monte Carlo mean of the truncated functional over samples rooted at
// `root_mark` (a non-identity mark).
Estimate monte_carlo_truncated(const DerivativeOracle& oracle_f,
                               const DerivativeOracle* oracle_g,
                               const std::vector<double>& x0, double t,
                               const LifetimeDensity& rho,
                               const SolutionOracle& solution, int n,
                               TruncationVariant variant, Mark root_mark,
                               long long n_samples, std::uint64_t seed,
                               long long node_cap, int workers);

namespace detail {

// Deterministic block-parallel Monte Carlo driver. eval_one fills `out`
// (size dim) for sample i drawing only from the given stream, or returns
// false to mark the sample rejected. Reduction runs over fixed-size blocks
// combined in index order, so results do not depend on the worker count.
Estimate run_monte_carlo(
    long long n_samples, std::uint64_t seed, int workers, int dim,
    const std::function<bool(long long, RngStream&, std::vector<double>&)>&
        eval_one);

}  // namespace detail

}  // namespace odetree
