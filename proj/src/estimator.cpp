#include "odetree/estimator.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace odetree {

FunctionalValue evaluate_functional(const TreeSample& sample,
                                    const DerivativeOracle& oracle_f,
                                    const DerivativeOracle* oracle_g,
                                    const std::vector<double>& x0,
                                    const LifetimeDensity& rho) {
  FunctionalValue out;
  double bw = 1.0, iw = 1.0;
  for (const Branch& b : sample.branches) {
    if (b.interior) {
      double p = rho.pdf(b.lifetime);
      if (!(p > 0.0))
        throw std::runtime_error(
            "evaluate_functional: lifetime density vanishes on the horizon");
      iw /= p;
    } else {
      bw /= rho.tail(sample.horizon - b.birth);
    }
  }
  ButcherTree tau = extract_butcher(sample);
  out.value = elementary_differential(tau, oracle_f, oracle_g, x0);
  out.boundary_weight = bw;
  out.interior_weight = iw;
  for (double& v : out.value) v *= bw * iw;
  return out;
}

namespace detail {

namespace {
constexpr long long kBlock = 4096;

struct BlockStat {
  std::vector<double> sum, sumsq;
  long long accepted = 0, rejected = 0;
};
}  // namespace

Estimate run_monte_carlo(
    long long n_samples, std::uint64_t seed, int workers, int dim,
    const std::function<bool(long long, RngStream&, std::vector<double>&)>&
        eval_one) {
  if (n_samples < 1)
    throw std::invalid_argument("monte carlo: need at least one sample");
  const long long n_blocks = (n_samples + kBlock - 1) / kBlock;
  std::vector<BlockStat> blocks(static_cast<std::size_t>(n_blocks));
  std::atomic<long long> next{0};

  auto work = [&]() {
    std::vector<double> v(dim);
    for (;;) {
      long long b = next.fetch_add(1);
      if (b >= n_blocks) break;
      BlockStat st;
      st.sum.assign(dim, 0.0);
      st.sumsq.assign(dim, 0.0);
      const long long lo = b * kBlock;
      const long long hi = std::min(n_samples, lo + kBlock);
      for (long long i = lo; i < hi; ++i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        if (!eval_one(i, rng, v)) {
          ++st.rejected;
          continue;
        }
        ++st.accepted;
        for (int d = 0; d < dim; ++d) {
          st.sum[d] += v[d];
          st.sumsq[d] += v[d] * v[d];
        }
      }
      blocks[static_cast<std::size_t>(b)] = std::move(st);
    }
  };

  int nw = workers > 0 ? workers
                       : static_cast<int>(std::thread::hardware_concurrency());
  if (nw < 1) nw = 1;
  nw = static_cast<int>(std::min<long long>(nw, n_blocks));
  if (nw == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // blocks are combined in index order: the reduction is a pure function
  // of (seed, n_samples) whatever the worker count
  Estimate est;
  est.n_samples = n_samples;
  std::vector<double> sum(dim, 0.0), sumsq(dim, 0.0);
  for (const BlockStat& st : blocks) {
    est.n_accepted += st.accepted;
    est.n_rejected += st.rejected;
    if (st.sum.empty()) continue;
    for (int d = 0; d < dim; ++d) {
      sum[d] += st.sum[d];
      sumsq[d] += st.sumsq[d];
    }
  }
  est.mean.assign(dim, 0.0);
  est.std_error.assign(dim, 0.0);
  if (est.n_accepted > 0) {
    for (int d = 0; d < dim; ++d) {
      est.mean[d] = sum[d] / static_cast<double>(est.n_accepted);
      if (est.n_accepted > 1) {
        double var = (sumsq[d] - sum[d] * sum[d] / static_cast<double>(est.n_accepted)) /
                     static_cast<double>(est.n_accepted - 1);
        if (var < 0.0) var = 0.0;
        est.std_error[d] = std::sqrt(var / static_cast<double>(est.n_accepted));
      }
    }
  }
  if (2 * est.n_rejected > n_samples)
    throw std::runtime_error(
        "monte carlo: more than half the samples exceeded the node cap; "
        "check the certification of this configuration before trusting "
        "the estimator");
  return est;
}

}  // namespace detail

Estimate monte_carlo_solve(const DerivativeOracle& oracle_f,
                           const std::vector<double>& x0, double t,
                           const LifetimeDensity& rho, long long n_samples,
                           std::uint64_t seed, long long node_cap,
                           int workers) {
  const int dim = static_cast<int>(x0.size());
  Estimate est = detail::run_monte_carlo(
      n_samples, seed, workers, dim,
      [&](long long, RngStream& rng, std::vector<double>& out) {
        auto tree = sample_tree(rho, t, Mark::identity(), rng, node_cap);
        if (!tree) return false;
        FunctionalValue h = evaluate_functional(*tree, oracle_f, nullptr, x0, rho);
        out = h.value;
        return true;
      });
  est.horizon = t;
  return est;
}

Estimate estimate_q_moment(const DerivativeOracle& oracle_f,
                           const std::vector<double>& x0, double t,
                           const LifetimeDensity& rho, double q,
                           long long n_samples, std::uint64_t seed,
                           long long node_cap, int workers, Mark root_mark) {
  if (!(q >= 1.0)) throw std::invalid_argument("estimate_q_moment: q must be >= 1");
  Estimate est = detail::run_monte_carlo(
      n_samples, seed, workers, 1,
      [&](long long, RngStream& rng, std::vector<double>& out) {
        auto tree = sample_tree(rho, t, root_mark, rng, node_cap);
        if (!tree) return false;
        FunctionalValue h = evaluate_functional(*tree, oracle_f, nullptr, x0, rho);
        double m = 0.0;
        for (double v : h.value) m = std::max(m, std::fabs(v));
        out[0] = std::pow(m, q);
        return true;
      });
  est.horizon = t;
  return est;
}

std::vector<double> truncated_functional(const TreeSample& sample, int n,
                                         const SolutionOracle& solution,
                                         TruncationVariant variant,
                                         const DerivativeOracle& oracle_f,
                                         const DerivativeOracle* oracle_g,
                                         const std::vector<double>& x0,
                                         const LifetimeDensity& rho) {
  if (n < 0) throw std::invalid_argument("truncated_functional: n must be >= 0");
  double bw = 1.0, iw = 1.0;
  for (const Branch& b : sample.branches) {
    int gen = generation(b.label);
    if (gen > n) continue;  // cut branches carry no weight factors
    if (b.interior) {
      double p = rho.pdf(b.lifetime);
      if (!(p > 0.0))
        throw std::runtime_error(
            "truncated_functional: lifetime density vanishes on the horizon");
      iw /= p;
    } else {
      bw /= rho.tail(sample.horizon - b.birth);
    }
  }

  std::function<Tensor(int)> value = [&](int bi) -> Tensor {
    const Branch& b = sample.branches[bi];
    int gen = generation(b.label);
    if (gen == n + 1) {
      // truncation leaf: deterministic value at the branch's birth time
      if (variant == TruncationVariant::Tilde &&
          class_of(b.mark) == BranchClass::GClass) {
        if (!oracle_g)
          throw std::runtime_error("truncated_functional: missing g oracle");
        return oracle_g->derivatives(b.mark.order, solution.x_at(b.birth));
      }
      return solution.deriv_at(b.mark.base, b.mark.order, b.birth);
    }
    if (!b.interior) {
      if (b.mark.is_identity) return Tensor::vector(x0);
      const DerivativeOracle* oc =
          b.mark.base == MarkBase::G ? oracle_g : &oracle_f;
      if (!oc) throw std::runtime_error("truncated_functional: missing g oracle");
      return oc->derivatives(b.mark.order, x0);
    }
    if (b.mark.is_identity) return value(b.child_f);
    Tensor down = value(b.child_d);
    Tensor arg = value(b.child_f);
    return down.contract_last(arg.as_vector());
  };

  std::vector<double> out = value(0).as_vector();
  for (double& v : out) v *= bw * iw;
  return out;
}

Estimate monte_carlo_truncated(const DerivativeOracle& oracle_f,
                               const DerivativeOracle* oracle_g,
                               const std::vector<double>& x0, double t,
                               const LifetimeDensity& rho,
                               const SolutionOracle& solution, int n,
                               TruncationVariant variant, Mark root_mark,
                               long long n_samples, std::uint64_t seed,
                               long long node_cap, int workers) {
  const int dim = root_mark.is_identity || root_mark.base == MarkBase::F
                      ? static_cast<int>(x0.size())
                      : (oracle_g ? oracle_g->out_dim : 1);
  Estimate est = detail::run_monte_carlo(
      n_samples, seed, workers, dim,
      [&](long long, RngStream& rng, std::vector<double>& out) {
        auto tree = sample_tree(rho, t, root_mark, rng, node_cap);
        if (!tree) return false;
        out = truncated_functional(*tree, n, solution, variant, oracle_f,
                                   oracle_g, x0, rho);
        return true;
      });
  est.horizon = t;
  return est;
}

}  // namespace odetree
