#include "odetree/progeny.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "odetree/estimator.hpp"

namespace odetree {

double yule_progeny_pmf(double lambda, double t, long long m) {
  if (!(lambda > 0.0)) throw std::invalid_argument("yule pmf: rate must be > 0");
  if (t < 0.0) throw std::invalid_argument("yule pmf: negative time");
  if (m < 0 || m % 2 == 0) return 0.0;
  long long n = (m - 1) / 2;
  double p = std::exp(-lambda * t);
  return p * std::pow(1.0 - p, static_cast<double>(n));
}

double yule_progeny_tail(double lambda, double t, long long n) {
  if (n <= 1) return 1.0;
  long long j0 = n / 2;  // smallest j with 2j+1 >= n
  return std::pow(1.0 - std::exp(-lambda * t), static_cast<double>(j0));
}

double yule_pgf(double lambda, double t, double z) {
  if (!(lambda > 0.0)) throw std::invalid_argument("yule pgf: rate must be > 0");
  if (t < 0.0) throw std::invalid_argument("yule pgf: negative time");
  double w = 1.0 - std::exp(-lambda * t);
  double radius = w > 0.0 ? 1.0 / std::sqrt(w)
                          : std::numeric_limits<double>::infinity();
  if (!(std::fabs(z) < radius))
    throw std::domain_error("yule pgf: |z| at or beyond the convergence radius");
  return z * std::exp(-lambda * t) / (1.0 - w * z * z);
}

double EmpiricalProgeny::pmf(long long m) const {
  if (m < 0 || m >= static_cast<long long>(histogram.size())) return 0.0;
  return static_cast<double>(histogram[static_cast<std::size_t>(m)]) /
         static_cast<double>(n_samples);
}

double EmpiricalProgeny::tail(long long n) const {
  if (n <= 0) return 1.0;
  long long c = 0;
  for (long long m = n; m < static_cast<long long>(histogram.size()); ++m)
    c += histogram[static_cast<std::size_t>(m)];
  return static_cast<double>(c) / static_cast<double>(n_samples);
}

EmpiricalProgeny empirical_progeny(const std::vector<long long>& totals) {
  if (totals.empty())
    throw std::invalid_argument("empirical_progeny: need at least one sample");
  EmpiricalProgeny e;
  e.n_samples = static_cast<long long>(totals.size());
  long long mx = *std::max_element(totals.begin(), totals.end());
  e.histogram.assign(static_cast<std::size_t>(mx) + 1, 0);
  for (long long v : totals) {
    if (v < 0) throw std::invalid_argument("empirical_progeny: negative count");
    ++e.histogram[static_cast<std::size_t>(v)];
  }
  return e;
}

double tv_distance(const EmpiricalProgeny& emp, double lambda, double t) {
  long long mx = static_cast<long long>(emp.histogram.size()) - 1;
  double acc = 0.0;
  double tail_mass = 1.0;  // analytic mass beyond the histogram range
  for (long long m = 0; m <= mx; ++m) {
    double a = yule_progeny_pmf(lambda, t, m);
    acc += std::fabs(emp.pmf(m) - a);
    tail_mass -= a;
  }
  if (tail_mass > 0.0) acc += tail_mass;
  return 0.5 * acc;
}

DominanceResult check_dominance(const EmpiricalProgeny& emp, double lambda,
                                double t, long long n_max) {
  DominanceResult r;
  r.pass = true;
  r.worst_margin = -std::numeric_limits<double>::infinity();
  for (long long n = 0; n <= n_max; ++n) {
    double hat = emp.tail(n);
    double ana = yule_progeny_tail(lambda, t, n);
    double se = std::sqrt(std::max(ana * (1.0 - ana), 0.0) /
                          static_cast<double>(emp.n_samples));
    double margin = hat - ana - 3.0 * se;
    r.empirical_tail.push_back(hat);
    r.analytic_tail.push_back(ana);
    if (margin > r.worst_margin) {
      r.worst_margin = margin;
      r.worst_n = n;
    }
    if (margin > 0.0) r.pass = false;
  }
  return r;
}

MarkedProgenyResult marked_progeny_mean(double lambda, double t, int j,
                                        const std::function<double(int)>& sigma,
                                        double gamma, double delta,
                                        long long n_samples,
                                        std::uint64_t seed,
                                        long long node_cap, int workers) {
  if (!(gamma > 1.0)) throw std::invalid_argument("marked progeny: gamma must be > 1");
  if (!(delta > 0.0)) throw std::invalid_argument("marked progeny: delta must be > 0");
  if (j < 0) throw std::invalid_argument("marked progeny: j must be >= 0");
  double w = 1.0 - std::exp(-lambda * t);
  double s0 = sigma(0);
  if (!(s0 >= 0.0) || !(s0 < 1.0 / (w * gamma * delta)))
    throw std::invalid_argument(
        "marked progeny: sigma(0) must lie in [0, 1/((1-e^{-lambda t}) gamma delta))");
  for (int k = 1; k <= 64; ++k) {
    double sk = sigma(k);
    if (!(sk >= 0.0) || !(sk < (k - 2.0 + gamma) * delta))
      throw std::invalid_argument(
          "marked progeny: sigma(k) must lie in [0, (k-2+gamma) delta)");
  }

  Estimate est = detail::run_monte_carlo(
      n_samples, seed, workers, 1,
      [&](long long, RngStream& rng, std::vector<double>& out) {
        auto tree = sample_marked_yule(lambda, t, j, rng, node_cap);
        if (!tree) return false;
        double prod = 1.0;
        for (const YuleBranch& b : tree->branches) prod *= sigma(b.mark);
        out[0] = prod;
        return true;
      });

  MarkedProgenyResult r;
  r.estimate = est.mean[0];
  r.std_error = est.std_error[0];
  r.n_samples = est.n_samples;
  r.n_rejected = est.n_rejected;
  double base = 1.0 - w * gamma * delta * s0;
  r.bound = std::exp(-lambda * t) * sigma(j) /
            std::pow(base, 1.0 + (static_cast<double>(j) - 1.0) / gamma);
  return r;
}

}  // namespace odetree
