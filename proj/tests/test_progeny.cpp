#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "odetree/progeny.hpp"

using namespace odetree;

TEST_CASE("progeny pmf values") {
  double t = std::log(2.0);
  CHECK(yule_progeny_pmf(1.0, t, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(yule_progeny_pmf(1.0, t, 3) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(yule_progeny_pmf(1.0, t, 0) == 0.0);
  CHECK(yule_progeny_pmf(1.0, t, 4) == 0.0);
  CHECK(yule_progeny_pmf(2.0, 0.7, 10) == 0.0);
}

TEST_CASE("pmf normalizes") {
  for (double lt : {0.3, 1.0, 3.0}) {
    double sum = 0.0;
    for (long long n = 0; n <= 10000; ++n)
      sum += yule_progeny_pmf(1.0, lt, 2 * n + 1);
    CHECK(sum > 1.0 - 1e-10);
  }
}

TEST_CASE("generating function") {
  double t = std::log(2.0);
  CHECK(yule_pgf(1.0, t, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(yule_pgf(1.0, t, 0.0) == doctest::Approx(0.0));
  CHECK(yule_pgf(1.0, t, 1.2) ==
        doctest::Approx(0.6 / 0.28).epsilon(1e-12));
  CHECK_THROWS_AS(yule_pgf(1.0, t, 1.5), std::domain_error);
  CHECK_THROWS_AS(yule_pgf(1.0, t, -1.5), std::domain_error);
}

TEST_CASE("pgf equals the pmf series inside the radius") {
  double lambda = 1.0, t = std::log(2.0);
  double w = 1.0 - std::exp(-lambda * t);
  for (double z : {0.3, 0.9, 1.1}) {
    // per-term product z^{2n+1} pmf(2n+1); the combined ratio stays < 1
    double term = z * std::exp(-lambda * t);
    double sum = 0.0;
    while (term > 1e-18) {
      sum += term;
      term *= z * z * w;
    }
    CHECK(std::fabs(sum - yule_pgf(lambda, t, z)) < 1e-10);
  }
}

TEST_CASE("closed-form tail") {
  double lambda = 1.0, t = 0.4;
  double w = 1.0 - std::exp(-t);
  CHECK(yule_progeny_tail(lambda, t, 0) == 1.0);
  CHECK(yule_progeny_tail(lambda, t, 1) == 1.0);
  CHECK(yule_progeny_tail(lambda, t, 2) == doctest::Approx(w));
  CHECK(yule_progeny_tail(lambda, t, 3) == doctest::Approx(w));
  CHECK(yule_progeny_tail(lambda, t, 4) == doctest::Approx(w * w));
  // consistency with the pmf
  double s = 0.0;
  for (long long n = 2; n <= 2000; ++n)
    s += yule_progeny_pmf(lambda, t, n);
  CHECK(s == doctest::Approx(yule_progeny_tail(lambda, t, 2)).epsilon(1e-10));
}

TEST_CASE("empirical law edge cases") {
  EmpiricalProgeny point = empirical_progeny({5, 5, 5, 5});
  CHECK(point.pmf(5) == doctest::Approx(1.0));
  CHECK(point.tail(5) == doctest::Approx(1.0));
  CHECK(point.tail(6) == doctest::Approx(0.0));

  EmpiricalProgeny single = empirical_progeny({1, 1, 1});
  CHECK(single.pmf(1) == doctest::Approx(1.0));
}

TEST_CASE("dominance of equal laws and a violating law") {
  double lambda = 1.0, t = 0.7;
  auto totals_for = [&](double rate) {
    std::vector<long long> totals;
    for (int i = 0; i < 20000; ++i) {
      RngStream rng(88, i);
      auto s = sample_marked_yule(rate, t, 0, rng, 1000000);
      totals.push_back(s->total());
    }
    return empirical_progeny(totals);
  };
  CHECK(check_dominance(totals_for(1.0), lambda, t, 41).pass);
  // faster splitting violates dominance by the rate-1 chain
  auto bad = check_dominance(totals_for(2.0), lambda, t, 41);
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_margin > 0.0);
}

TEST_CASE("multiplicative progeny at horizon zero") {
  auto sigma = [](int k) { return k == 2 ? 0.7 : 0.1; };
  MarkedProgenyResult r =
      marked_progeny_mean(1.0, 0.0, 2, sigma, 2.0, 0.4, 2000, 5, 1000, 1);
  CHECK(r.estimate == doctest::Approx(0.7));
  CHECK(r.std_error == doctest::Approx(0.0));
  CHECK(r.bound == doctest::Approx(0.7));
}

TEST_CASE("constant weights reproduce the generating function") {
  double lambda = 1.0, t = 0.3, c = 0.3;
  auto sigma = [c](int) { return c; };
  MarkedProgenyResult r =
      marked_progeny_mean(lambda, t, 2, sigma, 2.0, 0.4, 40000, 21, 1000000, 2);
  double expect = yule_pgf(lambda, t, c);
  CHECK(std::fabs(r.estimate - expect) <= 3.0 * r.std_error);
  CHECK(r.estimate <= r.bound + 3.0 * r.std_error);
}

TEST_CASE("weighted progeny stays below its analytic bound") {
  double lambda = 1.0;
  for (auto [j, gamma, delta, t] :
       {std::tuple{0, 2.0, 0.4, 0.3}, std::tuple{2, 2.0, 0.4, 0.3},
        std::tuple{3, 3.0, 1.0, 0.2}}) {
    double w = 1.0 - std::exp(-lambda * t);
    double s0 = 0.9 / (w * gamma * delta);
    auto sigma = [=](int k) {
      if (k == 0) return s0;
      return std::min(s0, 0.999 * (k - 2.0 + gamma) * delta);
    };
    MarkedProgenyResult r = marked_progeny_mean(lambda, t, j, sigma, gamma,
                                                delta, 30000, 31, 1000000, 2);
    CHECK(r.estimate <= r.bound + 3.0 * r.std_error);
  }
}

TEST_CASE("weight preconditions are enforced") {
  auto bad0 = [](int k) { return k == 0 ? 100.0 : 0.1; };
  CHECK_THROWS_AS(
      marked_progeny_mean(1.0, 0.5, 1, bad0, 2.0, 0.4, 100, 1, 1000, 1),
      std::invalid_argument);
  auto bad1 = [](int k) { return k == 1 ? 0.5 : 0.1; };  // (1-2+2)*0.4 = 0.4
  CHECK_THROWS_AS(
      marked_progeny_mean(1.0, 0.5, 1, bad1, 2.0, 0.4, 100, 1, 1000, 1),
      std::invalid_argument);
}
