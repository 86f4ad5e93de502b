#include "odetree/certification.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "odetree/numeric.hpp"

namespace odetree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMarginalTol = 1e-12;

// strict inequality a < b, flagged marginal when the two sides are within
// 1e-12 of each other
struct Ineq {
  bool holds;
  bool marginal;
};

Ineq lt(double a, double b) {
  return Ineq{a < b, std::fabs(a - b) < kMarginalTol};
}
Ineq le(double a, double b) {
  return Ineq{a <= b, std::fabs(a - b) < kMarginalTol};
}

void add_clause(HypothesisVerdict& v, const std::string& name, Ineq q) {
  v.clauses.emplace_back(name, q.holds);
  if (q.marginal) v.marginal = true;
  if (!q.holds) v.pass = false;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

double c1_threshold(double q, double u) {
  if (!(q >= 1.0)) throw std::domain_error("c1: q must be >= 1");
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("c1: u must lie in (0,1)");
  return std::pow(1.0 - u * u, -1.0 / (2.0 * q));
}

double c2_threshold(double q, double u) {
  if (!(q >= 1.0)) throw std::domain_error("c2: q must be >= 1");
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("c2: u must lie in (0,1)");
  double num = std::pow(std::sqrt(4.0 + u * u) - u, 1.0 / q);
  double den = std::pow(2.0, 1.0 / q) * std::pow(1.0 - u, 1.0 / (2.0 * q));
  return num / den;
}

double ProblemBounds::sup_f() const {
  if (f_tail == DerivTail::Unbounded) return kInf;
  double m = 0.0;
  for (double v : sup_derivs_f) m = std::max(m, v);
  return m;
}

double ProblemBounds::sup_g() const {
  if (sup_derivs_g.empty()) return 0.0;
  if (g_tail == DerivTail::Unbounded) return kInf;
  double m = 0.0;
  for (double v : sup_derivs_g) m = std::max(m, v);
  return m;
}

double ProblemBounds::ball_sup_all_orders(double r) const {
  if (!ball_sup) throw std::runtime_error("ball_sup unavailable");
  if (ball_tail == DerivTail::Unbounded) return kInf;
  int k_max = static_cast<int>(sup_derivs_f.size());
  if (k_max < 1) k_max = 1;
  double m = 0.0;
  for (int k = 0; k < k_max; ++k) m = std::max(m, ball_sup(r, k));
  return m;
}

double compute_C0(const ProblemBounds& bounds, const LifetimeDensity& rho,
                  double T) {
  double tail_T = rho.tail(T);
  double rho_star = rho.inf_on_horizon(T);
  if (!(tail_T > 0.0) || !(rho_star > 0.0))
    throw std::domain_error("compute_C0: density degenerates on [0,T]");
  double c = 1.0 / rho_star;
  c = std::max(c, bounds.sup_f() / tail_T);
  c = std::max(c, bounds.sup_g() / tail_T);
  return c;
}

double lq_bound_I(double C0, double lambda, double q, double t) {
  double e = std::exp(-lambda * t);
  double den = 1.0 - (1.0 - e) * std::pow(C0, 2.0 * q);
  if (!(den > 0.0)) return kInf;
  return e * std::pow(C0, q) / den;
}

HypothesisVerdict check_integrability_I(double C0, double lambda, double T,
                                     double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  HypothesisVerdict v;
  v.pass = true;
  double cap = std::pow(1.0 - std::exp(-lambda * T), -1.0 / (2.0 * q));
  add_clause(v, "1 < C0", lt(1.0, C0));
  add_clause(v, "C0 < (1-e^{-lambda T})^{-1/(2q)}", lt(C0, cap));
  v.detail = "C0 = " + fmt(C0) + ", cap = " + fmt(cap);
  return v;
}

HypothesisVerdict check_uniform_I(double C0, double lambda, double T, double q,
                               const ProblemBounds* bounds) {
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  HypothesisVerdict v;
  v.pass = true;
  double u = std::exp(-lambda * T);
  double rhs = (std::sqrt(4.0 + u * u) - u) / (2.0 * std::sqrt(1.0 - u));
  double c0q = std::pow(C0, q);
  add_clause(v, "1 < C0^q", lt(1.0, c0q));
  add_clause(v, "C0^q < uniform cap", lt(c0q, rhs));
  if (bounds && bounds->has_ball_sup()) {
    double radius = T * std::pow(1.0 - u, -1.0 / (2.0 * q));
    double cap = std::pow(1.0 - u, -1.0 / (2.0 * q));
    add_clause(v, "ball sup < (1-e^{-lambda T})^{-1/(2q)}",
               lt(bounds->ball_sup_all_orders(radius), cap));
  } else {
    v.partial = true;  // only the moment clause could be evaluated
  }
  v.detail = "C0^q = " + fmt(c0q) + ", cap = " + fmt(rhs);
  return v;
}

std::vector<double> sigma_sequence(const ProblemBounds& bounds,
                                   const LifetimeDensity& rho, double T,
                                   int k_max) {
  double tail_T = rho.tail(T);
  std::vector<double> sigma(static_cast<std::size_t>(k_max) + 1, 0.0);
  auto at = [](const std::vector<double>& v, DerivTail tail, int k) {
    if (k < static_cast<int>(v.size())) return v[static_cast<std::size_t>(k)];
    switch (tail) {
      case DerivTail::Zero: return 0.0;
      case DerivTail::Constant: return v.empty() ? 0.0 : v.back();
      case DerivTail::Unbounded: return kInf;
    }
    return 0.0;
  };
  for (int k = 0; k <= k_max; ++k) {
    double f = at(bounds.sup_derivs_f, bounds.f_tail, k);
    double g = bounds.sup_derivs_g.empty()
                   ? 0.0
                   : at(bounds.sup_derivs_g, bounds.g_tail, k);
    sigma[static_cast<std::size_t>(k)] = std::max(f, g) / tail_T;
  }
  return sigma;
}

HypothesisVerdict check_integrability_II(const std::vector<double>& sigma,
                                      double lambda, double T, double q,
                                      double delta, double gamma,
                                      double rho_star) {
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  if (!(gamma >= 2.0)) throw std::invalid_argument("gamma must be >= 2");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (sigma.size() < 2)
    throw std::invalid_argument("sigma must cover orders 0 and 1");
  HypothesisVerdict v;
  v.pass = true;
  double w = 1.0 - std::exp(-lambda * T);
  add_clause(v, "rho_* > (1-e^{-lambda T})^{1/(2q)}",
             lt(std::pow(w, 1.0 / (2.0 * q)), rho_star));
  double s0 = std::pow(sigma[0], 2.0 * q);
  add_clause(v, "1 < sigma(0)^{2q}", lt(1.0, s0));
  add_clause(v, "sigma(0)^{2q} < 1/((1-e^{-lambda T}) gamma delta)",
             lt(s0, 1.0 / (w * gamma * delta)));
  bool grow_lo = true, grow_hi = true;
  bool marginal = false;
  for (std::size_t k = 1; k < sigma.size(); ++k) {
    double sk = std::pow(sigma[k], 2.0 * q);
    Ineq lo = lt(1.0, sk);
    Ineq hi = le(sk, (static_cast<double>(k) - 2.0 + gamma) * delta);
    grow_lo = grow_lo && lo.holds;
    grow_hi = grow_hi && hi.holds;
    marginal = marginal || lo.marginal || hi.marginal;
  }
  add_clause(v, "1 < sigma(k)^{2q}, k >= 1", Ineq{grow_lo, marginal});
  add_clause(v, "sigma(k)^{2q} <= (k-2+gamma) delta, k >= 1",
             Ineq{grow_hi, false});
  return v;
}

double lq_bound_II(const std::vector<double>& sigma, double lambda, double q,
                   double delta, double gamma, double rho_star, int j,
                   double t) {
  if (j < 0 || j >= static_cast<int>(sigma.size()))
    throw std::invalid_argument("lq_bound_II: j outside the sigma range");
  double w = 1.0 - std::exp(-lambda * t);
  double b1 = 1.0 - w * std::pow(sigma[0], 2.0 * q) * gamma * delta;
  double b2 = 1.0 - w / std::pow(rho_star, 2.0 * q);
  if (!(b1 > 0.0) || !(b2 > 0.0)) return kInf;
  double expo = -0.5 - (static_cast<double>(j) - 1.0) / (2.0 * gamma);
  return std::exp(-lambda * t) * std::pow(sigma[static_cast<std::size_t>(j)], q) *
         std::pow(b1, expo) / std::sqrt(b2);
}

double remark_sigma0_cap(double lambda, double T, double q, double delta,
                         double gamma, double rho_star) {
  double w = 1.0 - std::exp(-lambda * T);
  double s2 = 1.0 - w / std::pow(rho_star, 2.0 * q);
  if (!(s2 > 0.0)) return 0.0;
  double s = std::sqrt(s2);
  double a = std::exp(lambda * T) * s / std::sqrt(w);
  double b = 1.0 + std::sqrt(w) * gamma * delta * std::exp(lambda * T) * s;
  return a / b;
}

double remark_sigmak_cap(int k, double lambda, double T, double q,
                         double delta, double gamma, double rho_star) {
  if (k < 1) throw std::invalid_argument("remark cap applies to k >= 1");
  double w = 1.0 - std::exp(-lambda * T);
  double s2 = 1.0 - w / std::pow(rho_star, 2.0 * q);
  if (!(s2 > 0.0)) return 0.0;
  double s = std::sqrt(s2);
  double a = std::exp(lambda * T) * s / std::sqrt(w);
  double b = 1.0 + std::sqrt(w) * gamma * delta * std::exp(lambda * T) * s;
  return a * std::pow(b, -0.5 - (static_cast<double>(k) - 1.0) / (2.0 * gamma));
}

HypothesisVerdict check_uniform_II(const std::vector<double>& sigma,
                                double lambda, double T, double q,
                                double delta, double gamma, double rho_star,
                                const ProblemBounds* bounds) {
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  if (!(gamma >= 2.0)) throw std::invalid_argument("gamma must be >= 2");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (sigma.size() < 2)
    throw std::invalid_argument("sigma must cover orders 0 and 1");
  HypothesisVerdict v;
  v.pass = true;
  double w = 1.0 - std::exp(-lambda * T);
  add_clause(v, "rho_* > (1-e^{-lambda T})^{1/(2q)}",
             lt(std::pow(w, 1.0 / (2.0 * q)), rho_star));
  double s0 = std::pow(sigma[0], q);
  add_clause(v, "1 < sigma(0)^q", lt(1.0, s0));
  add_clause(v, "sigma(0)^q < 1/((1-e^{-lambda T}) gamma delta)",
             lt(s0, 1.0 / (w * gamma * delta)));

  double s2 = 1.0 - w / std::pow(rho_star, 2.0 * q);
  double base = 1.0 - w * s0 * gamma * delta;
  bool main_lo = true, main_hi = true, marginal = false;
  for (std::size_t k = 1; k < sigma.size(); ++k) {
    double sk = std::pow(sigma[k], q);
    Ineq lo = lt(1.0, sk);
    double cap = (s2 > 0.0 && base > 0.0)
                     ? std::exp(lambda * T) * std::sqrt(s2 / w) *
                           std::pow(base, 0.5 + (static_cast<double>(k) - 1.0) /
                                              (2.0 * gamma))
                     : 0.0;
    Ineq hi = lt(sk, cap);
    main_lo = main_lo && lo.holds;
    main_hi = main_hi && hi.holds;
    marginal = marginal || lo.marginal || hi.marginal;
  }
  add_clause(v, "1 < sigma(k)^q, k >= 1", Ineq{main_lo, marginal});
  add_clause(v, "sigma(k)^q < growth cap, k >= 1", Ineq{main_hi, false});

  // explicit sufficient (remark) form, reported alongside
  bool remark = sigma[0] > 0.0 &&
                std::pow(sigma[0], q) <=
                    remark_sigma0_cap(lambda, T, q, delta, gamma, rho_star) &&
                std::pow(sigma[0], q) > 1.0;
  for (std::size_t k = 1; remark && k < sigma.size(); ++k) {
    double sk = std::pow(sigma[k], q);
    remark = sk > 1.0 &&
             sk <= remark_sigmak_cap(static_cast<int>(k), lambda, T, q, delta,
                                     gamma, rho_star);
  }
  v.clauses.emplace_back("remark sufficient form", remark);

  if (bounds && bounds->has_ball_sup()) {
    double radius = T * std::pow(w, -1.0 / (2.0 * q));
    double cap = std::pow(w, -1.0 / (2.0 * q));
    add_clause(v, "ball sup < (1-e^{-lambda T})^{-1/(2q)}",
               lt(bounds->ball_sup_all_orders(radius), cap));
  } else {
    v.partial = true;
  }
  return v;
}

double a_priori_bound(double x0, double C0, double lambda, double t) {
  if (!(C0 > 0.0)) throw std::invalid_argument("a_priori_bound: C0 must be > 0");
  double arg = C0 * C0 - (C0 * C0 - 1.0) * std::exp(lambda * t);
  if (!(arg > 0.0))
    throw std::domain_error(
        "a_priori_bound: horizon at or beyond the bound's blow-up time");
  return x0 + t / C0 + std::log(1.0 / arg) / (lambda * C0);
}

double solve_lambda0(double q) {
  if (!(q > 1.0)) throw std::invalid_argument("solve_lambda0: q must be > 1");
  const double e = std::exp(1.0);
  auto h = [&](double lam) {
    double u = std::exp(-lam / e);
    return lam * u * c2_threshold(q, u) - 1.0;
  };
  // scan for the first sign change, then bisect: the smallest root
  const double lo0 = 1.5, hi0 = e;
  const int n = 4096;
  double prev_x = lo0, prev_f = h(lo0);
  for (int i = 1; i <= n; ++i) {
    double x = lo0 + (hi0 - lo0) * static_cast<double>(i) / n;
    double fx = h(x);
    if (prev_f == 0.0) return prev_x;
    if ((prev_f < 0.0) != (fx < 0.0))
      return bisect(h, prev_x, x, 1e-10);
    prev_x = x;
    prev_f = fx;
  }
  throw std::runtime_error(
      "solve_lambda0: no sign change on (3/2, e); cannot locate the root");
}

ExistenceInterval existence_interval_monomial(int n, double x0, double q) {
  if (n < 2) throw std::invalid_argument("monomial power must be >= 2");
  if (!(x0 > 0.0)) throw std::invalid_argument("x0 must be positive");
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  int n0 = std::min(n, static_cast<int>(std::floor(x0)));
  // a = (n!/n0!) x0^{n0} = max_k |D^k f(x0)|
  double a = std::pow(x0, n0);
  for (int m = n0 + 1; m <= n; ++m) a *= m;
  double ratio = 1.0;  // n0!/n!
  for (int m = n0 + 1; m <= n; ++m) ratio /= m;
  double log_term =
      -std::log(1.0 - std::pow(ratio, 2.0 * q) *
                          std::pow(x0 + 1.0, -2.0 * (n0 + 1.0) * q));
  ExistenceInterval out;
  out.t_max = (2.0 / 3.0) * std::min(1.0 / (std::exp(1.0) * a), log_term);
  out.blow_up = 1.0 / ((n - 1.0) * std::pow(x0, n - 1.0));
  return out;
}

ExistenceInterval existence_interval_exponential(double x0, double q) {
  if (!(x0 > 0.0)) throw std::invalid_argument("x0 must be positive");
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  double log_term = -std::log(1.0 - std::exp(-(x0 + 1.0) * 2.0 * q));
  ExistenceInterval out;
  out.t_max = (2.0 / 3.0) * std::min(std::exp(-x0 - 1.0), log_term);
  out.blow_up = std::exp(-x0);
  return out;
}

double rescaled_C0(double mu, const ProblemBounds& bounds,
                   const LifetimeDensity& rho, double T) {
  if (!(mu > 0.0)) throw std::invalid_argument("rescaled_C0: mu must be > 0");
  double tail_mu = rho.tail(mu * T);
  double rho_star = rho.inf_on_horizon(mu * T);  // throws beyond the horizon
  double c = 1.0 / rho_star;
  c = std::max(c, bounds.sup_f() / (mu * tail_mu));
  c = std::max(c, bounds.sup_g() / tail_mu);
  return c;
}

Certificate certify(const ProblemBounds& bounds, const LifetimeDensity& rho,
                    const CertifyParams& p) {
  Certificate cert;
  cert.params = p;
  double u = std::exp(-p.lambda * p.T);
  cert.tail_T = rho.tail(p.T);
  cert.rho_star = rho.inf_on_horizon(p.T);
  cert.C0 = compute_C0(bounds, rho, p.T);
  cert.C1 = c1_threshold(p.q, u);
  cert.C2 = c2_threshold(p.q, u);
  cert.sigma = sigma_sequence(bounds, rho, p.T, p.k_max);
  cert.dominance = verify_dominance(rho, p.lambda, 1000);

  cert.integrability_I = check_integrability_I(cert.C0, p.lambda, p.T, p.q);
  cert.uniform_I = check_uniform_I(cert.C0, p.lambda, p.T, p.q, &bounds);
  cert.integrability_II = check_integrability_II(cert.sigma, p.lambda, p.T,
                                                 p.q, p.delta, p.gamma,
                                                 cert.rho_star);
  cert.uniform_II = check_uniform_II(cert.sigma, p.lambda, p.T, p.q, p.delta,
                                     p.gamma, cert.rho_star, &bounds);

  // dominance of the lifetime law is a standing hypothesis of all four
  if (!cert.dominance.pass) {
    cert.integrability_I.pass = false;
    cert.uniform_I.pass = false;
    cert.integrability_II.pass = false;
    cert.uniform_II.pass = false;
  }

  // derivative-cap corollary: sup_k |D^k f(x0)| <= tail(T) / c2(q;T), q > 1
  {
    HypothesisVerdict uq;
    uq.pass = true;
    if (p.q > 1.0) {
      Ineq cap = le(bounds.sup_f(), cert.tail_T / cert.C2);
      add_clause(uq, "sup_k |D^k f(x0)| <= tail(T)/c2", cap);
    } else {
      uq.pass = false;
      uq.partial = true;
      uq.detail = "requires q > 1";
    }
    if (!cert.dominance.pass) uq.pass = false;
    cert.corollary_uniqueness = uq;

    HypothesisVerdict ex = uq;
    if (bounds.has_ball_sup()) {
      double radius = p.T * std::pow(1.0 - u, -1.0 / (2.0 * p.q));
      double cap = std::pow(1.0 - u, -1.0 / (2.0 * p.q));
      add_clause(ex, "ball sup < (1-e^{-lambda T})^{-1/(2q)}",
                 lt(bounds.ball_sup_all_orders(radius), cap));
    } else {
      ex.partial = true;
    }
    cert.corollary_existence = ex;
  }

  cert.lq_bound_at_T = lq_bound_I(cert.C0, p.lambda, p.q, p.T);
  return cert;
}

std::vector<std::pair<std::string, std::string>> Certificate::report() const {
  std::vector<std::pair<std::string, std::string>> kv;
  auto put = [&](const std::string& k, const std::string& v) {
    kv.emplace_back(k, v);
  };
  auto put_d = [&](const std::string& k, double v) { put(k, fmt(v)); };
  auto put_verdict = [&](const std::string& k, const HypothesisVerdict& v) {
    std::string s = v.pass ? "PASS" : "FAIL";
    if (v.marginal) s += " (marginal)";
    if (v.partial) s += " (partial)";
    put(k, s);
    for (const auto& c : v.clauses)
      put(k + "." + c.first, c.second ? "ok" : "violated");
  };
  put_d("lambda", params.lambda);
  put_d("T", params.T);
  put_d("q", params.q);
  put_d("delta", params.delta);
  put_d("gamma", params.gamma);
  // suprema over derivative orders are evaluated up to this cap
  put("k_max", std::to_string(params.k_max));
  put_d("C0", C0);
  put_d("C1", C1);
  put_d("C2", C2);
  put_d("rho_star", rho_star);
  put_d("tail_T", tail_T);
  put_d("sigma0", sigma.empty() ? 0.0 : sigma[0]);
  put("dominance", dominance.pass ? "PASS" : "FAIL");
  put_verdict("integrability_I", integrability_I);
  put_verdict("uniform_I", uniform_I);
  put_verdict("integrability_II", integrability_II);
  put_verdict("uniform_II", uniform_II);
  put_verdict("corollary_uniqueness", corollary_uniqueness);
  put_verdict("corollary_existence", corollary_existence);
  put_d("lq_bound_at_T", lq_bound_at_T);
  return kv;
}

}  // namespace odetree
