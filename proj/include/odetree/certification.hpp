#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "odetree/lifetime_density.hpp"
#include "odetree/thresholds.hpp"

namespace odetree {

enum class DerivTail { Zero, Constant, Unbounded };

// Derivative magnitudes of the problem at and around x0, as needed by the
// quantitative hypotheses. sup_derivs_* hold |D^k .(x0)| (max norm) for
// k = 0..k_max; the tail flag states how the sequence continues beyond.
struct ProblemBounds {
  std::vector<double> sup_derivs_f;
  DerivTail f_tail = DerivTail::Zero;
  std::vector<double> sup_derivs_g;  // empty when no test map is involved
  DerivTail g_tail = DerivTail::Zero;

  // sup over |x-x0| < r of |D^m f(x)|; null when unavailable
  std::function<double(double r, int m)> ball_sup;
  DerivTail ball_tail = DerivTail::Zero;

  double sup_f() const;  // sup over all k >= 0 (+inf when unbounded)
  double sup_g() const;  // 0 when no g
  bool has_ball_sup() const { return static_cast<bool>(ball_sup); }
  // sup over all orders m >= 0 of ball_sup(r, m)
  double ball_sup_all_orders(double r) const;
};

struct HypothesisVerdict {
  bool pass = false;
  bool marginal = false;  // some inequality within 1e-12 of its threshold
  bool partial = false;   // a clause could not be evaluated (no ball sup)
  std::vector<std::pair<std::string, bool>> clauses;
  std::string detail;
};

// Master constant: max of sup_k |D^k f(x0)| / tail(T), the same for g,
// and 1 / inf_{[0,T]} rho.
double compute_C0(const ProblemBounds& bounds, const LifetimeDensity& rho,
                  double T);

// L^q moment bound under the bounded-marks integrability condition:
// exp(-lambda t) C0^q / (1 - (1 - exp(-lambda t)) C0^{2q}); +inf once the
// denominator closes.
double lq_bound_I(double C0, double lambda, double q, double t);

// verdict: 1 < C0 < (1 - e^{-lambda T})^{-1/(2q)}
HypothesisVerdict check_integrability_I(double C0, double lambda, double T,
                                     double q);

// verdict: 1 < C0^q < (sqrt(4+e^{-2 lambda T}) - e^{-lambda T}) /
// (2 sqrt(1-e^{-lambda T})), plus the ball condition
// sup_{|x-x0|<T(1-e^{-lambda T})^{-1/(2q)}} |D^m f| < (1-e^{-lambda T})^{-1/(2q)}.
HypothesisVerdict check_uniform_I(double C0, double lambda, double T, double q,
                               const ProblemBounds* bounds);

// Weight sequence sigma(k) = max(|D^k f(x0)|, |D^k g(x0)|) / tail(T) for
// k = 0..k_max.
std::vector<double> sigma_sequence(const ProblemBounds& bounds,
                                   const LifetimeDensity& rho, double T,
                                   int k_max);

// Growth-permitting integrability condition: rho_* > (1-e^{-lambda T})^{1/(2q)},
// 1 < sigma(0)^{2q} < 1/((1-e^{-lambda T}) gamma delta), and for k >= 1
// 1 < sigma(k)^{2q} <= (k-2+gamma) delta. gamma >= 2, delta > 0.
HypothesisVerdict check_integrability_II(const std::vector<double>& sigma,
                                      double lambda, double T, double q,
                                      double delta, double gamma,
                                      double rho_star);

// Matching L^q moment bound for a root mark of order j.
double lq_bound_II(const std::vector<double>& sigma, double lambda, double q,
                   double delta, double gamma, double rho_star, int j,
                   double t);

// Uniform-integrability counterpart; also evaluates the explicit
// sufficient (remark) form and reports both.
HypothesisVerdict check_uniform_II(const std::vector<double>& sigma,
                                double lambda, double T, double q,
                                double delta, double gamma, double rho_star,
                                const ProblemBounds* bounds);

// Sufficient remark-form bounds for the uniform condition on sigma.
double remark_sigma0_cap(double lambda, double T, double q, double delta,
                         double gamma, double rho_star);
double remark_sigmak_cap(int k, double lambda, double T, double q,
                         double delta, double gamma, double rho_star);

// A priori solution bound x0 + t/C0 + log(1/(C0^2 - (C0^2-1) e^{lambda t}))
// / (lambda C0); throws once the log argument closes (the bound's own
// blow-up time).
double a_priori_bound(double x0, double C0, double lambda, double t);

// Smallest root of lambda0 * exp(-lambda0/e) * c2(q; exp(-lambda0/e)) = 1
// on (3/2, e), to absolute tolerance 1e-10. Requires q > 1.
double solve_lambda0(double q);

struct ExistenceInterval {
  double t_max = 0.0;   // certified horizon
  double blow_up = 0.0; // explosion time of the closed-form solution
};

// Certified existence horizon for x' = x^n, x(0) = x0 > 0:
// (2/3) min( 1/(e a), -log(1 - (n0!/n!)^{2q} (x0+1)^{-2(n0+1)q}) ) with
// n0 = min(n, floor(x0)) and a = (n!/n0!) x0^{n0}.
ExistenceInterval existence_interval_monomial(int n, double x0, double q);

// Same for x' = e^x: (2/3) min( e^{-x0-1}, -log(1 - e^{-(x0+1) 2q}) ).
ExistenceInterval existence_interval_exponential(double x0, double q);

// Master constant of the rescaled problem x' = f(x)/mu on [0, mu T].
double rescaled_C0(double mu, const ProblemBounds& bounds,
                   const LifetimeDensity& rho, double T);

struct CertifyParams {
  double lambda = 1.0;
  double T = 0.1;
  double q = 1.0;
  double delta = 1.0;
  double gamma = 2.0;
  int k_max = 64;
};

struct Certificate {
  CertifyParams params;
  double C0 = 0.0;
  double C1 = 0.0;  // c1_threshold(q, e^{-lambda T})
  double C2 = 0.0;  // c2_threshold(q, e^{-lambda T})
  double rho_star = 0.0;
  double tail_T = 0.0;
  std::vector<double> sigma;
  DominanceCheck dominance;
  HypothesisVerdict integrability_I;
  HypothesisVerdict uniform_I;
  HypothesisVerdict integrability_II;
  HypothesisVerdict uniform_II;
  HypothesisVerdict corollary_uniqueness;  // derivative cap tail(T)/c2(q;T), q > 1
  HypothesisVerdict corollary_existence;   // uniqueness cap plus the ball condition
  double lq_bound_at_T = 0.0;           // bound I at t = T when finite

  // Flat key = value serialization.
  std::vector<std::pair<std::string, std::string>> report() const;
};

Certificate certify(const ProblemBounds& bounds, const LifetimeDensity& rho,
                    const CertifyParams& params);

}  // namespace odetree
