#include "odetree/reference_solutions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace odetree {

namespace {

double factorial_ratio(int n, int k) {
  // n! / (n-k)!
  double r = 1.0;
  for (int i = n - k + 1; i <= n; ++i) r *= i;
  return r;
}

// k-th derivative of x cos x: x cos(x + k pi/2) + k cos(x + (k-1) pi/2)
double xcosx_deriv(int k, double x) {
  const double h = M_PI / 2.0;
  if (k == 0) return x * std::cos(x);
  return x * std::cos(x + k * h) + k * std::cos(x + (k - 1) * h);
}

std::vector<double> apply_f(const BuiltinProblem& p,
                            const std::vector<double>& x) {
  switch (p.kind) {
    case ProblemKind::Monomial:
      return {std::pow(x[0], p.n)};
    case ProblemKind::Exponential:
      return {std::exp(x[0])};
    case ProblemKind::XCosX:
      return {x[0] * std::cos(x[0])};
    case ProblemKind::Linear2:
      return {p.a[0] * x[0] + p.a[1] * x[1], p.a[2] * x[0] + p.a[3] * x[1]};
  }
  throw std::logic_error("unknown problem kind");
}

}  // namespace

BuiltinProblem BuiltinProblem::monomial(int n, double x0) {
  if (n < 2) throw std::invalid_argument("monomial power must be >= 2");
  BuiltinProblem p;
  p.kind = ProblemKind::Monomial;
  p.n = n;
  p.x0 = {x0};
  return p;
}

BuiltinProblem BuiltinProblem::exponential(double x0) {
  BuiltinProblem p;
  p.kind = ProblemKind::Exponential;
  p.x0 = {x0};
  return p;
}

BuiltinProblem BuiltinProblem::x_cos_x(double x0) {
  BuiltinProblem p;
  p.kind = ProblemKind::XCosX;
  p.x0 = {x0};
  return p;
}

BuiltinProblem BuiltinProblem::linear2(const std::array<double, 4>& a,
                                       const std::vector<double>& x0) {
  if (x0.size() != 2) throw std::invalid_argument("linear2 needs a 2-d x0");
  BuiltinProblem p;
  p.kind = ProblemKind::Linear2;
  p.a = a;
  p.x0 = x0;
  return p;
}

double monomial_solution(int n, double x0, double t) {
  if (n < 2) throw std::invalid_argument("monomial power must be >= 2");
  if (!(x0 > 0.0)) throw std::invalid_argument("monomial solution needs x0 > 0");
  double blow = 1.0 / ((n - 1.0) * std::pow(x0, n - 1.0));
  if (!(t < blow))
    throw std::domain_error("monomial solution: t at or beyond the blow-up time");
  return std::pow(std::pow(x0, -(n - 1.0)) - (n - 1.0) * t,
                  -1.0 / (n - 1.0));
}

double exponential_solution(double x0, double t) {
  double blow = std::exp(-x0);
  if (!(t < blow))
    throw std::domain_error("exponential solution: t at or beyond the blow-up time");
  return -std::log(std::exp(-x0) - t);
}

double blow_up_time(const BuiltinProblem& p) {
  switch (p.kind) {
    case ProblemKind::Monomial:
      return 1.0 / ((p.n - 1.0) * std::pow(p.x0[0], p.n - 1.0));
    case ProblemKind::Exponential:
      return std::exp(-p.x0[0]);
    default:
      return std::numeric_limits<double>::infinity();
  }
}

bool has_closed_form(const BuiltinProblem& p) {
  return p.kind != ProblemKind::XCosX;
}

std::vector<double> closed_form_solution(const BuiltinProblem& p, double t) {
  switch (p.kind) {
    case ProblemKind::Monomial:
      return {monomial_solution(p.n, p.x0[0], t)};
    case ProblemKind::Exponential:
      return {exponential_solution(p.x0[0], t)};
    case ProblemKind::Linear2: {
      auto e = mat2_exp(p.a, t);
      return {e[0] * p.x0[0] + e[1] * p.x0[1],
              e[2] * p.x0[0] + e[3] * p.x0[1]};
    }
    case ProblemKind::XCosX:
      throw std::runtime_error("x cos x has no closed-form solution");
  }
  throw std::logic_error("unknown problem kind");
}

DerivativeOracle derivative_oracle(const BuiltinProblem& p) {
  DerivativeOracle o;
  o.dim = p.dim();
  o.out_dim = p.dim();
  switch (p.kind) {
    case ProblemKind::Monomial: {
      int n = p.n;
      o.eval = [n](int k, const std::vector<double>& x) {
        Tensor t(1, 1, k);
        t.data[0] = k <= n ? factorial_ratio(n, k) * std::pow(x[0], n - k) : 0.0;
        return t;
      };
      break;
    }
    case ProblemKind::Exponential:
      o.eval = [](int k, const std::vector<double>& x) {
        Tensor t(1, 1, k);
        t.data[0] = std::exp(x[0]);
        return t;
      };
      break;
    case ProblemKind::XCosX:
      o.eval = [](int k, const std::vector<double>& x) {
        Tensor t(1, 1, k);
        t.data[0] = xcosx_deriv(k, x[0]);
        return t;
      };
      break;
    case ProblemKind::Linear2: {
      auto a = p.a;
      o.eval = [a](int k, const std::vector<double>& x) {
        Tensor t(2, 2, k);
        if (k == 0) {
          t.data[0] = a[0] * x[0] + a[1] * x[1];
          t.data[1] = a[2] * x[0] + a[3] * x[1];
        } else if (k == 1) {
          t.data = {a[0], a[1], a[2], a[3]};
        }
        return t;  // zero beyond order 1
      };
      break;
    }
  }
  return o;
}

std::vector<double> rk4(const BuiltinProblem& p, const std::vector<double>& x0,
                        double t, int steps) {
  if (steps < 1) throw std::invalid_argument("rk4: steps must be >= 1");
  std::vector<double> x = x0;
  double h = t / steps;
  std::size_t d = x.size();
  std::vector<double> k1, k2, k3, k4, tmp(d);
  for (int s = 0; s < steps; ++s) {
    k1 = apply_f(p, x);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    k2 = apply_f(p, tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    k3 = apply_f(p, tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + h * k3[i];
    k4 = apply_f(p, tmp);
    for (std::size_t i = 0; i < d; ++i) {
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(x[i]))
        throw std::runtime_error("rk4: overflow, likely near the blow-up time");
    }
  }
  return x;
}

SolutionOracle solution_oracle(const BuiltinProblem& p) {
  if (!has_closed_form(p))
    throw std::runtime_error("solution oracle: no closed form for this kind");
  SolutionOracle so;
  so.dim = p.dim();
  DerivativeOracle deriv = derivative_oracle(p);
  auto x_at = [p](double s) { return closed_form_solution(p, s); };
  so.x_at = x_at;
  so.deriv_at = [deriv, x_at](MarkBase, int order, double s) {
    // builtins use g = f, so both bases read the same derivative line
    return deriv.derivatives(order, x_at(s));
  };
  return so;
}

ProblemBounds problem_bounds(const BuiltinProblem& p, int k_max) {
  ProblemBounds b;
  switch (p.kind) {
    case ProblemKind::Monomial: {
      int n = p.n;
      double x0 = p.x0[0];
      b.f_tail = DerivTail::Zero;
      for (int k = 0; k <= std::min(k_max, n); ++k)
        b.sup_derivs_f.push_back(
            std::fabs(factorial_ratio(n, k) * std::pow(x0, n - k)));
      b.ball_sup = [n, x0](double r, int m) {
        if (m > n) return 0.0;
        return factorial_ratio(n, m) *
               std::pow(std::fabs(x0) + r, static_cast<double>(n - m));
      };
      b.ball_tail = DerivTail::Zero;
      break;
    }
    case ProblemKind::Exponential: {
      double x0 = p.x0[0];
      b.f_tail = DerivTail::Constant;
      b.sup_derivs_f.assign(static_cast<std::size_t>(k_max) + 1,
                            std::exp(x0));
      b.ball_sup = [x0](double r, int) { return std::exp(x0 + r); };
      b.ball_tail = DerivTail::Constant;
      break;
    }
    case ProblemKind::XCosX: {
      double x0 = p.x0[0];
      b.f_tail = DerivTail::Unbounded;  // |D^k| grows linearly in k
      for (int k = 0; k <= k_max; ++k)
        b.sup_derivs_f.push_back(std::fabs(xcosx_deriv(k, x0)));
      // tight envelope |x| + m over the ball, unbounded across orders
      b.ball_sup = [x0](double r, int m) {
        return std::fabs(x0) + r + static_cast<double>(m);
      };
      b.ball_tail = DerivTail::Unbounded;
      break;
    }
    case ProblemKind::Linear2: {
      double a_norm = 0.0;
      for (double v : p.a) a_norm = std::max(a_norm, std::fabs(v));
      double fx = std::max(std::fabs(p.a[0] * p.x0[0] + p.a[1] * p.x0[1]),
                           std::fabs(p.a[2] * p.x0[0] + p.a[3] * p.x0[1]));
      b.f_tail = DerivTail::Zero;
      b.sup_derivs_f = {fx, a_norm};
      double x_norm = std::max(std::fabs(p.x0[0]), std::fabs(p.x0[1]));
      auto a = p.a;
      b.ball_sup = [a, a_norm, x_norm](double r, int m) {
        if (m == 0) return 2.0 * a_norm * (x_norm + r);
        if (m == 1) return a_norm;
        return 0.0;
      };
      b.ball_tail = DerivTail::Zero;
      break;
    }
  }
  return b;
}

std::array<double, 4> mat2_exp(const std::array<double, 4>& a, double t) {
  // scaling and squaring with a Taylor core at tolerance ~1e-16
  std::array<double, 4> m{a[0] * t, a[1] * t, a[2] * t, a[3] * t};
  double norm = 0.0;
  for (double v : m) norm = std::max(norm, std::fabs(v));
  int s = 0;
  while (norm > 0.5) {
    norm *= 0.5;
    ++s;
  }
  double scale = std::ldexp(1.0, -s);
  for (double& v : m) v *= scale;

  auto mul = [](const std::array<double, 4>& x, const std::array<double, 4>& y) {
    return std::array<double, 4>{
        x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
  };

  std::array<double, 4> result{1.0, 0.0, 0.0, 1.0};
  std::array<double, 4> term{1.0, 0.0, 0.0, 1.0};
  for (int k = 1; k <= 24; ++k) {
    term = mul(term, m);
    double inv = 1.0 / k;
    for (double& v : term) v *= inv;
    for (int i = 0; i < 4; ++i) result[i] += term[i];
  }
  for (int i = 0; i < s; ++i) result = mul(result, result);
  return result;
}

}  // namespace odetree
