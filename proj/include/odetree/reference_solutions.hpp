#pragma once

#include <array>
#include <vector>

#include "odetree/certification.hpp"
#include "odetree/oracle.hpp"
#include "odetree/solution_oracle.hpp"

namespace odetree {

enum class ProblemKind { Monomial, Exponential, XCosX, Linear2 };

// Builtin nonlinearities used as ground truth: x^n, e^x and x cos x in
// dimension one, plus a 2-d linear system x' = A x as a multidimensional
// smoke test.
struct BuiltinProblem {
  ProblemKind kind = ProblemKind::Monomial;
  int n = 2;                   // monomial power
  std::vector<double> x0;
  std::array<double, 4> a{};   // Linear2 matrix, row-major

  int dim() const { return kind == ProblemKind::Linear2 ? 2 : 1; }

  static BuiltinProblem monomial(int n, double x0);
  static BuiltinProblem exponential(double x0);
  static BuiltinProblem x_cos_x(double x0);
  static BuiltinProblem linear2(const std::array<double, 4>& a,
                                const std::vector<double>& x0);
};

// x(t) = (x0^{-(n-1)} - (n-1) t)^{-1/(n-1)}, up to the explosion time
// 1/((n-1) x0^{n-1}).
double monomial_solution(int n, double x0, double t);

// x(t) = -log(e^{-x0} - t), up to the explosion time e^{-x0}.
double exponential_solution(double x0, double t);

double blow_up_time(const BuiltinProblem& p);

bool has_closed_form(const BuiltinProblem& p);
std::vector<double> closed_form_solution(const BuiltinProblem& p, double t);

// Exact derivative tensors of the builtin map.
DerivativeOracle derivative_oracle(const BuiltinProblem& p);

// Classical fourth-order Runge-Kutta from x0 over [0,t] in `steps` steps.
std::vector<double> rk4(const BuiltinProblem& p, const std::vector<double>& x0,
                        double t, int steps);

// Reference evaluator of D^k f(x(s)) along the closed-form solution;
// throws for kinds without one.
SolutionOracle solution_oracle(const BuiltinProblem& p);

// Derivative magnitudes at (and around) x0 for the certification engine.
ProblemBounds problem_bounds(const BuiltinProblem& p, int k_max);

// 2x2 matrix exponential exp(A t) by scaling and squaring.
std::array<double, 4> mat2_exp(const std::array<double, 4>& a, double t);

}  // namespace odetree
