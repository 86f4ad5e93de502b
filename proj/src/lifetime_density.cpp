#include "odetree/lifetime_density.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace odetree {

LifetimeDensity LifetimeDensity::exponential(double lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("exponential density: rate must be positive");
  LifetimeDensity d;
  d.kind_ = Kind::Exponential;
  d.lambda_ = lambda;
  return d;
}

LifetimeDensity LifetimeDensity::piecewise(double plateau_height,
                                           double lambda1, double lambda2,
                                           double plateau_end) {
  if (!(plateau_height > 0.0) || !(lambda1 > 0.0) || !(lambda2 > 0.0) ||
      !(plateau_end > 0.0))
    throw std::invalid_argument("piecewise density: parameters must be positive");
  double mass = plateau_end * plateau_height +
                lambda2 / lambda1 * std::exp(-lambda1 * plateau_end);
  if (std::fabs(mass - 1.0) > 1e-10)
    throw std::invalid_argument("piecewise density: total mass is not one");
  LifetimeDensity d;
  d.kind_ = Kind::Piecewise;
  d.plateau_ = plateau_height;
  d.lambda1_ = lambda1;
  d.lambda2_ = lambda2;
  d.plateau_end_ = plateau_end;
  return d;
}

double LifetimeDensity::pdf(double t) const {
  if (t < 0.0) throw std::domain_error("pdf: negative time");
  if (kind_ == Kind::Exponential) return lambda_ * std::exp(-lambda_ * t);
  // value at the joint is the plateau (left-continuous)
  if (t <= plateau_end_) return plateau_;
  return lambda2_ * std::exp(-lambda1_ * t);
}

double LifetimeDensity::tail(double t) const {
  if (t < 0.0) throw std::domain_error("tail: negative time");
  if (kind_ == Kind::Exponential) return std::exp(-lambda_ * t);
  double tail_at_end = lambda2_ / lambda1_ * std::exp(-lambda1_ * plateau_end_);
  if (t <= plateau_end_) return (plateau_end_ - t) * plateau_ + tail_at_end;
  return lambda2_ / lambda1_ * std::exp(-lambda1_ * t);
}

double LifetimeDensity::inf_on_horizon(double T) const {
  if (T < 0.0) throw std::domain_error("inf_on_horizon: negative horizon");
  if (T > horizon())
    throw std::domain_error("inf_on_horizon: horizon exceeds the certified range");
  if (kind_ == Kind::Exponential) return lambda_ * std::exp(-lambda_ * T);
  return plateau_;  // constant on [0, plateau_end]
}

double LifetimeDensity::horizon() const {
  if (kind_ == Kind::Exponential)
    return std::numeric_limits<double>::infinity();
  return plateau_end_;
}

double LifetimeDensity::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("quantile: u must lie in (0,1)");
  if (kind_ == Kind::Exponential) return -std::log(u) / lambda_;
  double plateau_mass = plateau_end_ * plateau_;
  if (u < plateau_mass) return u / plateau_;
  // invert the exponential tail: 1 - F(t) = (lambda2/lambda1) e^{-lambda1 t}
  return -std::log((1.0 - u) * lambda1_ / lambda2_) / lambda1_;
}

LifetimeDensity build_exponential(double lambda) {
  return LifetimeDensity::exponential(lambda);
}

PiecewiseBuild build_piecewise(double q, PlateauBound variant, double T,
                               double lambda, double epsilon) {
  if (!(q >= 1.0)) throw std::invalid_argument("build_piecewise: q must be >= 1");
  if (!(T > 0.0 && T < 1.0))
    throw std::invalid_argument("build_piecewise: plateau end must lie in (0,1)");
  if (!(lambda > 0.0))
    throw std::invalid_argument("build_piecewise: rate must be positive");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("build_piecewise: slack must be positive");

  double u = std::exp(-lambda * T);
  double c = variant == PlateauBound::C1 ? c1_threshold(q, u)
                                         : c2_threshold(q, u);
  if (epsilon >= c)
    throw std::invalid_argument(
        "build_piecewise: slack reaches the bound constant, the plateau "
        "height would not be positive");

  double margin = (1.0 - u) * (c - epsilon) - T;
  if (margin < 0.0)
    throw std::runtime_error(
        "build_piecewise: infeasible, T <= (1 - exp(-lambda T)) * (C - eps) "
        "is violated; the plateau mass would break tail dominance");

  double plateau = 1.0 / (c - epsilon);
  // lambda1 = lambda and lambda2 solved from unit mass:
  // T * plateau + (lambda2/lambda1) e^{-lambda1 T} = 1
  double lambda1 = lambda;
  double lambda2 = lambda * std::exp(lambda * T) * (1.0 - T * plateau);
  PiecewiseBuild out{LifetimeDensity::piecewise(plateau, lambda1, lambda2, T),
                     c, margin};
  return out;
}

DominanceCheck verify_dominance(const LifetimeDensity& rho, double lambda,
                                int grid_points) {
  if (grid_points < 2)
    throw std::invalid_argument("verify_dominance: need at least 2 grid points");
  double cap = rho.kind() == LifetimeDensity::Kind::Piecewise
                   ? 3.0 * rho.plateau_end()
                   : 3.0 / lambda;
  DominanceCheck out;
  out.grid_points = grid_points;
  out.pass = true;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) {
    double r = cap * static_cast<double>(i) / (grid_points - 1);
    double margin = rho.tail(r) - std::exp(-lambda * r);
    if (margin < out.worst_margin) out.worst_margin = margin;
    if (margin < 0.0 && out.pass) {
      out.pass = false;
      out.first_violation_r = r;
    }
  }
  return out;
}

}  // namespace odetree
