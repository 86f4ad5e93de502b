#pragma once

#include <string>

#include "odetree/rng.hpp"
#include "odetree/thresholds.hpp"

namespace odetree {

// Lifetime law of tree branches: a probability density rho on [0,inf) with
// rho(t) > 0 everywhere, known tail and exact infimum over [0,T]. Two
// families are supported:
//   exponential      rho(t) = lambda * exp(-lambda*t)
//   plateau + tail   rho(t) = h on [0,T], lambda2 * exp(-lambda1*t) beyond
// Densities are immutable and safe to share across threads.
class LifetimeDensity {
 public:
  enum class Kind { Exponential, Piecewise };

  static LifetimeDensity exponential(double lambda);
  static LifetimeDensity piecewise(double plateau_height, double lambda1,
                                   double lambda2, double plateau_end);

  Kind kind() const { return kind_; }

  double pdf(double t) const;
  double tail(double t) const;  // P(lifetime > t)

  // inf of rho over [0,T]; exact for both families. T must not exceed
  // horizon().
  double inf_on_horizon(double T) const;

  // Largest horizon the density certifies: +inf for the exponential family,
  // the plateau end for the piecewise family.
  double horizon() const;

  // Inverse-CDF map: u in (0,1) -> lifetime draw.
  double quantile(double u) const;
  double sample(RngStream& rng) const { return quantile(rng.uniform()); }

  // parameters
  double rate() const { return lambda_; }  // exponential only
  double plateau_height() const { return plateau_; }
  double plateau_end() const { return plateau_end_; }
  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }

 private:
  LifetimeDensity() = default;
  Kind kind_ = Kind::Exponential;
  double lambda_ = 1.0;       // exponential rate
  double plateau_ = 0.0;      // piecewise plateau height
  double plateau_end_ = 0.0;  // piecewise plateau end
  double lambda1_ = 0.0;
  double lambda2_ = 0.0;
};

LifetimeDensity build_exponential(double lambda);

struct PiecewiseBuild {
  LifetimeDensity density;
  double c_bound;             // C_i(q;T) used for the plateau height
  double feasibility_margin;  // (1-e^{-lambda T})(C_i - eps) - T, >= 0
};

// Constructs the plateau density with height 1/(C_i(q;T) - eps) on [0,T]
// and an exponential tail chosen so the total mass is exactly one and the
// tail dominates exp(-lambda*r). We fix lambda1 = lambda and solve lambda2
// from the unit-mass identity; dominance then reduces to the feasibility
// inequality T <= (1 - e^{-lambda T}) (C_i - eps).
PiecewiseBuild build_piecewise(double q, PlateauBound variant, double T,
                               double lambda, double epsilon);

struct DominanceCheck {
  bool pass = false;
  double first_violation_r = -1.0;
  double worst_margin = 0.0;  // min over the grid of tail(r) - exp(-lambda r)
  int grid_points = 0;
};

// Grid check of tail(r) >= exp(-lambda*r), the stochastic-dominance
// requirement on the lifetime law.
DominanceCheck verify_dominance(const LifetimeDensity& rho, double lambda,
                                int grid_points);

}  // namespace odetree
