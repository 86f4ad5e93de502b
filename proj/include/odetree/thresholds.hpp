#pragma once

namespace odetree {

// Integrability constants as functions of the moment order q >= 1 and the
// survival value u = exp(-lambda*T) in (0,1):
//   c1 = (1 - u^2)^(-1/(2q))
//   c2 = (sqrt(4 + u^2) - u)^(1/q) / (2^(1/q) (1 - u)^(1/(2q)))
double c1_threshold(double q, double u);
double c2_threshold(double q, double u);

enum class PlateauBound { C1, C2 };

}  // namespace odetree
