#pragma once

#include <functional>
#include <vector>

#include "qdchain/chain_r2.hpp"

namespace qdchain {

/// Configuration of an h -> 0 comparison run. Fixed to the phi = 0, eps = -1
/// member of the r = 2 family with q = exp(-(alpha1/4) h^2).
struct LimitConfig {
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double h = 0.1;
  std::vector<double> grid;  // real x points
  int j = 1;                 // which chain operator, 1 or 2
};

/// q = exp(-(alpha1/4) h^2); in (0, 1] for h >= 0.
double q_of_h(double alpha1, double h);

using RealFunction = std::function<double(double)>;

/// Evaluates ((L_j + alpha_j/2 [symmetric case only]) f)(x) with real lattice
/// argument n = x/h in the coefficient formulas and shifts f(x +- h).
/// Throws PoleProximity when x/h sits within 1e-6 of a removable pole of the
/// degenerate-branch coefficients (asymmetric case only).
double discrete_apply(const LimitConfig& cfg, const RealFunction& f, double x);

/// The h -> 0 target: symmetric -f'' + (alpha1^2/4) x^2 f; asymmetric
/// -f'' + ((a_j+a_{j+1})^2/16) x^2 f - (a_j/2) f
///      - ((a_j-a_{j+1})(a_j+3a_{j+1})/(4 (a_j+a_{j+1})^2 x^2)) f.
/// Throws SingularAtZero in the asymmetric case at x = 0.
double continuum_target(double alpha1, double alpha2, int j, double x,
                        double f_x, double fpp_x);

/// sup over cfg.grid of |discrete_apply - continuum_target|.
double limit_error(const LimitConfig& cfg, const RealFunction& f, const RealFunction& fpp);

}  // namespace qdchain
