#pragma once

#include <vector>

#include "qdchain/operator_core.hpp"

namespace qdchain {

/// Parameters of a periodic q-chain instance with period r and shift s = r/2.
/// phi, kappa and epsilon parametrize the explicit r = 2 solution family;
/// for r > 2 they only steer the solver seed.
struct ChainParams {
  int r = 2;
  int s = 1;
  double q = 0.5;
  std::vector<double> alphas;
  double phi = 0.0;
  double kappa = 0.0;
  int epsilon = -1;

  /// alpha_j with 1-based cyclic index (alpha_{j+r} = alpha_j).
  double alpha(int j) const;
};

/// Checks r even, s == r/2, q in (0,1), alphas positive, epsilon = +/-1.
/// Throws ValueError on violation.
void validate_params(const ChainParams& p);

/// Admissibility window for 2*kappa. For phi not an integer the bounds form
/// an open interval; for integer phi the value is pinned.
struct KappaConstraint {
  enum class Kind { OpenInterval, PinnedPoint };
  Kind kind = Kind::OpenInterval;
  double lo = 0.0;      // lower bound for 2*kappa
  double hi = 0.0;      // upper bound for 2*kappa
  double pinned = 0.0;  // the pinned 2*kappa value when phi is an integer
};

/// c_n = (alpha1+alpha2)/(1-q) + (-1)^n (alpha1-alpha2)/(1+q). For real n the
/// parity factor is cos(pi n).
double c_coeff(double n, double alpha1, double alpha2, double q);

/// The Proposition's restriction on kappa (r = 2 only).
KappaConstraint kappa_constraint(const ChainParams& p);

/// Interval midpoint when phi is not an integer, the pinned value otherwise.
double default_kappa(const ChainParams& p);

/// True when phi is (numerically exactly) an integer, i.e. the degenerate
/// branch with pinned kappa and cancelled denominator factors applies.
bool degenerate_branch(const ChainParams& p);

/// Coefficient formulas of the r = 2 solution, valid for real argument t
/// (integer lattice sites and the continuum module's real sites alike).
/// Throws PoleError when a denominator factor vanishes and the cancellation
/// rule does not apply.
double xi(double t, const ChainParams& p);
double eta(double t, const ChainParams& p);

/// The chain operator A_i on a window, for any integer chain index i, using
/// the periodicity convention A_{i+2} = T^{-1} A_i T (coefficient shift).
/// Throws NegativeCoefficient when a radicand is negative, naming the site
/// and whether xi or eta failed.
FirstOrderOp chain_operator(const ChainParams& p, int chain_index,
                            const LatticeWindow& window);

struct BuiltPair {
  FirstOrderOp A1;
  FirstOrderOp A2;
  FirstOrderOp A0;  // a0(n) = a2(n+1), b0(n) = b2(n+1)
};

/// Builds A1, A2 and the wrapped A0 from the Proposition formulas.
BuiltPair build_pair(const ChainParams& p, const LatticeWindow& window);

struct ValidationReport {
  KappaConstraint kappa;
  double kappa_value = 0.0;
  bool kappa_ok = false;
  double min_radicand = 0.0;
  double min_radicand_arg = 0;   // the xi/eta argument where the minimum sits
  char min_radicand_family = 0;  // 'x' for xi, 'e' for eta
  double eq2_residual_j1 = 0.0;  // L1 = A1 A1^+ - alpha1 = q A0^+ A0
  double eq2_residual_j2 = 0.0;  // L2 = A2 A2^+ - alpha2 = q A1^+ A1
  double eq3_residual = 0.0;     // coefficients of A_{j+2} vs shifted A_j
};

/// Bundles the kappa check, the positivity scan and the Eq. (2)/(3)
/// residuals on the window. Propagates construction errors.
ValidationReport validate(const ChainParams& p, const LatticeWindow& window);

}  // namespace qdchain
