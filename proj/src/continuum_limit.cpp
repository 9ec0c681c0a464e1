#include "qdchain/continuum_limit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qdchain {

double q_of_h(double alpha1, double h) {
  if (!(alpha1 > 0.0)) throw ValueError("alpha1 must be positive");
  if (h < 0.0) throw ValueError("h must be nonnegative");
  return std::exp(-(alpha1 / 4.0) * h * h);
}

namespace {

ChainParams limit_params(const LimitConfig& cfg) {
  ChainParams p;
  p.r = 2;
  p.s = 1;
  p.q = q_of_h(cfg.alpha1, cfg.h);
  p.alphas = {cfg.alpha1, cfg.alpha2};
  p.phi = 0.0;  // degenerate branch, kappa pinned
  p.epsilon = -1;
  p.kappa = default_kappa(p);
  return p;
}

// Removable poles of the degenerate-branch coefficients, in units of the
// real lattice argument n = x/h (phi = 0). Relevant only when alpha1 != alpha2.
bool near_pole(double n) {
  const double poles[] = {0.0, 0.5, -0.5, 1.0, -1.0, -1.5};
  for (double pp : poles) {
    if (std::abs(n - pp) < 1e-6) return true;
  }
  return false;
}

double radicand_checked(double v, const char* family, double arg) {
  if (!(v > 0.0)) {
    throw NegativeCoefficient(std::string(family) + "(" + std::to_string(arg) +
                              ") = " + std::to_string(v) + " in the continuum coefficients");
  }
  return v;
}

}  // namespace

double discrete_apply(const LimitConfig& cfg, const RealFunction& f, double x) {
  if (!(cfg.h > 0.0)) throw ValueError("h must be positive");
  if (cfg.j != 1 && cfg.j != 2) throw ValueError("j must be 1 or 2");
  const ChainParams p = limit_params(cfg);
  const double n = x / cfg.h;
  const bool symmetric = cfg.alpha1 == cfg.alpha2;
  if (!symmetric && near_pole(n)) {
    throw PoleProximity("x/h = " + std::to_string(n) +
                        " is within 1e-6 of a degenerate-branch pole");
  }

  // a_j, b_j at real argument n, n-1, n+1
  auto a_j = [&](double t) {
    const double arg = (cfg.j == 1) ? 2.0 * t : 2.0 * t - 1.0;
    return p.epsilon * std::sqrt(radicand_checked(xi(arg, p), "xi", arg));
  };
  auto b_j = [&](double t) {
    const double arg = (cfg.j == 1) ? 2.0 * t + 1.0 : 2.0 * t;
    return std::sqrt(radicand_checked(eta(arg, p), "eta", arg));
  };

  const double alpha_j = (cfg.j == 1) ? cfg.alpha1 : cfg.alpha2;
  const double shift = symmetric ? alpha_j / 2.0 : 0.0;
  const double an = a_j(n);
  const double bn = b_j(n);
  const double diag = an * an + bn * bn - alpha_j + shift;
  return diag * f(x) + an * b_j(n - 1.0) * f(x - cfg.h) + bn * a_j(n + 1.0) * f(x + cfg.h);
}

double continuum_target(double alpha1, double alpha2, int j, double x,
                        double f_x, double fpp_x) {
  if (j != 1 && j != 2) throw ValueError("j must be 1 or 2");
  if (alpha1 == alpha2) {
    return -fpp_x + (alpha1 * alpha1 / 4.0) * x * x * f_x;
  }
  if (x == 0.0) throw SingularAtZero("asymmetric continuum target is singular at x = 0");
  const double aj = (j == 1) ? alpha1 : alpha2;
  const double aj1 = (j == 1) ? alpha2 : alpha1;  // alpha_{j+2} = alpha_j
  const double sum = aj + aj1;
  const double potential = (sum * sum / 16.0) * x * x;
  const double inverse_sq = (aj - aj1) * (aj + 3.0 * aj1) / (4.0 * sum * sum * x * x);
  return -fpp_x + potential * f_x - (aj / 2.0) * f_x - inverse_sq * f_x;
}

double limit_error(const LimitConfig& cfg, const RealFunction& f, const RealFunction& fpp) {
  double sup = 0.0;
  for (double x : cfg.grid) {
    const double lhs = discrete_apply(cfg, f, x);
    const double rhs = continuum_target(cfg.alpha1, cfg.alpha2, cfg.j, x, f(x), fpp(x));
    sup = std::max(sup, std::abs(lhs - rhs));
  }
  return sup;
}

}  // namespace qdchain
