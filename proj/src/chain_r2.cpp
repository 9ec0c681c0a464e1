#include "qdchain/chain_r2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace qdchain {

namespace {

bool is_integer(double x) { return std::isfinite(x) && x == std::rint(x); }

// Shared scaffolding for the Eq. (4) coefficient formulas. All q-powers go
// through exp(ln q * exponent); the branch selection below keeps every
// exponent nonnegative so nothing overflows on large windows.
struct CoeffCtx {
  double q = 0.0;
  double lnq = 0.0;
  double cplus = 0.0;   // (alpha1+alpha2)/(1-q)
  double cminus = 0.0;  // (alpha1-alpha2)/(1+q)
  double phi = 0.0;
  double kappa2 = 0.0;  // 2*kappa
  bool degenerate = false;
  long long phi_int = 0;  // valid when degenerate
};

CoeffCtx make_ctx(const ChainParams& p) {
  CoeffCtx c;
  c.q = p.q;
  c.lnq = std::log(p.q);
  c.cplus = (p.alphas[0] + p.alphas[1]) / (1.0 - p.q);
  c.cminus = (p.alphas[0] - p.alphas[1]) / (1.0 + p.q);
  c.phi = p.phi;
  c.kappa2 = 2.0 * p.kappa;
  c.degenerate = is_integer(p.phi);
  if (c.degenerate) c.phi_int = std::llround(p.phi);
  return c;
}

double qpow(const CoeffCtx& c, double e) { return std::exp(c.lnq * e); }

// q^e - 1, accurate near e = 0.
double qpow_m1(const CoeffCtx& c, double e) { return std::expm1(c.lnq * e); }

double parity_sign(long long m) { return (m & 1LL) ? -1.0 : 1.0; }

double c_at_int(const CoeffCtx& c, long long n) {
  return c.cplus + parity_sign(n) * c.cminus;
}

void check_pole(double tau, const char* which) {
  if (std::min(std::abs(tau), std::abs(tau + 1.0)) < 1e-9) {
    throw PoleError(std::string(which) + ": denominator factor vanishes at argument+phi = " +
                    std::to_string(tau) + " and the cancellation rule does not apply");
  }
}

// Generic branch, any real t, phi not an integer (or integer phi with the
// pinned kappa away from the cancelled sites).
double eta_generic(const CoeffCtx& c, double t) {
  const double tau = t + c.phi;
  check_pole(tau, "eta");
  const double pi = std::numbers::pi;
  const double ct = c.cplus + std::cos(pi * t) * c.cminus;
  const double ct1 = c.cplus + std::cos(pi * (t + 1.0)) * c.cminus;
  if (tau >= 0.0) {
    const double num = ct1 - c.kappa2 * qpow(c, tau + 0.5) + ct * qpow(c, 2.0 * tau + 1.0);
    const double den = qpow_m1(c, 2.0 * tau) * qpow_m1(c, 2.0 * tau + 2.0);
    return 0.5 * num / den;
  }
  const double num = ct1 * qpow(c, -4.0 * tau - 2.0) - c.kappa2 * qpow(c, -3.0 * tau - 1.5) +
                     ct * qpow(c, -2.0 * tau - 1.0);
  const double den = qpow_m1(c, -2.0 * tau) * qpow_m1(c, -2.0 * tau - 2.0);
  return 0.5 * num / den;
}

// Degenerate branch at integer sites: the pinned kappa makes the numerator
// divisible by the vanishing factor, leaving the parity-dependent closed
// forms below (kappa drops out entirely).
double eta_degenerate_int(const CoeffCtx& c, long long t) {
  const long long tau = t + c.phi_int;
  const double ct = c_at_int(c, t);
  const double ct1 = c_at_int(c, t + 1);
  const bool even = (tau & 1LL) == 0;
  double num, den;
  if (even) {
    if (tau >= 0) {
      num = ct1 - ct * qpow(c, double(tau) + 1.0);
      den = (1.0 + qpow(c, double(tau))) * (-qpow_m1(c, 2.0 * double(tau) + 2.0));
    } else {
      num = ct1 * qpow(c, -3.0 * double(tau) - 2.0) - ct * qpow(c, -2.0 * double(tau) - 1.0);
      den = (qpow(c, -double(tau)) + 1.0) * qpow_m1(c, -2.0 * double(tau) - 2.0);
    }
  } else {
    if (tau >= 1) {
      num = ct1 - ct * qpow(c, double(tau));
      den = (-qpow_m1(c, 2.0 * double(tau))) * (1.0 + qpow(c, double(tau) + 1.0));
    } else {
      num = ct1 * qpow(c, -3.0 * double(tau) - 1.0) - ct * qpow(c, -2.0 * double(tau) - 1.0);
      den = qpow_m1(c, -2.0 * double(tau)) * (qpow(c, -double(tau) - 1.0) + 1.0);
    }
  }
  return 0.5 * num / den;
}

// Degenerate branch at real (non-integer) sites, used by the continuum
// module. The symmetric part of c_n cancels exactly; the antisymmetric part
// keeps a removable singularity at tau in {0,-1}, guarded here.
double eta_degenerate_real(const CoeffCtx& c, double t) {
  const double tau = t + c.phi;
  const double pi = std::numbers::pi;
  const double gamma = std::cos(pi * tau);
  const double sphi = parity_sign(c.phi_int);
  if (c.cminus != 0.0) check_pole(tau, "eta");
  if (tau >= -0.5) {
    const double u = qpow(c, tau);
    const double qu = qpow(c, tau + 1.0);
    const double smooth = c.cplus / ((1.0 + u) * (1.0 + qu));
    double anti = 0.0;
    if (c.cminus != 0.0) {
      const double num = sphi * (u * (1.0 - c.q) - gamma * (1.0 - c.q * u * u));
      const double den = qpow_m1(c, 2.0 * tau) * qpow_m1(c, 2.0 * tau + 2.0);
      anti = c.cminus * num / den;
    }
    return 0.5 * (smooth + anti);
  }
  const double w = qpow(c, -tau);
  const double smooth = c.cplus * w * w / ((w + 1.0) * (w + c.q));
  double anti = 0.0;
  if (c.cminus != 0.0) {
    const double num = sphi * (w * (1.0 - c.q) - gamma * (w * w - c.q)) * w * w;
    const double den = qpow_m1(c, -2.0 * tau) * c.q * c.q * qpow_m1(c, -2.0 * tau - 2.0);
    anti = c.cminus * num / den;
  }
  return 0.5 * (smooth + anti);
}

double eta_impl(const CoeffCtx& c, double t) {
  if (c.degenerate) {
    if (is_integer(t)) return eta_degenerate_int(c, std::llround(t));
    return eta_degenerate_real(c, t);
  }
  return eta_generic(c, t);
}

CoeffCtx reflect_phi(CoeffCtx c) {
  c.phi = -c.phi;
  c.phi_int = -c.phi_int;
  return c;
}

// xi_t(phi) == eta_{-t-1}(-phi): same numerator and denominator after the
// substitution, so a single engine serves both formulas.
double xi_impl(const CoeffCtx& c, double t) { return eta_impl(reflect_phi(c), -t - 1.0); }

}  // namespace

double ChainParams::alpha(int j) const {
  const int r_ = static_cast<int>(alphas.size());
  int idx = (j - 1) % r_;
  if (idx < 0) idx += r_;
  return alphas[static_cast<size_t>(idx)];
}

void validate_params(const ChainParams& p) {
  if (p.r < 2 || p.r % 2 != 0) {
    throw ValueError("r must be a positive even integer, got " + std::to_string(p.r));
  }
  if (p.s != p.r / 2) {
    throw ValueError("s must equal r/2, got s = " + std::to_string(p.s) +
                     " with r = " + std::to_string(p.r));
  }
  if (!(p.q > 0.0 && p.q < 1.0)) {
    throw ValueError("q must lie in (0,1), got " + std::to_string(p.q));
  }
  if (static_cast<int>(p.alphas.size()) != p.r) {
    throw ValueError("alpha list must have r = " + std::to_string(p.r) +
                     " entries, got " + std::to_string(p.alphas.size()));
  }
  for (double a : p.alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw ValueError("all alpha_j must be positive, got " + std::to_string(a));
    }
  }
  if (p.epsilon != 1 && p.epsilon != -1) {
    throw ValueError("epsilon must be +1 or -1, got " + std::to_string(p.epsilon));
  }
  if (!std::isfinite(p.phi) || !std::isfinite(p.kappa)) {
    throw ValueError("phi and kappa must be finite");
  }
}

double c_coeff(double n, double alpha1, double alpha2, double q) {
  const double cplus = (alpha1 + alpha2) / (1.0 - q);
  const double cminus = (alpha1 - alpha2) / (1.0 + q);
  const double parity = is_integer(n) ? parity_sign(std::llround(n))
                                      : std::cos(std::numbers::pi * n);
  return cplus + parity * cminus;
}

KappaConstraint kappa_constraint(const ChainParams& p) {
  validate_params(p);
  if (p.r != 2) throw ValueError("kappa constraint is defined for r = 2 chains");
  const CoeffCtx c = make_ctx(p);
  KappaConstraint kc;
  if (c.degenerate) {
    kc.kind = KappaConstraint::Kind::PinnedPoint;
    const double cphi = c_at_int(c, c.phi_int);
    const double cphi1 = c_at_int(c, c.phi_int - 1);
    kc.pinned = cphi * std::sqrt(p.q) + cphi1 / std::sqrt(p.q);
    kc.lo = kc.hi = kc.pinned;
    return kc;
  }
  const double fl = std::floor(p.phi);
  const double theta = p.phi - fl - 0.5;
  const double cphi = c_at_int(c, std::llround(fl));
  const double cphi1 = c_at_int(c, std::llround(fl) - 1);
  kc.kind = KappaConstraint::Kind::OpenInterval;
  kc.lo = cphi * qpow(c, -theta) + cphi1 * qpow(c, theta);
  const double up1 = cphi * qpow(c, theta + 1.0) + cphi1 * qpow(c, -theta - 1.0);
  const double up2 = cphi * qpow(c, theta - 1.0) + cphi1 * qpow(c, -theta + 1.0);
  kc.hi = std::min(up1, up2);
  return kc;
}

double default_kappa(const ChainParams& p) {
  const KappaConstraint kc = kappa_constraint(p);
  if (kc.kind == KappaConstraint::Kind::PinnedPoint) return kc.pinned / 2.0;
  return (kc.lo + kc.hi) / 4.0;  // midpoint of the kappa (not 2*kappa) interval
}

bool degenerate_branch(const ChainParams& p) { return is_integer(p.phi); }

double xi(double t, const ChainParams& p) {
  validate_params(p);
  return xi_impl(make_ctx(p), t);
}

double eta(double t, const ChainParams& p) {
  validate_params(p);
  return eta_impl(make_ctx(p), t);
}

namespace {

struct Radicand {
  char family;  // 'x' for xi, 'e' for eta
  double arg;
  double value;
};

// xi/eta arguments feeding A_i at window site n: base 1 uses xi(2m), eta(2m+1)
// and base 2 uses xi(2m-1), eta(2m), with m = n - shift.
void coefficient_args(int chain_index, int n, double* xi_arg, double* eta_arg) {
  const int base = ((chain_index % 2) + 2) % 2 == 1 ? 1 : 2;
  const int sh = (chain_index - base) / 2;
  const int m = n - sh;
  if (base == 1) {
    *xi_arg = 2.0 * m;
    *eta_arg = 2.0 * m + 1.0;
  } else {
    *xi_arg = 2.0 * m - 1.0;
    *eta_arg = 2.0 * m;
  }
}

}  // namespace

FirstOrderOp chain_operator(const ChainParams& p, int chain_index,
                            const LatticeWindow& window) {
  validate_params(p);
  if (p.r != 2) throw ValueError("closed-form chain operators exist for r = 2 only");
  const CoeffCtx c = make_ctx(p);
  const size_t sz = static_cast<size_t>(window.size());
  std::vector<double> a(sz), b(sz);
  for (int n = window.n_min; n <= window.n_max; ++n) {
    double xi_arg, eta_arg;
    coefficient_args(chain_index, n, &xi_arg, &eta_arg);
    const double rx = xi_impl(c, xi_arg);
    if (!(rx > 0.0)) {
      throw NegativeCoefficient("xi(" + std::to_string(xi_arg) + ") = " + std::to_string(rx) +
                                " at site " + std::to_string(n) +
                                ": kappa outside the admissible window or pole hit");
    }
    const double re = eta_impl(c, eta_arg);
    if (!(re > 0.0)) {
      throw NegativeCoefficient("eta(" + std::to_string(eta_arg) + ") = " + std::to_string(re) +
                                " at site " + std::to_string(n) +
                                ": kappa outside the admissible window or pole hit");
    }
    a[static_cast<size_t>(window.index(n))] = p.epsilon * std::sqrt(rx);
    b[static_cast<size_t>(window.index(n))] = std::sqrt(re);
  }
  return make_first_order(std::move(a), std::move(b), window);
}

BuiltPair build_pair(const ChainParams& p, const LatticeWindow& window) {
  return BuiltPair{chain_operator(p, 1, window), chain_operator(p, 2, window),
                   chain_operator(p, 0, window)};
}

ValidationReport validate(const ChainParams& p, const LatticeWindow& window) {
  validate_params(p);
  if (p.r != 2) throw ValueError("validate applies to r = 2 chains");
  ValidationReport rep;
  rep.kappa = kappa_constraint(p);
  rep.kappa_value = p.kappa;
  const double k2 = 2.0 * p.kappa;
  if (rep.kappa.kind == KappaConstraint::Kind::OpenInterval) {
    rep.kappa_ok = rep.kappa.lo < k2 && k2 < rep.kappa.hi;
  } else {
    rep.kappa_ok = std::abs(k2 - rep.kappa.pinned) <= 1e-9 * (1.0 + std::abs(rep.kappa.pinned));
  }

  // Positivity scan over every xi/eta argument the three operators touch.
  const CoeffCtx c = make_ctx(p);
  rep.min_radicand = std::numeric_limits<double>::infinity();
  for (int idx : {0, 1, 2}) {
    for (int n = window.n_min; n <= window.n_max; ++n) {
      double xa, ea;
      coefficient_args(idx, n, &xa, &ea);
      const double rx = xi_impl(c, xa);
      if (rx < rep.min_radicand) {
        rep.min_radicand = rx;
        rep.min_radicand_arg = xa;
        rep.min_radicand_family = 'x';
      }
      const double re = eta_impl(c, ea);
      if (re < rep.min_radicand) {
        rep.min_radicand = re;
        rep.min_radicand_arg = ea;
        rep.min_radicand_family = 'e';
      }
    }
  }

  const BuiltPair ops = build_pair(p, window);  // throws NegativeCoefficient when invalid
  rep.eq2_residual_j1 = chain_residual(ops.A1, ops.A0, p.alpha(1), p.q);
  rep.eq2_residual_j2 = chain_residual(ops.A2, ops.A1, p.alpha(2), p.q);

  // Eq. (3): A_{j+2} must equal A_j with indices shifted by s = 1. Both sides
  // are the same formula evaluated at the shifted argument, so the deviation
  // is exactly zero; we still measure it.
  const FirstOrderOp A3 = chain_operator(p, 3, window);
  const FirstOrderOp A4 = chain_operator(p, 4, window);
  double eq3 = 0.0;
  for (int n = window.n_min + 1; n <= window.n_max; ++n) {
    eq3 = std::max(eq3, std::abs(A3.a_at(n) - ops.A1.a_at(n - 1)));
    eq3 = std::max(eq3, std::abs(A3.b_at(n) - ops.A1.b_at(n - 1)));
    eq3 = std::max(eq3, std::abs(A4.a_at(n) - ops.A2.a_at(n - 1)));
    eq3 = std::max(eq3, std::abs(A4.b_at(n) - ops.A2.b_at(n - 1)));
  }
  rep.eq3_residual = eq3;
  return rep;
}

}  // namespace qdchain
