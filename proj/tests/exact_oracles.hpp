// Test-only reference implementations of the r = 2 coefficient formulas,
// independent of the double-precision library code:
//  - exact rationals where every q-power has an integer exponent,
//  - 50-digit floats for arbitrary real parameters.
#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline Rational rpow(const Rational& q, long long e) {
  if (e < 0) return Rational(1) / rpow(q, -e);
  Rational r = 1, base = q;
  long long k = e;
  while (k) {
    if (k & 1) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

inline Rational c_parity(const Rational& cplus, const Rational& cminus, long long n) {
  return (n & 1LL) ? cplus - cminus : cplus + cminus;
}

// Generic-branch eta at integer t. phi = phi2/2 with phi2 odd, so that every
// exponent is an integer; kappa2 = 2*kappa.
inline Rational eta_generic(const Rational& q, const Rational& kappa2, long long phi2,
                            const Rational& alpha1, const Rational& alpha2, long long t) {
  if ((phi2 & 1LL) == 0) throw std::invalid_argument("phi2 must be odd here");
  const Rational cplus = (alpha1 + alpha2) / (1 - q);
  const Rational cminus = (alpha1 - alpha2) / (1 + q);
  const Rational ct = c_parity(cplus, cminus, t);
  const Rational ct1 = c_parity(cplus, cminus, t + 1);
  // tau + 1/2 = t + (phi2+1)/2
  const long long e1 = t + (phi2 + 1) / 2;
  const long long e2 = 2 * t + phi2 + 1;
  const Rational num = ct1 - kappa2 * rpow(q, e1) + ct * rpow(q, e2);
  const Rational den = (1 - rpow(q, 2 * t + phi2)) * (1 - rpow(q, 2 * t + phi2 + 2));
  return num / den / 2;
}

inline Rational xi_generic(const Rational& q, const Rational& kappa2, long long phi2,
                           const Rational& alpha1, const Rational& alpha2, long long t) {
  return eta_generic(q, kappa2, -phi2, alpha1, alpha2, -t - 1);
}

// Degenerate branch (integer phi, pinned kappa): the cancelled parity forms.
inline Rational eta_degenerate(const Rational& q, long long phi, const Rational& alpha1,
                               const Rational& alpha2, long long t) {
  const Rational cplus = (alpha1 + alpha2) / (1 - q);
  const Rational cminus = (alpha1 - alpha2) / (1 + q);
  const Rational ct = c_parity(cplus, cminus, t);
  const Rational ct1 = c_parity(cplus, cminus, t + 1);
  const long long tau = t + phi;
  if ((tau & 1LL) == 0) {
    const Rational num = ct1 - ct * rpow(q, tau + 1);
    const Rational den = (1 + rpow(q, tau)) * (1 - rpow(q, 2 * tau + 2));
    return num / den / 2;
  }
  const Rational num = ct1 - ct * rpow(q, tau);
  const Rational den = (1 - rpow(q, 2 * tau)) * (1 + rpow(q, tau + 1));
  return num / den / 2;
}

inline Rational xi_degenerate(const Rational& q, long long phi, const Rational& alpha1,
                              const Rational& alpha2, long long t) {
  return eta_degenerate(q, -phi, alpha1, alpha2, -t - 1);
}

// 50-digit reference for arbitrary real parameters, integer t.
inline BigFloat eta_bigfloat(const BigFloat& q, const BigFloat& kappa2, const BigFloat& phi,
                             const BigFloat& alpha1, const BigFloat& alpha2, long long t) {
  using boost::multiprecision::pow;
  const BigFloat cplus = (alpha1 + alpha2) / (1 - q);
  const BigFloat cminus = (alpha1 - alpha2) / (1 + q);
  const BigFloat ct = (t & 1LL) ? cplus - cminus : cplus + cminus;
  const BigFloat ct1 = ((t + 1) & 1LL) ? cplus - cminus : cplus + cminus;
  const BigFloat tau = BigFloat(t) + phi;
  const BigFloat num =
      ct1 - kappa2 * pow(q, tau + BigFloat(0.5)) + ct * pow(q, 2 * tau + 1);
  const BigFloat den = (1 - pow(q, 2 * tau)) * (1 - pow(q, 2 * tau + 2));
  return num / den / 2;
}

inline BigFloat xi_bigfloat(const BigFloat& q, const BigFloat& kappa2, const BigFloat& phi,
                            const BigFloat& alpha1, const BigFloat& alpha2, long long t) {
  return eta_bigfloat(q, kappa2, -phi, alpha1, alpha2, -t - 1);
}

}  // namespace oracle
