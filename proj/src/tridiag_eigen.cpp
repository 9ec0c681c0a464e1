#include "qdchain/tridiag_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "qdchain/darboux_spectrum.hpp"

namespace qdchain {

namespace {

// Entries this small split the matrix into independent blocks.
constexpr double kBlockSplit = 1e-300;

double pivot_floor(const TridiagonalOp& L) {
  double maxe2 = 1.0;
  for (double u : L.off) maxe2 = std::max(maxe2, u * u);
  return std::numeric_limits<double>::min() * maxe2;
}

// Gershgorin interval containing the whole spectrum.
std::pair<double, double> spectrum_bracket(const TridiagonalOp& L) {
  const int n = L.window.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i + 1 < n) radius += std::abs(L.off[static_cast<size_t>(i)]);
    if (i > 0) radius += std::abs(L.off[static_cast<size_t>(i) - 1]);
    lo = std::min(lo, L.diag[static_cast<size_t>(i)] - radius);
    hi = std::max(hi, L.diag[static_cast<size_t>(i)] + radius);
  }
  return {lo, hi};
}

}  // namespace

int sturm_count(const TridiagonalOp& L, double x) {
  const int n = L.window.size();
  const double pivmin = pivot_floor(L);
  int count = 0;
  double p = 1.0;
  for (int i = 0; i < n; ++i) {
    const bool block_start =
        (i == 0) || (std::abs(L.off[static_cast<size_t>(i) - 1]) < kBlockSplit);
    double v = 0.0;
    if (!block_start) {
      const double e = L.off[static_cast<size_t>(i) - 1];
      v = e * e / p;
    }
    p = (L.diag[static_cast<size_t>(i)] - x) - v;
    // zero pivots count as "not below": the count stays strict in x
    if (std::abs(p) < pivmin) p = pivmin;
    if (p < 0.0) ++count;
  }
  return count;
}

std::vector<double> smallest_eigenvalues(const EigenRequest& req) {
  const int n = req.op.window.size();
  if (req.count < 1 || req.count > n) {
    throw ValueError("requested " + std::to_string(req.count) +
                     " eigenvalues of a matrix of size " + std::to_string(n));
  }
  if (!(req.tol > 0.0)) throw ValueError("tolerance must be positive");
  auto [glo, ghi] = spectrum_bracket(req.op);
  // widen so the strict count is exact at both ends
  const double pad = 1e-3 * (1.0 + std::abs(glo) + std::abs(ghi));
  glo -= pad;
  ghi += pad;

  std::vector<double> out(static_cast<size_t>(req.count));
  double lo = glo;
  for (int m = 1; m <= req.count; ++m) {
    // smallest x with sturm_count(x) >= m lies in (lo, hi]
    double a = lo, b = ghi;
    for (int iter = 0; iter < 200 && (b - a) > req.tol; ++iter) {
      const double mid = 0.5 * (a + b);
      if (sturm_count(req.op, mid) >= m) {
        b = mid;
      } else {
        a = mid;
      }
    }
    out[static_cast<size_t>(m) - 1] = 0.5 * (a + b);
    lo = a;  // later eigenvalues cannot lie below this
  }
  return out;
}

namespace {

// Solves (L - lambda I) x = rhs by LU with partial pivoting on the three
// bands; near-singular pivots are floored instead of failing, which is
// exactly what inverse iteration wants.
void shifted_tridiag_solve(const TridiagonalOp& L, double lambda,
                           std::vector<double>& x) {
  const int n = L.window.size();
  std::vector<double> dl(static_cast<size_t>(n), 0.0);  // main diagonal
  std::vector<double> du1(static_cast<size_t>(n), 0.0);
  std::vector<double> du2(static_cast<size_t>(n), 0.0);
  std::vector<double> sub(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    dl[static_cast<size_t>(i)] = L.diag[static_cast<size_t>(i)] - lambda;
    if (i + 1 < n) du1[static_cast<size_t>(i)] = L.off[static_cast<size_t>(i)];
    if (i > 0) sub[static_cast<size_t>(i)] = L.off[static_cast<size_t>(i) - 1];
  }
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();

  for (int i = 0; i + 1 < n; ++i) {
    const size_t k = static_cast<size_t>(i);
    if (std::abs(sub[k + 1]) > std::abs(dl[k])) {
      // swap rows i and i+1
      std::swap(dl[k], sub[k + 1]);
      std::swap(du1[k], dl[k + 1]);
      std::swap(du2[k], du1[k + 1]);
      std::swap(x[k], x[k + 1]);
    }
    if (std::abs(dl[k]) < tiny) dl[k] = (dl[k] < 0 ? -tiny : tiny);
    const double m = sub[k + 1] / dl[k];
    dl[k + 1] -= m * du1[k];
    du1[k + 1] -= m * du2[k];
    x[k + 1] -= m * x[k];
  }
  const size_t last = static_cast<size_t>(n) - 1;
  if (std::abs(dl[last]) < tiny) dl[last] = (dl[last] < 0 ? -tiny : tiny);

  for (int i = n - 1; i >= 0; --i) {
    const size_t k = static_cast<size_t>(i);
    double v = x[k];
    if (i + 1 < n) v -= du1[k] * x[k + 1];
    if (i + 2 < n) v -= du2[k] * x[k + 2];
    x[k] = v / dl[k];
  }
}

double residual_norm(const TridiagonalOp& L, const LatticeFunction& v, double lambda) {
  LatticeFunction Lv = apply(L, v);
  double s = 0.0;
  for (size_t i = 0; i < Lv.values.size(); ++i) {
    const double r = Lv.values[i] - lambda * v.values[i];
    s += r * r;
  }
  return std::sqrt(s);
}

LatticeFunction inverse_iterate(const TridiagonalOp& L, double lambda, double tol,
                                std::mt19937_64& rng,
                                const std::vector<const LatticeFunction*>& orthogonal_to) {
  const int n = L.window.size();
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  LatticeFunction v = zero_function(L.window);
  for (double& x : v.values) x = dist(rng);
  const double bound = std::max(norm_bound(L), std::numeric_limits<double>::min());
  const double target = 10.0 * tol * bound;

  for (int iter = 0; iter < 8; ++iter) {
    shifted_tridiag_solve(L, lambda, v.values);
    for (const LatticeFunction* w : orthogonal_to) {
      const double proj = dot(v, *w);
      for (size_t i = 0; i < v.values.size(); ++i) v.values[i] -= proj * w->values[i];
    }
    double r = 0.0;
    for (double x : v.values) r += x * x;
    r = std::sqrt(r);
    if (r == 0.0 || !std::isfinite(r)) {
      for (double& x : v.values) x = dist(rng);  // restart from fresh noise
      continue;
    }
    for (double& x : v.values) x /= r;
    if (iter >= 1 && residual_norm(L, v, lambda) <= target) return v;
  }
  if (residual_norm(L, v, lambda) <= target) return v;
  throw NotConverged("inverse iteration at lambda = " + std::to_string(lambda) +
                     " (size " + std::to_string(n) + ")");
}

}  // namespace

LatticeFunction eigenvector(const TridiagonalOp& L, double lambda, double tol,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return inverse_iterate(L, lambda, tol, rng, {});
}

std::vector<LatticeFunction> eigenvectors(const TridiagonalOp& L,
                                          const std::vector<double>& lambdas,
                                          double tol, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<LatticeFunction> out;
  out.reserve(lambdas.size());
  for (size_t i = 0; i < lambdas.size(); ++i) {
    // collect earlier members of the same cluster
    std::vector<const LatticeFunction*> cluster;
    for (size_t k = 0; k < i; ++k) {
      if (std::abs(lambdas[k] - lambdas[i]) < 10.0 * tol) cluster.push_back(&out[k]);
    }
    out.push_back(inverse_iterate(L, lambdas[i], tol, rng, cluster));
  }
  return out;
}

SpectrumComparison compare_spectra(const SpectrumTable& predicted,
                                   const std::vector<double>& oracle) {
  if (predicted.levels.size() != oracle.size()) {
    throw LengthMismatch("predicted " + std::to_string(predicted.levels.size()) +
                         " levels vs oracle " + std::to_string(oracle.size()));
  }
  SpectrumComparison cmp;
  cmp.per_level.resize(oracle.size());
  for (size_t i = 0; i < oracle.size(); ++i) {
    cmp.per_level[i] = predicted.levels[i] - oracle[i];
    cmp.max_abs_diff = std::max(cmp.max_abs_diff, std::abs(cmp.per_level[i]));
  }
  return cmp;
}

}  // namespace qdchain
