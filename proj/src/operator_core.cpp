#include "qdchain/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qdchain {

FirstOrderOp make_first_order(std::vector<double> a, std::vector<double> b,
                              const LatticeWindow& window) {
  const size_t n = static_cast<size_t>(window.size());
  if (a.size() != n || b.size() != n) {
    throw LengthMismatch("coefficient sequences must cover the window (" +
                         std::to_string(a.size()) + ", " + std::to_string(b.size()) +
                         " vs " + std::to_string(n) + ")");
  }
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
      throw ValueError("non-finite operator coefficient at site " +
                       std::to_string(window.n_min + static_cast<int>(i)));
    }
    if (b[i] <= 0.0) {
      throw NonPositiveB("b(" + std::to_string(window.n_min + static_cast<int>(i)) +
                         ") = " + std::to_string(b[i]) + " must be positive");
    }
    if (a[i] == 0.0) {
      throw ZeroA("a(" + std::to_string(window.n_min + static_cast<int>(i)) +
                  ") must be nonzero");
    }
  }
  return FirstOrderOp{window, std::move(a), std::move(b)};
}

LatticeFunction apply(const FirstOrderOp& A, const LatticeFunction& f) {
  if (A.window != f.window) throw WindowMismatch("apply: operator/function windows differ");
  LatticeFunction g = zero_function(A.window);
  const int n = A.window.size();
  for (int i = 0; i < n; ++i) {
    const double fn1 = (i + 1 < n) ? f.values[static_cast<size_t>(i) + 1] : 0.0;
    g.values[static_cast<size_t>(i)] =
        A.a[static_cast<size_t>(i)] * f.values[static_cast<size_t>(i)] +
        A.b[static_cast<size_t>(i)] * fn1;
  }
  return g;
}

LatticeFunction apply_adjoint(const FirstOrderOp& A, const LatticeFunction& f) {
  if (A.window != f.window) throw WindowMismatch("apply_adjoint: operator/function windows differ");
  LatticeFunction g = zero_function(A.window);
  const int n = A.window.size();
  for (int i = 0; i < n; ++i) {
    const double prev = (i > 0) ? A.b[static_cast<size_t>(i) - 1] * f.values[static_cast<size_t>(i) - 1] : 0.0;
    g.values[static_cast<size_t>(i)] =
        A.a[static_cast<size_t>(i)] * f.values[static_cast<size_t>(i)] + prev;
  }
  return g;
}

LatticeFunction apply(const TridiagonalOp& L, const LatticeFunction& f) {
  if (L.window != f.window) throw WindowMismatch("apply: operator/function windows differ");
  LatticeFunction g = zero_function(L.window);
  const int n = L.window.size();
  for (int i = 0; i < n; ++i) {
    double v = L.diag[static_cast<size_t>(i)] * f.values[static_cast<size_t>(i)];
    if (i + 1 < n) v += L.off[static_cast<size_t>(i)] * f.values[static_cast<size_t>(i) + 1];
    if (i > 0) v += L.off[static_cast<size_t>(i) - 1] * f.values[static_cast<size_t>(i) - 1];
    g.values[static_cast<size_t>(i)] = v;
  }
  return g;
}

TridiagonalOp lower_product(const FirstOrderOp& A) {
  const size_t n = A.a.size();
  TridiagonalOp L;
  L.window = A.window;
  L.diag.resize(n);
  L.off.resize(n - 1);
  for (size_t i = 0; i < n; ++i) L.diag[i] = A.a[i] * A.a[i] + A.b[i] * A.b[i];
  for (size_t i = 0; i + 1 < n; ++i) L.off[i] = A.a[i + 1] * A.b[i];
  return L;
}

TridiagonalOp raise_product(const FirstOrderOp& A) {
  const size_t n = A.a.size();
  TridiagonalOp L;
  L.window = A.window;
  L.diag.resize(n);
  L.off.resize(n - 1);
  for (size_t i = 0; i < n; ++i) {
    const double bprev = (i > 0) ? A.b[i - 1] : 0.0;  // b term absent at n_min
    L.diag[i] = A.a[i] * A.a[i] + bprev * bprev;
  }
  for (size_t i = 0; i + 1 < n; ++i) L.off[i] = A.a[i] * A.b[i];
  return L;
}

TridiagonalOp shifted_diagonal(TridiagonalOp L, double c) {
  for (double& d : L.diag) d += c;
  return L;
}

TridiagonalOp shift_conjugate(const TridiagonalOp& L, int s) {
  const int n = L.window.size();
  if (std::abs(s) >= n) {
    throw ShiftTooLarge("shift " + std::to_string(s) + " on a window of size " +
                        std::to_string(n));
  }
  TridiagonalOp R;
  R.window = L.window;
  R.diag.assign(static_cast<size_t>(n), 0.0);
  R.off.assign(static_cast<size_t>(n) - 1, 0.0);
  for (int i = 0; i < n; ++i) {
    const int src = i - s;
    if (src >= 0 && src < n) R.diag[static_cast<size_t>(i)] = L.diag[static_cast<size_t>(src)];
  }
  for (int i = 0; i + 1 < n; ++i) {
    const int src = i - s;
    if (src >= 0 && src + 1 < n) R.off[static_cast<size_t>(i)] = L.off[static_cast<size_t>(src)];
  }
  return R;
}

LatticeWindow shift_valid_range(const LatticeWindow& w, int s) {
  return LatticeWindow{w.n_min + std::max(s, 0), w.n_max + std::min(s, 0)};
}

double chain_residual(const FirstOrderOp& A_j, const FirstOrderOp& A_jm1,
                      double alpha_j, double q) {
  if (A_j.window != A_jm1.window) throw WindowMismatch("chain_residual: windows differ");
  const TridiagonalOp lhs = lower_product(A_j);
  const TridiagonalOp rhs = raise_product(A_jm1);
  const LatticeWindow& w = A_j.window;
  double res = 0.0;
  for (int n = w.n_min + 2; n <= w.n_max - 2; ++n) {
    res = std::max(res, std::abs(lhs.diag_at(n) - alpha_j - q * rhs.diag_at(n)));
  }
  for (int n = w.n_min + 2; n <= w.n_max - 3; ++n) {
    res = std::max(res, std::abs(lhs.off_at(n) - q * rhs.off_at(n)));
  }
  return res;
}

double norm_bound(const TridiagonalOp& L) {
  const int n = L.window.size();
  double bound = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = std::abs(L.diag[static_cast<size_t>(i)]);
    if (i + 1 < n) row += std::abs(L.off[static_cast<size_t>(i)]);
    if (i > 0) row += std::abs(L.off[static_cast<size_t>(i) - 1]);
    bound = std::max(bound, row);
  }
  return bound;
}

}  // namespace qdchain
