#pragma once

#include <vector>

#include "qdchain/lattice.hpp"

namespace qdchain {

/// First-order difference operator A = a + b T on a lattice window,
/// (A f)(n) = a(n) f(n) + b(n) f(n+1). Coefficients are stored per window
/// site; b(n) > 0 and a(n) != 0 throughout.
struct FirstOrderOp {
  LatticeWindow window;
  std::vector<double> a;
  std::vector<double> b;

  double a_at(int n) const { return a[static_cast<size_t>(window.index(n))]; }
  double b_at(int n) const { return b[static_cast<size_t>(window.index(n))]; }
};

/// Symmetric second-order difference operator: diagonal d(n) plus a single
/// off-diagonal sequence u(n) coupling sites n and n+1 (length size-1).
struct TridiagonalOp {
  LatticeWindow window;
  std::vector<double> diag;
  std::vector<double> off;

  double diag_at(int n) const { return diag[static_cast<size_t>(window.index(n))]; }
  double off_at(int n) const { return off[static_cast<size_t>(window.index(n))]; }
};

/// Validating constructor for FirstOrderOp.
/// Throws LengthMismatch, NonPositiveB, ZeroA.
FirstOrderOp make_first_order(std::vector<double> a, std::vector<double> b,
                              const LatticeWindow& window);

/// g(n) = a(n) f(n) + b(n) f(n+1), with f taken as zero beyond the window.
LatticeFunction apply(const FirstOrderOp& A, const LatticeFunction& f);

/// Formal l2 adjoint: g(n) = a(n) f(n) + b(n-1) f(n-1), zero beyond edges.
LatticeFunction apply_adjoint(const FirstOrderOp& A, const LatticeFunction& f);

/// g(n) = d(n) f(n) + u(n) f(n+1) + u(n-1) f(n-1).
LatticeFunction apply(const TridiagonalOp& L, const LatticeFunction& f);

/// A A^+ as the truncated-matrix product (positive semidefinite by
/// construction): d(n) = a(n)^2 + b(n)^2, u(n) = a(n+1) b(n).
TridiagonalOp lower_product(const FirstOrderOp& A);

/// A^+ A restricted to the window: d(n) = a(n)^2 + b(n-1)^2 (b term absent at
/// n_min), u(n) = a(n) b(n).
TridiagonalOp raise_product(const FirstOrderOp& A);

/// Adds c to every diagonal entry.
TridiagonalOp shifted_diagonal(TridiagonalOp L, double c);

/// T^{-s} L T^s: d'(n) = d(n-s), u'(n) = u(n-s). Sites whose source index
/// leaves the window are filled with zero; use shift_valid_range to know
/// which sites are meaningful. Throws ShiftTooLarge when |s| >= window size.
TridiagonalOp shift_conjugate(const TridiagonalOp& L, int s);

/// Sites of a window that remain valid after shifting indices by s.
LatticeWindow shift_valid_range(const LatticeWindow& w, int s);

/// Max interior deviation in L_j = A_j A_j^+ - alpha_j = q A_{j-1}^+ A_{j-1},
/// over diagonal and off-diagonal entries; "interior" excludes 2 sites at
/// each window edge. Throws WindowMismatch.
double chain_residual(const FirstOrderOp& A_j, const FirstOrderOp& A_jm1,
                      double alpha_j, double q);

/// Row-sum bound max_n |d(n)| + |u(n)| + |u(n-1)|; an upper bound for the
/// spectral radius of the truncated matrix.
double norm_bound(const TridiagonalOp& L);

}  // namespace qdchain
