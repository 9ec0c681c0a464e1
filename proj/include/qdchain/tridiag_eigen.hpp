#pragma once

#include <cstdint>
#include <vector>

#include "qdchain/operator_core.hpp"

namespace qdchain {

struct SpectrumTable;  // darboux_spectrum.hpp

struct EigenRequest {
  TridiagonalOp op;
  int count = 1;       // smallest-k eigenvalues
  double tol = 1e-10;  // bracket width
};

/// Number of eigenvalues of the truncated matrix strictly below x, by the
/// Sturm / LDL^T sign-agreement count. Zero and near-zero off-diagonal
/// entries split the matrix into independent blocks.
int sturm_count(const TridiagonalOp& L, double x);

/// The count smallest eigenvalues, each bracketed by bisection to width
/// <= tol, in nondecreasing order.
std::vector<double> smallest_eigenvalues(const EigenRequest& req);

/// Unit eigenvector by inverse iteration from a seeded random start.
/// Requires lambda within tol of an isolated eigenvalue; the result satisfies
/// ||L v - lambda v|| <= 10 * tol * norm_bound(L). Throws NotConverged.
LatticeFunction eigenvector(const TridiagonalOp& L, double lambda, double tol,
                            std::uint64_t seed = 0);

/// Inverse iteration for several eigenvalues; eigenvalues closer than
/// 10 * tol are treated as a cluster and reorthogonalized against each other.
std::vector<LatticeFunction> eigenvectors(const TridiagonalOp& L,
                                          const std::vector<double>& lambdas,
                                          double tol, std::uint64_t seed = 0);

struct SpectrumComparison {
  double max_abs_diff = 0.0;
  std::vector<double> per_level;
};

/// Per-level differences between a Darboux-predicted table and oracle
/// eigenvalues. Throws LengthMismatch.
SpectrumComparison compare_spectra(const SpectrumTable& predicted,
                                   const std::vector<double>& oracle);

}  // namespace qdchain
