#pragma once

#include <vector>

#include "qdchain/chain_r2.hpp"
#include "qdchain/operator_core.hpp"

namespace qdchain {

/// Eigenvalues lambda_{j,0..K} of L_j produced by the Darboux recursion
/// lambda_{j,0} = 0, lambda_{j+1,k+1} = q (lambda_{j,k} + alpha_j) with
/// cyclic wraparound lambda_{j+r,k} = lambda_{j,k}.
struct SpectrumTable {
  int j = 1;
  std::vector<double> levels;
};

struct EigenPair {
  int k = 0;
  double lambda = 0.0;
  LatticeFunction psi;  // unit l2 norm
};

SpectrumTable eigenvalue_table(const ChainParams& p, int j, int K);

/// The eigenvalue accumulation point for r = 2:
/// Lambda_j = (q^2 alpha_j + q alpha_{j+1}) / (1 - q^2).
double accumulation_value(const ChainParams& p, int j);

/// Unit-norm solution of A_prev psi = 0, i.e. psi(n+1) = -(a(n)/b(n)) psi(n),
/// anchored at the site of maximal magnitude with running renormalization.
/// Throws NotSquareSummable when either window tail fails to decay below
/// 1e-8 of the peak.
LatticeFunction ground_state(const FirstOrderOp& A_prev, const LatticeWindow& window);

/// One Darboux rung: psi_{j+1,k+1} = A_j^+ psi_{j,k} (unnormalized).
LatticeFunction ladder(const LatticeFunction& psi, const FirstOrderOp& A_j);

/// Eigenpairs (lambda_{j,k}, psi_{j,k}) for k = 0..K, built by walking each
/// level back to a ground state of some L_i and applying ladders forward.
/// Throws WindowTooSmall when a level's window tails exceed 1e-8 of its peak.
std::vector<EigenPair> eigenbasis(const ChainParams& p, int j, int K,
                                  const LatticeWindow& window);

/// ||v||^2 - sum_k <psi_k, v>^2 for an orthonormal family.
double completeness_defect(const std::vector<EigenPair>& basis, const LatticeFunction& v);

}  // namespace qdchain
