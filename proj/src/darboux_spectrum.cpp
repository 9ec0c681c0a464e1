#include "qdchain/darboux_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace qdchain {

SpectrumTable eigenvalue_table(const ChainParams& p, int j, int K) {
  validate_params(p);
  if (j < 1 || j > p.r) throw ValueError("chain index j must lie in 1..r");
  if (K < 0) throw ValueError("level count K must be nonnegative");
  const int r = p.r;
  // lam[i][k] for chain index i = 1..r; every column starts at 0
  std::vector<std::vector<double>> lam(static_cast<size_t>(r) + 1,
                                       std::vector<double>(static_cast<size_t>(K) + 1, 0.0));
  for (int k = 1; k <= K; ++k) {
    for (int i = 1; i <= r; ++i) {
      const int prev = (i == 1) ? r : i - 1;
      lam[static_cast<size_t>(i)][static_cast<size_t>(k)] =
          p.q * (lam[static_cast<size_t>(prev)][static_cast<size_t>(k) - 1] + p.alpha(prev));
    }
  }
  return SpectrumTable{j, lam[static_cast<size_t>(j)]};
}

double accumulation_value(const ChainParams& p, int j) {
  validate_params(p);
  if (p.r != 2) throw ValueError("accumulation value closed form applies to r = 2");
  const double aj = p.alpha(j);
  const double aj1 = p.alpha(j + 1);
  return (p.q * p.q * aj + p.q * aj1) / (1.0 - p.q * p.q);
}

LatticeFunction ground_state(const FirstOrderOp& A_prev, const LatticeWindow& window) {
  if (A_prev.window != window) throw WindowMismatch("ground_state: operator window differs");
  const int n = window.size();
  // log-magnitude walk of psi(n+1) = -(a(n)/b(n)) psi(n), anchored at the peak
  std::vector<double> logmag(static_cast<size_t>(n), 0.0);
  std::vector<double> sign(static_cast<size_t>(n), 1.0);
  for (int i = 0; i + 1 < n; ++i) {
    const double ratio = -A_prev.a[static_cast<size_t>(i)] / A_prev.b[static_cast<size_t>(i)];
    logmag[static_cast<size_t>(i) + 1] = logmag[static_cast<size_t>(i)] + std::log(std::abs(ratio));
    sign[static_cast<size_t>(i) + 1] = sign[static_cast<size_t>(i)] * (ratio < 0.0 ? -1.0 : 1.0);
  }
  size_t peak = 0;
  for (size_t i = 1; i < logmag.size(); ++i) {
    if (logmag[i] > logmag[peak]) peak = i;
  }
  LatticeFunction psi = zero_function(window);
  for (size_t i = 0; i < logmag.size(); ++i) {
    psi.values[i] = sign[i] * std::exp(logmag[i] - logmag[peak]);
  }
  const double left = std::abs(psi.values.front());
  const double right = std::abs(psi.values.back());
  if (left > 1e-8 || right > 1e-8) {
    throw NotSquareSummable("ground state tails do not decay: |psi(n_min)|/peak = " +
                            std::to_string(left) + ", |psi(n_max)|/peak = " +
                            std::to_string(right));
  }
  normalize(psi);
  return psi;
}

LatticeFunction ladder(const LatticeFunction& psi, const FirstOrderOp& A_j) {
  return apply_adjoint(A_j, psi);
}

std::vector<EigenPair> eigenbasis(const ChainParams& p, int j, int K,
                                  const LatticeWindow& window) {
  validate_params(p);
  if (p.r != 2) throw ValueError("eigenbasis uses the r = 2 closed-form operators");
  const SpectrumTable table = eigenvalue_table(p, j, K);

  std::map<int, FirstOrderOp> ops;
  auto op_at = [&](int i) -> const FirstOrderOp& {
    auto it = ops.find(i);
    if (it == ops.end()) it = ops.emplace(i, chain_operator(p, i, window)).first;
    return it->second;
  };

  std::vector<EigenPair> out;
  out.reserve(static_cast<size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    // level k of L_j descends to the ground state of L_{j-k}
    LatticeFunction psi = ground_state(op_at(j - k - 1), window);
    for (int i = j - k; i <= j - 1; ++i) {
      psi = ladder(psi, op_at(i));
      normalize(psi);
    }
    const double peak = max_abs(psi);
    const double tail = std::max(std::abs(psi.values.front()), std::abs(psi.values.back()));
    if (tail > 1e-8 * peak) {
      throw WindowTooSmall("level " + std::to_string(k) + " tails reach " +
                           std::to_string(tail / peak) + " of peak; enlarge the window");
    }
    out.push_back(EigenPair{k, table.levels[static_cast<size_t>(k)], psi});
  }
  return out;
}

double completeness_defect(const std::vector<EigenPair>& basis, const LatticeFunction& v) {
  double defect = dot(v, v);
  for (const EigenPair& pair : basis) {
    const double c = dot(pair.psi, v);
    defect -= c * c;
  }
  return defect;
}

}  // namespace qdchain
