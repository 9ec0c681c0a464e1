#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qdchain/chain_r2.hpp"
#include "qdchain/darboux_spectrum.hpp"

namespace qdchain {

/// Coefficient sequences of all r chain operators over a window, with the
/// wrap convention a_{j+r}(n) = a_j(n-s), b_{j+r}(n) = b_j(n-s). Chain
/// indices are 1-based; index 0 refers to the wrapped A_r.
struct ChainUnknowns {
  int r = 2;
  int s = 1;
  LatticeWindow window;
  std::vector<std::vector<double>> a;  // [r][window size]
  std::vector<std::vector<double>> b;  // [r][window size], positive

  double a_at(int j, int n) const;  // cyclic j, shifted by s per wrap
  double b_at(int j, int n) const;
  FirstOrderOp op(int j) const;  // A_j on the window (wrapped indices allowed)
};

/// One scalar pinned during the solve, removing a continuous degree of
/// freedom of the solution family.
struct GaugePin {
  int j = 1;
  int n = 0;
  char which = 'a';  // 'a' or 'b'
  double target = 0.0;
  double weight = 1.0;
};

struct SolveOptions {
  double tol = 1e-10;          // sup-norm target for the chain residuals
  int max_iter = 200;
  int edge_width = 3;          // sites per side regularized toward the seed
  double edge_weight = 1e-6;
  std::vector<GaugePin> pins;  // empty: pin a_1 at the window center to the seed
  bool compute_nullspace = true;
};

struct SolveReport {
  double final_residual = 0.0;  // sup-norm over the Eq. (2)/(3) residuals
  int iterations = 0;
  bool converged = false;
  int nullspace_dim = -1;  // singular values of J below 1e-10 * sigma_max
  std::string gauge_note;
};

/// Residuals of Eq. (2) with the Eq. (3) wrap, one per (j, site, entry type):
/// diagonal a_j(n)^2+b_j(n)^2-alpha_j-q(a_{j-1}(n)^2+b_{j-1}(n-1)^2) and
/// off-diagonal a_j(n+1) b_j(n) - q a_{j-1}(n) b_{j-1}(n), on the trimmed
/// interior. Throws WindowTooSmall when the window has fewer than 2r+6 sites.
std::vector<double> assemble_residuals(const ChainUnknowns& u, const ChainParams& p);

/// Damped Gauss-Newton (Levenberg-Marquardt) on assemble_residuals in the
/// variables (a_j(n), log b_j(n)). Returns the converged unknowns or a
/// report with converged = false. Throws SingularJacobian when the damped
/// normal equations cannot be solved at any damping.
std::pair<ChainUnknowns, SolveReport> solve(const ChainParams& p, const ChainUnknowns& seed,
                                            const SolveOptions& opts);
std::pair<ChainUnknowns, SolveReport> solve(const ChainParams& p, const ChainUnknowns& seed,
                                            double tol, int max_iter);

enum class SeedStrategy { FromR2Interlace, ContinuationInQ };

/// Initial guess for the solver. FromR2Interlace periodically extends the
/// closed-form r = 2 solution with averaged alpha; for r = 2 it returns the
/// closed-form solution itself.
ChainUnknowns seed_chain(const ChainParams& p, SeedStrategy strategy,
                         const LatticeWindow& window);

/// Continuation driver: starts at q near 1 with the interlaced seed and
/// walks q down to p.q in `steps` solves, warm-starting each from the last.
std::pair<ChainUnknowns, SolveReport> solve_with_continuation(const ChainParams& p,
                                                              const LatticeWindow& window,
                                                              double q_start, int steps,
                                                              const SolveOptions& opts);

/// Gauge-aligned max coefficient deviation between two unknown sets,
/// ignoring `margin` sites at each window edge. Alignment tries the global
/// a-sign flip and returns the better match.
double max_coefficient_difference(const ChainUnknowns& u, const ChainUnknowns& v, int margin);

struct Period6Profile {
  double h = 0.0;
  double q = 0.0;
  std::vector<double> x;                      // sampled x = n h, |x| <= 2
  std::vector<std::vector<double>> potential; // [r][x], row-sum potential + alpha_j/2
  SolveReport report;
  double spectral_max_diff = 0.0;  // Darboux table vs oracle, max over j
};

struct Period6Report {
  std::vector<Period6Profile> runs;
  std::vector<double> profile_deltas;  // successive-h sup differences, common grid
  bool monotone = false;
};

/// The closing experiment: period-6 chain with alpha_{j+3} = alpha_j at
/// q = exp(-(alpha1/4) h^2) for each h, solved and sampled; the convergence
/// metric is the sup difference of successive-h potential profiles on a
/// common x grid over [-2, 2].
Period6Report period6_experiment(const std::array<double, 3>& alphas3,
                                 const std::vector<double>& h_list,
                                 int spectral_levels = 5, double tol = 1e-8);

}  // namespace qdchain
