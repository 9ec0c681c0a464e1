#include "qdchain/chain_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qdchain/continuum_limit.hpp"
#include "qdchain/tridiag_eigen.hpp"

namespace qdchain {

namespace {

int wrap_chain_index(int j, int r, int s, int* site_shift) {
  int jj = j;
  int shift = 0;
  while (jj < 1) {
    jj += r;
    shift += s;  // a_j(n) = a_{j+r}(n+s)
  }
  while (jj > r) {
    jj -= r;
    shift -= s;  // a_j(n) = a_{j-r}(n-s)
  }
  *site_shift = shift;
  return jj;
}

}  // namespace

double ChainUnknowns::a_at(int j, int n) const {
  int shift = 0;
  const int jj = wrap_chain_index(j, r, s, &shift);
  return a[static_cast<size_t>(jj) - 1][static_cast<size_t>(window.index(n + shift))];
}

double ChainUnknowns::b_at(int j, int n) const {
  int shift = 0;
  const int jj = wrap_chain_index(j, r, s, &shift);
  return b[static_cast<size_t>(jj) - 1][static_cast<size_t>(window.index(n + shift))];
}

FirstOrderOp ChainUnknowns::op(int j) const {
  int shift = 0;
  wrap_chain_index(j, r, s, &shift);
  // wrapped indices shrink the window by |shift| on one side
  const LatticeWindow w{window.n_min + std::max(-shift, 0), window.n_max - std::max(shift, 0)};
  std::vector<double> aa(static_cast<size_t>(w.size())), bb(static_cast<size_t>(w.size()));
  for (int n = w.n_min; n <= w.n_max; ++n) {
    aa[static_cast<size_t>(w.index(n))] = a_at(j, n);
    bb[static_cast<size_t>(w.index(n))] = b_at(j, n);
  }
  return make_first_order(std::move(aa), std::move(bb), w);
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Layout {
  int r = 0, s = 0;
  LatticeWindow w;
  int lo = 0, hi = 0;  // residual site range, trimmed interior
  int sites = 0;       // hi - lo + 1
  int n_phys = 0;      // 2 * r * sites

  static Layout make(const ChainParams& p, const LatticeWindow& w) {
    if (w.size() < 2 * p.r + 6) {
      throw WindowTooSmall("window of size " + std::to_string(w.size()) +
                           " is below the minimum 2r+6 = " + std::to_string(2 * p.r + 6));
    }
    Layout lay;
    lay.r = p.r;
    lay.s = p.s;
    lay.w = w;
    lay.lo = w.n_min + 3;
    lay.hi = w.n_max - 3 - p.s;
    lay.sites = lay.hi - lay.lo + 1;
    lay.n_phys = 2 * p.r * lay.sites;
    return lay;
  }
};

// Variable packing: per chain j (0-based block), a-block then log(b)-block.
struct Packing {
  int r = 0;
  int N = 0;
  int a_var(int j0, int idx) const { return (2 * j0) * N + idx; }
  int beta_var(int j0, int idx) const { return (2 * j0 + 1) * N + idx; }
  int total() const { return 2 * r * N; }
};

VectorXd pack(const ChainUnknowns& u) {
  const Packing pk{u.r, u.window.size()};
  VectorXd x(pk.total());
  for (int j0 = 0; j0 < u.r; ++j0) {
    for (int i = 0; i < pk.N; ++i) {
      x[pk.a_var(j0, i)] = u.a[static_cast<size_t>(j0)][static_cast<size_t>(i)];
      x[pk.beta_var(j0, i)] = std::log(u.b[static_cast<size_t>(j0)][static_cast<size_t>(i)]);
    }
  }
  return x;
}

ChainUnknowns unpack(const VectorXd& x, const ChainUnknowns& like) {
  ChainUnknowns u = like;
  const Packing pk{u.r, u.window.size()};
  for (int j0 = 0; j0 < u.r; ++j0) {
    for (int i = 0; i < pk.N; ++i) {
      u.a[static_cast<size_t>(j0)][static_cast<size_t>(i)] = x[pk.a_var(j0, i)];
      u.b[static_cast<size_t>(j0)][static_cast<size_t>(i)] = std::exp(x[pk.beta_var(j0, i)]);
    }
  }
  return u;
}

// Least-squares problem: physics rows, then edge-regularization rows, then
// gauge pin rows. Works directly on the packed variable vector.
class Problem {
 public:
  Problem(const ChainParams& p, const ChainUnknowns& seed, const SolveOptions& opts)
      : p_(p), lay_(Layout::make(p, seed.window)), pk_{p.r, seed.window.size()},
        opts_(opts), seed_x_(pack(seed)) {
    pins_ = opts.pins;
    if (pins_.empty()) {
      const int center = (seed.window.n_min + seed.window.n_max) / 2;
      pins_.push_back(GaugePin{1, center, 'a',
                               seed.a[0][static_cast<size_t>(seed.window.index(center))], 1.0});
    }
    n_reg_ = 2 * p.r * 2 * opts.edge_width;
    n_rows_ = lay_.n_phys + n_reg_ + static_cast<int>(pins_.size());
  }

  int rows() const { return n_rows_; }
  int cols() const { return pk_.total(); }
  int phys_rows() const { return lay_.n_phys; }
  const std::vector<GaugePin>& pins() const { return pins_; }

  // (chain block, variable index) of a_j(n) / beta_j(n) with wrap applied
  int a_index(int j, int n) const {
    int shift = 0;
    const int jj = wrap_chain_index(j, lay_.r, lay_.s, &shift);
    return pk_.a_var(jj - 1, lay_.w.index(n + shift));
  }
  int beta_index(int j, int n) const {
    int shift = 0;
    const int jj = wrap_chain_index(j, lay_.r, lay_.s, &shift);
    return pk_.beta_var(jj - 1, lay_.w.index(n + shift));
  }

  VectorXd residuals(const VectorXd& x) const {
    VectorXd res(n_rows_);
    auto aval = [&](int j, int n) { return x[a_index(j, n)]; };
    auto bval = [&](int j, int n) { return std::exp(x[beta_index(j, n)]); };
    int row = 0;
    for (int j = 1; j <= lay_.r; ++j) {
      const double alpha_j = p_.alpha(j);
      for (int n = lay_.lo; n <= lay_.hi; ++n) {
        const double aj = aval(j, n), bj = bval(j, n);
        const double ap = aval(j - 1, n), bp = bval(j - 1, n - 1);
        res[row++] = aj * aj + bj * bj - alpha_j - p_.q * (ap * ap + bp * bp);
      }
      for (int n = lay_.lo; n <= lay_.hi; ++n) {
        res[row++] = aval(j, n + 1) * bval(j, n) - p_.q * aval(j - 1, n) * bval(j - 1, n);
      }
    }
    for (int j0 = 0; j0 < lay_.r; ++j0) {
      for (int e = 0; e < opts_.edge_width; ++e) {
        for (int idx : {e, pk_.N - 1 - e}) {
          res[row++] = opts_.edge_weight * (x[pk_.a_var(j0, idx)] - seed_x_[pk_.a_var(j0, idx)]);
          res[row++] =
              opts_.edge_weight * (x[pk_.beta_var(j0, idx)] - seed_x_[pk_.beta_var(j0, idx)]);
        }
      }
    }
    for (const GaugePin& pin : pins_) {
      if (pin.which == 'a') {
        res[row++] = pin.weight * (x[a_index(pin.j, pin.n)] - pin.target);
      } else {
        res[row++] = pin.weight * (x[beta_index(pin.j, pin.n)] - std::log(pin.target));
      }
    }
    return res;
  }

  MatrixXd jacobian(const VectorXd& x) const {
    MatrixXd J = MatrixXd::Zero(n_rows_, pk_.total());
    auto aval = [&](int j, int n) { return x[a_index(j, n)]; };
    auto bval = [&](int j, int n) { return std::exp(x[beta_index(j, n)]); };
    int row = 0;
    for (int j = 1; j <= lay_.r; ++j) {
      for (int n = lay_.lo; n <= lay_.hi; ++n) {
        const double aj = aval(j, n), bj = bval(j, n);
        const double ap = aval(j - 1, n), bp = bval(j - 1, n - 1);
        J(row, a_index(j, n)) += 2.0 * aj;
        J(row, beta_index(j, n)) += 2.0 * bj * bj;
        J(row, a_index(j - 1, n)) += -2.0 * p_.q * ap;
        J(row, beta_index(j - 1, n - 1)) += -2.0 * p_.q * bp * bp;
        ++row;
      }
      for (int n = lay_.lo; n <= lay_.hi; ++n) {
        const double a1 = aval(j, n + 1), bj = bval(j, n);
        const double ap = aval(j - 1, n), bp = bval(j - 1, n);
        J(row, a_index(j, n + 1)) += bj;
        J(row, beta_index(j, n)) += a1 * bj;
        J(row, a_index(j - 1, n)) += -p_.q * bp;
        J(row, beta_index(j - 1, n)) += -p_.q * ap * bp;
        ++row;
      }
    }
    for (int j0 = 0; j0 < lay_.r; ++j0) {
      for (int e = 0; e < opts_.edge_width; ++e) {
        for (int idx : {e, pk_.N - 1 - e}) {
          J(row++, pk_.a_var(j0, idx)) = opts_.edge_weight;
          J(row++, pk_.beta_var(j0, idx)) = opts_.edge_weight;
        }
      }
    }
    for (const GaugePin& pin : pins_) {
      if (pin.which == 'a') {
        J(row++, a_index(pin.j, pin.n)) = pin.weight;
      } else {
        J(row++, beta_index(pin.j, pin.n)) = pin.weight;
      }
    }
    return J;
  }

  double phys_sup(const VectorXd& res) const {
    double m = 0.0;
    for (int i = 0; i < lay_.n_phys; ++i) m = std::max(m, std::abs(res[i]));
    return m;
  }

 private:
  ChainParams p_;
  Layout lay_;
  Packing pk_;
  SolveOptions opts_;
  VectorXd seed_x_;
  std::vector<GaugePin> pins_;
  int n_reg_ = 0;
  int n_rows_ = 0;
};

}  // namespace

std::vector<double> assemble_residuals(const ChainUnknowns& u, const ChainParams& p) {
  validate_params(p);
  const Layout lay = Layout::make(p, u.window);
  std::vector<double> res;
  res.reserve(static_cast<size_t>(lay.n_phys));
  for (int j = 1; j <= p.r; ++j) {
    const double alpha_j = p.alpha(j);
    for (int n = lay.lo; n <= lay.hi; ++n) {
      const double aj = u.a_at(j, n), bj = u.b_at(j, n);
      const double ap = u.a_at(j - 1, n), bp = u.b_at(j - 1, n - 1);
      res.push_back(aj * aj + bj * bj - alpha_j - p.q * (ap * ap + bp * bp));
    }
    for (int n = lay.lo; n <= lay.hi; ++n) {
      res.push_back(u.a_at(j, n + 1) * u.b_at(j, n) - p.q * u.a_at(j - 1, n) * u.b_at(j - 1, n));
    }
  }
  return res;
}

std::pair<ChainUnknowns, SolveReport> solve(const ChainParams& p, const ChainUnknowns& seed,
                                            const SolveOptions& opts) {
  validate_params(p);
  if (seed.r != p.r || seed.s != p.s) {
    throw ValueError("seed chain shape does not match the parameters");
  }
  Problem prob(p, seed, opts);
  VectorXd x = pack(seed);
  VectorXd res = prob.residuals(x);
  double sup = prob.phys_sup(res);

  SolveReport rep;
  {
    std::string note = "pins:";
    for (const GaugePin& pin : prob.pins()) {
      note += " " + std::string(1, pin.which) + "_" + std::to_string(pin.j) + "(" +
              std::to_string(pin.n) + ")";
    }
    rep.gauge_note = note + "; edge regularization width " +
                     std::to_string(opts.edge_width) + ", a-sign flip left free";
  }

  double mu = 1e-4;
  int iter = 0;
  bool stalled = false;
  while (sup > opts.tol && iter < opts.max_iter && !stalled) {
    const MatrixXd J = prob.jacobian(x);
    const MatrixXd JtJ = J.transpose() * J;
    const VectorXd g = J.transpose() * res;
    VectorXd D = JtJ.diagonal();
    const double dmax = D.maxCoeff();
    for (int i = 0; i < D.size(); ++i) D[i] = std::max(D[i], 1e-12 * dmax);

    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      MatrixXd M = JtJ;
      M.diagonal() += mu * D;
      Eigen::LDLT<MatrixXd> ldlt(M);
      if (ldlt.info() != Eigen::Success) {
        mu *= 10.0;
        if (mu > 1e16) throw SingularJacobian("damped normal equations not solvable");
        continue;
      }
      const VectorXd dx = ldlt.solve(-g);
      const VectorXd xn = x + dx;
      const VectorXd rn = prob.residuals(xn);
      if (rn.squaredNorm() < res.squaredNorm()) {
        x = xn;
        res = rn;
        mu = std::max(mu / 10.0, 1e-14);
        accepted = true;
        break;
      }
      mu *= 10.0;
      if (mu > 1e16) break;
    }
    ++iter;
    if (!accepted) stalled = true;
    sup = prob.phys_sup(res);
  }

  rep.iterations = iter;
  rep.final_residual = sup;
  rep.converged = sup <= opts.tol;
  if (opts.compute_nullspace) {
    const MatrixXd J = prob.jacobian(x);
    Eigen::BDCSVD<MatrixXd> svd(J);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-10 * sv[0];
    rep.nullspace_dim = 0;
    for (int i = 0; i < sv.size(); ++i) {
      if (sv[i] < cutoff) ++rep.nullspace_dim;
    }
    rep.nullspace_dim += prob.cols() - static_cast<int>(sv.size());
  }
  return {unpack(x, seed), rep};
}

std::pair<ChainUnknowns, SolveReport> solve(const ChainParams& p, const ChainUnknowns& seed,
                                            double tol, int max_iter) {
  SolveOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return solve(p, seed, opts);
}

ChainUnknowns seed_chain(const ChainParams& p, SeedStrategy strategy,
                         const LatticeWindow& window) {
  validate_params(p);
  ChainParams r2 = p;
  if (p.r != 2) {
    r2.r = 2;
    r2.s = 1;
    const double abar =
        std::accumulate(p.alphas.begin(), p.alphas.end(), 0.0) / static_cast<double>(p.r);
    r2.alphas = {abar, abar};
    if (strategy == SeedStrategy::ContinuationInQ) r2.phi = 0.0;
    r2.kappa = default_kappa(r2);
  }
  ChainUnknowns u;
  u.r = p.r;
  u.s = p.s;
  u.window = window;
  u.a.resize(static_cast<size_t>(p.r));
  u.b.resize(static_cast<size_t>(p.r));
  for (int j = 1; j <= p.r; ++j) {
    // chain_operator's index wrap interlaces shifted copies of A1, A2
    const FirstOrderOp A = chain_operator(r2, j, window);
    u.a[static_cast<size_t>(j) - 1] = A.a;
    u.b[static_cast<size_t>(j) - 1] = A.b;
  }
  return u;
}

std::pair<ChainUnknowns, SolveReport> solve_with_continuation(const ChainParams& p,
                                                              const LatticeWindow& window,
                                                              double q_start, int steps,
                                                              const SolveOptions& opts) {
  validate_params(p);
  if (!(q_start > 0.0 && q_start < 1.0)) throw ValueError("q_start must lie in (0,1)");
  if (steps < 1) throw ValueError("continuation needs at least one step");
  if (q_start < p.q) q_start = p.q;

  ChainParams step_params = p;
  step_params.q = q_start;
  ChainUnknowns current = seed_chain(step_params, SeedStrategy::ContinuationInQ, window);
  SolveReport total;
  total.converged = true;
  for (int i = 0; i < steps; ++i) {
    const double f = (steps == 1) ? 1.0 : static_cast<double>(i) / (steps - 1);
    // geometric walk in 1-q from q_start down to the target
    step_params.q = 1.0 - (1.0 - q_start) * std::pow((1.0 - p.q) / (1.0 - q_start), f);
    auto [u, rep] = solve(step_params, current, opts);
    current = u;
    total.iterations += rep.iterations;
    total.final_residual = rep.final_residual;
    total.nullspace_dim = rep.nullspace_dim;
    total.gauge_note = rep.gauge_note;
    if (!rep.converged) {
      total.converged = false;
      break;
    }
  }
  return {current, total};
}

double max_coefficient_difference(const ChainUnknowns& u, const ChainUnknowns& v, int margin) {
  if (u.r != v.r || u.s != v.s || !(u.window == v.window)) {
    throw ValueError("cannot compare chains of different shape");
  }
  double best = std::numeric_limits<double>::infinity();
  for (double flip : {1.0, -1.0}) {
    double d = 0.0;
    for (int j0 = 0; j0 < u.r; ++j0) {
      for (int n = u.window.n_min + margin; n <= u.window.n_max - margin; ++n) {
        const size_t i = static_cast<size_t>(u.window.index(n));
        d = std::max(d, std::abs(flip * u.a[static_cast<size_t>(j0)][i] -
                                 v.a[static_cast<size_t>(j0)][i]));
        d = std::max(d, std::abs(u.b[static_cast<size_t>(j0)][i] -
                                 v.b[static_cast<size_t>(j0)][i]));
      }
    }
    best = std::min(best, d);
  }
  return best;
}

namespace {

double interp_linear(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  auto it = std::lower_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return ys.front();
  if (it == xs.end()) return ys.back();
  const size_t hi = static_cast<size_t>(it - xs.begin());
  const size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return (1.0 - t) * ys[lo] + t * ys[hi];
}

}  // namespace

Period6Report period6_experiment(const std::array<double, 3>& alphas3,
                                 const std::vector<double>& h_list,
                                 int spectral_levels, double tol) {
  for (double a : alphas3) {
    if (!(a > 0.0)) throw ValueError("alphas must be positive");
  }
  if (h_list.size() < 2) throw ValueError("need at least two h values to compare profiles");

  Period6Report out;
  for (double h : h_list) {
    ChainParams p;
    p.r = 6;
    p.s = 3;
    p.q = q_of_h(alphas3[0], h);
    p.alphas = {alphas3[0], alphas3[1], alphas3[2], alphas3[0], alphas3[1], alphas3[2]};
    p.phi = 0.0;
    p.epsilon = -1;
    p.kappa = 0.0;  // seeds use the averaged r=2 pinned kappa

    // window wide enough for the x in [-2,2] profile and the spectral check
    const double amin = *std::min_element(p.alphas.begin(), p.alphas.end());
    const double lam_top =
        eigenvalue_table(p, 1, spectral_levels).levels[static_cast<size_t>(spectral_levels)];
    const double x_need =
        std::max(2.0, 2.0 * std::sqrt(lam_top + amin) / amin + 3.0);
    const int half = static_cast<int>(std::ceil(x_need / h)) + 3;
    const LatticeWindow window{-half, half};

    SolveOptions opts;
    opts.tol = tol;
    const ChainUnknowns seed = seed_chain(p, SeedStrategy::FromR2Interlace, window);
    auto [u, rep] = solve(p, seed, opts);

    Period6Profile prof;
    prof.h = h;
    prof.q = p.q;
    prof.report = rep;

    for (int j = 1; j <= 6; ++j) {
      const TridiagonalOp Lj = [&] {
        TridiagonalOp t_ = raise_product(u.op(j - 1));
        for (double& d : t_.diag) d *= p.q;
        for (double& o : t_.off) o *= p.q;
        return t_;
      }();
      const auto oracle =
          smallest_eigenvalues({Lj, spectral_levels + 1, std::min(1e-9, tol)});
      const auto cmp = compare_spectra(eigenvalue_table(p, j, spectral_levels), oracle);
      prof.spectral_max_diff = std::max(prof.spectral_max_diff, cmp.max_abs_diff);
    }

    prof.potential.resize(6);
    for (int n = window.n_min + 1; n <= window.n_max - 1; ++n) {
      const double x = n * h;
      if (std::abs(x) > 2.0 + 1e-12) continue;
      prof.x.push_back(x);
      for (int j = 1; j <= 6; ++j) {
        const double alpha_j = p.alpha(j);
        const double d = u.a_at(j, n) * u.a_at(j, n) + u.b_at(j, n) * u.b_at(j, n) - alpha_j;
        const double up = u.a_at(j, n + 1) * u.b_at(j, n);
        const double dn = u.a_at(j, n) * u.b_at(j, n - 1);
        prof.potential[static_cast<size_t>(j) - 1].push_back(d + up + dn + alpha_j / 2.0);
      }
    }
    out.runs.push_back(std::move(prof));
  }

  // successive-h profile differences on a common grid
  std::vector<double> grid;
  for (int i = 0; i < 21; ++i) grid.push_back(-2.0 + 4.0 * i / 20.0);
  for (size_t i = 0; i + 1 < out.runs.size(); ++i) {
    double delta = 0.0;
    for (int j = 0; j < 6; ++j) {
      for (double x : grid) {
        const double va =
            interp_linear(out.runs[i].x, out.runs[i].potential[static_cast<size_t>(j)], x);
        const double vb =
            interp_linear(out.runs[i + 1].x, out.runs[i + 1].potential[static_cast<size_t>(j)], x);
        delta = std::max(delta, std::abs(va - vb));
      }
    }
    out.profile_deltas.push_back(delta);
  }
  out.monotone = true;
  for (size_t i = 0; i + 1 < out.profile_deltas.size(); ++i) {
    if (!(out.profile_deltas[i + 1] < out.profile_deltas[i])) out.monotone = false;
  }
  return out;
}

}  // namespace qdchain
