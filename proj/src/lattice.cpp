#include "qdchain/lattice.hpp"

#include <algorithm>
#include <string>

namespace qdchain {

LatticeWindow make_window(int n_min, int n_max) {
  if (n_min > n_max) {
    throw ValueError("window bounds out of order: [" + std::to_string(n_min) +
                     ", " + std::to_string(n_max) + "]");
  }
  LatticeWindow w{n_min, n_max};
  if (w.size() < 3) {
    throw ValueError("window must have at least 3 sites, got " +
                     std::to_string(w.size()));
  }
  return w;
}

LatticeFunction::LatticeFunction(const LatticeWindow& w, std::vector<double> v)
    : window(w), values(std::move(v)) {
  if (static_cast<int>(values.size()) != window.size()) {
    throw LengthMismatch("function has " + std::to_string(values.size()) +
                         " values on a window of size " +
                         std::to_string(window.size()));
  }
  for (double x : values) {
    if (!std::isfinite(x)) throw ValueError("non-finite lattice function value");
  }
}

LatticeFunction zero_function(const LatticeWindow& w) {
  return LatticeFunction(w, std::vector<double>(static_cast<size_t>(w.size()), 0.0));
}

LatticeFunction delta_function(const LatticeWindow& w, int n0) {
  LatticeFunction f = zero_function(w);
  if (!w.contains(n0)) throw WindowMismatch("delta site outside window");
  f[n0] = 1.0;
  return f;
}

double dot(const LatticeFunction& f, const LatticeFunction& g) {
  if (f.window != g.window) throw WindowMismatch("dot of mismatched windows");
  double s = 0.0;
  for (size_t i = 0; i < f.values.size(); ++i) s += f.values[i] * g.values[i];
  return s;
}

double norm(const LatticeFunction& f) { return std::sqrt(dot(f, f)); }

double max_abs(const LatticeFunction& f) {
  double m = 0.0;
  for (double x : f.values) m = std::max(m, std::abs(x));
  return m;
}

void normalize(LatticeFunction& f) {
  const double r = norm(f);
  if (r == 0.0) throw ValueError("cannot normalize the zero function");
  for (double& x : f.values) x /= r;
}

}  // namespace qdchain
