#pragma once

#include <cmath>
#include <vector>

#include "qdchain/errors.hpp"

namespace qdchain {

/// Closed integer interval [n_min, n_max] standing in for the infinite
/// lattice. Everything beyond the edges is treated as zero (Dirichlet).
struct LatticeWindow {
  int n_min = 0;
  int n_max = 0;

  int size() const { return n_max - n_min + 1; }
  bool contains(int n) const { return n >= n_min && n <= n_max; }
  int index(int n) const { return n - n_min; }

  bool operator==(const LatticeWindow&) const = default;
};

/// Validates n_min <= n_max and size >= 3.
LatticeWindow make_window(int n_min, int n_max);

/// Real-valued function on a lattice window.
struct LatticeFunction {
  LatticeWindow window;
  std::vector<double> values;  // one per window site, all finite

  LatticeFunction() = default;
  LatticeFunction(const LatticeWindow& w, std::vector<double> v);

  /// Value at lattice site n; zero outside the window.
  double at(int n) const {
    return window.contains(n) ? values[static_cast<size_t>(window.index(n))] : 0.0;
  }
  double& operator[](int n) { return values[static_cast<size_t>(window.index(n))]; }
  double operator[](int n) const { return values[static_cast<size_t>(window.index(n))]; }
};

/// All-zero function on a window.
LatticeFunction zero_function(const LatticeWindow& w);

/// Kronecker delta at site n0.
LatticeFunction delta_function(const LatticeWindow& w, int n0);

double dot(const LatticeFunction& f, const LatticeFunction& g);
double norm(const LatticeFunction& f);
double max_abs(const LatticeFunction& f);

/// Rescales f to unit l2 norm in place; throws ValueError on the zero vector.
void normalize(LatticeFunction& f);

}  // namespace qdchain
