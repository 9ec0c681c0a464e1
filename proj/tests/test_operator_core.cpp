#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qdchain/operator_core.hpp"
#include "qdchain/tridiag_eigen.hpp"

using namespace qdchain;

namespace {

FirstOrderOp constant_op(double a, double b, const LatticeWindow& w) {
  const size_t n = static_cast<size_t>(w.size());
  return make_first_order(std::vector<double>(n, a), std::vector<double>(n, b), w);
}

}  // namespace

TEST_CASE("make_first_order validates coefficients") {
  const LatticeWindow w{0, 2};
  CHECK_NOTHROW(make_first_order({1, 1, 1}, {1, 1, 1}, w));
  CHECK_THROWS_AS(make_first_order({1, 0, 1}, {1, 1, 1}, w), ZeroA);
  CHECK_THROWS_AS(make_first_order({1, 1, 1}, {1, -1, 1}, w), NonPositiveB);
  CHECK_THROWS_AS(make_first_order({1, 1}, {1, 1, 1}, w), LengthMismatch);
}

TEST_CASE("apply matches the defining formula") {
  const LatticeWindow w{-2, 2};
  const FirstOrderOp A = constant_op(1.0, 1.0, w);

  SUBCASE("delta input") {
    const LatticeFunction g = apply(A, delta_function(w, 0));
    CHECK(g.at(-1) == 1.0);
    CHECK(g.at(0) == 1.0);
    CHECK(g.at(1) == 0.0);
  }
  SUBCASE("zero input stays zero") {
    const LatticeFunction g = apply(A, zero_function(w));
    for (double v : g.values) CHECK(v == 0.0);
  }
  SUBCASE("window mismatch rejected") {
    CHECK_THROWS_AS(apply(A, zero_function(LatticeWindow{0, 4})), WindowMismatch);
  }
}

TEST_CASE("apply with zero beyond the right edge") {
  const LatticeWindow w{0, 1};
  const FirstOrderOp A = make_first_order({1, 2}, {3, 4}, w);
  const LatticeFunction f(w, {5, 6});
  const LatticeFunction g = apply(A, f);
  CHECK(g.at(0) == 23.0);  // 1*5 + 3*6
  CHECK(g.at(1) == 12.0);  // 2*6 + 4*0
}

TEST_CASE("apply_adjoint formula and adjoint identity") {
  const LatticeWindow w{-8, 8};
  SUBCASE("delta") {
    const FirstOrderOp A = constant_op(1.0, 1.0, w);
    const LatticeFunction g = apply_adjoint(A, delta_function(w, 0));
    CHECK(g.at(0) == 1.0);
    CHECK(g.at(1) == 1.0);
    CHECK(g.at(-1) == 0.0);
  }
  SUBCASE("<Af,g> == <f,A+g> for compactly supported f, g") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coeff(0.2, 2.0);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> a(static_cast<size_t>(w.size())), b(static_cast<size_t>(w.size()));
      for (auto& x : a) x = coeff(rng);
      for (auto& x : b) x = coeff(rng);
      const FirstOrderOp A = make_first_order(a, b, w);
      LatticeFunction f = zero_function(w), g = zero_function(w);
      for (int n = w.n_min + 2; n <= w.n_max - 2; ++n) {
        f[n] = val(rng);
        g[n] = val(rng);
      }
      CHECK(dot(apply(A, f), g) == doctest::Approx(dot(f, apply_adjoint(A, g))).epsilon(1e-13));
    }
  }
  SUBCASE("constant coefficients: A+A equals AA+ in the interior") {
    const FirstOrderOp A = constant_op(0.7, 1.3, w);
    const TridiagonalOp lo = lower_product(A);
    const TridiagonalOp hi = raise_product(A);
    for (int n = w.n_min + 1; n <= w.n_max - 1; ++n) {
      CHECK(lo.diag_at(n) == doctest::Approx(hi.diag_at(n)).epsilon(1e-15));
    }
    for (int n = w.n_min + 1; n <= w.n_max - 2; ++n) {
      CHECK(lo.off_at(n) == doctest::Approx(hi.off_at(n)).epsilon(1e-15));
    }
  }
}

TEST_CASE("lower_product closed form") {
  const LatticeWindow w{0, 2};
  const FirstOrderOp A = make_first_order({1, 2, 3}, {1, 1, 1}, w);
  const TridiagonalOp L = lower_product(A);
  CHECK(L.diag == std::vector<double>{2, 5, 10});
  CHECK(L.off == std::vector<double>{2, 3});

  SUBCASE("constant coefficients") {
    const LatticeWindow w2{-3, 3};
    const TridiagonalOp L2 = lower_product(constant_op(2.0, 0.5, w2));
    for (double d : L2.diag) CHECK(d == 4.25);
    for (double u : L2.off) CHECK(u == 1.0);
  }
  SUBCASE("rows match operator composition at interior sites") {
    const LatticeWindow w2{-4, 4};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coeff(0.3, 1.7);
    std::vector<double> a(static_cast<size_t>(w2.size())), b(static_cast<size_t>(w2.size()));
    for (auto& x : a) x = coeff(rng);
    for (auto& x : b) x = coeff(rng);
    const FirstOrderOp B = make_first_order(a, b, w2);
    const TridiagonalOp L2 = lower_product(B);
    for (int n = w2.n_min + 1; n <= w2.n_max - 1; ++n) {
      const LatticeFunction row = apply(B, apply_adjoint(B, delta_function(w2, n)));
      CHECK(row.at(n) == doctest::Approx(L2.diag_at(n)).epsilon(1e-14));
      CHECK(row.at(n + 1) == doctest::Approx(n + 1 <= w2.n_max - 1 ? L2.off_at(n) : row.at(n + 1))
                                 .epsilon(1e-14));
    }
  }
}

TEST_CASE("raise_product closed form and positivity") {
  const LatticeWindow w{0, 2};
  const FirstOrderOp A = make_first_order({1, 2, 3}, {1, 1, 1}, w);
  const TridiagonalOp L = raise_product(A);
  CHECK(L.diag == std::vector<double>{1, 5, 10});
  CHECK(L.off == std::vector<double>{1, 2});

  SUBCASE("Gram form is positive semidefinite") {
    const LatticeWindow w2{-6, 6};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coeff(0.3, 1.7);
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> a(static_cast<size_t>(w2.size())), b(static_cast<size_t>(w2.size()));
      for (auto& x : a) x = coeff(rng);
      for (auto& x : b) x = coeff(rng);
      const FirstOrderOp B = make_first_order(a, b, w2);
      for (const TridiagonalOp& P : {raise_product(B), lower_product(B)}) {
        const auto evs = smallest_eigenvalues({P, 1, 1e-12});
        CHECK(evs[0] >= -1e-12);
      }
    }
  }
}

TEST_CASE("shift_conjugate relabels entries") {
  const LatticeWindow w{0, 2};
  TridiagonalOp L;
  L.window = w;
  L.diag = {1, 2, 3};
  L.off = {4, 5};

  SUBCASE("zero shift is the identity") {
    const TridiagonalOp R = shift_conjugate(L, 0);
    CHECK(R.diag == L.diag);
    CHECK(R.off == L.off);
  }
  SUBCASE("shift by one") {
    const TridiagonalOp R = shift_conjugate(L, 1);
    CHECK(R.diag_at(1) == 1.0);
    CHECK(R.diag_at(2) == 2.0);
    CHECK(R.off_at(1) == 4.0);
    const LatticeWindow valid = shift_valid_range(w, 1);
    CHECK(valid.n_min == 1);
    CHECK(valid.n_max == 2);
  }
  SUBCASE("round trip restores the doubly valid part") {
    const TridiagonalOp R = shift_conjugate(shift_conjugate(L, 1), -1);
    CHECK(R.diag_at(0) == 1.0);
    CHECK(R.diag_at(1) == 2.0);
    CHECK(R.off_at(0) == 4.0);
  }
  SUBCASE("too large shift") { CHECK_THROWS_AS(shift_conjugate(L, 3), ShiftTooLarge); }
}

TEST_CASE("chain_residual") {
  const LatticeWindow w{-10, 10};
  SUBCASE("constant coefficients with q = 1, alpha = 0") {
    const FirstOrderOp A = constant_op(0.8, 1.1, w);
    CHECK(chain_residual(A, A, 0.0, 1.0) <= 1e-15);
  }
  SUBCASE("perturbation is detected") {
    const FirstOrderOp A = constant_op(0.8, 1.1, w);
    FirstOrderOp B = A;
    B.a[static_cast<size_t>(w.index(0))] += 1e-3;
    CHECK(chain_residual(B, A, 0.0, 1.0) >= 1e-4);
  }
  SUBCASE("window mismatch") {
    const FirstOrderOp A = constant_op(1.0, 1.0, w);
    const FirstOrderOp B = constant_op(1.0, 1.0, LatticeWindow{-9, 10});
    CHECK_THROWS_AS(chain_residual(A, B, 0.0, 1.0), WindowMismatch);
  }
}

TEST_CASE("norm_bound") {
  const LatticeWindow w{-5, 5};
  SUBCASE("constant AA+ gives (a+b)^2") {
    const TridiagonalOp L = lower_product(constant_op(1.5, 0.5, w));
    CHECK(norm_bound(L) == doctest::Approx(4.0).epsilon(1e-15));
  }
  SUBCASE("zero operator") {
    TridiagonalOp L;
    L.window = w;
    L.diag.assign(static_cast<size_t>(w.size()), 0.0);
    L.off.assign(static_cast<size_t>(w.size()) - 1, 0.0);
    CHECK(norm_bound(L) == 0.0);
  }
  SUBCASE("bounds every eigenvalue") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> coeff(0.3, 2.0);
    std::vector<double> a(static_cast<size_t>(w.size())), b(static_cast<size_t>(w.size()));
    for (auto& x : a) x = coeff(rng);
    for (auto& x : b) x = coeff(rng);
    const FirstOrderOp A = make_first_order(a, b, w);
    const TridiagonalOp L = lower_product(A);
    const auto evs = smallest_eigenvalues({L, w.size(), 1e-11});
    CHECK(evs.back() <= norm_bound(L) + 1e-10);
  }
}

TEST_CASE("shift_conjugate preserves the interior entry multiset") {
  const LatticeWindow w{0, 6};
  TridiagonalOp L;
  L.window = w;
  L.diag = {1, 2, 3, 4, 5, 6, 7};
  L.off = {8, 9, 10, 11, 12, 13};
  const TridiagonalOp R = shift_conjugate(L, 2);
  const LatticeWindow valid = shift_valid_range(w, 2);
  for (int n = valid.n_min; n <= valid.n_max; ++n) {
    CHECK(R.diag_at(n) == L.diag_at(n - 2));
  }
}
