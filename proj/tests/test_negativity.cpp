#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>

#include "tetra/density.hpp"
#include "tetra/hilbert.hpp"
#include "tetra/jacobi.hpp"
#include "tetra/model.hpp"
#include "tetra/negativity.hpp"

using namespace tetra;
using enum tetra::Bisection;

namespace {

Matrix ground_rho(double J1, double h) {
  return ground_state_density_matrix(ground_state_manifold({1.0, J1, h}));
}

// Expected values for the five distinct bisections, in the order
// mu1|rest, S1|rest, mu1mu2|S1S2, mu1S1|mu2S2, mu1S2|mu2S1.
struct GoldenRow {
  double J1, h;
  double v[5];
  double tol;
};

}  // namespace

TEST_CASE("ground-state bisection negativities match the closed forms") {
  const double R2 = std::sqrt(2.0), R3 = std::sqrt(3.0), R5 = std::sqrt(5.0), R6 = std::sqrt(6.0);
  const std::vector<GoldenRow> rows = {
      {0.5, 0.1, {0.5, 1.0, (2 + R6) / 3, 0.5, 41.0 / 18.0}, 1e-9},
      {0.5, 0.8, {R2 / 3, R2 / 3, 2 * (3 * R2 + 2) / 9, 0.0, 2 * (3 * R2 + 2) / 9}, 1e-9},
      {0.5, 2.0, {1 / std::sqrt(18.0), 1 / std::sqrt(18.0), 1.0 / 3.0, 0.0, 1.0 / 3.0}, 1e-9},
      {0.5, 3.0, {0, 0, 0, 0, 0}, 1e-12},
      {1.0, 0.5, {0.5, 1.0, 0.5, 1.0, 1.0}, 1e-9},
      {1.0,
       1.5,
       {R3 / 8, (10 + R3 + R6 + 3 * R2) / 40, (5 + R3 + R6 + 3 * R2) / 40, 3 * (1 + 3 * R3) / 40,
        3 * (1 + 3 * R3) / 40},
       1e-9},
      {1.0, 2.5, {R5 / 18, R2 / 9, R2 / 9, 1.0 / 6.0, 1.0 / 6.0}, 1e-9},
      {1.0, 5.0, {0, 0, 0, 0, 0}, 1e-12},
      {2.0, 0.5, {0.5, 1.0, (1 + R6) / 3, 1.5, 1.5}, 1e-9},
      {2.0,
       3.0,
       {R2 / 3, 0.874, (6 * R2 + 6 * std::sqrt(17.0) + 5 + std::sqrt(34.0)) / 45, (4 * R3 + 3) / 10,
        1.0987},
       1e-3},
      {2.0, 5.0, {R5 / 6, R2 / 3, R2 / 3, 0.5, 0.5}, 1e-9},
      {2.0, 7.0, {0, 0, 0, 0, 0}, 1e-12},
  };
  for (const GoldenRow& r : rows) {
    CAPTURE(r.J1);
    CAPTURE(r.h);
    const NegativityVector nv = global_bisections(ground_rho(r.J1, r.h));
    CHECK(std::fabs(nv[kMu1_Rest] - r.v[0]) <= r.tol);
    CHECK(std::fabs(nv[kS1_Rest] - r.v[1]) <= r.tol);
    CHECK(std::fabs(nv[kMu1Mu2_S1S2] - r.v[2]) <= r.tol);
    CHECK(std::fabs(nv[kMu1S1_Mu2S2] - r.v[3]) <= r.tol);
    CHECK(std::fabs(nv[kMu1S2_Mu2S1] - r.v[4]) <= r.tol);
    // The mixed manifold states are symmetric under dimer exchange.
    CHECK(std::fabs(nv[kMu2_Rest] - nv[kMu1_Rest]) <= 1e-9);
    CHECK(std::fabs(nv[kS2_Rest] - nv[kS1_Rest]) <= 1e-9);
  }
}

TEST_CASE("bisection masks and names") {
  CHECK(bisection_mask(kMu1_Rest) == bit(kMu1));
  CHECK(bisection_mask(kS2_Rest) == bit(kS2));
  CHECK(bisection_mask(kMu1Mu2_S1S2) == (bit(kMu1) | bit(kMu2)));
  CHECK(bisection_mask(kMu1S1_Mu2S2) == (bit(kMu1) | bit(kS1)));
  CHECK(bisection_mask(kMu1S2_Mu2S1) == (bit(kMu1) | bit(kS2)));
  CHECK(std::string(bisection_name(kMu1_Rest)) == "mu1|S1mu2S2");
  CHECK(std::string(bisection_name(kMu1Mu2_S1S2)) == "mu1mu2|S1S2");
}

TEST_CASE("negativity agrees with an explicit partial-transpose spectrum") {
  const Matrix rho = thermal_density_matrix(sym_eigen(build_hamiltonian({1, 2, 0.3})), {2.0});
  const auto dims = full_dims();
  for (Bisection b : {kMu1_Rest, kS1_Rest, kMu1Mu2_S1S2, kMu1S1_Mu2S2, kMu1S2_Mu2S1}) {
    double neg = 0.0;
    for (double e : sym_eigenvalues(partial_transpose(rho, dims, bisection_mask(b))))
      if (e < 0.0) neg -= e;
    if (neg < kNegativityFloor) neg = 0.0;
    CHECK(negativity(rho, dims, bisection_mask(b)) == doctest::Approx(neg).epsilon(1e-12));
  }
}

TEST_CASE("negativity vanishes on product states across the cut") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  auto random_state = [&](int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) m(i, j) = m(j, i) = d(rng);
    m = m * m.transposed();
    m *= 1.0 / m.trace();
    return m;
  };
  const auto dims = full_dims();
  for (int t = 0; t < 30; ++t) {
    // product across mu1S1 | mu2S2
    const Matrix rho = kron(random_state(6), random_state(6));
    CHECK(negativity(rho, dims, bit(kMu1) | bit(kS1)) == 0.0);
    // product of four single-site states: separable for every cut
    const Matrix rho4 =
        kron(kron(random_state(2), random_state(3)), kron(random_state(2), random_state(3)));
    for (int b = 0; b < 7; ++b)
      CHECK(global_bisections(rho4).values[b] == 0.0);
  }
}

TEST_CASE("mask and complement give the same negativity") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> dj(-2.0, 2.0);
  for (int t = 0; t < 10; ++t) {
    const Matrix rho =
        thermal_density_matrix(sym_eigen(build_hamiltonian({dj(rng), dj(rng), dj(rng)})), {1.0});
    const auto dims = full_dims();
    for (SiteMask m : {bit(kMu1), bit(kS1) | bit(kS2), bit(kMu1) | bit(kS1) | bit(kMu2)}) {
      CHECK(negativity(rho, dims, m) ==
            doctest::Approx(negativity(rho, dims, SiteMask(0xF ^ m))).epsilon(1e-10));
    }
  }
}

TEST_CASE("infinite temperature and saturation kill all bisections") {
  const Matrix hot = thermal_density_matrix(sym_eigen(build_hamiltonian({1, 0.5, 0.2})), {0.0});
  const Matrix sat = ground_rho(0.5, 10.0);
  for (int b = 0; b < 7; ++b) {
    CHECK(global_bisections(hot).values[b] == 0.0);
    CHECK(global_bisections(sat).values[b] == 0.0);
  }
}

TEST_CASE("negativity floor snaps tiny values to zero") {
  // A state within 1e-13 of separable: floor forces an exact zero.
  const auto dims = full_dims();
  Matrix rho = Matrix::identity(36);
  rho *= (1.0 - 1e-13) / 36.0;
  const Matrix singlet_rho = ground_rho(0.5, 0.1);
  rho += 1e-13 * singlet_rho;
  CHECK(negativity(rho, dims, bit(kMu1)) == 0.0);
}

TEST_CASE("reduced and pair negativities match reported ground-state values") {
  const Matrix rho = ground_rho(0.5, 0.1);  // singlet-product phase
  CHECK(pair_negativity(rho, kMu1, kS1) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(pair_negativity(rho, kS1, kS2) == doctest::Approx(0.111).epsilon(2e-3));
  const SiteMask keepA = bit(kS1) | bit(kMu1) | bit(kS2);
  CHECK(reduced_negativity(rho, keepA, bit(kS1)) == doctest::Approx(0.893).epsilon(2e-3));
  const SiteMask keepB = bit(kMu2) | bit(kMu1) | bit(kS2);
  CHECK(reduced_negativity(rho, keepB, bit(kMu2)) == doctest::Approx(0.427).epsilon(2e-3));

  const Matrix rho1 = ground_rho(0.5, 0.8);
  CHECK(pair_negativity(rho1, kMu1, kS1) == doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-6));
  CHECK(pair_negativity(rho1, kMu2, kS2) == doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-6));
}

TEST_CASE("thermal negativity decreases to zero at high temperature") {
  const ModelParams p{1.0, 0.5, 0.1};
  const auto spec = sym_eigen(build_hamiltonian(p));
  double prev = -1.0;
  for (double beta : {0.02, 0.2, 2.0, 20.0}) {
    const double n = global_bisections(thermal_density_matrix(spec, {beta}))[kS1_Rest];
    CHECK(n >= prev - 1e-12);
    prev = n;
  }
  CHECK(global_bisections(thermal_density_matrix(spec, {0.01}))[kS1_Rest] <= 1e-3);
}
