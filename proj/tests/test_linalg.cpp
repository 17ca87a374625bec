#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "tetra/density.hpp"
#include "tetra/hilbert.hpp"
#include "tetra/jacobi.hpp"
#include "tetra/matrix.hpp"
#include "tetra/model.hpp"
#include "tetra/negativity.hpp"

using namespace tetra;

namespace {

Matrix random_symmetric(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = d(rng);
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double md = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) md = std::max(md, std::fabs(a(i, j) - b(i, j)));
  return md;
}

}  // namespace

TEST_CASE("kron basics") {
  CHECK(max_abs_diff(kron(Matrix::identity(2), Matrix::identity(3)), Matrix::identity(6)) == 0.0);

  Matrix dz(2, 2);
  dz(0, 0) = 1;
  dz(1, 1) = -1;
  const Matrix k = kron(dz, Matrix::identity(2));
  const double want[] = {1, 1, -1, -1};
  for (int i = 0; i < 4; ++i) CHECK(k(i, i) == want[i]);

  const Matrix sz_half = spin_matrices(0.5).Sz;
  const Matrix sz_one = spin_matrices(1.0).Sz;
  const Matrix kz = kron(sz_half, sz_one);
  const double diag[] = {0.5, 0, -0.5, -0.5, 0, 0.5};
  for (int i = 0; i < 6; ++i) CHECK(kz(i, i) == doctest::Approx(diag[i]).epsilon(1e-14));
  CHECK(kz.rows() == 6);
}

TEST_CASE("kron dimension composition") {
  std::mt19937 rng(7);
  Matrix a = random_symmetric(2, rng), b = random_symmetric(3, rng), c = random_symmetric(2, rng);
  CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-14);
}

TEST_CASE("sym_eigen on simple matrices") {
  Matrix d(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 1;
  d(2, 2) = 2;
  const auto ev = sym_eigenvalues(d);
  CHECK(ev[0] == doctest::Approx(1));
  CHECK(ev[1] == doctest::Approx(2));
  CHECK(ev[2] == doctest::Approx(3));

  Matrix x(2, 2);
  x(0, 1) = x(1, 0) = 1;
  const auto xv = sym_eigenvalues(x);
  CHECK(xv[0] == doctest::Approx(-1));
  CHECK(xv[1] == doctest::Approx(1));
}

TEST_CASE("sym_eigen ground energy matches analytic oracle") {
  const ModelParams p{1, 0.5, 0};
  const auto ev = sym_eigenvalues(build_hamiltonian(p));
  CHECK(ev.front() == doctest::Approx(analytic_spectrum(p).front()).epsilon(1e-12));
}

TEST_CASE("sym_eigen reconstruction and orthonormality") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 36);
    const Matrix m = random_symmetric(n, rng);
    const auto sd = sym_eigen(m);
    Matrix recon(n, n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          recon(i, j) += sd.eigenvalues[k] * sd.eigenvectors(i, k) * sd.eigenvectors(j, k);
    CHECK(max_abs_diff(recon, m) <= 1e-10 * (1 + m.max_abs()));
    const Matrix vtv = sd.eigenvectors.transposed() * sd.eigenvectors;
    CHECK(max_abs_diff(vtv, Matrix::identity(n)) <= 1e-10);
    for (int k = 1; k < n; ++k) CHECK(sd.eigenvalues[k] >= sd.eigenvalues[k - 1]);
  }
}

TEST_CASE("partial transpose identity, involution, rejection") {
  const auto dims = full_dims();
  CHECK(max_abs_diff(partial_transpose(Matrix::identity(36), dims, bit(kS1)), Matrix::identity(36)) ==
        0.0);

  std::mt19937 rng(3);
  const Matrix m = random_symmetric(36, rng);
  for (SiteMask mask : {bit(kMu1), bit(kMu1) | bit(kS2), bit(kS1) | bit(kMu2) | bit(kS2)}) {
    const Matrix pt2 = partial_transpose(partial_transpose(m, dims, mask), dims, mask);
    CHECK(max_abs_diff(pt2, m) == 0.0);
    CHECK(std::fabs(partial_transpose(m, dims, mask).trace() - m.trace()) <= 1e-12);
  }
  CHECK_THROWS_AS(partial_transpose(m, dims, 0), std::invalid_argument);
  CHECK_THROWS_AS(partial_transpose(m, dims, 0xF), std::invalid_argument);
}

TEST_CASE("partial transpose mask-complement spectrum symmetry") {
  const Matrix rho = thermal_density_matrix(sym_eigen(build_hamiltonian({1, 2, 0})), {1.0});
  const auto dims = full_dims();
  const auto s1 = sym_eigenvalues(partial_transpose(rho, dims, bit(kMu1) | bit(kS1)));
  const auto s2 = sym_eigenvalues(partial_transpose(rho, dims, bit(kMu2) | bit(kS2)));
  for (int i = 0; i < 36; ++i) CHECK(std::fabs(s1[i] - s2[i]) <= 1e-10);
}

TEST_CASE("partial trace basics") {
  const auto dims = full_dims();
  Matrix mm = Matrix::identity(36);
  mm *= 1.0 / 36.0;
  const Matrix r1 = partial_trace(mm, dims, bit(kMu1));
  CHECK(r1.rows() == 2);
  CHECK(max_abs_diff(r1, 0.5 * Matrix::identity(2)) <= 1e-14);

  // product state across the mu1S1 | mu2S2 cut
  std::mt19937 rng(5);
  Matrix a = random_symmetric(6, rng), b = random_symmetric(6, rng);
  a = a * a.transposed();
  b = b * b.transposed();
  a *= 1.0 / a.trace();
  b *= 1.0 / b.trace();
  const Matrix prod = kron(a, b);
  const Matrix ra = partial_trace(prod, dims, bit(kMu1) | bit(kS1));
  CHECK(max_abs_diff(ra, a) <= 1e-12);
  CHECK(std::fabs(ra.trace() - prod.trace()) <= 1e-12);
  CHECK(sym_eigenvalues(ra).front() >= -1e-12);

  CHECK_THROWS_AS(partial_trace(prod, dims, 0), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(prod, dims, 0xF), std::invalid_argument);
}

TEST_CASE("reduced dimer negativity matches reported value") {
  const Matrix rho = ground_state_density_matrix(ground_state_manifold({1, 0.5, 0.1}));
  CHECK(pair_negativity(rho, kMu1, kS1) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}
