#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "tetra/hilbert.hpp"
#include "tetra/jacobi.hpp"
#include "tetra/matrix.hpp"

namespace tetra {

struct ModelParams {
  double J = 1.0;   // intra-dimer coupling mu_i - S_i
  double J1 = 0.0;  // inter-dimer coupling across the plaquette
  double h = 0.0;   // Zeeman energy g*muB*B (or h/kB in kelvin mode)
};

struct SpinOps {
  Matrix Sz, Sp, Sm;
};

inline SpinOps spin_matrices(double s) {
  const int d = static_cast<int>(std::lround(2.0 * s + 1.0));
  if (std::fabs(2.0 * s + 1.0 - d) > 1e-12 || (d != 2 && d != 3))
    throw std::invalid_argument("spin_matrices: only s = 1/2 and s = 1 supported");
  SpinOps ops{Matrix(d, d), Matrix(d, d), Matrix(d, d)};
  for (int i = 0; i < d; ++i) {
    const double m = s - i;  // descending z-projection
    ops.Sz(i, i) = m;
    if (i > 0) ops.Sp(i - 1, i) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
  }
  ops.Sm = ops.Sp.transposed();
  return ops;
}

namespace detail {

// Operator X acting on one site, identity elsewhere, in the (2,3,2,3) space.
inline Matrix embed(const Matrix& x, int site) {
  Matrix out = Matrix::identity(1);
  for (int f = 0; f < 4; ++f)
    out = kron(out, f == site ? x : Matrix::identity(kSiteDims[f]));
  return out;
}

struct SiteOperators {
  std::array<Matrix, 4> Sz, Sp, Sm;
  SiteOperators() {
    const SpinOps half = spin_matrices(0.5);
    const SpinOps one = spin_matrices(1.0);
    for (int f = 0; f < 4; ++f) {
      const SpinOps& local = (kSiteDims[f] == 2) ? half : one;
      Sz[f] = embed(local.Sz, f);
      Sp[f] = embed(local.Sp, f);
      Sm[f] = embed(local.Sm, f);
    }
  }
};

inline const SiteOperators& site_ops() {
  static const SiteOperators ops;
  return ops;
}

// X.Y = Xz Yz + (X+ Y- + X- Y+)/2 between two embedded sites.
inline Matrix dot_coupling(int a, int b) {
  const SiteOperators& ops = site_ops();
  Matrix m = ops.Sz[a] * ops.Sz[b];
  m += 0.5 * (ops.Sp[a] * ops.Sm[b]);
  m += 0.5 * (ops.Sm[a] * ops.Sp[b]);
  return m;
}

}  // namespace detail

inline Matrix total_sz() {
  const detail::SiteOperators& ops = detail::site_ops();
  return ops.Sz[kMu1] + ops.Sz[kS1] + ops.Sz[kMu2] + ops.Sz[kS2];
}

// H = J(S1.mu1 + S2.mu2) + J1(S1+mu1).(S2+mu2) - h Sz_tot
inline Matrix build_hamiltonian(const ModelParams& p) {
  Matrix h = detail::dot_coupling(kS1, kMu1) + detail::dot_coupling(kS2, kMu2);
  h *= p.J;
  Matrix inter = detail::dot_coupling(kS1, kS2) + detail::dot_coupling(kS1, kMu2) +
                 detail::dot_coupling(kMu1, kS2) + detail::dot_coupling(kMu1, kMu2);
  h += p.J1 * inter;
  h -= p.h * total_sz();
  return h;
}

struct SymmetryOperators {
  Matrix Sz_tot;
  Matrix Sigma1_sq;  // (S1 + mu1)^2
  Matrix Sigma2_sq;  // (S2 + mu2)^2
  Matrix SigmaT_sq;  // (Sigma1 + Sigma2)^2
};

namespace detail {

inline Matrix composite_sq(std::vector<int> sites) {
  const SiteOperators& ops = site_ops();
  const int n = kFullDim;
  Matrix sz(n, n), sp(n, n), sm(n, n);
  for (int s : sites) {
    sz += ops.Sz[s];
    sp += ops.Sp[s];
    sm += ops.Sm[s];
  }
  // S^2 = Sz^2 + (S+S- + S-S+)/2
  Matrix out = sz * sz;
  out += 0.5 * (sp * sm);
  out += 0.5 * (sm * sp);
  return out;
}

}  // namespace detail

inline const SymmetryOperators& symmetry_operators() {
  static const SymmetryOperators ops{
      total_sz(),
      detail::composite_sq({kMu1, kS1}),
      detail::composite_sq({kMu2, kS2}),
      detail::composite_sq({kMu1, kS1, kMu2, kS2}),
  };
  return ops;
}

struct GroundStateLabel {
  double sigma_T_z = 0.0;
  double sigma_1 = 0.0;  // in {1/2, 3/2}
  double sigma_2 = 0.0;
  double sigma_T = 0.0;  // total-spin quantum number
};

inline bool operator==(const GroundStateLabel& a, const GroundStateLabel& b) {
  return a.sigma_T_z == b.sigma_T_z && a.sigma_1 == b.sigma_1 && a.sigma_2 == b.sigma_2 &&
         a.sigma_T == b.sigma_T;
}

namespace detail {

// Nearest value with 2x half-integer, i.e. k/2 grid.
inline double snap_half_integer(double x) { return std::round(2.0 * x) / 2.0; }

// Solve <S^2> = sigma(sigma+1) for sigma on the half-integer grid.
inline double sigma_from_casimir(double ssq, double tol, const char* what) {
  const double sigma = snap_half_integer(0.5 * (std::sqrt(4.0 * ssq + 1.0) - 1.0));
  if (std::fabs(sigma * (sigma + 1.0) - ssq) > tol)
    throw std::runtime_error(std::string("classify_state: <") + what +
                             "^2> not consistent with a quantum number (degenerate manifold mixing?)");
  return sigma;
}

}  // namespace detail

// Requires v to be a simultaneous eigenvector of the symmetry operators.
inline GroundStateLabel classify_state(const std::vector<double>& v, double tol = 1e-8) {
  const SymmetryOperators& ops = symmetry_operators();
  GroundStateLabel l;
  const double sz = expectation(ops.Sz_tot, v);
  l.sigma_T_z = detail::snap_half_integer(sz);
  if (std::fabs(l.sigma_T_z - sz) > tol)
    throw std::runtime_error("classify_state: <Sz_tot> not a half-integer (degenerate manifold mixing?)");
  l.sigma_1 = detail::sigma_from_casimir(expectation(ops.Sigma1_sq, v), tol, "Sigma1");
  l.sigma_2 = detail::sigma_from_casimir(expectation(ops.Sigma2_sq, v), tol, "Sigma2");
  l.sigma_T = detail::sigma_from_casimir(expectation(ops.SigmaT_sq, v), tol, "SigmaT");
  return l;
}

struct LabeledState {
  double energy = 0.0;
  std::vector<double> vector;
  GroundStateLabel label;
};

namespace detail {

// Rotate the span of `vecs` so each member is an eigenvector of `op`,
// recursing on any sub-degeneracy found in <op>.
inline void diagonalize_within(std::vector<std::vector<double>>& vecs, const Matrix& op) {
  const int d = static_cast<int>(vecs.size());
  if (d <= 1) return;
  Matrix overlap(d, d);
  for (int i = 0; i < d; ++i) {
    const std::vector<double> ov = matvec(op, vecs[i]);
    for (int j = 0; j < d; ++j) overlap(i, j) = dot(vecs[j], ov);
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double avg = 0.5 * (overlap(i, j) + overlap(j, i));
      overlap(i, j) = overlap(j, i) = avg;
    }
  const SpectralDecomposition sd = sym_eigen(overlap);
  std::vector<std::vector<double>> rotated(d, std::vector<double>(vecs[0].size(), 0.0));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) {
      const double c = sd.eigenvectors(i, k);
      if (c == 0.0) continue;
      for (size_t x = 0; x < vecs[i].size(); ++x) rotated[k][x] += c * vecs[i][x];
    }
  vecs = std::move(rotated);
}

}  // namespace detail

// All eigenpairs within eps_deg*scale of the minimum energy, with symmetry
// labels attached after in-manifold simultaneous diagonalization.
inline std::vector<LabeledState> ground_state_manifold(const ModelParams& p, double eps_deg = 1e-9) {
  const Matrix H = build_hamiltonian(p);
  const SpectralDecomposition sd = sym_eigen(H);
  const double scale = std::max({std::fabs(p.J), std::fabs(p.J1), std::fabs(p.h), 1.0});
  const double cutoff = sd.eigenvalues.front() + eps_deg * scale;

  std::vector<std::vector<double>> vecs;
  std::vector<double> energies;
  for (int k = 0; k < kFullDim && sd.eigenvalues[k] <= cutoff; ++k) {
    std::vector<double> v(kFullDim);
    for (int i = 0; i < kFullDim; ++i) v[i] = sd.eigenvectors(i, k);
    vecs.push_back(std::move(v));
    energies.push_back(sd.eigenvalues[k]);
  }

  const SymmetryOperators& ops = symmetry_operators();
  detail::diagonalize_within(vecs, ops.Sz_tot);
  // Refine sequentially; each pass groups only by the operators already
  // resolved, then diagonalizes the next one within each group.
  auto refine = [&](const Matrix& op, const std::vector<const Matrix*>& resolved) {
    std::map<std::vector<long long>, std::vector<int>> groups;
    for (size_t i = 0; i < vecs.size(); ++i) {
      std::vector<long long> key;
      for (const Matrix* r : resolved) key.push_back(std::llround(1e4 * expectation(*r, vecs[i])));
      groups[key].push_back(static_cast<int>(i));
    }
    for (auto& [key, idx] : groups) {
      if (idx.size() <= 1) continue;
      std::vector<std::vector<double>> sub;
      for (int i : idx) sub.push_back(vecs[i]);
      detail::diagonalize_within(sub, op);
      for (size_t k = 0; k < idx.size(); ++k) vecs[idx[k]] = std::move(sub[k]);
    }
  };
  refine(ops.Sigma1_sq, {&ops.Sz_tot});
  refine(ops.Sigma2_sq, {&ops.Sz_tot, &ops.Sigma1_sq});
  refine(ops.SigmaT_sq, {&ops.Sz_tot, &ops.Sigma1_sq, &ops.Sigma2_sq});

  std::vector<LabeledState> out;
  for (size_t i = 0; i < vecs.size(); ++i) {
    const double nrm = norm(vecs[i]);
    for (double& x : vecs[i]) x /= nrm;
    LabeledState s;
    s.energy = energies[i];
    s.label = classify_state(vecs[i]);
    s.vector = std::move(vecs[i]);
    out.push_back(std::move(s));
  }
  return out;
}

namespace detail {

// Closed-form ground states, as (flat index, coefficient) pairs.  Flat index uses
// sites (mu1,S1,mu2,S2) with descending z; ket |m1,s1,m2,s2> has index
// ((i1*3+j1)*2+i2)*3+j2, i = 0 for +1/2, j = 0 for +1.
struct KetAmplitude {
  int index;
  double coeff;
};

inline int ket_index(double m1, double s1, double m2, double s2) {
  const int i1 = (m1 > 0) ? 0 : 1;
  const int i2 = (m2 > 0) ? 0 : 1;
  const int j1 = static_cast<int>(std::lround(1.0 - s1));
  const int j2 = static_cast<int>(std::lround(1.0 - s2));
  return ((i1 * 3 + j1) * 2 + i2) * 3 + j2;
}

inline std::vector<KetAmplitude> appendix_amplitudes(const GroundStateLabel& l) {
  const double R2 = std::sqrt(2.0), R3 = std::sqrt(3.0), R6 = std::sqrt(6.0), R10 = std::sqrt(10.0);
  auto is = [&](double tz, double s1, double s2) {
    return l.sigma_T_z == tz && l.sigma_1 == s1 && l.sigma_2 == s2;
  };
  if (is(3, 1.5, 1.5)) return {{ket_index(.5, 1, .5, 1), 1.0}};
  if (is(2, 1.5, 1.5))
    return {{ket_index(.5, 1, .5, 0), R2 / R6},
            {ket_index(.5, 1, -.5, 1), 1 / R6},
            {ket_index(.5, 0, .5, 1), -R2 / R6},
            {ket_index(-.5, 1, .5, 1), -1 / R6}};
  if (is(2, 1.5, 0.5))
    return {{ket_index(.5, 1, .5, 0), 1 / R3}, {ket_index(.5, 1, -.5, 1), -R2 / R3}};
  if (is(2, 0.5, 1.5))
    return {{ket_index(.5, 0, .5, 1), 1 / R3}, {ket_index(-.5, 1, .5, 1), -R2 / R3}};
  if (is(1, 1.5, 1.5))
    return {{ket_index(.5, 1, .5, -1), 1 / R10},
            {ket_index(.5, 1, -.5, 0), R2 / R10},
            {ket_index(.5, 0, .5, 0), -(4.0 / 3.0) / R10},
            {ket_index(.5, 0, -.5, 1), -(2.0 * R2 / 3.0) / R10},
            {ket_index(-.5, 1, .5, 0), -(2.0 * R2 / 3.0) / R10},
            {ket_index(-.5, 1, -.5, 1), -(2.0 / 3.0) / R10},
            {ket_index(.5, -1, .5, 1), 1 / R10},
            {ket_index(-.5, 0, .5, 1), R2 / R10}};
  if (is(1, 0.5, 0.5))
    return {{ket_index(.5, 0, .5, 0), 1.0 / 3.0},
            {ket_index(.5, 0, -.5, 1), -R2 / 3.0},
            {ket_index(-.5, 1, .5, 0), -R2 / 3.0},
            {ket_index(-.5, 1, -.5, 1), 2.0 / 3.0}};
  if (is(1, 0.5, 1.5))
    return {{ket_index(.5, 0, .5, 0), R2 / 6.0},
            {ket_index(.5, 0, -.5, 1), 1.0 / 6.0},
            {ket_index(-.5, 1, .5, 0), -2.0 / 6.0},
            {ket_index(-.5, 1, -.5, 1), -R2 / 6.0},
            {ket_index(.5, -1, .5, 1), -3.0 * R2 / 6.0},
            {ket_index(-.5, 0, .5, 1), 3.0 / 6.0}};
  if (is(1, 1.5, 0.5))
    return {{ket_index(.5, 0, .5, 0), -R2 / 6.0},
            {ket_index(-.5, 1, .5, 0), -1.0 / 6.0},
            {ket_index(.5, 0, -.5, 1), 2.0 / 6.0},
            {ket_index(-.5, 1, -.5, 1), R2 / 6.0},
            {ket_index(.5, 1, .5, -1), 3.0 * R2 / 6.0},
            {ket_index(.5, 1, -.5, 0), -3.0 / 6.0}};
  if (is(0, 1.5, 1.5))
    return {{ket_index(.5, 1, -.5, -1), 3.0 / 6.0},
            {ket_index(.5, 0, .5, -1), -R2 / 6.0},
            {ket_index(.5, 0, -.5, 0), -2.0 / 6.0},
            {ket_index(-.5, 1, .5, -1), -1.0 / 6.0},
            {ket_index(-.5, 1, -.5, 0), -R2 / 6.0},
            {ket_index(-.5, -1, .5, 1), -3.0 / 6.0},
            {ket_index(-.5, 0, -.5, 1), R2 / 6.0},
            {ket_index(-.5, 0, .5, 0), 2.0 / 6.0},
            {ket_index(.5, -1, -.5, 1), 1.0 / 6.0},
            {ket_index(.5, -1, .5, 0), R2 / 6.0}};
  if (is(0, 0.5, 0.5)) {
    const double c = 1.0 / (3.0 * R2);
    return {{ket_index(.5, 0, .5, -1), R2 * c},
            {ket_index(.5, 0, -.5, 0), -c},
            {ket_index(-.5, 1, .5, -1), -2.0 * c},
            {ket_index(-.5, 1, -.5, 0), R2 * c},
            {ket_index(-.5, 0, -.5, 1), -R2 * c},
            {ket_index(-.5, 0, .5, 0), c},
            {ket_index(.5, -1, -.5, 1), 2.0 * c},
            {ket_index(.5, -1, .5, 0), -R2 * c}};
  }
  throw std::invalid_argument("appendix_eigenvector: state not among the ten tabulated ground states");
}

}  // namespace detail

// Closed-form ground-state vector for the ten tabulated states; sigma_T is
// taken equal to sigma_T_z for all of them.
inline std::vector<double> appendix_eigenvector(const GroundStateLabel& label) {
  GroundStateLabel l = label;
  if (l.sigma_T == 0.0 && l.sigma_T_z != 0.0) l.sigma_T = l.sigma_T_z;
  if (l.sigma_T == 0.0 && l.sigma_T_z == 0.0) l.sigma_T = 0.0;
  std::vector<double> v(kFullDim, 0.0);
  for (const auto& a : detail::appendix_amplitudes(l)) v[a.index] += a.coeff;
  const double nrm = norm(v);
  for (double& x : v) x /= nrm;
  return v;
}

// E = J/2 [s1(s1+1)+s2(s2+1) - 2(s(s+1)+mu(mu+1))]
//   + J1/2 [sT(sT+1) - s1(s1+1) - s2(s2+1)] - h*sTz, with s=1, mu=1/2.
inline double analytic_energy(const GroundStateLabel& l, const ModelParams& p) {
  auto c = [](double s) { return s * (s + 1.0); };
  if (std::fabs(l.sigma_T_z) > l.sigma_T + 1e-12 || l.sigma_T > l.sigma_1 + l.sigma_2 + 1e-12 ||
      l.sigma_T < std::fabs(l.sigma_1 - l.sigma_2) - 1e-12)
    throw std::invalid_argument("analytic_energy: inconsistent quantum numbers");
  const double dimer_shift = 2.0 * (c(1.0) + c(0.5));  // 5.5
  return 0.5 * p.J * (c(l.sigma_1) + c(l.sigma_2) - dimer_shift) +
         0.5 * p.J1 * (c(l.sigma_T) - c(l.sigma_1) - c(l.sigma_2)) - p.h * l.sigma_T_z;
}

// Full analytic spectrum: (energy at given params, multiplicity is 1 per
// (s1, s2, sT, sTz) combination).
inline std::vector<double> analytic_spectrum(const ModelParams& p) {
  std::vector<double> e;
  e.reserve(kFullDim);
  for (double s1 : {0.5, 1.5})
    for (double s2 : {0.5, 1.5})
      for (double sT = std::fabs(s1 - s2); sT <= s1 + s2 + 1e-9; sT += 1.0)
        for (double tz = -sT; tz <= sT + 1e-9; tz += 1.0) {
          GroundStateLabel l{tz, s1, s2, sT};
          e.push_back(analytic_energy(l, p));
        }
  if (e.size() != kFullDim) throw std::logic_error("analytic_spectrum: state count mismatch");
  std::sort(e.begin(), e.end());
  return e;
}

struct PhaseBoundary {
  GroundStateLabel left, right;
  // Boundary line cJ*J + cJ1*J1 + ch*h = 0.
  double cJ = 0.0, cJ1 = 0.0, ch = 0.0;
};

// The ten tabulated ground-state boundary lines.
inline std::vector<PhaseBoundary> phase_boundaries() {
  auto L = [](double tz, double s1, double s2) { return GroundStateLabel{tz, s1, s2, tz}; };
  auto L0 = [](double s1, double s2, double sT) { return GroundStateLabel{0, s1, s2, sT}; };
  std::vector<PhaseBoundary> b;
  // h = J1
  b.push_back({L0(1.5, 1.5, 0), L(1, 1.5, 1.5), 0, 1, -1});
  b.push_back({L0(0.5, 0.5, 0), L(1, 0.5, 0.5), 0, 1, -1});
  // h = 2 J1
  b.push_back({L(1, 1.5, 1.5), L(2, 1.5, 1.5), 0, 2, -1});
  // h = 3/2 J + 1/2 J1  (|1,1/2,1/2> vs the |2> doublet)
  b.push_back({L(1, 0.5, 0.5), L(2, 0.5, 1.5), 1.5, 0.5, -1});
  // h = 3 J1
  b.push_back({L(2, 1.5, 1.5), L(3, 1.5, 1.5), 0, 3, -1});
  // h = 3/2 J + 3/2 J1  (|2> doublet vs saturated)
  b.push_back({L(2, 0.5, 1.5), L(3, 1.5, 1.5), 1.5, 1.5, -1});
  // h = 3/2 J + J1
  b.push_back({L(1, 0.5, 0.5), L(3, 1.5, 1.5), 1.5, 1.0, -1});
  // J = J1
  b.push_back({L0(0.5, 0.5, 0), L0(1.5, 1.5, 0), 1, -1, 0});
  b.push_back({L(1, 0.5, 0.5), L(1, 1.5, 1.5), 1, -1, 0});
  b.push_back({L(2, 0.5, 1.5), L(2, 1.5, 1.5), 1, -1, 0});
  return b;
}

}  // namespace tetra
