#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tetra/jacobi.hpp"
#include "tetra/matrix.hpp"
#include "tetra/model.hpp"

namespace tetra {

struct ThermalContext {
  double beta = 0.0;  // 1/(kB T); infinity encodes the T -> 0 limit
  bool zero_temperature() const { return std::isinf(beta); }
};

struct PartitionFunction {
  double log_z = 0.0;  // log Z shifted by -beta*eps_min
  double shift = 0.0;  // eps_min used for the shift
  double beta = 0.0;
  double value() const { return std::exp(log_z - beta * shift); }
};

inline PartitionFunction partition_function(const SpectralDecomposition& spec, const ThermalContext& ctx) {
  if (ctx.zero_temperature())
    throw std::invalid_argument("partition_function: beta must be finite (use ground_state_density_matrix)");
  PartitionFunction z;
  z.beta = ctx.beta;
  z.shift = spec.eigenvalues.front();
  double s = 0.0;
  for (double e : spec.eigenvalues) s += std::exp(-ctx.beta * (e - z.shift));
  z.log_z = std::log(s);
  return z;
}

// rho = sum_k e^{-beta eps_k}/Z |psi_k><psi_k|, weights shifted by eps_min.
inline Matrix thermal_density_matrix(const SpectralDecomposition& spec, const ThermalContext& ctx) {
  if (ctx.zero_temperature())
    throw std::invalid_argument("thermal_density_matrix: beta must be finite");
  const int n = static_cast<int>(spec.eigenvalues.size());
  const double shift = spec.eigenvalues.front();
  std::vector<double> w(n);
  double z = 0.0;
  for (int k = 0; k < n; ++k) {
    w[k] = std::exp(-ctx.beta * (spec.eigenvalues[k] - shift));
    z += w[k];
  }
  Matrix rho(n, n);
  for (int k = 0; k < n; ++k) {
    const double p = w[k] / z;
    if (p == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const double vi = spec.eigenvectors(i, k) * p;
      if (vi == 0.0) continue;
      for (int j = 0; j < n; ++j) rho(i, j) += vi * spec.eigenvectors(j, k);
    }
  }
  return rho;
}

// Uniform mixture over the degenerate ground manifold: the beta -> inf Gibbs limit.
inline Matrix ground_state_density_matrix(const std::vector<LabeledState>& manifold) {
  if (manifold.empty()) throw std::invalid_argument("ground_state_density_matrix: empty manifold");
  const int n = static_cast<int>(manifold.front().vector.size());
  Matrix rho(n, n);
  const double p = 1.0 / static_cast<double>(manifold.size());
  for (const LabeledState& s : manifold)
    for (int i = 0; i < n; ++i) {
      const double vi = s.vector[i] * p;
      if (vi == 0.0) continue;
      for (int j = 0; j < n; ++j) rho(i, j) += vi * s.vector[j];
    }
  return rho;
}

// State at the requested (params, beta), dispatching on the T = 0 limit.
inline Matrix state_at(const ModelParams& p, const ThermalContext& ctx) {
  if (ctx.zero_temperature()) return ground_state_density_matrix(ground_state_manifold(p));
  return thermal_density_matrix(sym_eigen(build_hamiltonian(p)), ctx);
}

}  // namespace tetra
