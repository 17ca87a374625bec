#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "tetra/hilbert.hpp"
#include "tetra/jacobi.hpp"
#include "tetra/matrix.hpp"

namespace tetra {

// Eigenvalues of the partial transpose above -kNegativityFloor count as zero.
inline constexpr double kNegativityFloor = 1e-12;

// N = sum |lambda| over negative eigenvalues of the partial transpose.
inline double negativity(const Matrix& rho, const std::vector<int>& dims, SiteMask mask) {
  const Matrix pt = partial_transpose(rho, dims, mask);
  double n = 0.0;
  for (double lam : sym_eigenvalues(pt))
    if (lam < -kNegativityFloor) n -= lam;
  return n;
}

// The seven bisections of the full state, in a fixed order.
enum class Bisection : int {
  kMu1_Rest = 0,   // mu1 | S1 mu2 S2
  kMu2_Rest = 1,   // mu2 | mu1 S1 S2
  kS1_Rest = 2,    // S1 | mu1 mu2 S2
  kS2_Rest = 3,    // S2 | mu1 S1 mu2
  kMu1Mu2_S1S2 = 4,
  kMu1S1_Mu2S2 = 5,
  kMu1S2_Mu2S1 = 6,
};

inline constexpr int kNumBisections = 7;

inline SiteMask bisection_mask(Bisection b) {
  switch (b) {
    case Bisection::kMu1_Rest: return bit(kMu1);
    case Bisection::kMu2_Rest: return bit(kMu2);
    case Bisection::kS1_Rest: return bit(kS1);
    case Bisection::kS2_Rest: return bit(kS2);
    case Bisection::kMu1Mu2_S1S2: return bit(kMu1) | bit(kMu2);
    case Bisection::kMu1S1_Mu2S2: return bit(kMu1) | bit(kS1);
    case Bisection::kMu1S2_Mu2S1: return bit(kMu1) | bit(kS2);
  }
  return 0;
}

inline std::string bisection_name(Bisection b) {
  switch (b) {
    case Bisection::kMu1_Rest: return "mu1|S1mu2S2";
    case Bisection::kMu2_Rest: return "mu2|mu1S1S2";
    case Bisection::kS1_Rest: return "S1|mu1mu2S2";
    case Bisection::kS2_Rest: return "S2|mu1S1mu2";
    case Bisection::kMu1Mu2_S1S2: return "mu1mu2|S1S2";
    case Bisection::kMu1S1_Mu2S2: return "mu1S1|mu2S2";
    case Bisection::kMu1S2_Mu2S1: return "mu1S2|mu2S1";
  }
  return "?";
}

struct NegativityVector {
  std::array<double, kNumBisections> values{};
  double operator[](Bisection b) const { return values[static_cast<int>(b)]; }
  double& operator[](Bisection b) { return values[static_cast<int>(b)]; }
};

inline NegativityVector global_bisections(const Matrix& rho) {
  NegativityVector nv;
  const std::vector<int> dims = full_dims();
  for (int b = 0; b < kNumBisections; ++b)
    nv.values[b] = negativity(rho, dims, bisection_mask(static_cast<Bisection>(b)));
  return nv;
}

// Bipartite negativity of the state reduced to `keep`, split by `side`
// (a subset of `keep`).
inline double reduced_negativity(const Matrix& rho, SiteMask keep, SiteMask side) {
  const std::vector<int> dims = full_dims();
  const Matrix red = partial_trace(rho, dims, keep);
  const std::vector<int> rdims = kept_dims(dims, keep);
  // Re-express `side` in the reduced factor numbering.
  SiteMask rmask = 0;
  int f = 0;
  for (int s = 0; s < 4; ++s) {
    if (!(keep & bit(s))) continue;
    if (side & bit(s)) rmask |= 1u << f;
    ++f;
  }
  return negativity(red, rdims, rmask);
}

// Pairwise negativity N_{a|b} after tracing out the other two sites.
inline double pair_negativity(const Matrix& rho, int a, int b) {
  return reduced_negativity(rho, bit(a) | bit(b), bit(a));
}

}  // namespace tetra
