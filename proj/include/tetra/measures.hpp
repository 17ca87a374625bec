#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tetra/negativity.hpp"

namespace tetra {

// Residuals in [-kResidualClamp, 0) are numerical noise on a validated
// inequality and are clamped to 0; anything below is a real violation.
inline constexpr double kResidualClamp = 1e-9;

inline constexpr double kEdgeThreshold = 1e-3;

namespace detail {

inline double clamp_residual(double r, const char* what) {
  if (r >= 0.0) return r;
  if (r >= -kResidualClamp) return 0.0;
  throw std::runtime_error(std::string("monogamy violation in ") + what + ": residual " +
                           std::to_string(r));
}

inline double geometric_mean(const std::vector<double>& xs) {
  double logsum = 0.0;
  for (double x : xs) {
    if (x <= 0.0) return 0.0;
    logsum += std::log(x);
  }
  return std::exp(logsum / static_cast<double>(xs.size()));
}

}  // namespace detail

// Geometric mean of all seven global bisection negativities.
inline double theta(const NegativityVector& nv) {
  return detail::geometric_mean({nv.values[0], nv.values[1], nv.values[2], nv.values[3], nv.values[4],
                                 nv.values[5], nv.values[6]});
}

struct TangleRecord {
  double one_tangle = 0.0;          // squared global negativity
  std::vector<double> two_tangles;  // squared reduced negativities
  double residual = 0.0;            // clamped
  double raw_residual = 0.0;
};

inline Bisection single_site_bisection(int site) {
  switch (site) {
    case kMu1: return Bisection::kMu1_Rest;
    case kS1: return Bisection::kS1_Rest;
    case kMu2: return Bisection::kMu2_Rest;
    case kS2: return Bisection::kS2_Rest;
  }
  throw std::invalid_argument("single_site_bisection: bad site");
}

// delta(q) = N^2_{q|rest} - sum_j N^2_{q|qj}
inline TangleRecord delta(const Matrix& rho, int center, const NegativityVector& nv) {
  TangleRecord r;
  const double n1 = nv[single_site_bisection(center)];
  r.one_tangle = n1 * n1;
  double s = 0.0;
  for (int other = 0; other < 4; ++other) {
    if (other == center) continue;
    const double n2 = pair_negativity(rho, center, other);
    r.two_tangles.push_back(n2 * n2);
    s += n2 * n2;
  }
  r.raw_residual = r.one_tangle - s;
  r.residual = detail::clamp_residual(r.raw_residual, "delta");
  return r;
}

inline TangleRecord delta(const Matrix& rho, int center) {
  return delta(rho, center, global_bisections(rho));
}

inline Bisection pair_bisection(int a, int b) {
  const SiteMask m = bit(a) | bit(b);
  if (m == (bit(kMu1) | bit(kMu2)) || m == (bit(kS1) | bit(kS2))) return Bisection::kMu1Mu2_S1S2;
  if (m == (bit(kMu1) | bit(kS1)) || m == (bit(kMu2) | bit(kS2))) return Bisection::kMu1S1_Mu2S2;
  if (m == (bit(kMu1) | bit(kS2)) || m == (bit(kMu2) | bit(kS1))) return Bisection::kMu1S2_Mu2S1;
  throw std::invalid_argument("pair_bisection: bad pair");
}

// pi(q1 q2) = N^2_{q1q2|q3q4} - N^2_{q1q2|q3} - N^2_{q1q2|q4}
inline TangleRecord pi_residual(const Matrix& rho, int a, int b, const NegativityVector& nv) {
  TangleRecord r;
  const double n1 = nv[pair_bisection(a, b)];
  r.one_tangle = n1 * n1;
  const SiteMask pair = bit(a) | bit(b);
  double s = 0.0;
  for (int other = 0; other < 4; ++other) {
    if (pair & bit(other)) continue;
    const double n2 = reduced_negativity(rho, pair | bit(other), pair);
    r.two_tangles.push_back(n2 * n2);
    s += n2 * n2;
  }
  r.raw_residual = r.one_tangle - s;
  r.residual = detail::clamp_residual(r.raw_residual, "pi");
  return r;
}

inline TangleRecord pi_residual(const Matrix& rho, int a, int b) {
  return pi_residual(rho, a, b, global_bisections(rho));
}

// nu = {sqrt[delta(mu1) delta(mu2) delta(S1) delta(S2)]
//       sqrt[pi(mu1mu2) pi(mu1S1) pi(mu1S2) pi(S1S2)]}^{1/8},
// i.e. the 16th root of the eight-factor product.
inline double nu(const Matrix& rho, const NegativityVector& nv) {
  const double g = detail::geometric_mean({
      delta(rho, kMu1, nv).residual,
      delta(rho, kMu2, nv).residual,
      delta(rho, kS1, nv).residual,
      delta(rho, kS2, nv).residual,
      pi_residual(rho, kMu1, kMu2, nv).residual,
      pi_residual(rho, kMu1, kS1, nv).residual,
      pi_residual(rho, kMu1, kS2, nv).residual,
      pi_residual(rho, kS1, kS2, nv).residual,
  });
  return std::sqrt(g);
}

inline double nu(const Matrix& rho) { return nu(rho, global_bisections(rho)); }

// Six trisections, each the geometric mean of its three bisection factors.
enum class Trisection : int {
  kMu1_Mu2_S1S2 = 0,
  kMu1_Mu2S1_S2 = 1,
  kMu1_Mu2S2_S1 = 2,
  kMu1Mu2_S1_S2 = 3,
  kMu1S1_Mu2_S2 = 4,
  kMu1S2_Mu2_S1 = 5,
};

inline constexpr int kNumTrisections = 6;

inline std::string trisection_name(Trisection t) {
  switch (t) {
    case Trisection::kMu1_Mu2_S1S2: return "mu1|mu2|S1S2";
    case Trisection::kMu1_Mu2S1_S2: return "mu1|mu2S1|S2";
    case Trisection::kMu1_Mu2S2_S1: return "mu1|mu2S2|S1";
    case Trisection::kMu1Mu2_S1_S2: return "mu1mu2|S1|S2";
    case Trisection::kMu1S1_Mu2_S2: return "mu1S1|mu2|S2";
    case Trisection::kMu1S2_Mu2_S1: return "mu1S2|mu2|S1";
  }
  return "?";
}

inline double trisection_negativity(const NegativityVector& nv, Trisection t) {
  using B = Bisection;
  switch (t) {
    case Trisection::kMu1_Mu2_S1S2:
      return detail::geometric_mean({nv[B::kMu1_Rest], nv[B::kMu2_Rest], nv[B::kMu1Mu2_S1S2]});
    case Trisection::kMu1_Mu2S1_S2:
      return detail::geometric_mean({nv[B::kMu1_Rest], nv[B::kMu1S2_Mu2S1], nv[B::kS2_Rest]});
    case Trisection::kMu1_Mu2S2_S1:
      return detail::geometric_mean({nv[B::kMu1_Rest], nv[B::kMu1S1_Mu2S2], nv[B::kS1_Rest]});
    case Trisection::kMu1Mu2_S1_S2:
      return detail::geometric_mean({nv[B::kMu1Mu2_S1S2], nv[B::kS1_Rest], nv[B::kS2_Rest]});
    case Trisection::kMu1S1_Mu2_S2:
      return detail::geometric_mean({nv[B::kMu1S1_Mu2S2], nv[B::kMu2_Rest], nv[B::kS2_Rest]});
    case Trisection::kMu1S2_Mu2_S1:
      return detail::geometric_mean({nv[B::kMu1S2_Mu2S1], nv[B::kMu2_Rest], nv[B::kS1_Rest]});
  }
  return 0.0;
}

// omega = geometric mean of the six trisection negativities.
inline double omega(const NegativityVector& nv) {
  std::vector<double> t;
  for (int i = 0; i < kNumTrisections; ++i)
    t.push_back(trisection_negativity(nv, static_cast<Trisection>(i)));
  return detail::geometric_mean(t);
}

// nu* = [delta(mu1) delta(mu2) delta(S1) delta(S2)]^{1/8}
// (fourth root of the square root of the product).
inline double nu_star(const Matrix& rho, const NegativityVector& nv) {
  double prod = 1.0;
  for (int q : {kMu1, kMu2, kS1, kS2}) {
    const double d = delta(rho, q, nv).residual;
    if (d <= 0.0) return 0.0;
    prod *= d;
  }
  return std::pow(prod, 1.0 / 8.0);
}

inline double nu_star(const Matrix& rho) { return nu_star(rho, global_bisections(rho)); }

struct MonogamyRecord {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack() const { return lhs - rhs; }
};

// The six one-tangle-vs-two-tangle inequalities reported per state.
inline std::vector<MonogamyRecord> monogamy_table(const Matrix& rho) {
  const NegativityVector nv = global_bisections(rho);
  std::vector<MonogamyRecord> rows;
  auto sum2 = [](const TangleRecord& t) {
    double s = 0.0;
    for (double x : t.two_tangles) s += x;
    return s;
  };
  const TangleRecord d_mu1 = delta(rho, kMu1, nv);
  rows.push_back({"N2(mu1|rest) >= N2(mu1|mu2)+N2(mu1|S1)+N2(mu1|S2)", d_mu1.one_tangle, sum2(d_mu1)});
  const TangleRecord d_s1 = delta(rho, kS1, nv);
  rows.push_back({"N2(S1|rest) >= N2(S1|mu1)+N2(S1|mu2)+N2(S1|S2)", d_s1.one_tangle, sum2(d_s1)});
  const TangleRecord p_mm = pi_residual(rho, kMu1, kMu2, nv);
  rows.push_back({"N2(mu1mu2|S1S2) >= N2(mu1mu2|S1)+N2(mu1mu2|S2)", p_mm.one_tangle, sum2(p_mm)});
  const TangleRecord p_11 = pi_residual(rho, kMu1, kS1, nv);
  rows.push_back({"N2(mu1S1|mu2S2) >= N2(mu1S1|mu2)+N2(mu1S1|S2)", p_11.one_tangle, sum2(p_11)});
  const TangleRecord p_12 = pi_residual(rho, kMu1, kS2, nv);
  rows.push_back({"N2(mu1S2|mu2S1) >= N2(mu1S2|mu2)+N2(mu1S2|S1)", p_12.one_tangle, sum2(p_12)});
  const TangleRecord p_ss = pi_residual(rho, kS1, kS2, nv);
  rows.push_back({"N2(S1S2|mu1mu2) >= N2(S1S2|mu1)+N2(S1S2|mu2)", p_ss.one_tangle, sum2(p_ss)});
  return rows;
}

struct EntanglementEdge {
  int a = 0, b = 0;
  double weight = 0.0;
  bool present = false;
};

// The six pairwise reduced negativities; an edge is present above 1e-3.
inline std::vector<EntanglementEdge> entanglement_graph(const Matrix& rho,
                                                        double threshold = kEdgeThreshold) {
  std::vector<EntanglementEdge> edges;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      EntanglementEdge e{a, b, pair_negativity(rho, a, b), false};
      e.present = e.weight > threshold;
      edges.push_back(e);
    }
  return edges;
}

struct GenuineReport {
  NegativityVector bisections;
  std::array<double, kNumTrisections> trisections{};
  std::array<double, 4> delta_residuals{};
  std::array<double, 4> pi_residuals{};  // pairs mu1mu2, mu1S1, mu1S2, S1S2
  double theta = 0.0, nu = 0.0, omega = 0.0, nu_star = 0.0;
};

inline GenuineReport genuine_report(const Matrix& rho) {
  GenuineReport r;
  r.bisections = global_bisections(rho);
  for (int i = 0; i < kNumTrisections; ++i)
    r.trisections[i] = trisection_negativity(r.bisections, static_cast<Trisection>(i));
  const std::array<int, 4> centers{kMu1, kMu2, kS1, kS2};
  for (int i = 0; i < 4; ++i) r.delta_residuals[i] = delta(rho, centers[i], r.bisections).residual;
  const std::array<std::pair<int, int>, 4> pairs{{{kMu1, kMu2}, {kMu1, kS1}, {kMu1, kS2}, {kS1, kS2}}};
  for (int i = 0; i < 4; ++i)
    r.pi_residuals[i] = pi_residual(rho, pairs[i].first, pairs[i].second, r.bisections).residual;
  r.theta = theta(r.bisections);
  double nprod = 1.0;
  bool nzero = false;
  for (double d : r.delta_residuals) {
    if (d <= 0.0) nzero = true;
    nprod *= d;
  }
  double nsprod = nprod;
  for (double p : r.pi_residuals) {
    if (p <= 0.0) nzero = true;
    nprod *= p;
  }
  r.nu = nzero ? 0.0 : std::pow(nprod, 1.0 / 16.0);
  bool nszero = false;
  for (double d : r.delta_residuals)
    if (d <= 0.0) nszero = true;
  r.nu_star = nszero ? 0.0 : std::pow(nsprod, 1.0 / 8.0);
  r.omega = omega(r.bisections);
  return r;
}

}  // namespace tetra
