#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "tetra/density.hpp"
#include "tetra/jacobi.hpp"
#include "tetra/measures.hpp"
#include "tetra/model.hpp"

using namespace tetra;
using enum tetra::Bisection;

namespace {

Matrix ground_rho(double J1, double h) {
  return ground_state_density_matrix(ground_state_manifold({1.0, J1, h}));
}

}  // namespace

TEST_CASE("genuine measures at the two reference ground states") {
  {
    const GenuineReport r = genuine_report(ground_rho(0.5, 0.1));
    CHECK(r.theta == doctest::Approx(0.884).epsilon(2e-3));
    CHECK(r.nu == doctest::Approx(0.801).epsilon(2e-3));
    CHECK(r.omega == doctest::Approx(0.841).epsilon(2e-3));
    CHECK(r.nu_star == doctest::Approx(0.5907).epsilon(2e-3));
  }
  {
    const GenuineReport r = genuine_report(ground_rho(2.0, 0.5));
    CHECK(r.theta == doctest::Approx(0.939).epsilon(2e-3));
    CHECK(r.nu == doctest::Approx(0.843).epsilon(2e-3));
    CHECK(r.omega == doctest::Approx(0.882).epsilon(2e-3));
    CHECK(r.nu_star > 0.0);
  }
}

TEST_CASE("theta is the geometric mean of the seven bisections") {
  const Matrix rho = ground_rho(2.0, 0.5);
  const NegativityVector nv = global_bisections(rho);
  double prod = 1.0;
  for (double v : nv.values) prod *= v;
  CHECK(theta(nv) == doctest::Approx(std::pow(prod, 1.0 / 7.0)).epsilon(1e-12));
  NegativityVector z = nv;
  z[kMu1S1_Mu2S2] = 0.0;
  CHECK(theta(z) == 0.0);
}

TEST_CASE("trisection negativities expand into their bisection factors") {
  const NegativityVector nv = global_bisections(ground_rho(2.0, 0.5));
  auto gm3 = [](double a, double b, double c) { return std::cbrt(a * b * c); };
  using T = Trisection;
  CHECK(trisection_negativity(nv, T::kMu1_Mu2_S1S2) ==
        doctest::Approx(gm3(nv[kMu1_Rest], nv[kMu2_Rest], nv[kMu1Mu2_S1S2])).epsilon(1e-12));
  CHECK(trisection_negativity(nv, T::kMu1_Mu2S1_S2) ==
        doctest::Approx(gm3(nv[kMu1_Rest], nv[kMu1S2_Mu2S1], nv[kS2_Rest])).epsilon(1e-12));
  CHECK(trisection_negativity(nv, T::kMu1_Mu2S2_S1) ==
        doctest::Approx(gm3(nv[kMu1_Rest], nv[kMu1S1_Mu2S2], nv[kS1_Rest])).epsilon(1e-12));
  CHECK(trisection_negativity(nv, T::kMu1Mu2_S1_S2) ==
        doctest::Approx(gm3(nv[kMu1Mu2_S1S2], nv[kS1_Rest], nv[kS2_Rest])).epsilon(1e-12));
  CHECK(trisection_negativity(nv, T::kMu1S1_Mu2_S2) ==
        doctest::Approx(gm3(nv[kMu1S1_Mu2S2], nv[kMu2_Rest], nv[kS2_Rest])).epsilon(1e-12));
  CHECK(trisection_negativity(nv, T::kMu1S2_Mu2_S1) ==
        doctest::Approx(gm3(nv[kMu1S2_Mu2S1], nv[kMu2_Rest], nv[kS1_Rest])).epsilon(1e-12));
  double prod = 1.0;
  for (int i = 0; i < kNumTrisections; ++i) prod *= trisection_negativity(nv, static_cast<T>(i));
  CHECK(omega(nv) == doctest::Approx(std::pow(prod, 1.0 / 6.0)).epsilon(1e-12));
  CHECK(trisection_name(T::kMu1_Mu2_S1S2) == "mu1|mu2|S1S2");
  CHECK(trisection_name(T::kMu1S2_Mu2_S1) == "mu1S2|mu2|S1");
}

TEST_CASE("monogamy table matches the tabulated ground-state values") {
  struct StateCol {
    double J1, h;
    double rows[6][2];  // {lhs, rhs} for the six inequalities
  };
  const std::vector<StateCol> cols = {
      {0.5, 0.1, {{0.250, 0.111}, {1.000, 0.123}, {2.199, 0.259}, {0.250, 0.111}, {5.189, 0.979}, {2.199, 0.484}}},
      {2.0, 0.5, {{0.250, 0.077}, {1.000, 0.299}, {1.322, 0.104}, {2.250, 0.507}, {2.250, 0.344}, {1.322, 0.222}}},
      {0.5, 0.8, {{0.222, 0.222}, {0.222, 0.222}, {1.924, 0.444}, {0.000, 0.000}, {1.924, 0.444}, {1.924, 0.444}}},
      {2.0, 3.0, {{0.222, 0.044}, {0.764, 0.124}, {0.958, 0.156}, {0.986, 0.319}, {1.208, 0.299}, {0.958, 0.185}}},
      {0.5, 2.0, {{0.056, 0.009}, {0.056, 0.009}, {0.111, 0.056}, {0.000, 0.000}, {0.111, 0.043}, {0.111, 0.030}}},
      {2.0, 5.0, {{0.139, 0.019}, {0.222, 0.059}, {0.222, 0.085}, {0.250, 0.139}, {0.250, 0.139}, {0.222, 0.135}}},
      {0.5, 3.0, {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}}},
  };
  for (const StateCol& c : cols) {
    CAPTURE(c.J1);
    CAPTURE(c.h);
    const auto table = monogamy_table(ground_rho(c.J1, c.h));
    REQUIRE(table.size() == 6);
    for (int r = 0; r < 6; ++r) {
      CAPTURE(r);
      CHECK(std::fabs(table[r].lhs - c.rows[r][0]) <= 2e-3);
      CHECK(std::fabs(table[r].rhs - c.rows[r][1]) <= 2e-3);
      CHECK(table[r].slack() >= -kResidualClamp);
    }
  }
}

TEST_CASE("monogamy holds for random thermal states") {
  std::mt19937 rng(91);
  std::uniform_real_distribution<double> dj(-2.0, 2.0), db(0.1, 5.0);
  for (int t = 0; t < 15; ++t) {
    const ModelParams p{dj(rng), dj(rng), dj(rng)};
    const Matrix rho = thermal_density_matrix(sym_eigen(build_hamiltonian(p)), {db(rng)});
    for (const MonogamyRecord& row : monogamy_table(rho)) {
      CAPTURE(row.id);
      CHECK(row.slack() >= -kResidualClamp);
    }
    for (int q : {kMu1, kS1, kMu2, kS2}) CHECK(delta(rho, q).residual >= 0.0);
  }
}

TEST_CASE("residual clamp behavior") {
  CHECK(detail::clamp_residual(0.5, "t") == 0.5);
  CHECK(detail::clamp_residual(-0.5e-9, "t") == 0.0);
  CHECK_THROWS_AS(detail::clamp_residual(-1e-6, "t"), std::runtime_error);
}

TEST_CASE("nu definitions agree between the direct and report paths") {
  for (const auto& [J1, h] : std::vector<std::pair<double, double>>{{0.5, 0.1}, {2.0, 0.5}, {1.0, 1.5}}) {
    const Matrix rho = ground_rho(J1, h);
    const NegativityVector nv = global_bisections(rho);
    const GenuineReport r = genuine_report(rho);
    CHECK(nu(rho, nv) == doctest::Approx(r.nu).epsilon(1e-10));
    CHECK(nu_star(rho, nv) == doctest::Approx(r.nu_star).epsilon(1e-10));
    CHECK(theta(nv) == doctest::Approx(r.theta).epsilon(1e-12));
    CHECK(omega(nv) == doctest::Approx(r.omega).epsilon(1e-12));
    // nu is the 16th root of the eight-factor product.
    double prod = 1.0;
    for (double d : r.delta_residuals) prod *= d;
    for (double p : r.pi_residuals) prod *= p;
    if (prod > 0.0) CHECK(r.nu == doctest::Approx(std::pow(prod, 1.0 / 16.0)).epsilon(1e-10));
    // nu* uses only the single-site residuals, with the 8th root.
    double dp = 1.0;
    for (double d : r.delta_residuals) dp *= d;
    if (dp > 0.0) CHECK(r.nu_star == doctest::Approx(std::pow(dp, 1.0 / 8.0)).epsilon(1e-10));
  }
}

TEST_CASE("doublet phase: genuine multipartite measures vanish, nu* survives") {
  const GenuineReport r = genuine_report(ground_rho(0.5, 2.0));
  CHECK(r.theta == 0.0);
  CHECK(r.nu == 0.0);
  CHECK(r.omega == 0.0);
  CHECK(r.nu_star > 0.0);
  // The vanishing traces back to the separable mu1S1|mu2S2 bisection.
  CHECK(r.bisections[kMu1S1_Mu2S2] == 0.0);
}

TEST_CASE("measures vanish at infinite temperature and saturation") {
  const Matrix hot = thermal_density_matrix(sym_eigen(build_hamiltonian({1, 0.5, 0.2})), {0.0});
  for (const Matrix& rho : {hot, ground_rho(0.5, 10.0)}) {
    const GenuineReport r = genuine_report(rho);
    CHECK(r.theta == 0.0);
    CHECK(r.nu == 0.0);
    CHECK(r.omega == 0.0);
    CHECK(r.nu_star == 0.0);
  }
}

TEST_CASE("entanglement graph reflects the pairwise negativities") {
  const Matrix rho = ground_rho(0.5, 0.1);
  const auto edges = entanglement_graph(rho);
  REQUIRE(edges.size() == 6);
  for (const EntanglementEdge& e : edges) {
    CHECK(e.weight == doctest::Approx(pair_negativity(rho, e.a, e.b)).epsilon(1e-12));
    CHECK(e.present == (e.weight > kEdgeThreshold));
  }
  // Intra-dimer bonds dominate the singlet-product phase.
  auto find = [&](int a, int b) {
    for (const auto& e : edges)
      if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e;
    throw std::logic_error("edge not found");
  };
  CHECK(find(kMu1, kS1).present);
  CHECK(find(kMu2, kS2).present);
  CHECK(find(kS1, kS2).present);
  // High threshold removes every edge.
  for (const auto& e : entanglement_graph(rho, 10.0)) CHECK_FALSE(e.present);
}

TEST_CASE("geometric mean helper") {
  CHECK(detail::geometric_mean({2.0, 8.0}) == doctest::Approx(4.0));
  CHECK(detail::geometric_mean({1.0, 0.0, 5.0}) == 0.0);
}
