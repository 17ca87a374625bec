#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tetra/matrix.hpp"
#include "tetra/model.hpp"
#include "tetra/negativity.hpp"

// Closed-form thermal density-matrix elements for the tetramer, the 36x36
// assembly, and the block-diagonal partial transposes for the five distinct
// bisections.  Serves as an independent oracle against the brute-force
// diagonalization backend.

namespace tetra {
namespace appendix {

namespace detail {

// Boltzmann exponents appearing in the element formulas, as multiples of
// (J, J1); the shared -J1/4 offset and the field term are applied separately.
inline constexpr int kNumSymbols = 8;
inline constexpr double kSymJ[kNumSymbols] = {1, 1, 1, 1, -0.5, -0.5, -2, -2};
inline constexpr double kSymJ1[kNumSymbols] = {-0.5, 2.5, -2.5, -3.5, 1, -1, 0.5, -0.5};

struct Term {
  double c;
  int sym;  // 0-based index into the symbol tables
};

struct Primitive {
  double scale;
  double a;  // field power: the element carries exp(a * beta * h)
  std::vector<Term> terms;
};

struct CrossRef {
  double scale;
  int i, j;
  bool flip_h;
};

using Key = std::pair<int, int>;

inline const std::map<Key, Primitive>& primitives() {
  static const double R2 = std::sqrt(2.0);
  // Terms reference symbols A1..A8 as 0-based indices.
  static const std::map<Key, Primitive> table = {
      {{1, 1}, {1.0, 3, {{1, 1}}}},
      {{2, 2}, {1.0 / 3, 2, {{1, 0}, {1, 1}, {1, 4}}}},
      {{3, 3}, {1.0 / 30, 1, {{5, 0}, {2, 1}, {3, 2}, {5, 4}, {15, 5}}}},
      {{4, 4}, {1.0 / 6, 2, {{1, 0}, {1, 1}, {4, 4}}}},
      {{5, 5}, {1.0 / 60, 1, {{20, 0}, {8, 1}, {12, 2}, {5, 4}, {15, 5}}}},
      {{6, 6}, {1.0 / 20, 0, {{5, 0}, {1, 1}, {9, 2}, {5, 3}}}},
      {{8, 8}, {1.0 / 45, 1, {{12, 1}, {8, 2}, {5, 6}, {15, 4}, {5, 5}}}},
      {{9, 9}, {1.0 / 90, 0, {{5, 0}, {9, 1}, {1, 2}, {5, 3}, {10, 6}, {10, 7}, {25, 4}, {25, 5}}}},
      {{10, 10}, {1.0 / 180, 1, {{24, 1}, {16, 2}, {40, 6}, {75, 4}, {25, 5}}}},
      {{11, 11}, {1.0 / 90, 0, {{10, 0}, {18, 1}, {2, 2}, {10, 3}, {5, 6}, {5, 7}, {20, 4}, {20, 5}}}},
      {{21, 21}, {1.0 / 180, 0, {{5, 0}, {9, 1}, {1, 2}, {5, 3}, {40, 6}, {40, 7}, {40, 4}, {40, 5}}}},
      {{22, 22}, {1.0 / 90, 1, {{6, 1}, {4, 2}, {40, 6}, {30, 4}, {10, 5}}}},
      {{2, 4}, {R2 / 6, 2, {{1, 0}, {1, 1}, {-2, 4}}}},
      {{2, 7}, {-1.0 / 3, 2, {{1, 0}, {-1, 1}}}},
      {{3, 5}, {R2 / 60, 1, {{10, 0}, {4, 1}, {6, 2}, {-5, 4}, {-15, 5}}}},
      {{3, 8}, {1.0 / 30, 1, {{4, 1}, {-4, 2}, {5, 4}, {-5, 5}}}},
      {{3, 10}, {R2 / 30, 1, {{2, 1}, {-2, 2}, {-5, 4}, {5, 5}}}},
      {{3, 13}, {-1.0 / 30, 1, {{5, 0}, {-2, 1}, {-3, 2}}}},
      {{5, 8}, {R2 / 60, 1, {{8, 1}, {-8, 2}, {-5, 4}, {5, 5}}}},
      {{6, 9}, {R2 / 60, 0, {{5, 0}, {3, 1}, {-3, 2}, {-5, 3}}}},
      {{6, 14}, {-R2 / 60, 0, {{5, 0}, {-3, 1}, {3, 2}, {-5, 3}}}},
      {{6, 31}, {-1.0 / 20, 0, {{5, 0}, {-1, 1}, {-9, 2}, {5, 3}}}},
      {{8, 10}, {R2 / 180, 1, {{24, 1}, {16, 2}, {-20, 6}, {-15, 4}, {-5, 5}}}},
      {{8, 22}, {1.0 / 90, 1, {{12, 1}, {8, 2}, {20, 6}, {-30, 4}, {-10, 5}}}},
      {{9, 11}, {R2 / 90, 0, {{5, 0}, {9, 1}, {1, 2}, {5, 3}, {-5, 6}, {-5, 7}, {-5, 4}, {-5, 5}}}},
      {{9, 14}, {-1.0 / 90, 0, {{5, 0}, {-9, 1}, {-1, 2}, {5, 3}, {-10, 6}, {10, 7}, {-20, 4}, {20, 5}}}},
      {{9, 16}, {-R2 / 180, 0, {{5, 0}, {-9, 1}, {-1, 2}, {5, 3}, {20, 6}, {-20, 7}, {10, 4}, {-10, 5}}}},
      {{9, 21}, {R2 / 180, 0, {{5, 0}, {9, 1}, {1, 2}, {5, 3}, {-20, 6}, {-20, 7}, {10, 4}, {10, 5}}}},
      {{9, 23}, {1.0 / 90, 0, {{5, 0}, {9, 1}, {1, 2}, {5, 3}, {10, 6}, {10, 7}, {-20, 4}, {-20, 5}}}},
      {{9, 26}, {-R2 / 90, 0, {{5, 0}, {-9, 1}, {-1, 2}, {5, 3}, {5, 6}, {-5, 7}, {-5, 4}, {5, 5}}}},
      {{9, 28}, {-1.0 / 90, 0, {{5, 0}, {-9, 1}, {-1, 2}, {5, 3}, {-10, 6}, {10, 7}, {25, 4}, {-25, 5}}}},
      {{10, 22}, {R2 / 180, 1, {{12, 1}, {8, 2}, {-40, 6}, {15, 4}, {5, 5}}}},
      {{11, 26}, {-1.0 / 90, 0, {{10, 0}, {-18, 1}, {-2, 2}, {10, 3}, {-5, 6}, {5, 7}, {20, 4}, {-20, 5}}}},
      {{16, 21}, {-1.0 / 180, 0, {{5, 0}, {-9, 1}, {-1, 2}, {5, 3}, {-40, 6}, {40, 7}, {40, 4}, {-40, 5}}}},
  };
  return table;
}

inline const std::map<Key, CrossRef>& cross_refs() {
  static const double H = std::sqrt(2.0) / 2.0;
  static const double R2 = std::sqrt(2.0);
  static const std::map<Key, CrossRef> table = {
      // diagonal identities
      {{7, 7}, {1, 2, 2, false}},
      {{12, 12}, {1, 25, 25, true}},
      {{13, 13}, {1, 3, 3, false}},
      {{14, 14}, {1, 9, 9, false}},
      {{15, 15}, {1, 22, 22, true}},
      {{16, 16}, {1, 21, 21, true}},
      {{17, 17}, {1, 20, 20, true}},
      {{18, 18}, {1, 19, 19, true}},
      {{19, 19}, {1, 4, 4, false}},
      {{20, 20}, {1, 10, 10, false}},
      {{23, 23}, {1, 14, 14, true}},
      {{24, 24}, {1, 13, 13, true}},
      {{25, 25}, {1, 5, 5, false}},
      {{26, 26}, {1, 11, 11, true}},
      {{27, 27}, {1, 10, 10, true}},
      {{28, 28}, {1, 9, 9, true}},
      {{29, 29}, {1, 8, 8, true}},
      {{30, 30}, {1, 7, 7, true}},
      {{31, 31}, {1, 6, 6, true}},
      {{32, 32}, {1, 5, 5, true}},
      {{33, 33}, {1, 4, 4, true}},
      {{34, 34}, {1, 3, 3, true}},
      {{35, 35}, {1, 2, 2, true}},
      {{36, 36}, {1, 1, 1, true}},
      // off-diagonal identities
      {{2, 19}, {H, 2, 7, false}},
      {{3, 20}, {H, 3, 8, false}},
      {{3, 22}, {H, 3, 10, false}},
      {{3, 25}, {R2, 3, 13, false}},
      {{4, 7}, {1, 2, 19, false}},
      {{4, 19}, {0.5, 2, 7, false}},
      {{5, 10}, {1, 3, 8, false}},
      {{5, 13}, {1, 3, 25, false}},
      {{5, 20}, {H, 5, 8, false}},
      {{5, 22}, {1, 3, 20, false}},
      {{5, 25}, {2, 3, 13, false}},
      {{6, 11}, {R2, 6, 9, false}},
      {{6, 16}, {H, 6, 14, false}},
      {{6, 21}, {H, 6, 9, false}},
      {{6, 23}, {1, 6, 9, false}},
      {{6, 26}, {R2, 6, 14, false}},
      {{6, 28}, {1, 6, 14, false}},
      {{7, 19}, {1, 2, 4, false}},
      {{8, 13}, {1, 3, 8, false}},
      {{8, 20}, {1, 8, 10, false}},
      {{8, 25}, {1, 5, 8, false}},
      {{9, 31}, {1, 6, 28, true}},
      {{10, 13}, {1, 3, 20, false}},
      {{10, 20}, {1, 8, 22, false}},
      {{10, 25}, {1, 5, 20, false}},
      {{11, 14}, {1, 9, 26, false}},
      {{11, 16}, {1, 9, 14, false}},
      {{11, 21}, {1, 9, 23, false}},
      {{11, 23}, {1, 9, 11, false}},
      {{11, 28}, {1, 9, 26, true}},
      {{11, 31}, {1, 6, 26, true}},
      {{12, 15}, {1, 22, 25, true}},
      {{12, 17}, {1, 20, 25, true}},
      {{12, 24}, {1, 13, 25, true}},
      {{12, 27}, {1, 10, 25, true}},
      {{12, 29}, {1, 8, 25, true}},
      {{12, 32}, {1, 5, 25, true}},
      {{12, 34}, {1, 3, 25, true}},
      {{13, 20}, {1, 3, 10, false}},
      {{13, 22}, {1, 3, 22, false}},
      {{13, 25}, {1, 3, 5, false}},
      {{14, 16}, {1, 9, 21, false}},
      {{14, 21}, {1, 9, 16, false}},
      {{14, 23}, {1, 9, 28, false}},
      {{14, 26}, {1, 11, 23, true}},
      {{14, 28}, {1, 9, 23, true}},
      {{14, 31}, {1, 6, 23, true}},
      {{15, 17}, {1, 20, 22, true}},
      {{15, 24}, {1, 13, 22, true}},
      {{15, 27}, {1, 10, 22, true}},
      {{15, 29}, {1, 8, 22, true}},
      {{15, 32}, {1, 5, 22, true}},
      {{15, 34}, {1, 3, 22, true}},
      {{16, 23}, {1, 14, 21, true}},
      {{16, 26}, {1, 11, 21, true}},
      {{16, 28}, {1, 9, 21, true}},
      {{16, 31}, {1, 6, 21, true}},
      {{17, 24}, {1, 13, 20, true}},
      {{17, 27}, {1, 10, 20, true}},
      {{17, 29}, {1, 8, 20, true}},
      {{17, 32}, {1, 5, 20, true}},
      {{17, 34}, {1, 3, 20, true}},
      {{18, 30}, {1, 7, 19, true}},
      {{18, 33}, {1, 4, 19, true}},
      {{18, 35}, {1, 2, 19, true}},
      {{20, 22}, {1, 10, 22, false}},
      {{20, 25}, {1, 3, 8, false}},
      {{21, 23}, {1, 14, 16, true}},
      {{21, 26}, {1, 11, 16, true}},
      {{21, 28}, {1, 9, 16, true}},
      {{21, 31}, {1, 6, 16, true}},
      {{22, 25}, {1, 3, 20, false}},
      {{23, 26}, {1, 11, 14, true}},
      {{23, 28}, {1, 9, 14, true}},
      {{23, 31}, {1, 6, 14, true}},
      {{24, 27}, {1, 10, 13, true}},
      {{24, 29}, {1, 8, 13, true}},
      {{24, 32}, {1, 5, 13, true}},
      {{24, 34}, {1, 3, 13, true}},
      {{26, 28}, {1, 9, 11, true}},
      {{26, 31}, {1, 6, 11, true}},
      {{27, 29}, {1, 8, 10, true}},
      {{27, 32}, {1, 5, 10, true}},
      {{27, 34}, {1, 3, 10, true}},
      {{28, 31}, {1, 6, 9, true}},
      {{29, 32}, {1, 5, 8, true}},
      {{29, 34}, {1, 3, 8, true}},
      {{30, 33}, {1, 4, 7, true}},
      {{30, 35}, {1, 2, 7, true}},
      {{32, 34}, {1, 3, 5, true}},
      {{33, 35}, {1, 2, 4, true}},
  };
  return table;
}

// Unnormalized element: numerator of rho_{i,j}(h) with every Boltzmann factor
// shifted by eps0 (the true ground energy) for overflow safety.
inline double element_raw(int i, int j, double h, double beta, double J, double J1, double eps0) {
  if (i > j) std::swap(i, j);
  const Key k{i, j};
  if (auto it = primitives().find(k); it != primitives().end()) {
    const Primitive& p = it->second;
    double s = 0.0;
    for (const Term& t : p.terms) {
      // True eigenvalue behind this term: E = cJ*J + cJ1*J1 - J1/4 - a*h.
      const double e = kSymJ[t.sym] * J + kSymJ1[t.sym] * J1 - 0.25 * J1 - p.a * h;
      s += t.c * std::exp(-beta * (e - eps0));
    }
    return p.scale * s;
  }
  if (auto it = cross_refs().find(k); it != cross_refs().end()) {
    const CrossRef& r = it->second;
    return r.scale * element_raw(r.i, r.j, r.flip_h ? -h : h, beta, J, J1, eps0);
  }
  // Global spin-flip symmetry: rho_{i,j}(h) = rho_{37-i,37-j}(-h).
  const Key fk{37 - j, 37 - i};
  if (primitives().count(fk) || cross_refs().count(fk))
    return element_raw(37 - j, 37 - i, -h, beta, J, J1, eps0);
  return 0.0;
}

// Shifted statistical sum matching element_raw's eps0 convention.
inline double z_shifted(double beta, double J, double J1, double h, double eps0) {
  double z = 0.0;
  for (double e : analytic_spectrum({J, J1, h})) z += std::exp(-beta * (e - eps0));
  return z;
}

inline double ground_energy(double J, double J1, double h) {
  return analytic_spectrum({J, J1, h}).front();
}

}  // namespace detail

inline double analytic_partition_function(double beta, double J, double J1, double h) {
  double z = 0.0;
  for (double e : analytic_spectrum({J, J1, h})) z += std::exp(-beta * e);
  return z;
}

// Normalized density-matrix element rho_{i,j}(h), 1-based indices.
inline double element(int i, int j, double h, double beta, double J, double J1) {
  if (i < 1 || i > 36 || j < 1 || j > 36) throw std::invalid_argument("element: index out of range");
  if (beta <= 0.0) throw std::invalid_argument("element: beta must be positive");
  const double eps0 = detail::ground_energy(J, J1, h);
  return detail::element_raw(i, j, h, beta, J, J1, eps0) / detail::z_shifted(beta, J, J1, h, eps0);
}

struct AssembledState {
  Matrix full;  // 36x36
  Matrix block_a() const {
    Matrix a(18, 18);
    for (int i = 0; i < 18; ++i)
      for (int j = 0; j < 18; ++j) a(i, j) = full(i, j);
    return a;
  }
  Matrix block_b() const {
    Matrix b(18, 18);
    for (int i = 0; i < 18; ++i)
      for (int j = 0; j < 18; ++j) b(i, j) = full(i, 18 + j);
    return b;
  }
};

inline AssembledState assemble_density(double h, double beta, double J, double J1) {
  if (beta <= 0.0) throw std::invalid_argument("assemble_density: beta must be positive");
  const double eps0 = detail::ground_energy(J, J1, h);
  const double z = detail::z_shifted(beta, J, J1, h, eps0);
  AssembledState st;
  st.full = Matrix(36, 36);
  for (int i = 1; i <= 36; ++i)
    for (int j = i; j <= 36; ++j) {
      const double v = detail::element_raw(i, j, h, beta, J, J1, eps0) / z;
      st.full(i - 1, j - 1) = v;
      st.full(j - 1, i - 1) = v;
    }
  if (std::fabs(st.full.trace() - 1.0) > 1e-8)
    throw std::runtime_error("assemble_density: trace deviates from 1");
  return st;
}

namespace detail {

struct SignedRef {
  int i, j;
  int hs;  // +1: evaluate at +h, -1: at -h
};

// Upper triangles (row r holds entries for columns r..n-1) of the PT blocks.
struct BlockWiring {
  Key q1;
  std::vector<std::vector<Key>> q2;         // 4x4, evaluated at +h and -h
  std::vector<std::vector<Key>> q3;         // 8x8, evaluated at +h and -h
  std::vector<std::vector<SignedRef>> q4;   // 10x10, per-entry field sign
};

inline const std::map<Bisection, BlockWiring>& wirings() {
  static const std::map<Bisection, BlockWiring> table = [] {
    std::map<Bisection, BlockWiring> w;

    w[Bisection::kMu1_Rest] = BlockWiring{
        {18, 18},
        {{{1, 1}, {2, 19}, {4, 19}, {7, 19}},
         {{20, 20}, {20, 22}, {20, 25}},
         {{22, 22}, {22, 25}},
         {{25, 25}}},
        {{{2, 2}, {2, 4}, {2, 7}, {3, 20}, {5, 20}, {8, 20}, {10, 20}, {13, 20}},
         {{4, 4}, {4, 7}, {3, 22}, {5, 22}, {8, 22}, {10, 22}, {13, 22}},
         {{7, 7}, {3, 25}, {5, 25}, {8, 25}, {10, 25}, {13, 25}},
         {{21, 21}, {21, 23}, {21, 26}, {21, 28}, {21, 31}},
         {{23, 23}, {23, 26}, {23, 28}, {23, 31}},
         {{26, 26}, {26, 28}, {26, 31}},
         {{28, 28}, {28, 31}},
         {{31, 31}}},
        {{{3, 3, -1}, {3, 5, -1}, {3, 8, -1}, {3, 10, -1}, {3, 13, -1},
          {6, 21, -1}, {9, 21, -1}, {11, 21, -1}, {14, 21, -1}, {16, 21, 1}},
         {{5, 5, -1}, {5, 8, -1}, {5, 10, -1}, {5, 13, -1}, {6, 23, -1},
          {9, 23, -1}, {11, 23, -1}, {14, 23, 1}, {14, 21, 1}},
         {{8, 8, -1}, {8, 10, -1}, {8, 13, -1}, {6, 26, -1}, {9, 26, -1},
          {11, 26, 1}, {11, 23, 1}, {11, 21, 1}},
         {{10, 10, -1}, {10, 13, -1}, {6, 28, -1}, {9, 28, 1}, {9, 26, 1}, {9, 23, 1}, {9, 21, 1}},
         {{13, 13, -1}, {6, 31, 1}, {6, 28, 1}, {6, 26, 1}, {6, 23, 1}, {6, 21, 1}},
         {{13, 13, 1}, {10, 13, 1}, {8, 13, 1}, {5, 13, 1}, {3, 13, 1}},
         {{10, 10, 1}, {8, 10, 1}, {5, 10, 1}, {3, 10, 1}},
         {{8, 8, 1}, {5, 8, 1}, {3, 8, 1}},
         {{5, 5, 1}, {3, 5, 1}},
         {{3, 3, 1}}}};

    w[Bisection::kS1_Rest] = BlockWiring{
        {13, 13},
        {{{6, 6}, {6, 21}, {6, 23}, {12, 24}},
         {{21, 21}, {21, 23}, {24, 27}},
         {{23, 23}, {24, 29}},
         {{30, 30}}},
        {{{1, 1}, {2, 7}, {4, 7}, {7, 19}, {3, 13}, {5, 13}, {13, 20}, {13, 22}},
         {{8, 8}, {8, 10}, {8, 25}, {9, 14}, {11, 14}, {14, 26}, {14, 28}},
         {{10, 10}, {10, 25}, {9, 16}, {11, 16}, {16, 26}, {16, 28}},
         {{25, 25}, {9, 31}, {11, 31}, {26, 31}, {28, 31}},
         {{15, 15}, {15, 17}, {15, 32}, {15, 34}},
         {{17, 17}, {17, 32}, {17, 34}},
         {{32, 32}, {32, 34}},
         {{34, 34}}},
        {{{2, 2, 1}, {2, 4, 1}, {2, 19, 1}, {3, 8, 1}, {5, 8, 1},
          {8, 20, 1}, {8, 22, 1}, {6, 14, 1}, {14, 21, 1}, {14, 23, 1}},
         {{4, 4, 1}, {4, 19, 1}, {3, 10, 1}, {5, 10, 1}, {10, 20, 1},
          {10, 22, 1}, {6, 16, 1}, {16, 21, 1}, {14, 21, -1}},
         {{19, 19, 1}, {3, 25, 1}, {5, 25, 1}, {20, 25, 1}, {22, 25, 1},
          {6, 31, 1}, {6, 16, -1}, {6, 14, -1}},
         {{9, 9, 1}, {9, 11, 1}, {9, 26, 1}, {9, 28, 1}, {22, 25, -1}, {10, 22, -1}, {8, 22, -1}},
         {{11, 11, 1}, {11, 26, 1}, {9, 26, -1}, {20, 25, -1}, {10, 20, -1}, {8, 20, -1}},
         {{11, 11, -1}, {9, 11, -1}, {5, 25, -1}, {5, 10, -1}, {5, 8, -1}},
         {{9, 9, -1}, {3, 25, -1}, {3, 10, -1}, {3, 8, -1}},
         {{19, 19, -1}, {4, 19, -1}, {2, 19, -1}},
         {{4, 4, -1}, {2, 4, -1}},
         {{2, 2, -1}}}};

    w[Bisection::kMu1Mu2_S1S2] = BlockWiring{
        {15, 15},
        {{{4, 4}, {4, 19}, {5, 22}, {10, 22}},
         {{19, 19}, {20, 22}, {22, 25}},
         {{23, 23}, {23, 28}},
         {{28, 28}}},
        {{{1, 1}, {2, 4}, {4, 7}, {2, 19}, {3, 22}, {7, 19}, {8, 22}, {13, 22}},
         {{5, 5}, {5, 10}, {5, 20}, {6, 23}, {10, 20}, {11, 23}, {16, 23}},
         {{10, 10}, {5, 25}, {6, 28}, {10, 25}, {11, 28}, {16, 28}},
         {{20, 20}, {21, 23}, {20, 25}, {23, 26}, {23, 31}},
         {{24, 24}, {21, 28}, {24, 29}, {24, 34}},
         {{25, 25}, {26, 28}, {28, 31}},
         {{29, 29}, {29, 34}},
         {{34, 34}}},
        {{{2, 2, 1}, {3, 5, 1}, {2, 7, 1}, {5, 8, 1}, {5, 13, 1},
          {3, 20, 1}, {8, 20, 1}, {9, 23, 1}, {13, 20, 1}, {14, 23, 1}},
         {{6, 6, 1}, {3, 10, 1}, {6, 11, 1}, {6, 16, 1}, {6, 21, 1},
          {11, 21, 1}, {12, 24, 1}, {16, 21, 1}, {13, 20, -1}},
         {{7, 7, 1}, {8, 10, 1}, {10, 13, 1}, {3, 25, 1}, {8, 25, 1},
          {9, 28, 1}, {12, 24, -1}, {9, 23, -1}},
         {{11, 11, 1}, {11, 16, 1}, {6, 26, 1}, {11, 26, 1}, {8, 25, -1}, {11, 21, -1}, {8, 20, -1}},
         {{16, 16, 1}, {6, 31, 1}, {6, 26, -1}, {3, 25, -1}, {6, 21, -1}, {3, 20, -1}},
         {{16, 16, -1}, {11, 16, -1}, {10, 13, -1}, {6, 16, -1}, {5, 13, -1}},
         {{11, 11, -1}, {8, 10, -1}, {6, 11, -1}, {5, 8, -1}},
         {{7, 7, -1}, {3, 10, -1}, {2, 7, -1}},
         {{6, 6, -1}, {3, 5, -1}},
         {{2, 2, -1}}}};

    w[Bisection::kMu1S1_Mu2S2] = BlockWiring{
        {6, 6},
        {{{3, 3}, {3, 5}, {6, 9}, {6, 21}},
         {{5, 5}, {6, 11}, {6, 23}},
         {{12, 12}, {12, 24}},
         {{24, 24}}},
        {{{2, 2}, {2, 4}, {3, 8}, {5, 8}, {6, 14}, {3, 20}, {5, 20}, {6, 26}},
         {{4, 4}, {3, 10}, {5, 10}, {6, 16}, {3, 22}, {5, 22}, {6, 28}},
         {{9, 9}, {9, 11}, {12, 15}, {9, 21}, {11, 21}, {12, 27}},
         {{11, 11}, {12, 17}, {9, 23}, {11, 23}, {12, 29}},
         {{18, 18}, {15, 24}, {17, 24}, {18, 30}},
         {{21, 21}, {21, 23}, {24, 27}},
         {{23, 23}, {24, 29}},
         {{30, 30}}},
        {{{1, 1, 1}, {2, 7, 1}, {4, 7, 1}, {3, 13, 1}, {5, 13, 1},
          {2, 19, 1}, {4, 19, 1}, {3, 25, 1}, {5, 25, 1}, {6, 31, 1}},
         {{8, 8, 1}, {8, 10, 1}, {9, 14, 1}, {11, 14, 1}, {8, 20, 1},
          {10, 20, 1}, {9, 26, 1}, {11, 26, 1}, {5, 25, -1}},
         {{10, 10, 1}, {9, 16, 1}, {11, 16, 1}, {8, 22, 1}, {10, 22, 1},
          {9, 28, 1}, {9, 26, -1}, {3, 25, -1}},
         {{15, 15, 1}, {15, 17, 1}, {14, 21, 1}, {16, 21, 1}, {10, 22, -1}, {10, 20, -1}, {4, 19, -1}},
         {{17, 17, 1}, {14, 23, 1}, {14, 21, -1}, {8, 22, -1}, {8, 20, -1}, {2, 19, -1}},
         {{17, 17, -1}, {15, 17, -1}, {11, 16, -1}, {11, 14, -1}, {5, 13, -1}},
         {{15, 15, -1}, {9, 16, -1}, {9, 14, -1}, {3, 13, -1}},
         {{10, 10, -1}, {8, 10, -1}, {4, 7, -1}},
         {{8, 8, -1}, {2, 7, -1}},
         {{1, 1, -1}}}};

    w[Bisection::kMu1S2_Mu2S1] = BlockWiring{
        {16, 16},
        {{{3, 3}, {3, 20}, {6, 21}, {9, 21}},
         {{20, 20}, {21, 23}, {21, 26}},
         {{24, 24}, {24, 27}},
         {{27, 27}}},
        {{{2, 2}, {3, 5}, {3, 8}, {2, 19}, {5, 20}, {8, 20}, {11, 21}, {14, 21}},
         {{6, 6}, {6, 9}, {3, 22}, {6, 23}, {9, 23}, {12, 24}, {15, 24}},
         {{9, 9}, {3, 25}, {6, 26}, {9, 26}, {12, 27}, {15, 27}},
         {{19, 19}, {20, 22}, {20, 25}, {21, 28}, {21, 31}},
         {{23, 23}, {23, 26}, {24, 29}, {24, 32}},
         {{26, 26}, {27, 29}, {27, 32}},
         {{30, 30}, {30, 33}},
         {{33, 33}}},
        {{{1, 1, 1}, {2, 4, 1}, {2, 7, 1}, {3, 10, 1}, {3, 13, 1},
          {4, 19, 1}, {7, 19, 1}, {10, 20, 1}, {13, 20, 1}, {16, 21, 1}},
         {{5, 5, 1}, {5, 8, 1}, {6, 11, 1}, {6, 14, 1}, {5, 22, 1},
          {8, 22, 1}, {11, 23, 1}, {14, 23, 1}, {13, 20, -1}},
         {{8, 8, 1}, {9, 11, 1}, {9, 14, 1}, {5, 25, 1}, {8, 25, 1},
          {11, 26, 1}, {11, 23, -1}, {10, 20, -1}},
         {{12, 12, 1}, {12, 15, 1}, {6, 28, 1}, {9, 28, 1}, {8, 25, -1}, {8, 22, -1}, {7, 19, -1}},
         {{15, 15, 1}, {6, 31, 1}, {6, 28, -1}, {5, 25, -1}, {5, 22, -1}, {4, 19, -1}},
         {{15, 15, -1}, {12, 15, -1}, {9, 14, -1}, {6, 14, -1}, {3, 13, -1}},
         {{12, 12, -1}, {9, 11, -1}, {6, 11, -1}, {3, 10, -1}},
         {{8, 8, -1}, {5, 8, -1}, {2, 7, -1}},
         {{5, 5, -1}, {2, 4, -1}},
         {{1, 1, -1}}}};

    return w;
  }();
  return table;
}

inline Matrix build_block(const std::vector<std::vector<Key>>& tri, double h, double beta, double J,
                          double J1, double eps0, double z) {
  const int n = static_cast<int>(tri.size());
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c) {
      const Key& k = tri[r][c - r];
      const double v = element_raw(k.first, k.second, h, beta, J, J1, eps0) / z;
      m(r, c) = v;
      m(c, r) = v;
    }
  return m;
}

inline Matrix build_signed_block(const std::vector<std::vector<SignedRef>>& tri, double h, double beta,
                                 double J, double J1, double eps0, double z) {
  const int n = static_cast<int>(tri.size());
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c) {
      const SignedRef& k = tri[r][c - r];
      const double v = element_raw(k.i, k.j, k.hs > 0 ? h : -h, beta, J, J1, eps0) / z;
      m(r, c) = v;
      m(c, r) = v;
    }
  return m;
}

}  // namespace detail

// Block-diagonal form of the partial transpose for one of the five distinct
// bisections: two 1x1, two 4x4, two 8x8 (at +h and -h) and one 10x10 block.
struct PTBlockSet {
  std::vector<Matrix> blocks;

  std::vector<double> spectrum() const {
    std::vector<double> all;
    for (const Matrix& b : blocks)
      for (double lam : sym_eigenvalues(b)) all.push_back(lam);
    std::sort(all.begin(), all.end());
    return all;
  }

  double negativity() const {
    double n = 0.0;
    for (const Matrix& b : blocks)
      for (double lam : sym_eigenvalues(b))
        if (lam < -kNegativityFloor) n -= lam;
    return n;
  }
};

// The two symmetric bisections reuse their partner's block structure.
inline Bisection canonical_bisection(Bisection b) {
  switch (b) {
    case Bisection::kMu2_Rest: return Bisection::kMu1_Rest;
    case Bisection::kS2_Rest: return Bisection::kS1_Rest;
    default: return b;
  }
}

inline PTBlockSet assemble_pt_blocks(Bisection b, double h, double beta, double J, double J1) {
  if (beta <= 0.0) throw std::invalid_argument("assemble_pt_blocks: beta must be positive");
  const auto& w = detail::wirings().at(canonical_bisection(b));
  const double eps0 = detail::ground_energy(J, J1, h);
  const double z = detail::z_shifted(beta, J, J1, h, eps0);

  PTBlockSet set;
  for (double hh : {h, -h}) {
    Matrix q1(1, 1);
    q1(0, 0) = detail::element_raw(w.q1.first, w.q1.second, hh, beta, J, J1, eps0) / z;
    set.blocks.push_back(q1);
    set.blocks.push_back(detail::build_block(w.q2, hh, beta, J, J1, eps0, z));
    set.blocks.push_back(detail::build_block(w.q3, hh, beta, J, J1, eps0, z));
  }
  set.blocks.push_back(detail::build_signed_block(w.q4, h, beta, J, J1, eps0, z));

  int total = 0;
  for (const Matrix& m : set.blocks) total += m.rows();
  if (total != 36) throw std::logic_error("assemble_pt_blocks: block dimensions do not sum to 36");
  return set;
}

// Fast path for the seven global bisection negativities.
inline NegativityVector analytic_bisections(double h, double beta, double J, double J1) {
  NegativityVector nv;
  for (int i = 0; i < kNumBisections; ++i) {
    const Bisection b = static_cast<Bisection>(i);
    const Bisection cb = canonical_bisection(b);
    if (cb != b) {
      nv.values[i] = nv.values[static_cast<int>(cb)];
      continue;
    }
    nv.values[i] = assemble_pt_blocks(b, h, beta, J, J1).negativity();
  }
  return nv;
}

}  // namespace appendix
}  // namespace tetra
