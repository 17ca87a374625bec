#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tetra/matrix.hpp"

namespace tetra {

// Site order (mu1, S1, mu2, S2); local bases ordered by descending z-projection.
enum Site : int { kMu1 = 0, kS1 = 1, kMu2 = 2, kS2 = 3 };

inline constexpr std::array<int, 4> kSiteDims{2, 3, 2, 3};
inline constexpr int kFullDim = 36;

// Bit i set <=> site/factor i belongs to the subsystem.
using SiteMask = unsigned;

inline constexpr SiteMask bit(int site) { return 1u << site; }

inline int mask_popcount(SiteMask m) {
  int c = 0;
  for (; m; m >>= 1) c += static_cast<int>(m & 1u);
  return c;
}

inline std::string site_name(int s) {
  switch (s) {
    case kMu1: return "mu1";
    case kS1: return "S1";
    case kMu2: return "mu2";
    case kS2: return "S2";
  }
  return "?";
}

inline std::vector<int> full_dims() { return {2, 3, 2, 3}; }

namespace detail {

inline int product(const std::vector<int>& dims) {
  int p = 1;
  for (int d : dims) p *= d;
  return p;
}

inline void decompose(int flat, const std::vector<int>& dims, std::vector<int>& idx) {
  idx.resize(dims.size());
  for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
    idx[f] = flat % dims[f];
    flat /= dims[f];
  }
}

inline int compose(const std::vector<int>& idx, const std::vector<int>& dims) {
  int flat = 0;
  for (size_t f = 0; f < dims.size(); ++f) flat = flat * dims[f] + idx[f];
  return flat;
}

inline void check_mask(SiteMask mask, size_t nfactors, const char* op) {
  if (mask == 0 || mask >= (1u << nfactors) || mask == (1u << nfactors) - 1u)
    throw std::invalid_argument(std::string(op) + ": mask must be a non-empty proper subset of factors");
}

}  // namespace detail

// Partial transpose over the factors selected by `mask`.
// <i_m, i_r| M^Tm |j_m, j_r> = <j_m, i_r| M |i_m, j_r>.
inline Matrix partial_transpose(const Matrix& m, const std::vector<int>& dims, SiteMask mask) {
  const int n = detail::product(dims);
  if (m.rows() != n || m.cols() != n) throw std::invalid_argument("partial_transpose: dimension mismatch");
  detail::check_mask(mask, dims.size(), "partial_transpose");

  Matrix out(n, n);
  std::vector<int> ri, ci;
  for (int r = 0; r < n; ++r) {
    detail::decompose(r, dims, ri);
    for (int c = 0; c < n; ++c) {
      detail::decompose(c, dims, ci);
      std::vector<int> sr = ri, sc = ci;
      for (size_t f = 0; f < dims.size(); ++f)
        if (mask & (1u << f)) std::swap(sr[f], sc[f]);
      out(detail::compose(sr, dims), detail::compose(sc, dims)) = m(r, c);
    }
  }
  return out;
}

// Trace out the factors NOT selected by `keep`; the reduced matrix keeps the
// surviving factors in their original order.
inline Matrix partial_trace(const Matrix& m, const std::vector<int>& dims, SiteMask keep) {
  const int n = detail::product(dims);
  if (m.rows() != n || m.cols() != n) throw std::invalid_argument("partial_trace: dimension mismatch");
  detail::check_mask(keep, dims.size(), "partial_trace");

  std::vector<int> kept_dims, traced_dims;
  std::vector<size_t> kept_pos, traced_pos;
  for (size_t f = 0; f < dims.size(); ++f) {
    if (keep & (1u << f)) {
      kept_dims.push_back(dims[f]);
      kept_pos.push_back(f);
    } else {
      traced_dims.push_back(dims[f]);
      traced_pos.push_back(f);
    }
  }
  const int nk = detail::product(kept_dims);
  const int nt = detail::product(traced_dims);

  Matrix out(nk, nk);
  std::vector<int> ki, kj, ti, fi(dims.size()), fj(dims.size());
  for (int a = 0; a < nk; ++a) {
    detail::decompose(a, kept_dims, ki);
    for (int b = 0; b < nk; ++b) {
      detail::decompose(b, kept_dims, kj);
      double s = 0.0;
      for (int t = 0; t < nt; ++t) {
        detail::decompose(t, traced_dims, ti);
        for (size_t f = 0; f < kept_pos.size(); ++f) {
          fi[kept_pos[f]] = ki[f];
          fj[kept_pos[f]] = kj[f];
        }
        for (size_t f = 0; f < traced_pos.size(); ++f) {
          fi[traced_pos[f]] = ti[f];
          fj[traced_pos[f]] = ti[f];
        }
        s += m(detail::compose(fi, dims), detail::compose(fj, dims));
      }
      out(a, b) = s;
    }
  }
  return out;
}

// Dimensions surviving a partial trace, original site order.
inline std::vector<int> kept_dims(const std::vector<int>& dims, SiteMask keep) {
  std::vector<int> out;
  for (size_t f = 0; f < dims.size(); ++f)
    if (keep & (1u << f)) out.push_back(dims[f]);
  return out;
}

}  // namespace tetra
