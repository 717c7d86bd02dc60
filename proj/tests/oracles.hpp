#pragma once
// Test-side oracles. Everything here recomputes expected values through a
// route independent of the implementation under test: blade products via
// explicit index lists, curvature via analytic derivatives, eigenpairs via
// dense Jacobi rotations, and the 1D reduction of power-law metrics.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "taulab/linalg.hpp"

namespace oracles {

// ---------------------------------------------------------------------------
// Clifford blade products by explicit index manipulation.
// ---------------------------------------------------------------------------

inline constexpr std::array<int, 4> kEta = {+1, -1, -1, -1};

struct IndexBlade {
  std::vector<int> indices;  // strictly ascending after reduction
  std::int64_t sign = 1;     // 0 only if annihilated (never happens for eta = +-1)
};

// Reduces an arbitrary product of basis vectors to canonical form by
// adjacent transpositions (sign flip) and adjacent contractions (eta factor).
inline IndexBlade reduce_index_product(std::vector<int> v, std::int64_t sign = 1) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      if (v[i] == v[i + 1]) {
        sign *= kEta[static_cast<std::size_t>(v[i])];
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i),
                v.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        changed = true;
        break;
      }
      if (v[i] > v[i + 1]) {
        std::swap(v[i], v[i + 1]);
        sign = -sign;
        changed = true;
        break;
      }
    }
  }
  return {v, sign};
}

inline std::vector<int> mask_to_indices(unsigned mask) {
  std::vector<int> v;
  for (int b = 0; b < 4; ++b)
    if (mask & (1u << b)) v.push_back(b);
  return v;
}

inline unsigned indices_to_mask(const std::vector<int>& v) {
  unsigned m = 0;
  for (int b : v) m |= (1u << b);
  return m;
}

// gamma_a gamma_b as (mask, sign) computed purely through index lists.
inline std::pair<unsigned, std::int64_t> blade_product_oracle(unsigned a, unsigned b) {
  std::vector<int> v = mask_to_indices(a);
  const std::vector<int> w = mask_to_indices(b);
  v.insert(v.end(), w.begin(), w.end());
  const IndexBlade r = reduce_index_product(std::move(v));
  return {indices_to_mask(r.indices), r.sign};
}

// Reversal of gamma_a computed by explicitly reversing the index list.
inline std::int64_t reversal_sign_oracle(unsigned a) {
  std::vector<int> v = mask_to_indices(a);
  std::reverse(v.begin(), v.end());
  const IndexBlade r = reduce_index_product(std::move(v));
  return r.sign;  // canonical mask is unchanged, only the sign moves
}

// ---------------------------------------------------------------------------
// Curvature from analytic derivatives (no finite differences).
// ---------------------------------------------------------------------------

struct AnalyticMetric {
  taulab::Mat g;
  std::array<taulab::Mat, 6> dg;                  // d_k g
  std::array<std::array<taulab::Mat, 6>, 6> ddg;  // d_k d_l g
};

struct ExactCurvature {
  taulab::Mat ricci;
  double scalar;
};

inline ExactCurvature ricci_exact(const AnalyticMetric& m, int dim) {
  using taulab::Mat;
  const Mat ginv = taulab::inverse(m.g);

  // d_k g^{-1} = -g^{-1} (d_k g) g^{-1}
  std::array<Mat, 6> dginv;
  for (int k = 0; k < dim; ++k) {
    Mat t = ginv * m.dg[static_cast<std::size_t>(k)] * ginv;
    t *= -1.0;
    dginv[static_cast<std::size_t>(k)] = t;
  }

  auto gamma_entry = [&](const Mat& gi, const std::array<Mat, 6>& dg, int lam, int mu, int nu) {
    double s = 0.0;
    for (int rho = 0; rho < dim; ++rho)
      s += gi(lam, rho) * (dg[static_cast<std::size_t>(mu)](rho, nu) +
                           dg[static_cast<std::size_t>(nu)](rho, mu) -
                           dg[static_cast<std::size_t>(rho)](mu, nu));
    return 0.5 * s;
  };

  std::array<Mat, 6> gamma;
  for (int lam = 0; lam < dim; ++lam) {
    gamma[static_cast<std::size_t>(lam)] = Mat(dim);
    for (int mu = 0; mu < dim; ++mu)
      for (int nu = 0; nu < dim; ++nu)
        gamma[static_cast<std::size_t>(lam)](mu, nu) = gamma_entry(ginv, m.dg, lam, mu, nu);
  }

  // d_k Gamma^lam_munu with exact second derivatives
  std::array<std::array<Mat, 6>, 6> dgamma;
  for (int k = 0; k < dim; ++k)
    for (int lam = 0; lam < dim; ++lam) {
      dgamma[static_cast<std::size_t>(k)][static_cast<std::size_t>(lam)] = Mat(dim);
      for (int mu = 0; mu < dim; ++mu)
        for (int nu = 0; nu < dim; ++nu) {
          double s = 0.0;
          for (int rho = 0; rho < dim; ++rho) {
            s += dginv[static_cast<std::size_t>(k)](lam, rho) *
                 (m.dg[static_cast<std::size_t>(mu)](rho, nu) +
                  m.dg[static_cast<std::size_t>(nu)](rho, mu) -
                  m.dg[static_cast<std::size_t>(rho)](mu, nu));
            s += ginv(lam, rho) *
                 (m.ddg[static_cast<std::size_t>(k)][static_cast<std::size_t>(mu)](rho, nu) +
                  m.ddg[static_cast<std::size_t>(k)][static_cast<std::size_t>(nu)](rho, mu) -
                  m.ddg[static_cast<std::size_t>(k)][static_cast<std::size_t>(rho)](mu, nu));
          }
          dgamma[static_cast<std::size_t>(k)][static_cast<std::size_t>(lam)](mu, nu) = 0.5 * s;
        }
    }

  ExactCurvature out;
  out.ricci = taulab::Mat(dim);
  for (int si = 0; si < dim; ++si)
    for (int nu = 0; nu < dim; ++nu) {
      double s = 0.0;
      for (int rho = 0; rho < dim; ++rho) {
        s += dgamma[static_cast<std::size_t>(rho)][static_cast<std::size_t>(rho)](nu, si);
        s -= dgamma[static_cast<std::size_t>(nu)][static_cast<std::size_t>(rho)](rho, si);
        for (int lam = 0; lam < dim; ++lam) {
          s += gamma[static_cast<std::size_t>(rho)](rho, lam) *
               gamma[static_cast<std::size_t>(lam)](nu, si);
          s -= gamma[static_cast<std::size_t>(rho)](nu, lam) *
               gamma[static_cast<std::size_t>(lam)](rho, si);
        }
      }
      out.ricci(si, nu) = s;
    }
  out.scalar = 0.0;
  for (int si = 0; si < dim; ++si)
    for (int nu = 0; nu < dim; ++nu) out.scalar += ginv(si, nu) * out.ricci(si, nu);
  return out;
}

// Conformally flat slice data a(x)^2 eta at a point, with analytic a and its
// first/second partial derivatives supplied by the caller.
inline AnalyticMetric conformal_metric_data(double a, const std::array<double, 4>& da,
                                            const std::array<std::array<double, 4>, 4>& dda) {
  using taulab::Mat;
  AnalyticMetric m;
  const Mat eta = Mat::diagonal({1.0, -1.0, -1.0, -1.0});
  m.g = eta;
  m.g *= a * a;
  for (int k = 0; k < 4; ++k) {
    Mat d = eta;
    d *= 2.0 * a * da[static_cast<std::size_t>(k)];
    m.dg[static_cast<std::size_t>(k)] = d;
    for (int l = 0; l < 4; ++l) {
      Mat dd = eta;
      dd *= 2.0 * (da[static_cast<std::size_t>(k)] * da[static_cast<std::size_t>(l)] +
                   a * dda[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]);
      m.ddg[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] = dd;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Dense symmetric eigensolver (cyclic Jacobi) for small test problems.
// ---------------------------------------------------------------------------

// a: n*n row-major symmetric, overwritten with the diagonalized matrix;
// vecs: receives eigenvectors as columns.
inline void jacobi_eigen(std::vector<double>& a, int n, std::vector<double>& vecs) {
  vecs.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) vecs[static_cast<std::size_t>(i) * n + i] = 1.0;
  auto at = [&a, n](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  auto vt = [&vecs, n](int i, int j) -> double& {
    return vecs[static_cast<std::size_t>(i) * n + j];
  };
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-26) return;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = vt(k, p), vkq = vt(k, q);
          vt(k, p) = c * vkp - s * vkq;
          vt(k, q) = s * vkp + c * vkq;
        }
      }
  }
}

// ---------------------------------------------------------------------------
// 1D reduction of diagonal power-law metrics.
// ---------------------------------------------------------------------------

// For diag(e0, e1 a1(t)^2, ...) with a_i = t^{p_i}, the reduced curvature
// components are proportional to sum p - sum p^2 (time row) and
// p_i (sum p - 1) (spatial rows); both must vanish for a vacuum solution.
struct PowerLawResiduals {
  long double time_component;
  long double max_spatial;
};

inline PowerLawResiduals power_law_vacuum_residuals(const std::vector<double>& exponents,
                                                    long double t) {
  long double sum = 0.0L, sum2 = 0.0L;
  for (double p : exponents) {
    sum += static_cast<long double>(p);
    sum2 += static_cast<long double>(p) * static_cast<long double>(p);
  }
  PowerLawResiduals r;
  r.time_component = (sum - sum2) / (t * t);
  r.max_spatial = 0.0L;
  for (double p : exponents)
    r.max_spatial =
        std::max(r.max_spatial, std::fabs(static_cast<long double>(p) * (sum - 1.0L)));
  return r;
}

}  // namespace oracles
