#pragma once
//! \file metric_adm.hpp
//! 4+1 decomposition of 5D metrics: lapse/shift/slice-metric providers,
//! composed and inverse 5-metrics, extrinsic curvature, canonical momenta,
//! Hamiltonian and momentum constraints, the DeWitt supermetric, and a
//! finite-difference curvature evaluator usable in any dimension <= 6.
//!
//! Coordinates are packed as c[0] = tau, c[1..4] = x^0..x^3. Slice metrics
//! g_munu carry Lorentzian signature (+,-,-,-); the composed 5-metric puts
//! the tau row/column first.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "taulab/linalg.hpp"

namespace taulab::adm {

using Coord = std::array<double, 5>;
using PointN = std::array<double, 6>;

using ScalarFn = std::function<double(const Coord&)>;
using VecFn = std::function<Vec(const Coord&)>;
using MatFn = std::function<Mat(const Coord&)>;
using MetricFn = std::function<Mat(const PointN&)>;  // general-dim metric field

struct AdmMetric {
  ScalarFn lapse;   // N > 0
  VecFn shift;      // covariant N_mu (4 components)
  MatFn metric4;    // g_munu, 4x4, det < 0
  double fd_step = 1e-5;    // first-derivative step scale
  double fd_step2 = 1e-4;   // second-derivative step scale (curvature)
  // Analytic providers scale the step with the coordinate magnitude;
  // grid-sampled providers need fixed node-aligned steps instead.
  bool scale_steps = true;

  double step1(double coord) const {
    return scale_steps ? fd_step * std::max(1.0, std::abs(coord)) : fd_step;
  }
  double step2(double coord) const {
    return scale_steps ? fd_step2 * std::max(1.0, std::abs(coord)) : fd_step2;
  }

  static AdmMetric flat() {
    AdmMetric m;
    m.lapse = [](const Coord&) { return 1.0; };
    m.shift = [](const Coord&) { return Vec(4); };
    m.metric4 = [](const Coord&) { return Mat::diagonal({1.0, -1.0, -1.0, -1.0}); };
    return m;
  }
};

// ---------------------------------------------------------------------------
// Composed 5-metric and its closed-form inverse.
// ---------------------------------------------------------------------------

// Block form [[N_mu N^mu + N^2, N_mu], [N_nu, g_munu]] with the tau slot first.
inline Mat compose_5d(const Mat& g4, const Vec& shift_cov, double lapse) {
  const Mat ginv = inverse(g4);
  const Vec shift_up = ginv * shift_cov;
  Mat g5(5);
  g5(0, 0) = dot(shift_cov, shift_up) + lapse * lapse;
  for (int mu = 0; mu < 4; ++mu) {
    g5(0, mu + 1) = shift_cov[mu];
    g5(mu + 1, 0) = shift_cov[mu];
    for (int nu = 0; nu < 4; ++nu) g5(mu + 1, nu + 1) = g4(mu, nu);
  }
  return g5;
}

inline Mat compose_5d(const AdmMetric& adm, const Coord& c) {
  return compose_5d(adm.metric4(c), adm.shift(c), adm.lapse(c));
}

// Closed-form inverse [[1/N^2, -N^mu/N^2], [-N^nu/N^2, g^munu + N^mu N^nu/N^2]].
// The off-diagonal sign is fixed by requiring compose_5d * invert_5d = 1.
inline Mat invert_5d(const Mat& g4, const Vec& shift_cov, double lapse) {
  if (!(lapse > 0.0)) throw std::invalid_argument("invert_5d: lapse must be positive");
  const Mat ginv = inverse(g4);
  const Vec shift_up = ginv * shift_cov;
  const double inv_n2 = 1.0 / (lapse * lapse);
  Mat gi(5);
  gi(0, 0) = inv_n2;
  for (int mu = 0; mu < 4; ++mu) {
    gi(0, mu + 1) = -shift_up[mu] * inv_n2;
    gi(mu + 1, 0) = -shift_up[mu] * inv_n2;
    for (int nu = 0; nu < 4; ++nu)
      gi(mu + 1, nu + 1) = ginv(mu, nu) + shift_up[mu] * shift_up[nu] * inv_n2;
  }
  return gi;
}

inline Mat invert_5d(const AdmMetric& adm, const Coord& c) {
  return invert_5d(adm.metric4(c), adm.shift(c), adm.lapse(c));
}

// ---------------------------------------------------------------------------
// Derivative helpers (central differences on analytic providers).
// ---------------------------------------------------------------------------

inline Mat d_metric4(const AdmMetric& adm, const Coord& c, int axis) {
  const double h = adm.step1(c[static_cast<std::size_t>(axis)]);
  Coord cp = c, cm = c;
  cp[static_cast<std::size_t>(axis)] += h;
  cm[static_cast<std::size_t>(axis)] -= h;
  Mat d = adm.metric4(cp);
  d -= adm.metric4(cm);
  d *= 1.0 / (2.0 * h);
  return d;
}

using Christoffel = std::array<Mat, 6>;  // Gamma[lambda](mu, nu)

// Christoffels of the slice metric at fixed tau (spatial axes 1..4).
inline Christoffel christoffel_4d(const AdmMetric& adm, const Coord& c) {
  const Mat g = adm.metric4(c);
  const Mat ginv = inverse(g);
  std::array<Mat, 4> dg;
  for (int k = 0; k < 4; ++k) dg[static_cast<std::size_t>(k)] = d_metric4(adm, c, k + 1);
  Christoffel gamma;
  for (int lam = 0; lam < 4; ++lam) {
    gamma[static_cast<std::size_t>(lam)] = Mat(4);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        double s = 0.0;
        for (int rho = 0; rho < 4; ++rho)
          s += ginv(lam, rho) * (dg[static_cast<std::size_t>(mu)](rho, nu) +
                                 dg[static_cast<std::size_t>(nu)](rho, mu) -
                                 dg[static_cast<std::size_t>(rho)](mu, nu));
        gamma[static_cast<std::size_t>(lam)](mu, nu) = 0.5 * s;
      }
  }
  return gamma;
}

// ---------------------------------------------------------------------------
// Extrinsic curvature and canonical momenta.
// ---------------------------------------------------------------------------

struct ExtrinsicData {
  Mat k;         // K_munu
  double trace;  // K = g^munu K_munu
  Mat p_upper;   // p^munu = sqrt(-g) (K g^munu - K^munu)
};

// p^munu from K_munu; the density factor sqrt(-g) is included. Works in any
// slice dimension (D is the matrix size, fixed to 4 by the 4+1 call sites).
inline Mat canonical_momenta(const Mat& k, const Mat& g4) {
  const int n = g4.size();
  const Mat ginv = inverse(g4);
  const double det = determinant(g4);
  if (!(det < 0.0)) throw std::invalid_argument("canonical_momenta: det g4 must be negative");
  const double sq = std::sqrt(-det);
  double trace = 0.0;
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) trace += ginv(mu, nu) * k(mu, nu);
  const Mat k_upper = ginv * k * ginv;
  Mat p(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) p(mu, nu) = sq * (trace * ginv(mu, nu) - k_upper(mu, nu));
  return p;
}

// K_munu = (D_nu N_mu + D_mu N_nu - dg_munu/dtau) / (2N).
inline ExtrinsicData extrinsic_curvature(const AdmMetric& adm, const Coord& c) {
  const double n = adm.lapse(c);
  if (!(n > 0.0)) throw std::invalid_argument("extrinsic_curvature: lapse must be positive");
  const Mat g = adm.metric4(c);
  const Mat ginv = inverse(g);
  const Mat dg_dtau = d_metric4(adm, c, 0);

  // dN_mu/dx^nu
  Mat dshift(4);
  for (int nu = 0; nu < 4; ++nu) {
    const double h = adm.step1(c[static_cast<std::size_t>(nu + 1)]);
    Coord cp = c, cm = c;
    cp[static_cast<std::size_t>(nu + 1)] += h;
    cm[static_cast<std::size_t>(nu + 1)] -= h;
    const Vec sp = adm.shift(cp);
    const Vec sm = adm.shift(cm);
    for (int mu = 0; mu < 4; ++mu) dshift(mu, nu) = (sp[mu] - sm[mu]) / (2.0 * h);
  }

  const Christoffel gamma = christoffel_4d(adm, c);
  const Vec shift_cov = adm.shift(c);
  Mat cov(4);  // D_nu N_mu
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      double s = dshift(mu, nu);
      for (int lam = 0; lam < 4; ++lam)
        s -= gamma[static_cast<std::size_t>(lam)](nu, mu) * shift_cov[lam];
      cov(mu, nu) = s;
    }

  ExtrinsicData ex;
  ex.k = Mat(4);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      ex.k(mu, nu) = (cov(mu, nu) + cov(nu, mu) - dg_dtau(mu, nu)) / (2.0 * n);
  ex.trace = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) ex.trace += ginv(mu, nu) * ex.k(mu, nu);
  ex.p_upper = canonical_momenta(ex.k, g);
  return ex;
}

// ---------------------------------------------------------------------------
// DeWitt supermetric and the two kinetic forms.
// ---------------------------------------------------------------------------

struct DeWittSupermetric {
  std::array<double, 256> g{};  // [mu][nu][alpha][beta], 4^4 entries
  double& at(int mu, int nu, int alpha, int beta) {
    return g[static_cast<std::size_t>(((mu * 4 + nu) * 4 + alpha) * 4 + beta)];
  }
  double at(int mu, int nu, int alpha, int beta) const {
    return g[static_cast<std::size_t>(((mu * 4 + nu) * 4 + alpha) * 4 + beta)];
  }
  double contract(const Mat& p, const Mat& q) const {
    double s = 0.0;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) s += at(mu, nu, a, b) * p(mu, nu) * q(a, b);
    return s;
  }
};

// G_munualbe = (1/sqrt(-g)) [ g_munu g_albe / (D-1) - (g_mual g_nube + g_mube g_nual)/2 ].
inline DeWittSupermetric dewitt_supermetric(const Mat& g4, int d = 4) {
  const double det = determinant(g4);
  if (!(det < 0.0)) throw std::invalid_argument("dewitt_supermetric: det g4 must be negative");
  const double inv_sq = 1.0 / std::sqrt(-det);
  DeWittSupermetric s;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          s.at(mu, nu, a, b) =
              inv_sq * (g4(mu, nu) * g4(a, b) / (d - 1) -
                        0.5 * (g4(mu, a) * g4(nu, b) + g4(mu, b) * g4(nu, a)));
  return s;
}

// sqrt(-g) (K^2 - K^munu K_munu)
inline double hamiltonian_kinetic_kform(const Mat& g4, const Mat& k) {
  const int n = g4.size();
  const Mat ginv = inverse(g4);
  const double det = determinant(g4);
  const double sq = std::sqrt(-det);
  double trace = 0.0, kk = 0.0;
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) trace += ginv(mu, nu) * k(mu, nu);
  const Mat k_upper = ginv * k * ginv;
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) kk += k_upper(mu, nu) * k(mu, nu);
  return sq * (trace * trace - kk);
}

// Supermetric contraction G_munualbe p^munu p^albe
inline double hamiltonian_kinetic_pform(const Mat& g4, const Mat& p_upper, int d = 4) {
  return dewitt_supermetric(g4, d).contract(p_upper, p_upper);
}

// | (K^2 - K.K) - (p^2/(D-1) - p.p)/(-g) |, with D the slice dimension.
inline double kinetic_identity_residual(const Mat& g4, const Mat& k) {
  const int n = g4.size();
  const Mat ginv = inverse(g4);
  const double det = determinant(g4);
  double trace = 0.0, kk = 0.0;
  const Mat k_upper = ginv * k * ginv;
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) {
      trace += ginv(mu, nu) * k(mu, nu);
      kk += k_upper(mu, nu) * k(mu, nu);
    }
  const double lhs = trace * trace - kk;

  const Mat p = canonical_momenta(k, g4);
  double ptrace = 0.0, pp = 0.0;
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) ptrace += g4(mu, nu) * p(mu, nu);
  // p_munu = g_mual g_nube p^albe
  const Mat p_lower = g4 * p * g4;
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) pp += p(mu, nu) * p_lower(mu, nu);
  const double rhs = (ptrace * ptrace / (n - 1) - pp) / (-det);
  return std::abs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Finite-difference curvature (general dimension, pointwise).
// ---------------------------------------------------------------------------

struct CurvatureResult {
  Mat ricci;      // R_munu
  double scalar;  // R
};

namespace detail {

inline Christoffel christoffel_at(const MetricFn& metric, int dim, const PointN& x, double h) {
  const Mat g = metric(x);
  const Mat ginv = inverse(g);
  std::array<Mat, 6> dg;
  for (int k = 0; k < dim; ++k) {
    PointN xp = x, xm = x;
    xp[static_cast<std::size_t>(k)] += h;
    xm[static_cast<std::size_t>(k)] -= h;
    Mat d = metric(xp);
    d -= metric(xm);
    d *= 1.0 / (2.0 * h);
    dg[static_cast<std::size_t>(k)] = d;
  }
  Christoffel gamma;
  for (int lam = 0; lam < dim; ++lam) {
    gamma[static_cast<std::size_t>(lam)] = Mat(dim);
    for (int mu = 0; mu < dim; ++mu)
      for (int nu = 0; nu < dim; ++nu) {
        double s = 0.0;
        for (int rho = 0; rho < dim; ++rho)
          s += ginv(lam, rho) * (dg[static_cast<std::size_t>(mu)](rho, nu) +
                                 dg[static_cast<std::size_t>(nu)](rho, mu) -
                                 dg[static_cast<std::size_t>(rho)](mu, nu));
        gamma[static_cast<std::size_t>(lam)](mu, nu) = 0.5 * s;
      }
  }
  return gamma;
}

}  // namespace detail

// Second-order central-difference Christoffels, Riemann, Ricci and scalar.
// `h` is both the metric-derivative step and the Christoffel-derivative step.
inline CurvatureResult ricci_fd(const MetricFn& metric, int dim, const PointN& x, double h) {
  if (dim < 2 || dim > kMaxDim) throw std::invalid_argument("ricci_fd: dimension out of range");
  const Christoffel gamma = detail::christoffel_at(metric, dim, x, h);
  std::array<Christoffel, 6> dgamma;  // dGamma[k][lam](mu,nu)
  for (int k = 0; k < dim; ++k) {
    PointN xp = x, xm = x;
    xp[static_cast<std::size_t>(k)] += h;
    xm[static_cast<std::size_t>(k)] -= h;
    const Christoffel gp = detail::christoffel_at(metric, dim, xp, h);
    const Christoffel gm = detail::christoffel_at(metric, dim, xm, h);
    for (int lam = 0; lam < dim; ++lam) {
      Mat d = gp[static_cast<std::size_t>(lam)];
      d -= gm[static_cast<std::size_t>(lam)];
      d *= 1.0 / (2.0 * h);
      dgamma[static_cast<std::size_t>(k)][static_cast<std::size_t>(lam)] = d;
    }
  }

  // R_sinu = R^rho_{si rho nu}
  //        = d_rho Gamma^rho_{nu si} - d_nu Gamma^rho_{rho si}
  //          + Gamma^rho_{rho lam} Gamma^lam_{nu si} - Gamma^rho_{nu lam} Gamma^lam_{rho si}
  CurvatureResult out;
  out.ricci = Mat(dim);
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
  const Mat ginv = inverse(metric(x));
  out.scalar = 0.0;
  for (int si = 0; si < dim; ++si)
    for (int nu = 0; nu < dim; ++nu) out.scalar += ginv(si, nu) * out.ricci(si, nu);
  return out;
}

// ---------------------------------------------------------------------------
// Hamiltonian and momentum constraints.
// ---------------------------------------------------------------------------

struct HamiltonianValue {
  double k_form;     // sqrt(-g) (R4 + K^2 - K.K)
  double p_form;     // G p p + sqrt(-g) R4
  double residual;   // |k_form - p_form|
  double r4;         // slice curvature scalar
  double sqrt_mg;    // sqrt(-det g4)
};

// Both evaluation paths share the slice-curvature term; their difference
// probes the algebraic kinetic identity. Disagreement beyond `two_path_tol`
// (scaled by the magnitudes involved) throws.
inline HamiltonianValue hamiltonian_constraint(const AdmMetric& adm, const Coord& c,
                                               double two_path_tol = 1e-9) {
  const Mat g = adm.metric4(c);
  const ExtrinsicData ex = extrinsic_curvature(adm, c);
  const double det = determinant(g);
  const double sq = std::sqrt(-det);

  MetricFn slice = [&adm, &c](const PointN& x4) {
    Coord cc = c;
    for (int mu = 0; mu < 4; ++mu) cc[static_cast<std::size_t>(mu + 1)] = x4[static_cast<std::size_t>(mu)];
    return adm.metric4(cc);
  };
  PointN x4{};
  for (int mu = 0; mu < 4; ++mu) x4[static_cast<std::size_t>(mu)] = c[static_cast<std::size_t>(mu + 1)];
  const double r4 = ricci_fd(slice, 4, x4, adm.step2(c[1])).scalar;

  HamiltonianValue v;
  v.r4 = r4;
  v.sqrt_mg = sq;
  v.k_form = sq * r4 + hamiltonian_kinetic_kform(g, ex.k);
  v.p_form = hamiltonian_kinetic_pform(g, ex.p_upper) + sq * r4;
  v.residual = std::abs(v.k_form - v.p_form);
  const double scale = std::max({1.0, std::abs(v.k_form), std::abs(v.p_form)});
  if (v.residual > two_path_tol * scale)
    throw std::runtime_error("hamiltonian_constraint: kinetic two-path disagreement");
  return v;
}

// H^mu = 2 D_nu p^munu = 2 (d_nu p^munu + Gamma^mu_nulam p^nulam); p is a
// density and already carries sqrt(-g), so no measure factor is re-inserted.
inline Vec momentum_constraint(const MatFn& p_field, const AdmMetric& adm, const Coord& c) {
  const Christoffel gamma = christoffel_4d(adm, c);
  const Mat p = p_field(c);
  Vec h(4);
  for (int mu = 0; mu < 4; ++mu) {
    double s = 0.0;
    for (int nu = 0; nu < 4; ++nu) {
      const double step = adm.step1(c[static_cast<std::size_t>(nu + 1)]);
      Coord cp = c, cm = c;
      cp[static_cast<std::size_t>(nu + 1)] += step;
      cm[static_cast<std::size_t>(nu + 1)] -= step;
      s += (p_field(cp)(mu, nu) - p_field(cm)(mu, nu)) / (2.0 * step);
      for (int lam = 0; lam < 4; ++lam)
        s += gamma[static_cast<std::size_t>(mu)](nu, lam) * p(nu, lam);
    }
    h[mu] = 2.0 * s;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Discrete divergence theorem on a periodic 4-lattice (flat slice).
// ---------------------------------------------------------------------------

struct GaussLawResult {
  std::array<double, 4> volume_integral{};  // sum of central-difference divergence over the box
  std::array<double, 4> boundary_flux{};    // matching two-layer boundary average
  double max_residual = 0.0;
};

using Point4Fn = std::function<Mat(const std::array<double, 4>&)>;

// Sums the central-difference divergence of p^munu over the index box
// [lo, hi) and compares with the telescoped boundary flux. The identity is
// exact for any sampled field; residuals measure round-off only.
inline GaussLawResult gauss_law_check(const Point4Fn& p_field, int n, double box_length,
                                      const std::array<int, 4>& lo, const std::array<int, 4>& hi) {
  const double h = box_length / n;
  for (int d = 0; d < 4; ++d) {
    if (lo[static_cast<std::size_t>(d)] < 0 || hi[static_cast<std::size_t>(d)] > n ||
        lo[static_cast<std::size_t>(d)] >= hi[static_cast<std::size_t>(d)])
      throw std::invalid_argument("gauss_law_check: bad sub-box");
  }
  auto coord = [&](const std::array<int, 4>& idx) {
    std::array<double, 4> x{};
    for (int d = 0; d < 4; ++d)
      x[static_cast<std::size_t>(d)] =
          h * (((idx[static_cast<std::size_t>(d)] % n) + n) % n);
    return x;
  };

  GaussLawResult out;
  const double cell = h * h * h * h;
  const double face = h * h * h;

  std::array<int, 4> idx{};
  std::function<void(int)> sweep = [&](int d) {
    if (d == 4) {
      for (int nu = 0; nu < 4; ++nu) {
        std::array<int, 4> ip = idx, im = idx;
        ip[static_cast<std::size_t>(nu)] += 1;
        im[static_cast<std::size_t>(nu)] -= 1;
        const Mat pp = p_field(coord(ip));
        const Mat pm = p_field(coord(im));
        for (int mu = 0; mu < 4; ++mu)
          out.volume_integral[static_cast<std::size_t>(mu)] +=
              (pp(mu, nu) - pm(mu, nu)) / (2.0 * h) * cell;
      }
      return;
    }
    for (idx[static_cast<std::size_t>(d)] = lo[static_cast<std::size_t>(d)];
         idx[static_cast<std::size_t>(d)] < hi[static_cast<std::size_t>(d)];
         ++idx[static_cast<std::size_t>(d)]) {
      sweep(d + 1);
    }
  };
  sweep(0);

  // Boundary flux in direction nu: central differences telescope to the
  // average of the last interior layer and the first exterior layer.
  for (int nu = 0; nu < 4; ++nu) {
    std::array<int, 3> tdims{};
    int t = 0;
    for (int d = 0; d < 4; ++d)
      if (d != nu) tdims[static_cast<std::size_t>(t++)] = d;
    for (int a = lo[static_cast<std::size_t>(tdims[0])]; a < hi[static_cast<std::size_t>(tdims[0])]; ++a)
      for (int b = lo[static_cast<std::size_t>(tdims[1])]; b < hi[static_cast<std::size_t>(tdims[1])]; ++b)
        for (int cidx = lo[static_cast<std::size_t>(tdims[2])]; cidx < hi[static_cast<std::size_t>(tdims[2])]; ++cidx) {
          std::array<int, 4> base{};
          base[static_cast<std::size_t>(tdims[0])] = a;
          base[static_cast<std::size_t>(tdims[1])] = b;
          base[static_cast<std::size_t>(tdims[2])] = cidx;
          std::array<int, 4> right0 = base, right1 = base, left0 = base, left1 = base;
          right0[static_cast<std::size_t>(nu)] = hi[static_cast<std::size_t>(nu)] - 1;
          right1[static_cast<std::size_t>(nu)] = hi[static_cast<std::size_t>(nu)];
          left0[static_cast<std::size_t>(nu)] = lo[static_cast<std::size_t>(nu)] - 1;
          left1[static_cast<std::size_t>(nu)] = lo[static_cast<std::size_t>(nu)];
          const Mat pr0 = p_field(coord(right0));
          const Mat pr1 = p_field(coord(right1));
          const Mat pl0 = p_field(coord(left0));
          const Mat pl1 = p_field(coord(left1));
          for (int mu = 0; mu < 4; ++mu)
            out.boundary_flux[static_cast<std::size_t>(mu)] +=
                0.5 * ((pr0(mu, nu) + pr1(mu, nu)) - (pl0(mu, nu) + pl1(mu, nu))) * face;
        }
  }

  for (int mu = 0; mu < 4; ++mu)
    out.max_residual = std::max(out.max_residual,
                                std::abs(out.volume_integral[static_cast<std::size_t>(mu)] -
                                         out.boundary_flux[static_cast<std::size_t>(mu)]));
  return out;
}

// ---------------------------------------------------------------------------
// Grid-sampled metric provider.
// ---------------------------------------------------------------------------

// Uniform-lattice samples of a metric field. Evaluations must land on grid
// nodes (the finite-difference step must be a multiple of the spacing);
// periodic wrap by default, hard error otherwise when the stencil leaves
// the sampled region.
class GridSampledMetric {
 public:
  GridSampledMetric(int dim, std::array<int, 6> n, std::array<double, 6> origin,
                    std::array<double, 6> spacing, bool periodic)
      : dim_(dim), n_(n), origin_(origin), spacing_(spacing), periodic_(periodic) {
    std::size_t total = 1;
    for (int d = 0; d < dim_; ++d) total *= static_cast<std::size_t>(n_[static_cast<std::size_t>(d)]);
    data_.resize(total);
  }

  template <typename Fn>
  void fill(Fn&& metric) {
    std::array<int, 6> idx{};
    for (std::size_t flat = 0; flat < data_.size(); ++flat) {
      std::size_t rem = flat;
      for (int d = dim_ - 1; d >= 0; --d) {
        idx[static_cast<std::size_t>(d)] = static_cast<int>(
            rem % static_cast<std::size_t>(n_[static_cast<std::size_t>(d)]));
        rem /= static_cast<std::size_t>(n_[static_cast<std::size_t>(d)]);
      }
      PointN x{};
      for (int d = 0; d < dim_; ++d)
        x[static_cast<std::size_t>(d)] = origin_[static_cast<std::size_t>(d)] +
                                         spacing_[static_cast<std::size_t>(d)] *
                                             idx[static_cast<std::size_t>(d)];
      data_[flat] = metric(x);
    }
  }

  Mat operator()(const PointN& x) const {
    std::size_t flat = 0;
    for (int d = 0; d < dim_; ++d) {
      const double u = (x[static_cast<std::size_t>(d)] - origin_[static_cast<std::size_t>(d)]) /
                       spacing_[static_cast<std::size_t>(d)];
      long i = std::lround(u);
      if (std::abs(u - static_cast<double>(i)) > 1e-6)
        throw std::invalid_argument("GridSampledMetric: off-node evaluation");
      const int nd = n_[static_cast<std::size_t>(d)];
      if (periodic_) {
        i = ((i % nd) + nd) % nd;
      } else if (i < 0 || i >= nd) {
        throw std::out_of_range("GridSampledMetric: stencil leaves the sampled region");
      }
      flat = flat * static_cast<std::size_t>(nd) + static_cast<std::size_t>(i);
    }
    return data_[flat];
  }

  int dim() const { return dim_; }
  double spacing(int d) const { return spacing_[static_cast<std::size_t>(d)]; }

 private:
  int dim_;
  std::array<int, 6> n_;
  std::array<double, 6> origin_;
  std::array<double, 6> spacing_;
  bool periodic_;
  std::vector<Mat> data_;
};

}  // namespace taulab::adm
