#pragma once
//! \file particle.hpp
//! Relativistic point particle in 5D/6D: mass-shell splits over the extra
//! block, phase-space and Howe-Tucker action evaluation on sampled
//! worldlines, RK4 geodesic integration against any metric provider, the
//! zero-mode constraint pair, and the regularized worldline-source
//! comparison of the integrated Hamiltonian constraint.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "taulab/linalg.hpp"
#include "taulab/metric_adm.hpp"

namespace taulab::particle {

using adm::MetricFn;
using adm::PointN;

// ---------------------------------------------------------------------------
// Mass-shell split over the two extra dimensions.
// ---------------------------------------------------------------------------

enum class ExtraBlock {
  LightCone,  // lower-index block [[0,-1],[-1,0]]; self-inverse
  Diagonal,   // lower-index block diag(-1,+1)
};

struct MassShellResult {
  double m2;       // 4D mass squared, returned as-is
  bool tachyonic;  // m2 < 0
};

// m^2 = M^2 - P_bar.P^bar with the chosen extra block (covariant P5, P6 in).
// Light cone: m^2 = M^2 + 2 P5 P6; diagonal: m^2 = M^2 + P5^2 - P6^2.
inline MassShellResult mass_shell_split(double p5, double p6, double mass6, ExtraBlock block) {
  double extra;  // P_bar P^bar
  switch (block) {
    case ExtraBlock::LightCone:
      extra = -2.0 * p5 * p6;
      break;
    case ExtraBlock::Diagonal:
      extra = -p5 * p5 + p6 * p6;
      break;
    default:
      throw std::invalid_argument("mass_shell_split: unknown block");
  }
  const double m2 = mass6 * mass6 - extra;
  return {m2, m2 < 0.0};
}

// ---------------------------------------------------------------------------
// Worldlines.
// ---------------------------------------------------------------------------

struct WorldlineState {
  Vec x;         // coordinates X^M
  Vec p;         // covariant momenta P_M
  double alpha;  // einbein
  double sigma;  // worldline parameter
};

struct Worldline {
  std::vector<WorldlineState> samples;
  double step = 0.0;
  int dim = 0;

  // samples must be uniform and strictly increasing in sigma
  void validate_uniform(double tol = 1e-9) const {
    if (!(step > 0.0)) throw std::invalid_argument("Worldline: step must be positive");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double expected = samples[0].sigma + step * static_cast<double>(i);
      if (std::abs(samples[i].sigma - expected) >
          tol * std::max(1.0, std::abs(expected)))
        throw std::invalid_argument("Worldline: samples are not uniform in sigma");
    }
  }
};

namespace detail {

// Central-difference velocity from position samples (second-order one-sided
// stencils at the ends).
inline Vec velocity_at(const Worldline& wl, std::size_t i) {
  const auto& s = wl.samples;
  const double h = wl.step;
  Vec v(wl.dim);
  if (i == 0) {
    for (int m = 0; m < wl.dim; ++m)
      v[m] = (-3.0 * s[0].x[m] + 4.0 * s[1].x[m] - s[2].x[m]) / (2.0 * h);
  } else if (i + 1 == s.size()) {
    const std::size_t n = s.size();
    for (int m = 0; m < wl.dim; ++m)
      v[m] = (3.0 * s[n - 1].x[m] - 4.0 * s[n - 2].x[m] + s[n - 3].x[m]) / (2.0 * h);
  } else {
    for (int m = 0; m < wl.dim; ++m) v[m] = (s[i + 1].x[m] - s[i - 1].x[m]) / (2.0 * h);
  }
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Action evaluation.
// ---------------------------------------------------------------------------

// Phase-space action: trapezoid of P_M Xdot^M - (alpha/2)(P.P - M^2).
inline double action_einbein(const Worldline& wl, const MetricFn& metric, double mass6) {
  if (wl.samples.size() < 3) throw std::invalid_argument("action_einbein: need >= 3 samples");
  wl.validate_uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < wl.samples.size(); ++i) {
    const auto& s = wl.samples[i];
    PointN x{};
    for (int m = 0; m < wl.dim; ++m) x[static_cast<std::size_t>(m)] = s.x[m];
    const Mat ginv = inverse(metric(x));
    const Vec v = detail::velocity_at(wl, i);
    double pV = 0.0, pp = 0.0;
    for (int m = 0; m < wl.dim; ++m) {
      pV += s.p[m] * v[m];
      for (int n = 0; n < wl.dim; ++n) pp += ginv(m, n) * s.p[m] * s.p[n];
    }
    const double integrand = pV - 0.5 * s.alpha * (pp - mass6 * mass6);
    const double w = (i == 0 || i + 1 == wl.samples.size()) ? 0.5 : 1.0;
    acc += w * integrand;
  }
  return acc * wl.step;
}

// Square-root length action M * integral sqrt(Xdot.Xdot).
inline double action_length(const Worldline& wl, const MetricFn& metric, double mass6) {
  if (wl.samples.size() < 3) throw std::invalid_argument("action_length: need >= 3 samples");
  double acc = 0.0;
  for (std::size_t i = 0; i < wl.samples.size(); ++i) {
    PointN x{};
    for (int m = 0; m < wl.dim; ++m) x[static_cast<std::size_t>(m)] = wl.samples[i].x[m];
    const Mat g = metric(x);
    const Vec v = detail::velocity_at(wl, i);
    double vv = 0.0;
    for (int m = 0; m < wl.dim; ++m)
      for (int n = 0; n < wl.dim; ++n) vv += g(m, n) * v[m] * v[n];
    if (vv < 0.0) throw std::domain_error("action_length: spacelike segment");
    const double w = (i == 0 || i + 1 == wl.samples.size()) ? 0.5 : 1.0;
    acc += w * std::sqrt(vv);
  }
  return mass6 * acc * wl.step;
}

// Howe-Tucker form (1/2) integral (xdot^mu xdot_mu / alpha + alpha m^2) over
// the four spacetime components only.
inline double action_howe_tucker(const Worldline& wl, const MetricFn& metric, double m2) {
  if (wl.samples.size() < 3)
    throw std::invalid_argument("action_howe_tucker: need >= 3 samples");
  double acc = 0.0;
  for (std::size_t i = 0; i < wl.samples.size(); ++i) {
    PointN x{};
    for (int m = 0; m < wl.dim; ++m) x[static_cast<std::size_t>(m)] = wl.samples[i].x[m];
    const Mat g = metric(x);
    const Vec v = detail::velocity_at(wl, i);
    double vv4 = 0.0;
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) vv4 += g(m, n) * v[m] * v[n];
    const double a = wl.samples[i].alpha;
    const double w = (i == 0 || i + 1 == wl.samples.size()) ? 0.5 : 1.0;
    acc += w * 0.5 * (vv4 / a + a * m2);
  }
  return acc * wl.step;
}

// Boundary term P_bar X^bar (end minus start) for the extra components.
inline double extra_dim_boundary_term(const Worldline& wl) {
  if (wl.dim != 6) throw std::invalid_argument("extra_dim_boundary_term: 6D worldline required");
  const auto& first = wl.samples.front();
  const auto& last = wl.samples.back();
  double out = 0.0;
  for (int m = 4; m < 6; ++m) out += last.p[m] * last.x[m] - first.p[m] * first.x[m];
  return out;
}

// ---------------------------------------------------------------------------
// Geodesic integration (classic RK4 on the second-order system).
// ---------------------------------------------------------------------------

namespace detail {

inline Vec geodesic_accel(const MetricFn& metric, int dim, const Vec& x, const Vec& v,
                          double fd_step) {
  PointN pt{};
  for (int m = 0; m < dim; ++m) pt[static_cast<std::size_t>(m)] = x[m];
  const Mat g = metric(pt);
  const Mat ginv = inverse(g);
  std::array<Mat, 6> dg;
  for (int k = 0; k < dim; ++k) {
    const double h = fd_step * std::max(1.0, std::abs(x[k]));
    PointN xp = pt, xm = pt;
    xp[static_cast<std::size_t>(k)] += h;
    xm[static_cast<std::size_t>(k)] -= h;
    Mat d = metric(xp);
    d -= metric(xm);
    d *= 1.0 / (2.0 * h);
    dg[static_cast<std::size_t>(k)] = d;
  }
  Vec a(dim);
  for (int lam = 0; lam < dim; ++lam) {
    double s = 0.0;
    for (int mu = 0; mu < dim; ++mu)
      for (int nu = 0; nu < dim; ++nu) {
        double gam = 0.0;
        for (int rho = 0; rho < dim; ++rho)
          gam += ginv(lam, rho) * (dg[static_cast<std::size_t>(mu)](rho, nu) +
                                   dg[static_cast<std::size_t>(nu)](rho, mu) -
                                   dg[static_cast<std::size_t>(rho)](mu, nu));
        s -= 0.5 * gam * v[mu] * v[nu];
      }
    a[lam] = s;
  }
  return a;
}

}  // namespace detail

// Integrates the geodesic equation with fixed-step RK4. The initial velocity
// is rescaled so |Xdot.Xdot| = 1 unless it is null; norm drift along the
// trajectory is then an observable integration error.
inline Worldline geodesic_integrate(const MetricFn& metric, int dim, const Vec& x0, const Vec& v0,
                                    int steps, double h, double fd_step = 1e-5) {
  if (dim < 2 || dim > kMaxDim) throw std::invalid_argument("geodesic_integrate: bad dimension");
  if (steps < 1) throw std::invalid_argument("geodesic_integrate: steps must be >= 1");

  PointN pt{};
  for (int m = 0; m < dim; ++m) pt[static_cast<std::size_t>(m)] = x0[m];
  const Mat g0 = metric(pt);
  double vv = 0.0;
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) vv += g0(m, n) * v0[m] * v0[n];
  Vec v = v0;
  if (std::abs(vv) > 1e-14) v *= 1.0 / std::sqrt(std::abs(vv));

  Worldline wl;
  wl.dim = dim;
  wl.step = h;
  wl.samples.reserve(static_cast<std::size_t>(steps) + 1);

  Vec x = x0;
  auto record = [&](double sigma) {
    PointN q{};
    for (int m = 0; m < dim; ++m) q[static_cast<std::size_t>(m)] = x[m];
    const Mat g = metric(q);
    WorldlineState s;
    s.x = x;
    s.p = g * v;
    s.alpha = 1.0;
    s.sigma = sigma;
    wl.samples.push_back(s);
  };
  record(0.0);

  for (int i = 0; i < steps; ++i) {
    const Vec k1x = v;
    const Vec k1v = detail::geodesic_accel(metric, dim, x, v, fd_step);
    const Vec k2x = v + 0.5 * h * k1v;
    const Vec k2v = detail::geodesic_accel(metric, dim, x + 0.5 * h * k1x, k2x, fd_step);
    const Vec k3x = v + 0.5 * h * k2v;
    const Vec k3v = detail::geodesic_accel(metric, dim, x + 0.5 * h * k2x, k3x, fd_step);
    const Vec k4x = v + h * k3v;
    const Vec k4v = detail::geodesic_accel(metric, dim, x + h * k3x, k4x, fd_step);
    x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    for (int m = 0; m < dim; ++m)
      if (!std::isfinite(x[m]) || !std::isfinite(v[m]))
        throw std::runtime_error("geodesic_integrate: non-finite state");
    record(h * (i + 1));
  }
  return wl;
}

// Xdot.Xdot at a sample, from the stored covariant momenta (alpha = 1).
inline double velocity_norm(const MetricFn& metric, const WorldlineState& s, int dim) {
  PointN pt{};
  for (int m = 0; m < dim; ++m) pt[static_cast<std::size_t>(m)] = s.x[m];
  const Mat ginv = inverse(metric(pt));
  double pp = 0.0;
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) pp += ginv(m, n) * s.p[m] * s.p[n];
  return pp;
}

// ---------------------------------------------------------------------------
// Zero-mode constraints sourced by the particle momentum.
// ---------------------------------------------------------------------------

struct ZeroModeResult {
  double h;  // integrated Hamiltonian constraint
  Vec h_mu;  // integrated momentum constraint (4 components)
};

// H = -(kappa/N)(P_5 - N^mu P_mu), H_mu = kappa P_mu, for covariant momenta
// and contravariant shift. With N = 1 and zero shift, H = -kappa P_5.
inline ZeroModeResult zero_mode_constraints(const Vec& p_mu, double p5, double lapse,
                                            const Vec& shift_up, double kappa) {
  if (!(lapse > 0.0)) throw std::invalid_argument("zero_mode_constraints: lapse must be positive");
  ZeroModeResult r;
  r.h = -kappa * (p5 - dot(shift_up, p_mu)) / lapse;
  r.h_mu = kappa * p_mu;
  return r;
}

// Flat 5D mass-shell residual g^munu P_mu P_nu + P5^2 - M^2 (eta slice).
// Evaluation order is fixed so the field-side check can match it bitwise.
inline double flat5_shell_residual(const std::array<double, 4>& p_mu, double p5, double mass) {
  const double pp = p_mu[0] * p_mu[0] - p_mu[1] * p_mu[1] - p_mu[2] * p_mu[2] - p_mu[3] * p_mu[3];
  return pp + p5 * p5 - mass * mass;
}

// ---------------------------------------------------------------------------
// Regularized worldline source and the integrated-constraint comparison.
// ---------------------------------------------------------------------------

struct SourceGrid {
  int dim = 0;                      // 2..5; coordinate 0 is tau
  std::array<int, 5> n{};           // points per axis
  std::array<double, 5> length{};   // box lengths

  double spacing(int d) const {
    return length[static_cast<std::size_t>(d)] / n[static_cast<std::size_t>(d)];
  }
  std::size_t total() const {
    std::size_t t = 1;
    for (int d = 0; d < dim; ++d) t *= static_cast<std::size_t>(n[static_cast<std::size_t>(d)]);
    return t;
  }
  double cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= spacing(d);
    return v;
  }
};

struct SourceSample {
  std::array<double, 5> x{};  // worldline position (grid coordinates)
  double alpha = 1.0;
  double lapse = 1.0;
  double p5_upper = 0.0;  // contravariant P^5
};

namespace detail {

inline double wrap_half(double u, double L) {
  u = std::fmod(u, L);
  if (u < -0.5 * L) u += L;
  if (u >= 0.5 * L) u -= L;
  return u;
}

}  // namespace detail

// Builds the constraint field sourced by the worldline with the delta
// distribution replaced by a separable Gaussian bump (nearest periodic
// image, analytic normalization). width_cells sets the per-axis standard
// deviation in units of the grid spacing.
inline std::vector<double> worldline_bump_field(const SourceGrid& grid,
                                                const std::vector<SourceSample>& samples,
                                                double dsigma, double kappa,
                                                double width_cells = 3.0) {
  if (grid.dim < 2 || grid.dim > 5) throw std::invalid_argument("worldline_bump_field: bad dim");
  // the far edge coincides with the origin under the periodic wrap
  for (const auto& s : samples)
    for (int d = 0; d < grid.dim; ++d) {
      const double xd = s.x[static_cast<std::size_t>(d)];
      if (xd < 0.0 || xd > grid.length[static_cast<std::size_t>(d)])
        throw std::domain_error("worldline_bump_field: worldline exits the grid");
    }

  std::vector<double> field(grid.total(), 0.0);
  std::array<std::vector<double>, 5> line;
  const double inv_sqrt_2pi = 0.39894228040143267793994605993438;

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const double w_trap = (i == 0 || i + 1 == samples.size()) ? 0.5 : 1.0;
    const double coeff =
        -kappa * s.alpha * s.lapse * s.p5_upper * s.p5_upper * w_trap * dsigma;
    for (int d = 0; d < grid.dim; ++d) {
      const int nd = grid.n[static_cast<std::size_t>(d)];
      const double hd = grid.spacing(d);
      const double wd = width_cells * hd;
      auto& f = line[static_cast<std::size_t>(d)];
      f.resize(static_cast<std::size_t>(nd));
      for (int j = 0; j < nd; ++j) {
        const double u = detail::wrap_half(j * hd - s.x[static_cast<std::size_t>(d)],
                                           grid.length[static_cast<std::size_t>(d)]);
        f[static_cast<std::size_t>(j)] =
            inv_sqrt_2pi / wd * std::exp(-0.5 * (u / wd) * (u / wd));
      }
    }
    // separable accumulation with a running partial product
    std::function<void(int, std::size_t, double)> accumulate = [&](int d, std::size_t base,
                                                                   double partial) {
      const int nd = grid.n[static_cast<std::size_t>(d)];
      const auto& f = line[static_cast<std::size_t>(d)];
      if (d + 1 == grid.dim) {
        for (int j = 0; j < nd; ++j)
          field[base + static_cast<std::size_t>(j)] +=
              coeff * partial * f[static_cast<std::size_t>(j)];
        return;
      }
      for (int j = 0; j < nd; ++j)
        accumulate(d + 1, (base + static_cast<std::size_t>(j)) *
                              static_cast<std::size_t>(grid.n[static_cast<std::size_t>(d + 1)]),
                   partial * f[static_cast<std::size_t>(j)]);
    };
    accumulate(0, 0, 1.0);
  }
  return field;
}

struct ReducedConstraintPair {
  double field_side;      // integral of the constraint field over the grid
  double worldline_side;  // -kappa * integral alpha N (P^5)^2 dsigma
};

// Evaluates both sides of the integrated (zero Fourier mode) constraint.
inline ReducedConstraintPair fourier_zero_mode_reduce(const std::vector<double>& field,
                                                      const SourceGrid& grid,
                                                      const std::vector<SourceSample>& samples,
                                                      double dsigma, double kappa) {
  if (field.size() != grid.total())
    throw std::invalid_argument("fourier_zero_mode_reduce: field/grid size mismatch");
  ReducedConstraintPair out{0.0, 0.0};
  const double cell = grid.cell_volume();
  for (double v : field) out.field_side += v;
  out.field_side *= cell;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const double w = (i == 0 || i + 1 == samples.size()) ? 0.5 : 1.0;
    out.worldline_side += -kappa * s.alpha * s.lapse * s.p5_upper * s.p5_upper * w * dsigma;
  }
  return out;
}

}  // namespace taulab::particle
