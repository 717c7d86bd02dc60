#pragma once
//! \file stueckelberg.hpp
//! Spectral evolution of the tau-dependent wave function obtained from the
//! 6D Klein-Gordon equation with a light-cone extra block. Two code paths
//! exist on purpose: the reduced first-order-in-tau evolver applies exact
//! per-mode phases from the reduced frequency, while the 6D evolver carries
//! an explicit lambda axis and per-mode frequencies from the 6D mass shell.
//!
//! Conventions: reduced spacetime metric diag(+1, -1, ..., -1) with the
//! first lattice axis timelike; modes e^{i p.x}; the reduced frequency is
//! E(p) = (M^2 - p^mu p_mu) / (2 Lambda) and a mode evolves by e^{-i E tau}.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "taulab/fft.hpp"
#include "taulab/particle.hpp"

namespace taulab::field {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct LatticeSpec {
  int dim = 2;                     // 1..4 reduced spacetime dimensions
  std::array<int, 4> n{};          // points per axis (powers of two)
  std::array<double, 4> length{};  // box lengths

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
  bool operator==(const LatticeSpec&) const = default;

  static LatticeSpec square(int dim, int n_per_axis, double length_per_axis) {
    LatticeSpec s;
    s.dim = dim;
    for (int d = 0; d < dim; ++d) {
      s.n[static_cast<std::size_t>(d)] = n_per_axis;
      s.length[static_cast<std::size_t>(d)] = length_per_axis;
    }
    return s;
  }
};

struct LatticeField {
  LatticeSpec spec;
  std::vector<std::complex<double>> values;

  explicit LatticeField(const LatticeSpec& s = {}) : spec(s), values(s.total()) {
    validate_spec(s);
  }

  static void validate_spec(const LatticeSpec& s) {
    if (s.dim < 1 || s.dim > 4) throw std::invalid_argument("LatticeField: dim must be 1..4");
    for (int d = 0; d < s.dim; ++d) {
      if (!is_power_of_two(static_cast<std::size_t>(s.n[static_cast<std::size_t>(d)])))
        throw std::invalid_argument("LatticeField: axis sizes must be powers of two");
      if (!(s.length[static_cast<std::size_t>(d)] > 0.0))
        throw std::invalid_argument("LatticeField: box lengths must be positive");
    }
  }

  // integral of |psi|^2 over the box
  double norm_l2() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return s * spec.cell_volume();
  }
};

// Signed integer wave number for DFT bin k on an axis of n points.
inline int fold_mode(int k, int n) { return k < n / 2 ? k : k - n; }

// p^mu p_mu for the integer mode vector (axis 0 timelike).
inline double mode_pp(const LatticeSpec& spec, const std::array<int, 4>& k) {
  double pp = 0.0;
  for (int d = 0; d < spec.dim; ++d) {
    const double p = kTwoPi * fold_mode(k[static_cast<std::size_t>(d)],
                                        spec.n[static_cast<std::size_t>(d)]) /
                     spec.length[static_cast<std::size_t>(d)];
    pp += (d == 0 ? 1.0 : -1.0) * p * p;
  }
  return pp;
}

struct ReductionParams {
  double lambda = 1.0;  // eigenvalue of the momentum conjugate to the 6th axis
  double mass6 = 0.0;   // 6D mass, >= 0
};

// Reduced per-mode frequency E(p) = (M^2 - p.p) / (2 Lambda).
inline double mode_frequency(double pp, const ReductionParams& params) {
  if (params.lambda == 0.0) throw std::invalid_argument("mode_frequency: Lambda must be nonzero");
  return (params.mass6 * params.mass6 - pp) / (2.0 * params.lambda);
}

// 6D mass-shell residual with the light-cone extra block (all momenta
// covariant): g^munu P_mu P_nu - 2 P5 P6 - M^2.
inline double kg6_dispersion_residual(const std::array<double, 4>& p_mu, double p5, double p6,
                                      double mass6) {
  const double pp = p_mu[0] * p_mu[0] - p_mu[1] * p_mu[1] - p_mu[2] * p_mu[2] - p_mu[3] * p_mu[3];
  return pp - 2.0 * p5 * p6 - mass6 * mass6;
}

// Plane-wave residual of the tau-squared quantum constraint on a flat slice;
// evaluates the same expression, in the same order, as the classical
// worldline side so the two agree bitwise.
inline double coupled_dispersion_check(const std::array<double, 4>& p_mu, double p5, double mass) {
  const double pp = p_mu[0] * p_mu[0] - p_mu[1] * p_mu[1] - p_mu[2] * p_mu[2] - p_mu[3] * p_mu[3];
  return pp + p5 * p5 - mass * mass;
}

// ---------------------------------------------------------------------------
// Mode spectra.
// ---------------------------------------------------------------------------

struct ModeSpectrum {
  LatticeSpec spec;
  std::vector<std::complex<double>> amps;  // DFT coefficients, unnormalized forward
};

inline ModeSpectrum to_modes(const LatticeField& f) {
  ModeSpectrum s{f.spec, f.values};
  std::vector<std::size_t> dims;
  for (int d = 0; d < f.spec.dim; ++d)
    dims.push_back(static_cast<std::size_t>(f.spec.n[static_cast<std::size_t>(d)]));
  fft_nd(s.amps, dims, false);
  return s;
}

inline LatticeField to_lattice(const ModeSpectrum& s) {
  LatticeField f(s.spec);
  f.values = s.amps;
  std::vector<std::size_t> dims;
  for (int d = 0; d < s.spec.dim; ++d)
    dims.push_back(static_cast<std::size_t>(s.spec.n[static_cast<std::size_t>(d)]));
  fft_nd(f.values, dims, true);
  return f;
}

// Mode-space norm matching LatticeField::norm_l2 (Parseval).
inline double spectrum_norm_l2(const ModeSpectrum& s) {
  double acc = 0.0;
  for (const auto& a : s.amps) acc += std::norm(a);
  return acc * s.spec.cell_volume() / static_cast<double>(s.spec.total());
}

namespace detail {

template <typename Fn>
void for_each_mode(const LatticeSpec& spec, Fn&& fn) {
  std::array<int, 4> k{};
  const std::size_t total = spec.total();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int d = spec.dim - 1; d >= 0; --d) {
      k[static_cast<std::size_t>(d)] =
          static_cast<int>(rem % static_cast<std::size_t>(spec.n[static_cast<std::size_t>(d)]));
      rem /= static_cast<std::size_t>(spec.n[static_cast<std::size_t>(d)]);
    }
    fn(flat, k);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Evolution.
// ---------------------------------------------------------------------------

using Observer = std::function<void(int step, double tau, const LatticeField&)>;

// Exact spectral evolution of the reduced equation: every snapshot applies
// the accumulated phase to the initial spectrum, so the evolution is a
// semigroup of exact per-mode phases and the norm is conserved per mode.
// A zero snapshot time reproduces the input bitwise.
inline LatticeField stueckelberg_evolve(const LatticeField& psi0, const ReductionParams& params,
                                        double tau_span, int n_steps,
                                        const Observer& observer = {}) {
  if (params.lambda == 0.0)
    throw std::invalid_argument("stueckelberg_evolve: Lambda must be nonzero");
  if (n_steps < 1) throw std::invalid_argument("stueckelberg_evolve: n_steps must be >= 1");

  const ModeSpectrum spectrum0 = to_modes(psi0);
  std::vector<double> freq(psi0.spec.total());
  detail::for_each_mode(psi0.spec, [&](std::size_t flat, const std::array<int, 4>& k) {
    freq[flat] = mode_frequency(mode_pp(psi0.spec, k), params);
  });

  LatticeField out = psi0;
  ModeSpectrum rotated = spectrum0;
  for (int step = 1; step <= n_steps; ++step) {
    const double tau = tau_span * step / n_steps;
    if (tau == 0.0) {
      out = psi0;
    } else {
      for (std::size_t i = 0; i < rotated.amps.size(); ++i) {
        const double phase = -freq[i] * tau;
        rotated.amps[i] =
            spectrum0.amps[i] * std::complex<double>(std::cos(phase), std::sin(phase));
      }
      out = to_lattice(rotated);
    }
    if (observer) observer(step, tau, out);
  }
  return out;
}

// 6D light-cone evolution of a single lambda mode: the field is extended
// with an explicit lambda axis holding e^{i Lambda lambda}, every (p, L)
// mode advances by the tau-frequency P5(p, L) = (p.p - M^2)/(2 L) solved
// from the 6D mass shell, and the Lambda mode is projected back out.
inline LatticeField kg6_evolve_lightcone(const LatticeField& psi0, const ReductionParams& params,
                                         double tau_span, int n_steps,
                                         const Observer& observer = {}, int n_lambda = 4) {
  if (params.lambda == 0.0)
    throw std::invalid_argument("kg6_evolve_lightcone: Lambda must be nonzero");
  if (n_steps < 1) throw std::invalid_argument("kg6_evolve_lightcone: n_steps must be >= 1");
  if (!is_power_of_two(static_cast<std::size_t>(n_lambda)) || n_lambda < 4)
    throw std::invalid_argument("kg6_evolve_lightcone: n_lambda must be a power of two >= 4");

  const int d = psi0.spec.dim;
  const std::size_t base_total = psi0.spec.total();
  const double l_lambda = kTwoPi / std::abs(params.lambda);
  const double h_lambda = l_lambda / n_lambda;

  // phi(x, lambda_j) = psi0(x) e^{i Lambda lambda_j}, lambda as the last axis
  std::vector<std::complex<double>> phi(base_total * static_cast<std::size_t>(n_lambda));
  for (std::size_t ix = 0; ix < base_total; ++ix)
    for (int j = 0; j < n_lambda; ++j) {
      const double lam = params.lambda * (h_lambda * j);
      phi[ix * static_cast<std::size_t>(n_lambda) + static_cast<std::size_t>(j)] =
          psi0.values[ix] * std::complex<double>(std::cos(lam), std::sin(lam));
    }

  std::vector<std::size_t> dims;
  for (int a = 0; a < d; ++a)
    dims.push_back(static_cast<std::size_t>(psi0.spec.n[static_cast<std::size_t>(a)]));
  dims.push_back(static_cast<std::size_t>(n_lambda));
  fft_nd(phi, dims, false);

  // tau-frequency per (p, lambda-bin) mode from the 6D mass shell
  std::vector<double> p5_rate(phi.size(), 0.0);
  detail::for_each_mode(psi0.spec, [&](std::size_t flat, const std::array<int, 4>& k) {
    const double pp = mode_pp(psi0.spec, k);
    for (int j = 0; j < n_lambda; ++j) {
      const double lam_j = kTwoPi * fold_mode(j, n_lambda) / l_lambda;
      const std::size_t at = flat * static_cast<std::size_t>(n_lambda) + static_cast<std::size_t>(j);
      p5_rate[at] = (lam_j == 0.0)
                        ? 0.0
                        : (pp - params.mass6 * params.mass6) / (2.0 * lam_j);
    }
  });

  LatticeField out = psi0;
  std::vector<std::complex<double>> work(phi.size());
  for (int step = 1; step <= n_steps; ++step) {
    const double tau = tau_span * step / n_steps;
    work = phi;
    for (std::size_t i = 0; i < work.size(); ++i) {
      const double phase = p5_rate[i] * tau;
      work[i] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    fft_nd(work, dims, true);
    // project the Lambda mode back out: psi(x) = (1/n) sum_j phi(x, l_j) e^{-i Lambda l_j}
    for (std::size_t ix = 0; ix < base_total; ++ix) {
      std::complex<double> acc(0.0, 0.0);
      for (int j = 0; j < n_lambda; ++j) {
        const double lam = params.lambda * (h_lambda * j);
        acc += work[ix * static_cast<std::size_t>(n_lambda) + static_cast<std::size_t>(j)] *
               std::complex<double>(std::cos(lam), -std::sin(lam));
      }
      out.values[ix] = acc / static_cast<double>(n_lambda);
    }
    if (observer) observer(step, tau, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Plane-wave reduction of the 6D field.
// ---------------------------------------------------------------------------

struct PlaneWave6 {
  std::complex<double> amp;
  std::array<double, 4> p_mu{};  // covariant 4-momentum
  double p5 = 0.0;
  double p6 = 0.0;
};

struct ReducedMode {
  std::complex<double> amp;
  std::array<double, 4> p_mu{};
  double freq;  // tau-frequency E(p); equals -P5 for on-shell input
};

struct ReducedData {
  double lambda;
  double mass6;
  std::vector<ReducedMode> modes;
};

// Strips the common e^{i Lambda lambda} factor from an on-shell plane-wave
// superposition. All waves must share P6 (= Lambda) and satisfy the 6D mass
// shell to `shell_tol`.
inline ReducedData reduce_ansatz(const std::vector<PlaneWave6>& waves,
                                 const ReductionParams& params, double shell_tol = 1e-9) {
  if (waves.empty()) throw std::invalid_argument("reduce_ansatz: empty superposition");
  const double p6 = waves.front().p6;
  if (p6 == 0.0) throw std::invalid_argument("reduce_ansatz: Lambda must be nonzero");
  if (params.lambda != 0.0 && std::abs(params.lambda - p6) > 1e-12 * std::max(1.0, std::abs(p6)))
    throw std::invalid_argument("reduce_ansatz: params.lambda inconsistent with wave P6");

  ReducedData out;
  out.lambda = p6;
  out.mass6 = params.mass6;
  for (const auto& w : waves) {
    if (w.p6 != p6)
      throw std::invalid_argument("reduce_ansatz: mixed P6 values violate the ansatz");
    const double resid = kg6_dispersion_residual(w.p_mu, w.p5, w.p6, params.mass6);
    if (std::abs(resid) > shell_tol)
      throw std::invalid_argument("reduce_ansatz: wave is off the 6D mass shell");
    ReducedMode m;
    m.amp = w.amp;
    m.p_mu = w.p_mu;
    const double pp = w.p_mu[0] * w.p_mu[0] - w.p_mu[1] * w.p_mu[1] - w.p_mu[2] * w.p_mu[2] -
                      w.p_mu[3] * w.p_mu[3];
    m.freq = mode_frequency(pp, ReductionParams{p6, params.mass6});
    out.modes.push_back(m);
  }
  return out;
}

// Rasterizes reduced modes onto a lattice. Every p_mu must sit on a lattice
// bin (p = 2 pi k / L) to round-off.
inline LatticeField rasterize(const ReducedData& data, const LatticeSpec& spec) {
  LatticeField f(spec);
  for (const auto& m : data.modes) {
    std::array<int, 4> k{};
    for (int d = 0; d < spec.dim; ++d) {
      const double kd = m.p_mu[static_cast<std::size_t>(d)] *
                        spec.length[static_cast<std::size_t>(d)] / kTwoPi;
      const long ki = std::lround(kd);
      if (std::abs(kd - static_cast<double>(ki)) > 1e-9)
        throw std::invalid_argument("rasterize: momentum not commensurate with the lattice");
      const int nd = spec.n[static_cast<std::size_t>(d)];
      k[static_cast<std::size_t>(d)] = static_cast<int>(((ki % nd) + nd) % nd);
    }
    detail::for_each_mode(spec, [&](std::size_t flat, const std::array<int, 4>& idx) {
      double phase = 0.0;
      for (int d = 0; d < spec.dim; ++d)
        phase += kTwoPi * fold_mode(k[static_cast<std::size_t>(d)],
                                    spec.n[static_cast<std::size_t>(d)]) *
                 idx[static_cast<std::size_t>(d)] /
                 static_cast<double>(spec.n[static_cast<std::size_t>(d)]);
      f.values[flat] += m.amp * std::complex<double>(std::cos(phase), std::sin(phase));
    });
  }
  return f;
}

// ---------------------------------------------------------------------------
// Observables and snapshot output.
// ---------------------------------------------------------------------------

struct Observables {
  double norm;                   // integral |psi|^2
  std::array<double, 4> mean{};  // <x_d>
  double spread;                 // sqrt(sum_d var_d)
};

inline Observables observables(const LatticeField& f) {
  Observables o{};
  double total = 0.0;
  std::array<double, 4> m1{}, m2{};
  detail::for_each_mode(f.spec, [&](std::size_t flat, const std::array<int, 4>& idx) {
    const double w = std::norm(f.values[flat]);
    total += w;
    for (int d = 0; d < f.spec.dim; ++d) {
      const double x = idx[static_cast<std::size_t>(d)] * f.spec.spacing(d);
      m1[static_cast<std::size_t>(d)] += w * x;
      m2[static_cast<std::size_t>(d)] += w * x * x;
    }
  });
  o.norm = total * f.spec.cell_volume();
  double var_sum = 0.0;
  for (int d = 0; d < f.spec.dim; ++d) {
    const double mean = total > 0.0 ? m1[static_cast<std::size_t>(d)] / total : 0.0;
    o.mean[static_cast<std::size_t>(d)] = mean;
    const double var = total > 0.0 ? m2[static_cast<std::size_t>(d)] / total - mean * mean : 0.0;
    var_sum += std::max(0.0, var);
  }
  o.spread = std::sqrt(var_sum);
  return o;
}

// Little-endian snapshot: u32 dim, u32 sizes[dim], f64 lengths[dim], f64 tau,
// then interleaved re/im doubles in row-major order.
inline void write_snapshot(std::ostream& os, const LatticeField& f, double tau) {
  auto put_u32 = [&os](std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 4);
  };
  auto put_f64 = [&os](double x) {
    std::uint64_t v;
    static_assert(sizeof(v) == sizeof(x));
    __builtin_memcpy(&v, &x, sizeof(v));
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 8);
  };
  put_u32(static_cast<std::uint32_t>(f.spec.dim));
  for (int d = 0; d < f.spec.dim; ++d)
    put_u32(static_cast<std::uint32_t>(f.spec.n[static_cast<std::size_t>(d)]));
  for (int d = 0; d < f.spec.dim; ++d) put_f64(f.spec.length[static_cast<std::size_t>(d)]);
  put_f64(tau);
  for (const auto& v : f.values) {
    put_f64(v.real());
    put_f64(v.imag());
  }
}

}  // namespace taulab::field
