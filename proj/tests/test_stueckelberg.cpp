#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <sstream>

#include "taulab/particle.hpp"
#include "taulab/rng.hpp"
#include "taulab/stueckelberg.hpp"

using namespace taulab;
using field::LatticeField;
using field::LatticeSpec;
using field::ReductionParams;

namespace {

LatticeField gaussian_field(const LatticeSpec& spec, double width, double kx) {
  LatticeField psi(spec);
  field::detail::for_each_mode(spec, [&](std::size_t flat, const std::array<int, 4>& idx) {
    double r2 = 0.0, ph = 0.0;
    for (int d = 0; d < spec.dim; ++d) {
      const double x = idx[static_cast<std::size_t>(d)] * spec.spacing(d) -
                       0.5 * spec.length[static_cast<std::size_t>(d)];
      r2 += x * x;
      ph += kx * x;
    }
    psi.values[flat] =
        std::exp(-r2 / (2.0 * width * width)) * std::complex<double>(std::cos(ph), std::sin(ph));
  });
  return psi;
}

}  // namespace

TEST_CASE("6D dispersion residual: zero momenta, zero mass") {
  CHECK(field::kg6_dispersion_residual({0.0, 0.0, 0.0, 0.0}, 0.0, 0.0, 0.0) == 0.0);
}

TEST_CASE("6D dispersion residual vanishes when m^2 = 2 P5 P6 carries the 4-momentum") {
  // P = (2,0,0,0) so p.p = 4, and P5 P6 = 2
  CHECK(field::kg6_dispersion_residual({2.0, 0.0, 0.0, 0.0}, 1.0, 2.0, 0.0) == 0.0);
  SplitMix64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const double p5 = rng.uniform(-3.0, 3.0);
    const double p6 = rng.uniform(-3.0, 3.0);
    const auto shell = particle::mass_shell_split(p5, p6, 0.0, particle::ExtraBlock::LightCone);
    std::array<double, 4> p{};
    if (shell.m2 >= 0.0)
      p[0] = std::sqrt(shell.m2);
    else
      p[2] = std::sqrt(-shell.m2);
    CHECK(std::abs(field::kg6_dispersion_residual(p, p5, p6, 0.0)) < 1e-12);
  }
}

TEST_CASE("6D dispersion residual with nonzero 6D mass") {
  // on-shell: p.p = M^2 + 2 P5 P6 = 25 + 16 = 41
  const double p0 = std::sqrt(41.0);
  CHECK(std::abs(field::kg6_dispersion_residual({p0, 0.0, 0.0, 0.0}, 2.0, 4.0, 5.0)) < 1e-12);
}

TEST_CASE("ansatz reduction strips the common factor and reports mode frequencies") {
  const double lambda = 1.4, mass6 = 0.0;
  field::PlaneWave6 w;
  w.amp = {1.0, 0.0};
  w.p_mu = {0.8, 0.5, 0.0, 0.0};
  w.p6 = lambda;
  const double pp = w.p_mu[0] * w.p_mu[0] - w.p_mu[1] * w.p_mu[1];
  w.p5 = (pp - mass6 * mass6) / (2.0 * lambda);  // on shell
  const auto red = field::reduce_ansatz({w}, {lambda, mass6});
  REQUIRE(red.modes.size() == 1);
  CHECK(red.lambda == lambda);
  CHECK(red.modes[0].freq == doctest::Approx(-pp / (2.0 * lambda)).epsilon(1e-14));
  CHECK(red.modes[0].freq == doctest::Approx(-w.p5).epsilon(1e-14));
}

TEST_CASE("ansatz reduction with nonzero 6D mass places the mass term with the momenta") {
  const double lambda = -0.9, mass6 = 1.7;
  field::PlaneWave6 w;
  w.amp = {0.5, 0.5};
  w.p_mu = {1.2, 0.4, 0.0, 0.0};
  w.p6 = lambda;
  const double pp = w.p_mu[0] * w.p_mu[0] - w.p_mu[1] * w.p_mu[1];
  w.p5 = (pp - mass6 * mass6) / (2.0 * lambda);
  const auto red = field::reduce_ansatz({w}, {lambda, mass6});
  CHECK(red.modes[0].freq ==
        doctest::Approx((mass6 * mass6 - pp) / (2.0 * lambda)).epsilon(1e-14));
}

TEST_CASE("ansatz reduction rejects mixed P6 and off-shell waves") {
  field::PlaneWave6 a, b;
  a.amp = b.amp = {1.0, 0.0};
  a.p_mu = {0.0, 0.0, 0.0, 0.0};
  a.p6 = 1.0;
  a.p5 = 0.0;
  b = a;
  b.p6 = 2.0;
  CHECK_THROWS_AS(field::reduce_ansatz({a, b}, {0.0, 0.0}), std::invalid_argument);
  field::PlaneWave6 off = a;
  off.p5 = 3.0;  // violates the shell
  CHECK_THROWS_AS(field::reduce_ansatz({off}, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("a single plane wave only rotates its phase") {
  const auto spec = LatticeSpec::square(2, 32, 16.0);
  field::ReducedData data;
  data.lambda = 1.0;
  data.mass6 = 0.0;
  field::ReducedMode mode;
  mode.amp = {1.0, 0.0};
  mode.p_mu = {field::kTwoPi * 3.0 / 16.0, field::kTwoPi * (-2.0) / 16.0, 0.0, 0.0};
  const double pp = mode.p_mu[0] * mode.p_mu[0] - mode.p_mu[1] * mode.p_mu[1];
  mode.freq = field::mode_frequency(pp, {1.0, 0.0});
  data.modes.push_back(mode);
  const LatticeField psi0 = field::rasterize(data, spec);

  const double tau = 3.7;
  const auto out = field::stueckelberg_evolve(psi0, {1.0, 0.0}, tau, 1);
  const std::complex<double> rot(std::cos(-mode.freq * tau), std::sin(-mode.freq * tau));
  double worst = 0.0;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    worst = std::max(worst, std::abs(out.values[i] - rot * psi0.values[i]));
    CHECK(std::abs(std::abs(out.values[i]) - std::abs(psi0.values[i])) < 1e-12);
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("norm is conserved to round-off over many steps") {
  const auto spec = LatticeSpec::square(2, 32, 16.0);
  const LatticeField psi0 = gaussian_field(spec, 1.5, 0.8);
  const double norm0 = psi0.norm_l2();
  double drift = 0.0;
  field::stueckelberg_evolve(psi0, {1.0, 0.0}, 5.0, 200,
                             [&](int, double, const LatticeField& f) {
                               drift = std::max(drift, std::abs(f.norm_l2() - norm0));
                             });
  CHECK(drift < 1e-12);
}

TEST_CASE("zero evolution span reproduces the input bitwise") {
  const auto spec = LatticeSpec::square(2, 16, 8.0);
  const LatticeField psi0 = gaussian_field(spec, 1.0, 0.3);
  const auto out = field::stueckelberg_evolve(psi0, {1.0, 0.0}, 0.0, 3);
  REQUIRE(out.values.size() == psi0.values.size());
  CHECK(std::memcmp(out.values.data(), psi0.values.data(),
                    out.values.size() * sizeof(out.values[0])) == 0);
}

TEST_CASE("evolution composes as a semigroup of exact phases") {
  const auto spec = LatticeSpec::square(2, 32, 16.0);
  const LatticeField psi0 = gaussian_field(spec, 1.2, -0.6);
  const ReductionParams params{0.8, 0.5};
  const auto one_then_two = field::stueckelberg_evolve(
      field::stueckelberg_evolve(psi0, params, 1.3, 1), params, 2.1, 1);
  const auto direct = field::stueckelberg_evolve(psi0, params, 3.4, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < direct.values.size(); ++i)
    worst = std::max(worst, std::abs(one_then_two.values[i] - direct.values[i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("packet means transport at the analytic group velocity") {
  // for the quadratic dispersion E(p) = (M^2 - p_t^2 + p_x^2)/(2 Lambda) the
  // mean position moves exactly at dE/dp: v_t = -p_t/Lambda, v_x = +p_x/Lambda
  const auto spec = LatticeSpec::square(2, 128, 51.2);
  const double kt = 0.6, kx = -0.4, lambda = 1.25, tau = 4.0;
  LatticeField psi(spec);
  field::detail::for_each_mode(spec, [&](std::size_t flat, const std::array<int, 4>& idx) {
    const double t = idx[0] * spec.spacing(0) - 25.6;
    const double x = idx[1] * spec.spacing(1) - 25.6;
    const double ph = kt * t + kx * x;
    psi.values[flat] = std::exp(-(t * t + x * x) / (2.0 * 2.0 * 2.0)) *
                       std::complex<double>(std::cos(ph), std::sin(ph));
  });
  const auto before = field::observables(psi);
  const auto after =
      field::observables(field::stueckelberg_evolve(psi, {lambda, 0.7}, tau, 1));
  CHECK(after.mean[0] - before.mean[0] == doctest::Approx(-kt / lambda * tau).epsilon(1e-4));
  CHECK(after.mean[1] - before.mean[1] == doctest::Approx(kx / lambda * tau).epsilon(1e-4));
}

TEST_CASE("position-space and mode-space norms agree") {
  const auto spec = LatticeSpec::square(2, 64, 20.0);
  const LatticeField psi = gaussian_field(spec, 2.0, 1.1);
  const auto modes = field::to_modes(psi);
  CHECK(psi.norm_l2() == doctest::Approx(field::spectrum_norm_l2(modes)).epsilon(1e-13));
  const auto back = field::to_lattice(modes);
  double worst = 0.0;
  for (std::size_t i = 0; i < psi.values.size(); ++i)
    worst = std::max(worst, std::abs(psi.values[i] - back.values[i]));
  CHECK(worst < 1e-13);
}

TEST_CASE("6D light-cone path matches the reduced path for random superpositions") {
  SplitMix64 rng(53);
  const auto spec = LatticeSpec::square(2, 64, 25.6);
  for (int trial = 0; trial < 3; ++trial) {
    field::ReducedData data;
    data.lambda = (trial == 1 ? -1.3 : 0.9);
    data.mass6 = (trial == 2 ? 0.7 : 0.0);
    for (int m = 0; m < 5; ++m) {
      field::ReducedMode mode;
      mode.amp = {rng.normal(), rng.normal()};
      const int kt = static_cast<int>(rng.next_u64() % 13) - 6;
      const int kx = static_cast<int>(rng.next_u64() % 13) - 6;
      mode.p_mu = {field::kTwoPi * kt / spec.length[0], field::kTwoPi * kx / spec.length[1],
                   0.0, 0.0};
      const double pp = mode.p_mu[0] * mode.p_mu[0] - mode.p_mu[1] * mode.p_mu[1];
      mode.freq = field::mode_frequency(pp, {data.lambda, data.mass6});
      data.modes.push_back(mode);
    }
    const LatticeField psi0 = field::rasterize(data, spec);
    const ReductionParams params{data.lambda, data.mass6};
    const auto a = field::stueckelberg_evolve(psi0, params, 6.0, 2);
    const auto b = field::kg6_evolve_lightcone(psi0, params, 6.0, 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
      worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("flipping the reduction eigenvalue conjugates the evolution") {
  const auto spec = LatticeSpec::square(2, 32, 16.0);
  const LatticeField psi0 = gaussian_field(spec, 1.4, 0.9);
  LatticeField conj0 = psi0;
  for (auto& v : conj0.values) v = std::conj(v);

  const auto minus = field::stueckelberg_evolve(psi0, {-1.1, 0.3}, 2.5, 1);
  const auto plus_conj = field::stueckelberg_evolve(conj0, {1.1, 0.3}, 2.5, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < minus.values.size(); ++i)
    worst = std::max(worst, std::abs(minus.values[i] - std::conj(plus_conj.values[i])));
  CHECK(worst < 1e-12);
}

TEST_CASE("the zero-momentum massless mode is static under the 6D path") {
  const auto spec = LatticeSpec::square(2, 16, 8.0);
  LatticeField psi0(spec);
  for (auto& v : psi0.values) v = {0.7, -0.2};
  const auto out = field::kg6_evolve_lightcone(psi0, {1.0, 0.0}, 4.0, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    worst = std::max(worst, std::abs(out.values[i] - psi0.values[i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("full four-dimensional reduced spacetime is supported") {
  const auto spec = LatticeSpec::square(4, 16, 8.0);
  field::ReducedData data;
  data.lambda = 0.8;
  data.mass6 = 0.3;
  for (int m = 0; m < 3; ++m) {
    field::ReducedMode mode;
    mode.amp = {0.5 + 0.1 * m, -0.2};
    mode.p_mu = {field::kTwoPi * (m + 1) / 8.0, field::kTwoPi * (2 - m) / 8.0,
                 field::kTwoPi * m / 8.0, field::kTwoPi * 1.0 / 8.0};
    const double pp = mode.p_mu[0] * mode.p_mu[0] - mode.p_mu[1] * mode.p_mu[1] -
                      mode.p_mu[2] * mode.p_mu[2] - mode.p_mu[3] * mode.p_mu[3];
    mode.freq = field::mode_frequency(pp, {data.lambda, data.mass6});
    data.modes.push_back(mode);
  }
  const LatticeField psi0 = field::rasterize(data, spec);
  const double norm0 = psi0.norm_l2();
  const auto red = field::stueckelberg_evolve(psi0, {0.8, 0.3}, 2.0, 1);
  const auto full = field::kg6_evolve_lightcone(psi0, {0.8, 0.3}, 2.0, 1);
  CHECK(std::abs(red.norm_l2() - norm0) < 1e-12 * norm0);
  double worst = 0.0;
  for (std::size_t i = 0; i < red.values.size(); ++i)
    worst = std::max(worst, std::abs(red.values[i] - full.values[i]));
  CHECK(worst < 1e-10);
}

TEST_CASE("higher-dimensional lattices evolve with the same guarantees") {
  // three reduced dimensions (t, x, y), metric (+,-,-)
  const auto spec = LatticeSpec::square(3, 16, 8.0);
  LatticeField psi0(spec);
  field::detail::for_each_mode(spec, [&](std::size_t flat, const std::array<int, 4>& idx) {
    double r2 = 0.0;
    for (int d = 0; d < 3; ++d) {
      const double x = idx[static_cast<std::size_t>(d)] * spec.spacing(d) - 4.0;
      r2 += x * x;
    }
    psi0.values[flat] = std::exp(-r2);
  });
  const double norm0 = psi0.norm_l2();
  double drift = 0.0;
  const auto out = field::stueckelberg_evolve(psi0, {1.3, 0.4}, 3.0, 10,
                                              [&](int, double, const LatticeField& f) {
                                                drift = std::max(drift,
                                                                 std::abs(f.norm_l2() - norm0));
                                              });
  CHECK(drift < 1e-12);
  const auto full = field::kg6_evolve_lightcone(psi0, {1.3, 0.4}, 3.0, 1);
  const auto red = field::stueckelberg_evolve(psi0, {1.3, 0.4}, 3.0, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < red.values.size(); ++i)
    worst = std::max(worst, std::abs(red.values[i] - full.values[i]));
  CHECK(worst < 1e-10);
}

TEST_CASE("zero reduction eigenvalue is rejected") {
  const auto spec = LatticeSpec::square(2, 16, 8.0);
  const LatticeField psi0 = gaussian_field(spec, 1.0, 0.0);
  CHECK_THROWS_AS(field::stueckelberg_evolve(psi0, {0.0, 0.0}, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(field::kg6_evolve_lightcone(psi0, {0.0, 0.0}, 1.0, 1), std::invalid_argument);
}

TEST_CASE("plane-wave residual of the coupled constraint matches the classical value bitwise") {
  SplitMix64 rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    std::array<double, 4> p{};
    for (auto& v : p) v = rng.uniform(-5.0, 5.0);
    const double p5 = rng.uniform(-5.0, 5.0);
    const double mass = rng.uniform(0.0, 5.0);
    const double quantum = field::coupled_dispersion_check(p, p5, mass);
    const double classical = particle::flat5_shell_residual(p, p5, mass);
    CHECK(quantum == classical);
  }
  CHECK(field::coupled_dispersion_check({5.0, 0.0, 0.0, 0.0}, 0.0, 5.0) == 0.0);
  CHECK(field::coupled_dispersion_check({3.0, 0.0, 0.0, 0.0}, 4.0, 5.0) == 0.0);
}

TEST_CASE("snapshot header carries dimensions, lengths and tau") {
  const auto spec = LatticeSpec::square(2, 4, 2.0);
  LatticeField psi(spec);
  psi.values[0] = {1.0, -2.0};
  std::ostringstream os(std::ios::binary);
  field::write_snapshot(os, psi, 1.25);
  const std::string buf = os.str();
  REQUIRE(buf.size() == 4 + 2 * 4 + 2 * 8 + 8 + 16 * 16);
  auto u32_at = [&buf](std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i)
      v = (v << 8) | static_cast<unsigned char>(buf[off + static_cast<std::size_t>(i)]);
    return v;
  };
  CHECK(u32_at(0) == 2u);
  CHECK(u32_at(4) == 4u);
  CHECK(u32_at(8) == 4u);
  double tau = 0.0, len0 = 0.0, re0 = 0.0, im0 = 0.0;
  std::memcpy(&len0, buf.data() + 12, 8);
  std::memcpy(&tau, buf.data() + 28, 8);
  std::memcpy(&re0, buf.data() + 36, 8);
  std::memcpy(&im0, buf.data() + 44, 8);
  CHECK(len0 == 2.0);
  CHECK(tau == 1.25);
  CHECK(re0 == 1.0);
  CHECK(im0 == -2.0);
}
