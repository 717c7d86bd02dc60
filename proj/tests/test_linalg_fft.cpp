#include <doctest.h>

#include <complex>

#include "taulab/fft.hpp"
#include "taulab/linalg.hpp"
#include "taulab/rng.hpp"

using taulab::Mat;
using taulab::Vec;

TEST_CASE("matrix inverse round trip") {
  taulab::SplitMix64 rng(3);
  for (int n : {2, 3, 4, 5, 6}) {
    Mat a = Mat::identity(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) += 0.4 * rng.uniform(-1.0, 1.0);
    const Mat inv = taulab::inverse(a);
    CHECK(max_abs_diff(a * inv, Mat::identity(n)) < 1e-12);
    CHECK(max_abs_diff(inv * a, Mat::identity(n)) < 1e-12);
  }
}

TEST_CASE("determinant of diagonal and singular matrices") {
  CHECK(taulab::determinant(Mat::diagonal({2.0, -3.0, 1.0, 1.0})) == doctest::Approx(-6.0));
  Mat s(3);
  s(0, 0) = 1.0;
  s(1, 1) = 1.0;  // rank 2
  CHECK(taulab::determinant(s) == 0.0);
  CHECK_THROWS_AS(taulab::inverse(s), std::domain_error);
}

TEST_CASE("fft inverts itself and preserves energy") {
  taulab::SplitMix64 rng(5);
  std::vector<std::complex<double>> x(128);
  for (auto& v : x) v = {rng.normal(), rng.normal()};
  const auto orig = x;
  double e_time = 0.0;
  for (const auto& v : x) e_time += std::norm(v);

  taulab::fft_inplace(x.data(), x.size(), false);
  double e_freq = 0.0;
  for (const auto& v : x) e_freq += std::norm(v);
  CHECK(e_freq / static_cast<double>(x.size()) == doctest::Approx(e_time).epsilon(1e-13));

  taulab::fft_inplace(x.data(), x.size(), true);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - orig[i]));
  CHECK(worst < 1e-13);
}

TEST_CASE("fft of a unit impulse is flat") {
  std::vector<std::complex<double>> x(16);
  x[0] = 1.0;
  taulab::fft_inplace(x.data(), x.size(), false);
  for (const auto& v : x) CHECK(std::abs(v - std::complex<double>(1.0, 0.0)) < 1e-14);
}

TEST_CASE("fft rejects non-power-of-two lengths") {
  std::vector<std::complex<double>> x(12);
  CHECK_THROWS_AS(taulab::fft_inplace(x.data(), x.size(), false), std::invalid_argument);
}

TEST_CASE("nd transform equals per-axis composition") {
  taulab::SplitMix64 rng(9);
  std::vector<std::complex<double>> x(8 * 4);
  for (auto& v : x) v = {rng.normal(), rng.normal()};
  auto rows_then_cols = x;
  // rows (last axis, stride 1)
  for (std::size_t r = 0; r < 8; ++r)
    taulab::fft_inplace(rows_then_cols.data() + r * 4, 4, false);
  // columns
  std::vector<std::complex<double>> col(8);
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t r = 0; r < 8; ++r) col[r] = rows_then_cols[r * 4 + c];
    taulab::fft_inplace(col.data(), 8, false);
    for (std::size_t r = 0; r < 8; ++r) rows_then_cols[r * 4 + c] = col[r];
  }
  taulab::fft_nd(x, {8, 4}, false);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    worst = std::max(worst, std::abs(x[i] - rows_then_cols[i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("seeded generator reproduces its stream") {
  taulab::SplitMix64 a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  taulab::SplitMix64 c(43);
  CHECK(taulab::SplitMix64(42).next_u64() != c.next_u64());
}
