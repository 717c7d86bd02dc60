#pragma once
//! \file metric_families.hpp
//! Built-in metric families addressable from config files: flat, conformal,
//! tau-diagonal and kasner5, plus flat 6D blocks for worldline runs.

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "taulab/metric_adm.hpp"

namespace taulab::families {

using Params = std::map<std::string, double>;

inline double param(const Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

// Kasner exponents (1/2, 1/2, 1/2, -1/2) satisfy sum p = sum p^2 = 1 exactly.
inline std::array<double, 4> kasner_exponents(const Params& p) {
  return {param(p, "p0", 0.5), param(p, "p1", 0.5), param(p, "p2", 0.5), param(p, "p3", -0.5)};
}

inline adm::AdmMetric make_adm_metric(const std::string& family, const Params& p = {}) {
  using adm::AdmMetric;
  using adm::Coord;
  if (family == "flat") return AdmMetric::flat();

  if (family == "conformal") {
    // g = a(x)^2 eta with a static trig factor; K = 0, curvature nonzero.
    const double eps = param(p, "eps", 0.05);
    const double k = param(p, "k", 1.0);
    AdmMetric m;
    m.lapse = [](const Coord&) { return 1.0; };
    m.shift = [](const Coord&) { return Vec(4); };
    m.metric4 = [eps, k](const Coord& c) {
      const double a = 1.0 + eps * std::cos(k * c[1]) * std::cos(k * c[3]);
      Mat g = Mat::diagonal({1.0, -1.0, -1.0, -1.0});
      g *= a * a;
      return g;
    };
    return m;
  }

  if (family == "tau-diagonal") {
    // g = diag(1 + s0 tau, -(1 + s1 tau), ...), unit lapse, zero shift.
    const double s0 = param(p, "s0", 1.0);
    const double s1 = param(p, "s1", 0.0);
    const double s2 = param(p, "s2", 0.0);
    const double s3 = param(p, "s3", 0.0);
    AdmMetric m;
    m.lapse = [](const Coord&) { return 1.0; };
    m.shift = [](const Coord&) { return Vec(4); };
    m.metric4 = [s0, s1, s2, s3](const Coord& c) {
      const double tau = c[0];
      return Mat::diagonal(
          {1.0 + s0 * tau, -(1.0 + s1 * tau), -(1.0 + s2 * tau), -(1.0 + s3 * tau)});
    };
    return m;
  }

  if (family == "kasner5") {
    // Slice metric diag(tau^2p0, -tau^2p1, -tau^2p2, -tau^2p3); with unit
    // lapse the composed 5-metric is the vacuum power-law solution when the
    // exponents satisfy sum p = sum p^2 = 1. Valid for tau > 0.
    const auto pw = kasner_exponents(p);
    AdmMetric m;
    m.lapse = [](const Coord&) { return 1.0; };
    m.shift = [](const Coord&) { return Vec(4); };
    m.metric4 = [pw](const Coord& c) {
      const double tau = c[0];
      if (!(tau > 0.0)) throw std::domain_error("kasner5: requires tau > 0");
      return Mat::diagonal({std::pow(tau, 2.0 * pw[0]), -std::pow(tau, 2.0 * pw[1]),
                            -std::pow(tau, 2.0 * pw[2]), -std::pow(tau, 2.0 * pw[3])});
    };
    return m;
  }

  throw std::invalid_argument("unknown metric family: " + family);
}

// 5D metric over (tau, x^0..x^3) for worldline integration.
inline adm::MetricFn make_metric5(const std::string& family, const Params& p = {}) {
  if (family == "conformal5") {
    // Conformally flat 5-metric independent of x^1: the x^1 Killing momentum
    // is conserved along geodesics.
    const double eps = param(p, "eps", 0.01);
    const double k = param(p, "k", 1.0);
    return [eps, k](const adm::PointN& x) {
      const double a = 1.0 + eps * std::sin(k * x[1]) * std::cos(k * x[3]);
      Mat g = Mat::diagonal({1.0, 1.0, -1.0, -1.0, -1.0});
      g *= a * a;
      return g;
    };
  }
  const adm::AdmMetric m = make_adm_metric(family == "flat5" ? "flat" : family, p);
  return [m](const adm::PointN& x) {
    adm::Coord c{x[0], x[1], x[2], x[3], x[4]};
    return adm::compose_5d(m, c);
  };
}

// Flat 6D metrics over (x^0..x^3, x^5, x^6).
inline adm::MetricFn make_metric6(const std::string& family) {
  if (family == "m24") {
    // diagonal (+,-,-,-,-,+) form
    return [](const adm::PointN&) {
      return Mat::diagonal({1.0, -1.0, -1.0, -1.0, -1.0, 1.0});
    };
  }
  if (family == "lightcone6") {
    // eta block plus off-diagonal light-cone pair: G_56 = G_65 = -1
    return [](const adm::PointN&) {
      Mat g(6);
      g(0, 0) = 1.0;
      g(1, 1) = g(2, 2) = g(3, 3) = -1.0;
      g(4, 5) = g(5, 4) = -1.0;
      return g;
    };
  }
  throw std::invalid_argument("unknown 6D metric family: " + family);
}

}  // namespace taulab::families
