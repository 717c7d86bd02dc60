#pragma once
//! \file clifford.hpp
//! Exact arithmetic in the Clifford algebra Cl(1,3) over the 16-blade basis,
//! the induced blade metric with its (8,8) signature, and the six-blade
//! subspace of signature (2,4).
//!
//! Blades are indexed by a 4-bit mask: bit b set means the basis vector
//! gamma_b is present, b in {0,1,2,3}. Blades are stored in canonical order
//! of ascending index; orientation is carried by the coefficient sign.

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>

namespace taulab::clifford {

inline constexpr int kBladeCount = 16;

// Vector metric eta = diag(+1, -1, -1, -1).
inline constexpr std::array<int, 4> kEta = {+1, -1, -1, -1};

inline int blade_grade(unsigned mask) { return std::popcount(mask & 0xFu); }

struct Blade {
  unsigned mask = 0;
  int grade() const { return blade_grade(mask); }
};

// Sign (-1)^s where s counts the transpositions needed to merge the factors
// of blade `a` with those of blade `b` into canonical ascending order.
inline int reorder_sign(unsigned a, unsigned b) {
  int swaps = 0;
  a >>= 1;
  while (a != 0) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return (swaps & 1) ? -1 : +1;
}

struct BladeProduct {
  unsigned mask;
  int sign;  // +1 or -1
};

// Geometric product of two basis blades: gamma_a gamma_b = sign * gamma_(a^b).
inline BladeProduct blade_product(unsigned a, unsigned b) {
  int sign = reorder_sign(a, b);
  unsigned common = a & b;
  while (common != 0) {
    const unsigned bit = common & (~common + 1u);
    sign *= kEta[std::countr_zero(bit)];
    common &= common - 1u;
  }
  return {a ^ b, sign};
}

// Reversion sign (-1)^{r(r-1)/2} on a grade-r blade.
inline int reversion_sign(int grade) {
  return ((grade * (grade - 1) / 2) & 1) ? -1 : +1;
}

template <typename T>
struct Multivector {
  std::array<T, kBladeCount> c{};

  static Multivector scalar(T v) {
    Multivector m;
    m.c[0] = v;
    return m;
  }
  static Multivector blade(unsigned mask, T coeff = T(1)) {
    if (mask >= kBladeCount) throw std::invalid_argument("blade: mask out of range");
    Multivector m;
    m.c[mask] = coeff;
    return m;
  }
  static Multivector basis_vector(int mu) {
    if (mu < 0 || mu > 3) throw std::invalid_argument("basis_vector: index out of range");
    return blade(1u << mu);
  }

  T scalar_part() const { return c[0]; }

  Multivector grade_projection(int r) const {
    Multivector out;
    for (unsigned m = 0; m < kBladeCount; ++m)
      if (blade_grade(m) == r) out.c[m] = c[m];
    return out;
  }

  Multivector& operator+=(const Multivector& o) {
    for (int i = 0; i < kBladeCount; ++i) c[i] += o.c[i];
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    for (int i = 0; i < kBladeCount; ++i) c[i] -= o.c[i];
    return *this;
  }
  Multivector& operator*=(T s) {
    for (int i = 0; i < kBladeCount; ++i) c[i] *= s;
    return *this;
  }
  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(T s, Multivector a) { return a *= s; }
  friend Multivector operator*(Multivector a, T s) { return a *= s; }
  friend bool operator==(const Multivector& a, const Multivector& b) { return a.c == b.c; }
};

template <typename T>
Multivector<T> geometric_product(const Multivector<T>& a, const Multivector<T>& b) {
  Multivector<T> out;
  for (unsigned i = 0; i < kBladeCount; ++i) {
    if (a.c[i] == T(0)) continue;
    for (unsigned j = 0; j < kBladeCount; ++j) {
      if (b.c[j] == T(0)) continue;
      const BladeProduct p = blade_product(i, j);
      out.c[p.mask] += (p.sign > 0 ? a.c[i] * b.c[j] : -(a.c[i] * b.c[j]));
    }
  }
  return out;
}

template <typename T>
Multivector<T> reverse(const Multivector<T>& a) {
  Multivector<T> out;
  for (unsigned m = 0; m < kBladeCount; ++m)
    out.c[m] = (reversion_sign(blade_grade(m)) > 0) ? a.c[m] : -a.c[m];
  return out;
}

template <typename T>
T scalar_part(const Multivector<T>& a) {
  return a.c[0];
}

struct CliffordMetric {
  std::array<int, kBladeCount> diag{};  // norm sign per blade mask
  std::pair<int, int> signature{0, 0};  // (n_plus, n_minus)
};

// Blade metric diag[M] = <reverse(gamma_M) gamma_M>_0, computed by explicit
// product expansion over integer multivectors. The grade-0 projection is
// taken as the full definition of the scalar product; for mixed-grade
// arguments every cross-grade term is projected away.
inline CliffordMetric clifford_metric() {
  CliffordMetric g;
  for (unsigned m = 0; m < kBladeCount; ++m) {
    const auto blade = Multivector<std::int64_t>::blade(m);
    const std::int64_t s = scalar_part(geometric_product(reverse(blade), blade));
    g.diag[m] = static_cast<int>(s);
    if (s > 0)
      ++g.signature.first;
    else
      ++g.signature.second;
  }
  return g;
}

struct SubspaceEmbedding {
  std::array<unsigned, 6> blades{};         // as requested (ascending mask order)
  std::array<int, 6> signs{};               // induced diagonal metric entries
  std::pair<int, int> signature{0, 0};      // (n_plus, n_minus)
  std::array<unsigned, 6> ordered{};        // reordered to the (+----+) sign pattern
  std::array<int, 6> ordered_signs{};
};

// Six-blade subspace with induced signature (2,4). The default selection
// {1, gamma_0..gamma_3, gamma_0123} is the grade-homogeneous choice that
// contains all four basis vectors. Custom subsets are validated.
inline SubspaceEmbedding m24_embedding(std::span<const unsigned, 6> subset) {
  const CliffordMetric g = clifford_metric();
  SubspaceEmbedding e;
  int plus = 0, minus = 0;
  for (int i = 0; i < 6; ++i) {
    const unsigned m = subset[static_cast<std::size_t>(i)];
    if (m >= kBladeCount) throw std::invalid_argument("m24_embedding: blade mask out of range");
    for (int j = 0; j < i; ++j)
      if (e.blades[static_cast<std::size_t>(j)] == m)
        throw std::invalid_argument("m24_embedding: duplicate blade");
    e.blades[static_cast<std::size_t>(i)] = m;
    e.signs[static_cast<std::size_t>(i)] = g.diag[m];
    (g.diag[m] > 0 ? plus : minus)++;
  }
  e.signature = {plus, minus};
  if (plus != 2 || minus != 4)
    throw std::invalid_argument("m24_embedding: subset does not have signature (2,4)");

  // Congruent diagonal ordering with sign pattern (+,-,-,-,-,+). A grade-1
  // positive blade (gamma_0 in the default set) leads when available.
  std::array<unsigned, 2> pos{};
  int npos = 0, neg_at = 1;
  for (int i = 0; i < 6; ++i)
    if (e.signs[static_cast<std::size_t>(i)] > 0)
      pos[static_cast<std::size_t>(npos++)] = e.blades[static_cast<std::size_t>(i)];
  if (blade_grade(pos[1]) == 1 && blade_grade(pos[0]) != 1) std::swap(pos[0], pos[1]);
  e.ordered[0] = pos[0];
  e.ordered[5] = pos[1];
  e.ordered_signs[0] = e.ordered_signs[5] = +1;
  for (int i = 0; i < 6; ++i) {
    if (e.signs[static_cast<std::size_t>(i)] > 0) continue;
    e.ordered[static_cast<std::size_t>(neg_at)] = e.blades[static_cast<std::size_t>(i)];
    e.ordered_signs[static_cast<std::size_t>(neg_at)] = -1;
    ++neg_at;
  }
  return e;
}

inline SubspaceEmbedding m24_embedding() {
  // {1, gamma_0, gamma_1, gamma_2, gamma_3, gamma_0123}
  static constexpr std::array<unsigned, 6> kDefault = {0u, 1u, 2u, 4u, 8u, 15u};
  return m24_embedding(std::span<const unsigned, 6>(kDefault));
}

}  // namespace taulab::clifford
