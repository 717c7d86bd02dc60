#pragma once
//! \file linalg.hpp
//! Small dense vectors and square matrices (dimension <= 6) used by the
//! metric and worldline code. Stack storage, no allocation.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace taulab {

inline constexpr int kMaxDim = 6;

class Vec {
 public:
  Vec() = default;
  explicit Vec(int n) : n_(check_dim(n)) { v_.fill(0.0); }
  Vec(std::initializer_list<double> xs) : n_(check_dim(static_cast<int>(xs.size()))) {
    v_.fill(0.0);
    int i = 0;
    for (double x : xs) v_[i++] = x;
  }

  int size() const { return n_; }
  double& operator[](int i) { return v_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < n_; ++i) v_[i] += o.v_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < n_; ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < n_; ++i) v_[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator*(Vec a, double s) { return a *= s; }

  double max_abs() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i) m = std::max(m, std::abs(v_[i]));
    return m;
  }

 private:
  static int check_dim(int n) {
    if (n < 0 || n > kMaxDim) throw std::invalid_argument("Vec: dimension out of range");
    return n;
  }
  int n_ = 0;
  std::array<double, kMaxDim> v_{};
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

class Mat {
 public:
  Mat() = default;
  explicit Mat(int n) : n_(check_dim(n)) { a_.fill(0.0); }

  static Mat identity(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat diagonal(std::initializer_list<double> d) {
    Mat m(static_cast<int>(d.size()));
    int i = 0;
    for (double x : d) {
      m(i, i) = x;
      ++i;
    }
    return m;
  }

  int size() const { return n_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * kMaxDim + j)]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * kMaxDim + j)]; }

  Mat& operator+=(const Mat& o) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) (*this)(i, j) += o(i, j);
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) (*this)(i, j) -= o(i, j);
    return *this;
  }
  Mat& operator*=(double s) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) (*this)(i, j) *= s;
    return *this;
  }
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(double s, Mat a) { return a *= s; }

  Mat transposed() const {
    Mat t(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m = std::max(m, std::abs((*this)(i, j)));
    return m;
  }

 private:
  static int check_dim(int n) {
    if (n < 0 || n > kMaxDim) throw std::invalid_argument("Mat: dimension out of range");
    return n;
  }
  int n_ = 0;
  std::array<double, kMaxDim * kMaxDim> a_{};
};

inline Mat operator*(const Mat& a, const Mat& b) {
  Mat c(a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int k = 0; k < a.size(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < a.size(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Vec operator*(const Mat& a, const Vec& x) {
  Vec y(a.size());
  for (int i = 0; i < a.size(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.size(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

// Gauss-Jordan with partial pivoting. Throws on (near-)singular input.
inline Mat inverse(Mat a) {
  const int n = a.size();
  Mat inv = Mat::identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < 1e-300) throw std::domain_error("inverse: singular matrix");
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const double d = a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) /= d;
      inv(col, j) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

inline double determinant(Mat a) {
  const int n = a.size();
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (a(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline bool is_symmetric(const Mat& a, double tol = 0.0) {
  for (int i = 0; i < a.size(); ++i)
    for (int j = i + 1; j < a.size(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol) return false;
  return true;
}

}  // namespace taulab
