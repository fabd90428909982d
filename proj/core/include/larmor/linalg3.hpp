#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace larmor {

/// Plain 3-vector with value semantics. Used for positions, velocities,
/// magnetic fields and forces alike.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator/(Vec3 a, double s) { return a *= 1.0 / s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

/// Cross product a x b.
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec3& a) {
  return std::max({std::fabs(a.x), std::fabs(a.y), std::fabs(a.z)});
}

inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

/// 3x3 matrix, row-major storage.
struct Mat3 {
  std::array<double, 9> m{};

  constexpr double& operator()(int r, int c) { return m[static_cast<size_t>(3 * r + c)]; }
  constexpr double operator()(int r, int c) const { return m[static_cast<size_t>(3 * r + c)]; }

  static constexpr Mat3 identity() { return Mat3{{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
  static constexpr Mat3 zero() { return Mat3{}; }

  constexpr Mat3& operator+=(const Mat3& o) {
    for (int i = 0; i < 9; ++i) m[static_cast<size_t>(i)] += o.m[static_cast<size_t>(i)];
    return *this;
  }
  constexpr Mat3& operator-=(const Mat3& o) {
    for (int i = 0; i < 9; ++i) m[static_cast<size_t>(i)] -= o.m[static_cast<size_t>(i)];
    return *this;
  }
  constexpr Mat3& operator*=(double s) {
    for (double& v : m) v *= s;
    return *this;
  }
};

constexpr Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
constexpr Mat3 operator-(Mat3 a, const Mat3& b) { return a -= b; }
constexpr Mat3 operator*(double s, Mat3 a) { return a *= s; }
constexpr Mat3 operator*(Mat3 a, double s) { return a *= s; }

constexpr Vec3 matvec(const Mat3& m, const Vec3& v) {
  return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
          m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
          m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

constexpr Vec3 operator*(const Mat3& m, const Vec3& v) { return matvec(m, v); }

constexpr Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
  return r;
}

constexpr Mat3 operator*(const Mat3& a, const Mat3& b) { return matmul(a, b); }

constexpr Mat3 transpose(const Mat3& a) {
  return Mat3{{a(0, 0), a(1, 0), a(2, 0), a(0, 1), a(1, 1), a(2, 1), a(0, 2), a(1, 2), a(2, 2)}};
}

inline double max_abs(const Mat3& a) {
  double r = 0.0;
  for (double v : a.m) r = std::max(r, std::fabs(v));
  return r;
}

inline bool is_finite(const Mat3& a) {
  for (double v : a.m) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

/// Hat map: the skew-symmetric matrix with skew(b) * v == cross(v, b).
constexpr Mat3 skew(const Vec3& b) {
  return Mat3{{0.0, b.z, -b.y, -b.z, 0.0, b.x, b.y, -b.x, 0.0}};
}

}  // namespace larmor
