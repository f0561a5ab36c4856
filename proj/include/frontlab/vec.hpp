#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>

namespace frontlab {

/// Maximum spatial dimension handled by the library.
inline constexpr int kMaxDim = 3;

/// Small fixed-capacity point/vector in R^n, n <= 3.
///
/// Coordinates beyond the active dimension are kept at zero, so norms and dot
/// products are correct without carrying the dimension around.
struct Vec {
  std::array<double, kMaxDim> c{0.0, 0.0, 0.0};

  constexpr Vec() = default;
  constexpr Vec(std::initializer_list<double> v) {
    std::size_t i = 0;
    for (double x : v) {
      if (i < c.size()) c[i++] = x;
    }
  }

  constexpr double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  constexpr double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  constexpr Vec& operator+=(const Vec& o) {
    for (int i = 0; i < kMaxDim; ++i) c[i] += o.c[i];
    return *this;
  }
  constexpr Vec& operator-=(const Vec& o) {
    for (int i = 0; i < kMaxDim; ++i) c[i] -= o.c[i];
    return *this;
  }
  constexpr Vec& operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
  }

  friend constexpr Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend constexpr Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend constexpr Vec operator*(Vec a, double s) { return a *= s; }
  friend constexpr Vec operator*(double s, Vec a) { return a *= s; }
  friend constexpr Vec operator-(Vec a) { return a *= -1.0; }
  friend constexpr bool operator==(const Vec& a, const Vec& b) { return a.c == b.c; }

  [[nodiscard]] constexpr double dot(const Vec& o) const {
    return c[0] * o.c[0] + c[1] * o.c[1] + c[2] * o.c[2];
  }
  [[nodiscard]] double norm() const { return std::sqrt(dot(*this)); }
  [[nodiscard]] constexpr double norm2() const { return dot(*this); }

  static constexpr Vec unit(int axis) {
    Vec v;
    v.c[static_cast<std::size_t>(axis)] = 1.0;
    return v;
  }
};

inline double distance(const Vec& a, const Vec& b) { return (a - b).norm(); }

inline Vec cross(const Vec& a, const Vec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Integer part [x] and fractional part x^ with x = [x] + x^, x^ in [0,1)^n.
inline Vec floor_part(const Vec& x, int dim) {
  Vec r;
  for (int i = 0; i < dim; ++i) r[i] = std::floor(x[i]);
  return r;
}

inline Vec frac_part(const Vec& x, int dim) { return x - floor_part(x, dim); }

}  // namespace frontlab
