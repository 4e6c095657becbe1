#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace phigeo {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi_v<double>;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

// ---------------------------------------------------------------------------
// Error handling
// ---------------------------------------------------------------------------

enum class Errc {
  domain,            // point outside the chart / invalid evaluation domain
  singular_point,    // operation undefined at the singular point itself
  unsupported_form,  // operation requires a pure monomial coefficient
  accuracy,          // requested tolerance could not be maintained
  resolution,        // sampling too coarse to resolve the structure
  precondition,      // documented precondition violated by the caller
  incomparable,      // objects live over different singularity orders
  unrealizable,      // no admissible geometric realization exists
  non_convergence,   // iterative solver failed to converge
  parameter,         // malformed or out-of-range construction parameter
  umbilic,           // directions undefined: the two curvatures coincide
  chart_seam         // feature sits on a chart boundary; switch charts
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// ---------------------------------------------------------------------------
// Angle helpers
// ---------------------------------------------------------------------------

// Wrap to (-pi, pi].
inline double wrap_to_pi(double a) {
  a = std::remainder(a, kTwoPi);  // (-pi, pi] up to the sign of -pi
  if (a <= -kPi) a += kTwoPi;
  return a;
}

// Wrap to [0, 2*pi).
inline double wrap_two_pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  // fmod can return 2*pi for inputs just below a multiple of 2*pi
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

// Wrap a line direction (angle mod pi) to [0, pi).
inline double wrap_line(double a) {
  a = std::fmod(a, kPi);
  if (a < 0) a += kPi;
  if (a >= kPi) a -= kPi;
  return a;
}

// Signed distance between two line directions, in (-pi/2, pi/2].
inline double line_angle_diff(double a, double b) {
  double d = std::remainder(a - b, kPi);
  if (d <= -kPi / 2) d += kPi;
  return d;
}

// ---------------------------------------------------------------------------
// Half-integers (indices of line-field singularities live in (1/2) * Z)
// ---------------------------------------------------------------------------

struct HalfInteger {
  int twice = 0;  // the represented value is twice/2

  constexpr HalfInteger() = default;
  constexpr explicit HalfInteger(int twice_value) : twice(twice_value) {}

  static constexpr HalfInteger whole(int k) { return HalfInteger(2 * k); }

  double value() const { return 0.5 * static_cast<double>(twice); }

  // Nearest half-integer to x; *deviation receives |x - result| when non-null.
  static HalfInteger nearest(double x, double* deviation = nullptr);

  std::string str() const;  // "3/2", "-1/2", "2", ...

  friend constexpr bool operator==(HalfInteger a, HalfInteger b) {
    return a.twice == b.twice;
  }
  friend constexpr bool operator!=(HalfInteger a, HalfInteger b) {
    return a.twice != b.twice;
  }
  friend constexpr bool operator<(HalfInteger a, HalfInteger b) {
    return a.twice < b.twice;
  }
  friend constexpr HalfInteger operator+(HalfInteger a, HalfInteger b) {
    return HalfInteger(a.twice + b.twice);
  }
  friend constexpr HalfInteger operator-(HalfInteger a, HalfInteger b) {
    return HalfInteger(a.twice - b.twice);
  }
};

// ---------------------------------------------------------------------------
// Small 3D linear algebra (kept deliberately tiny; heavy lifting stays in
// translation units that pull in a real linear-algebra package)
// ---------------------------------------------------------------------------

struct Vec3 {
  double x = 0, y = 0, z = 0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
  friend Vec3 operator*(Vec3 v, double s) { return s * v; }
  friend Vec3 operator/(Vec3 v, double s) { return {v.x / s, v.y / s, v.z / s}; }
  Vec3& operator+=(Vec3 o) { x += o.x; y += o.y; z += o.z; return *this; }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(Vec3 a) { return a / norm(a); }

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{};

  static Mat3 identity() {
    Mat3 r;
    r.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return r;
  }
  static Mat3 diagonal(double a, double b, double c) {
    Mat3 r;
    r.m = {a, 0, 0, 0, b, 0, 0, 0, c};
    return r;
  }
  // Rotation by `angle` about a unit axis.
  static Mat3 rotation(Vec3 axis, double angle);

  double operator()(int i, int j) const { return m[3 * i + j]; }
  double& operator()(int i, int j) { return m[3 * i + j]; }

  friend Vec3 operator*(const Mat3& a, Vec3 v) {
    return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
            a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
            a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
  }
  friend Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
        r(i, j) = s;
      }
    return r;
  }
};

// Shortest round-trip decimal formatting for doubles.
std::string format_double(double v);

}  // namespace phigeo
