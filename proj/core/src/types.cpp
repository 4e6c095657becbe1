#include "phigeo/types.hpp"

#include <charconv>
#include <cstdio>

namespace phigeo {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::domain: return "domain";
    case Errc::singular_point: return "singular-point";
    case Errc::unsupported_form: return "unsupported-form";
    case Errc::accuracy: return "accuracy";
    case Errc::resolution: return "resolution";
    case Errc::precondition: return "precondition";
    case Errc::incomparable: return "incomparable";
    case Errc::unrealizable: return "unrealizable";
    case Errc::non_convergence: return "non-convergence";
    case Errc::parameter: return "parameter";
    case Errc::umbilic: return "umbilic";
    case Errc::chart_seam: return "chart-seam";
  }
  return "unknown";
}

HalfInteger HalfInteger::nearest(double x, double* deviation) {
  double doubled = 2.0 * x;
  double rounded = std::round(doubled);
  if (deviation) *deviation = 0.5 * std::abs(doubled - rounded);
  return HalfInteger(static_cast<int>(rounded));
}

std::string HalfInteger::str() const {
  if (twice % 2 == 0) return std::to_string(twice / 2);
  return std::to_string(twice) + "/2";
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Mat3 Mat3::rotation(Vec3 axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  const double x = axis.x, y = axis.y, z = axis.z;
  Mat3 r;
  r.m = {t * x * x + c,     t * x * y - s * z, t * x * z + s * y,
         t * x * y + s * z, t * y * y + c,     t * y * z - s * x,
         t * x * z - s * y, t * y * z + s * x, t * z * z + c};
  return r;
}

}  // namespace phigeo
