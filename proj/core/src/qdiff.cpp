#include "phigeo/qdiff.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace phigeo {

namespace {

// phi on an arbitrary point with no domain clamp (internal use).
Complex eval_raw(const Complex& a, int n, const std::vector<PolyTerm>& higher,
                 Complex z) {
  Complex acc = a * std::pow(z, n);
  for (const auto& t : higher) acc += t.coeff * std::pow(z, t.degree);
  return acc;
}

}  // namespace

QuadraticDifferential::QuadraticDifferential(Complex leading, int order,
                                             std::vector<PolyTerm> higher,
                                             double chart_radius)
    : leading_(leading), order_(order), higher_(std::move(higher)),
      radius_(chart_radius) {
  if (!(std::isfinite(leading_.real()) && std::isfinite(leading_.imag())) ||
      std::abs(leading_) == 0.0)
    throw Error(Errc::parameter, "leading coefficient must be finite and nonzero");
  if (order_ < 0)
    throw Error(Errc::parameter, "zero order must be >= 0");
  if (!(radius_ > 0.0) || !std::isfinite(radius_))
    throw Error(Errc::parameter, "chart radius must be positive");
  for (const auto& t : higher_) {
    if (t.degree <= order_)
      throw Error(Errc::parameter,
                  "higher-order term degree " + std::to_string(t.degree) +
                      " must exceed the zero order " + std::to_string(order_));
    if (!(std::isfinite(t.coeff.real()) && std::isfinite(t.coeff.imag())))
      throw Error(Errc::parameter, "non-finite term coefficient");
  }
  std::sort(higher_.begin(), higher_.end(),
            [](const PolyTerm& x, const PolyTerm& y) { return x.degree < y.degree; });
  for (size_t i = 1; i < higher_.size(); ++i)
    if (higher_[i].degree == higher_[i - 1].degree)
      throw Error(Errc::parameter, "duplicate term degree");

  if (higher_.empty()) return;  // monomial: only zero is at the origin

  // Zero-freeness of phi on 0 < |z| <= R.  The winding number of phi over
  // |z| = R counts all zeros inside (origin included with multiplicity n);
  // it must therefore equal n.  A magnitude floor over sampled circles
  // guards against zeros sitting close to a sample circle.
  const int kSamples = 2048;
  double winding = 0.0;
  double prev = std::arg(eval_raw(leading_, order_, higher_, Complex(radius_, 0)));
  double min_ratio = 1e300;
  for (int k = 1; k <= kSamples; ++k) {
    double th = kTwoPi * k / kSamples;
    Complex z = std::polar(radius_, th);
    Complex v = eval_raw(leading_, order_, higher_, z);
    double scale = std::abs(leading_) * std::pow(radius_, order_);
    min_ratio = std::min(min_ratio, std::abs(v) / scale);
    double cur = std::arg(v);
    winding += wrap_to_pi(cur - prev);
    prev = cur;
  }
  long wn = std::lround(winding / kTwoPi);
  if (wn != order_)
    throw Error(Errc::parameter,
                "coefficient has a zero inside the chart (winding " +
                    std::to_string(wn) + " != order " + std::to_string(order_) + ")");
  for (int ring = 1; ring <= 24; ++ring) {
    double r = radius_ * ring / 24.0;
    double scale = std::abs(leading_) * std::pow(r, order_);
    for (int k = 0; k < 256; ++k) {
      Complex z = std::polar(r, kTwoPi * k / 256.0);
      double ratio = std::abs(eval_raw(leading_, order_, higher_, z)) / scale;
      min_ratio = std::min(min_ratio, ratio);
    }
  }
  if (min_ratio < 1e-9)
    throw Error(Errc::parameter,
                "coefficient nearly vanishes away from the origin");
}

Complex evaluate(const QuadraticDifferential& qd, Complex z) {
  if (std::abs(z) > qd.chart_radius() * (1.0 + 1e-12))
    throw Error(Errc::domain, "point outside the chart disk");
  return eval_raw(qd.leading_coefficient(), qd.order(), qd.higher_terms(), z);
}

Complex evaluate_raw(const QuadraticDifferential& qd, Complex z) {
  return eval_raw(qd.leading_coefficient(), qd.order(), qd.higher_terms(), z);
}

Complex derivative(const QuadraticDifferential& qd, Complex z) {
  const int n = qd.order();
  Complex acc = (n == 0) ? Complex(0, 0)
                         : qd.leading_coefficient() * static_cast<double>(n) *
                               std::pow(z, n - 1);
  for (const auto& t : qd.higher_terms())
    acc += t.coeff * static_cast<double>(t.degree) * std::pow(z, t.degree - 1);
  return acc;
}

double cone_angle(const QuadraticDifferential& qd) {
  return (qd.order() + 2) * kPi;
}

double metric_density(const QuadraticDifferential& qd, Complex z) {
  return std::sqrt(std::abs(evaluate(qd, z)));
}

Complex natural_parameter(const QuadraticDifferential& qd, Complex z) {
  if (!qd.is_monomial())
    throw Error(Errc::unsupported_form,
                "natural parameter requires a monomial coefficient");
  if (std::abs(z) > qd.chart_radius() * (1.0 + 1e-12))
    throw Error(Errc::domain, "point outside the chart disk");
  if (z == Complex(0, 0)) return {0, 0};
  const double half = 0.5 * (qd.order() + 2);
  Complex zpow = std::polar(std::pow(std::abs(z), half), half * std::arg(z));
  return (2.0 / (qd.order() + 2)) * std::sqrt(qd.leading_coefficient()) * zpow;
}

double phase(const QuadraticDifferential& qd, Complex z, Complex direction) {
  if (z == Complex(0, 0))
    throw Error(Errc::singular_point, "phase undefined at the singularity");
  if (std::abs(direction) == 0.0)
    throw Error(Errc::parameter, "zero direction vector");
  return wrap_to_pi(std::arg(evaluate(qd, z)) + 2.0 * std::arg(direction));
}

double developed_circle_sweep(const QuadraticDifferential& qd, double r,
                              int samples) {
  if (!(r > 0.0) || r > qd.chart_radius())
    throw Error(Errc::parameter, "circle radius must lie in (0, chart_radius]");
  if (samples < 64) throw Error(Errc::parameter, "too few samples");

  // sqrt(phi) with branch continuity relative to a reference value.
  auto sqrt_cont = [&](Complex z, Complex ref) {
    Complex s = std::sqrt(evaluate(qd, z));
    double re = s.real() * ref.real() + s.imag() * ref.imag();
    return (re < 0.0) ? -s : s;
  };

  // Anchor: w(z0) = integral of sqrt(phi) along the radius from 0 to z0,
  // so that the development sends the singularity to w = 0.
  Complex z0(r, 0);
  Complex branch = std::sqrt(evaluate(qd, z0));
  const int kRadial = 4096;
  Complex w = {0, 0};
  // integrate outward; integrand ~ rho^{n/2} is integrable at 0
  Complex prev_s = {0, 0};
  Complex prev_z = {0, 0};
  Complex ref = branch;
  for (int k = 1; k <= kRadial; ++k) {
    double t = static_cast<double>(k) / kRadial;
    Complex z = t * z0;
    Complex s = sqrt_cont(z, ref);
    w += 0.5 * (s + prev_s) * (z - prev_z);
    prev_s = s;
    prev_z = z;
    ref = s;
  }

  // March around the circle, accumulating the angle of w about 0.
  double swept = 0.0;
  Complex z_prev = z0;
  Complex s_prev = ref;
  double arg_prev = std::arg(w);
  for (int k = 1; k <= samples; ++k) {
    double th = kTwoPi * k / samples;
    Complex z = std::polar(r, th);
    Complex zm = std::polar(r, kTwoPi * (k - 0.5) / samples);
    Complex sm = sqrt_cont(zm, s_prev);
    Complex s = sqrt_cont(z, sm);
    // Simpson step for the increment of w along the arc
    w += (z - z_prev) * (s_prev + 4.0 * sm + s) / 6.0;
    double a = std::arg(w);
    swept += wrap_to_pi(a - arg_prev);
    arg_prev = a;
    z_prev = z;
    s_prev = s;
  }
  return swept;
}

std::string to_json(const QuadraticDifferential& qd) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["leading"] = {qd.leading_coefficient().real(), qd.leading_coefficient().imag()};
  j["order"] = qd.order();
  j["chart_radius"] = qd.chart_radius();
  auto terms = nlohmann::json::array();
  for (const auto& t : qd.higher_terms())
    terms.push_back({{"degree", t.degree}, {"coeff", {t.coeff.real(), t.coeff.imag()}}});
  j["higher_terms"] = terms;
  return j.dump(2);
}

QuadraticDifferential qdiff_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Complex a(j.at("leading").at(0).get<double>(), j.at("leading").at(1).get<double>());
  int n = j.at("order").get<int>();
  double R = j.value("chart_radius", 1.0);
  std::vector<PolyTerm> higher;
  if (j.contains("higher_terms"))
    for (const auto& t : j["higher_terms"])
      higher.push_back({t.at("degree").get<int>(),
                        Complex(t.at("coeff").at(0).get<double>(),
                                t.at("coeff").at(1).get<double>())});
  return QuadraticDifferential(a, n, std::move(higher), R);
}

std::string describe(const QuadraticDifferential& qd) {
  auto cplx = [](Complex c) {
    return "(" + format_double(c.real()) + (c.imag() < 0 ? "" : "+") +
           format_double(c.imag()) + "i)";
  };
  std::string s = cplx(qd.leading_coefficient()) + " z^" + std::to_string(qd.order());
  for (const auto& t : qd.higher_terms())
    s += " + " + cplx(t.coeff) + " z^" + std::to_string(t.degree);
  return s;
}

}  // namespace phigeo
