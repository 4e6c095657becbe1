#pragma once

#include <string>
#include <vector>

#include "phigeo/types.hpp"

namespace phigeo {

// One higher-order term c * z^degree of the coefficient polynomial.
struct PolyTerm {
  int degree = 0;
  Complex coeff;
};

// A quadratic differential phi(z) dz^2 on a disk chart |z| <= chart_radius,
// with phi(z) = a z^n + sum_k c_k z^{d_k}, d_k > n, and a != 0, so that the
// origin is a zero of exact order n (order 0 meaning a regular point).
//
// Construction verifies that the origin is the only zero inside the chart:
// the argument-principle winding of phi over |z| = chart_radius must equal n,
// and |phi| must stay well away from zero on a family of sampled circles.
class QuadraticDifferential {
 public:
  QuadraticDifferential(Complex leading, int order,
                        std::vector<PolyTerm> higher = {},
                        double chart_radius = 1.0);

  Complex leading_coefficient() const { return leading_; }
  int order() const { return order_; }
  double chart_radius() const { return radius_; }
  const std::vector<PolyTerm>& higher_terms() const { return higher_; }
  bool is_monomial() const { return higher_.empty(); }

 private:
  Complex leading_;
  int order_ = 0;
  std::vector<PolyTerm> higher_;
  double radius_ = 1.0;
};

// phi(z). Throws Errc::domain outside the chart.
Complex evaluate(const QuadraticDifferential& qd, Complex z);

// phi(z) without the chart-domain check, for integrator stages that probe
// marginally outside the chart disk.
Complex evaluate_raw(const QuadraticDifferential& qd, Complex z);

// phi'(z) (no domain check).
Complex derivative(const QuadraticDifferential& qd, Complex z);

// Total angle of the flat cone the induced metric develops at the origin:
// (order + 2) * pi.
double cone_angle(const QuadraticDifferential& qd);

// Length density |phi(z)|^{1/2} of the induced singular-flat metric.
double metric_density(const QuadraticDifferential& qd, Complex z);

// Natural flat coordinate w(z) = (2/(n+2)) * sqrt(a) * z^{(n+2)/2} for a
// monomial a z^n, principal branches (cut along Arg z = pi).
// Throws Errc::unsupported_form when higher-order terms are present.
Complex natural_parameter(const QuadraticDifferential& qd, Complex z);

// Phase Arg(phi(z) dz^2) in (-pi, pi] of the (unit) direction dz at z.
// Throws Errc::singular_point at z = 0.
double phase(const QuadraticDifferential& qd, Complex z, Complex direction);

// Angle swept around w = 0 by the developed image of the circle |z| = r,
// traversed once counterclockwise. The developing map is anchored so that
// w -> 0 at the singularity (w(z0) is the integral of a continuous branch of
// sqrt(phi) along the radius from 0 to z0). For any admissible phi the sweep
// equals the cone angle; `samples` controls the quadrature resolution.
double developed_circle_sweep(const QuadraticDifferential& qd, double r,
                              int samples = 4096);

std::string to_json(const QuadraticDifferential& qd);
QuadraticDifferential qdiff_from_json(const std::string& text);

// Short textual form, e.g. "(2+0i) z^3 + ..." for logs and CLI echoes.
std::string describe(const QuadraticDifferential& qd);

}  // namespace phigeo
