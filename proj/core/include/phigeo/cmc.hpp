#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "phigeo/qdiff.hpp"
#include "phigeo/types.hpp"

namespace phigeo {

// Square-sampled disk: n x n nodes over [-radius, radius]^2, spacing
// h = 2 radius / (n - 1).  Nodes strictly inside the circle are interior;
// Dirichlet data lives on the circle itself, reached by fractional
// (Shortley-Weller) stencil arms from cut nodes.
struct DiskGrid {
  double radius = 1.0;
  int n = 0;
  double h = 0.0;

  DiskGrid() = default;  // empty sentinel, filled by the producing operation
  DiskGrid(double radius_, int n_);

  int size() const { return n * n; }
  int id(int i, int j) const { return i * n + j; }
  double x(int i) const { return -radius + i * h; }
  double y(int j) const { return -radius + j * h; }
  Complex point(int i, int j) const { return {x(i), y(j)}; }
  bool inside(int i, int j) const {
    double xx = x(i), yy = y(j);
    return xx * xx + yy * yy < radius * radius;
  }
  // interior node whose four neighbours are interior as well
  bool full_stencil(int i, int j) const;
};

using ScalarField = std::vector<double>;    // one value per grid node
using ComplexField = std::vector<Complex>;  // one value per grid node

// Conformal metric e^{2 lambda} |dz|^2 of a disk immersion with constant
// mean curvature H.
struct ConformalMetric {
  DiskGrid grid;
  ScalarField lambda;
  double H = 1.0;
};

// Second-fundamental-form coefficients of the deformation family member at
// parameter t (fields over the grid):
//   l  = H e^{2 lambda} + Re c,   m = -Im c,   n = H e^{2 lambda} - Re c
// with c(z) = e^{-2 i t} phi(z).
struct BonnetForms {
  DiskGrid grid;
  double t = 0.0;
  ScalarField l, m, nn;
};

// Requires a monomial with |leading| = 1 (fold the leading phase into t).
BonnetForms bonnet_forms(const ConformalMetric& metric,
                         const QuadraticDifferential& qd, double t);

// (l - n)/2 - i m, recombining the stored real fields.  For forms built by
// bonnet_forms this recovers e^{-2 i t} phi(z) identically.
ComplexField hopf_coefficient(const BonnetForms& forms);

// Field of residuals of one compatibility equation: dbar(c) - d(H) evaluated
// with centered differences; H is constant across the family, so this
// measures the discrete antiholomorphicity defect of the recombined
// coefficient.  `valid` marks full-stencil nodes (the only ones evaluated).
struct ResidualField {
  ComplexField values;
  std::vector<char> valid;
  double max_abs = 0.0;
};

ResidualField codazzi_residual(const BonnetForms& forms,
                               const ConformalMetric& metric);

// Residual of the curvature compatibility equation
//   |phi|^2 - e^{4 lambda} (H^2 - K),  K = -e^{-2 lambda} Lap_h lambda,
// with the 5-point Laplacian on full-stencil nodes.
ResidualField gauss_residual(const ConformalMetric& metric,
                             const QuadraticDifferential& qd);

// Damped Newton solve of Lap lambda = -H^2 e^{2 lambda} + |phi|^2 e^{-2 lambda}
// with Dirichlet data `boundary` on the circle.  Non-convergence is reported,
// not thrown.
struct GaussSolveResult {
  ConformalMetric metric;
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history;  // sup-norm after each iteration
};

GaussSolveResult solve_gauss(const QuadraticDifferential& qd, double H,
                             const std::function<double(Complex)>& boundary,
                             double radius, int n, int max_iterations = 50);
GaussSolveResult solve_gauss(const QuadraticDifferential& qd, double H,
                             double boundary_value, double radius, int n,
                             int max_iterations = 50);

// Principal curvature directions at the grid node nearest z, from the
// recombined coefficient field: the maximal-curvature direction
// -Arg(c)/2 first, its orthogonal complement second (both in [0, pi)).
// Throws Errc::umbilic where the coefficient vanishes.
std::pair<double, double> principal_directions(const BonnetForms& forms,
                                               Complex z);

// Compare the maximal-curvature line field of the deformed forms against the
// slope-t trajectory field of phi: pointwise direction deviations on an
// annulus, plus Hausdorff distances between integrated curvature lines and
// traced trajectories through shared seed points.
struct CurvatureLineReport {
  double max_direction_deviation = 0.0;  // radians, mod pi
  double max_hausdorff = 0.0;
  int nodes_compared = 0;
  int curves_compared = 0;
};

CurvatureLineReport verify_curvature_lines(const ConformalMetric& metric,
                                           const QuadraticDifferential& qd,
                                           double t, double r_lo, double r_hi,
                                           int curves = 6,
                                           double trace_step = 1e-3);

}  // namespace phigeo
