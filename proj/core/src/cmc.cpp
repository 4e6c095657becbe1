#include "phigeo/cmc.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "phigeo/geodesic.hpp"

namespace phigeo {

DiskGrid::DiskGrid(double radius_, int n_) : radius(radius_), n(n_) {
  if (!(radius > 0.0)) throw Error(Errc::parameter, "grid radius must be positive");
  if (n < 16) throw Error(Errc::parameter, "grid needs at least 16 nodes per side");
  h = 2.0 * radius / (n - 1);
}

bool DiskGrid::full_stencil(int i, int j) const {
  if (i < 1 || j < 1 || i > n - 2 || j > n - 2) return false;
  return inside(i, j) && inside(i - 1, j) && inside(i + 1, j) &&
         inside(i, j - 1) && inside(i, j + 1);
}

BonnetForms bonnet_forms(const ConformalMetric& metric,
                         const QuadraticDifferential& qd, double t) {
  if (!qd.is_monomial())
    throw Error(Errc::precondition, "deformation family needs a monomial");
  if (std::abs(std::abs(qd.leading_coefficient()) - 1.0) > 1e-12)
    throw Error(Errc::precondition,
                "normalize |leading| to 1 and fold its phase into t");
  const DiskGrid& g = metric.grid;
  if (g.radius > qd.chart_radius() * (1 + 1e-12))
    throw Error(Errc::domain, "grid leaves the chart disk");
  if (metric.lambda.size() != static_cast<size_t>(g.size()))
    throw Error(Errc::parameter, "metric field size mismatch");

  BonnetForms f;
  f.grid = g;
  f.t = t;
  f.l.resize(g.size());
  f.m.resize(g.size());
  f.nn.resize(g.size());
  const Complex rot = std::polar(1.0, -2.0 * t);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      int id = g.id(i, j);
      Complex c = rot * evaluate_raw(qd, g.point(i, j));
      double he2l = metric.H * std::exp(2.0 * metric.lambda[id]);
      f.l[id] = he2l + c.real();
      f.m[id] = -c.imag();
      f.nn[id] = he2l - c.real();
    }
  return f;
}

ComplexField hopf_coefficient(const BonnetForms& forms) {
  ComplexField c(forms.grid.size());
  for (int id = 0; id < forms.grid.size(); ++id)
    c[id] = Complex(0.5 * (forms.l[id] - forms.nn[id]), -forms.m[id]);
  return c;
}

ResidualField codazzi_residual(const BonnetForms& forms,
                               const ConformalMetric& metric) {
  (void)metric;  // H is constant across the family: its gradient vanishes
  const DiskGrid& g = forms.grid;
  ComplexField c = hopf_coefficient(forms);
  ResidualField out;
  out.values.assign(g.size(), Complex(0, 0));
  out.valid.assign(g.size(), 0);
  for (int i = 1; i < g.n - 1; ++i)
    for (int j = 1; j < g.n - 1; ++j) {
      if (!g.full_stencil(i, j)) continue;
      int id = g.id(i, j);
      Complex dx = (c[g.id(i + 1, j)] - c[g.id(i - 1, j)]) / (2.0 * g.h);
      Complex dy = (c[g.id(i, j + 1)] - c[g.id(i, j - 1)]) / (2.0 * g.h);
      Complex dbar = 0.5 * (dx + Complex(0, 1) * dy);
      out.values[id] = dbar;
      out.valid[id] = 1;
      out.max_abs = std::max(out.max_abs, std::abs(dbar));
    }
  return out;
}

ResidualField gauss_residual(const ConformalMetric& metric,
                             const QuadraticDifferential& qd) {
  const DiskGrid& g = metric.grid;
  if (metric.lambda.size() != static_cast<size_t>(g.size()))
    throw Error(Errc::parameter, "metric field size mismatch");
  ResidualField out;
  out.values.assign(g.size(), Complex(0, 0));
  out.valid.assign(g.size(), 0);
  const double h2 = g.h * g.h;
  for (int i = 1; i < g.n - 1; ++i)
    for (int j = 1; j < g.n - 1; ++j) {
      if (!g.full_stencil(i, j)) continue;
      int id = g.id(i, j);
      double lap = (metric.lambda[g.id(i + 1, j)] + metric.lambda[g.id(i - 1, j)] +
                    metric.lambda[g.id(i, j + 1)] + metric.lambda[g.id(i, j - 1)] -
                    4.0 * metric.lambda[id]) /
                   h2;
      double K = -std::exp(-2.0 * metric.lambda[id]) * lap;
      double phi2 = std::norm(evaluate_raw(qd, g.point(i, j)));
      double res = phi2 - std::exp(4.0 * metric.lambda[id]) *
                              (metric.H * metric.H - K);
      out.values[id] = res;
      out.valid[id] = 1;
      out.max_abs = std::max(out.max_abs, std::abs(res));
    }
  return out;
}

GaussSolveResult solve_gauss(const QuadraticDifferential& qd, double H,
                             const std::function<double(Complex)>& boundary,
                             double radius, int n, int max_iterations) {
  DiskGrid grid(radius, n);
  if (radius > qd.chart_radius() * (1 + 1e-12))
    throw Error(Errc::domain, "grid leaves the chart disk");

  // interior enumeration
  std::vector<int> eq_of(grid.size(), -1);
  std::vector<int> node_of;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (grid.inside(i, j)) {
        eq_of[grid.id(i, j)] = static_cast<int>(node_of.size());
        node_of.push_back(grid.id(i, j));
      }
  const int m = static_cast<int>(node_of.size());
  if (m == 0) throw Error(Errc::parameter, "no interior nodes");

  // Shortley-Weller Laplacian: L lambda + rhs_b, with fractional arms to the
  // circle where a neighbour falls outside.
  struct Arm {
    int neighbour;  // equation index, or -1 for a boundary arm
    double alpha;   // arm length as a fraction of h
    double bval;    // Dirichlet value at the circle intersection
  };
  std::vector<std::array<Arm, 4>> arms(m);
  const int di[4] = {1, -1, 0, 0};
  const int dj[4] = {0, 0, 1, -1};
  for (int e = 0; e < m; ++e) {
    int id = node_of[e];
    int i = id / n, j = id % n;
    Complex p = grid.point(i, j);
    for (int d = 0; d < 4; ++d) {
      int ii = i + di[d], jj = j + dj[d];
      bool in = ii >= 0 && jj >= 0 && ii < n && jj < n && grid.inside(ii, jj);
      if (in) {
        arms[e][d] = {eq_of[grid.id(ii, jj)], 1.0, 0.0};
      } else {
        // segment p + s*e hits the circle at s in (0, h]
        double ex = di[d], ey = dj[d];
        double pe = p.real() * ex + p.imag() * ey;
        double disc = pe * pe + radius * radius - std::norm(p);
        double s = -pe + std::sqrt(std::max(disc, 0.0));
        double alpha = std::clamp(s / grid.h, 1e-6, 1.0);
        Complex q(p.real() + alpha * grid.h * ex, p.imag() + alpha * grid.h * ey);
        arms[e][d] = {-1, alpha, boundary(q)};
      }
    }
  }

  const double h2 = grid.h * grid.h;
  Eigen::VectorXd rhs_b = Eigen::VectorXd::Zero(m);
  std::vector<Eigen::Triplet<double>> lap_trip;
  for (int e = 0; e < m; ++e) {
    double diag = 0.0;
    for (int axis = 0; axis < 2; ++axis) {
      const Arm& A = arms[e][2 * axis];
      const Arm& B = arms[e][2 * axis + 1];
      double aa = A.alpha, ab = B.alpha;
      double cA = 2.0 / (aa * (aa + ab)) / h2;
      double cB = 2.0 / (ab * (aa + ab)) / h2;
      diag -= cA + cB;
      if (A.neighbour >= 0)
        lap_trip.emplace_back(e, A.neighbour, cA);
      else
        rhs_b[e] += cA * A.bval;
      if (B.neighbour >= 0)
        lap_trip.emplace_back(e, B.neighbour, cB);
      else
        rhs_b[e] += cB * B.bval;
    }
    lap_trip.emplace_back(e, e, diag);
  }
  Eigen::SparseMatrix<double> L(m, m);
  L.setFromTriplets(lap_trip.begin(), lap_trip.end());

  Eigen::VectorXd phi2(m);
  for (int e = 0; e < m; ++e) {
    int id = node_of[e];
    phi2[e] = std::norm(evaluate_raw(qd, grid.point(id / n, id % n)));
  }

  // initial guess: boundary mean
  double g_mean = 0.0;
  for (int k = 0; k < 256; ++k)
    g_mean += boundary(std::polar(radius, kTwoPi * k / 256.0));
  g_mean /= 256.0;
  Eigen::VectorXd lam = Eigen::VectorXd::Constant(m, g_mean);

  auto F_of = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    Eigen::VectorXd F = L * v + rhs_b;
    for (int e = 0; e < m; ++e)
      F[e] += H * H * std::exp(2.0 * v[e]) - phi2[e] * std::exp(-2.0 * v[e]);
    return F;
  };

  GaussSolveResult result;
  Eigen::VectorXd F = F_of(lam);
  double fn = F.lpNorm<Eigen::Infinity>();
  const double target = 1e-10;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  int it = 0;
  for (; it < max_iterations && fn >= target; ++it) {
    Eigen::SparseMatrix<double> J = L;
    std::vector<Eigen::Triplet<double>> diag_trip;
    diag_trip.reserve(m);
    for (int e = 0; e < m; ++e)
      diag_trip.emplace_back(
          e, e, 2.0 * H * H * std::exp(2.0 * lam[e]) +
                    2.0 * phi2[e] * std::exp(-2.0 * lam[e]));
    Eigen::SparseMatrix<double> D(m, m);
    D.setFromTriplets(diag_trip.begin(), diag_trip.end());
    J = L + D;
    J.makeCompressed();
    lu.compute(J);
    if (lu.info() != Eigen::Success) break;
    Eigen::VectorXd delta = lu.solve(-F);
    double s = 1.0;
    Eigen::VectorXd cand;
    double fn_new = fn;
    for (int halvings = 0; halvings <= 6; ++halvings, s *= 0.5) {
      cand = lam + s * delta;
      Eigen::VectorXd Fc = F_of(cand);
      fn_new = Fc.lpNorm<Eigen::Infinity>();
      if (fn_new < (1.0 - 1e-4 * s) * fn) {
        F = Fc;
        break;
      }
    }
    if (!(fn_new < fn)) {  // no progress even fully damped
      result.residual_history.push_back(fn);
      break;
    }
    lam = cand;
    fn = fn_new;
    result.residual_history.push_back(fn);
  }
  result.iterations = it;
  result.converged = fn < target;

  // assemble the full field; nodes outside the disk take the Dirichlet value
  // of their radial projection (an inert extension for plotting)
  ConformalMetric metric{grid, ScalarField(grid.size(), g_mean), H};
  for (int e = 0; e < m; ++e) metric.lambda[node_of[e]] = lam[e];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!grid.inside(i, j)) {
        Complex p = grid.point(i, j);
        double r = std::abs(p);
        metric.lambda[grid.id(i, j)] =
            boundary(r > 0 ? p * (radius / r) : Complex(radius, 0));
      }
  result.metric = std::move(metric);
  return result;
}

GaussSolveResult solve_gauss(const QuadraticDifferential& qd, double H,
                             double boundary_value, double radius, int n,
                             int max_iterations) {
  return solve_gauss(
      qd, H, [boundary_value](Complex) { return boundary_value; }, radius, n,
      max_iterations);
}

namespace {

int nearest_node(const DiskGrid& g, Complex z) {
  int i = static_cast<int>(std::lround((z.real() + g.radius) / g.h));
  int j = static_cast<int>(std::lround((z.imag() + g.radius) / g.h));
  i = std::clamp(i, 0, g.n - 1);
  j = std::clamp(j, 0, g.n - 1);
  return g.id(i, j);
}

// 4-point Lagrange weights per axis: reproduces cubic polynomials exactly,
// so the interpolated coefficient field of a low-degree form carries no
// interpolation error beyond roundoff.
void cubic_weights(double s, double* w) {
  w[0] = -s * (s - 1.0) * (s - 2.0) / 6.0;
  w[1] = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
  w[2] = -(s + 1.0) * s * (s - 2.0) / 2.0;
  w[3] = (s + 1.0) * s * (s - 1.0) / 6.0;
}

Complex interp_cubic(const DiskGrid& g, const ComplexField& f, Complex z) {
  double fx = (z.real() + g.radius) / g.h;
  double fy = (z.imag() + g.radius) / g.h;
  int i = std::clamp(static_cast<int>(std::floor(fx)), 1, g.n - 3);
  int j = std::clamp(static_cast<int>(std::floor(fy)), 1, g.n - 3);
  double wx[4], wy[4];
  cubic_weights(fx - i, wx);
  cubic_weights(fy - j, wy);
  Complex acc = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      acc += wx[a] * wy[b] * f[g.id(i - 1 + a, j - 1 + b)];
  return acc;
}

// distance from a point to a polyline (exact point-segment distances)
double point_polyline_distance(Complex p, const std::vector<Complex>& poly) {
  double best = 1e300;
  for (size_t k = 1; k < poly.size(); ++k) {
    Complex a = poly[k - 1], b = poly[k];
    Complex ab = b - a;
    double len2 = std::norm(ab);
    double t = len2 > 0 ? std::clamp(((p - a) * std::conj(ab)).real() / len2,
                                     0.0, 1.0)
                        : 0.0;
    best = std::min(best, std::abs(p - (a + t * ab)));
  }
  return best;
}

// Clip to the annulus, splitting into connected pieces: distances must never
// shortcut across a gap where the curve left the annulus.  Piece ends are
// placed on the bounding circles by bisection along the straddling chord, so
// two samplings of the same curve clip to the same endpoints instead of
// differing by up to one sample spacing.
std::vector<std::vector<Complex>> clip_to_annulus(
    const std::vector<Complex>& poly, double r_lo, double r_hi) {
  auto inside = [&](Complex p) {
    double r = std::abs(p);
    return r >= r_lo && r <= r_hi;
  };
  auto crossing = [&](Complex a, Complex b) {
    // invariant: inside(a) != inside(b)
    bool ia = inside(a);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      if (inside(a + mid * (b - a)) == ia)
        lo = mid;
      else
        hi = mid;
    }
    return a + 0.5 * (lo + hi) * (b - a);
  };
  std::vector<std::vector<Complex>> pieces;
  std::vector<Complex> cur;
  if (!poly.empty() && inside(poly[0])) cur.push_back(poly[0]);
  for (size_t k = 1; k < poly.size(); ++k) {
    Complex a = poly[k - 1], b = poly[k];
    bool ia = inside(a), ib = inside(b);
    if (ia && ib) {
      cur.push_back(b);
    } else if (ia && !ib) {
      cur.push_back(crossing(a, b));
      pieces.push_back(std::move(cur));
      cur.clear();
    } else if (!ia && ib) {
      cur.push_back(crossing(a, b));
      cur.push_back(b);
    }
    // both outside: a sample-to-sample chord cannot span the annulus width
  }
  if (!cur.empty()) pieces.push_back(std::move(cur));
  return pieces;
}

double point_pieces_distance(Complex p,
                             const std::vector<std::vector<Complex>>& pieces) {
  double best = 1e300;
  for (const auto& piece : pieces) {
    if (piece.size() == 1)
      best = std::min(best, std::abs(p - piece[0]));
    else
      best = std::min(best, point_polyline_distance(p, piece));
  }
  return best;
}

double hausdorff(const std::vector<std::vector<Complex>>& a,
                 const std::vector<std::vector<Complex>>& b) {
  double d = 0.0;
  for (const auto& piece : a)
    for (Complex p : piece) d = std::max(d, point_pieces_distance(p, b));
  for (const auto& piece : b)
    for (Complex p : piece) d = std::max(d, point_pieces_distance(p, a));
  return d;
}

}  // namespace

std::pair<double, double> principal_directions(const BonnetForms& forms,
                                               Complex z) {
  ComplexField c = hopf_coefficient(forms);
  double scale = 0.0;
  for (const Complex& v : c) scale = std::max(scale, std::abs(v));
  Complex cv = c[nearest_node(forms.grid, z)];
  if (std::abs(cv) <= 1e-12 * std::max(scale, 1e-300))
    throw Error(Errc::umbilic, "principal directions undefined: coefficient "
                               "vanishes at this node");
  double a_max = wrap_line(-0.5 * std::arg(cv));
  return {a_max, wrap_line(a_max + kPi / 2)};
}

CurvatureLineReport verify_curvature_lines(const ConformalMetric& metric,
                                           const QuadraticDifferential& qd,
                                           double t, double r_lo, double r_hi,
                                           int curves, double trace_step) {
  const DiskGrid& g = metric.grid;
  if (!(r_lo > 0) || !(r_hi > r_lo) || r_hi > g.radius)
    throw Error(Errc::parameter, "need 0 < r_lo < r_hi <= grid radius");

  BonnetForms forms = bonnet_forms(metric, qd, t);
  ComplexField c = hopf_coefficient(forms);

  CurvatureLineReport report;

  // pointwise: maximal-curvature direction against the slope-t trajectory
  // direction, on every grid node in the annulus
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      Complex z = g.point(i, j);
      double r = std::abs(z);
      if (r < r_lo || r > r_hi) continue;
      double from_forms = -0.5 * std::arg(c[g.id(i, j)]);
      double from_field = 0.5 * (2.0 * t - std::arg(evaluate_raw(qd, z)));
      report.max_direction_deviation =
          std::max(report.max_direction_deviation,
                   std::abs(line_angle_diff(from_forms, from_field)));
      ++report.nodes_compared;
    }

  // integrated lines: principal field of the (interpolated) forms versus
  // traced trajectories through the same seeds.  Both curves stop at the
  // first sample leaving the same margin band around the annulus, so the
  // clipped pieces cover identical stretches of the common curve.
  const double band_lo = 0.9 * r_lo;
  const double band_hi = std::min(1.1 * r_hi, g.radius - 2 * g.h);
  auto principal_dir = [&](Complex z, Complex ref) {
    Complex cv = interp_cubic(g, c, z);
    Complex d = std::polar(1.0, -0.5 * std::arg(cv));
    if (d.real() * ref.real() + d.imag() * ref.imag() < 0) d = -d;
    return d;
  };
  auto integrate_half = [&](Complex z0, int orientation) {
    std::vector<Complex> pts{z0};
    Complex z = z0;
    Complex ref = principal_dir(z0, std::polar(1.0, 0.0));
    if (orientation < 0) ref = -ref;
    for (int k = 0; k < 400000; ++k) {
      Complex k1 = principal_dir(z, ref);
      Complex k2 = principal_dir(z + 0.5 * trace_step * k1, k1);
      Complex k3 = principal_dir(z + 0.5 * trace_step * k2, k2);
      Complex k4 = principal_dir(z + trace_step * k3, k3);
      z += trace_step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      ref = principal_dir(z, k4);
      pts.push_back(z);
      double r = std::abs(z);
      if (r < band_lo || r > band_hi) break;
    }
    return pts;
  };
  auto truncate_at_band = [&](std::vector<Complex>& pts) {
    for (size_t k = 1; k < pts.size(); ++k) {
      double r = std::abs(pts[k]);
      if (r < band_lo || r > band_hi) {
        pts.resize(k + 1);
        return;
      }
    }
  };

  const double r_mid = std::sqrt(r_lo * r_hi);
  for (int k = 0; k < curves; ++k) {
    double th = kTwoPi * k / curves + 0.37;
    Complex seed = std::polar(r_mid, th);

    auto back = integrate_half(seed, -1);
    std::reverse(back.begin(), back.end());
    auto fwd = integrate_half(seed, +1);
    back.insert(back.end(), fwd.begin() + 1, fwd.end());
    auto line = clip_to_annulus(back, r_lo, r_hi);

    const double arclen_cap = 8.0 * r_hi + 4.0 * (r_hi - r_lo);
    auto tb = trace_trajectory(qd, seed, wrap_to_pi(2.0 * t), trace_step,
                               arclen_cap, -1);
    truncate_at_band(tb);
    std::reverse(tb.begin(), tb.end());
    auto tf = trace_trajectory(qd, seed, wrap_to_pi(2.0 * t), trace_step,
                               arclen_cap, +1);
    truncate_at_band(tf);
    tb.insert(tb.end(), tf.begin() + 1, tf.end());
    auto traj = clip_to_annulus(tb, r_lo, r_hi);

    if (line.empty() || traj.empty())
      throw Error(Errc::resolution, "curve left the annulus immediately");
    report.max_hausdorff = std::max(report.max_hausdorff, hausdorff(line, traj));
    ++report.curves_compared;
  }
  return report;
}

}  // namespace phigeo
