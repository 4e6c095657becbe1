#include "phigeo/surface.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <sstream>

namespace phigeo {

namespace {

// ---------------------------------------------------------------------------
// Second-order forward jets in two variables: carrying value, gradient and
// Hessian through chart and family maps gives exact analytic derivatives of
// arbitrary compositions.
// ---------------------------------------------------------------------------

struct J2 {
  double v = 0, du = 0, dv = 0, duu = 0, duv = 0, dvv = 0;
};

J2 jconst(double x) { return {x, 0, 0, 0, 0, 0}; }
J2 jvar_u(double x) { return {x, 1, 0, 0, 0, 0}; }
J2 jvar_v(double x) { return {x, 0, 1, 0, 0, 0}; }

J2 operator+(J2 a, J2 b) {
  return {a.v + b.v, a.du + b.du, a.dv + b.dv,
          a.duu + b.duu, a.duv + b.duv, a.dvv + b.dvv};
}
J2 operator-(J2 a, J2 b) {
  return {a.v - b.v, a.du - b.du, a.dv - b.dv,
          a.duu - b.duu, a.duv - b.duv, a.dvv - b.dvv};
}
J2 operator*(double s, J2 a) {
  return {s * a.v, s * a.du, s * a.dv, s * a.duu, s * a.duv, s * a.dvv};
}
J2 operator*(J2 a, J2 b) {
  J2 r;
  r.v = a.v * b.v;
  r.du = a.du * b.v + a.v * b.du;
  r.dv = a.dv * b.v + a.v * b.dv;
  r.duu = a.duu * b.v + 2 * a.du * b.du + a.v * b.duu;
  r.duv = a.duv * b.v + a.du * b.dv + a.dv * b.du + a.v * b.duv;
  r.dvv = a.dvv * b.v + 2 * a.dv * b.dv + a.v * b.dvv;
  return r;
}
J2 operator+(double s, J2 a) { a.v += s; return a; }

// f(g) from the value and first two derivatives of f at g.v
J2 chain(J2 g, double f0, double f1, double f2) {
  J2 r;
  r.v = f0;
  r.du = f1 * g.du;
  r.dv = f1 * g.dv;
  r.duu = f1 * g.duu + f2 * g.du * g.du;
  r.duv = f1 * g.duv + f2 * g.du * g.dv;
  r.dvv = f1 * g.dvv + f2 * g.dv * g.dv;
  return r;
}
J2 jsin(J2 g) { return chain(g, std::sin(g.v), std::cos(g.v), -std::sin(g.v)); }
J2 jcos(J2 g) { return chain(g, std::cos(g.v), -std::sin(g.v), -std::cos(g.v)); }
J2 jinv(J2 g) {
  double iv = 1.0 / g.v;
  return chain(g, iv, -iv * iv, 2.0 * iv * iv * iv);
}
// |x|^p for p >= 2 (derivatives vanish at x = 0)
J2 jpow_abs(J2 g, double p) {
  double av = std::abs(g.v);
  double f0 = std::pow(av, p);
  double sgn = (g.v > 0) - (g.v < 0);
  double f1 = (av == 0) ? 0.0 : p * std::pow(av, p - 1) * sgn;
  double f2 = (av == 0) ? 0.0 : p * (p - 1) * std::pow(av, p - 2);
  return chain(g, f0, f1, f2);
}
// x^p for x > 0
J2 jpow_pos(J2 g, double p) {
  double f0 = std::pow(g.v, p);
  return chain(g, f0, p * f0 / g.v, p * (p - 1) * f0 / (g.v * g.v));
}

using JV3 = std::array<J2, 3>;

}  // namespace

// ---------------------------------------------------------------------------
// Charts and families
// ---------------------------------------------------------------------------

namespace {

JV3 chart_jet(ChartId chart, double u, double v) {
  J2 U = jvar_u(u), V = jvar_v(v);
  switch (chart) {
    case ChartId::band: {
      J2 cu = jcos(U), su = jsin(U), cv = jcos(V), sv = jsin(V);
      return {cv * cu, cv * su, sv};
    }
    case ChartId::north: {
      J2 s = U * U + V * V;
      J2 iq = jinv(1.0 + s);
      return {2.0 * (U * iq), 2.0 * (V * iq), (jconst(1.0) - s) * iq};
    }
    case ChartId::south: {
      J2 s = U * U + V * V;
      J2 iq = jinv(1.0 + s);
      return {2.0 * (U * iq), 2.0 * (V * iq), (s - jconst(1.0)) * iq};
    }
  }
  throw Error(Errc::parameter, "bad chart id");
}

// cubic polynomial in the documented monomial order
J2 cubic_eval(const std::array<double, 20>& c, const JV3& x) {
  const J2 &X = x[0], &Y = x[1], &Z = x[2];
  J2 X2 = X * X, Y2 = Y * Y, Z2 = Z * Z;
  J2 acc = jconst(c[0]);
  acc = acc + c[1] * X + c[2] * Y + c[3] * Z;
  acc = acc + c[4] * X2 + c[5] * (X * Y) + c[6] * (X * Z);
  acc = acc + c[7] * Y2 + c[8] * (Y * Z) + c[9] * Z2;
  acc = acc + c[10] * (X2 * X) + c[11] * (X2 * Y) + c[12] * (X2 * Z);
  acc = acc + c[13] * (X * Y2) + c[14] * (X * Y * Z) + c[15] * (X * Z2);
  acc = acc + c[16] * (Y2 * Y) + c[17] * (Y2 * Z) + c[18] * (Y * Z2);
  acc = acc + c[19] * (Z2 * Z);
  return acc;
}

}  // namespace

SampledImmersion SampledImmersion::ellipsoid(double a, double b, double c) {
  if (!(a > 0 && b > 0 && c > 0))
    throw Error(Errc::parameter, "ellipsoid semi-axes must be positive");
  SampledImmersion s;
  s.family_ = Family::ellipsoid;
  s.a_ = a;
  s.b_ = b;
  s.c_ = c;
  return s;
}

SampledImmersion SampledImmersion::perturbed_sphere(
    double eps, const std::array<double, 20>& cubic) {
  SampledImmersion s;
  s.family_ = Family::perturbed_sphere;
  s.eps_ = eps;
  s.cubic_ = cubic;
  return s;
}

SampledImmersion SampledImmersion::superellipsoid(double exponent) {
  if (!(exponent >= 2.0))
    throw Error(Errc::parameter, "superellipsoid exponent must be >= 2");
  SampledImmersion s;
  s.family_ = Family::superellipsoid;
  s.exponent_ = exponent;
  return s;
}

SampledImmersion SampledImmersion::rotated(const Mat3& rot) const {
  SampledImmersion s = *this;
  s.rot_ = rot * rot_;
  return s;
}

std::string SampledImmersion::description() const {
  std::ostringstream os;
  switch (family_) {
    case Family::ellipsoid:
      os << "ellipsoid(" << format_double(a_) << "," << format_double(b_)
         << "," << format_double(c_) << ")";
      break;
    case Family::perturbed_sphere:
      os << "perturbed-sphere(eps=" << format_double(eps_) << ")";
      break;
    case Family::superellipsoid:
      os << "superellipsoid(p=" << format_double(exponent_) << ")";
      break;
  }
  return os.str();
}

SampledImmersion::Jet2 SampledImmersion::jet(ChartPoint p) const {
  switch (p.chart) {
    case ChartId::band:
      if (std::abs(p.v) > kBandMaxV)
        throw Error(Errc::domain, "band chart valid for |v| <= 0.96");
      break;
    case ChartId::north:
    case ChartId::south:
      if (p.u * p.u + p.v * p.v > kCapMaxR * kCapMaxR)
        throw Error(Errc::domain, "cap chart valid for |(u,v)| <= 0.45");
      break;
  }

  JV3 x = chart_jet(p.chart, p.u, p.v);
  JV3 y;
  switch (family_) {
    case Family::ellipsoid:
      y = {a_ * x[0], b_ * x[1], c_ * x[2]};
      break;
    case Family::perturbed_sphere: {
      J2 f = 1.0 + eps_ * cubic_eval(cubic_, x);
      y = {x[0] * f, x[1] * f, x[2] * f};
      break;
    }
    case Family::superellipsoid: {
      J2 s = jpow_abs(x[0], exponent_) + jpow_abs(x[1], exponent_) +
             jpow_abs(x[2], exponent_);
      J2 iN = jinv(jpow_pos(s, 1.0 / exponent_));
      y = {x[0] * iN, x[1] * iN, x[2] * iN};
      break;
    }
  }
  JV3 z;
  for (int i = 0; i < 3; ++i)
    z[i] = rot_(i, 0) * y[0] + rot_(i, 1) * y[1] + rot_(i, 2) * y[2];

  Jet2 out;
  out.P = {z[0].v, z[1].v, z[2].v};
  out.Pu = {z[0].du, z[1].du, z[2].du};
  out.Pv = {z[0].dv, z[1].dv, z[2].dv};
  out.Puu = {z[0].duu, z[1].duu, z[2].duu};
  out.Puv = {z[0].duv, z[1].duv, z[2].duv};
  out.Pvv = {z[0].dvv, z[1].dvv, z[2].dvv};
  return out;
}

double SampledImmersion::diameter_estimate() const {
  double best = 0.0;
  for (int k = 0; k < 64; ++k) {
    double u = kTwoPi * k / 64.0 - kPi;
    for (double v : {-0.9, -0.45, 0.0, 0.45, 0.9})
      best = std::max(best, norm(position({ChartId::band, u, v})));
  }
  best = std::max(best, norm(position({ChartId::north, 0, 0})));
  best = std::max(best, norm(position({ChartId::south, 0, 0})));
  return 2.0 * best;
}

// ---------------------------------------------------------------------------
// Forms and the umbilic deviation
// ---------------------------------------------------------------------------

FundamentalForms fundamental_forms(const SampledImmersion& s, ChartPoint p) {
  auto j = s.jet(p);
  FundamentalForms f;
  f.E = dot(j.Pu, j.Pu);
  f.F = dot(j.Pu, j.Pv);
  f.G = dot(j.Pv, j.Pv);
  double det = f.E * f.G - f.F * f.F;
  if (det <= 1e-12 * (f.E + f.G) * (f.E + f.G))
    throw Error(Errc::chart_seam, "parameterization degenerates here");
  Vec3 N = normalized(cross(j.Pu, j.Pv));
  f.l = dot(j.Puu, N);
  f.m = dot(j.Puv, N);
  f.n = dot(j.Pvv, N);
  double H = (f.G * f.l - 2.0 * f.F * f.m + f.E * f.n) / (2.0 * det);
  if (H < 0) {  // orient the normal so the mean curvature is positive
    N = -1.0 * N;
    f.l = -f.l;
    f.m = -f.m;
    f.n = -f.n;
    H = -H;
  }
  f.normal = N;
  f.H = H;
  f.K = (f.l * f.n - f.m * f.m) / det;
  return f;
}

namespace {

struct DeviationFrame {
  double d1 = 0, d2 = 0;          // traceless shape operator in the ON frame
  double c11 = 1, c12 = 0, c22 = 1;  // ON frame vectors in (u,v) coordinates
  double H = 0;
};

DeviationFrame deviation_frame(const SampledImmersion& s, ChartPoint p) {
  FundamentalForms f = fundamental_forms(s, p);
  double det = f.E * f.G - f.F * f.F;
  // shape operator in coordinates
  double S11 = (f.G * f.l - f.F * f.m) / det;
  double S12 = (f.G * f.m - f.F * f.n) / det;
  double S21 = (f.E * f.m - f.F * f.l) / det;
  double S22 = (f.E * f.n - f.F * f.m) / det;
  // orthonormal frame e1 = Pu/|Pu|, e2 ~ Pv orthogonalized
  DeviationFrame d;
  double g2n = std::sqrt(f.G - f.F * f.F / f.E);
  d.c11 = 1.0 / std::sqrt(f.E);
  d.c12 = -f.F / (f.E * g2n);
  d.c22 = 1.0 / g2n;
  // M = C^{-1} S C with C = [[c11, c12], [0, c22]]
  double t11 = S11 * d.c11;            // S * col1
  double t21 = S21 * d.c11;
  double t12 = S11 * d.c12 + S12 * d.c22;  // S * col2
  double t22 = S21 * d.c12 + S22 * d.c22;
  double i11 = 1.0 / d.c11, i12 = -d.c12 / (d.c11 * d.c22), i22 = 1.0 / d.c22;
  double M11 = i11 * t11 + i12 * t21;
  double M12 = i11 * t12 + i12 * t22;
  double M21 = i22 * t21;
  double M22 = i22 * t22;
  d.d1 = 0.5 * (M11 - M22);
  d.d2 = 0.5 * (M12 + M21);  // symmetric up to roundoff
  d.H = f.H;
  return d;
}

}  // namespace

Complex umbilic_deviation(const SampledImmersion& s, ChartPoint p) {
  DeviationFrame d = deviation_frame(s, p);
  return {d.d1, d.d2};
}

double principal_angle(const SampledImmersion& s, ChartPoint p) {
  DeviationFrame d = deviation_frame(s, p);
  double mag = std::hypot(d.d1, d.d2);
  if (mag <= 1e-12 * std::max(std::abs(d.H), 1e-300))
    throw Error(Errc::umbilic, "principal directions undefined at an umbilic");
  double chi = 0.5 * std::atan2(d.d2, d.d1);  // angle in the ON frame
  double wu = std::cos(chi) * d.c11 + std::sin(chi) * d.c12;
  double wv = std::sin(chi) * d.c22;
  return wrap_line(std::atan2(wv, wu));
}

// ---------------------------------------------------------------------------
// Umbilic scan
// ---------------------------------------------------------------------------

namespace {

struct Region {
  ChartId chart;
  double u0, u1, v0, v1;
  bool disk_mask;  // restrict to |(u,v)| <= cap radius
  double mask_r = 0.0;
};

std::vector<Region> scan_regions() {
  // band owns polar angles in [40.5, 139.5] degrees, caps own the rest up to
  // 43 degrees from their pole: a 2.5-degree overlap on each side.  Bounds
  // are deliberately asymmetric so that chart centers and symmetry planes of
  // axis-aligned surfaces never coincide with scan grid lines.
  const double cap_r = 0.394;  // tan(43 deg / 2)
  return {
      {ChartId::band, -kPi - 0.1537, kPi + 0.1443, -0.8646, 0.8617, false},
      {ChartId::north, -0.3989, 0.3941, -0.3973, 0.3957, true, cap_r},
      {ChartId::south, -0.3989, 0.3941, -0.3973, 0.3957, true, cap_r},
  };
}

struct Candidate {
  ChartPoint at;
  double u0, u1, v0, v1;
};

struct RegionScan {
  std::vector<Candidate> candidates;
  double sup_psi = 0.0;
  double sup_H = 0.0;
};

// winding increment along one cell edge, subdividing until each piece turns
// by less than pi/2
double edge_delta(const SampledImmersion& s, ChartId chart, double ua,
                  double va, double ub, double vb, Complex pa, Complex pb,
                  int depth) {
  if (pa == Complex(0, 0) || pb == Complex(0, 0)) return 0.0;  // corner zero
  double d = std::arg(pb / pa);
  if (std::abs(d) < kPi / 2 || depth <= 0) return d;
  double um = 0.5 * (ua + ub), vm = 0.5 * (va + vb);
  Complex pm = umbilic_deviation(s, {chart, um, vm});
  return edge_delta(s, chart, ua, va, um, vm, pa, pm, depth - 1) +
         edge_delta(s, chart, um, vm, ub, vb, pm, pb, depth - 1);
}

int cell_winding(const SampledImmersion& s, ChartId chart, double u0,
                 double v0, double u1, double v1, Complex p00, Complex p10,
                 Complex p11, Complex p01) {
  double total = edge_delta(s, chart, u0, v0, u1, v0, p00, p10, 10) +
                 edge_delta(s, chart, u1, v0, u1, v1, p10, p11, 10) +
                 edge_delta(s, chart, u1, v1, u0, v1, p11, p01, 10) +
                 edge_delta(s, chart, u0, v1, u0, v0, p01, p00, 10);
  return static_cast<int>(std::lround(total / kTwoPi));
}

RegionScan scan_region(const SampledImmersion& s, const Region& reg, int res) {
  RegionScan out;
  double span_u = reg.u1 - reg.u0, span_v = reg.v1 - reg.v0;
  int nv = res;
  int nu = std::max(res, static_cast<int>(std::lround(res * span_u / span_v)));
  std::vector<Complex> psi((nu + 1) * (nv + 1), Complex(0, 0));
  std::vector<char> ok((nu + 1) * (nv + 1), 0);
  auto at = [&](int i, int j) -> Complex& { return psi[i * (nv + 1) + j]; };
  auto okat = [&](int i, int j) -> char& { return ok[i * (nv + 1) + j]; };
  for (int i = 0; i <= nu; ++i)
    for (int j = 0; j <= nv; ++j) {
      double u = reg.u0 + span_u * i / nu;
      double v = reg.v0 + span_v * j / nv;
      if (reg.disk_mask && u * u + v * v > reg.mask_r * reg.mask_r) continue;
      DeviationFrame d = deviation_frame(s, {reg.chart, u, v});
      at(i, j) = Complex(d.d1, d.d2);
      okat(i, j) = 1;
      out.sup_psi = std::max(out.sup_psi, std::abs(at(i, j)));
      out.sup_H = std::max(out.sup_H, std::abs(d.H));
    }
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      if (!(okat(i, j) && okat(i + 1, j) && okat(i + 1, j + 1) &&
            okat(i, j + 1)))
        continue;
      double u0 = reg.u0 + span_u * i / nu, u1 = reg.u0 + span_u * (i + 1) / nu;
      double v0 = reg.v0 + span_v * j / nv, v1 = reg.v0 + span_v * (j + 1) / nv;
      const Complex zero(0, 0);
      bool corner_hit = at(i, j) == zero || at(i + 1, j) == zero ||
                        at(i + 1, j + 1) == zero || at(i, j + 1) == zero;
      int w = corner_hit ? 1
                         : cell_winding(s, reg.chart, u0, v0, u1, v1, at(i, j),
                                        at(i + 1, j), at(i + 1, j + 1),
                                        at(i, j + 1));
      if (w != 0)
        out.candidates.push_back(
            {{reg.chart, 0.5 * (u0 + u1), 0.5 * (v0 + v1)}, u0, u1, v0, v1});
    }
  return out;
}

void refine_cell(const SampledImmersion& s, ChartId chart, double u0,
                 double u1, double v0, double v1, int depth,
                 std::vector<ChartPoint>& out) {
  if (std::max(u1 - u0, v1 - v0) < 1e-9 || depth <= 0) {
    out.push_back({chart, 0.5 * (u0 + u1), 0.5 * (v0 + v1)});
    return;
  }
  double um = 0.5 * (u0 + u1), vm = 0.5 * (v0 + v1);
  struct Child {
    double u0, u1, v0, v1;
  };
  const Child kids[4] = {{u0, um, v0, vm}, {um, u1, v0, vm},
                         {u0, um, vm, v1}, {um, u1, vm, v1}};
  auto dev = [&](double u, double v) {
    return umbilic_deviation(s, {chart, u, v});
  };
  int found = 0;
  double best_mag = 1e300;
  int best = 0;
  for (int k = 0; k < 4; ++k) {
    const Complex corners[4] = {dev(kids[k].u0, kids[k].v0),
                                dev(kids[k].u1, kids[k].v0),
                                dev(kids[k].u1, kids[k].v1),
                                dev(kids[k].u0, kids[k].v1)};
    const double cu[4] = {kids[k].u0, kids[k].u1, kids[k].u1, kids[k].u0};
    const double cv[4] = {kids[k].v0, kids[k].v0, kids[k].v1, kids[k].v1};
    bool corner_hit = false;
    double mag = 1e300;
    for (int c = 0; c < 4; ++c) {
      if (corners[c] == Complex(0, 0)) {  // landed exactly on the umbilic
        out.push_back({chart, cu[c], cv[c]});
        corner_hit = true;
        ++found;
        break;
      }
      mag = std::min(mag, std::abs(corners[c]));
    }
    if (corner_hit) continue;
    if (mag < best_mag) {
      best_mag = mag;
      best = k;
    }
    int w = cell_winding(s, chart, kids[k].u0, kids[k].v0, kids[k].u1,
                         kids[k].v1, corners[0], corners[1], corners[2],
                         corners[3]);
    if (w != 0) {
      refine_cell(s, chart, kids[k].u0, kids[k].u1, kids[k].v0, kids[k].v1,
                  depth - 1, out);
      ++found;
    }
  }
  if (found == 0) {
    // A real winding only sinks into roundoff once the deviation sits at the
    // evaluation noise floor.  A branch forked off by phase aliasing along a
    // split line near the zero still sees a solidly nonzero field here, and
    // must die rather than manufacture a spurious point.
    DeviationFrame mid = deviation_frame(s, {chart, um, vm});
    if (best_mag > 1e-10 * std::max(std::abs(mid.H), 1e-300)) return;
    refine_cell(s, chart, kids[best].u0, kids[best].u1, kids[best].v0,
                kids[best].v1, depth - 1, out);
  }
}

double chart_edge_margin(ChartPoint p) {
  if (p.chart == ChartId::band) return SampledImmersion::kBandMaxV - std::abs(p.v);
  return SampledImmersion::kCapMaxR - std::hypot(p.u, p.v);
}

}  // namespace

ConvexityCheck check_convexity(const SampledImmersion& s) {
  ConvexityCheck out;
  out.min_K = 1e300;
  double sum_K = 0.0;
  int count = 0;
  for (const Region& reg : scan_regions()) {
    int res = 72;
    double span_u = reg.u1 - reg.u0, span_v = reg.v1 - reg.v0;
    int nu = std::max(res, static_cast<int>(std::lround(res * span_u / span_v)));
    for (int i = 0; i <= nu; ++i)
      for (int j = 0; j <= res; ++j) {
        double u = reg.u0 + span_u * i / nu;
        double v = reg.v0 + span_v * j / res;
        if (reg.disk_mask && u * u + v * v > reg.mask_r * reg.mask_r) continue;
        double K = fundamental_forms(s, {reg.chart, u, v}).K;
        sum_K += K;
        ++count;
        if (K < out.min_K) {
          out.min_K = K;
          out.argmin = {reg.chart, u, v};
        }
      }
  }
  double mean_K = sum_K / std::max(count, 1);
  // strictly convex only when the curvature stays well away from zero
  out.strictly_convex = out.min_K > 1e-3 * std::max(mean_K, 0.0);
  return out;
}

std::vector<Umbilic> find_umbilics(const SampledImmersion& s,
                                   const ScanOptions& opts) {
  if (opts.resolution < 16)
    throw Error(Errc::parameter, "scan resolution too coarse");

  // chart scans are independent: run them concurrently, merge in fixed order
  auto regions = scan_regions();
  std::vector<std::future<RegionScan>> futures;
  for (const Region& reg : regions)
    futures.push_back(std::async(std::launch::async, [&s, reg, &opts] {
      return scan_region(s, reg, opts.resolution);
    }));
  std::vector<RegionScan> scans;
  for (auto& f : futures) scans.push_back(f.get());

  double sup_psi = 0.0, sup_H = 0.0;
  for (const auto& sc : scans) {
    sup_psi = std::max(sup_psi, sc.sup_psi);
    sup_H = std::max(sup_H, sc.sup_H);
  }
  if (sup_psi <= 1e-10 * std::max(sup_H, 1e-300))
    throw Error(Errc::precondition,
                "surface is totally umbilic: no isolated umbilics to find");

  // refine candidate cells to points
  std::vector<ChartPoint> points;
  for (size_t r = 0; r < regions.size(); ++r)
    for (const Candidate& cand : scans[r].candidates)
      refine_cell(s, cand.at.chart, cand.u0, cand.u1, cand.v0, cand.v1, 60,
                  points);

  // deduplicate across chart overlaps by 3D position; keep the copy farthest
  // from its chart boundary
  struct Hit {
    ChartPoint at;
    Vec3 pos;
    double residual;
  };
  std::vector<Hit> hits;
  const double merge_tol = 3e-4 * s.diameter_estimate();
  for (const ChartPoint& p : points) {
    Hit h{p, s.position(p), std::abs(umbilic_deviation(s, p))};
    bool merged = false;
    for (Hit& other : hits) {
      if (norm(h.pos - other.pos) < merge_tol) {
        merged = true;
        if (chart_edge_margin(h.at) > chart_edge_margin(other.at)) other = h;
        break;
      }
    }
    if (!merged) hits.push_back(h);
  }

  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    auto key = [](const Hit& h) {
      return std::array<double, 3>{std::round(h.pos.x * 1e7),
                                   std::round(h.pos.y * 1e7),
                                   std::round(h.pos.z * 1e7)};
    };
    return key(a) < key(b);
  });

  // read off each index from the principal-direction winding on a small
  // surrounding circle
  std::vector<Umbilic> out;
  for (size_t i = 0; i < hits.size(); ++i) {
    const Hit& h = hits[i];
    double r = std::min(0.08, 0.8 * chart_edge_margin(h.at));
    // stay clear of every other umbilic
    auto jloc = s.jet(h.at);
    double local = norm(jloc.Pu) + norm(jloc.Pv);
    for (int shrink = 0; shrink < 10; ++shrink) {
      bool clear = true;
      for (size_t k = 0; k < hits.size() && clear; ++k)
        if (k != i && norm(hits[k].pos - h.pos) < 3.0 * r * local) clear = false;
      if (clear) break;
      r *= 0.5;
    }
    std::vector<double> dirs(opts.index_samples);
    for (int k = 0; k < opts.index_samples; ++k) {
      double th = kTwoPi * k / opts.index_samples;
      ChartPoint q{h.at.chart, h.at.u + r * std::cos(th),
                   h.at.v + r * std::sin(th)};
      dirs[k] = principal_angle(s, q);
    }
    LineField field = make_line_field({r}, opts.index_samples,
                                      {std::move(dirs)});
    Umbilic u;
    u.at = h.at;
    u.position = h.pos;
    u.residual = h.residual;
    u.index = winding_index(field, r);
    out.push_back(u);
  }
  return out;
}

IndexSumReport index_sum_check(const SampledImmersion& s) {
  IndexSumReport report;
  const int ladder[] = {96, 160, 256};
  for (int attempt = 0; attempt < 3; ++attempt) {
    ScanOptions opts;
    opts.resolution = ladder[attempt];
    report.umbilics = find_umbilics(s, opts);
    report.resolution_used = opts.resolution;
    report.rescans = attempt;
    HalfInteger total;
    for (const Umbilic& u : report.umbilics) total = total + u.index;
    report.total = total;
    report.matched = (total == HalfInteger::whole(2));
    if (report.matched) break;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Corpus and audit
// ---------------------------------------------------------------------------

std::vector<CorpusEntry> make_convex_corpus(std::uint64_t seed, int count) {
  if (count < 5) throw Error(Errc::parameter, "corpus needs at least 5 members");
  std::vector<CorpusEntry> corpus;
  corpus.push_back({"ellipsoid-3-2-1", SampledImmersion::ellipsoid(3, 2, 1)});
  corpus.push_back({"spheroid-1-1-2", SampledImmersion::ellipsoid(1, 1, 2)});
  corpus.push_back(
      {"ellipsoid-2.2-1.6-1.0", SampledImmersion::ellipsoid(2.2, 1.6, 1.0)});
  corpus.push_back(
      {"spheroid-1.4-1.4-0.9", SampledImmersion::ellipsoid(1.4, 1.4, 0.9)});
  corpus.push_back(
      {"ellipsoid-1.3-1.1-0.9", SampledImmersion::ellipsoid(1.3, 1.1, 0.9)});
  // random members are drawn until they pass the strict-convexity gate, so
  // the corpus is all-convex by construction yet still deterministic in seed
  std::uint64_t draw = 0;
  while (static_cast<int>(corpus.size()) < count) {
    std::mt19937_64 rng(seed * 1000003ull + draw);
    ++draw;
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::array<double, 20> cubic{};
    for (double& c : cubic) c = coef(rng);
    SampledImmersion s = SampledImmersion::perturbed_sphere(0.04, cubic);
    if (!check_convexity(s).strictly_convex) continue;
    int k = static_cast<int>(corpus.size());
    std::string name = "perturbed-sphere-" + std::to_string(k - 4);
    if (k % 4 == 0) {  // exercise rigid motions on a quarter of the members
      Vec3 axis = normalized({coef(rng) + 1e-3, coef(rng), coef(rng)});
      s = s.rotated(Mat3::rotation(axis, coef(rng) * kPi));
      name += "-rotated";
    }
    corpus.push_back({name, std::move(s)});
  }
  return corpus;
}

SurfaceAuditReport audit_corpus(const std::vector<CorpusEntry>& corpus) {
  SurfaceAuditReport report;
  report.all_pass = true;
  for (const CorpusEntry& entry : corpus) {
    SurfaceAuditEntry e;
    e.name = entry.name;
    ConvexityCheck cv = check_convexity(entry.surface);
    e.convex = cv.strictly_convex;
    if (!cv.strictly_convex) {
      e.findings.push_back("rejected: not strictly convex (min K " +
                           format_double(cv.min_K) + ")");
      report.entries.push_back(std::move(e));
      report.all_pass = false;
      continue;
    }
    IndexSumReport isr = index_sum_check(entry.surface);
    e.scanned = true;
    e.umbilic_count = static_cast<int>(isr.umbilics.size());
    e.index_sum = isr.total;
    e.resolution_used = isr.resolution_used;
    HalfInteger max_idx(0);
    for (const Umbilic& u : isr.umbilics)
      if (max_idx < u.index) max_idx = u.index;
    e.max_index = max_idx;
    if (e.umbilic_count < 2)
      e.findings.push_back("fewer than two umbilics found");
    if (HalfInteger(2) < max_idx)
      e.findings.push_back("umbilic of index above +1: " + max_idx.str());
    if (!isr.matched)
      e.findings.push_back("index sum " + isr.total.str() +
                           " does not match the sphere Euler characteristic");
    if (!e.findings.empty()) report.all_pass = false;
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace phigeo
