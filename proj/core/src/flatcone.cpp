#include "phigeo/flatcone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>

#include "phigeo/geodesic.hpp"

namespace phigeo {

namespace {

constexpr double kDeg = kPi / 180.0;
// geodesics near their closest approach run tangentially; on thin rings the
// stencil only covers directions up to this angle from radial, and the
// remaining wedge is charged to the near-bottom term of bound_for_pair
constexpr double kThinCoverage = 50.0 * kDeg;

// direction of the chord of a stencil offset, measured from radial and
// folded to [0, pi/2]
double entry_angle(double r, double dr, double dth, int di, int dj) {
  Complex z1(r, 0.0);
  Complex z2 = std::polar(r + di * dr, dj * dth);
  double d = wrap_line(std::arg(z2 - z1));
  if (d > kPi / 2) d = kPi - d;
  return d;
}

struct Gap {
  double lo = 0, hi = 0;
  double width() const { return hi - lo; }
};

// largest angular gap between consecutive covered directions; `dirs` must be
// sorted and contain 0.  Full rings measure up to pi/2 (the lateral edge),
// thin rings only up to the thin coverage limit.
Gap max_gap(const std::vector<double>& dirs, bool thin) {
  const double top = thin ? kThinCoverage : kPi / 2;
  Gap best;
  double prev = 0.0;
  for (double d : dirs) {
    if (d > top) break;
    if (d - prev > best.width()) best = {prev, d};
    prev = d;
  }
  if (top - prev > best.width()) best = {prev, top};
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// MetricGraph accessors
// ---------------------------------------------------------------------------

int MetricGraph::node_id(int ring, int slot) const {
  return 1 + (ring - 1) * n_theta_ + slot;
}

Complex MetricGraph::node_position(int id) const {
  if (id == 0) return {0.0, 0.0};
  int ring = (id - 1) / n_theta_ + 1;
  int slot = (id - 1) % n_theta_;
  return std::polar(ring_radius(ring), dth_ * slot);
}

int MetricGraph::snap(Complex z) const {
  double rho = std::abs(z);
  if (rho > radius_ + 0.5 * dr_)
    throw Error(Errc::domain, "point more than one cell outside the disk");
  long ring = std::lround(rho / dr_);
  if (ring <= 0) return 0;
  if (ring > n_r_) ring = n_r_;
  int slot = wrap_slot(
      static_cast<int>(std::lround(wrap_two_pi(std::arg(z)) / dth_)));
  return node_id(static_cast<int>(ring), slot);
}

double MetricGraph::ring_factor(int ring) const {
  if (ring < 1 || ring > n_r_)
    throw Error(Errc::parameter, "ring index out of range");
  return factor_[ring];
}

double MetricGraph::edge_weight(int lower_ring, int lower_slot, int di,
                                int dj) const {
  Complex z1 = std::polar(ring_radius(lower_ring), dth_ * lower_slot);
  Complex z2 =
      std::polar(ring_radius(lower_ring + di), dth_ * (lower_slot + dj));
  return phi_length(qd_, {z1, z2});
}

double MetricGraph::center_weight(int slot) const {
  return center_[monomial_ ? 0 : slot];
}

std::vector<MetricGraph::Neighbor> MetricGraph::neighbors(int id) const {
  std::vector<Neighbor> out;
  for_each_neighbor(id, [&](int v, double w) { out.push_back({v, w}); });
  return out;
}

void MetricGraph::export_edge_list(std::ostream& os) const {
  for (int id = 0; id < node_count(); ++id)
    for_each_neighbor(id, [&](int v, double w) {
      if (id < v) os << id << ' ' << v << ' ' << format_double(w) << '\n';
    });
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

MetricGraph build_grid(const QuadraticDifferential& qd, int n_r, int n_theta,
                       int level) {
  if (n_r < 8) throw Error(Errc::parameter, "n_r must be at least 8");
  if (n_theta < 16) throw Error(Errc::parameter, "n_theta must be at least 16");
  if (level < 1 || level > 3)
    throw Error(Errc::parameter, "stencil level must be 1, 2 or 3");

  MetricGraph g;
  g.qd_ = qd;
  g.n_r_ = n_r;
  g.n_theta_ = n_theta;
  g.level_ = level;
  g.radius_ = qd.chart_radius();
  g.dr_ = g.radius_ / n_r;
  g.dth_ = kTwoPi / n_theta;
  g.monomial_ = qd.is_monomial();
  g.thin_radius_ = (level == 3 ? 0.025 : 0.04) * g.radius_;
  g.up_.assign(n_r + 1, {});
  g.down_.assign(n_r + 1, {});
  g.lateral_.assign(n_r + 1, 0.0);
  g.factor_.assign(n_r + 1, 0.0);

  const double target_gap =
      level == 2 ? 18.0 * kDeg : (level == 3 ? 10.0 * kDeg : kTwoPi);

  for (int ring = 1; ring <= n_r; ++ring) {
    const double r = g.ring_radius(ring);
    const bool thin = r < g.thin_radius_;
    const int headroom = n_r - ring;
    std::vector<MetricGraph::StencilEntry> entries;
    if (headroom >= 1) {
      entries.push_back({1, 0, 0.0});
      entries.push_back({1, 1, 0.0});
    }

    if (level >= 2 && headroom >= 1) {
      // candidate chords: coprime offsets up to 14 rings out and up to a
      // slot span wide enough to reach the coverage limit at this radius
      const double rho = r * g.dth_ / g.dr_;  // local arc/radial cell ratio
      const double reach =
          std::tan(thin ? kThinCoverage : (kPi / 2 - 0.8 * target_gap));
      int jmax = static_cast<int>(std::ceil(reach / rho)) + 2;
      jmax = std::clamp(jmax, 16, 96);
      jmax = std::min(jmax, std::max(4, n_theta / 4));
      const int imax = std::min(14, headroom);

      struct Cand {
        int di, dj;
        double angle;
      };
      std::vector<Cand> cands;
      for (int di = 1; di <= imax; ++di)
        for (int dj = 1; dj <= jmax; ++dj) {
          if (std::gcd(di, dj) != 1 || (di == 1 && dj == 1)) continue;
          cands.push_back({di, dj, entry_angle(r, g.dr_, g.dth_, di, dj)});
        }

      std::vector<double> dirs{0.0};
      for (const auto& e : entries)
        dirs.push_back(entry_angle(r, g.dr_, g.dth_, e.di, e.dj));
      std::sort(dirs.begin(), dirs.end());

      while (true) {
        Gap gap = max_gap(dirs, thin);
        if (gap.width() <= target_gap) break;
        const double mid = 0.5 * (gap.lo + gap.hi);
        const Cand* best = nullptr;
        double best_key = 1e300;
        for (const Cand& c : cands) {
          if (c.angle <= gap.lo || c.angle >= gap.hi) continue;
          double key = std::abs(c.angle - mid);
          if (key < best_key - 1e-15 ||
              (key < best_key + 1e-15 && best &&
               (c.di * c.di + c.dj * c.dj <
                best->di * best->di + best->dj * best->dj))) {
            best_key = key;
            best = &c;
          }
        }
        if (!best) break;  // nothing can split the widest gap
        entries.push_back({best->di, best->dj, 0.0});
        dirs.insert(std::upper_bound(dirs.begin(), dirs.end(), best->angle),
                    best->angle);
      }
    }

    if (level >= 2) {
      // Short-range packing block.  The greedy cover above closes direction
      // gaps with chords that can span many rings; displacements of only a
      // few cells cannot use them and would pay a wide-angle mix of unit
      // steps instead.  These short chords give every few-cell displacement
      // a near-direct edge.  Same-ring chords are capped so the developed
      // turn they subtend stays small, keeping a straight chart segment
      // within a fraction of the ring factor of the flat geodesic.
      static constexpr int kShort[][2] = {{1, 2}, {2, 1}, {1, 3}, {3, 1},
                                          {2, 3}, {3, 2}, {1, 4}, {3, 4}};
      for (auto [di, dj] : kShort) {
        if (di > headroom || dj > n_theta / 8) continue;
        bool present = false;
        for (const auto& e : entries)
          present = present || (e.di == di && e.dj == dj);
        if (!present) entries.push_back({di, dj, 0.0});
      }
      if (!thin) {
        const double dev_turn = 0.5 * (qd.order() + 2) * g.dth_;  // per slot
        for (int k : {2, 3, 5, 8, 13, 21}) {
          if (k * dev_turn > 0.45 || k > n_theta / 8) break;
          entries.push_back({0, k, 0.0});
        }
      }
    }

    std::sort(entries.begin(), entries.end(),
              [](const MetricGraph::StencilEntry& a,
                 const MetricGraph::StencilEntry& b) {
                return a.di != b.di ? a.di < b.di : a.dj < b.dj;
              });

    // weights (slot-independent for monomial forms: the metric density only
    // depends on |z|)
    if (g.monomial_) {
      for (auto& e : entries) {
        Complex z1(r, 0.0);
        Complex z2 = std::polar(g.ring_radius(ring + e.di), e.dj * g.dth_);
        e.weight = phi_length(qd, {z1, z2});
      }
      g.lateral_[ring] =
          phi_length(qd, {Complex(r, 0.0), std::polar(r, g.dth_)});
    }
    g.up_[ring] = std::move(entries);
  }
  // Measured metrication factor per ring.  Travel through a ring can use the
  // ring's own chords and, in mirrored (folded) direction, any chord from a
  // lower ring that crosses it; without the latter the outermost rings,
  // whose outward headroom starves the greedy cover, would be reported far
  // worse than the paths they actually carry.
  for (int ring = 1; ring <= n_r; ++ring) {
    const double r = g.ring_radius(ring);
    const bool thin = r < g.thin_radius_;
    std::vector<double> dirs{0.0};
    for (const auto& e : g.up_[ring])
      dirs.push_back(entry_angle(r, g.dr_, g.dth_, e.di, e.dj));
    for (int below = std::max(1, ring - 14); below < ring; ++below)
      for (const auto& e : g.up_[below])
        if (below + e.di >= ring)
          dirs.push_back(entry_angle(g.ring_radius(below), g.dr_, g.dth_, e.di,
                                     e.dj));
    std::sort(dirs.begin(), dirs.end());
    g.factor_[ring] = 1.0 / std::cos(0.5 * max_gap(dirs, thin).width()) - 1.0;
  }

  for (int ring = 1; ring <= n_r; ++ring)
    for (const auto& e : g.up_[ring])
      if (e.di > 0) g.down_[ring + e.di].push_back(e);

  if (g.monomial_) {
    g.center_ = {phi_length(qd, {Complex(0, 0), Complex(g.ring_radius(1), 0)})};
  } else {
    g.center_.resize(n_theta);
    for (int j = 0; j < n_theta; ++j)
      g.center_[j] = phi_length(
          qd, {Complex(0, 0), std::polar(g.ring_radius(1), g.dth_ * j)});
  }
  return g;
}

// ---------------------------------------------------------------------------
// Shortest paths
// ---------------------------------------------------------------------------

ShortestPathTree shortest_path_tree(const MetricGraph& g, Complex z) {
  ShortestPathTree tree;
  tree.source = g.snap(z);
  tree.dist.assign(g.node_count(), std::numeric_limits<double>::infinity());
  tree.parent.assign(g.node_count(), -1);
  using Item = std::pair<double, int>;  // ties settle lowest node id first
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  tree.dist[tree.source] = 0.0;
  pq.push({0.0, tree.source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > tree.dist[u]) continue;
    g.for_each_neighbor(u, [&](int v, double w) {
      double nd = d + w;
      if (nd < tree.dist[v]) {
        tree.dist[v] = nd;
        tree.parent[v] = u;
        pq.push({nd, v});
      }
    });
  }
  return tree;
}

namespace {

double weight_between(const MetricGraph& g, int u, int v) {
  double found = -1.0;
  g.for_each_neighbor(u, [&](int nb, double w) {
    if (nb == v && found < 0) found = w;
  });
  if (found < 0) throw Error(Errc::precondition, "nodes are not adjacent");
  return found;
}

}  // namespace

PathResult path_from_tree(const MetricGraph& g, const ShortestPathTree& tree,
                          Complex z2) {
  int t = g.snap(z2);
  PathResult out;
  for (int u = t; u != -1; u = tree.parent[u]) out.nodes.push_back(u);
  std::reverse(out.nodes.begin(), out.nodes.end());
  if (out.nodes.front() != tree.source)
    throw Error(Errc::precondition, "target not reached by this tree");
  // re-sum from the smaller-id end: the length is then exactly symmetric in
  // the endpoints regardless of which one seeded the search
  const auto& n = out.nodes;
  double len = 0.0;
  if (n.size() >= 2) {
    if (n.front() <= n.back())
      for (size_t k = 0; k + 1 < n.size(); ++k)
        len += weight_between(g, n[k], n[k + 1]);
    else
      for (size_t k = n.size() - 1; k >= 1; --k)
        len += weight_between(g, n[k], n[k - 1]);
  }
  out.length = len;
  out.points.reserve(n.size());
  for (int id : n) out.points.push_back(g.node_position(id));
  return out;
}

PathResult shortest_path(const MetricGraph& g, Complex z1, Complex z2) {
  return path_from_tree(g, shortest_path_tree(g, z1), z2);
}

// ---------------------------------------------------------------------------
// Discretization bound
// ---------------------------------------------------------------------------

double bound_for_pair(const MetricGraph& g, Complex z1, Complex z2) {
  const QuadraticDifferential& qd = g.differential();
  if (!qd.is_monomial())
    throw Error(Errc::unsupported_form,
                "discretization bound needs the monomial development");
  constexpr double kSlack = 1e-7;  // quadrature and snap-roundoff allowance

  const Complex p1 = g.node_position(g.snap(z1));
  const Complex p2 = g.node_position(g.snap(z2));
  const double rho1 = std::abs(p1), rho2 = std::abs(p2);
  if (rho1 == 0.0 || rho2 == 0.0) return kSlack;  // radial chains are exact

  const int n = qd.order();
  const double half = 0.5 * (n + 2);
  const double sa = std::sqrt(std::abs(qd.leading_coefficient()));
  auto develop = [&](double r) { return sa * std::pow(r, half) / half; };

  const double dmin_chart = std::min(wrap_two_pi(std::arg(p2) - std::arg(p1)),
                                     wrap_two_pi(std::arg(p1) - std::arg(p2)));
  const double sep = half * dmin_chart;  // developed angle between the points
  if (sep >= kPi) return kSlack;         // minimizer passes the node at 0

  const double w1 = develop(rho1), w2 = develop(rho2);
  const Complex q1(w1, 0.0), q2 = std::polar(w2, sep);
  const double chord = std::abs(q2 - q1);
  if (chord == 0.0) return kSlack;
  const double term_center = (w1 + w2) / chord - 1.0;

  // closest approach of the developed chord to the cone point
  double tproj = ((q1 - q2) != Complex(0, 0))
                     ? std::clamp((q1 * std::conj(q1 - q2)).real() /
                                      std::norm(q1 - q2),
                                  0.0, 1.0)
                     : 0.0;
  const double w_min = std::abs(q1 + tproj * (q2 - q1));
  const double r_min = std::pow(w_min * half / sa, 1.0 / half);

  const double r_lo = std::max(0.7 * r_min - 2.0 * g.radius() / g.n_r(),
                               g.radius() / g.n_r());
  const double r_hi =
      std::min(std::max(rho1, rho2) + 2.0 * g.radius() / g.n_r(), g.radius());
  double factor = 0.0;
  for (int ring = 1; ring <= g.n_r(); ++ring) {
    double r = g.ring_radius(ring);
    if (r >= r_lo && r <= r_hi) factor = std::max(factor, g.ring_factor(ring));
  }
  // the stencil leaves near-tangential directions uncovered below the
  // thin-ring radius; a minimizer only runs tangentially near its closest
  // approach, over a developed length of at most ~2.4 w_t with measured
  // direction gaps below 6.5%, which the 0.2 w_t charge covers with margin
  double correction = 0.0;
  if (r_min < g.thin_ring_radius())
    correction = 0.2 * develop(g.thin_ring_radius()) / chord;

  // Short-range displacement quantization.  The ring factor describes long
  // travel, where edge directions mix in arbitrary proportions; a path of
  // only a few cells must round those proportions to whole edges and can
  // overshoot the factor by a fixed number of cells.  Dense sampling across
  // stencil levels, orders and resolutions puts that overshoot below 0.37
  // basic cells, and below 2.2 (basic cells)^2 / chord once the chord spans
  // a few cells; 0.75 and 4.0 keep at least 1.8x margin on both regimes.
  double cell = 0.0;
  for (double rho : {rho1, rho2}) {
    int ring = std::clamp(
        static_cast<int>(std::lround(rho * g.n_r() / g.radius())), 1, g.n_r());
    const int base = g.node_id(ring, 0);
    for (const auto& nb : g.neighbors(base)) {
      if (nb.node == 0) continue;
      const int nb_ring = (nb.node - 1) / g.n_theta() + 1;
      const int nb_slot = (nb.node - 1) % g.n_theta();
      const int ds = std::min(nb_slot, g.n_theta() - nb_slot);
      if (std::abs(nb_ring - ring) <= 1 && ds <= 1)
        cell = std::max(cell, nb.weight);
    }
  }
  const double term_quant =
      std::min(0.75 * cell / chord, 4.0 * (cell / chord) * (cell / chord));

  return std::min(term_center, factor + correction + term_quant) + kSlack;
}

// ---------------------------------------------------------------------------
// Convergence study
// ---------------------------------------------------------------------------

std::vector<ConvergenceRow> convergence_study(const QuadraticDifferential& qd,
                                              Complex z1, Complex z2,
                                              const std::vector<GridSize>& sizes,
                                              int level) {
  if (sizes.size() < 3)
    throw Error(Errc::precondition, "need at least three resolutions");
  for (size_t k = 1; k < sizes.size(); ++k)
    if (sizes[k].n_r <= sizes[k - 1].n_r ||
        sizes[k].n_theta <= sizes[k - 1].n_theta)
      throw Error(Errc::precondition, "resolutions must be strictly increasing");

  std::optional<double> analytic;
  if (qd.is_monomial()) analytic = connect(qd, z1, z2).length;

  std::vector<ConvergenceRow> rows;
  for (const GridSize& size : sizes) {
    MetricGraph g = build_grid(qd, size.n_r, size.n_theta, level);
    ConvergenceRow row;
    row.size = size;
    row.oracle_length = shortest_path(g, z1, z2).length;
    row.analytic_length = analytic;
    if (analytic && *analytic > 0.0)
      row.relative_error = std::abs(row.oracle_length - *analytic) / *analytic;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace phigeo
