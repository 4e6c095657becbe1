#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "phigeo/qdiff.hpp"
#include "phigeo/types.hpp"

namespace phigeo {

// ---------------------------------------------------------------------------
// Brute-force oracle for the singular flat metric: shortest paths on a polar
// grid graph over the chart disk, with the singularity as a genuine node so
// paths through it are representable.  Edge weights are flat-metric lengths
// of straight chart segments, so every graph distance is the length of an
// admissible path and can only overestimate the continuum distance; the
// overestimate is bounded by the reported per-ring metrication factors.
// ---------------------------------------------------------------------------

struct GridSize {
  int n_r = 0;
  int n_theta = 0;
};

class MetricGraph {
 public:
  int n_r() const { return n_r_; }
  int n_theta() const { return n_theta_; }
  double radius() const { return radius_; }
  int stencil_level() const { return level_; }
  const QuadraticDifferential& differential() const { return qd_; }

  // node 0 is the singularity; ring i in [1, n_r], slot j in [0, n_theta)
  int node_count() const { return 1 + n_r_ * n_theta_; }
  int node_id(int ring, int slot) const;
  Complex node_position(int id) const;
  double ring_radius(int ring) const { return radius_ * ring / n_r_; }

  // nearest grid node; Errc::domain more than one cell outside the disk
  int snap(Complex z) const;

  // relative one-sided metrication overhead of travel through ring i
  // (1/cos(gap/2) - 1 for the largest angular gap between available edge
  // directions, counting both the ring's own chords and chords from lower
  // rings that cross it in mirrored direction; measured over directions up
  // to 50 degrees from radial on rings below the thin-ring radius, where
  // tangential coverage is delegated to the near-bottom term of
  // bound_for_pair)
  double ring_factor(int ring) const;
  double thin_ring_radius() const { return thin_radius_; }

  struct Neighbor {
    int node = 0;
    double weight = 0.0;
  };
  // all edges incident to `id`, deterministic order
  std::vector<Neighbor> neighbors(int id) const;

  // visit every edge incident to `id` as fn(other_node, weight), in a fixed
  // deterministic order (hot path of the shortest-path search)
  template <typename Fn>
  void for_each_neighbor(int id, Fn&& fn) const;

  // plain text edge list, one "node_id node_id weight" line per edge with
  // node_id ascending within the line; deterministic order
  void export_edge_list(std::ostream& os) const;

 private:
  friend MetricGraph build_grid(const QuadraticDifferential& qd, int n_r,
                                int n_theta, int level);

  struct StencilEntry {
    int di = 0, dj = 0;    // ring and slot offsets, dj >= 0; mirrored in use
    double weight = 0.0;   // monomial forms only (slot-independent)
  };

  MetricGraph() = default;

  // weight of the edge anchored at its lower-ring endpoint (ring, slot) with
  // signed slot offset dj; non-monomial forms integrate the segment directly
  double edge_weight(int lower_ring, int lower_slot, int di, int dj) const;
  double center_weight(int slot) const;
  int wrap_slot(int j) const {
    int m = j % n_theta_;
    return m < 0 ? m + n_theta_ : m;
  }

  QuadraticDifferential qd_{1.0, 0};
  int n_r_ = 0, n_theta_ = 0, level_ = 0;
  double radius_ = 0.0, dr_ = 0.0, dth_ = 0.0;
  double thin_radius_ = 0.0;
  bool monomial_ = true;
  std::vector<std::vector<StencilEntry>> up_;    // keyed by lower ring
  std::vector<std::vector<StencilEntry>> down_;  // same edges keyed by upper
  std::vector<double> lateral_;                  // (0,1) weight per ring
  std::vector<double> center_;                   // center-to-ring-1 per slot
  std::vector<double> factor_;                   // per-ring metrication
};

// Polar grid over the chart disk of `qd`.  Stencil levels trade edges for
// metrication error: level 1 is the plain radial/angular/diagonal
// neighborhood, levels 2 and 3 add longer chords per ring (greedy angular
// gap-cover) targeting ring factors of about 1.3% and 0.5%, plus short
// same-ring chords that pack short displacements tightly.
// Preconditions: n_r >= 8, n_theta >= 16, level in {1, 2, 3}.
MetricGraph build_grid(const QuadraticDifferential& qd, int n_r, int n_theta,
                       int level = 2);

struct ShortestPathTree {
  int source = 0;
  std::vector<double> dist;
  std::vector<int> parent;  // -1 at the source and for unreached nodes
};

// Dijkstra from the node nearest z, deterministic tie-breaking by node index.
ShortestPathTree shortest_path_tree(const MetricGraph& g, Complex z);

struct PathResult {
  double length = 0.0;
  std::vector<int> nodes;       // from the z1 node to the z2 node
  std::vector<Complex> points;  // node positions (exact 0 at the center)
};

// Extract one target's path from a tree.  The length is re-summed along the
// path starting from its smaller-node-id end, so it is exactly symmetric in
// the two endpoints.
PathResult path_from_tree(const MetricGraph& g, const ShortestPathTree& tree,
                          Complex z2);

PathResult shortest_path(const MetricGraph& g, Complex z1, Complex z2);

// Upper bound on the relative overestimate of shortest_path(g, z1, z2) over
// the continuum flat distance, from the grid's measured ring factors and the
// developed geometry of the pair: the minimum of the through-singularity
// detour bound (W1 + W2)/chord - 1 and the ring-factor bound over the radii
// the minimizer can visit, plus a near-bottom term when the minimizer dips
// below the thin-ring radius and a short-range quantization term from the
// basic cell size at the endpoints.  Monomial forms only
// (Errc::unsupported_form).
double bound_for_pair(const MetricGraph& g, Complex z1, Complex z2);

struct ConvergenceRow {
  GridSize size;
  double oracle_length = 0.0;
  std::optional<double> analytic_length;  // monomial forms only
  std::optional<double> relative_error;
};

// Oracle lengths for one pair across increasing resolutions; the analytic
// column is filled for monomial forms.  Preconditions: at least 3 sizes,
// strictly increasing in both n_r and n_theta.
std::vector<ConvergenceRow> convergence_study(const QuadraticDifferential& qd,
                                              Complex z1, Complex z2,
                                              const std::vector<GridSize>& sizes,
                                              int level = 2);

// -----------------------------------------------------------------------------

template <typename Fn>
void MetricGraph::for_each_neighbor(int id, Fn&& fn) const {
  if (id == 0) {
    for (int j = 0; j < n_theta_; ++j) fn(node_id(1, j), center_weight(j));
    return;
  }
  const int ring = (id - 1) / n_theta_ + 1;
  const int slot = (id - 1) % n_theta_;
  if (ring == 1) fn(0, center_weight(slot));
  // lateral edges, each anchored at its lower slot so both traversal
  // directions see bit-identical weights
  fn(node_id(ring, wrap_slot(slot + 1)),
     monomial_ ? lateral_[ring] : edge_weight(ring, slot, 0, 1));
  fn(node_id(ring, wrap_slot(slot - 1)),
     monomial_ ? lateral_[ring] : edge_weight(ring, wrap_slot(slot - 1), 0, 1));
  for (const StencilEntry& e : up_[ring]) {
    fn(node_id(ring + e.di, wrap_slot(slot + e.dj)),
       monomial_ ? e.weight : edge_weight(ring, slot, e.di, e.dj));
    if (e.dj != 0)
      fn(node_id(ring + e.di, wrap_slot(slot - e.dj)),
         monomial_ ? e.weight
         : e.di == 0
             // same-ring chords anchor at their lower slot, like the lateral
             // edges, so both traversal directions see bit-identical weights
             ? edge_weight(ring, wrap_slot(slot - e.dj), 0, e.dj)
             : edge_weight(ring, slot, e.di, -e.dj));
  }
  for (const StencilEntry& e : down_[ring]) {
    fn(node_id(ring - e.di, wrap_slot(slot - e.dj)),
       monomial_ ? e.weight
                 : edge_weight(ring - e.di, wrap_slot(slot - e.dj), e.di, e.dj));
    if (e.dj != 0)
      fn(node_id(ring - e.di, wrap_slot(slot + e.dj)),
         monomial_
             ? e.weight
             : edge_weight(ring - e.di, wrap_slot(slot + e.dj), e.di, -e.dj));
  }
}

}  // namespace phigeo
