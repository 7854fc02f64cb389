#pragma once

// Stage-m knot K_m as a closed polyline (n = 1 only).
//
// K_m is the tame part R_m (images of R = K minus the open bead arcs under
// reduced words of length <= m) together with the images of the stage-0 bead
// arcs sitting inside the stage-m beads. Consecutive copies are stitched at
// their shared bead-boundary crossing points.

#include <vector>

#include "wildknot/necklace.hpp"

namespace wildknot {

enum class VertexKind {
  Tame,      // on R_m, outside every stage-m bead
  Boundary,  // a thread crossing of a bead boundary
  BeadArc,   // inside a stage-m bead
};

struct KnotVertex {
  Vec point;
  Word copy;  // the vertex is copy(p) for a point p of K
  VertexKind kind = VertexKind::Tame;
  bool stitch = false;  // junction between copy w and copy w.i
};

struct KnotApprox {
  int stage = 0;
  std::vector<KnotVertex> vertices;  // closed: last connects to first
  std::size_t stitch_count = 0;

  std::vector<Vec> points() const;
  ThreadSample as_thread() const;
};

KnotApprox knot_approx(const Necklace& neck0, int m);

struct SimplicityReport {
  bool closed = false;  // consecutive vertices distinct, closing edge nonzero
  bool simple = false;  // non-adjacent edges stay apart by more than eps
  double min_edge = 0.0;
  double min_nonadjacent = 0.0;
  std::size_t first_bad_edge = 0;
};

SimplicityReport check_simple(const std::vector<Vec>& closed_polyline, double eps = 1e-12);

/// Symmetric Hausdorff distance between two finite vertex sets.
double hausdorff_distance(const std::vector<Vec>& a, const std::vector<Vec>& b);

double segment_distance(std::span<const double> p, std::span<const double> a, std::span<const double> b);
/// Closest distance between segments p1q1 and p2q2.
double segment_segment_distance(std::span<const double> p1, std::span<const double> q1, std::span<const double> p2,
                                std::span<const double> q2);
double distance_to_polyline(std::span<const double> x, const std::vector<Vec>& closed_polyline);

}  // namespace wildknot
