#pragma once

// q-fold cyclic branched cover over the trivial-model knot complement,
// represented navigationally: a point of the cover is a base point plus a
// sheet index mod q; crossing the cut page theta = theta_cut positively moves
// one sheet up.

#include <string>
#include <vector>

#include "wildknot/fibration.hpp"
#include "wildknot/knot_approx.hpp"

namespace wildknot {

class PathRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CoverConfig {
  int q = 2;
  TrivialModel model;
  int depth = 0;
  double theta_cut = 0.0;
  double knot_eps = 1e-6;
  double max_step = 1.5707963267948966;  // largest accepted |theta increment| per segment
  std::size_t max_iter = 64;
  std::vector<Vec> knot;  // stage-depth knot polyline (d = 3)

  CoverConfig(int q, TrivialModel model, int depth, double theta_cut = 0.0, std::size_t knot_samples = 96);
};

struct SheetPoint {
  ExtPoint base;
  int sheet = 0;
};

struct LiftedPath {
  std::vector<SheetPoint> vertices;
  std::vector<std::pair<std::size_t, int>> crossings;  // (segment index, sign)
  double winding = 0.0;  // total theta change / 2 pi

  int end_sheet() const { return vertices.back().sheet; }
};

int mod_q(long long s, int q);

/// Lifts an open polyline (repeat the first vertex to close a loop).
LiftedPath lift_path(const CoverConfig& cfg, const std::vector<Vec>& path, int start_sheet);

SheetPoint deck(const SheetPoint& p, int g, int q);

/// Total theta change along a polyline divided by 2 pi.
double theta_winding(const CoverConfig& cfg, const std::vector<Vec>& path);

struct BranchReport {
  Vec point;
  Word copy;
  double rho = 0.0;
  int attempts = 0;
  int winding = 0;
  int closes_after = 0;  // traversals until the lifted loop closes
  bool ok = false;
  std::string note;
};

/// Lifts a small meridian circle around knot vertex `vertex` of the
/// stage-depth knot (a tame vertex) and counts traversals until it closes.
BranchReport verify_branch(const CoverConfig& cfg, const KnotApprox& knot, std::size_t vertex,
                           std::size_t loop_samples = 64);

/// Meridian circle of radius rho around `point` normal to `tangent`.
std::vector<Vec> meridian_loop(std::span<const double> point, std::span<const double> tangent, double rho,
                               std::size_t samples);

struct EndsRow {
  Word address;
  int components = 0;
  bool decided = false;
};

struct EndsCensus {
  std::vector<EndsRow> rows;  // stage-depth beads
  // (stage, beads, decided beads, total components) for stages 0..depth
  std::vector<std::tuple<int, std::size_t, std::size_t, long long>> growth;
};

EndsCensus ends_census(const CoverConfig& cfg, int depth, std::size_t samples_per_axis = 11,
                       std::size_t angle_bins = 12, unsigned lanes = 1);

}  // namespace wildknot
