#pragma once

// Beaded necklaces and the stage-by-stage inverting process.
//
// A stage-0 necklace is a thread (a closed polyline in R^3, or nothing in
// combinatorial mode for higher dimensions) with k >= 3 disjoint beads. The
// beads' boundary spheres generate the Schottky group; the stage-m beads are
// the images of stage-0 beads under reduced words of length m, addressed by
// the word followed by the index of the stage-0 bead.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wildknot/geometry.hpp"

namespace wildknot {

class ConstructionFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RefinementRequired : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed sampled curve; the last point connects to the first.
class ThreadSample {
 public:
  ThreadSample() = default;
  // params default to i/N when empty.
  ThreadSample(std::size_t dim, std::vector<Vec> points, std::vector<double> params = {});

  static ThreadSample unit_circle(std::size_t samples);

  std::size_t dim() const { return dim_; }
  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }
  const std::vector<Vec>& points() const { return points_; }
  const std::vector<double>& params() const { return params_; }
  double max_segment() const { return max_segment_; }
  const Vec& point(std::size_t i) const { return points_[i % points_.size()]; }

  /// Nearest point on the polyline to x and its (interpolated) parameter.
  struct Projection {
    Vec point;
    double param = 0.0;
    double distance = 0.0;
    std::size_t segment = 0;
  };
  Projection project(std::span<const double> x) const;

 private:
  std::size_t dim_ = 0;
  std::vector<Vec> points_;
  std::vector<double> params_;
  double max_segment_ = 0.0;
};

struct Bead {
  Ball ball;
  Word address;
  std::optional<Word> parent;

  std::size_t stage() const { return address.size() - 1; }
};

struct Necklace {
  ThreadSample thread;            // K_m; empty in combinatorial mode
  std::vector<Bead> beads;        // sorted by address
  int stage = 0;
  std::vector<Sphere> generators; // boundaries of the stage-0 beads
  std::shared_ptr<const ThreadSample> base_thread;  // K_0

  std::size_t dim() const { return generators.empty() ? 0 : generators.front().dim(); }
  int k() const { return static_cast<int>(generators.size()); }
  bool combinatorial() const { return thread.empty(); }
};

/// Stage-0 necklace from a thread and k balls (ball j gets address (j)).
Necklace make_necklace(ThreadSample thread, const std::vector<Ball>& balls);
/// Combinatorial mode: no thread; any dimension >= 3.
Necklace make_necklace(const std::vector<Ball>& balls);

/// Unit circle in the z = 0 plane with k beads of the given radius centered
/// at angles 2*pi*j/k.
Necklace symmetric_necklace(int k, double radius, std::size_t samples = 96);

struct ThreadCrossing {
  std::size_t bead = 0;     // 0-based bead index
  std::size_t segment = 0;  // segment from point(segment) to point(segment + 1)
  double t = 0.0;           // position along the segment
  Vec point;
  bool entering = false;
};

/// Transversal crossings of the thread with each bead boundary, per bead in
/// thread order.
std::vector<std::vector<ThreadCrossing>> thread_crossings(const ThreadSample& thread,
                                                          const std::vector<Ball>& balls);

struct ValidationReport {
  bool disjoint = true;
  bool centers_on_thread = true;
  bool crossings = true;
  bool radius_bound = true;
  double min_gap = 0.0;                  // minimum pairwise gap minus tol
  std::vector<double> center_offsets;    // distance of each center to the thread
  std::vector<std::size_t> crossing_counts;
  std::vector<std::string> failures;

  bool ok() const { return disjoint && centers_on_thread && crossings && radius_bound; }
};

/// Stage-0 checks: (a) disjointness with margin tol, (b) centers within tol of
/// the thread, (c) exactly two boundary crossings per bead, and optionally
/// (d) radius < reach / 2. Thread checks are skipped in combinatorial mode.
ValidationReport validate(const Necklace& neck, double tol = kDefaultTolerance,
                          std::optional<double> thread_reach = std::nullopt);

/// Next stage of the inverting process.
Necklace build_stage(const Necklace& neck, double tol = kDefaultTolerance);

/// Beads of stages 0..depth in address-lexicographic (depth-first) order.
/// Each ball is computed from the stage-0 data, never from a stage necklace.
void for_each_bead(const Necklace& neck0, int depth, const std::function<void(const Bead&)>& visit);
std::vector<Bead> enumerate_beads(const Necklace& neck0, int depth);
/// Beads of exactly stage `depth`, same order.
std::vector<Bead> stage_beads(const Necklace& neck0, int depth);

struct LimitPoint {
  Vec center;
  double radius = 0.0;  // the limit point lies within this distance of center
  Word address;
};

std::vector<LimitPoint> limit_points(const Necklace& neck0, int depth, unsigned lanes = 1);

struct StageStats {
  int stage = 0;
  std::size_t count = 0;
  double max_radius = 0.0;
  double min_gap = 0.0;  // minimum distance between distinct bead boundaries
};

std::vector<StageStats> stage_statistics(const Necklace& neck0, int depth);

/// Exact minimum pairwise gap of a ball set (sweep over x-extent).
double min_pairwise_gap(const std::vector<Ball>& balls);

/// Beads auto-centered at thread parameters with the largest radius that
/// passes validation, shrunk by `safety`.
std::vector<Ball> place_beads(const ThreadSample& thread, const std::vector<double>& params,
                              double tol = kDefaultTolerance, double safety = 0.9);

// Dimension of the limit set from the bead-radius partition function.
struct DimensionEstimate {
  double s_hat = 0.0;
  std::vector<std::pair<int, double>> per_depth;
  bool converged = false;
};

class EstimationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves sum over stage-m beads of (diameter / D0)^s = 1 for each depth m,
/// where D0 is the largest stage-0 bead diameter.
DimensionEstimate dimension_estimate(const Necklace& neck0, const std::vector<int>& depths,
                                     double convergence = 1e-2);

/// Partition-function root for an explicit set of normalized diameters.
double partition_root(const std::vector<double>& diameters, double upper);

// Address-level shadow of an equivalence between two necklaces.
struct EquivalenceCertificate {
  bool accepted = false;
  std::vector<int> sigma;  // sigma[j-1] = image letter of j
  int depth_checked = 0;
  std::size_t addresses_checked = 0;
  std::optional<Word> first_failure;
  std::string reason;

  Word relabel(const Word& w) const;
};

/// `bijection[j-1]` is the 1-based index in B of bead j of A.
EquivalenceCertificate transport_equivalence(const Necklace& a, const Necklace& b,
                                             const std::vector<int>& bijection, int depth = 4,
                                             double tol = kDefaultTolerance);

}  // namespace wildknot
